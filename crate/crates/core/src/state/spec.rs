use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{FockError, Result};

/// State families that can be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Fock,
    Coherent,
    /// Displaced Fock state D(α)|n⟩.
    Dfs,
    /// Photon-added displaced Fock state.
    Padfs,
    /// Photon-subtracted displaced Fock state.
    Psdfs,
    /// Photon-added-then-subtracted displaced Fock state.
    Pasdfs,
    /// Even coherent state.
    Ecs,
    /// Vacuum-filtered even coherent state.
    Vfecs,
    /// Single-photon-added even coherent state.
    Paecs,
    Binomial,
    Vfbs,
    Pabs,
    Kerr,
    Vfks,
    Paks,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::Fock,
        Family::Coherent,
        Family::Dfs,
        Family::Padfs,
        Family::Psdfs,
        Family::Pasdfs,
        Family::Ecs,
        Family::Vfecs,
        Family::Paecs,
        Family::Binomial,
        Family::Vfbs,
        Family::Pabs,
        Family::Kerr,
        Family::Vfks,
        Family::Paks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fock => "Fock",
            Family::Coherent => "Coherent",
            Family::Dfs => "DFS",
            Family::Padfs => "PADFS",
            Family::Psdfs => "PSDFS",
            Family::Pasdfs => "PASDFS",
            Family::Ecs => "ECS",
            Family::Vfecs => "VFECS",
            Family::Paecs => "PAECS",
            Family::Binomial => "Binomial",
            Family::Vfbs => "VFBS",
            Family::Pabs => "PABS",
            Family::Kerr => "Kerr",
            Family::Vfks => "VFKS",
            Family::Paks => "PAKS",
        }
    }

    /// Parameters this family reads.
    pub fn parameters(self) -> &'static [Param] {
        use Param::*;
        match self {
            Family::Fock => &[N],
            Family::Coherent | Family::Ecs | Family::Vfecs | Family::Paecs => {
                &[AlphaMag, AlphaPhase]
            }
            Family::Dfs => &[AlphaMag, AlphaPhase, N],
            Family::Padfs => &[AlphaMag, AlphaPhase, N, Added],
            Family::Psdfs => &[AlphaMag, AlphaPhase, N, Subtracted],
            Family::Pasdfs => &[AlphaMag, AlphaPhase, N, Added, Subtracted],
            Family::Binomial | Family::Vfbs | Family::Pabs => &[P, Cutoff],
            Family::Kerr | Family::Vfks | Family::Paks => &[AlphaMag, AlphaPhase, Chi],
        }
    }

    /// Families built by removing the vacuum or adding a photon; their
    /// photon-number distribution has a hole at n = 0.
    pub fn has_vacuum_hole(self) -> bool {
        matches!(
            self,
            Family::Vfecs | Family::Paecs | Family::Vfbs | Family::Pabs | Family::Vfks | Family::Paks
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim();
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(wanted))
            .or(match wanted.to_ascii_lowercase().as_str() {
                "bs" => Some(Family::Binomial),
                "ks" => Some(Family::Kerr),
                "cs" => Some(Family::Coherent),
                _ => None,
            })
            .ok_or_else(|| FockError::InvalidParameter {
                name: "family",
                reason: format!("unknown state family `{wanted}`"),
            })
    }
}

/// Named scalar parameters of a [`StateSpec`], used by parameter sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    AlphaMag,
    AlphaPhase,
    N,
    Added,
    Subtracted,
    P,
    Cutoff,
    Chi,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::AlphaMag,
        Param::AlphaPhase,
        Param::N,
        Param::Added,
        Param::Subtracted,
        Param::P,
        Param::Cutoff,
        Param::Chi,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Param::AlphaMag => "alpha.mag",
            Param::AlphaPhase => "alpha.phase",
            Param::N => "state.n",
            Param::Added => "state.added",
            Param::Subtracted => "state.subtracted",
            Param::P => "state.p",
            Param::Cutoff => "state.M",
            Param::Chi => "state.chi",
        }
    }

    pub fn is_count(self) -> bool {
        matches!(self, Param::N | Param::Added | Param::Subtracted | Param::Cutoff)
    }
}

impl FromStr for Param {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Param::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| FockError::InvalidParameter {
                name: "param",
                reason: format!("unknown parameter `{s}`"),
            })
    }
}

/// Family tag plus every parameter a family may read. Fields a family does
/// not use are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    pub family: Family,
    /// Displacement / coherent amplitude α = |α| e^{iθ₂}.
    pub alpha: Complex64,
    /// Fock parameter of displaced Fock states, or the photon number of a
    /// plain Fock state.
    pub n: usize,
    /// Photons added (u for PADFS, k for PASDFS).
    pub added: usize,
    /// Photons subtracted (v for PSDFS, q for PASDFS).
    pub subtracted: usize,
    /// Binomial probability.
    pub p: f64,
    /// Binomial cutoff M.
    pub cutoff: usize,
    /// Kerr coupling χ.
    pub chi: f64,
}

impl StateSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            alpha: Complex64::new(0.0, 0.0),
            n: 0,
            added: 0,
            subtracted: 0,
            p: 0.0,
            cutoff: 0,
            chi: 0.0,
        }
    }

    pub fn fock(n: usize) -> Self {
        Self { n, ..Self::new(Family::Fock) }
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self { alpha, ..Self::new(Family::Coherent) }
    }

    pub fn dfs(alpha: Complex64, n: usize) -> Self {
        Self { alpha, n, ..Self::new(Family::Dfs) }
    }

    pub fn padfs(alpha: Complex64, n: usize, added: usize) -> Self {
        Self { alpha, n, added, ..Self::new(Family::Padfs) }
    }

    pub fn psdfs(alpha: Complex64, n: usize, subtracted: usize) -> Self {
        Self { alpha, n, subtracted, ..Self::new(Family::Psdfs) }
    }

    pub fn pasdfs(alpha: Complex64, n: usize, added: usize, subtracted: usize) -> Self {
        Self { alpha, n, added, subtracted, ..Self::new(Family::Pasdfs) }
    }

    pub fn ecs(alpha: Complex64) -> Self {
        Self { alpha, ..Self::new(Family::Ecs) }
    }

    pub fn vfecs(alpha: Complex64) -> Self {
        Self { alpha, ..Self::new(Family::Vfecs) }
    }

    pub fn paecs(alpha: Complex64) -> Self {
        Self { alpha, ..Self::new(Family::Paecs) }
    }

    pub fn binomial(p: f64, cutoff: usize) -> Self {
        Self { p, cutoff, ..Self::new(Family::Binomial) }
    }

    pub fn vfbs(p: f64, cutoff: usize) -> Self {
        Self { p, cutoff, ..Self::new(Family::Vfbs) }
    }

    pub fn pabs(p: f64, cutoff: usize) -> Self {
        Self { p, cutoff, ..Self::new(Family::Pabs) }
    }

    pub fn kerr(alpha: Complex64, chi: f64) -> Self {
        Self { alpha, chi, ..Self::new(Family::Kerr) }
    }

    pub fn vfks(alpha: Complex64, chi: f64) -> Self {
        Self { alpha, chi, ..Self::new(Family::Vfks) }
    }

    pub fn paks(alpha: Complex64, chi: f64) -> Self {
        Self { alpha, chi, ..Self::new(Family::Paks) }
    }

    /// `(k, q, n)` of the equivalent photon-added-then-subtracted DFS, for
    /// every family in the displaced-Fock lattice.
    pub fn dfs_lattice(&self) -> Option<(usize, usize, usize)> {
        match self.family {
            Family::Fock | Family::Dfs => Some((0, 0, self.n)),
            Family::Coherent => Some((0, 0, 0)),
            Family::Padfs => Some((self.added, 0, self.n)),
            Family::Psdfs => Some((0, self.subtracted, self.n)),
            Family::Pasdfs => Some((self.added, self.subtracted, self.n)),
            _ => None,
        }
    }

    /// Displacement actually used by the family (zero for Fock states).
    pub fn effective_alpha(&self) -> Complex64 {
        match self.family {
            Family::Fock | Family::Binomial | Family::Vfbs | Family::Pabs => {
                Complex64::new(0.0, 0.0)
            }
            _ => self.alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let uses = self.family.parameters();
        if uses.contains(&Param::AlphaMag) && !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return Err(FockError::InvalidParameter {
                name: "alpha",
                reason: "must be finite".into(),
            });
        }
        if uses.contains(&Param::P) && !(0.0..=1.0).contains(&self.p) {
            return Err(FockError::InvalidParameter {
                name: "p",
                reason: format!("{} is outside [0, 1]", self.p),
            });
        }
        if uses.contains(&Param::Chi) && !self.chi.is_finite() {
            return Err(FockError::InvalidParameter {
                name: "chi",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::AlphaMag => self.alpha.norm(),
            Param::AlphaPhase => self.alpha.arg(),
            Param::N => self.n as f64,
            Param::Added => self.added as f64,
            Param::Subtracted => self.subtracted as f64,
            Param::P => self.p,
            Param::Cutoff => self.cutoff as f64,
            Param::Chi => self.chi,
        }
    }

    /// Set one parameter. The complex amplitude is kept as (magnitude,
    /// phase); a zero magnitude yields exactly α = 0 whatever the phase.
    pub fn set(&mut self, param: Param, value: f64, phase_hint: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(FockError::InvalidParameter {
                name: "value",
                reason: format!("{} must be finite", param.key()),
            });
        }
        let count = || -> Result<usize> {
            if value < 0.0 || value.fract() != 0.0 {
                Err(FockError::InvalidParameter {
                    name: "count",
                    reason: format!("{} = {value} is not a non-negative integer", param.key()),
                })
            } else {
                Ok(value as usize)
            }
        };
        match param {
            Param::AlphaMag => self.alpha = polar_alpha(value, phase_hint),
            Param::AlphaPhase => self.alpha = polar_alpha(self.alpha.norm(), value),
            Param::N => self.n = count()?,
            Param::Added => self.added = count()?,
            Param::Subtracted => self.subtracted = count()?,
            Param::P => self.p = value,
            Param::Cutoff => self.cutoff = count()?,
            Param::Chi => self.chi = value,
        }
        Ok(())
    }
}

/// α from magnitude and phase, exactly zero at the origin.
pub fn polar_alpha(magnitude: f64, phase: f64) -> Complex64 {
    if magnitude == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(magnitude, phase)
    }
}
