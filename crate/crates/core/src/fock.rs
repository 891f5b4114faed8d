//! Truncated Fock-space states and ladder operators.
//!
//! A [`StateVector`] stores amplitudes `c_0 .. c_{D-1}` of a pure single-mode
//! state together with `tail_mass`, the probability that was discarded when
//! the (generally infinite) expansion was cut at `D` levels. Ladder operators
//! act directly on the amplitude vector in O(D).

use num_complex::Complex64;

use crate::error::{FockError, Result};

/// Norm below which a ladder application is treated as having annihilated
/// the state.
pub const ANNIHILATION_THRESHOLD: f64 = 1e-12;

/// Levels kept beyond the point where the tail drops below tolerance, so that
/// moments up to `MOMENT_ORDER_CAP` stay clear of the truncation edge.
pub const EDGE_PADDING: usize = 16;

/// Largest total order t + j accepted by the moment oracle by default.
pub const MOMENT_ORDER_CAP: usize = 16;

/// How a state expansion is cut to a finite basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub max_dim: usize,
    pub tail_tolerance: f64,
    /// Whether raising operators may grow the basis past its current size.
    pub allow_extension: bool,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_dim: 512,
            tail_tolerance: 1e-12,
            allow_extension: true,
        }
    }
}

impl TruncationPolicy {
    pub fn new(max_dim: usize, tail_tolerance: f64) -> Result<Self> {
        if max_dim < 1 {
            return Err(FockError::InvalidParameter {
                name: "max_dim",
                reason: "must be at least 1".into(),
            });
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(FockError::InvalidParameter {
                name: "tail_tolerance",
                reason: format!("{tail_tolerance} is outside (0, 1)"),
            });
        }
        Ok(Self {
            max_dim,
            tail_tolerance,
            allow_extension: true,
        })
    }

    pub fn without_extension(mut self) -> Self {
        self.allow_extension = false;
        self
    }

    /// Smallest dimension whose discarded tail of `probabilities` (not
    /// necessarily normalized) is within tolerance, plus [`EDGE_PADDING`].
    ///
    /// Returns the chosen dimension and the discarded (normalized) mass.
    pub fn choose_dim(&self, probabilities: &[f64]) -> Result<(usize, f64)> {
        let total: f64 = probabilities.iter().sum();
        if !(total > 0.0) {
            return Err(FockError::Annihilated { norm: total.max(0.0).sqrt() });
        }
        let len = probabilities.len();
        // tail[i] = mass at levels >= i
        let mut tail = vec![0.0; len + 1];
        for i in (0..len).rev() {
            tail[i] = tail[i + 1] + probabilities[i];
        }
        let cut = (0..=len)
            .find(|&i| tail[i] / total <= self.tail_tolerance)
            .unwrap_or(len);
        let last_nonzero = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        let finite_support = tail[last_nonzero + 1] == 0.0;
        let dim = if finite_support && cut == last_nonzero + 1 {
            // exact finite expansion: no padding needed
            cut.max(1)
        } else {
            (cut + EDGE_PADDING).max(1)
        };
        if dim > self.max_dim {
            if tail[self.max_dim.min(len)] / total > self.tail_tolerance {
                return Err(FockError::TruncationOverflow {
                    needed: dim,
                    max_dim: self.max_dim,
                });
            }
            let dim = self.max_dim;
            return Ok((dim, tail[dim.min(len)] / total));
        }
        Ok((dim, tail[dim.min(len)] / total))
    }
}

/// A pure single-mode state in a truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    tail_mass: f64,
}

impl StateVector {
    /// Wrap raw amplitudes. The vector is taken as-is; call [`normalize`]
    /// to rescale.
    ///
    /// [`normalize`]: StateVector::normalize
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(FockError::InvalidParameter {
                name: "dim",
                reason: "a state needs at least one basis level".into(),
            });
        }
        if !(0.0..1.0).contains(&tail_mass) {
            return Err(FockError::InvalidParameter {
                name: "tail_mass",
                reason: format!("{tail_mass} is outside [0, 1)"),
            });
        }
        Ok(Self {
            amplitudes,
            tail_mass,
        })
    }

    /// The number state |n⟩ in a basis of `dim` levels.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(FockError::Dimension { n, dim });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            tail_mass: 0.0,
        })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(0, dim)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Rescale to unit norm; returns the state and its previous norm.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let norm = self.norm_sqr().sqrt();
        if !(norm >= ANNIHILATION_THRESHOLD) {
            return Err(FockError::Annihilated { norm });
        }
        let amplitudes = self.amplitudes.iter().map(|c| c / norm).collect();
        Ok((
            Self {
                amplitudes,
                tail_mass: self.tail_mass,
            },
            norm,
        ))
    }

    /// Copy with the global phase fixed so the first nonzero amplitude is
    /// real and positive.
    pub fn with_real_leading_amplitude(&self) -> Self {
        let phase = self
            .amplitudes
            .iter()
            .find(|c| c.norm() > 0.0)
            .map(|c| c.conj() / c.norm())
            .unwrap_or(Complex64::new(1.0, 0.0));
        Self {
            amplitudes: self.amplitudes.iter().map(|c| c * phase).collect(),
            tail_mass: self.tail_mass,
        }
    }

    /// ⟨self|other⟩, treating missing levels as zero.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Copy with dimension changed to `dim`, padding with zeros or cutting.
    pub fn resized(&self, dim: usize) -> Result<Self> {
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(dim.max(1), Complex64::new(0.0, 0.0));
        let dropped: f64 = self.amplitudes.iter().skip(dim).map(|c| c.norm_sqr()).sum();
        Self::from_amplitudes(amplitudes, (self.tail_mass + dropped).min(MAX_TAIL))
    }

    /// p_n = |c_n|².
    pub fn photon_number_distribution(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// ⟨N⟩ from the photon-number distribution.
    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// Normalized â†ᵏ|s⟩ and the norm of the unnormalized result.
    pub fn apply_create(&self, k: usize, policy: &TruncationPolicy) -> Result<(Self, f64)> {
        let dim = self.dim();
        let target_dim = if policy.allow_extension {
            let grown = dim + k;
            if grown > policy.max_dim && k > 0 {
                return Err(FockError::TruncationOverflow {
                    needed: grown,
                    max_dim: policy.max_dim,
                });
            }
            grown
        } else {
            dim
        };
        let raised = raise(&self.amplitudes, k, target_dim);
        let kept: f64 = raised.iter().map(|c| c.norm_sqr()).sum();
        let full = raised_norm_sqr(&self.amplitudes, k);
        let pushed_out = (full - kept).max(0.0);
        if pushed_out > policy.tail_tolerance * full.max(f64::MIN_POSITIVE) {
            return Err(FockError::TruncationOverflow {
                needed: dim + k,
                max_dim: target_dim,
            });
        }
        let norm = kept.sqrt();
        if norm < ANNIHILATION_THRESHOLD {
            return Err(FockError::Annihilated { norm });
        }
        // tail weight grows by at most the largest ladder factor at the edge
        let edge_factor = falling_ratio(dim + k, k);
        let tail = (self.tail_mass * edge_factor / kept + pushed_out / kept).min(MAX_TAIL);
        let amplitudes = raised.into_iter().map(|c| c / norm).collect();
        Ok((
            Self {
                amplitudes,
                tail_mass: tail,
            },
            norm,
        ))
    }

    /// Normalized âᵏ|s⟩ and the norm of the unnormalized result.
    pub fn apply_annihilate(&self, k: usize) -> Result<(Self, f64)> {
        let lowered = lower(&self.amplitudes, k);
        let norm_sqr: f64 = lowered.iter().map(|c| c.norm_sqr()).sum();
        let norm = norm_sqr.sqrt();
        if !(norm >= ANNIHILATION_THRESHOLD) {
            return Err(FockError::Annihilated { norm });
        }
        let mut amplitudes: Vec<Complex64> = lowered.into_iter().map(|c| c / norm).collect();
        amplitudes.resize(self.dim(), Complex64::new(0.0, 0.0));
        let edge_factor = falling_ratio(self.dim() + k, k);
        let tail = (self.tail_mass * edge_factor / norm_sqr).min(MAX_TAIL);
        Ok((
            Self {
                amplitudes,
                tail_mass: tail,
            },
            norm,
        ))
    }

    /// Probability held in the top `levels` basis states.
    pub fn edge_mass(&self, levels: usize) -> f64 {
        let dim = self.dim();
        self.amplitudes[dim.saturating_sub(levels)..]
            .iter()
            .map(|c| c.norm_sqr())
            .sum()
    }
}

const MAX_TAIL: f64 = 1.0 - f64::EPSILON;

/// (n)(n-1)...(n-k+1) as a float.
fn falling_ratio(n: usize, k: usize) -> f64 {
    (0..k).map(|i| n.saturating_sub(i) as f64).product()
}

/// Σ conj(a_n) b_n over the common range.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// âᵏ applied to raw amplitudes; the result has `len - k` entries.
pub fn lower(amplitudes: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut current = amplitudes.to_vec();
    for _ in 0..k {
        if current.is_empty() {
            break;
        }
        current = (1..current.len())
            .map(|n| current[n] * (n as f64).sqrt())
            .collect();
    }
    current
}

/// â†ᵏ applied to raw amplitudes, keeping `target_dim` entries.
pub fn raise(amplitudes: &[Complex64], k: usize, target_dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); target_dim];
    for (n, c) in amplitudes.iter().enumerate() {
        let m = n + k;
        if m < target_dim {
            let factor: f64 = ((n + 1)..=m).map(|i| (i as f64).sqrt()).product();
            out[m] = c * factor;
        }
    }
    out
}

fn raised_norm_sqr(amplitudes: &[Complex64], k: usize) -> f64 {
    amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let factor: f64 = ((n + 1)..=(n + k)).map(|i| i as f64).product();
            c.norm_sqr() * factor
        })
        .sum()
}
