//! Normally ordered moments ⟨a†ᵗ aʲ⟩, by series and by direct ladder
//! application.

mod series;

pub(crate) use series::{lattice_projection, lattice_raw_moment};

use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::fock::{inner, lower, StateVector, TruncationPolicy, ANNIHILATION_THRESHOLD, MOMENT_ORDER_CAP};
use crate::state::{closed_form_norm_sqr, StateSpec};

/// Relative tolerance for series/oracle agreement.
pub const RELATIVE_TOLERANCE: f64 = 1e-8;
/// Absolute tolerance used instead when the value is below one in magnitude.
pub const ABSOLUTE_TOLERANCE: f64 = 1e-10;

/// Anything that can report ⟨a†ᵗ aʲ⟩.
pub trait MomentSource: Sync {
    fn moment(&self, t: usize, j: usize) -> Result<Complex64>;

    fn mean_photon_number(&self) -> Result<f64> {
        Ok(self.moment(1, 1)?.re)
    }

    /// ⟨a†ᵏ aᵏ⟩ as a real number.
    fn factorial_moment(&self, k: usize) -> Result<f64> {
        Ok(self.moment(k, k)?.re)
    }
}

impl MomentSource for StateVector {
    fn moment(&self, t: usize, j: usize) -> Result<Complex64> {
        moment_oracle(self, t, j)
    }
}

impl MomentSource for StateSpec {
    fn moment(&self, t: usize, j: usize) -> Result<Complex64> {
        moment_series(self, t, j)
    }
}

fn check_order(t: usize, j: usize) -> Result<()> {
    if t + j > MOMENT_ORDER_CAP {
        Err(FockError::InvalidOrder { witness: "moment", order: t + j })
    } else {
        Ok(())
    }
}

/// ⟨s|a†ᵗ aʲ|s⟩ = ⟨aᵗ s|aʲ s⟩ on the truncated vector.
pub fn moment_oracle(s: &StateVector, t: usize, j: usize) -> Result<Complex64> {
    check_order(t, j)?;
    if s.tail_mass() > 0.0 {
        let edge = s.edge_mass(t + j);
        if edge > TruncationPolicy::default().tail_tolerance {
            return Err(FockError::TruncationUnsafe {
                creation: t,
                annihilation: j,
                edge_mass: edge,
            });
        }
    }
    let amps = s.amplitudes();
    Ok(inner(&lower(amps, t), &lower(amps, j)))
}

/// ⟨a†ᵗ aʲ⟩ from the family's closed-form series.
pub fn moment_series(spec: &StateSpec, t: usize, j: usize) -> Result<Complex64> {
    moment_series_with(spec, t, j, TruncationPolicy::default().max_dim)
}

/// [`moment_series`] with an explicit bound on the number of series terms.
pub fn moment_series_with(spec: &StateSpec, t: usize, j: usize, max_terms: usize) -> Result<Complex64> {
    check_order(t, j)?;
    spec.validate()?;
    let norm_sqr = closed_form_norm_sqr(spec)?;
    if !(norm_sqr.sqrt() >= ANNIHILATION_THRESHOLD) {
        return Err(FockError::Annihilated { norm: norm_sqr.max(0.0).sqrt() });
    }
    series::family_moment(spec, t, j, max_terms)
}

/// Whether two moment evaluations agree under the module tolerance.
pub fn moments_agree(a: Complex64, b: Complex64) -> bool {
    let diff = (a - b).norm();
    let scale = a.norm().max(b.norm());
    if scale < 1.0 {
        diff <= ABSOLUTE_TOLERANCE
    } else {
        diff <= RELATIVE_TOLERANCE * scale
    }
}
