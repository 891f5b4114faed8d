use super::spec::{Family, StateSpec};
use crate::error::Result;
use crate::fock::TruncationPolicy;
use crate::moments::lattice_raw_moment;

/// Relative agreement required between the numerically summed norm and the
/// closed-form normalization.
pub const NORM_CHECK_TOLERANCE: f64 = 1e-9;

/// Closed-form squared norm of the unnormalized expansion produced by
/// [`raw_coefficients`](super::raw_coefficients), i.e. `1/N²`.
pub fn closed_form_norm_sqr(spec: &StateSpec) -> Result<f64> {
    let x = spec.alpha.norm_sqr();
    let p = spec.p;
    let m = spec.cutoff as f64;
    Ok(match spec.family {
        Family::Fock | Family::Coherent | Family::Dfs | Family::Ecs | Family::Binomial | Family::Kerr => 1.0,
        Family::Padfs | Family::Psdfs | Family::Pasdfs => {
            let (k, q, n) = spec.dfs_lattice().expect("displaced-Fock family");
            let max_terms = TruncationPolicy::default().max_dim;
            lattice_raw_moment(spec.alpha, n, k, q, 0, 0, max_terms)?.re
        }
        // 4(cosh x - 1) without cancellation at small x
        Family::Vfecs => 8.0 * (0.5 * x).sinh().powi(2),
        Family::Paecs => 4.0 * (x.cosh() + x * x.sinh()),
        Family::Vfbs => -(spec.cutoff as f64 * (-p).ln_1p()).exp_m1(),
        Family::Pabs => 1.0 + m * p,
        Family::Vfks => x.exp_m1(),
        Family::Paks => x.exp() * (1.0 + x),
    })
}
