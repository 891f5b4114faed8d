use num_complex::Complex64;

use super::spec::{Family, StateSpec};
use crate::error::{FockError, Result};
use crate::fock::{raise, EDGE_PADDING, StateVector, TruncationPolicy};

/// Build a state by applying ladder operators and vacuum filtering to its
/// parent, independently of the closed-form coefficients.
pub fn build_by_composition(spec: &StateSpec, policy: &TruncationPolicy) -> Result<StateVector> {
    spec.validate()?;
    match spec.family {
        Family::Fock => StateVector::fock(spec.n, spec.n + 1),
        Family::Coherent => coherent_by_recurrence(spec.alpha, policy),
        Family::Dfs | Family::Padfs | Family::Psdfs | Family::Pasdfs => {
            let (k, q, n) = spec.dfs_lattice().expect("displaced-Fock family");
            // spare levels keep the top of the subtracted vector exact
            let parent = displaced_by_ladder(spec.alpha, n, q + EDGE_PADDING, policy)?;
            let (added, _) = parent.apply_create(k, policy)?;
            let (out, _) = added.apply_annihilate(q)?;
            Ok(out)
        }
        Family::Ecs | Family::Vfecs | Family::Paecs => {
            let plus = coherent_by_recurrence(spec.alpha, policy)?;
            let minus = coherent_by_recurrence(-spec.alpha, policy)?;
            let dim = plus.dim().max(minus.dim());
            let sum: Vec<Complex64> = plus
                .resized(dim)?
                .amplitudes()
                .iter()
                .zip(minus.resized(dim)?.amplitudes())
                .map(|(a, b)| a + b)
                .collect();
            let (ecs, _) = StateVector::from_amplitudes(sum, plus.tail_mass())?.normalize()?;
            derive(spec.family, ecs, policy)
        }
        Family::Binomial | Family::Vfbs | Family::Pabs => {
            let bs = binomial_by_recurrence(spec.p, spec.cutoff)?;
            derive(spec.family, bs, policy)
        }
        Family::Kerr | Family::Vfks | Family::Paks => {
            let cs = coherent_by_recurrence(spec.alpha, policy)?;
            let evolved: Vec<Complex64> = cs
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let n = n as f64;
                    c * Complex64::from_polar(1.0, -spec.chi * n * (n - 1.0))
                })
                .collect();
            let ks = StateVector::from_amplitudes(evolved, cs.tail_mass())?;
            derive(spec.family, ks, policy)
        }
    }
}

/// Apply the family's engineering step (none, vacuum filtering, or one
/// photon addition) to a parent state.
fn derive(family: Family, parent: StateVector, policy: &TruncationPolicy) -> Result<StateVector> {
    match family {
        Family::Vfecs | Family::Vfbs | Family::Vfks => {
            let mut amps = parent.amplitudes().to_vec();
            amps[0] = Complex64::new(0.0, 0.0);
            let (out, _) = StateVector::from_amplitudes(amps, parent.tail_mass())?.normalize()?;
            Ok(out)
        }
        Family::Paecs | Family::Pabs | Family::Paks => Ok(parent.apply_create(1, policy)?.0),
        _ => Ok(parent),
    }
}

/// Coherent state from the amplitude recurrence c_{n+1} = c_n α/√(n+1).
pub fn coherent_by_recurrence(alpha: Complex64, policy: &TruncationPolicy) -> Result<StateVector> {
    coherent_with_spare_levels(alpha, 0, policy)
}

fn coherent_with_spare_levels(alpha: Complex64, spare: usize, policy: &TruncationPolicy) -> Result<StateVector> {
    let x = alpha.norm_sqr();
    let mut amps = Vec::with_capacity(policy.max_dim);
    let mut c = Complex64::new((-0.5 * x).exp(), 0.0);
    let mut probabilities = Vec::with_capacity(policy.max_dim);
    for n in 0..policy.max_dim {
        amps.push(c);
        probabilities.push(c.norm_sqr());
        c = c * alpha / ((n + 1) as f64).sqrt();
    }
    let (dim, tail) = policy.choose_dim(&probabilities)?;
    amps.truncate((dim + spare).min(policy.max_dim));
    let (out, _) = StateVector::from_amplitudes(amps, tail)?.normalize()?;
    Ok(out)
}

/// D(α)|n⟩ = (a† − α*)ⁿ |α⟩ / √n!, applied with raw ladder steps.
fn displaced_by_ladder(alpha: Complex64, n: usize, spare: usize, policy: &TruncationPolicy) -> Result<StateVector> {
    let cs = coherent_with_spare_levels(alpha, spare, policy)?;
    let target = cs.dim() + n;
    if target > policy.max_dim {
        return Err(FockError::TruncationOverflow { needed: target, max_dim: policy.max_dim });
    }
    let mut v = cs.amplitudes().to_vec();
    v.resize(target, Complex64::new(0.0, 0.0));
    for _ in 0..n {
        let up = raise(&v, 1, target);
        v = up.iter().zip(&v).map(|(u, w)| u - alpha.conj() * w).collect();
    }
    let (out, _) = StateVector::from_amplitudes(v, cs.tail_mass())?.normalize()?;
    Ok(out)
}

/// Binomial state from c_{n+1}/c_n = √((M−n)/(n+1) · p/(1−p)).
fn binomial_by_recurrence(p: f64, m: usize) -> Result<StateVector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); m + 1];
    if p == 1.0 {
        amps[m] = Complex64::new(1.0, 0.0);
    } else {
        let ratio = p / (1.0 - p);
        let mut c = (1.0 - p).powf(0.5 * m as f64);
        for (n, slot) in amps.iter_mut().enumerate() {
            *slot = Complex64::new(c, 0.0);
            c *= ((m - n) as f64 / (n + 1) as f64 * ratio).sqrt();
        }
    }
    let (out, _) = StateVector::from_amplitudes(amps, 0.0)?.normalize()?;
    Ok(out)
}
