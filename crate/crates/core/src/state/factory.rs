use num_complex::Complex64;

use super::norms::{closed_form_norm_sqr, NORM_CHECK_TOLERANCE};
use super::spec::{Family, StateSpec};
use crate::error::{FockError, Result};
use crate::fock::{StateVector, TruncationPolicy, ANNIHILATION_THRESHOLD};
use crate::special::{ln_binomial, ln_factorial, ln_pow, polar_term};

/// Build a normalized state from its closed-form Fock expansion.
///
/// The raw expansion is normalized numerically; the resulting norm is then
/// checked against the closed-form normalization constant.
pub fn build_state(spec: &StateSpec, policy: &TruncationPolicy) -> Result<StateVector> {
    spec.validate()?;
    let raw = raw_coefficients(spec, policy)?;
    let numeric: f64 = raw.iter().map(|c| c.norm_sqr()).sum();
    if !(numeric.sqrt() >= ANNIHILATION_THRESHOLD) {
        return Err(FockError::Annihilated { norm: numeric.max(0.0).sqrt() });
    }
    let probabilities: Vec<f64> = raw.iter().map(|c| c.norm_sqr()).collect();
    let (dim, tail) = policy.choose_dim(&probabilities)?;

    let closed = closed_form_norm_sqr(spec)?;
    if (numeric - closed).abs() > NORM_CHECK_TOLERANCE * closed.abs().max(f64::MIN_POSITIVE) {
        return Err(FockError::NormalizationMismatch {
            family: spec.family.name(),
            numeric,
            closed,
        });
    }

    let scale = 1.0 / numeric.sqrt();
    let mut amplitudes: Vec<Complex64> = raw.into_iter().take(dim).map(|c| c * scale).collect();
    amplitudes.resize(dim, Complex64::new(0.0, 0.0));
    StateVector::from_amplitudes(amplitudes, tail)
}

/// Unnormalized closed-form coefficients over the construction window.
///
/// Finite-support families return exactly their support; the others are
/// evaluated up to `policy.max_dim`.
pub fn raw_coefficients(spec: &StateSpec, policy: &TruncationPolicy) -> Result<Vec<Complex64>> {
    let window = policy.max_dim;
    let alpha = spec.alpha;
    let x = alpha.norm_sqr();
    let ln_a = alpha.norm().ln();
    let theta = alpha.arg();
    let zero = Complex64::new(0.0, 0.0);

    let finite = |len: usize| -> Result<()> {
        if len > window {
            Err(FockError::TruncationOverflow { needed: len, max_dim: window })
        } else {
            Ok(())
        }
    };

    // α^n e^{-iχ n(n-1)} / √n! times e^{shift}
    let coherent_like = |n: usize, shift: f64, chi: f64| -> Complex64 {
        let ln_mag = ln_pow(ln_a, n as i64) - 0.5 * ln_factorial(n) + shift;
        let kerr = -chi * (n as f64) * (n as f64 - 1.0);
        polar_term(ln_mag, theta * n as f64 + kerr)
    };

    let coeffs = match spec.family {
        Family::Fock => {
            finite(spec.n + 1)?;
            let mut v = vec![zero; spec.n + 1];
            v[spec.n] = Complex64::new(1.0, 0.0);
            v
        }
        Family::Coherent | Family::Dfs | Family::Padfs | Family::Psdfs | Family::Pasdfs => {
            let (k, q, n) = spec.dfs_lattice().expect("displaced-Fock family");
            (0..window).map(|level| pasdfs_coefficient(alpha, n, k, q, level)).collect()
        }
        Family::Ecs => {
            let ln_amp = -0.5 * x - 0.5 * (2.0 * (1.0 + (-2.0 * x).exp())).ln();
            (0..window)
                .map(|n| if n % 2 == 0 { 2.0 * coherent_like(n, ln_amp, 0.0) } else { zero })
                .collect()
        }
        Family::Vfecs => (0..window)
            .map(|n| if n > 0 && n % 2 == 0 { 2.0 * coherent_like(n, 0.0, 0.0) } else { zero })
            .collect(),
        Family::Paecs => (0..window)
            .map(|n| {
                if n % 2 == 1 {
                    2.0 * coherent_like(n - 1, 0.5 * (n as f64).ln(), 0.0)
                } else {
                    zero
                }
            })
            .collect(),
        Family::Binomial | Family::Vfbs | Family::Pabs => {
            let m = spec.cutoff;
            let shifted = spec.family == Family::Pabs;
            finite(m + 1 + usize::from(shifted))?;
            let amp = |n: usize| binomial_amplitude(spec.p, m, n);
            match spec.family {
                Family::Binomial => (0..=m).map(|n| Complex64::new(amp(n), 0.0)).collect(),
                Family::Vfbs => (0..=m)
                    .map(|n| if n == 0 { zero } else { Complex64::new(amp(n), 0.0) })
                    .collect(),
                _ => std::iter::once(zero)
                    .chain((0..=m).map(|n| Complex64::new(amp(n) * ((n + 1) as f64).sqrt(), 0.0)))
                    .collect(),
            }
        }
        Family::Kerr => (0..window).map(|n| coherent_like(n, -0.5 * x, spec.chi)).collect(),
        Family::Vfks => (0..window)
            .map(|n| if n == 0 { zero } else { coherent_like(n, 0.0, spec.chi) })
            .collect(),
        Family::Paks => (0..window)
            .map(|n| {
                if n == 0 {
                    zero
                } else {
                    coherent_like(n - 1, 0.5 * (n as f64).ln(), spec.chi)
                }
            })
            .collect(),
    };
    Ok(coeffs)
}

fn binomial_amplitude(p: f64, m: usize, n: usize) -> f64 {
    let ln_c = ln_binomial(m as i64, n as i64).unwrap_or(f64::NEG_INFINITY);
    let ln_p = ln_pow(p.ln(), n as i64);
    let ln_q = ln_pow((1.0 - p).ln(), (m - n) as i64);
    (0.5 * (ln_c + ln_p + ln_q)).exp()
}

/// Coefficient of `a^q a†^k D(α)|n⟩` at Fock level `level`.
fn pasdfs_coefficient(alpha: Complex64, n: usize, k: usize, q: usize, level: usize) -> Complex64 {
    let x = alpha.norm_sqr();
    let ln_a = alpha.norm().ln();
    let theta = alpha.arg();
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..=n {
        // level = m + p + k - q
        let m = level as i64 + q as i64 - p as i64 - k as i64;
        if m < 0 {
            continue;
        }
        let m = m as usize;
        let ln_mag = ln_binomial(n as i64, p as i64).unwrap() - 0.5 * ln_factorial(n)
            + ln_pow(ln_a, (n - p) as i64)
            - 0.5 * x
            + ln_pow(ln_a, m as i64)
            + ln_factorial(m + p + k)
            - ln_factorial(m)
            - 0.5 * ln_factorial(level);
        // (-α*)^{n-p} α^m
        let sign = if (n - p) % 2 == 0 { 0.0 } else { std::f64::consts::PI };
        let arg = sign - theta * (n - p) as f64 + theta * m as f64;
        total += polar_term(ln_mag, arg);
    }
    total
}

/// Fock coefficients of the displaced number state `D(α)|n⟩` for levels
/// `0..dim`.
pub fn displacement_coefficients(alpha: Complex64, n: usize, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|level| pasdfs_coefficient(alpha, n, 0, 0, level)).collect()
}
