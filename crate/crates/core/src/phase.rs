//! Phase distribution, phase dispersion and Barnett–Pegg sine/cosine
//! fluctuation parameters.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::fock::{inner, StateVector, TruncationPolicy};
use crate::moments::{lattice_projection, lattice_raw_moment, MomentSource};
use crate::special::ln_factorial;
use crate::state::StateSpec;

/// Default number of grid points over [−π, π).
pub const DEFAULT_PHASE_POINTS: usize = 720;
/// Smallest ⟨Ŝ⟩² + ⟨Ĉ⟩² for which U and Q are reported.
pub const PHASE_DEFINED_THRESHOLD: f64 = 1e-14;

/// Sampled density over θ ∈ [−π, π) on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub theta: Vec<f64>,
    pub density: Vec<f64>,
    /// ∫ density dθ by composite Simpson over the closed period.
    pub integral_check: f64,
}

impl PhaseProfile {
    /// Build from samples of a density on [`phase_grid`]`(density.len())`.
    pub fn from_density(mut density: Vec<f64>) -> Self {
        let theta = phase_grid(density.len());
        for d in density.iter_mut() {
            // clip roundoff negatives
            if *d < 0.0 && *d > -1e-12 {
                *d = 0.0;
            }
        }
        let integral_check = periodic_simpson(&density);
        Self { theta, density, integral_check }
    }

    pub fn step(&self) -> f64 {
        2.0 * PI / self.theta.len() as f64
    }

    /// Trapezoid weights (uniform on a periodic grid).
    pub fn weights(&self) -> Vec<f64> {
        vec![self.step(); self.theta.len()]
    }

    /// ∫ e^{−iθ} P(θ) dθ by the periodic trapezoid rule.
    pub fn first_fourier_coefficient(&self) -> Complex64 {
        let h = self.step();
        self.theta
            .iter()
            .zip(&self.density)
            .map(|(&t, &p)| Complex64::from_polar(p * h, -t))
            .sum()
    }
}

/// θ_k = −π + 2πk/N for k = 0..N.
pub fn phase_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| -PI + 2.0 * PI * k as f64 / points as f64).collect()
}

/// Composite Simpson over one period; the endpoint θ = π repeats θ = −π.
/// Falls back to the trapezoid rule for an odd number of points.
fn periodic_simpson(values: &[f64]) -> f64 {
    let n = values.len();
    if n == 0 {
        return 0.0;
    }
    let h = 2.0 * PI / n as f64;
    if n % 2 == 1 {
        return values.iter().sum::<f64>() * h;
    }
    let closed = |k: usize| values[k % n];
    let mut sum = closed(0) + closed(n);
    for k in 1..n {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * closed(k);
    }
    sum * h / 3.0
}

/// P(θ) = |Σ_n c_n e^{−inθ}|² / 2π on an N-point grid.
pub fn phase_distribution(s: &StateVector, points: usize) -> PhaseProfile {
    let grid = phase_grid(points);
    let density = grid.iter().map(|&t| phase_density(s.amplitudes(), t)).collect();
    PhaseProfile::from_density(density)
}

fn phase_density(amplitudes: &[Complex64], theta: f64) -> f64 {
    // Horner in z = e^{−iθ}
    let z = Complex64::from_polar(1.0, -theta);
    let sum = amplitudes.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    sum.norm_sqr() / (2.0 * PI)
}

/// P(θ) from the double-sum closed form of the displaced-Fock family.
pub fn phase_distribution_closed_form(spec: &StateSpec, theta: f64) -> Result<f64> {
    let (k, q, n) = lattice(spec, "phase_distribution_closed_form")?;
    let alpha = spec.effective_alpha();
    let max_terms = TruncationPolicy::default().max_dim;
    let norm_sqr = lattice_raw_moment(alpha, n, k, q, 0, 0, max_terms)?.re;
    let weight = |level: usize| (-0.5 * ln_factorial(level), -theta * level as f64);
    let amplitude = lattice_projection(alpha, n, k, q, weight, max_terms)?;
    Ok(amplitude.norm_sqr() / norm_sqr / (2.0 * PI))
}

pub(crate) fn lattice(spec: &StateSpec, operation: &'static str) -> Result<(usize, usize, usize)> {
    spec.dfs_lattice().ok_or(FockError::UnsupportedFamily { family: spec.family.name(), operation })
}

/// D = 1 − |∫ e^{−iθ} P(θ) dθ|² from the sampled profile.
pub fn phase_dispersion(s: &StateVector) -> f64 {
    let profile = phase_distribution(s, DEFAULT_PHASE_POINTS.max(2 * s.dim() + 2));
    dispersion_of(&profile)
}

pub fn dispersion_of(profile: &PhaseProfile) -> f64 {
    (1.0 - profile.first_fourier_coefficient().norm_sqr()).clamp(0.0, 1.0)
}

/// D = 1 − |Σ_n c_n c*_{n+1}|², the same quantity without a grid.
pub fn phase_dispersion_exact(s: &StateVector) -> f64 {
    let c = s.amplitudes();
    let overlap: Complex64 = c.windows(2).map(|w| w[0] * w[1].conj()).sum();
    (1.0 - overlap.norm_sqr()).clamp(0.0, 1.0)
}

/// Carruthers–Nieto parameters. `u` and `q` are `None` where the phase is
/// undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationTriple {
    pub u: Option<f64>,
    pub s: f64,
    pub q: Option<f64>,
}

impl FluctuationTriple {
    pub fn u(&self) -> Result<f64> {
        self.u.ok_or(FockError::PhaseUndefined { magnitude: 0.0 })
    }

    pub fn q(&self) -> Result<f64> {
        self.q.ok_or(FockError::PhaseUndefined { magnitude: 0.0 })
    }

    /// Antibunching indicated by U below one half.
    pub fn nonclassical(&self) -> Option<bool> {
        self.u.map(|u| u < 0.5)
    }
}

/// Expectations entering U, S and Q.
struct SineCosine {
    var_n: f64,
    mean_s: f64,
    mean_c: f64,
    var_s: f64,
    var_c: f64,
}

fn assemble(v: SineCosine) -> FluctuationTriple {
    let phase = v.mean_s.powi(2) + v.mean_c.powi(2);
    let s = v.var_n * v.var_s;
    let u = (phase > PHASE_DEFINED_THRESHOLD).then(|| v.var_n * (v.var_s + v.var_c) / phase);
    let q = (v.mean_c.powi(2) > PHASE_DEFINED_THRESHOLD).then(|| s / v.mean_c.powi(2));
    FluctuationTriple { u, s, q }
}

/// U, S, Q by applying the sine and cosine operators to the vector.
pub fn barnett_pegg_fluctuations(state: &StateVector) -> FluctuationTriple {
    let mut v = state.amplitudes().to_vec();
    v.resize(state.dim() + 2, Complex64::new(0.0, 0.0));
    let probs: Vec<f64> = v.iter().map(|c| c.norm_sqr()).collect();
    let mean_n: f64 = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let mean_n2: f64 = probs.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum();
    let scale = 1.0 / (2.0 * (mean_n + 0.5).sqrt());

    let lowered = shift_down(&v);
    let raised = shift_up(&v);
    let sine: Vec<Complex64> = lowered
        .iter()
        .zip(&raised)
        .map(|(a, b)| (a - b) * scale / Complex64::new(0.0, 1.0))
        .collect();
    let cosine: Vec<Complex64> = lowered.iter().zip(&raised).map(|(a, b)| (a + b) * scale).collect();
    let mean_s = inner(&v, &sine).re;
    let mean_c = inner(&v, &cosine).re;
    let sq = |w: &[Complex64]| w.iter().map(|c| c.norm_sqr()).sum::<f64>();
    assemble(SineCosine {
        var_n: mean_n2 - mean_n * mean_n,
        mean_s,
        mean_c,
        var_s: sq(&sine) - mean_s * mean_s,
        var_c: sq(&cosine) - mean_c * mean_c,
    })
}

/// a v, kept at the same length.
fn shift_down(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for n in 1..v.len() {
        out[n - 1] = v[n] * (n as f64).sqrt();
    }
    out
}

/// a† v, kept at the same length (the caller pads the top level).
fn shift_up(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for n in 0..v.len() - 1 {
        out[n + 1] = v[n] * ((n + 1) as f64).sqrt();
    }
    out
}

/// U, S, Q from normally ordered moments.
pub fn barnett_pegg_from_moments<S: MomentSource + ?Sized>(src: &S) -> Result<FluctuationTriple> {
    let a = src.moment(0, 1)?;
    let a2 = src.moment(0, 2)?;
    let n = src.mean_photon_number()?;
    let n2 = src.factorial_moment(2)? + n;
    let norm = n + 0.5;
    // (a ∓ a†)² = a² + a†² ∓ (2a†a + 1)
    let quad = 2.0 * a2.re;
    Ok(assemble(SineCosine {
        var_n: n2 - n * n,
        mean_s: a.im / norm.sqrt(),
        mean_c: a.re / norm.sqrt(),
        var_s: -(quad - 2.0 * n - 1.0) / (4.0 * norm) - a.im.powi(2) / norm,
        var_c: (quad + 2.0 * n + 1.0) / (4.0 * norm) - a.re.powi(2) / norm,
    }))
}
