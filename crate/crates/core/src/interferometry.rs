//! 50:50 beam-splitter outputs, entanglement potential and Mach–Zehnder
//! phase estimation.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::special::{binomial, ln_binomial, ln_factorial, SeriesSum};
use crate::state::{closed_form_norm_sqr, Family, StateSpec};
use crate::StateVector;

/// Smallest |d⟨Jz⟩/dφ| accepted by [`phase_estimation_uncertainty`].
pub const STATIONARY_THRESHOLD: f64 = 1e-14;

/// Amplitudes c_{j,m} over |j⟩_a ⊗ |m⟩_b.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub amplitudes: Array2<Complex64>,
}

impl TwoModeState {
    pub fn dims(&self) -> (usize, usize) {
        self.amplitudes.dim()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// |s⟩ ⊗ |0⟩ with room for `b_dim` levels in the second mode.
    pub fn product_with_vacuum(s: &StateVector, b_dim: usize) -> Self {
        let mut amplitudes = Array2::zeros((s.dim(), b_dim.max(1)));
        for (n, c) in s.amplitudes().iter().enumerate() {
            amplitudes[[n, 0]] = *c;
        }
        Self { amplitudes }
    }

    /// ρ_B = Tr_A |ψ⟩⟨ψ|.
    pub fn reduced_b(&self) -> Array2<Complex64> {
        let a = &self.amplitudes;
        a.t().dot(&a.mapv(|z| z.conj()))
    }

    /// ρ_A = Tr_B |ψ⟩⟨ψ|.
    pub fn reduced_a(&self) -> Array2<Complex64> {
        let a = &self.amplitudes;
        a.dot(&a.t().mapv(|z| z.conj()))
    }

    fn inner(&self, other: &Array2<Complex64>) -> Complex64 {
        self.amplitudes.iter().zip(other.iter()).map(|(x, y)| x.conj() * y).sum()
    }

    /// Jx ψ = (a†b + b†a)ψ/2, truncated at the current dimensions.
    fn apply_jx(&self) -> Array2<Complex64> {
        let (da, db) = self.dims();
        let c = &self.amplitudes;
        let mut out = Array2::zeros((da, db));
        for j in 0..da {
            for m in 0..db {
                let v = c[[j, m]];
                if v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                // a†b: (j, m) → (j+1, m−1)
                if m > 0 && j + 1 < da {
                    out[[j + 1, m - 1]] += v * (((j + 1) * m) as f64).sqrt() * 0.5;
                }
                // b†a: (j, m) → (j−1, m+1)
                if j > 0 && m + 1 < db {
                    out[[j - 1, m + 1]] += v * ((j * (m + 1)) as f64).sqrt() * 0.5;
                }
            }
        }
        out
    }

    /// Jz ψ = (a†a − b†b)ψ/2.
    fn apply_jz(&self) -> Array2<Complex64> {
        let mut out = self.amplitudes.clone();
        for ((j, m), v) in out.indexed_iter_mut() {
            *v *= 0.5 * (j as f64 - m as f64);
        }
        out
    }
}

/// Exact 50:50 split: c_n 2^{−n/2} √C(n,j) on |j, n−j⟩.
pub fn beam_splitter_split(s: &StateVector) -> TwoModeState {
    let d = s.dim();
    let mut amplitudes = Array2::zeros((d, d));
    for (n, c) in s.amplitudes().iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..=n {
            let ln_w = 0.5 * ln_binomial(n as i64, j as i64).unwrap() - 0.5 * n as f64 * std::f64::consts::LN_2;
            amplitudes[[j, n - j]] = c * ln_w.exp();
        }
    }
    TwoModeState { amplitudes }
}

fn purity(rho: &Array2<Complex64>) -> f64 {
    rho.iter().map(|z| z.norm_sqr()).sum()
}

/// ℒ = 1 − Tr ρ_B² of the beam-splitter output with vacuum in the other port.
pub fn linear_entropy(s: &StateVector) -> f64 {
    let out = beam_splitter_split(s);
    (1.0 - purity(&out.reduced_b())).max(0.0)
}

/// ℒ computed by tracing out mode B instead of mode A.
pub fn linear_entropy_trace_b(s: &StateVector) -> f64 {
    let out = beam_splitter_split(s);
    (1.0 - purity(&out.reduced_a())).max(0.0)
}

/// Closed-form ℒ for the even-coherent, binomial and Kerr families.
pub fn linear_entropy_closed_form(spec: &StateSpec) -> Result<f64> {
    spec.validate()?;
    let x = spec.alpha.norm_sqr();
    let sum = match spec.family {
        Family::Ecs | Family::Vfecs | Family::Paecs => even_coherent_sum(spec, x)?,
        Family::Binomial | Family::Vfbs | Family::Pabs => binomial_sum(spec),
        Family::Kerr | Family::Vfks | Family::Paks => kerr_sum(spec, x)?,
        _ => {
            return Err(FockError::UnsupportedFamily {
                family: spec.family.name(),
                operation: "linear_entropy_closed_form",
            })
        }
    };
    let prefactor = match spec.family {
        Family::Ecs => (-2.0 * x).exp() / (4.0 * (1.0 + (-2.0 * x).exp()).powi(2)),
        Family::Binomial => 1.0,
        Family::Kerr => (-2.0 * x).exp(),
        _ => closed_form_norm_sqr(spec)?.powi(-2),
    };
    Ok(1.0 - prefactor * sum)
}

/// Σ_{k1} C(n,k1) C(r, r+k1−m) = C(n+r, m).
fn inner_weight(n: usize, r: usize, m: usize, added: bool) -> f64 {
    if added {
        binomial((n + r + 2) as i64, (m + 1) as i64) / 2f64.powi((n + r + 2) as i32)
    } else {
        binomial((n + r) as i64, m as i64) / 2f64.powi((n + r) as i32)
    }
}

/// Visits (n, m, r) with m ≤ n + r shell by shell in n + r, stopping by
/// the series rule. `term` returns the complex summand or `None` when its
/// factorials vanish.
fn shell_sum<F>(vacuum_free: bool, max_shells: usize, mut term: F) -> Result<Complex64>
where
    F: FnMut(usize, usize, usize) -> Option<Complex64>,
{
    let mut series = SeriesSum::new();
    for total in 0..max_shells {
        let mut shell = Complex64::new(0.0, 0.0);
        for n in 0..=total {
            let r = total - n;
            for m in 0..=total {
                // fourth index s = n + r − m
                let s = total - m;
                if vacuum_free && (n == 0 || m == 0 || r == 0 || s == 0) {
                    continue;
                }
                if let Some(t) = term(n, m, r) {
                    shell += t;
                }
            }
        }
        if series.push(shell) {
            break;
        }
    }
    series.finish()
}

const MAX_SHELLS: usize = 600;

fn even_coherent_sum(spec: &StateSpec, x: f64) -> Result<f64> {
    let added = spec.family == Family::Paecs;
    let ln_x = x.ln();
    let even = |v: usize| v % 2 == 0;
    let sum = shell_sum(spec.family == Family::Vfecs, MAX_SHELLS, |n, m, r| {
        let s = n + r - m;
        if !(even(n) && even(m) && even(r) && even(s)) {
            return Some(Complex64::new(0.0, 0.0));
        }
        let power = if n + r == 0 { 0.0 } else { (n + r) as f64 * ln_x };
        let mut f = 16.0 * (power - ln_factorial(n) - ln_factorial(r)).exp();
        if added {
            f *= ((m + 1) * (s + 1)) as f64;
        }
        Some(Complex64::new(f * inner_weight(n, r, m, added), 0.0))
    })?;
    Ok(sum.re)
}

fn binomial_sum(spec: &StateSpec) -> f64 {
    let (p, big_m) = (spec.p, spec.cutoff);
    let added = spec.family == Family::Pabs;
    let vacuum_free = spec.family == Family::Vfbs;
    let ln_mf = ln_factorial(big_m);
    let ln_g = |n: usize, m: usize, r: usize| -> Option<f64> {
        let s = (n + r).checked_sub(m)?;
        let (a, b, c, d) = (
            big_m.checked_sub(n)?,
            big_m.checked_sub(m)?,
            big_m.checked_sub(r)?,
            big_m.checked_sub(s)?,
        );
        let ln_p = if n + r == 0 { 0.0 } else { 2.0 * (n + r) as f64 * p.ln() };
        let q_pow = 4 * big_m - 2 * n - 2 * r;
        let ln_q = if q_pow == 0 { 0.0 } else { q_pow as f64 * (1.0 - p).ln() };
        let inside = 4.0 * ln_mf + ln_p + ln_q - ln_factorial(a) - ln_factorial(b) - ln_factorial(c) - ln_factorial(d);
        Some(0.5 * inside - ln_factorial(n) - ln_factorial(r))
    };
    let mut sum = 0.0;
    let start = usize::from(vacuum_free);
    for n in start..=big_m {
        for r in start..=big_m {
            for m in start..=(n + r).min(big_m) {
                let s = n + r - m;
                if vacuum_free && s == 0 {
                    continue;
                }
                let Some(ln) = ln_g(n, m, r) else { continue };
                if ln == f64::NEG_INFINITY {
                    continue;
                }
                let mut g = ln.exp();
                if added {
                    g *= ((m + 1) * (s + 1)) as f64;
                }
                sum += g * inner_weight(n, r, m, added);
            }
        }
    }
    sum
}

fn kerr_sum(spec: &StateSpec, x: f64) -> Result<f64> {
    let added = spec.family == Family::Paks;
    let ln_x = x.ln();
    let chi = spec.chi;
    let sum = shell_sum(spec.family == Family::Vfks, MAX_SHELLS, |n, m, r| {
        let power = if n + r == 0 { 0.0 } else { (n + r) as f64 * ln_x };
        let phase = 2.0 * chi * (m as f64 - n as f64) * (m as f64 - r as f64);
        let mut h = Complex64::from_polar((power - ln_factorial(n) - ln_factorial(r)).exp(), phase);
        if added {
            h *= ((m + 1) * (n + r - m + 1)) as f64;
        }
        Some(h * inner_weight(n, r, m, added))
    })?;
    Ok(sum.re)
}

/// Input-port angular-momentum statistics for s ⊗ |0⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JzStatistics {
    pub mean_jz: f64,
    pub var_jz: f64,
    pub mean_jx: f64,
    pub var_jx: f64,
    pub cov_xz: f64,
    pub phi: f64,
}

impl JzStatistics {
    /// Input statistics by applying Jx and Jz to s ⊗ |0⟩.
    pub fn of_input(s: &StateVector, phi: f64) -> Self {
        let mut padded = s.amplitudes().to_vec();
        padded.push(Complex64::new(0.0, 0.0));
        let s = StateVector::from_amplitudes(padded, s.tail_mass()).expect("padded copy of a valid state");
        let psi = TwoModeState::product_with_vacuum(&s, 2);
        let jx = psi.apply_jx();
        let jz = psi.apply_jz();
        let mean_jx = psi.inner(&jx).re;
        let mean_jz = psi.inner(&jz).re;
        let sq = |v: &Array2<Complex64>| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let cross: Complex64 = jx.iter().zip(jz.iter()).map(|(a, b)| a.conj() * b).sum();
        Self {
            mean_jz,
            var_jz: (sq(&jz) - mean_jz * mean_jz).max(0.0),
            mean_jx,
            var_jx: (sq(&jx) - mean_jx * mean_jx).max(0.0),
            cov_xz: cross.re - mean_jx * mean_jz,
            phi,
        }
    }

    /// ⟨Jz⟩ after the interferometer.
    pub fn output_mean_jz(&self) -> f64 {
        self.phi.cos() * self.mean_jz - self.phi.sin() * self.mean_jx
    }

    /// d⟨Jz⟩/dφ.
    pub fn slope(&self) -> f64 {
        -self.phi.sin() * self.mean_jz - self.phi.cos() * self.mean_jx
    }

    /// (ΔJz)² after the interferometer.
    pub fn output_var_jz(&self) -> f64 {
        let (s, c) = self.phi.sin_cos();
        (c * c * self.var_jz + s * s * self.var_jx - 2.0 * s * c * self.cov_xz).max(0.0)
    }
}

/// Δφ = ΔJz / |d⟨Jz⟩/dφ| for input s ⊗ |0⟩.
pub fn phase_estimation_uncertainty(s: &StateVector, phi: f64) -> Result<f64> {
    let stats = JzStatistics::of_input(s, phi);
    let slope = stats.slope();
    if slope.abs() <= STATIONARY_THRESHOLD {
        return Err(FockError::StationaryPoint { derivative: slope });
    }
    Ok(stats.output_var_jz().sqrt() / slope.abs())
}
