//! Moment-based nonclassicality witnesses.

use std::fmt;

use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::fock::StateVector;
use crate::moments::MomentSource;
use crate::special::{binomial, odd_double_factorial, stirling2};

/// Highest order accepted by [`hosps`].
pub const HOSPS_MAX_ORDER: usize = 8;
/// Agreement required between the two Hong–Mandel evaluation paths.
pub const DUAL_PATH_TOLERANCE: f64 = 1e-8;
const DEGENERACY_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    MandelQ,
    Antibunching,
    Hosps,
    HongMandel,
    Klyshko,
    Vogel,
    AgarwalTara,
}

impl Witness {
    pub fn name(self) -> &'static str {
        match self {
            Witness::MandelQ => "mandel_q",
            Witness::Antibunching => "antibunching",
            Witness::Hosps => "hosps",
            Witness::HongMandel => "hong_mandel",
            Witness::Klyshko => "klyshko",
            Witness::Vogel => "vogel",
            Witness::AgarwalTara => "agarwal_tara",
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A witness value together with its classical bound. `nonclassical` is
/// the strict comparison `value < bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub witness: Witness,
    pub order: Option<usize>,
    pub value: f64,
    pub bound: f64,
    pub nonclassical: bool,
}

impl WitnessReport {
    fn new(witness: Witness, order: Option<usize>, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(FockError::UndefinedWitness {
                witness: witness.name(),
                reason: "value is not finite",
            });
        }
        Ok(Self { witness, order, value, bound: 0.0, nonclassical: value < 0.0 })
    }
}

/// Mandel Q_M = (⟨N²⟩ − ⟨N⟩² − ⟨N⟩)/⟨N⟩.
pub fn mandel_q<S: MomentSource + ?Sized>(src: &S) -> Result<WitnessReport> {
    let n = src.mean_photon_number()?;
    if n.abs() < 1e-300 {
        return Err(FockError::UndefinedWitness {
            witness: Witness::MandelQ.name(),
            reason: "mean photon number is zero",
        });
    }
    // ⟨N²⟩ − ⟨N⟩ = ⟨a†²a²⟩
    let value = (src.factorial_moment(2)? - n * n) / n;
    WitnessReport::new(Witness::MandelQ, None, value)
}

/// d(l−1) = ⟨a†ˡ aˡ⟩ − ⟨N⟩ˡ.
pub fn antibunching_d<S: MomentSource + ?Sized>(src: &S, l: usize) -> Result<WitnessReport> {
    if l < 2 {
        return Err(FockError::InvalidOrder { witness: Witness::Antibunching.name(), order: l });
    }
    let value = antibunching_value(src, l)?;
    WitnessReport::new(Witness::Antibunching, Some(l), value)
}

fn antibunching_value<S: MomentSource + ?Sized>(src: &S, l: usize) -> Result<f64> {
    let n = src.mean_photon_number()?;
    Ok(src.factorial_moment(l)? - n.powi(l as i32))
}

/// Stirling-weighted sum 𝒟_h(l−1) of antibunching witnesses d(f−1).
pub fn hosps<S: MomentSource + ?Sized>(src: &S, l: usize) -> Result<WitnessReport> {
    if !(2..=HOSPS_MAX_ORDER).contains(&l) {
        return Err(FockError::InvalidOrder { witness: Witness::Hosps.name(), order: l });
    }
    let n = src.mean_photon_number()?;
    let mut d = vec![0.0; l + 1];
    for (f, slot) in d.iter_mut().enumerate().skip(2) {
        *slot = antibunching_value(src, f)?;
    }
    let mut value = 0.0;
    for e in 0..=l {
        let outer = binomial(l as i64, e as i64) * if e % 2 == 0 { 1.0 } else { -1.0 } * n.powi((l - e) as i32);
        for (f, df) in d.iter().enumerate().take(e + 1).skip(1) {
            value += stirling2(e, f) as f64 * outer * df;
        }
    }
    WitnessReport::new(Witness::Hosps, Some(l), value)
}

/// 𝒟_h(l−1) through number central moments: (−1)ˡ times the excess of
/// ⟨(ΔN)ˡ⟩ over the Poisson central moment at the same mean.
pub fn hosps_from_number_moments(s: &StateVector, l: usize) -> Result<f64> {
    if !(2..=HOSPS_MAX_ORDER).contains(&l) {
        return Err(FockError::InvalidOrder { witness: Witness::Hosps.name(), order: l });
    }
    let p = s.photon_number_distribution();
    let mean: f64 = p.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let central: f64 = p.iter().enumerate().map(|(n, p)| (n as f64 - mean).powi(l as i32) * p).sum();
    let mut poisson = 0.0;
    if mean > 0.0 {
        let last = (mean + 40.0 * mean.sqrt() + 60.0) as usize;
        for n in 0..=last {
            let w = (n as f64 * mean.ln() - mean - crate::special::ln_factorial(n)).exp();
            poisson += w * (n as f64 - mean).powi(l as i32);
        }
    }
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * (central - poisson))
}

/// ⟨(ΔX)ˡ⟩ for X = (a + a†)/√2 from normally ordered moments.
pub fn quadrature_central_moment<S: MomentSource + ?Sized>(src: &S, l: usize) -> Result<f64> {
    let x_sum = src.moment(0, 1)? + src.moment(1, 0)?;
    let x_sum = x_sum.re;
    let mut total = Complex64::new(0.0, 0.0);
    for r in 0..=l {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let outer = sign * binomial(l as i64, r as i64) * x_sum.powi((l - r) as i32);
        for i in 0..=r / 2 {
            let pairing = odd_double_factorial(i) * binomial(r as i64, 2 * i as i64);
            for k in 0..=r - 2 * i {
                let moment = src.moment(k, r - 2 * i - k)?;
                total += moment * (outer * pairing * binomial((r - 2 * i) as i64, k as i64));
            }
        }
    }
    Ok(total.re * 2f64.powf(-(l as f64) / 2.0))
}

/// ⟨(ΔX)ˡ⟩ by applying X − ⟨X⟩ to the amplitude vector (even l only).
pub fn quadrature_central_moment_direct(s: &StateVector, l: usize) -> Result<f64> {
    if l % 2 == 1 {
        return Err(FockError::InvalidOrder { witness: Witness::HongMandel.name(), order: l });
    }
    let half = l / 2;
    let mut v = s.amplitudes().to_vec();
    v.resize(s.dim() + half.max(1), Complex64::new(0.0, 0.0));
    let mean = crate::fock::inner(&v, &quadrature(&v)).re;
    for _ in 0..half {
        let xv = quadrature(&v);
        v = xv.iter().zip(&v).map(|(a, b)| a - mean * b).collect();
    }
    Ok(v.iter().map(|c| c.norm_sqr()).sum())
}

/// X v with X = (a + a†)/√2 on a vector whose last level is empty.
fn quadrature(v: &[Complex64]) -> Vec<Complex64> {
    let d = v.len();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for n in 0..d {
        if n + 1 < d {
            out[n] += v[n + 1] * ((n + 1) as f64).sqrt();
            out[n + 1] += v[n] * ((n + 1) as f64).sqrt();
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    out.iter_mut().for_each(|c| *c *= s);
    out
}

/// Coherent-state value (l−1)!!/2^{l/2} of ⟨(ΔX)ˡ⟩ for even l.
pub fn quadrature_boundary(l: usize) -> f64 {
    odd_double_factorial(l / 2) / 2f64.powf(l as f64 / 2.0)
}

/// Hong–Mandel S(l), cross-checked between the moment expansion and direct
/// vector evaluation.
pub fn hong_mandel_squeezing(s: &StateVector, l: usize) -> Result<WitnessReport> {
    if l < 2 || l % 2 == 1 {
        return Err(FockError::InvalidOrder { witness: Witness::HongMandel.name(), order: l });
    }
    let series = quadrature_central_moment(s, l)?;
    let direct = quadrature_central_moment_direct(s, l)?;
    if (series - direct).abs() > DUAL_PATH_TOLERANCE * direct.abs().max(1.0) {
        return Err(FockError::PathMismatch { quantity: "quadrature central moment", first: series, second: direct });
    }
    hong_mandel_from_moment(direct, l)
}

/// Hong–Mandel S(l) from moments alone.
pub fn hong_mandel_series<S: MomentSource + ?Sized>(src: &S, l: usize) -> Result<WitnessReport> {
    if l < 2 || l % 2 == 1 {
        return Err(FockError::InvalidOrder { witness: Witness::HongMandel.name(), order: l });
    }
    hong_mandel_from_moment(quadrature_central_moment(src, l)?, l)
}

fn hong_mandel_from_moment(central: f64, l: usize) -> Result<WitnessReport> {
    let boundary = quadrature_boundary(l);
    WitnessReport::new(Witness::HongMandel, Some(l), (central - boundary) / boundary)
}

/// Klyshko B(m) = (m+2) p_m p_{m+2} − (m+1) p_{m+1}².
pub fn klyshko_b(s: &StateVector, m: usize) -> Result<WitnessReport> {
    if m + 2 >= s.dim() && s.tail_mass() > 0.0 {
        return Err(FockError::IndexOutOfRange { index: m + 2, dim: s.dim() });
    }
    let p = |n: usize| s.amplitudes().get(n).map_or(0.0, |c| c.norm_sqr());
    let value = (m + 2) as f64 * p(m) * p(m + 2) - (m + 1) as f64 * p(m + 1).powi(2);
    WitnessReport::new(Witness::Klyshko, Some(m), value)
}

/// Determinant of the 3×3 Vogel moment matrix.
pub fn vogel_det<S: MomentSource + ?Sized>(src: &S) -> Result<WitnessReport> {
    let one = Complex64::new(1.0, 0.0);
    let a = src.moment(0, 1)?;
    let ad = src.moment(1, 0)?;
    let n = src.moment(1, 1)?;
    let a2 = src.moment(0, 2)?;
    let ad2 = src.moment(2, 0)?;
    let m = [[one, a, ad], [ad, n, ad2], [a, a2, n]];
    let (det, scale) = det3(&m);
    if det.im.abs() > 1e-10 * scale.max(1.0) {
        log::warn!("Vogel determinant has imaginary part {:e}", det.im);
    }
    WitnessReport::new(Witness::Vogel, None, det.re)
}

/// Determinant and the sum of magnitudes of its six Leibniz terms.
fn det3(m: &[[Complex64; 3]; 3]) -> (Complex64, f64) {
    let terms = [
        m[0][0] * m[1][1] * m[2][2],
        m[0][1] * m[1][2] * m[2][0],
        m[0][2] * m[1][0] * m[2][1],
        -m[0][2] * m[1][1] * m[2][0],
        -m[0][0] * m[1][2] * m[2][1],
        -m[0][1] * m[1][0] * m[2][2],
    ];
    (terms.iter().sum(), terms.iter().map(|t| t.norm()).sum())
}

fn hankel_det(v: [f64; 5]) -> (f64, f64) {
    let c = |x: f64| Complex64::new(x, 0.0);
    let m = [[c(v[0]), c(v[1]), c(v[2])], [c(v[1]), c(v[2]), c(v[3])], [c(v[2]), c(v[3]), c(v[4])]];
    let (d, s) = det3(&m);
    (d.re, s)
}

/// Agarwal–Tara A₃ = det m⁽³⁾ / (det μ⁽³⁾ − det m⁽³⁾). When both
/// determinants vanish to roundoff the value is reported as 0.
pub fn agarwal_tara_a3<S: MomentSource + ?Sized>(src: &S) -> Result<WitnessReport> {
    let mut m = [1.0; 5];
    for (i, slot) in m.iter_mut().enumerate().skip(1) {
        *slot = src.factorial_moment(i)?;
    }
    let mu: [f64; 5] = std::array::from_fn(|j| m[1].powi(j as i32));
    let (det_m, scale_m) = hankel_det(m);
    let (det_mu, scale_mu) = hankel_det(mu);
    let det_m = if det_m.abs() <= DEGENERACY_RATIO * scale_m { 0.0 } else { det_m };
    let det_mu = if det_mu.abs() <= DEGENERACY_RATIO * scale_mu { 0.0 } else { det_mu };
    let value = if det_m == 0.0 {
        0.0
    } else if det_mu == det_m {
        return Err(FockError::DegenerateDenominator { witness: Witness::AgarwalTara.name() });
    } else {
        det_m / (det_mu - det_m)
    };
    if value < -1.0 - 1e-9 {
        log::warn!("A3 = {value} fell below -1");
    }
    WitnessReport::new(Witness::AgarwalTara, None, value)
}
