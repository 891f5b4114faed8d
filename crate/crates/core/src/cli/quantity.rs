use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::interferometry::{linear_entropy, linear_entropy_closed_form, phase_estimation_uncertainty};
use crate::moments::moment_oracle;
use crate::phase::{barnett_pegg_fluctuations, phase_dispersion};
use crate::quasiprob::q_function;
use crate::state::StateSpec;
use crate::witness;
use crate::StateVector;

/// A named per-point output of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    MeanPhotonNumber,
    PhotonProbability(usize),
    MomentRe(usize, usize),
    MomentIm(usize, usize),
    MandelQ,
    Antibunching(usize),
    Hosps(usize),
    HongMandel(usize),
    Klyshko(usize),
    Vogel,
    AgarwalTara,
    PhaseDensity(f64),
    Dispersion,
    FluctuationU,
    FluctuationS,
    FluctuationQ,
    QFunction(f64, f64),
    LinearEntropy,
    LinearEntropyClosedForm,
    DeltaPhi(f64),
}

/// Registered quantity names with their argument lists.
pub const QUANTITY_NAMES: &[&str] = &[
    "mean_n",
    "p(n)",
    "moment_re(t,j)",
    "moment_im(t,j)",
    "mandel_q",
    "antibunching(l)",
    "d(k)",
    "hosps(l)",
    "hong_mandel(l)",
    "klyshko(m)",
    "vogel",
    "agarwal_tara",
    "phase_density(theta)",
    "dispersion",
    "fluct_u | U",
    "fluct_s | S",
    "fluct_q | Q",
    "q_function(re,im)",
    "linear_entropy",
    "linear_entropy_closed",
    "delta_phi(phi)",
];

impl Quantity {
    /// Value at one sweep point; `Ok(None)` marks an undefined quantity.
    pub fn evaluate(&self, spec: &StateSpec, s: &StateVector) -> Result<Option<f64>> {
        use Quantity::*;
        let v = match *self {
            MeanPhotonNumber => s.mean_photon_number(),
            PhotonProbability(n) => s.amplitudes().get(n).map_or(0.0, |c| c.norm_sqr()),
            MomentRe(t, j) => moment_oracle(s, t, j)?.re,
            MomentIm(t, j) => moment_oracle(s, t, j)?.im,
            MandelQ => match witness::mandel_q(s) {
                Ok(r) => r.value,
                Err(FockError::UndefinedWitness { .. }) => return Ok(None),
                Err(e) => return Err(e),
            },
            Antibunching(l) => witness::antibunching_d(s, l)?.value,
            Hosps(l) => witness::hosps(s, l)?.value,
            HongMandel(l) => witness::hong_mandel_squeezing(s, l)?.value,
            Klyshko(m) => witness::klyshko_b(s, m)?.value,
            Vogel => witness::vogel_det(s)?.value,
            AgarwalTara => witness::agarwal_tara_a3(s)?.value,
            PhaseDensity(theta) => {
                let z = Complex64::from_polar(1.0, -theta);
                let sum = s.amplitudes().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
                sum.norm_sqr() / (2.0 * std::f64::consts::PI)
            }
            Dispersion => phase_dispersion(s),
            FluctuationU => return Ok(barnett_pegg_fluctuations(s).u),
            FluctuationS => barnett_pegg_fluctuations(s).s,
            FluctuationQ => return Ok(barnett_pegg_fluctuations(s).q),
            QFunction(re, im) => q_function(s, Complex64::new(re, im)),
            LinearEntropy => linear_entropy(s),
            LinearEntropyClosedForm => linear_entropy_closed_form(spec)?,
            DeltaPhi(phi) => phase_estimation_uncertainty(s, phi)?,
        };
        Ok(Some(v))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Quantity::*;
        match self {
            MeanPhotonNumber => write!(f, "mean_n"),
            PhotonProbability(n) => write!(f, "p({n})"),
            MomentRe(t, j) => write!(f, "moment_re({t},{j})"),
            MomentIm(t, j) => write!(f, "moment_im({t},{j})"),
            MandelQ => write!(f, "mandel_q"),
            Antibunching(l) => write!(f, "antibunching({l})"),
            Hosps(l) => write!(f, "hosps({l})"),
            HongMandel(l) => write!(f, "hong_mandel({l})"),
            Klyshko(m) => write!(f, "klyshko({m})"),
            Vogel => write!(f, "vogel"),
            AgarwalTara => write!(f, "agarwal_tara"),
            PhaseDensity(t) => write!(f, "phase_density({t})"),
            Dispersion => write!(f, "dispersion"),
            FluctuationU => write!(f, "fluct_u"),
            FluctuationS => write!(f, "fluct_s"),
            FluctuationQ => write!(f, "fluct_q"),
            QFunction(re, im) => write!(f, "q_function({re},{im})"),
            LinearEntropy => write!(f, "linear_entropy"),
            LinearEntropyClosedForm => write!(f, "linear_entropy_closed"),
            DeltaPhi(phi) => write!(f, "delta_phi({phi})"),
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(raw: &str) -> std::result::Result<Self, String> {
        let raw = raw.trim();
        let (name, args) = match raw.find('(') {
            Some(open) => {
                let close = raw.rfind(')').filter(|&c| c == raw.len() - 1).ok_or_else(|| format!("unbalanced parentheses in `{raw}`"))?;
                let args: Vec<&str> = raw[open + 1..close].split(',').map(str::trim).collect();
                (raw[..open].trim(), args)
            }
            None => (raw, Vec::new()),
        };
        let want = |n: usize| -> std::result::Result<(), String> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("`{name}` takes {n} argument(s), got {}", args.len()))
            }
        };
        let int = |i: usize| -> std::result::Result<usize, String> {
            args[i].parse().map_err(|_| format!("`{}` is not a non-negative integer in `{raw}`", args[i]))
        };
        let real = |i: usize| -> std::result::Result<f64, String> {
            args[i].parse().map_err(|_| format!("`{}` is not a number in `{raw}`", args[i]))
        };
        use Quantity::*;
        let q = match name {
            "mean_n" => want(0).map(|_| MeanPhotonNumber)?,
            "p" => want(1).and_then(|_| int(0)).map(PhotonProbability)?,
            "moment_re" => {
                want(2)?;
                MomentRe(int(0)?, int(1)?)
            }
            "moment_im" => {
                want(2)?;
                MomentIm(int(0)?, int(1)?)
            }
            "mandel_q" => want(0).map(|_| MandelQ)?,
            "antibunching" => want(1).and_then(|_| int(0)).map(Antibunching)?,
            "d" => want(1).and_then(|_| int(0)).map(|k| Antibunching(k + 1))?,
            "hosps" => want(1).and_then(|_| int(0)).map(Hosps)?,
            "hong_mandel" => want(1).and_then(|_| int(0)).map(HongMandel)?,
            "klyshko" => want(1).and_then(|_| int(0)).map(Klyshko)?,
            "vogel" => want(0).map(|_| Vogel)?,
            "agarwal_tara" => want(0).map(|_| AgarwalTara)?,
            "phase_density" => want(1).and_then(|_| real(0)).map(PhaseDensity)?,
            "dispersion" => want(0).map(|_| Dispersion)?,
            "fluct_u" | "U" => want(0).map(|_| FluctuationU)?,
            "fluct_s" | "S" => want(0).map(|_| FluctuationS)?,
            "fluct_q" | "Q" => want(0).map(|_| FluctuationQ)?,
            "q_function" => {
                want(2)?;
                QFunction(real(0)?, real(1)?)
            }
            "linear_entropy" => want(0).map(|_| LinearEntropy)?,
            "linear_entropy_closed" => want(0).map(|_| LinearEntropyClosedForm)?,
            "delta_phi" => want(1).and_then(|_| real(0)).map(DeltaPhi)?,
            _ => return Err(format!("unknown quantity `{name}`; known: {}", QUANTITY_NAMES.join(", "))),
        };
        Ok(q)
    }
}

/// Split a comma-separated list, ignoring commas inside parentheses.
pub fn split_quantities(list: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in list.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(list[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(list[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}
