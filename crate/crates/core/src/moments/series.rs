//! Closed-form moment series ⟨a†ᶜ aᵃ⟩ per state family, assembled term by
//! term in log-magnitude and phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::special::{ln_binomial, ln_factorial, ln_factorial_signed, ln_pow, polar_term, SeriesSum};
use crate::state::{closed_form_norm_sqr, Family, StateSpec};

const LN_4: f64 = 1.386_294_361_119_890_6;

/// Polar decomposition of α used by every kernel.
#[derive(Clone, Copy)]
struct Amp {
    x: f64,
    ln_a: f64,
    theta: f64,
}

impl Amp {
    fn new(alpha: Complex64) -> Self {
        Self {
            x: alpha.norm_sqr(),
            ln_a: alpha.norm().ln(),
            theta: alpha.arg(),
        }
    }

    /// ln|α^{e}| with 0^0 = 1.
    fn ln_pow(&self, e: i64) -> f64 {
        ln_pow(self.ln_a, e)
    }
}

fn lnf(n: i64) -> Option<f64> {
    ln_factorial_signed(n)
}

/// Normalized moment ⟨a†ᶜ aᵃ⟩ evaluated from the family's series.
pub(crate) fn family_moment(spec: &StateSpec, c: usize, a: usize, max_terms: usize) -> Result<Complex64> {
    match spec.family {
        Family::Fock | Family::Coherent | Family::Dfs | Family::Padfs | Family::Psdfs | Family::Pasdfs => {
            let (k, q, n) = spec.dfs_lattice().expect("displaced-Fock family");
            let alpha = spec.effective_alpha();
            let num = lattice_raw_moment(alpha, n, k, q, c, a, max_terms)?;
            let den = lattice_raw_moment(alpha, n, k, q, 0, 0, max_terms)?;
            Ok(num / den.re)
        }
        Family::Ecs | Family::Vfecs | Family::Paecs => even_coherent_moment(spec, c, a, max_terms),
        Family::Binomial | Family::Vfbs | Family::Pabs => Ok(binomial_moment(spec, c, a)),
        Family::Kerr | Family::Vfks | Family::Paks => kerr_moment(spec, c, a, max_terms),
    }
}

/// Unnormalized ⟨a†ᵗ aʲ⟩ on `a^q a†^k D(α)|n⟩`; at `t = j = 0` this is the
/// squared norm of that vector.
pub(crate) fn lattice_raw_moment(
    alpha: Complex64,
    n: usize,
    k: usize,
    q: usize,
    t: usize,
    j: usize,
    max_terms: usize,
) -> Result<Complex64> {
    let amp = Amp::new(alpha);
    let (n, k, q, t, j) = (n as i64, k as i64, q as i64, t as i64, j as i64);
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..=n {
        for pp in 0..=n {
            let ln_outer = ln_binomial(n, p).unwrap() + ln_binomial(n, pp).unwrap()
                + amp.ln_pow(n - p)
                + amp.ln_pow(n - pp)
                - amp.x
                - ln_factorial(n as usize);
            let sign = if (2 * n - p - pp) % 2 == 0 { 0.0 } else { PI };
            let arg_outer = sign + amp.theta * (p - pp) as f64;

            let mut series = SeriesSum::new();
            for m in 0..max_terms as i64 {
                let e2 = m + p - pp - j + t;
                let parts = (
                    lnf(m + p + k),
                    lnf(m + p + k - j + t),
                    lnf(m),
                    lnf(e2),
                    lnf(m + p + k - q - j),
                );
                let (Some(f1), Some(f2), Some(f3), Some(f4), Some(f5)) = parts else {
                    series.skip();
                    continue;
                };
                let ln_mag = ln_outer + amp.ln_pow(m) + amp.ln_pow(e2) + f1 + f2 - f3 - f4 - f5;
                let arg = arg_outer + amp.theta * (m - e2) as f64;
                if series.push(polar_term(ln_mag, arg)) {
                    break;
                }
            }
            total += series.finish()?;
        }
    }
    Ok(total)
}

fn ln_norm_factor(spec: &StateSpec) -> Result<f64> {
    Ok(-closed_form_norm_sqr(spec)?.ln())
}

fn even_coherent_moment(spec: &StateSpec, j: usize, k: usize, max_terms: usize) -> Result<Complex64> {
    let amp = Amp::new(spec.alpha);
    let (j, k) = (j as i64, k as i64);
    let even = |v: i64| v.rem_euclid(2) == 0;
    let ln_pref = match spec.family {
        Family::Ecs => -amp.x - (2.0 * (1.0 + (-2.0 * amp.x).exp())).ln(),
        _ => ln_norm_factor(spec)?,
    };
    let start = if spec.family == Family::Vfecs { 1 } else { 0 };
    let swapped = spec.family == Family::Vfecs && k > j;

    let mut series = SeriesSum::new();
    for n in start..max_terms as i64 {
        // G_{n,j,k} vanishes unless both levels are even
        let structural = even(n) && even(n - k + j);
        let term = match spec.family {
            Family::Paecs => {
                let e = n - k + j;
                match lnf(n + 1 - k) {
                    Some(f) if e >= 0 => {
                        let ln_mag = ln_pref + amp.ln_pow(n) + amp.ln_pow(e)
                            + ((n + 1) as f64).ln()
                            + ((e + 1) as f64).ln()
                            - f
                            + LN_4;
                        Some((ln_mag, amp.theta * (n - e) as f64))
                    }
                    _ => None,
                }
            }
            _ if swapped => lnf(n - j).map(|f| {
                let e = n + k - j;
                let ln_mag = ln_pref + amp.ln_pow(n) + amp.ln_pow(e) - f + LN_4;
                (ln_mag, amp.theta * (e - n) as f64)
            }),
            _ => lnf(n - k).map(|f| {
                let e = n - k + j;
                let ln_mag = ln_pref + amp.ln_pow(n) + amp.ln_pow(e) - f + LN_4;
                (ln_mag, amp.theta * (n - e) as f64)
            }),
        };
        let Some((ln_mag, arg)) = term else {
            series.skip();
            continue;
        };
        let value = if structural { polar_term(ln_mag, arg) } else { Complex64::new(0.0, 0.0) };
        if series.push(value) {
            break;
        }
    }
    series.finish()
}

/// ln of the binomial weight I_{p,M,n,r,t}.
fn ln_binomial_weight(p: f64, m: i64, n: i64, r: i64, t: i64) -> Option<f64> {
    let f1 = lnf(m - n)?;
    let f2 = lnf(m - n + r - t)?;
    let ln_p = ln_pow(p.ln(), 2 * n - r + t);
    let ln_q = ln_pow((1.0 - p).ln(), 2 * m - 2 * n + r - t);
    Some(0.5 * (ln_p + ln_q - f1 - f2))
}

fn binomial_moment(spec: &StateSpec, t: usize, r: usize) -> Complex64 {
    let (p, m) = (spec.p, spec.cutoff as i64);
    let (t, r) = (t as i64, r as i64);
    let ln_m = ln_factorial(m as usize);
    let ln_pref = match spec.family {
        Family::Binomial => 0.0,
        Family::Vfbs => -(1.0 - (1.0 - p).powi(m as i32)).ln(),
        _ => -(1.0 + m as f64 * p).ln(),
    };
    let mut sum = 0.0;
    let start = if spec.family == Family::Vfbs { 1 } else { 0 };
    for n in start..=m {
        let ln_term = match spec.family {
            Family::Vfbs if r > t => {
                ln_binomial_weight(p, m, n, -r, -t).zip(lnf(n - t)).map(|(w, f)| w + ln_m - f)
            }
            Family::Pabs => (|| {
                let w = ln_binomial_weight(p, m, n, r, t)?;
                Some(
                    w + ln_m + lnf(n + 1)? + lnf(n + 1 - r + t)?
                        - lnf(n)?
                        - lnf(n + 1 - r)?
                        - lnf(n - r + t)?,
                )
            })(),
            _ => ln_binomial_weight(p, m, n, r, t).zip(lnf(n - r)).map(|(w, f)| w + ln_m - f),
        };
        if let Some(ln_term) = ln_term {
            if ln_term > f64::NEG_INFINITY {
                sum += (ln_term + ln_pref).exp();
            }
        }
    }
    Complex64::new(sum, 0.0)
}

fn kerr_moment(spec: &StateSpec, q: usize, s: usize, max_terms: usize) -> Result<Complex64> {
    let amp = Amp::new(spec.alpha);
    let chi = spec.chi;
    let (q, s) = (q as i64, s as i64);
    let ln_pref = match spec.family {
        Family::Kerr => -amp.x,
        _ => ln_norm_factor(spec)?,
    };
    let start = if spec.family == Family::Vfks { 1 } else { 0 };
    let swapped = spec.family == Family::Vfks && s > q;
    let kerr = |n: i64, q: i64, s: i64| chi * ((q - s) * (2 * n + q - s - 1)) as f64;

    let mut series = SeriesSum::new();
    for n in start..max_terms as i64 {
        let term = match spec.family {
            Family::Paks => (|| {
                let e = n - s + q;
                let ln_mag = ln_pref
                    + amp.ln_pow(n)
                    + amp.ln_pow(e)
                    + lnf(n + 1)?
                    + lnf(e + 1)?
                    - lnf(n)?
                    - lnf(e)?
                    - lnf(n + 1 - s)?;
                Some((ln_mag, amp.theta * (n - e) as f64 + kerr(n, q, s)))
            })(),
            _ if swapped => lnf(n - q).map(|f| {
                let e = n + s - q;
                let ln_mag = ln_pref + amp.ln_pow(n) + amp.ln_pow(e) - f;
                (ln_mag, amp.theta * (e - n) as f64 - kerr(n, -q, -s))
            }),
            _ => lnf(n - s).map(|f| {
                let e = n - s + q;
                let ln_mag = ln_pref + amp.ln_pow(n) + amp.ln_pow(e) - f;
                (ln_mag, amp.theta * (n - e) as f64 + kerr(n, q, s))
            }),
        };
        let Some((ln_mag, arg)) = term else {
            series.skip();
            continue;
        };
        if series.push(polar_term(ln_mag, arg)) {
            break;
        }
    }
    series.finish()
}

/// Σ_p C(n,p)(−α*)^{n−p} e^{−|α|²/2}/√n! Σ_m α^m (m+p+k)!/m! · w(L) with
/// L = m+p+k−q, where `weight(L)` returns (ln|w|, arg w). Projections of
/// `a^q a†^k D(α)|n⟩` onto phase and coherent states have this form.
pub(crate) fn lattice_projection<W>(
    alpha: Complex64,
    n: usize,
    k: usize,
    q: usize,
    weight: W,
    max_terms: usize,
) -> Result<Complex64>
where
    W: Fn(usize) -> (f64, f64),
{
    let amp = Amp::new(alpha);
    let (n, k, q) = (n as i64, k as i64, q as i64);
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..=n {
        let ln_outer = ln_binomial(n, p).unwrap() + amp.ln_pow(n - p) - 0.5 * amp.x - 0.5 * ln_factorial(n as usize);
        let sign = if (n - p) % 2 == 0 { 0.0 } else { PI };
        let arg_outer = sign - amp.theta * (n - p) as f64;
        let mut series = SeriesSum::new();
        for m in 0..max_terms as i64 {
            let level = m + p + k - q;
            if level < 0 {
                series.skip();
                continue;
            }
            let (ln_w, arg_w) = weight(level as usize);
            let ln_mag = ln_outer + amp.ln_pow(m) + ln_factorial((m + p + k) as usize) - ln_factorial(m as usize) + ln_w;
            let arg = arg_outer + amp.theta * m as f64 + arg_w;
            if series.push(polar_term(ln_mag, arg)) {
                break;
            }
        }
        total += series.finish()?;
    }
    Ok(total)
}
