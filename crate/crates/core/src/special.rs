//! Factorials, binomials and combinatorial numbers in log space, plus the
//! convergence rule shared by every infinite series in the crate.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{FockError, Result};

const TABLE_LEN: usize = 4096;
const EXACT_PRODUCT_LIMIT: usize = 170;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(TABLE_LEN);
        let mut product = 1.0_f64;
        for n in 0..TABLE_LEN {
            if n > 0 && n <= EXACT_PRODUCT_LIMIT {
                product *= n as f64;
            }
            if n <= EXACT_PRODUCT_LIMIT {
                table.push(product.ln());
            } else {
                table.push(ln_gamma_stirling(n as f64 + 1.0));
            }
        }
        table
    })
}

/// Stirling series for ln Γ(z); accurate to double precision for z > 170.
fn ln_gamma_stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// ln(n!).
pub fn ln_factorial(n: usize) -> f64 {
    match ln_factorial_table().get(n) {
        Some(v) => *v,
        None => ln_gamma_stirling(n as f64 + 1.0),
    }
}

/// ln(n!) for a signed argument; `None` when the argument is negative, which
/// the series treat as a vanishing term.
pub fn ln_factorial_signed(n: i64) -> Option<f64> {
    (n >= 0).then(|| ln_factorial(n as usize))
}

/// ln C(n, k), `None` when k lies outside 0..=n.
pub fn ln_binomial(n: i64, k: i64) -> Option<f64> {
    if n < 0 || k < 0 || k > n {
        return None;
    }
    Some(ln_factorial(n as usize) - ln_factorial(k as usize) - ln_factorial((n - k) as usize))
}

/// C(n, k) as a float, zero outside 0..=k..=n. Exact while the value fits
/// in the integer accumulator.
pub fn binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul(n as u128 - i) {
            Some(v) => acc = v / (i + 1),
            None => return ln_binomial(n, k as i64).map_or(0.0, f64::exp),
        }
    }
    acc as f64
}

/// k·ln|x| with the convention 0^0 = 1 (returns 0 when k = 0 even for x = 0).
pub fn ln_pow(ln_abs: f64, k: i64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_abs
    }
}

/// Rebuild a complex term from its log-magnitude and argument.
pub fn polar_term(ln_mag: f64, arg: f64) -> Complex64 {
    if ln_mag == f64::NEG_INFINITY {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar(ln_mag.exp(), arg)
    }
}

/// Double factorial (2i - 1)!! with (-1)!! = 1.
pub fn odd_double_factorial(i: usize) -> f64 {
    (1..=i).map(|k| (2 * k - 1) as f64).product()
}

const STIRLING_MAX: usize = 24;

fn stirling_table() -> &'static Vec<Vec<u64>> {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut s = vec![vec![0_u64; STIRLING_MAX + 1]; STIRLING_MAX + 1];
        s[0][0] = 1;
        for n in 1..=STIRLING_MAX {
            for k in 1..=n {
                s[n][k] = k as u64 * s[n - 1][k] + s[n - 1][k - 1];
            }
        }
        s
    })
}

/// Stirling number of the second kind S₂(n, k), exact for n ≤ 24.
pub fn stirling2(n: usize, k: usize) -> u64 {
    assert!(n <= STIRLING_MAX, "stirling2 table covers n <= {STIRLING_MAX}");
    if k > n {
        0
    } else {
        stirling_table()[n][k]
    }
}

/// Consecutive small terms required before a series is declared converged.
pub const SMALL_RUN: usize = 5;
/// Relative size below which a term counts as small.
pub const SMALL_RATIO: f64 = 1e-16;

/// Accumulates a factorially damped series and decides when to stop: the
/// series has converged once `SMALL_RUN` consecutive terms are each below
/// `SMALL_RATIO` times the accumulated magnitude.
#[derive(Debug, Clone)]
pub struct SeriesSum {
    sum: Complex64,
    magnitude: f64,
    small_run: usize,
    terms: usize,
}

impl Default for SeriesSum {
    fn default() -> Self {
        Self::new()
    }
}

impl SeriesSum {
    pub fn new() -> Self {
        Self {
            sum: Complex64::new(0.0, 0.0),
            magnitude: 0.0,
            small_run: 0,
            terms: 0,
        }
    }

    /// Add a term; returns `true` once the stopping rule is met.
    pub fn push(&mut self, term: Complex64) -> bool {
        let size = term.norm();
        self.sum += term;
        self.magnitude += size;
        self.terms += 1;
        if self.magnitude > 0.0 && size <= SMALL_RATIO * self.magnitude {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.converged()
    }

    /// Record a structurally vanishing term (negative factorial argument);
    /// it neither contributes nor counts toward convergence.
    pub fn skip(&mut self) {
        self.terms += 1;
    }

    pub fn converged(&self) -> bool {
        self.small_run >= SMALL_RUN
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Value after the caller ran out of terms: an identically zero series
    /// is accepted, anything else is a convergence failure.
    pub fn finish(&self) -> Result<Complex64> {
        if self.converged() || self.magnitude == 0.0 {
            Ok(self.sum)
        } else {
            Err(FockError::NonConvergence { terms: self.terms })
        }
    }
}
