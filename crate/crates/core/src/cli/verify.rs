use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{FockError, Result};
use crate::fock::{StateVector, TruncationPolicy};
use crate::interferometry::{linear_entropy, linear_entropy_closed_form};
use crate::moments::{moment_oracle, moment_series, ABSOLUTE_TOLERANCE, RELATIVE_TOLERANCE};
use crate::phase::{phase_distribution, phase_distribution_closed_form, DEFAULT_PHASE_POINTS};
use crate::quasiprob::{q_function, q_function_closed_form, q_integral, PhaseSpaceGrid};
use crate::state::{build_by_composition, build_state, polar_alpha, sample_spec, Family, SampleRanges, StateSpec};
use crate::witness;

/// Implementation of 𝒟_h(l−1) under test.
pub type HospsFn = fn(&StateVector, usize) -> Result<f64>;

/// The library's HOSPS witness.
pub fn library_hosps(s: &StateVector, l: usize) -> Result<f64> {
    witness::hosps(s, l).map(|r| r.value)
}

/// Outcome of one verification category.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
    /// First unexpected error, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for c in &self.checks {
            write!(
                f,
                "{} {:<22} samples={:<5} max_abs={:.3e} max_rel={:.3e} tol={:e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.samples,
                c.max_abs_error,
                c.max_rel_error,
                c.tolerance
            )?;
            if let Some(msg) = &c.failure {
                write!(f, " ({msg})")?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "verification FAILED" })
    }
}

/// Running maxima over compared pairs. A pair passes when
/// |a − b| ≤ tol · max(1, |b|).
struct Tally {
    name: &'static str,
    tolerance: f64,
    abs: f64,
    rel: f64,
    scaled: f64,
    samples: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, abs: 0.0, rel: 0.0, scaled: 0.0, samples: 0, failure: None }
    }

    fn record(&mut self, got: f64, want: f64) {
        self.record_complex(Complex64::new(got, 0.0), Complex64::new(want, 0.0));
    }

    fn record_complex(&mut self, got: Complex64, want: Complex64) {
        let gap = (got - want).norm();
        let gap = if gap.is_nan() { f64::INFINITY } else { gap };
        self.abs = self.abs.max(gap);
        if want.norm() > self.tolerance {
            self.rel = self.rel.max(gap / want.norm());
        }
        self.scaled = self.scaled.max(gap / want.norm().max(1.0));
        self.samples += 1;
    }

    fn fail(&mut self, context: impl fmt::Display, err: impl fmt::Display) {
        if self.failure.is_none() {
            self.failure = Some(format!("{context}: {err}"));
        }
    }

    fn finish(self) -> Check {
        let passed = self.failure.is_none() && self.samples > 0 && self.scaled <= self.tolerance;
        Check {
            name: self.name,
            max_abs_error: self.abs,
            max_rel_error: self.rel,
            tolerance: self.tolerance,
            samples: self.samples,
            passed,
            failure: self.failure,
        }
    }
}

/// Parameter ranges sampled by the suite.
pub const VERIFY_RANGES: SampleRanges = SampleRanges { max_alpha: 3.0, max_n: 3, max_ops: 3, max_cutoff: 12, max_chi: 0.3 };

const ENTROPY_FAMILIES: [Family; 9] = [
    Family::Ecs,
    Family::Vfecs,
    Family::Paecs,
    Family::Binomial,
    Family::Vfbs,
    Family::Pabs,
    Family::Kerr,
    Family::Vfks,
    Family::Paks,
];

const LATTICE_FAMILIES: [Family; 6] = [Family::Coherent, Family::Dfs, Family::Padfs, Family::Psdfs, Family::Pasdfs, Family::Fock];

/// Run every category with the library HOSPS witness.
pub fn verify(seed: u64) -> VerificationReport {
    verify_with(seed, library_hosps)
}

/// Run every category, checking `hosps_impl` against the central-moment
/// identity.
pub fn verify_with(seed: u64, hosps_impl: HospsFn) -> VerificationReport {
    type Job = Box<dyn Fn(&mut ChaCha8Rng) -> Check + Send + Sync>;
    let jobs: Vec<Job> = vec![
        Box::new(state_composition),
        Box::new(moment_grid),
        Box::new(entropy),
        Box::new(move |rng| coherent_boundary(rng, hosps_impl)),
        Box::new(hong_mandel),
        Box::new(move |rng| hosps_identity(rng, hosps_impl)),
        Box::new(phase_closed_form),
        Box::new(q_closed_form),
        Box::new(normalization),
    ];
    let checks = jobs
        .par_iter()
        .enumerate()
        .map(|(i, job)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            job(&mut rng)
        })
        .collect();
    VerificationReport { seed, checks }
}

/// Random built states, skipping annihilated draws.
fn random_states(rng: &mut ChaCha8Rng, families: &[Family], count: usize, ranges: &SampleRanges) -> Vec<(StateSpec, StateVector)> {
    let policy = TruncationPolicy::default();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        let family = families[out.len() % families.len()];
        attempts += 1;
        let spec = sample_spec(family, ranges, rng);
        if let Ok(s) = build_state(&spec, &policy) {
            out.push((spec, s));
        }
    }
    out
}

fn state_composition(rng: &mut ChaCha8Rng) -> Check {
    let mut t = Tally::new("state_composition", 1e-10);
    let policy = TruncationPolicy::default();
    for family in Family::ALL {
        let mut compared = 0;
        let mut attempts = 0;
        while compared < 20 && attempts < 400 {
            attempts += 1;
            let spec = sample_spec(family, &VERIFY_RANGES, rng);
            match (build_state(&spec, &policy), build_by_composition(&spec, &policy)) {
                (Ok(a), Ok(b)) => {
                    let dim = a.dim().max(b.dim());
                    for i in 0..dim {
                        let x = a.amplitudes().get(i).copied().unwrap_or_default();
                        let y = b.amplitudes().get(i).copied().unwrap_or_default();
                        t.record_complex(x, y);
                    }
                    compared += 1;
                }
                (Err(FockError::Annihilated { .. }), Err(FockError::Annihilated { .. })) => {}
                (a, b) => {
                    t.fail(format!("{spec:?}"), format!("{:?} vs {:?}", a.err(), b.err()));
                    compared += 1;
                }
            }
        }
        if compared < 20 {
            t.fail(family.name(), "too few buildable samples");
        }
    }
    t.finish()
}

fn moment_grid(rng: &mut ChaCha8Rng) -> Check {
    let mut t = Tally::new("moment_series", RELATIVE_TOLERANCE);
    let states = random_states(rng, &Family::ALL, 210, &SampleRanges::default());
    for (spec, s) in &states {
        let (tp, jp) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        match (moment_series(spec, tp, jp), moment_oracle(s, tp, jp)) {
            (Ok(a), Ok(b)) => {
                // Small moments are compared absolutely.
                if b.norm() < 1.0 && (a - b).norm() <= ABSOLUTE_TOLERANCE {
                    t.record_complex(b, b);
                } else {
                    t.record_complex(a, b);
                }
            }
            (a, b) => t.fail(format!("{spec:?} t={tp} j={jp}"), format!("{:?} vs {:?}", a.err(), b.err())),
        }
    }
    t.finish()
}

fn entropy(rng: &mut ChaCha8Rng) -> Check {
    let mut t = Tally::new("linear_entropy", 1e-8);
    for family in ENTROPY_FAMILIES {
        for (spec, s) in random_states(rng, &[family], 5, &VERIFY_RANGES) {
            match linear_entropy_closed_form(&spec) {
                Ok(closed) => t.record(closed, linear_entropy(&s)),
                Err(e) => t.fail(format!("{spec:?}"), e),
            }
        }
    }
    t.finish()
}

fn coherent_boundary(rng: &mut ChaCha8Rng, hosps_impl: HospsFn) -> Check {
    let mut t = Tally::new("coherent_boundary", 1e-8);
    let policy = TruncationPolicy::default();
    for _ in 0..8 {
        let spec = StateSpec::coherent(polar_alpha(rng.gen_range(0.2..3.0), rng.gen_range(-3.1..3.1)));
        let s = match build_state(&spec, &policy) {
            Ok(s) => s,
            Err(e) => {
                t.fail(format!("{spec:?}"), e);
                continue;
            }
        };
        let mut values: Vec<Result<f64>> = vec![
            witness::mandel_q(&s).map(|r| r.value),
            witness::vogel_det(&s).map(|r| r.value),
            witness::agarwal_tara_a3(&s).map(|r| r.value),
        ];
        for l in 2..=4 {
            values.push(witness::antibunching_d(&s, l).map(|r| r.value));
            values.push(hosps_impl(&s, l));
        }
        for l in [2, 4, 6] {
            values.push(witness::hong_mandel_series(&s, l).map(|r| r.value));
        }
        for m in 0..=5 {
            values.push(witness::klyshko_b(&s, m).map(|r| r.value));
        }
        for v in values {
            match v {
                Ok(v) => t.record(v, 0.0),
                Err(e) => t.fail(format!("{spec:?}"), e),
            }
        }
    }
    t.finish()
}

fn hong_mandel(rng: &mut ChaCha8Rng) -> Check {
    let mut t = Tally::new("hong_mandel_dual_path", witness::DUAL_PATH_TOLERANCE);
    for (spec, s) in random_states(rng, &Family::ALL, 30, &SampleRanges::default()) {
        for l in [2, 4, 6] {
            match (witness::quadrature_central_moment(&s, l), witness::quadrature_central_moment_direct(&s, l)) {
                (Ok(a), Ok(b)) => t.record(a, b),
                (a, b) => t.fail(format!("{spec:?} l={l}"), format!("{:?} vs {:?}", a.err(), b.err())),
            }
        }
    }
    t.finish()
}

fn hosps_identity(rng: &mut ChaCha8Rng, hosps_impl: HospsFn) -> Check {
    let mut t = Tally::new("hosps_identity", 1e-8);
    for (spec, s) in random_states(rng, &Family::ALL, 30, &SampleRanges::default()) {
        for l in 2..=6 {
            match (hosps_impl(&s, l), witness::hosps_from_number_moments(&s, l)) {
                (Ok(a), Ok(b)) => t.record(a, b),
                (a, b) => t.fail(format!("{spec:?} l={l}"), format!("{:?} vs {:?}", a.err(), b.err())),
            }
        }
    }
    t.finish()
}

fn phase_closed_form(rng: &mut ChaCha8Rng) -> Check {
    let mut t = Tally::new("phase_closed_form", 1e-8);
    for (spec, s) in random_states(rng, &LATTICE_FAMILIES, 12, &SampleRanges::default()) {
        let profile = phase_distribution(&s, DEFAULT_PHASE_POINTS);
        for (theta, v) in profile.theta.iter().zip(&profile.density).step_by(37) {
            match phase_distribution_closed_form(&spec, *theta) {
                Ok(c) => t.record(*v, c),
                Err(e) => t.fail(format!("{spec:?}"), e),
            }
        }
    }
    t.finish()
}

fn q_closed_form(rng: &mut ChaCha8Rng) -> Check {
    let mut t = Tally::new("q_closed_form", 1e-8);
    for (spec, s) in random_states(rng, &LATTICE_FAMILIES, 12, &SampleRanges::default()) {
        for _ in 0..6 {
            let beta = polar_alpha(rng.gen_range(0.0..4.0), rng.gen_range(-3.1..3.1));
            match q_function_closed_form(&spec, beta) {
                Ok(c) => t.record(q_function(&s, beta), c),
                Err(e) => t.fail(format!("{spec:?}"), e),
            }
        }
    }
    t.finish()
}

/// Unit norm of built states, and unit mass of P_θ and Q.
fn normalization(rng: &mut ChaCha8Rng) -> Check {
    let mut t = Tally::new("normalization", 1e-6);
    let mut norm_gap: f64 = 0.0;
    let mut phase_gap: f64 = 0.0;
    for (i, (spec, s)) in random_states(rng, &Family::ALL, 30, &SampleRanges::default()).into_iter().enumerate() {
        norm_gap = norm_gap.max((s.norm_sqr() - 1.0).abs());
        phase_gap = phase_gap.max((phase_distribution(&s, DEFAULT_PHASE_POINTS).integral_check - 1.0).abs());
        if i % 3 == 0 {
            let grid = PhaseSpaceGrid::for_state(&s, 96);
            let samples = grid.samples();
            if samples.iter().any(|(b, _)| q_function(&s, *b) < 0.0) {
                t.fail(format!("{spec:?}"), "negative Q");
            }
            t.record(q_integral(&s, &grid), 1.0);
        }
    }
    if norm_gap > 1e-12 {
        t.fail("state norm", format!("off by {norm_gap:e}"));
    }
    if phase_gap > 1e-8 {
        t.fail("phase integral", format!("off by {phase_gap:e}"));
    }
    t.record(1.0 + norm_gap, 1.0);
    t.record(1.0 + phase_gap, 1.0);
    t.finish()
}
