//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fock_witness::cli::{verify, VERIFY_RANGES};
use fock_witness::fock::TruncationPolicy;
use fock_witness::interferometry::{linear_entropy, linear_entropy_closed_form, phase_estimation_uncertainty};
use fock_witness::moments::{moment_oracle, moment_series, moments_agree};
use fock_witness::phase::{barnett_pegg_fluctuations, phase_dispersion, phase_distribution, DEFAULT_PHASE_POINTS};
use fock_witness::quasiprob::{q_function, q_integral, PhaseSpaceGrid};
use fock_witness::state::{build_by_composition, build_state, polar_alpha, sample_spec, Family, SampleRanges, StateSpec};
use fock_witness::witness::*;
use fock_witness::{FockError, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Every state built by criteria 1 to 6, re-checked by criterion 7.
static TOUCHED: Mutex<Vec<StateVector>> = Mutex::new(Vec::new());

fn touch(s: &StateVector) {
    TOUCHED.lock().unwrap().push(s.clone());
}

fn build(spec: StateSpec) -> StateVector {
    let s = build_state(&spec, &TruncationPolicy::default()).unwrap_or_else(|e| panic!("{spec:?}: {e}"));
    touch(&s);
    s
}

fn fock(n: usize) -> StateVector {
    build(StateSpec::fock(n))
}

fn coherent(mag: f64) -> StateVector {
    build(StateSpec::coherent(polar_alpha(mag, 0.0)))
}

struct Outcome {
    pass: bool,
    detail: String,
}

/// Collects named comparisons for one criterion.
#[derive(Default)]
struct Gate {
    failures: Vec<String>,
    worst: f64,
    count: usize,
}

impl Gate {
    fn near(&mut self, what: impl std::fmt::Display, got: f64, want: f64, tol: f64) {
        let gap = (got - want).abs();
        self.worst = self.worst.max(gap);
        self.count += 1;
        if !(gap <= tol) {
            self.failures.push(format!("{what}: {got} vs {want}"));
        }
    }

    fn holds(&mut self, what: impl std::fmt::Display, ok: bool) {
        self.count += 1;
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn outcome(self, extra: &str, elapsed: Duration, budget: Duration) -> Outcome {
        let mut failures = self.failures;
        if elapsed > budget {
            failures.push(format!("took {elapsed:.2?}, budget {budget:?}"));
        }
        let detail = if failures.is_empty() {
            format!("{} checks, worst gap {:.2e}{extra}, {elapsed:.2?}", self.count, self.worst)
        } else {
            format!("{} of {} failed: {}", failures.len(), self.count, failures.join("; "))
        };
        Outcome { pass: failures.is_empty(), detail }
    }
}

fn point_values() -> Outcome {
    let start = Instant::now();
    let mut g = Gate::default();
    g.near("Q_M(|1>)", mandel_q(&fock(1)).unwrap().value, -1.0, 1e-8);
    for mag in [0.5, 1.0, 2.0] {
        g.near(format!("Q_M(coherent {mag})"), mandel_q(&coherent(mag)).unwrap().value, 0.0, 1e-8);
    }
    for n in 0..=4 {
        let want = if n < 2 { 0.0 } else { -1.0 };
        g.near(format!("A3(|{n}>)"), agarwal_tara_a3(&fock(n)).unwrap().value, want, 1e-8);
    }
    for mag in [0.5, 1.0, 2.0] {
        let u = barnett_pegg_fluctuations(&coherent(mag)).u().unwrap();
        g.near(format!("U(coherent {mag})"), u, 0.5, 1e-8);
    }
    let psdfs = build(StateSpec::psdfs(polar_alpha(1.0, 0.0), 0, 1));
    g.near("U(PSDFS v=1 n=0 a=1)", barnett_pegg_fluctuations(&psdfs).u().unwrap(), 0.5, 1e-8);
    for n in 0..=5 {
        let s = fock(n);
        let profile = phase_distribution(&s, DEFAULT_PHASE_POINTS);
        let worst = profile.density.iter().map(|p| (p - 0.5 / PI).abs()).fold(0.0, f64::max);
        g.near(format!("P_theta(|{n}>) grid"), worst, 0.0, 1e-8);
        g.near(format!("D(|{n}>)"), phase_dispersion(&s), 1.0, 1e-8);
    }
    for mag in [0.5, 1.0, 2.0] {
        let s = coherent(mag);
        for m in 0..=5 {
            g.near(format!("B({m}) coherent {mag}"), klyshko_b(&s, m).unwrap().value, 0.0, 1e-8);
        }
    }
    for mag in [0.5, 1.0, 2.0, 3.0] {
        let l = linear_entropy(&coherent(mag));
        g.holds(format!("L(coherent {mag}) = {l:e}"), l <= 1e-10);
    }
    g.near("L(|1>)", linear_entropy(&fock(1)), 0.5, 1e-8);
    g.outcome("", start.elapsed(), Duration::from_secs(5))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let policy = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut g = Gate::default();
    for family in Family::ALL {
        let mut compared = 0;
        while compared < 20 {
            let spec = sample_spec(family, &VERIFY_RANGES, &mut rng);
            match (build_state(&spec, &policy), build_by_composition(&spec, &policy)) {
                (Ok(a), Ok(b)) => {
                    touch(&a);
                    let dim = a.dim().max(b.dim());
                    let gap = (0..dim)
                        .map(|i| {
                            let x = a.amplitudes().get(i).copied().unwrap_or_default();
                            let y = b.amplitudes().get(i).copied().unwrap_or_default();
                            (x - y).norm()
                        })
                        .fold(0.0, f64::max);
                    g.near(format!("{spec:?}"), gap, 0.0, 1e-10);
                    compared += 1;
                }
                (Err(FockError::Annihilated { .. }), Err(FockError::Annihilated { .. })) => {}
                (a, b) => {
                    g.holds(format!("{spec:?}: {:?} vs {:?}", a.err(), b.err()), false);
                    compared += 1;
                }
            }
        }
    }
    g.outcome(" (15 families x 20 points)", start.elapsed(), Duration::from_secs(30))
}

fn random_states(seed: u64, count: usize) -> Vec<(StateSpec, StateVector)> {
    let policy = TruncationPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let family = Family::ALL[out.len() % Family::ALL.len()];
        let spec = sample_spec(family, &SampleRanges::default(), &mut rng);
        if let Ok(s) = build_state(&spec, &policy) {
            touch(&s);
            out.push((spec, s));
        }
    }
    out
}

fn moment_fidelity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut g = Gate::default();
    let mut worst_rel: f64 = 0.0;
    for (spec, s) in random_states(31, 210) {
        let (t, j) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        match (moment_series(&spec, t, j), moment_oracle(&s, t, j)) {
            (Ok(a), Ok(b)) => {
                worst_rel = worst_rel.max((a - b).norm() / b.norm().max(1.0));
                g.holds(format!("{spec:?} t={t} j={j}: {a} vs {b}"), moments_agree(a, b));
            }
            (a, b) => g.holds(format!("{spec:?}: {:?} vs {:?}", a.err(), b.err()), false),
        }
    }
    let extra = format!(", worst relative {worst_rel:.2e}");
    g.outcome(&extra, start.elapsed(), Duration::from_secs(30))
}

fn entropy_fidelity() -> Outcome {
    let start = Instant::now();
    let families = [
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
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut g = Gate::default();
    for family in families {
        let mut done = 0;
        while done < 5 {
            let spec = sample_spec(family, &VERIFY_RANGES, &mut rng);
            let Ok(s) = build_state(&spec, &TruncationPolicy::default()) else { continue };
            touch(&s);
            let closed = linear_entropy_closed_form(&spec).unwrap();
            g.near(format!("{spec:?}"), closed, linear_entropy(&s), 1e-8);
            done += 1;
        }
    }
    g.outcome(" (9 families x 5 points)", start.elapsed(), Duration::from_secs(60))
}

fn hong_mandel_dual_path() -> Outcome {
    let start = Instant::now();
    let mut g = Gate::default();
    for (spec, s) in random_states(77, 30) {
        for l in [2, 4, 6] {
            let series = quadrature_central_moment(&s, l).unwrap();
            let direct = quadrature_central_moment_direct(&s, l).unwrap();
            g.near(format!("{spec:?} l={l}"), series, direct, 1e-8 * direct.abs().max(1.0));
            g.holds(format!("{spec:?} l={l} checked witness"), hong_mandel_squeezing(&s, l).is_ok());
        }
    }
    g.outcome(" (30 states, l = 2, 4, 6)", start.elapsed(), Duration::from_secs(30))
}

fn figure_shapes() -> Outcome {
    let start = Instant::now();
    let mut g = Gate::default();

    let d: Vec<f64> = (1..=3)
        .map(|u| antibunching_d(&build(StateSpec::padfs(polar_alpha(0.4, 0.0), 1, u)), 2).unwrap().value)
        .collect();
    g.holds(format!("(a) d(1) over u = {d:?}"), d[0] > d[1] && d[1] > d[2]);

    let disp: Vec<f64> = [0.5, 1.0, 2.0, 3.0].iter().map(|&m| phase_dispersion(&coherent(m))).collect();
    g.holds(format!("(b) coherent dispersion {disp:?}"), disp.windows(2).all(|w| w[1] < w[0]));

    let a = polar_alpha(1.0, 0.0);
    let l: Vec<f64> = [StateSpec::vfecs(a), StateSpec::paecs(a), StateSpec::ecs(a)]
        .into_iter()
        .map(|spec| linear_entropy(&build(spec)))
        .collect();
    g.holds(format!("(c) L VFECS, PAECS, ECS = {l:?}"), l[0] > l[1] && l[1] > l[2]);

    // Witness order l - 1 = 3 and 4, i.e. formula arguments 4 and 5.
    let mut literal = Vec::new();
    for (k, q, n) in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 0)] {
        for mag in [0.5, 1.0] {
            let s = build(StateSpec::pasdfs(polar_alpha(mag, 0.0), n, k, q));
            let third = hosps(&s, 4).unwrap().value;
            let fourth = hosps(&s, 5).unwrap().value;
            g.holds(format!("(d) k={k} q={q} n={n} a={mag}: order 3 = {third}"), third < 0.0);
            g.holds(format!("(d) k={k} q={q} n={n} a={mag}: order 4 = {fourth}"), fourth >= 0.0);
            literal.push((hosps(&s, 3).unwrap().value < 0.0, hosps(&s, 4).unwrap().value >= 0.0));
        }
    }
    let literal_ok = literal.iter().filter(|(a, b)| *a && *b).count();

    let dphi = phase_estimation_uncertainty(&coherent(2.0), PI / 2.0).unwrap();
    g.near("(e) delta phi coherent 2", dphi, 0.5, 1e-8);

    let extra = format!(
        "; (d) read as witness order l-1; with formula argument l = 3, 4 the pattern holds at {literal_ok} of {} points",
        literal.len()
    );
    g.outcome(&extra, start.elapsed(), Duration::from_secs(30))
}

fn normalization() -> Outcome {
    let start = Instant::now();
    let states = std::mem::take(&mut *TOUCHED.lock().unwrap());
    let results: Vec<(f64, f64, f64, bool)> = states
        .par_iter()
        .map(|s| {
            let norm = (s.norm_sqr() - 1.0).abs();
            let phase = (phase_distribution(s, DEFAULT_PHASE_POINTS).integral_check - 1.0).abs();
            let grid = PhaseSpaceGrid::for_state(s, 2 * s.dim() + 8);
            let positive = grid.samples().iter().all(|(b, _)| q_function(s, *b) >= 0.0);
            let q = (q_integral(s, &grid) - 1.0).abs();
            (norm, phase, q, positive)
        })
        .collect();
    let mut g = Gate::default();
    for (i, (norm, phase, q, positive)) in results.iter().enumerate() {
        g.near(format!("state {i} norm"), *norm, 0.0, 1e-12);
        g.near(format!("state {i} P_theta mass"), *phase, 0.0, 1e-8);
        g.near(format!("state {i} Q mass"), *q, 0.0, 1e-6);
        g.holds(format!("state {i} Q negative"), *positive);
    }
    let extra = format!(" over {} states", states.len());
    g.outcome(&extra, start.elapsed(), Duration::from_secs(120))
}

fn verification_command() -> Outcome {
    let start = Instant::now();
    let mut g = Gate::default();
    let report = verify(42);
    g.holds(format!("report:\n{report}"), report.passed());
    g.holds(format!("{} categories", report.checks.len()), report.checks.len() >= 5);
    let out = Command::new(env!("CARGO_BIN_EXE_fock-witness")).args(["verify", "--seed", "42"]).output();
    match out {
        Ok(o) => g.holds(format!("binary exit {:?}", o.status.code()), o.status.success()),
        Err(e) => g.holds(format!("binary did not run: {e}"), false),
    }
    let extra = format!(", {} categories", report.checks.len());
    g.outcome(&extra, start.elapsed(), Duration::from_secs(60))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 point values", point_values),
        ("2 closed form vs composition", oracle_equivalence),
        ("3 moment series vs oracle", moment_fidelity),
        ("4 linear entropy closed forms", entropy_fidelity),
        ("5 Hong-Mandel dual path", hong_mandel_dual_path),
        ("6 figure shapes", figure_shapes),
        ("7 normalization and positivity", normalization),
        ("8 verify --seed 42", verification_command),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("panicked: {:?}", e.downcast_ref::<String>().map(String::as_str).or(e.downcast_ref::<&str>().copied())),
        });
        all &= outcome.pass;
        println!("{} criterion {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    }
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
