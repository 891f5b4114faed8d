use std::f64::consts::PI;

use fock_witness::fock::TruncationPolicy;
use fock_witness::phase::*;
use fock_witness::quasiprob::*;
use fock_witness::state::{build_state, polar_alpha, StateSpec};
use fock_witness::{FockError, StateVector};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state(spec: StateSpec) -> StateVector {
    build_state(&spec, &TruncationPolicy::default()).unwrap()
}

#[test]
fn q_function_reference_values() {
    let vac = StateVector::vacuum(3).unwrap();
    assert!((q_function(&vac, c(0.0, 0.0)) - 1.0 / PI).abs() < 1e-15);
    let one = StateVector::fock(1, 2).unwrap();
    assert_eq!(q_function(&one, c(0.0, 0.0)), 0.0);
    let cs = state(StateSpec::coherent(c(1.0, 0.0)));
    assert!((q_function(&cs, c(1.0, 0.0)) - 1.0 / PI).abs() < 1e-12);
}

#[test]
fn q_function_matches_closed_form() {
    let specs = [
        StateSpec::padfs(c(0.8, 0.3), 1, 2),
        StateSpec::psdfs(c(1.1, -0.4), 2, 1),
        StateSpec::pasdfs(c(0.6, 0.6), 1, 2, 1),
        StateSpec::dfs(c(-0.5, 0.2), 3),
    ];
    for spec in specs {
        let s = state(spec);
        for beta in [c(0.0, 0.0), c(0.4, 0.9), c(-1.3, 0.2), c(2.1, -1.7)] {
            let a = q_function(&s, beta);
            let b = q_function_closed_form(&spec, beta).unwrap();
            assert!((a - b).abs() <= 1e-8, "{spec:?} β={beta}: {a} vs {b}");
        }
    }
    assert!(matches!(
        q_function_closed_form(&StateSpec::ecs(c(1.0, 0.0)), c(0.0, 0.0)),
        Err(FockError::UnsupportedFamily { .. })
    ));
}

/// Exact angular marginal: Σ c_n c*_m e^{−i(n−m)θ} Γ((n+m)/2 + 1) / (2π √(n! m!)).
fn angular_q_exact(s: &StateVector, theta: f64) -> f64 {
    let amps = s.amplitudes();
    let mut total = Complex64::new(0.0, 0.0);
    for (n, a) in amps.iter().enumerate() {
        for (m, b) in amps.iter().enumerate() {
            let ln = ln_gamma((n + m) as f64 / 2.0 + 1.0) - 0.5 * (ln_fact(n) + ln_fact(m));
            total += a * b.conj() * Complex64::from_polar(ln.exp(), -((n as f64) - (m as f64)) * theta);
        }
    }
    total.re / (2.0 * PI)
}

fn ln_fact(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Γ at integers and half-integers.
fn ln_gamma(x: f64) -> f64 {
    if x.fract() == 0.0 {
        ln_fact(x as usize - 1)
    } else {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        let k = (x - 0.5) as usize;
        ln_fact(2 * k) + 0.5 * PI.ln() - (k as f64) * 4f64.ln() - ln_fact(k)
    }
}

#[test]
fn angular_q_reference_and_normalization() {
    for s in [StateVector::vacuum(1).unwrap(), StateVector::fock(3, 4).unwrap()] {
        let profile = angular_q(&s, 72);
        for v in &profile.density {
            assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-10);
        }
    }
    let specs = [
        StateSpec::padfs(polar_alpha(1.0, PI / 2.0), 1, 1),
        StateSpec::ecs(c(1.5, 0.0)),
        StateSpec::paks(c(2.0, 0.5), 0.2),
        StateSpec::coherent(c(3.0, 0.0)),
    ];
    for spec in specs {
        let s = state(spec);
        let profile = angular_q_default(&s);
        assert!((profile.integral_check - 1.0).abs() < 1e-6, "{spec:?}");
        for (t, v) in profile.theta.iter().zip(&profile.density).step_by(37) {
            assert!((v - angular_q_exact(&s, *t)).abs() < 1e-9, "{spec:?} θ={t}");
        }
    }
}

#[test]
fn angular_q_symmetric_about_displacement_phase() {
    let theta2 = PI / 2.0;
    let s = state(StateSpec::padfs(polar_alpha(1.0, theta2), 1, 1));
    let grid = PhaseSpaceGrid::for_state(&s, 8);
    for delta in [0.1, 0.7, 1.9] {
        let at = |t: f64| {
            grid.radii
                .iter()
                .zip(&grid.radial_weights)
                .map(|(&r, &w)| w * q_function(&s, Complex64::from_polar(r, t)))
                .sum::<f64>()
        };
        assert!((at(theta2 + delta) - at(theta2 - delta)).abs() < 1e-8);
    }
}

#[test]
fn angular_q_ignores_global_phase() {
    let s = state(StateSpec::pasdfs(c(0.7, 0.4), 1, 1, 2));
    let rotated: Vec<Complex64> = s.amplitudes().iter().map(|a| a * Complex64::from_polar(1.0, 0.8)).collect();
    let r = StateVector::from_amplitudes(rotated, s.tail_mass()).unwrap();
    let a = angular_q(&s, 90);
    let b = angular_q(&r, 90);
    for (x, y) in a.density.iter().zip(&b.density) {
        assert!((x - y).abs() < 1e-14);
    }
}

#[test]
fn q_function_nonnegative_and_normalized_on_grid() {
    let s = state(StateSpec::psdfs(c(1.2, 0.3), 2, 2));
    let grid = PhaseSpaceGrid::for_state(&s, 180);
    let mut total = 0.0;
    for (beta, w) in grid.samples() {
        let q = q_function(&s, beta);
        assert!(q >= 0.0);
        total += w * q;
    }
    assert!((total - 1.0).abs() < 1e-6);
    assert!((q_integral(&s, &grid) - 1.0).abs() < 1e-6);
}

#[test]
fn fock_phase_is_uniform() {
    for n in 0..5 {
        let s = StateVector::fock(n, n + 1).unwrap();
        let profile = phase_distribution(&s, DEFAULT_PHASE_POINTS);
        for v in &profile.density {
            assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-12);
        }
        assert!((profile.integral_check - 1.0).abs() < 1e-12);
        assert_eq!(phase_dispersion(&s), 1.0);
    }
}

#[test]
fn coherent_phase_peaks_at_zero() {
    let s = state(StateSpec::coherent(c(1.0, 0.0)));
    let profile = phase_distribution(&s, DEFAULT_PHASE_POINTS);
    let (peak, _) = profile
        .density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    assert!(profile.theta[peak].abs() < 1e-12);
    let n = profile.theta.len();
    for k in 1..n / 2 {
        assert!((profile.density[n / 2 + k] - profile.density[n / 2 - k]).abs() < 1e-12);
    }
}

#[test]
fn photon_added_phase_is_mirror_symmetric() {
    let s = state(StateSpec::padfs(c(1.0, 0.0), 1, 1));
    let profile = phase_distribution(&s, DEFAULT_PHASE_POINTS);
    let n = profile.theta.len();
    for k in 1..n / 2 {
        assert!((profile.density[n / 2 + k] - profile.density[n / 2 - k]).abs() < 1e-10);
    }
}

#[test]
fn phase_distribution_matches_closed_form() {
    let specs = [
        StateSpec::padfs(polar_alpha(1.2, 0.4), 2, 1),
        StateSpec::psdfs(polar_alpha(0.9, -1.1), 1, 2),
        StateSpec::pasdfs(polar_alpha(1.5, 2.0), 2, 1, 3),
        StateSpec::coherent(polar_alpha(2.0, 0.0)),
    ];
    for spec in specs {
        let s = state(spec);
        let profile = phase_distribution(&s, DEFAULT_PHASE_POINTS);
        assert!((profile.integral_check - 1.0).abs() < 1e-8);
        for (t, v) in profile.theta.iter().zip(&profile.density).step_by(20) {
            let closed = phase_distribution_closed_form(&spec, *t).unwrap();
            assert!((v - closed).abs() < 1e-8, "{spec:?} θ={t}");
        }
    }
}

#[test]
fn phase_distribution_rotates_with_displacement() {
    let phi = 2.0 * PI * 45.0 / DEFAULT_PHASE_POINTS as f64;
    let base = state(StateSpec::padfs(polar_alpha(1.1, 0.0), 1, 2));
    let turned = state(StateSpec::padfs(polar_alpha(1.1, phi), 1, 2));
    let a = phase_distribution(&base, DEFAULT_PHASE_POINTS);
    let b = phase_distribution(&turned, DEFAULT_PHASE_POINTS);
    let n = a.theta.len();
    for k in 0..n {
        assert!((b.density[(k + 45) % n] - a.density[k]).abs() < 1e-10);
    }
}

#[test]
fn coherent_dispersion_decreases_with_amplitude() {
    let d: Vec<f64> = [0.5, 1.0, 2.0, 3.0]
        .iter()
        .map(|&a| phase_dispersion(&state(StateSpec::coherent(c(a, 0.0)))))
        .collect();
    assert!(d.windows(2).all(|w| w[0] > w[1]), "{d:?}");
    for (&a, &got) in [0.5, 1.0, 2.0, 3.0].iter().zip(&d) {
        let exact = phase_dispersion_exact(&state(StateSpec::coherent(c(a, 0.0))));
        assert!((got - exact).abs() < 1e-12);
    }
}

#[test]
fn coherent_fluctuation_u_is_one_half() {
    for a in [0.5, 1.0, 2.0] {
        let spec = StateSpec::coherent(c(a, 0.0));
        let f = barnett_pegg_fluctuations(&state(spec));
        assert!((f.u().unwrap() - 0.5).abs() < 1e-10);
        let g = barnett_pegg_from_moments(&spec).unwrap();
        assert!((g.u.unwrap() - 0.5).abs() < 1e-10);
    }
    let sub = barnett_pegg_fluctuations(&state(StateSpec::psdfs(c(1.0, 0.0), 0, 1)));
    assert!((sub.u.unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn fluctuations_undefined_without_mean_field() {
    let one = barnett_pegg_fluctuations(&StateVector::fock(1, 2).unwrap());
    assert!(matches!(one.u(), Err(FockError::PhaseUndefined { .. })));
    assert!(one.q.is_none());
    assert!(one.s >= 0.0);
    let ecs = barnett_pegg_fluctuations(&state(StateSpec::ecs(c(1.0, 0.0))));
    assert!(ecs.u.is_none());
}

#[test]
fn fluctuation_paths_agree() {
    let specs = [
        StateSpec::padfs(c(0.8, 0.5), 1, 2),
        StateSpec::pasdfs(c(1.3, -0.2), 2, 1, 1),
        StateSpec::paks(c(1.0, 0.3), 0.1),
        StateSpec::pabs(0.3, 4),
    ];
    for spec in specs {
        let a = barnett_pegg_fluctuations(&state(spec));
        let b = barnett_pegg_from_moments(&spec).unwrap();
        assert!((a.s - b.s).abs() < 1e-8);
        match (a.u, b.u) {
            (Some(x), Some(y)) => assert!((x - y).abs() < 1e-8 * x.abs().max(1.0), "{spec:?}"),
            (None, None) => {}
            other => panic!("{spec:?}: {other:?}"),
        }
    }
}
