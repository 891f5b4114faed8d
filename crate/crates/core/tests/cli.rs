use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use fock_witness::cli::*;
use fock_witness::special::{binomial, stirling2};
use fock_witness::{MomentSource, StateVector};

fn docs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/configs")
}

fn doc_sweep(name: &str, out: &Path) -> SweepConfig {
    let text = std::fs::read_to_string(docs().join(name)).unwrap();
    SweepConfig::parse(&text, out).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].clone()).collect()
}

fn numbers(cells: &[String]) -> Vec<f64> {
    cells.iter().map(|c| c.parse().unwrap()).collect()
}

#[test]
fn padfs_mandel_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let config = doc_sweep("padfs_mandel.cfg", dir.path());
    let (header, rows) = parse_csv(&render_sweep(&config));
    assert_eq!(header, ["alpha.mag", "mandel_q", "antibunching(2)", "vogel", "error"]);
    assert_eq!(rows.len(), 51);
    let q = numbers(&column(&header, &rows, "mandel_q"));
    assert!((q[0] + 1.0).abs() < 1e-12);
    assert!(column(&header, &rows, "error").iter().all(String::is_empty));
}

#[test]
fn coherent_u_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let config = doc_sweep("coherent_phase.cfg", dir.path());
    let (header, rows) = parse_csv(&render_sweep(&config));
    assert_eq!(rows.len(), 6);
    for u in numbers(&column(&header, &rows, "U")) {
        assert!((u - 0.5).abs() < 1e-8, "{u}");
    }
    let d = numbers(&column(&header, &rows, "dispersion"));
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
}

#[test]
fn photon_subtracted_coherent_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let config = doc_sweep("psdfs_antibunching.cfg", dir.path());
    let (header, rows) = parse_csv(&render_sweep(&config));
    for d in numbers(&column(&header, &rows, "d(1)")) {
        assert!(d.abs() < 1e-8, "{d}");
    }
}

#[test]
fn every_shipped_sweep_runs_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let started = Instant::now();
    for entry in std::fs::read_dir(docs()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        if name.starts_with("dump_") {
            let text = std::fs::read_to_string(&path).unwrap();
            let config = StateConfig::parse(&text, dir.path()).unwrap();
            assert!(dump_state(&config, &mut std::io::sink()).unwrap() > 0);
            continue;
        }
        let config = doc_sweep(&name, dir.path());
        let rows = run_sweep(&config, &mut std::io::sink()).unwrap();
        assert_eq!(rows, config.points().len());
        let written = std::fs::read_to_string(config.output_path.as_ref().unwrap()).unwrap();
        let (header, data) = parse_csv(&written);
        let errors = column(&header, &data, "error");
        assert!(errors.iter().all(String::is_empty), "{name}: {errors:?}");
    }
    assert!(started.elapsed().as_secs() < 60);
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let config = doc_sweep("padfs_antibunching_by_added.cfg", dir.path());
    let first = render_sweep(&config);
    for _ in 0..3 {
        assert_eq!(render_sweep(&config), first);
    }
    let (header, rows) = parse_csv(&first);
    assert_eq!(&header[..2], ["alpha.mag", "state.added"]);
    assert_eq!(rows.len(), 123);
    assert_eq!(rows[1][..2], ["0".to_string(), "2".to_string()]);
}

#[test]
fn undefined_values_leave_empty_cells() {
    let text = "state.family = Coherent\nsweep.param = alpha.mag\nsweep.start = 0\nsweep.stop = 1\nsweep.steps = 2\nquantities = mandel_q, U, mean_n\n";
    let config = SweepConfig::parse(text, Path::new(".")).unwrap();
    let (header, rows) = parse_csv(&render_sweep(&config));
    assert_eq!(column(&header, &rows, "mandel_q")[0], "");
    assert_eq!(column(&header, &rows, "U")[0], "");
    assert_eq!(column(&header, &rows, "mean_n")[0], "0");
    let u: f64 = column(&header, &rows, "U")[1].parse().unwrap();
    assert!((u - 0.5).abs() < 1e-8);
}

#[test]
fn point_errors_do_not_abort() {
    let text = "state.family = PSDFS\nstate.subtracted = 1\nsweep.param = alpha.mag\nsweep.start = 0\nsweep.stop = 1\nsweep.steps = 3\nquantities = mean_n\n";
    let config = SweepConfig::parse(text, Path::new(".")).unwrap();
    let (header, rows) = parse_csv(&render_sweep(&config));
    assert_eq!(rows.len(), 3);
    let errors = column(&header, &rows, "error");
    assert!(errors[0].contains("annihilat"), "{errors:?}");
    assert!(errors[1].is_empty() && errors[2].is_empty());
    assert_eq!(column(&header, &rows, "mean_n")[0], "");
}

fn dump(text: &str) -> Vec<Vec<String>> {
    let config = StateConfig::parse(text, Path::new(".")).unwrap();
    let (header, rows) = parse_csv(&render_state(&config).unwrap());
    assert_eq!(header, ["n", "re", "im", "p"]);
    rows
}

#[test]
fn dump_examples() {
    let rows = dump("state.family = Fock\nstate.n = 2\n");
    let nonzero: Vec<_> = rows.iter().filter(|r| r[3] != "0").collect();
    assert_eq!(nonzero, vec![&vec!["2".to_string(), "1".into(), "0".into(), "1".into()]]);
    assert_eq!(rows.len(), 3);

    let rows = dump("state.family = ECS\nalpha.mag = 1\n");
    for r in &rows {
        let n: usize = r[0].parse().unwrap();
        let p: f64 = r[3].parse().unwrap();
        assert!(n % 2 == 0 || p == 0.0, "{r:?}");
    }
    assert!(rows.len() > 10);

    let rows = dump("state.family = VFBS\nstate.p = 0.5\nstate.M = 2\n");
    assert_eq!(rows[0][3], "0");
    assert_eq!(rows.len(), 3);
}

#[test]
fn config_errors_are_located() {
    let e = SweepConfig::parse("state.family = Squeezed\n", Path::new(".")).unwrap_err();
    assert_eq!((e.line, e.field.as_deref()), (Some(1), Some("state.family")));
    let e = SweepConfig::parse("state.family = ECS\nsweep.param = state.n\nsweep.start = 0\nsweep.stop = 1\nsweep.steps = 2\nquantities = mandel_q\n", Path::new(".")).unwrap_err();
    assert_eq!((e.line, e.field.as_deref()), (Some(2), Some("sweep.param")));
    assert!(e.to_string().starts_with("line 2, field `sweep.param`"));
    let e = SweepConfig::parse("state.family = ECS\nsweep.param = alpha.mag\nsweep.start = 0\nsweep.stop = 1\nsweep.steps = 2\nquantities = mandel_q, wigner(0)\n", Path::new(".")).unwrap_err();
    assert_eq!((e.line, e.field.as_deref()), (Some(6), Some("quantities")));
}

/// HOSPS with the sign of the highest-order term flipped.
fn mutated_hosps(s: &StateVector, l: usize) -> fock_witness::Result<f64> {
    let n = MomentSource::mean_photon_number(s)?;
    let mut value = 0.0;
    for e in 0..=l {
        let mut outer = binomial(l as i64, e as i64) * if e % 2 == 0 { 1.0 } else { -1.0 } * n.powi((l - e) as i32);
        if e == l {
            outer = -outer;
        }
        for f in 2..=e {
            let d = s.factorial_moment(f)? - n.powi(f as i32);
            value += stirling2(e, f) as f64 * outer * d;
        }
    }
    Ok(value)
}

#[test]
fn injected_hosps_error_is_caught() {
    let report = verify_with(42, mutated_hosps);
    let failing: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    assert_eq!(failing, ["hosps_identity"]);
}

#[test]
fn seeds_change_samples_not_outcomes() {
    let a = verify(42);
    let b = verify(7);
    assert!(a.passed() && b.passed(), "{a}\n{b}");
    let pattern = |r: &VerificationReport| r.checks.iter().map(|c| (c.name, c.passed)).collect::<Vec<_>>();
    assert_eq!(pattern(&a), pattern(&b));
    assert!(a.checks.iter().zip(&b.checks).any(|(x, y)| x.max_abs_error != y.max_abs_error));
    assert_eq!(verify(42), a);
    assert!(a.checks.len() >= 5);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_fock-witness");
    let status = Command::new(exe).args(["verify", "--seed", "42"]).output().unwrap();
    assert!(status.status.success());
    assert!(String::from_utf8_lossy(&status.stdout).contains("all checks passed"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "state.family = ECS\nsweep.steps = 0\n").unwrap();
    let out = Command::new(exe).arg("sweep").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let good = dir.path().join("fock.cfg");
    std::fs::write(&good, "state.family = Fock\nstate.n = 1\noutput = amps/fock.csv\n").unwrap();
    assert!(Command::new(exe).arg("dump").arg(&good).status().unwrap().success());
    let written = std::fs::read_to_string(dir.path().join("amps/fock.csv")).unwrap();
    assert_eq!(written, "n,re,im,p\n0,0,0,0\n1,1,0,1\n");
}
