use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::state::build_state;

use super::config::{StateConfig, SweepConfig};

/// Evaluate one sweep point: the quantity cells and the error cell.
fn evaluate(config: &SweepConfig, point: &[f64]) -> (Vec<String>, String) {
    let mut cells = vec![String::new(); config.quantities.len()];
    let mut errors = Vec::new();
    let built = config.state_at(point).and_then(|spec| build_state(&spec, &config.truncation).map(|s| (spec, s)));
    match built {
        Ok((spec, s)) => {
            for ((label, q), cell) in config.quantities.iter().zip(cells.iter_mut()) {
                match q.evaluate(&spec, &s) {
                    Ok(Some(v)) if v.is_finite() => *cell = v.to_string(),
                    Ok(Some(v)) => errors.push(format!("{label}: non-finite value {v}")),
                    Ok(None) => {}
                    Err(e) => errors.push(format!("{label}: {e}")),
                }
            }
        }
        Err(e) => errors.push(format!("state: {e}")),
    }
    (cells, errors.join("; "))
}

/// The whole sweep as CSV text, rows in sweep order.
pub fn render_sweep(config: &SweepConfig) -> String {
    let mut header: Vec<String> = config.sweeps.iter().map(|s| s.param.key().to_string()).collect();
    header.extend(config.quantities.iter().map(|(label, _)| label.clone()));
    header.push("error".into());

    let rows: Vec<Vec<String>> = config
        .points()
        .par_iter()
        .map(|point| {
            let (cells, error) = evaluate(config, point);
            let mut all: Vec<String> = point.iter().map(|v| v.to_string()).collect();
            all.extend(cells);
            all.push(error);
            all
        })
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    for r in std::iter::once(&header).chain(&rows) {
        w.write_record(r).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
}

/// Write the sweep to the configured output, or to `fallback` when none is
/// set. Returns the number of data rows.
pub fn run_sweep(config: &SweepConfig, fallback: &mut dyn Write) -> std::io::Result<usize> {
    let csv = render_sweep(config);
    write_to(config.output_path.as_deref(), &csv, fallback)?;
    Ok(csv.lines().count() - 1)
}

/// Amplitude table `n,re,im,p` of the built state. Trailing levels whose
/// amplitude magnitude is below 1e-15 are dropped.
pub fn render_state(config: &StateConfig) -> crate::Result<String> {
    let s = build_state(&config.state, &config.truncation)?;
    let amps = s.amplitudes();
    let last = amps.iter().rposition(|c| c.norm() >= DUMP_FLOOR).map_or(0, |i| i + 1);
    let mut out = String::from("n,re,im,p\n");
    for (n, c) in amps[..last].iter().enumerate() {
        out.push_str(&format!("{n},{},{},{}\n", c.re, c.im, c.norm_sqr()));
    }
    Ok(out)
}

/// Magnitude below which trailing amplitudes are not written.
pub const DUMP_FLOOR: f64 = 1e-15;

pub fn dump_state(config: &StateConfig, fallback: &mut dyn Write) -> anyhow::Result<usize> {
    let csv = render_state(config)?;
    write_to(config.output_path.as_deref(), &csv, fallback)?;
    Ok(csv.lines().count() - 1)
}

fn write_to(path: Option<&Path>, text: &str, fallback: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text)
        }
        None => fallback.write_all(text.as_bytes()),
    }
}
