//! Husimi Q function and its angular marginal.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::fock::{StateVector, TruncationPolicy};
use crate::moments::{lattice_projection, lattice_raw_moment};
use crate::phase::{lattice, phase_grid, PhaseProfile, DEFAULT_PHASE_POINTS};
use crate::special::ln_factorial;
use crate::state::StateSpec;

/// Extra radius beyond √⟨N⟩ covered by the radial quadrature.
pub const RADIAL_MARGIN: f64 = 8.0;
/// Radial tail estimate above which a warning is logged.
pub const RADIAL_TAIL_WARNING: f64 = 1e-8;

/// Q(β) = |⟨β|s⟩|²/π.
pub fn q_function(s: &StateVector, beta: Complex64) -> f64 {
    coherent_overlap(s.amplitudes(), beta).norm_sqr() / PI
}

/// ⟨β|s⟩ = e^{−|β|²/2} Σ_n c_n β*ⁿ/√n!.
fn coherent_overlap(amplitudes: &[Complex64], beta: Complex64) -> Complex64 {
    let r = beta.norm();
    let phi = beta.arg();
    let ln_r = r.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, c) in amplitudes.iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ln_mag = if n == 0 { 0.0 } else { n as f64 * ln_r } - 0.5 * ln_factorial(n) - 0.5 * r * r;
        if ln_mag > -745.0 {
            sum += c * Complex64::from_polar(ln_mag.exp(), -phi * n as f64);
        }
    }
    sum
}

/// Q(β) from the closed-form double series for displaced-Fock families.
pub fn q_function_closed_form(spec: &StateSpec, beta: Complex64) -> Result<f64> {
    let (k, q, n) = lattice(spec, "q_function_closed_form")?;
    let alpha = spec.effective_alpha();
    let max_terms = TruncationPolicy::default().max_dim;
    let norm_sqr = lattice_raw_moment(alpha, n, k, q, 0, 0, max_terms)?.re;
    let (ln_b, phi) = (beta.norm().ln(), beta.arg());
    let weight = |level: usize| {
        let ln_pow = if level == 0 { 0.0 } else { level as f64 * ln_b };
        (ln_pow - ln_factorial(level), -phi * level as f64)
    };
    let amplitude = lattice_projection(alpha, n, k, q, weight, max_terms)?;
    Ok(amplitude.norm_sqr() * (-beta.norm_sqr()).exp() / norm_sqr / PI)
}

/// Polar quadrature grid for ∫ d²β.
#[derive(Debug, Clone)]
pub struct PhaseSpaceGrid {
    pub beta_max: f64,
    pub radii: Vec<f64>,
    /// Radial weights, already multiplied by the Jacobian |β|.
    pub radial_weights: Vec<f64>,
    pub angles: Vec<f64>,
}

impl PhaseSpaceGrid {
    /// Gauss–Legendre radial nodes on [0, √⟨N⟩ + margin] sized to the state.
    pub fn for_state(s: &StateVector, angular_points: usize) -> Self {
        let beta_max = s.mean_photon_number().max(0.0).sqrt() + RADIAL_MARGIN;
        let nodes = (2 * s.dim() + 64).min(1200);
        Self::polar(beta_max, nodes, angular_points)
    }

    pub fn polar(beta_max: f64, radial_nodes: usize, angular_points: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(radial_nodes.max(1)).unwrap());
        let (radii, radial_weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| {
                let r = 0.5 * beta_max * (x + 1.0);
                (r, 0.5 * beta_max * w * r)
            })
            .unzip();
        Self { beta_max, radii, radial_weights, angles: phase_grid(angular_points) }
    }

    /// Sample points β with their ∫d²β weights (angular spacing included).
    pub fn samples(&self) -> Vec<(Complex64, f64)> {
        let h = 2.0 * PI / self.angles.len() as f64;
        self.angles
            .iter()
            .flat_map(|&t| {
                self.radii
                    .iter()
                    .zip(&self.radial_weights)
                    .map(move |(&r, &w)| (Complex64::from_polar(r, t), w * h))
            })
            .collect()
    }
}

/// Q_θ = ∫₀^∞ Q(|β|e^{iθ}) |β| d|β| on an N-point angular grid.
pub fn angular_q(s: &StateVector, points: usize) -> PhaseProfile {
    let grid = PhaseSpaceGrid::for_state(s, points);
    angular_q_on(s, &grid)
}

pub fn angular_q_default(s: &StateVector) -> PhaseProfile {
    angular_q(s, DEFAULT_PHASE_POINTS)
}

pub fn angular_q_on(s: &StateVector, grid: &PhaseSpaceGrid) -> PhaseProfile {
    let edge = grid.beta_max;
    let tail = q_function(s, Complex64::new(edge, 0.0)) * edge;
    if tail > RADIAL_TAIL_WARNING {
        log::warn!("radial Q truncation at |β| = {edge}: tail estimate {tail:e}");
    }
    let density = grid
        .angles
        .par_iter()
        .map(|&t| {
            grid.radii
                .iter()
                .zip(&grid.radial_weights)
                .map(|(&r, &w)| w * q_function(s, Complex64::from_polar(r, t)))
                .sum()
        })
        .collect();
    PhaseProfile::from_density(density)
}

/// ∫ Q d²β over the grid.
pub fn q_integral(s: &StateVector, grid: &PhaseSpaceGrid) -> f64 {
    angular_q_on(s, grid).integral_check
}
