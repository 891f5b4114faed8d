use std::f64::consts::PI;

use rand::Rng;

use super::spec::{polar_alpha, Family, StateSpec};

/// Ranges from which [`sample_spec`] draws parameters.
#[derive(Debug, Clone, Copy)]
pub struct SampleRanges {
    pub max_alpha: f64,
    pub max_n: usize,
    pub max_ops: usize,
    pub max_cutoff: usize,
    pub max_chi: f64,
}

impl Default for SampleRanges {
    fn default() -> Self {
        Self { max_alpha: 2.5, max_n: 3, max_ops: 3, max_cutoff: 10, max_chi: 1.0 }
    }
}

/// Draw a random parameter point for `family`.
pub fn sample_spec<R: Rng + ?Sized>(family: Family, ranges: &SampleRanges, rng: &mut R) -> StateSpec {
    let mut spec = StateSpec::new(family);
    spec.alpha = polar_alpha(rng.gen_range(0.0..ranges.max_alpha), rng.gen_range(-PI..PI));
    spec.n = rng.gen_range(0..=ranges.max_n);
    spec.added = rng.gen_range(0..=ranges.max_ops);
    spec.subtracted = rng.gen_range(0..=ranges.max_ops);
    spec.p = rng.gen_range(0.0..=1.0);
    spec.cutoff = rng.gen_range(0..=ranges.max_cutoff);
    spec.chi = rng.gen_range(0.0..ranges.max_chi);
    spec
}
