//! State families: parameter records, closed-form construction and the
//! operator-composition cross-check.

mod compose;
mod factory;
mod norms;
mod sample;
mod spec;

pub use compose::{build_by_composition, coherent_by_recurrence};
pub use factory::{build_state, displacement_coefficients, raw_coefficients};
pub use norms::{closed_form_norm_sqr, NORM_CHECK_TOLERANCE};
pub use sample::{sample_spec, SampleRanges};
pub use spec::{polar_alpha, Family, Param, StateSpec};
