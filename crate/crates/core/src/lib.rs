//! Engineered bosonic states in a truncated Fock basis, with
//! nonclassicality witnesses, phase properties and entanglement potential.
//!
//! Every closed-form series in the crate has a brute-force counterpart that
//! works directly on the truncated amplitude vector.

pub mod cli;
pub mod error;
pub mod fock;
pub mod interferometry;
pub mod moments;
pub mod phase;
pub mod quasiprob;
pub mod special;
pub mod state;
pub mod witness;

pub use error::{FockError, Result};
pub use fock::{StateVector, TruncationPolicy};
pub use moments::{moment_oracle, moment_series, MomentSource};
pub use state::{build_by_composition, build_state, Family, StateSpec};
