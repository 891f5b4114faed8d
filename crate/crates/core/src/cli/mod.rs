//! Config-driven sweeps, state dumps and the verification suite.

mod config;
mod quantity;
mod sweep;
mod verify;

pub use config::{ConfigError, StateConfig, Sweep, SweepConfig};
pub use quantity::{split_quantities, Quantity, QUANTITY_NAMES};
pub use sweep::{dump_state, render_state, render_sweep, run_sweep, DUMP_FLOOR};
pub use verify::{library_hosps, verify, verify_with, Check, HospsFn, VerificationReport, VERIFY_RANGES};
