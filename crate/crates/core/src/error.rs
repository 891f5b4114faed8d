use thiserror::Error;

/// Errors raised while building states or evaluating quantities on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("photon number {n} does not fit in a basis of dimension {dim}")]
    Dimension { n: usize, dim: usize },

    #[error("truncation overflow: {needed} levels needed but the policy caps the basis at {max_dim}")]
    TruncationOverflow { needed: usize, max_dim: usize },

    #[error("state annihilated: norm {norm:e} fell below 1e-12")]
    Annihilated { norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("moment <a^+{creation} a^{annihilation}> is unsafe: {edge_mass:e} probability within reach of the truncation edge")]
    TruncationUnsafe {
        creation: usize,
        annihilation: usize,
        edge_mass: f64,
    },

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("witness `{witness}` is undefined for this state: {reason}")]
    UndefinedWitness {
        witness: &'static str,
        reason: &'static str,
    },

    #[error("invalid witness order {order} for `{witness}`")]
    InvalidOrder { witness: &'static str, order: usize },

    #[error("index {index} is outside the truncated range of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("degenerate denominator in `{witness}`")]
    DegenerateDenominator { witness: &'static str },

    #[error("phase undefined: <S>^2 + <C>^2 = {magnitude:e}")]
    PhaseUndefined { magnitude: f64 },

    #[error("stationary point: d<Jz>/dphi = {derivative:e}")]
    StationaryPoint { derivative: f64 },

    #[error("family {family} is not supported by {operation}")]
    UnsupportedFamily {
        family: &'static str,
        operation: &'static str,
    },

    #[error("{quantity}: the two evaluation paths disagree ({first} vs {second})")]
    PathMismatch {
        quantity: &'static str,
        first: f64,
        second: f64,
    },

    #[error("normalization of {family} disagrees with its closed form: numeric {numeric:e}, closed form {closed:e}")]
    NormalizationMismatch {
        family: &'static str,
        numeric: f64,
        closed: f64,
    },
}

pub type Result<T, E = FockError> = std::result::Result<T, E>;
