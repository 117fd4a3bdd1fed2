use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gromov product is not constant on the cylinder")]
    AmbiguousStratum,
    #[error("index {index} out of range 0..={len}")]
    OutOfRange { index: usize, len: usize },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("radius {0} is not admissible")]
    InvalidRadius(f64),
    #[error("word length {len} is shorter than 2R = {min}")]
    GammaTooShort { len: usize, min: f64 },
    #[error("depth {depth} must exceed {bound}")]
    DepthOrderViolation { depth: usize, bound: usize },
    #[error("negative coefficient in a positive-cone argument")]
    NegativeInput,
    #[error("power iteration did not converge after {iterations} steps (estimate {estimate}, residual {residual})")]
    NonConvergence {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
