use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no convergence: {0}")]
    NonConvergent(String),
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix of size {size} exceeds the eigensolver cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("dimension {n} is above the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("curve has no tail model; cannot integrate beyond its grid")]
    MissingTailModel,
    #[error("bound violated at lambda = {lambda}: {detail}")]
    BoundViolated { lambda: f64, detail: String },
    #[error("edge ({u}, {v}) has non-positive conductance {c}")]
    NonPositiveConductance { u: usize, v: usize, c: f64 },
    #[error("bad character table: {0}")]
    BadCharacterTable(String),
    #[error("isotypic trace for {irrep} near lambda = {lambda} is not an integer (residual {residual:e})")]
    NonIntegerTrace { irrep: String, lambda: f64, residual: f64 },
    #[error("vertex function is identically zero")]
    ZeroVector,
    #[error("level {m} exceeds the maximum SG level {max}")]
    LevelTooLarge { m: usize, max: usize },
    #[error("sqrt(lambda) = {0} is an integer multiple of 2*pi")]
    DegeneratePhase(f64),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical method to reach its tolerance,
    /// as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergent(_))
    }
}
