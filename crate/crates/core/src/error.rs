use thiserror::Error;

/// Errors raised across the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Mononobe-Okabe has no equilibrium wedge beyond this seismic coefficient.
    #[error("validity domain exceeded: no equilibrium wedge for k_h > {limiting_kh:.4}")]
    ValidityDomainExceeded { limiting_kh: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("non-positive Jacobian ({det:.3e}) in element {element}")]
    NonPositiveJacobian { element: usize, det: f64 },

    #[error("singular or indefinite system: zero pivot at equation {equation}")]
    SingularSystem { equation: usize },

    #[error("return mapping did not converge: {0}")]
    ReturnMapFailure(String),

    #[error("{what} did not converge after {iterations} iterations (residual history: {history:?})")]
    NonConvergence {
        what: String,
        iterations: usize,
        history: Vec<f64>,
    },

    #[error("stage {stage} failed: {source}")]
    StageFailure {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("mesh: {0}")]
    Mesh(String),

    #[error("ground motion: {0}")]
    Motion(String),

    #[error("undefined application height: zero resultant force")]
    ZeroResultant,

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
