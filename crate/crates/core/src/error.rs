use thiserror::Error;

/// Errors raised by state construction, channel handling and rate computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} out of domain: {value} ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("classes B1/B2 (tau=1) unsupported")]
    UnsupportedClass,

    #[error("dilation not available for channel class {0}")]
    UnsupportedDilation(&'static str),

    #[error("covariance matrix is not symmetric (deviation {0:e})")]
    NotSymmetric(f64),

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("state violates the uncertainty relation (symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("matrix is not symplectic (deviation {0:e})")]
    NotSymplectic(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid mode selection: {0}")]
    ModeSelection(String),

    #[error("degenerate homodyne measurement (quadrature variance {0:e})")]
    DegenerateMeasurement(f64),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("no rounds kept after sifting")]
    EmptyStatistics,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(name: &'static str, value: f64, requirement: &'static str) -> Result<T> {
    Err(Error::Domain {
        name,
        value,
        requirement,
    })
}
