use thiserror::Error;

/// Errors raised by the capacity library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Subsystem dimensions violate `1 <= m <= n` or an operation-specific bound.
    #[error("invalid dimensions: {0}")]
    Dimensions(String),

    /// The log-squared Laguerre identity hit a pole of one of its gamma or
    /// digamma factors. Use the resolved closed forms instead.
    #[error("degenerate parameters for the log^2 integral identity ({0}); use spectral::a_closed_forms")]
    DegenerateParameters(String),

    /// Adaptive quadrature stopped before reaching its error target.
    #[error("quadrature did not converge: estimated error {achieved:e} exceeds target {target:e}")]
    Quadrature { achieved: f64, target: f64 },

    /// The Hermitian eigensolver produced an unusable spectrum.
    #[error("eigensolver failure: {0}")]
    Eigen(String),

    /// A spectrum violates nonnegativity or normalization.
    #[error("invalid spectrum: {0}")]
    Spectrum(String),

    /// Sampler and ensemble do not fit together, or a chain setting is out of range.
    #[error("invalid sampler configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
