use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty sample")]
    EmptySample,
    #[error("non-positive observation {value} at index {index}")]
    NonPositive { index: usize, value: f64 },
    #[error("family {0} does not support this operation")]
    Unsupported(String),
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    Quadrature { estimate: f64, error: f64 },
    #[error("empty quantile window [{lo}, {hi})")]
    EmptyWindow { lo: usize, hi: usize },
    #[error("degenerate statistic: {0}")]
    Degenerate(String),
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error("{failed} of {total} replications failed: {first}")]
    Replications { failed: usize, total: usize, first: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_sample(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptySample);
    }
    for (index, &value) in x.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositive { index, value });
        }
    }
    Ok(())
}
