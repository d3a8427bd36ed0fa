use thiserror::Error;

use crate::params::Regime;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{field}` = {value} outside {expected}")]
    Domain {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("regime {0:?} is not solvable")]
    Regime(Regime),
    #[error("quadrature stalled at {value:e} with error estimate {error:e}")]
    Accuracy { value: f64, error: f64 },
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("singular point: {0}")]
    Singular(&'static str),
    #[error("{what} = {value} exceeds the limit {max}")]
    Capacity {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("series tail not controlled at order {orders}: last term ratio {last_ratio}")]
    Truncation { orders: usize, last_ratio: f64 },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(field: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        field,
        value,
        expected,
    }
}
