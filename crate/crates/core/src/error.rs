use crate::fib::WeightError;
use crate::poly::EvalError;
use crate::ring::DivisionByZero;
use crate::theta::EllipticError;
use crate::tiling::TilingError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Division(#[from] DivisionByZero),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("{name}={value} is out of range for {id} (needs {name} >= {min})")]
    OutOfRange {
        id: &'static str,
        name: &'static str,
        value: i64,
        min: i64,
    },
    #[error("{id} needs parameter `{name}`")]
    MissingParam {
        id: &'static str,
        name: &'static str,
    },
    #[error("{id} takes no parameter `{name}`")]
    UnexpectedParam { id: &'static str, name: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Pole and resource failures, as opposed to bad input.
    pub fn is_numeric_or_resource(&self) -> bool {
        match self {
            Error::Elliptic(_) | Error::Tiling(_) | Error::Division(_) => true,
            Error::Weight(w) => w.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
