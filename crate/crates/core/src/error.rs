use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A state failed one of its physicality conditions.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A dense matrix has a non-zero entry outside the X pattern.
    #[error("not an X state: entry ({row},{col}) has magnitude {magnitude:e}")]
    Structure {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("matrix is not Hermitian (max residual {0:e})")]
    NotHermitian(f64),

    #[error("negative eigenvalue {0:e} below tolerance")]
    NegativeEigenvalue(f64),

    #[error("spectrum is not sorted in decreasing order")]
    UnsortedSpectrum,

    #[error("parameter {name} = {value} outside {domain}")]
    Parameter {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("completeness violated: max |sum E^dag E - I| = {0:e}")]
    Cptp(f64),

    #[error("channel output trace deviates from 1 by {0:e}")]
    TraceDrift(f64),

    /// Argument outside the domain of a closed-form expression.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0}")]
    Usage(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
