use superorbit_core::deform::DeformError;
use superorbit_core::json::JsonError;
use superorbit_core::lie::LieError;
use superorbit_core::matrix::MatrixError;
use superorbit_core::orbit::OrbitError;
use superorbit_core::text::ParseError;
use superorbit_core::RingError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

pub fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

pub fn precondition(msg: impl std::fmt::Display) -> CliError {
    CliError::Precondition(msg.to_string())
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        usage(e)
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        usage(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        usage(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        usage(e)
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::NotInvertible => precondition(e),
            _ => usage(e),
        }
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::NotInvertible
            | MatrixError::UnsupportedParity
            | MatrixError::MixedParity
            | MatrixError::OddEntry(_) => precondition(e),
            _ => usage(e),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::Matrix(m) => m.into(),
            LieError::Ring(r) => r.into(),
            LieError::RingMismatch | LieError::IndexOutOfRange => usage(e),
            _ => precondition(e),
        }
    }
}

impl From<OrbitError> for CliError {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::Matrix(m) => m.into(),
            OrbitError::Lie(l) => l.into(),
            OrbitError::WrongLength { .. }
            | OrbitError::ShapeMismatch(..)
            | OrbitError::SyzygyShape
            | OrbitError::MixedSyzygyData => usage(e),
            _ => precondition(e),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        match e {
            DeformError::Lie(l) => l.into(),
            DeformError::Ring(r) => r.into(),
            DeformError::NotACoordinate
            | DeformError::IndexOutOfRange(_)
            | DeformError::IdealShape { .. }
            | DeformError::AlgebraMismatch => usage(e),
            _ => precondition(e),
        }
    }
}
