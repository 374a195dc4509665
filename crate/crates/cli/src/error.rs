use protset_core::linalg::LinalgError;
use protset_core::protection::ProtectionError;
use protset_core::realization::RealizeError;
use thiserror::Error;

pub const ZERO_B_EXPLANATION: &str = "perturbation B is zero: spec(A + tB) = spec(A) for every t, so every point off spec(A) is trivially protected. \
In finite dimension spec(A) is never all of the real line, so a spectrum that never moves forces B = 0; supply a non-zero B";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("{ZERO_B_EXPLANATION} (‖B‖_F = {norm:e})")]
    ZeroPerturbation { norm: f64 },
    #[error("{0}")]
    Inconsistent(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Usage(_) => 2,
            Self::InvalidInput(_) => 3,
            Self::ZeroPerturbation { .. } => 4,
            Self::Inconsistent(_) => 5,
            Self::Internal(_) => 1,
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotSymmetric { .. } | LinalgError::NotPsd { .. } | LinalgError::Pole { .. } => {
                Self::InvalidInput(e.to_string())
            }
            LinalgError::NoConvergence { .. } => Self::Internal(e.to_string()),
            LinalgError::Empty | LinalgError::BadLength { .. } | LinalgError::NonFinite { .. } => {
                Self::Usage(e.to_string())
            }
        }
    }
}

impl From<ProtectionError> for CliError {
    fn from(e: ProtectionError) -> Self {
        match e {
            ProtectionError::Linalg(inner) => inner.into(),
            ProtectionError::ZeroPerturbation { norm } => Self::ZeroPerturbation { norm },
            ProtectionError::DimensionMismatch { .. } | ProtectionError::BadGrid => Self::Usage(e.to_string()),
            ProtectionError::NotProtected { .. } => Self::Inconsistent(e.to_string()),
            ProtectionError::ZeroProbe | ProtectionError::InvalidHerglotz(_) => Self::Internal(e.to_string()),
        }
    }
}

impl From<RealizeError> for CliError {
    fn from(e: RealizeError) -> Self {
        match e {
            RealizeError::Protection(inner) => inner.into(),
            RealizeError::Uncertified { .. } => Self::Inconsistent(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}
