use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter is outside its allowed range.
    #[error("invalid parameter `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    #[error("matrix is not Hermitian (relative Frobenius defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("closed forms require identical resonators (L1 = {l1:e}, L2 = {l2:e})")]
    AsymmetricCircuit { l1: f64, l2: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical failure at step {step}: {reason}")]
    Numerical { step: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown sweep axis `{0}` (expected one of V_s, sigma_t, gamma, dt, phi_d)")]
    UnknownAxis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 2 for configuration problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical { .. } | Error::NotHermitian { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }
}
