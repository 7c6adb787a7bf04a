use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntError {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("fixture mismatch: {0}")]
    Fixture(String),
}

impl EntError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            EntError::Dim(_) | EntError::Input(_) | EntError::Range(_) => 2,
            EntError::Domain(_) | EntError::NotHermitian(_) | EntError::Numerical(_) => 3,
            EntError::Fixture(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, EntError>;
