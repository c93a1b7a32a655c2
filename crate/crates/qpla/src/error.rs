use thiserror::Error;

/// Errors surfaced by the numerical pipeline.
///
/// `Config` maps to exit code 2 at the CLI boundary, everything else to 3.
#[derive(Debug, Error)]
pub enum QplaError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("resonance: omega*T = {omega_t} is within {guard} of {m}*pi; the kernel is singular")]
    Resonance { omega_t: f64, m: i64, guard: f64 },

    #[error("ill-conditioned operator: min |lambda_n| = {min_abs_eigenvalue} below guard {guard}")]
    Conditioning { min_abs_eigenvalue: f64, guard: f64 },

    #[error("pole in operator function: f undefined at lambda = {lambda}")]
    Pole { lambda: f64 },

    #[error("eigensolver failed to converge: {0}")]
    NonConvergence(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("division by zero at r = 0: {0}")]
    HarmonicLimit(String),
}

impl QplaError {
    /// Process exit code at the CLI boundary: 2 for configuration-level
    /// problems (including resonance), 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            QplaError::Config(_) | QplaError::Resonance { .. } => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, QplaError>;
