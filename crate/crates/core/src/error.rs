use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("pump parameter x = {0} is at or above the oscillation threshold (x < 1 required)")]
    AboveThreshold(f64),

    #[error("degenerate sample: internal loss L = 1 leaves no transmitted or reflected light")]
    DegenerateSample,

    #[error("ill-formed network: {0}")]
    Structural(String),

    #[error(
        "feedback-induced instability / oscillation threshold: condition number of (I - A) is {condition:.3e}"
    )]
    Instability { condition: f64 },

    #[error("unphysical noise spectrum: min eigenvalue of S + i*Sigma is {min_eigenvalue:.3e}")]
    Unphysical { min_eigenvalue: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error(
        "calibration target {target_db:.4} dB infeasible: supremum is {supremum_db:.4} dB as x -> 1"
    )]
    Infeasible { target_db: f64, supremum_db: f64 },

    #[error("calibration error: {0}")]
    Calibration(String),

    #[error(
        "unphysical detected value for stated efficiency: variance {variance:.6} <= 1 - eta = {floor:.6}"
    )]
    UnphysicalDetection { variance: f64, floor: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
