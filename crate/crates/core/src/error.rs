use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("separation must be positive and finite, got {0} m")]
    InvalidSeparation(f64),

    #[error("temperature must be positive and finite, got {0} K")]
    InvalidTemperature(f64),

    #[error("frequency must be positive and finite, got {0} rad/s")]
    InvalidFrequency(f64),

    #[error("outside validated regime: {0}")]
    OutsideRegime(String),

    #[error("invalid model parameter: {0}")]
    InvalidModel(String),

    #[error("invalid numerics settings: {0}")]
    InvalidSettings(String),

    #[error("reflection coefficients need y >= q, got y = {y}, q = {q}")]
    MomentumBelowFrequency { y: f64, q: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid permittivity table: {0}")]
    InvalidTable(String),

    #[error("table axis mismatch: expected {expected}, found {found}")]
    AxisMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("zeta = {zeta:.6e} rad/s outside tabulated range [{min:.6e}, {max:.6e}] rad/s")]
    OutOfRange { zeta: f64, min: f64, max: f64 },

    #[error("Matsubara sum did not reach tolerance before q_m = {q:.3} (y_max = {y_max}); tolerances are inconsistent")]
    TruncationNotReached { q: f64, y_max: f64 },

    #[error("temperature step {dt} K is too small to resolve the free-energy difference at sum tolerance {sum_tol:e}")]
    StepUnderflow { dt: f64, sum_tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
