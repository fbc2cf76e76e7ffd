use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A closed-form expression divides by this coefficient (or product).
    #[error("degenerate parameters: {0} must be nonzero")]
    DegenerateParams(&'static str),

    #[error("step size underflow at t = {t}: h = {step:e}")]
    StepUnderflow { t: f64, step: f64 },

    #[error("trajectory escaped at t = {t} (|s| = {norm:e})")]
    Escaped { t: f64, norm: f64 },

    #[error("state is not an equilibrium (residual {residual:e})")]
    NotEquilibrium { residual: f64 },

    #[error("degenerate power-law fit: only {usable} radii with nonzero probability")]
    DegenerateFit { usable: usize },

    #[error("coefficient {0} is zero; no finite resistance realizes it")]
    ZeroCoefficient(&'static str),
}
