use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mode parameter {name} = {value}: {reason}")]
    InvalidMode {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid field parameter {name} = {value}: {reason}")]
    InvalidField {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("operation requires a Sauter pulse, got a constant field")]
    NotSauter,

    #[error("pole of the gamma function at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("argument out of domain for {function}: {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("complex argument {re} + {im}i is neither purely real nor purely imaginary")]
    NotRealOrImaginary { re: f64, im: f64 },

    /// The mode has vanishing transverse mass (fermions) or a vanishing
    /// asymptotic frequency, so the normalization degenerates.
    #[error("degenerate mode: {0}")]
    DegenerateMode(&'static str),

    #[error("log-domain value {0} does not fit the linear f64 range")]
    Saturated(f64),

    #[error("normalization violated: {0}")]
    Normalization(String),

    #[error("oracle did not converge: {0}")]
    NonConvergence(String),

    #[error("oracle exhausted its step budget of {0} steps")]
    StepBudget(usize),

    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(&'static str),
}
