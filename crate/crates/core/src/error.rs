use qal_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("undecidable at the precision cap of {0} bits")]
    UndecidableAtCap(u32),
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent facts: {0}")]
    InconsistentFacts(String),
    #[error("inconclusive input: {0}")]
    InconclusiveInput(String),
    #[error("lacunary selection failed at step {step}: sum {sum} exceeds 1")]
    SelectionFailure { step: usize, sum: String },
    #[error("divisor is not monic in `{0}`")]
    NonMonic(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("field extension failed: {0}")]
    ExtensionFailure(String),
    #[error("no generic shear among the first {0} candidates")]
    ExhaustedTrials(usize),
    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),
}

impl CoreError {
    /// Stable process exit code for this error class.
    pub fn code(&self) -> i32 {
        use CoreError::*;
        match self {
            Syntax { .. } | UnknownVariable { .. } => 2,
            Domain(_) | NonMonic(_) | ArityMismatch(_) | ZeroPolynomial | InconclusiveInput(_)
            | SelectionFailure { .. } | DegenerateRegression(_) => 4,
            UndecidableAtCap(_) | Precision(_) | InsufficientTruncation(_) | ExtensionFailure(_) => 5,
            Unsupported(_) | ExhaustedTrials(_) => 6,
            InconsistentFacts(_) => 7,
        }
    }

    /// Short machine-readable name.
    pub fn kind(&self) -> &'static str {
        use CoreError::*;
        match self {
            Syntax { .. } => "syntax",
            UnknownVariable { .. } => "unknown_variable",
            Domain(_) => "domain",
            UndecidableAtCap(_) => "undecidable_at_cap",
            Precision(_) => "precision",
            Unsupported(_) => "unsupported",
            InconsistentFacts(_) => "inconsistent_facts",
            InconclusiveInput(_) => "inconclusive_input",
            SelectionFailure { .. } => "selection_failure",
            NonMonic(_) => "non_monic",
            ArityMismatch(_) => "arity_mismatch",
            ZeroPolynomial => "zero_polynomial",
            InsufficientTruncation(_) => "insufficient_truncation",
            ExtensionFailure(_) => "extension_failure",
            ExhaustedTrials(_) => "exhausted_trials",
            DegenerateRegression(_) => "degenerate_regression",
        }
    }
}

impl From<AlgebraError> for CoreError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Syntax { offset, message } => CoreError::Syntax { offset, message },
            AlgebraError::UnknownVariable { name, offset } => CoreError::UnknownVariable { name, offset },
            AlgebraError::DivisionByZero => CoreError::Domain("division by zero".into()),
            AlgebraError::RootIsolation(m) => CoreError::ExtensionFailure(m),
            AlgebraError::PrecisionExhausted(b) => CoreError::UndecidableAtCap(b),
            AlgebraError::Domain(m) => CoreError::Domain(m),
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
