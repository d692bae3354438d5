use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
    #[error("precision cap of {0} bits reached")]
    PrecisionExhausted(u32),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
