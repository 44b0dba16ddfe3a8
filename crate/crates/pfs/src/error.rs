use polyterm_core::CoreError;
use polyterm_text::TextError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfsError {
    #[error("line {line}: {err}")]
    Text { line: usize, err: TextError },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("head restriction violated at {path}: {msg}")]
    HeadViolation { path: String, msg: String },
    #[error("rule {rule}: scope error: {msg}")]
    Scope { rule: String, msg: String },
    #[error("rule {rule}: type mismatch: {msg}")]
    TypeMismatch { rule: String, msg: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, PfsError>;
