use polyterm_core::CoreError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("{0}: unexpected character `{1}`")]
    Lex(Span, char),
    #[error("{0}: {1}")]
    Parse(Span, String),
    #[error("{0}: unknown identifier `{1}`")]
    Unknown(Span, String),
    #[error("{0}: scope error: {1}")]
    Scope(Span, String),
    #[error("{0}: type error: {1}")]
    Type(Span, String),
    #[error("{0}: kind error: {1}")]
    Kind(Span, String),
    #[error("{0}: cannot infer {1}")]
    Infer(Span, String),
    #[error("{0}: {1}")]
    Core(Span, CoreError),
}

impl TextError {
    pub fn span(&self) -> Span {
        match self {
            TextError::Lex(s, _)
            | TextError::Parse(s, _)
            | TextError::Unknown(s, _)
            | TextError::Scope(s, _)
            | TextError::Type(s, _)
            | TextError::Kind(s, _)
            | TextError::Infer(s, _)
            | TextError::Core(s, _) => *s,
        }
    }
}

pub type Result<T> = std::result::Result<T, TextError>;
