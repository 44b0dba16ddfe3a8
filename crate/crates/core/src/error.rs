use crate::kind::Name;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoreError {
    #[error("kind mismatch at {path}: {msg}")]
    KindMismatch { path: String, msg: String },
    #[error("type error at {path}: {msg}")]
    TypeError { path: String, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("unknown type constant `{0}`")]
    UnknownConstant(Name),
    #[error("unknown metavariable `{0}`")]
    UnknownMeta(Name),
    #[error("type abstraction at {path} binds a variable occurring in the type of free variable `{var}`")]
    TyAbsSideCondition { path: String, var: Name },
    #[error("unbound index {index} at {path}")]
    Unbound { path: String, index: usize },
    #[error("`{0}` is declared twice")]
    Duplicate(Name),
    #[error("type of symbol `{0}` is not closed")]
    OpenSymbolType(Name),
    #[error("no chi constant designated")]
    NoChi,
}

pub type Result<T> = std::result::Result<T, CoreError>;
