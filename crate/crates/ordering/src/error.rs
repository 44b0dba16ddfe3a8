use polyterm_core::kind::Name;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderingError {
    #[error("unknown metavariable `{0}`")]
    UnknownMeta(Name),
}

pub type Result<T> = std::result::Result<T, OrderingError>;
