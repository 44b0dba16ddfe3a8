use polyterm_core::CoreError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpError {
    #[error("reduction fuel of {0} steps exhausted")]
    FuelExhausted(u64),
    #[error("term is not final")]
    NotFinal,
    #[error("term is not of type nat")]
    NotNat,
    #[error("evaluation stuck: {0}")]
    Stuck(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, InterpError>;
