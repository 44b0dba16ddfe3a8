use polyterm_core::CoreError;
use polyterm_pfs::PfsError;
use polyterm_text::TextError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("type constant `{0}` has no type mapping")]
    UnmappedConstant(String),
    #[error("symbol `{0}` has no interpretation")]
    UnmappedSymbol(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {err}")]
    Text { line: usize, err: TextError },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("interpretation of `{symbol}` lacks the binder prefix for its arguments: {msg}")]
    Shape { symbol: String, msg: String },
    #[error("round {round}: interpretation is not safe for `{symbol}`: {reason}")]
    SafetyFailure { round: usize, symbol: String, reason: String },
    #[error("rule {rule}, hint step {step}: {msg}")]
    HintReplay { rule: String, step: usize, msg: String },
    #[error("rule {rule}: the ground oracle refutes the symbolic verdict: {witness}")]
    OracleRefuted { rule: String, witness: String },
    #[error("rule {rule}: interpreted sides do not typecheck: {msg}")]
    IllTyped { rule: String, msg: String },
    #[error(transparent)]
    Pfs(#[from] PfsError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type Result<T> = std::result::Result<T, ProverError>;
