//! Interpretations into the calculus over nat, the safety check, rule
//! orientation with hint replay and the rule removal loop.

pub mod error;
pub mod hint;
pub mod interpretation;
pub mod loader;
pub mod orient;
pub mod removal;
pub mod safety;

pub use error::{ProverError, Result};
pub use interpretation::Interpretation;
pub use loader::load_interpretation;
pub use hint::HintScript;
pub use orient::{interpret_rule, orient_rule, suggest_hint, OracleSummary, OrientationResult};
pub use removal::{rule_removal, ProofTranscript, Status, TRANSCRIPT_HEADER};
pub use safety::{check_safety, Safety};
