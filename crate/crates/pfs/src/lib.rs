//! Polymorphic functional systems: the application-head restriction, rule
//! schemas over metavariables, matching, one-step rewriting and the
//! system file format.

pub mod error;
pub mod gen;
pub mod matching;
mod rename;
pub mod rewrite;
pub mod schema;
pub mod syntax;
pub mod validate;

pub use error::{PfsError, Result};
pub use matching::{match_schema, Replacement};
pub use rewrite::{rewrite_step, Context, Reduct};
pub use schema::{check_rule_wellformed, RuleSchema, System};
pub use syntax::{check_system, load_system, print_system};
pub use validate::validate_pfs_term;
