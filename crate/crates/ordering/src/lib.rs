//! Comparison of interpretation terms: canonical polynomial forms, a
//! symbolic decision procedure returning `Strict`, `Weak` or `Unknown`, and
//! a randomized ground oracle that searches for counterexamples.

pub mod compare;
pub mod error;
pub mod flow;
pub mod oracle;
pub mod poly;

pub use compare::{Comparator, Comparison, Verdict};
pub use error::{OrderingError, Result};
pub use oracle::{ground_compare, Closure, GroundOutcome, Holes, OracleConfig, Witness};
pub use poly::{builtin_call, canon, to_polynomial, Monomial, Poly};
