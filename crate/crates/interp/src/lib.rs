//! The interpretation calculus: types over `nat`, the builtin symbols
//! `plus`, `times`, `lift`, `flatten`, numerals, and the reduction relation
//! with normalizers and a closed-term evaluator.

pub mod builtins;
pub mod error;
pub mod eval;
pub mod finals;
pub mod gen;
pub mod normalize;
pub mod reduce;

pub use error::{InterpError, Result};
pub use eval::{Evaluator, Value};
pub use finals::{is_final, nat_value};
pub use normalize::{nf, normalize, normalize_with, Options, Trace, TraceStep};
pub use reduce::{reduce_step, Step, Strategy};
