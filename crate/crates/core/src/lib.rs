//! Kinds, type constructors and terms of higher-order polymorphic lambda
//! calculus in nameless form, with substitution, type normalization,
//! kind and type checking and a name-restoring printer.

pub mod error;
pub mod kind;
pub mod print;
pub mod sig;
pub mod term;
pub mod ty;
pub mod typeck;

pub use error::{CoreError, Result};
pub use kind::{Hint, Kind, Name};
pub use sig::{chi, Signature};
pub use term::{Arg, Term, Tm};
pub use ty::{Ty, Type};
pub use typeck::{kind_of, typecheck, typecheck_in, Metas};
