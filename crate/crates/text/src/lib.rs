//! Surface syntax: lexing, parsing and elaboration of kinds, types and
//! terms into their nameless form.

pub mod elab;
pub mod error;
pub mod lexer;
pub mod metactx;
pub mod raw;

pub use elab::{Env, MetaInfo, Scope};
pub use error::{Result, Span, TextError};
pub use metactx::{meta_contexts, CtxEntry};

use polyterm_core::{Kind, Tm, Ty};

pub fn kind(src: &str) -> Result<Kind> {
    Ok(elab::elab_kind(&raw::parse_kind(src)?))
}

impl Env {
    pub fn parse_type(&self, src: &str) -> Result<(Ty, Kind)> {
        self.ty(&raw::parse_type(src)?, &mut Scope::default())
    }

    pub fn parse_term(&self, src: &str, expected: Option<&Ty>) -> Result<(Tm, Ty)> {
        self.term(&raw::parse_term(src)?, &mut Scope::default(), expected)
    }
}
