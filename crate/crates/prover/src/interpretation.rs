use std::sync::Arc;

use indexmap::IndexMap;
use polyterm_core::kind::Name;
use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::Metas;

use crate::error::{ProverError, Result};
use crate::hint::HintScript;

/// A type constructor mapping together with a symbol mapping.
#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    pub name: String,
    pub tm: IndexMap<Name, Ty>,
    pub j: IndexMap<Name, Tm>,
    pub hints: IndexMap<String, HintScript>,
}

impl Interpretation {
    /// The homomorphic image of a type, beta-normal.
    pub fn interpret_type(&self, t: &Ty) -> Result<Ty> {
        Ok(ty::normalize(&self.ty_rec(t)?))
    }

    fn ty_rec(&self, t: &Ty) -> Result<Ty> {
        Ok(match &**t {
            Type::Bound(_) => t.clone(),
            Type::Free(n, k) => ty::free(n, k.clone()),
            Type::Const(c) => self
                .tm
                .get(c)
                .cloned()
                .ok_or_else(|| ProverError::UnmappedConstant(c.to_string()))?,
            Type::Meta(n, args) => ty::meta(n, args.iter().map(|a| self.ty_rec(a)).collect::<Result<_>>()?),
            Type::App(f, a) => ty::app(self.ty_rec(f)?, self.ty_rec(a)?),
            Type::Arrow(a, b) => ty::arrow(self.ty_rec(a)?, self.ty_rec(b)?),
            Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), self.ty_rec(b)?)),
            Type::Forall(h, k, b) => Arc::new(Type::Forall(h.clone(), k.clone(), self.ty_rec(b)?)),
        })
    }

    /// `[[f]] = J(f)` and homomorphic elsewhere; metavariables stay holes.
    pub fn interpret_term(&self, t: &Tm) -> Result<Tm> {
        Ok(match &**t {
            Term::Bound(_) | Term::Num(_) => t.clone(),
            Term::Free(n, fty) => term::free(n, self.interpret_type(fty)?),
            Term::Sym(f) => self
                .j
                .get(f)
                .cloned()
                .ok_or_else(|| ProverError::UnmappedSymbol(f.to_string()))?,
            Term::Meta(n, args) => {
                let args = args
                    .iter()
                    .map(|a| {
                        Ok(match a {
                            Arg::Ty(s) => Arg::Ty(self.interpret_type(s)?),
                            Arg::Tm(u) => Arg::Tm(self.interpret_term(u)?),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Arc::new(Term::Meta(n.clone(), args))
            }
            Term::Lam(h, bty, b) => Arc::new(Term::Lam(h.clone(), self.interpret_type(bty)?, self.interpret_term(b)?)),
            Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), self.interpret_term(b)?)),
            Term::App(f, a) => term::app(self.interpret_term(f)?, self.interpret_term(a)?),
            Term::TyApp(f, s) => term::tyapp(self.interpret_term(f)?, self.interpret_type(s)?),
        })
    }

    /// Metavariable declarations for the interpreted side of a rule.
    pub fn interpret_metas(&self, m: &Metas) -> Result<Metas> {
        let mut out = Metas { types: m.types.clone(), terms: IndexMap::new() };
        for (n, t) in &m.terms {
            out.terms.insert(n.clone(), self.interpret_type(t)?);
        }
        Ok(out)
    }
}
