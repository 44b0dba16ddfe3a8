use indexmap::IndexMap;

use crate::error::{CoreError, Result};
use crate::kind::{Kind, Name};
use crate::sig::Signature;
use crate::term::{format_pos, Arg, Term, Tm};
use crate::ty::{self, Ty, Type};

/// Flattened metavariable declarations: a type metavariable has the kind
/// obtained by abstracting its context, a term metavariable the closed type
/// obtained by quantifying over its context.
#[derive(Clone, Debug, Default)]
pub struct Metas {
    pub types: IndexMap<Name, Kind>,
    pub terms: IndexMap<Name, Ty>,
}

/// Kinds of type binders are listed outermost first.
pub fn kind_of(t: &Ty, env: &[Kind], sig: &Signature, metas: &Metas) -> Result<Kind> {
    let mut env = env.to_vec();
    kind_rec(t, &mut env, sig, metas, "e")
}

fn kmis(path: &str, msg: String) -> CoreError {
    CoreError::KindMismatch { path: path.to_string(), msg }
}

fn kind_rec(t: &Ty, env: &mut Vec<Kind>, sig: &Signature, metas: &Metas, path: &str) -> Result<Kind> {
    match &**t {
        Type::Bound(i) => {
            if *i < env.len() {
                Ok(env[env.len() - 1 - i].clone())
            } else {
                Err(CoreError::Unbound { path: path.to_string(), index: *i })
            }
        }
        Type::Free(_, k) => Ok(k.clone()),
        Type::Const(c) => sig
            .consts
            .get(c)
            .cloned()
            .ok_or_else(|| CoreError::UnknownConstant(c.clone())),
        Type::Meta(n, args) => {
            let mut k = metas
                .types
                .get(n)
                .cloned()
                .ok_or_else(|| CoreError::UnknownMeta(n.clone()))?;
            for a in args {
                let ka = kind_rec(a, env, sig, metas, path)?;
                match k {
                    Kind::Arrow(from, to) if *from == ka => k = (*to).clone(),
                    _ => return Err(kmis(path, format!("metavariable {n} applied to too many or ill-kinded arguments"))),
                }
            }
            Ok(k)
        }
        Type::App(f, a) => {
            let kf = kind_rec(f, env, sig, metas, path)?;
            let ka = kind_rec(a, env, sig, metas, path)?;
            match kf {
                Kind::Arrow(from, to) if *from == ka => Ok((*to).clone()),
                Kind::Arrow(from, _) => Err(kmis(path, format!("argument has kind {ka}, expected {from}"))),
                Kind::Star => Err(kmis(path, "application of a constructor of kind *".into())),
            }
        }
        Type::Arrow(a, b) => {
            for s in [a, b] {
                let k = kind_rec(s, env, sig, metas, path)?;
                if !k.is_star() {
                    return Err(kmis(path, format!("arrow operand has kind {k}")));
                }
            }
            Ok(Kind::Star)
        }
        Type::Lam(_, k, b) => {
            env.push(k.clone());
            let kb = kind_rec(b, env, sig, metas, path);
            env.pop();
            Ok(Kind::arrow(k.clone(), kb?))
        }
        Type::Forall(_, k, b) => {
            env.push(k.clone());
            let kb = kind_rec(b, env, sig, metas, path);
            env.pop();
            let kb = kb?;
            if !kb.is_star() {
                return Err(kmis(path, format!("quantifier body has kind {kb}")));
            }
            Ok(Kind::Star)
        }
    }
}

struct Ctx<'a> {
    sig: &'a Signature,
    metas: &'a Metas,
    tys: Vec<Kind>,
    /// Binder type together with the type depth at its binding site.
    tms: Vec<(Ty, usize)>,
    path: Vec<u8>,
}

impl Ctx<'_> {
    fn err(&self, msg: String) -> CoreError {
        CoreError::TypeError { path: format_pos(&self.path), msg }
    }

    fn kind(&mut self, t: &Ty) -> Result<Kind> {
        let p = format_pos(&self.path);
        kind_rec(t, &mut self.tys, self.sig, self.metas, &p)
    }

    fn expect_star(&mut self, t: &Ty) -> Result<()> {
        let k = self.kind(t)?;
        if k.is_star() {
            Ok(())
        } else {
            Err(self.err(format!("expected a type, found a constructor of kind {k}")))
        }
    }

    fn apply(&mut self, mut fty: Ty, args: &[Arg], what: &str) -> Result<Ty> {
        for a in args {
            match a {
                Arg::Ty(t) => {
                    let k = self.kind(t)?;
                    match &*fty.clone() {
                        Type::Forall(_, kb, body) if *kb == k => fty = ty::instantiate(body, t),
                        Type::Forall(_, kb, _) => {
                            return Err(self.err(format!("type argument of kind {k} given to {what}, expected {kb}")))
                        }
                        _ => return Err(self.err(format!("{what} is not polymorphic"))),
                    }
                }
                Arg::Tm(t) => {
                    let at = self.check(t)?;
                    match &*fty.clone() {
                        Type::Arrow(dom, cod) if *dom == at => fty = cod.clone(),
                        Type::Arrow(dom, _) => {
                            return Err(self.err(format!("argument of {what} has the wrong type, expected {dom:?} found {at:?}")))
                        }
                        _ => return Err(self.err(format!("{what} is not a function"))),
                    }
                }
            }
        }
        Ok(fty)
    }

    fn check(&mut self, t: &Tm) -> Result<Ty> {
        match &**t {
            Term::Bound(i) => {
                if *i >= self.tms.len() {
                    return Err(CoreError::Unbound { path: format_pos(&self.path), index: *i });
                }
                let (ty0, d) = &self.tms[self.tms.len() - 1 - i];
                Ok(ty::shift(ty0, (self.tys.len() - d) as isize, 0))
            }
            Term::Free(n, fty) => {
                if ty::has_loose_from(fty, 0) {
                    return Err(CoreError::TyAbsSideCondition { path: format_pos(&self.path), var: n.clone() });
                }
                self.expect_star(fty)?;
                Ok(ty::normalize(fty))
            }
            Term::Sym(n) => self
                .sig
                .symbol(n)
                .cloned()
                .ok_or_else(|| CoreError::UnknownSymbol(n.clone())),
            Term::Num(_) => Ok(ty::constant("nat")),
            Term::Meta(n, args) => {
                let fty = self
                    .metas
                    .terms
                    .get(n)
                    .cloned()
                    .ok_or_else(|| CoreError::UnknownMeta(n.clone()))?;
                self.apply(fty, args, &format!("metavariable {n}"))
            }
            Term::Lam(_, bty, body) => {
                self.expect_star(bty)?;
                let bty = ty::normalize(bty);
                self.tms.push((bty.clone(), self.tys.len()));
                self.path.push(1);
                let r = self.check(body);
                self.path.pop();
                self.tms.pop();
                Ok(ty::arrow(bty, r?))
            }
            Term::TyLam(h, k, body) => {
                self.tys.push(k.clone());
                self.path.push(1);
                let r = self.check(body);
                self.path.pop();
                self.tys.pop();
                Ok(Ty::new(Type::Forall(h.clone(), k.clone(), r?)))
            }
            Term::App(f, a) => {
                self.path.push(1);
                let ft = self.check(f);
                self.path.pop();
                let ft = ft?;
                self.path.push(2);
                let at = self.check(a);
                self.path.pop();
                let at = at?;
                match &*ft {
                    Type::Arrow(dom, cod) if *dom == at => Ok(cod.clone()),
                    Type::Arrow(dom, _) => Err(self.err(format!(
                        "argument type {} does not match {}",
                        crate::print::ty_string(&at),
                        crate::print::ty_string(dom)
                    ))),
                    _ => Err(self.err(format!("applying a term of type {}", crate::print::ty_string(&ft)))),
                }
            }
            Term::TyApp(f, targ) => {
                self.path.push(1);
                let ft = self.check(f);
                self.path.pop();
                let ft = ft?;
                let k = self.kind(targ)?;
                match &*ft {
                    Type::Forall(_, kb, body) if *kb == k => Ok(ty::instantiate(body, targ)),
                    Type::Forall(_, kb, _) => Err(self.err(format!("type argument has kind {k}, expected {kb}"))),
                    _ => Err(self.err(format!(
                        "type application of a term of type {}",
                        crate::print::ty_string(&ft)
                    ))),
                }
            }
        }
    }
}

/// The beta-normal type of a term whose free variables carry their types.
pub fn typecheck(t: &Tm, sig: &Signature, metas: &Metas) -> Result<Ty> {
    typecheck_in(t, sig, metas, &[], &[])
}

/// Typechecks under open binders: `tys` lists type binder kinds and `tms`
/// term binder types (each relative to the type binders preceding it),
/// outermost first.
pub fn typecheck_in(t: &Tm, sig: &Signature, metas: &Metas, tys: &[Kind], tms: &[(Ty, usize)]) -> Result<Ty> {
    let mut cx = Ctx {
        sig,
        metas,
        tys: tys.to_vec(),
        tms: tms.to_vec(),
        path: Vec::new(),
    };
    cx.check(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{app, free, lam, sym, tyapp, tylam};
    use crate::ty::{arrow, bound, constant, forall};

    fn star() -> Kind {
        Kind::Star
    }

    fn list_sig() -> Signature {
        let mut sig = Signature::new();
        sig.add_const("List", star()).unwrap();
        sig.add_const("Pair", Kind::arrows([star(), star()], star())).unwrap();
        sig.add_symbol(
            "cons",
            forall("a", star(), arrows(&[bound(0), constant("List")], constant("List"))),
        )
        .unwrap();
        sig
    }

    fn arrows(a: &[Ty], r: Ty) -> Ty {
        ty::arrows(a.iter().cloned(), r)
    }

    #[test]
    fn kinds_of_constants_and_partial_applications() {
        let sig = list_sig();
        let m = Metas::default();
        assert_eq!(kind_of(&constant("List"), &[], &sig, &m).unwrap(), star());
        let pl = ty::app(constant("Pair"), constant("List"));
        assert_eq!(kind_of(&pl, &[], &sig, &m).unwrap(), Kind::arrow(star(), star()));
        let id = ty::lam("a", star(), bound(0));
        assert_eq!(kind_of(&id, &[], &sig, &m).unwrap(), Kind::arrow(star(), star()));
        let bad = ty::app(constant("List"), constant("List"));
        assert!(matches!(kind_of(&bad, &[], &sig, &m), Err(CoreError::KindMismatch { .. })));
        let bad_arrow = arrow(constant("Pair"), constant("List"));
        assert!(kind_of(&bad_arrow, &[], &sig, &m).is_err());
    }

    #[test]
    fn polymorphic_identity() {
        let sig = Signature::new();
        let t = tylam("a", star(), lam("x", bound(0), crate::term::bound(0)));
        let ty = typecheck(&t, &sig, &Metas::default()).unwrap();
        assert_eq!(ty, forall("a", star(), arrow(bound(0), bound(0))));
    }

    #[test]
    fn cons_application_has_list_type() {
        let sig = list_sig();
        let tau = constant("List");
        let t = app(
            app(tyapp(sym("cons"), tau.clone()), free("h", tau)),
            free("t", constant("List")),
        );
        assert_eq!(typecheck(&t, &sig, &Metas::default()).unwrap(), constant("List"));
    }

    #[test]
    fn side_condition_on_free_variable_types() {
        let sig = Signature::new();
        let t = tylam("a", star(), free("x", bound(0)));
        assert!(matches!(
            typecheck(&t, &sig, &Metas::default()),
            Err(CoreError::TyAbsSideCondition { .. })
        ));
    }

    #[test]
    fn mismatch_reports_path() {
        let sig = list_sig();
        let t = app(tyapp(sym("cons"), constant("List")), free("h", arrow(constant("List"), constant("List"))));
        match typecheck(&t, &sig, &Metas::default()) {
            Err(CoreError::TypeError { path, .. }) => assert_eq!(path, "e"),
            other => panic!("{other:?}"),
        }
    }
}
