use indexmap::IndexMap;
use polyterm_core::print::Printer;
use polyterm_core::term::{spine, Arg, Term, Tm};
use polyterm_core::ty::{Ty, Type};
use polyterm_core::{typecheck, CoreError, Metas, Name, Signature};
use polyterm_text::MetaInfo;

use crate::error::{PfsError, Result};
use crate::validate::validate_pfs_term;

/// A rule over metavariables, standing for all its instances.
#[derive(Clone, Debug)]
pub struct RuleSchema {
    pub name: String,
    pub metas: IndexMap<String, MetaInfo>,
    pub lhs: Tm,
    pub rhs: Tm,
    pub ty: Ty,
}

#[derive(Clone, Debug, Default)]
pub struct System {
    pub sig: Signature,
    pub rules: Vec<RuleSchema>,
}

impl System {
    pub fn rule(&self, name: &str) -> Option<&RuleSchema> {
        self.rules.iter().find(|r| r.name == name)
    }
}

impl RuleSchema {
    pub fn core_metas(&self) -> Metas {
        let mut m = Metas::default();
        for (n, info) in &self.metas {
            if info.is_type {
                m.types.insert(n.as_str().into(), info.kind.clone());
            } else if let Some(t) = &info.ty {
                m.terms.insert(n.as_str().into(), t.clone());
            }
        }
        m
    }

    pub fn meta_ctx(&self, n: &str) -> Option<Vec<(Name, bool)>> {
        self.metas.get(n).map(|m| m.ctx.iter().map(|(c, t)| (c.as_str().into(), *t)).collect())
    }

    pub fn show_term(&self, t: &Tm, unicode: bool) -> String {
        let f = |n: &str| self.meta_ctx(n);
        let p = Printer { unicode, meta_ctx: Some(&f) };
        p.term(t)
    }

    pub fn show_type(&self, t: &Ty, unicode: bool) -> String {
        let f = |n: &str| self.meta_ctx(n);
        let p = Printer { unicode, meta_ctx: Some(&f) };
        p.ty(t)
    }

    pub fn display(&self, unicode: bool) -> String {
        let arrow = if unicode { "⇒" } else { "=>" };
        format!("{} {arrow} {}", self.show_term(&self.lhs, unicode), self.show_term(&self.rhs, unicode))
    }

    pub fn term_metas(&self) -> Vec<&str> {
        self.metas.iter().filter(|(_, m)| !m.is_type).map(|(n, _)| n.as_str()).collect()
    }

    pub fn type_metas(&self) -> Vec<&str> {
        self.metas.iter().filter(|(_, m)| m.is_type).map(|(n, _)| n.as_str()).collect()
    }
}

/// Metavariable occurrences in a term, type metavariables included.
pub fn meta_occurrences(t: &Tm, out: &mut Vec<Name>) {
    fn ty_rec(t: &Ty, out: &mut Vec<Name>) {
        match &**t {
            Type::Meta(n, args) => {
                out.push(n.clone());
                args.iter().for_each(|a| ty_rec(a, out));
            }
            Type::App(a, b) | Type::Arrow(a, b) => {
                ty_rec(a, out);
                ty_rec(b, out);
            }
            Type::Lam(_, _, b) | Type::Forall(_, _, b) => ty_rec(b, out),
            Type::Bound(_) | Type::Free(..) | Type::Const(_) => {}
        }
    }
    match &**t {
        Term::Meta(n, args) => {
            out.push(n.clone());
            for a in args {
                match a {
                    Arg::Ty(ty) => ty_rec(ty, out),
                    Arg::Tm(u) => meta_occurrences(u, out),
                }
            }
        }
        Term::Free(_, ty) => ty_rec(ty, out),
        Term::Lam(_, ty, b) => {
            ty_rec(ty, out);
            meta_occurrences(b, out);
        }
        Term::TyLam(_, _, b) => meta_occurrences(b, out),
        Term::App(a, b) => {
            meta_occurrences(a, out);
            meta_occurrences(b, out);
        }
        Term::TyApp(a, ty) => {
            meta_occurrences(a, out);
            ty_rec(ty, out);
        }
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => {}
    }
}

fn pattern_args(t: &Tm) -> bool {
    match &**t {
        Term::Meta(_, args) => {
            let mut tys = Vec::new();
            let mut tms = Vec::new();
            for a in args {
                match a {
                    Arg::Ty(t) => match &**t {
                        Type::Bound(i) if !tys.contains(i) => tys.push(*i),
                        _ => return false,
                    },
                    Arg::Tm(t) => match &**t {
                        Term::Bound(i) if !tms.contains(i) => tms.push(*i),
                        _ => return false,
                    },
                }
            }
            true
        }
        Term::Lam(_, _, b) | Term::TyLam(_, _, b) | Term::TyApp(b, _) => pattern_args(b),
        Term::App(a, b) => pattern_args(a) && pattern_args(b),
        _ => true,
    }
}

/// Checks metavariable scoping, linearity of the left-hand side, the head
/// restriction on both sides and equality of their types.
pub fn check_rule_wellformed(r: &RuleSchema, sig: &Signature) -> Result<()> {
    let scope = |msg: String| PfsError::Scope { rule: r.name.clone(), msg };
    let mismatch = |msg: String| PfsError::TypeMismatch { rule: r.name.clone(), msg };
    let mut lhs_metas = Vec::new();
    meta_occurrences(&r.lhs, &mut lhs_metas);
    for n in r.term_metas() {
        let c = lhs_metas.iter().filter(|m| &***m == n).count();
        if c > 1 {
            return Err(scope(format!("metavariable `{n}` occurs more than once on the left-hand side")));
        }
    }
    for n in r.metas.keys() {
        if !lhs_metas.iter().any(|m| &**m == n.as_str()) {
            return Err(scope(format!("metavariable `{n}` does not occur on the left-hand side")));
        }
    }
    let mut rhs_metas = Vec::new();
    meta_occurrences(&r.rhs, &mut rhs_metas);
    if let Some(n) = rhs_metas.iter().find(|m| !lhs_metas.contains(m)) {
        return Err(scope(format!("metavariable `{n}` of the right-hand side is not bound on the left")));
    }
    if !pattern_args(&r.lhs) {
        return Err(scope("left-hand side metavariables may only be applied to distinct bound variables".into()));
    }
    match &*spine(&r.lhs).0 {
        Term::Sym(_) => {}
        _ => return Err(PfsError::HeadViolation { path: "e".into(), msg: "left-hand side is not headed by a function symbol".into() }),
    }
    validate_pfs_term(&r.lhs, sig)?;
    validate_pfs_term(&r.rhs, sig)?;
    let metas = r.core_metas();
    let lift = |e: CoreError| match e {
        CoreError::UnknownMeta(n) => scope(format!("unknown metavariable `{n}`")),
        e => mismatch(e.to_string()),
    };
    let lt = typecheck(&r.lhs, sig, &metas).map_err(lift)?;
    let rt = typecheck(&r.rhs, sig, &metas).map_err(lift)?;
    if lt != rt {
        return Err(mismatch(format!(
            "left-hand side has type {}, right-hand side {}",
            r.show_type(&lt, false),
            r.show_type(&rt, false)
        )));
    }
    if lt != r.ty {
        return Err(mismatch("recorded rule type differs from the left-hand side".into()));
    }
    Ok(())
}
