use std::sync::Arc;

use indexmap::IndexMap;
use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::{typecheck_in, Kind, Metas, Signature};

use crate::rename::{rename_tm, rename_ty};
use crate::schema::RuleSchema;

/// Metavariable bindings. Each body lives under the binders of the
/// metavariable's context; its remaining loose indices refer to the scope
/// of the matched subterm.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Replacement {
    pub types: IndexMap<String, Ty>,
    pub terms: IndexMap<String, Tm>,
}

fn distinct_ty_args(args: &[Ty]) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for a in args {
        match &**a {
            Type::Bound(i) if !out.contains(i) => out.push(*i),
            _ => return None,
        }
    }
    Some(out)
}

fn ty_head_meta(t: &Ty) -> bool {
    matches!(&*ty::spine(t).0, Type::Meta(..))
}

fn kind_args(k: &Kind) -> Vec<Kind> {
    let mut out = Vec::new();
    let mut cur = k;
    while let Kind::Arrow(a, b) = cur {
        out.push((**a).clone());
        cur = b;
    }
    out
}

/// Abstraction of `f` over `c` binders: `c - 1 - k` for the k-th listed
/// index, outer indices lowered past the `d` local binders.
fn abstractor(idx: Vec<usize>, d: usize) -> impl Fn(usize) -> Option<usize> {
    let c = idx.len();
    move |j| {
        if j < d {
            idx.iter().position(|&a| a == j).map(|k| c - 1 - k)
        } else {
            Some(j - d + c)
        }
    }
}

impl Replacement {
    /// Instantiates type metavariables in `t`, which sits under `c` type
    /// binders of the pattern.
    pub fn inst_ty(&self, r: &RuleSchema, t: &Ty, c: usize) -> Option<Ty> {
        Some(ty::normalize(&self.inst_ty_raw(r, t, c)?))
    }

    fn inst_ty_raw(&self, r: &RuleSchema, t: &Ty, c: usize) -> Option<Ty> {
        Some(match &**t {
            Type::Meta(n, args) => {
                let body = self.types.get(&**n)?;
                let kinds = kind_args(&r.metas.get(&**n)?.kind);
                let mut wrap = body.clone();
                for k in kinds.iter().take(args.len()).rev() {
                    wrap = ty::lam("a", k.clone(), wrap);
                }
                let wrap = ty::shift(&wrap, c as isize, 0);
                let args = args.iter().map(|a| self.inst_ty_raw(r, a, c)).collect::<Option<Vec<_>>>()?;
                args.into_iter().fold(wrap, ty::app)
            }
            Type::Bound(_) | Type::Free(..) | Type::Const(_) => t.clone(),
            Type::App(a, b) => ty::app(self.inst_ty_raw(r, a, c)?, self.inst_ty_raw(r, b, c)?),
            Type::Arrow(a, b) => ty::arrow(self.inst_ty_raw(r, a, c)?, self.inst_ty_raw(r, b, c)?),
            Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), self.inst_ty_raw(r, b, c + 1)?)),
            Type::Forall(h, k, b) => Arc::new(Type::Forall(h.clone(), k.clone(), self.inst_ty_raw(r, b, c + 1)?)),
        })
    }

    /// Instantiates all metavariables of `t`; explicit substitutions carried
    /// as metavariable arguments are carried out.
    pub fn instantiate(&self, r: &RuleSchema, t: &Tm) -> Option<Tm> {
        self.inst_tm(r, t, 0, 0)
    }

    fn inst_tm(&self, r: &RuleSchema, t: &Tm, dy: usize, dm: usize) -> Option<Tm> {
        Some(match &**t {
            Term::Meta(n, args) => {
                let body = self.terms.get(&**n)?;
                let info = r.metas.get(&**n)?;
                let mut wrap = body.clone();
                for (_, is_ty) in info.ctx.iter().take(args.len()).rev() {
                    wrap = if *is_ty {
                        term::tylam("a", Kind::Star, wrap)
                    } else {
                        term::lam("x", ty::constant("_"), wrap)
                    };
                }
                let mut cur = term::shift_ty(&term::shift_tm(&wrap, dm as isize, 0), dy as isize, 0);
                for a in args {
                    cur = match (a, &*cur.clone()) {
                        (Arg::Ty(a), Term::TyLam(_, _, b)) => term::subst_ty_top(b, &self.inst_ty(r, a, dy)?),
                        (Arg::Tm(a), Term::Lam(_, _, b)) => term::subst_tm_top(b, &self.inst_tm(r, a, dy, dm)?),
                        _ => return None,
                    };
                }
                cur
            }
            Term::Bound(_) | Term::Sym(_) | Term::Num(_) => t.clone(),
            Term::Free(n, fty) => Arc::new(Term::Free(n.clone(), self.inst_ty(r, fty, dy)?)),
            Term::Lam(h, bty, b) => Arc::new(Term::Lam(h.clone(), self.inst_ty(r, bty, dy)?, self.inst_tm(r, b, dy, dm + 1)?)),
            Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), self.inst_tm(r, b, dy + 1, dm)?)),
            Term::App(f, a) => term::app(self.inst_tm(r, f, dy, dm)?, self.inst_tm(r, a, dy, dm)?),
            Term::TyApp(f, a) => term::tyapp(self.inst_tm(r, f, dy, dm)?, self.inst_ty(r, a, dy)?),
        })
    }

    /// Checks that each term binding has the instantiated declared type of
    /// its metavariable. Bindings must not mention scope outside the rule.
    pub fn check_types(&self, r: &RuleSchema, sig: &Signature) -> bool {
        for (n, body) in &self.terms {
            let Some(info) = r.metas.get(n) else { return false };
            let Some(flat) = info.ty.as_ref().and_then(|t| self.inst_ty(r, t, 0)) else { return false };
            let mut kinds = Vec::new();
            let mut tms = Vec::new();
            let mut cur = flat;
            for (_, is_ty) in &info.ctx {
                let next = match (&*cur, is_ty) {
                    (Type::Forall(_, k, b), true) => {
                        kinds.push(k.clone());
                        b.clone()
                    }
                    (Type::Arrow(d, b), false) => {
                        tms.push((d.clone(), kinds.len()));
                        b.clone()
                    }
                    _ => return false,
                };
                cur = next;
            }
            match typecheck_in(body, sig, &Metas::default(), &kinds, &tms) {
                Ok(t) if t == cur => {}
                _ => return false,
            }
        }
        true
    }
}

struct Matcher<'a> {
    rule: &'a RuleSchema,
    b: Replacement,
    deferred: Vec<(Ty, Ty, usize)>,
}

impl Matcher<'_> {
    fn inst_eq(&mut self, p: &Ty, s: &Ty, d: usize) -> bool {
        match self.b.inst_ty(self.rule, p, d) {
            Some(t) => t == *s,
            None => {
                self.deferred.push((p.clone(), s.clone(), d));
                true
            }
        }
    }

    fn ty(&mut self, p: &Ty, s: &Ty, d: usize) -> bool {
        match (&**p, &**s) {
            (Type::Meta(n, args), _) => {
                if self.b.types.contains_key(&**n) {
                    return self.inst_eq(p, s, d);
                }
                match distinct_ty_args(args) {
                    Some(idx) => match rename_ty(s, 0, &abstractor(idx, d)) {
                        Some(body) => {
                            self.b.types.insert(n.to_string(), body);
                            true
                        }
                        None => false,
                    },
                    None => self.inst_eq(p, s, d),
                }
            }
            (Type::App(..), _) if ty_head_meta(p) => self.inst_eq(p, s, d),
            (Type::Bound(i), Type::Bound(j)) => i == j,
            (Type::Free(a, k), Type::Free(b, l)) => a == b && k == l,
            (Type::Const(a), Type::Const(b)) => a == b,
            (Type::App(f, a), Type::App(g, b)) | (Type::Arrow(f, a), Type::Arrow(g, b)) => {
                self.ty(f, g, d) && self.ty(a, b, d)
            }
            (Type::Lam(_, k, b), Type::Lam(_, l, c)) | (Type::Forall(_, k, b), Type::Forall(_, l, c)) => {
                k == l && self.ty(b, c, d + 1)
            }
            _ => false,
        }
    }

    fn tm(&mut self, p: &Tm, s: &Tm, dy: usize, dm: usize) -> bool {
        match (&**p, &**s) {
            (Term::Meta(n, args), _) => {
                let mut tys = Vec::new();
                let mut tms = Vec::new();
                for a in args {
                    match a {
                        Arg::Ty(t) => match &**t {
                            Type::Bound(i) => tys.push(*i),
                            _ => return false,
                        },
                        Arg::Tm(t) => match &**t {
                            Term::Bound(i) => tms.push(*i),
                            _ => return false,
                        },
                    }
                }
                let fy = abstractor(tys, dy);
                let fm = abstractor(tms, dm);
                match rename_tm(s, &fy, &fm) {
                    Some(body) => match self.b.terms.get(&**n) {
                        Some(prev) => *prev == body,
                        None => {
                            self.b.terms.insert(n.to_string(), body);
                            true
                        }
                    },
                    None => false,
                }
            }
            (Term::Bound(i), Term::Bound(j)) => i == j,
            (Term::Free(a, t), Term::Free(b, u)) => a == b && self.ty(t, u, dy),
            (Term::Sym(a), Term::Sym(b)) => a == b,
            (Term::Num(a), Term::Num(b)) => a == b,
            (Term::Lam(_, t, b), Term::Lam(_, u, c)) => self.ty(t, u, dy) && self.tm(b, c, dy, dm + 1),
            (Term::TyLam(_, k, b), Term::TyLam(_, l, c)) => k == l && self.tm(b, c, dy + 1, dm),
            (Term::App(f, a), Term::App(g, b)) => self.tm(f, g, dy, dm) && self.tm(a, b, dy, dm),
            (Term::TyApp(f, t), Term::TyApp(g, u)) => self.tm(f, g, dy, dm) && self.ty(t, u, dy),
            _ => false,
        }
    }

    fn settle(&mut self) -> bool {
        loop {
            let pending = std::mem::take(&mut self.deferred);
            if pending.is_empty() {
                return true;
            }
            let before = pending.len();
            let mut stuck = Vec::new();
            for (p, s, d) in pending {
                match self.b.inst_ty(self.rule, &p, d) {
                    Some(t) if t == s => {}
                    Some(_) => return false,
                    None => stuck.push((p, s, d)),
                }
            }
            if stuck.len() == before {
                // Bind the head of `phi a ...` from a subject with the same trailing arguments.
                let (p, s, d) = stuck.remove(0);
                let (ph, pargs) = ty::spine(&p);
                let (sh, sargs) = ty::spine(&s);
                if sargs.len() < pargs.len() {
                    return false;
                }
                let keep = sargs.len() - pargs.len();
                if pargs.iter().zip(&sargs[keep..]).any(|(a, b)| a != b) {
                    return false;
                }
                let head = sargs[..keep].iter().cloned().fold(sh, ty::app);
                if !self.ty(&ph, &head, d) {
                    return false;
                }
            }
            self.deferred.extend(stuck);
        }
    }
}

/// Matches the left-hand side of `r` against `subject`; the returned
/// bindings reproduce the subject when instantiated.
pub fn match_schema(r: &RuleSchema, subject: &Tm) -> Option<Replacement> {
    let mut m = Matcher { rule: r, b: Replacement::default(), deferred: Vec::new() };
    if !m.tm(&r.lhs, subject, 0, 0) || !m.settle() {
        return None;
    }
    let b = m.b;
    (b.instantiate(r, &r.lhs)? == *subject).then_some(b)
}
