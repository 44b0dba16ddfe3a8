use std::sync::Arc;

use polyterm_core::term::{Arg, Term, Tm};
use polyterm_core::ty::{Ty, Type};

pub type Map<'a> = &'a dyn Fn(usize) -> Option<usize>;

/// Renames loose type indices through `f`, failing when `f` does.
pub fn rename_ty(t: &Ty, c: usize, f: Map) -> Option<Ty> {
    Some(match &**t {
        Type::Bound(i) if *i >= c => Arc::new(Type::Bound(f(i - c)? + c)),
        Type::Bound(_) | Type::Free(..) | Type::Const(_) => t.clone(),
        Type::Meta(n, args) => Arc::new(Type::Meta(
            n.clone(),
            args.iter().map(|a| rename_ty(a, c, f)).collect::<Option<_>>()?,
        )),
        Type::App(a, b) => Arc::new(Type::App(rename_ty(a, c, f)?, rename_ty(b, c, f)?)),
        Type::Arrow(a, b) => Arc::new(Type::Arrow(rename_ty(a, c, f)?, rename_ty(b, c, f)?)),
        Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), rename_ty(b, c + 1, f)?)),
        Type::Forall(h, k, b) => Arc::new(Type::Forall(h.clone(), k.clone(), rename_ty(b, c + 1, f)?)),
    })
}

/// Renames loose type indices through `fy` and loose term indices through `fm`.
pub fn rename_tm(t: &Tm, fy: Map, fm: Map) -> Option<Tm> {
    rec(t, 0, 0, fy, fm)
}

fn rec(t: &Tm, cy: usize, cm: usize, fy: Map, fm: Map) -> Option<Tm> {
    Some(match &**t {
        Term::Bound(i) if *i >= cm => Arc::new(Term::Bound(fm(i - cm)? + cm)),
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => t.clone(),
        Term::Free(n, ty) => Arc::new(Term::Free(n.clone(), rename_ty(ty, cy, fy)?)),
        Term::Meta(n, args) => Arc::new(Term::Meta(
            n.clone(),
            args.iter()
                .map(|a| match a {
                    Arg::Ty(ty) => rename_ty(ty, cy, fy).map(Arg::Ty),
                    Arg::Tm(u) => rec(u, cy, cm, fy, fm).map(Arg::Tm),
                })
                .collect::<Option<_>>()?,
        )),
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(h.clone(), rename_ty(ty, cy, fy)?, rec(b, cy, cm + 1, fy, fm)?)),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), rec(b, cy + 1, cm, fy, fm)?)),
        Term::App(a, b) => Arc::new(Term::App(rec(a, cy, cm, fy, fm)?, rec(b, cy, cm, fy, fm)?)),
        Term::TyApp(a, ty) => Arc::new(Term::TyApp(rec(a, cy, cm, fy, fm)?, rename_ty(ty, cy, fy)?)),
    })
}
