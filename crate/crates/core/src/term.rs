use std::sync::Arc;

use num_bigint::BigUint;

use crate::kind::{Hint, Kind, Name};
use crate::ty::{self, Ty, Type};

pub type Tm = Arc<Term>;

/// Church-style terms. Term indices count term binders only; type indices
/// inside embedded types count type binders only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Bound(usize),
    Free(Name, Ty),
    Sym(Name),
    Num(BigUint),
    /// A term metavariable applied to its context.
    Meta(Name, Vec<Arg>),
    Lam(Hint, Ty, Tm),
    TyLam(Hint, Kind, Tm),
    App(Tm, Tm),
    TyApp(Tm, Ty),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Ty(Ty),
    Tm(Tm),
}

pub fn bound(i: usize) -> Tm {
    Arc::new(Term::Bound(i))
}
pub fn free(n: &str, t: Ty) -> Tm {
    Arc::new(Term::Free(Arc::from(n), t))
}
pub fn sym(n: &str) -> Tm {
    Arc::new(Term::Sym(Arc::from(n)))
}
pub fn num(n: impl Into<BigUint>) -> Tm {
    Arc::new(Term::Num(n.into()))
}
pub fn lam(h: &str, t: Ty, body: Tm) -> Tm {
    Arc::new(Term::Lam(Hint::new(h), t, body))
}
pub fn tylam(h: &str, k: Kind, body: Tm) -> Tm {
    Arc::new(Term::TyLam(Hint::new(h), k, body))
}
pub fn app(f: Tm, a: Tm) -> Tm {
    Arc::new(Term::App(f, a))
}
pub fn tyapp(f: Tm, t: Ty) -> Tm {
    Arc::new(Term::TyApp(f, t))
}
pub fn apps(f: Tm, args: impl IntoIterator<Item = Tm>) -> Tm {
    args.into_iter().fold(f, app)
}
pub fn meta(n: &str, args: Vec<Arg>) -> Tm {
    Arc::new(Term::Meta(Arc::from(n), args))
}

/// Applies a head to mixed type and term arguments.
pub fn apply_args(f: Tm, args: &[Arg]) -> Tm {
    args.iter().fold(f, |acc, a| match a {
        Arg::Ty(t) => tyapp(acc, t.clone()),
        Arg::Tm(t) => app(acc, t.clone()),
    })
}

/// Head and argument spine of nested applications.
pub fn spine(t: &Tm) -> (Tm, Vec<Arg>) {
    let mut args = Vec::new();
    let mut cur = t.clone();
    loop {
        let next = match &*cur {
            Term::App(f, a) => {
                args.push(Arg::Tm(a.clone()));
                f.clone()
            }
            Term::TyApp(f, a) => {
                args.push(Arg::Ty(a.clone()));
                f.clone()
            }
            _ => break,
        };
        cur = next;
    }
    args.reverse();
    (cur, args)
}

/// Loose term index `>= c`.
pub fn has_loose_tm(t: &Tm, c: usize) -> bool {
    match &**t {
        Term::Bound(i) => *i >= c,
        Term::Free(..) | Term::Sym(_) | Term::Num(_) => false,
        Term::Meta(_, args) => args.iter().any(|a| match a {
            Arg::Ty(_) => false,
            Arg::Tm(t) => has_loose_tm(t, c),
        }),
        Term::Lam(_, _, b) => has_loose_tm(b, c + 1),
        Term::TyLam(_, _, b) => has_loose_tm(b, c),
        Term::App(f, a) => has_loose_tm(f, c) || has_loose_tm(a, c),
        Term::TyApp(f, _) => has_loose_tm(f, c),
    }
}

/// Loose type index `>= c` in any embedded type.
pub fn has_loose_ty(t: &Tm, c: usize) -> bool {
    match &**t {
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => false,
        Term::Free(_, ty) => ty::has_loose_from(ty, c),
        Term::Meta(_, args) => args.iter().any(|a| match a {
            Arg::Ty(t) => ty::has_loose_from(t, c),
            Arg::Tm(t) => has_loose_ty(t, c),
        }),
        Term::Lam(_, ty, b) => ty::has_loose_from(ty, c) || has_loose_ty(b, c),
        Term::TyLam(_, _, b) => has_loose_ty(b, c + 1),
        Term::App(f, a) => has_loose_ty(f, c) || has_loose_ty(a, c),
        Term::TyApp(f, ty) => has_loose_ty(f, c) || ty::has_loose_from(ty, c),
    }
}

pub fn mentions_tm_index(t: &Tm, idx: usize) -> bool {
    match &**t {
        Term::Bound(i) => *i == idx,
        Term::Free(..) | Term::Sym(_) | Term::Num(_) => false,
        Term::Meta(_, args) => args.iter().any(|a| match a {
            Arg::Ty(_) => false,
            Arg::Tm(t) => mentions_tm_index(t, idx),
        }),
        Term::Lam(_, _, b) => mentions_tm_index(b, idx + 1),
        Term::TyLam(_, _, b) => mentions_tm_index(b, idx),
        Term::App(f, a) => mentions_tm_index(f, idx) || mentions_tm_index(a, idx),
        Term::TyApp(f, _) => mentions_tm_index(f, idx),
    }
}

fn map_args(args: &[Arg], ft: &mut dyn FnMut(&Ty) -> Ty, fm: &mut dyn FnMut(&Tm) -> Tm) -> Vec<Arg> {
    args.iter()
        .map(|a| match a {
            Arg::Ty(t) => Arg::Ty(ft(t)),
            Arg::Tm(t) => Arg::Tm(fm(t)),
        })
        .collect()
}

/// Shifts loose term indices `>= c` by `d`.
pub fn shift_tm(t: &Tm, d: isize, c: usize) -> Tm {
    if d == 0 || !has_loose_tm(t, c) {
        return t.clone();
    }
    match &**t {
        Term::Bound(i) => {
            if *i >= c {
                let n = *i as isize + d;
                assert!(n >= 0, "negative de Bruijn index");
                bound(n as usize)
            } else {
                t.clone()
            }
        }
        Term::Free(..) | Term::Sym(_) | Term::Num(_) => t.clone(),
        Term::Meta(n, args) => Arc::new(Term::Meta(
            n.clone(),
            map_args(args, &mut |x| x.clone(), &mut |x| shift_tm(x, d, c)),
        )),
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(h.clone(), ty.clone(), shift_tm(b, d, c + 1))),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), shift_tm(b, d, c))),
        Term::App(f, a) => app(shift_tm(f, d, c), shift_tm(a, d, c)),
        Term::TyApp(f, ty) => tyapp(shift_tm(f, d, c), ty.clone()),
    }
}

/// Shifts loose type indices `>= c` by `d` in all embedded types.
pub fn shift_ty(t: &Tm, d: isize, c: usize) -> Tm {
    if d == 0 || !has_loose_ty(t, c) {
        return t.clone();
    }
    match &**t {
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => t.clone(),
        Term::Free(n, ty) => Arc::new(Term::Free(n.clone(), ty::shift(ty, d, c))),
        Term::Meta(n, args) => Arc::new(Term::Meta(
            n.clone(),
            map_args(args, &mut |x| ty::shift(x, d, c), &mut |x| shift_ty(x, d, c)),
        )),
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(h.clone(), ty::shift(ty, d, c), shift_ty(b, d, c))),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), shift_ty(b, d, c + 1))),
        Term::App(f, a) => app(shift_ty(f, d, c), shift_ty(a, d, c)),
        Term::TyApp(f, ty) => tyapp(shift_ty(f, d, c), ty::shift(ty, d, c)),
    }
}

/// Replaces term index `j` by `s` (given at the root scope).
pub fn subst_tm_at(t: &Tm, j: usize, s: &Tm) -> Tm {
    subst_tm_rec(t, j, s, 0, 0)
}

fn subst_tm_rec(t: &Tm, j: usize, s: &Tm, tc: usize, yc: usize) -> Tm {
    if !has_loose_tm(t, j + tc) {
        return t.clone();
    }
    match &**t {
        Term::Bound(i) => {
            if *i == j + tc {
                shift_ty(&shift_tm(s, tc as isize, 0), yc as isize, 0)
            } else {
                t.clone()
            }
        }
        Term::Free(..) | Term::Sym(_) | Term::Num(_) => t.clone(),
        Term::Meta(n, args) => Arc::new(Term::Meta(
            n.clone(),
            map_args(args, &mut |x| x.clone(), &mut |x| subst_tm_rec(x, j, s, tc, yc)),
        )),
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(
            h.clone(),
            ty.clone(),
            subst_tm_rec(b, j, s, tc + 1, yc),
        )),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(
            h.clone(),
            k.clone(),
            subst_tm_rec(b, j, s, tc, yc + 1),
        )),
        Term::App(f, a) => app(subst_tm_rec(f, j, s, tc, yc), subst_tm_rec(a, j, s, tc, yc)),
        Term::TyApp(f, ty) => tyapp(subst_tm_rec(f, j, s, tc, yc), ty.clone()),
    }
}

/// `body[0 := s]` for a term binder.
pub fn subst_tm_top(body: &Tm, s: &Tm) -> Tm {
    shift_tm(&subst_tm_at(body, 0, &shift_tm(s, 1, 0)), -1, 0)
}

/// Replaces type index `j` by `s` in all embedded types and re-normalizes them.
pub fn subst_ty_at(t: &Tm, j: usize, s: &Ty) -> Tm {
    subst_ty_rec(t, j, s, 0)
}

fn subst_ty_rec(t: &Tm, j: usize, s: &Ty, c: usize) -> Tm {
    if !has_loose_ty(t, j + c) {
        return t.clone();
    }
    let st = |ty: &Ty| ty::normalize(&ty::subst_at(ty, j + c, &ty::shift(s, c as isize, 0)));
    match &**t {
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => t.clone(),
        Term::Free(n, ty) => Arc::new(Term::Free(n.clone(), st(ty))),
        Term::Meta(n, args) => Arc::new(Term::Meta(
            n.clone(),
            map_args(args, &mut |x| st(x), &mut |x| subst_ty_rec(x, j, s, c)),
        )),
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(h.clone(), st(ty), subst_ty_rec(b, j, s, c))),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(
            h.clone(),
            k.clone(),
            subst_ty_rec(b, j, s, c + 1),
        )),
        Term::App(f, a) => app(subst_ty_rec(f, j, s, c), subst_ty_rec(a, j, s, c)),
        Term::TyApp(f, ty) => tyapp(subst_ty_rec(f, j, s, c), st(ty)),
    }
}

/// `body[0 := s]` for a type binder.
pub fn subst_ty_top(body: &Tm, s: &Ty) -> Tm {
    shift_ty(&subst_ty_at(body, 0, &ty::shift(s, 1, 0)), -1, 0)
}

/// Replaces free term variables by name. Replacements live at the root scope.
pub fn subst_free(t: &Tm, f: &dyn Fn(&str) -> Option<Tm>) -> Tm {
    subst_free_rec(t, f, 0, 0)
}

fn subst_free_rec(t: &Tm, f: &dyn Fn(&str) -> Option<Tm>, tc: usize, yc: usize) -> Tm {
    match &**t {
        Term::Free(n, _) => match f(n) {
            Some(s) => shift_ty(&shift_tm(&s, tc as isize, 0), yc as isize, 0),
            None => t.clone(),
        },
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => t.clone(),
        Term::Meta(n, args) => Arc::new(Term::Meta(
            n.clone(),
            map_args(args, &mut |x| x.clone(), &mut |x| subst_free_rec(x, f, tc, yc)),
        )),
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(h.clone(), ty.clone(), subst_free_rec(b, f, tc + 1, yc))),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), subst_free_rec(b, f, tc, yc + 1))),
        Term::App(a, b) => app(subst_free_rec(a, f, tc, yc), subst_free_rec(b, f, tc, yc)),
        Term::TyApp(a, ty) => tyapp(subst_free_rec(a, f, tc, yc), ty.clone()),
    }
}

/// Maps every embedded type (binder annotations, type arguments, free
/// variable annotations, metavariable type arguments).
pub fn map_types(t: &Tm, f: &dyn Fn(&Ty, usize) -> Ty) -> Tm {
    map_types_rec(t, f, 0)
}

fn map_types_rec(t: &Tm, f: &dyn Fn(&Ty, usize) -> Ty, c: usize) -> Tm {
    match &**t {
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => t.clone(),
        Term::Free(n, ty) => Arc::new(Term::Free(n.clone(), f(ty, c))),
        Term::Meta(n, args) => Arc::new(Term::Meta(
            n.clone(),
            map_args(args, &mut |x| f(x, c), &mut |x| map_types_rec(x, f, c)),
        )),
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(h.clone(), f(ty, c), map_types_rec(b, f, c))),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), map_types_rec(b, f, c + 1))),
        Term::App(a, b) => app(map_types_rec(a, f, c), map_types_rec(b, f, c)),
        Term::TyApp(a, ty) => tyapp(map_types_rec(a, f, c), f(ty, c)),
    }
}

/// Replaces free type variables by closed constructors everywhere.
pub fn subst_free_ty(t: &Tm, f: &dyn Fn(&str) -> Option<Ty>) -> Tm {
    map_types(t, &|ty, _| ty::normalize(&ty::subst_free(ty, f)))
}

/// The canonical representative: all embedded types beta-normal.
pub fn canonicalize(t: &Tm) -> Tm {
    map_types(t, &|ty, _| ty::normalize(ty))
}

pub fn free_vars(t: &Tm, out: &mut Vec<(Name, Ty)>) {
    match &**t {
        Term::Free(n, ty) => {
            if !out.iter().any(|(m, _)| m == n) {
                out.push((n.clone(), ty.clone()));
            }
        }
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => {}
        Term::Meta(_, args) => args.iter().for_each(|a| {
            if let Arg::Tm(t) = a {
                free_vars(t, out)
            }
        }),
        Term::Lam(_, _, b) | Term::TyLam(_, _, b) => free_vars(b, out),
        Term::App(a, b) => {
            free_vars(a, out);
            free_vars(b, out);
        }
        Term::TyApp(a, _) => free_vars(a, out),
    }
}

/// Free type variables occurring anywhere, including free variable annotations.
pub fn free_ty_vars(t: &Tm, out: &mut Vec<(Name, Kind)>) {
    collect_ftv(t, out)
}

fn collect_ftv(t: &Tm, out: &mut Vec<(Name, Kind)>) {
    match &**t {
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => {}
        Term::Free(_, ty) => ty::free_vars(ty, out),
        Term::Meta(_, args) => args.iter().for_each(|a| match a {
            Arg::Ty(t) => ty::free_vars(t, out),
            Arg::Tm(t) => collect_ftv(t, out),
        }),
        Term::Lam(_, ty, b) => {
            ty::free_vars(ty, out);
            collect_ftv(b, out)
        }
        Term::TyLam(_, _, b) => collect_ftv(b, out),
        Term::App(a, b) => {
            collect_ftv(a, out);
            collect_ftv(b, out)
        }
        Term::TyApp(a, ty) => {
            collect_ftv(a, out);
            ty::free_vars(ty, out)
        }
    }
}

pub fn is_closed(t: &Tm) -> bool {
    let mut v = Vec::new();
    free_vars(t, &mut v);
    v.is_empty() && !has_meta(t)
}

pub fn has_meta(t: &Tm) -> bool {
    match &**t {
        Term::Meta(..) => true,
        Term::Bound(_) | Term::Free(..) | Term::Sym(_) | Term::Num(_) => false,
        Term::Lam(_, _, b) | Term::TyLam(_, _, b) => has_meta(b),
        Term::App(a, b) => has_meta(a) || has_meta(b),
        Term::TyApp(a, _) => has_meta(a),
    }
}

pub fn size(t: &Tm) -> usize {
    match &**t {
        Term::Bound(_) | Term::Free(..) | Term::Sym(_) | Term::Num(_) => 1,
        Term::Meta(_, args) => {
            1 + args
                .iter()
                .map(|a| match a {
                    Arg::Ty(_) => 1,
                    Arg::Tm(t) => size(t),
                })
                .sum::<usize>()
        }
        Term::Lam(_, _, b) | Term::TyLam(_, _, b) => 1 + size(b),
        Term::App(a, b) => 1 + size(a) + size(b),
        Term::TyApp(a, _) => 1 + size(a),
    }
}

/// Child positions are 1-based: function 1 and argument 2 of an
/// application, the body 1 of a binder, the term 1 of a type application.
pub fn subterm(t: &Tm, pos: &[u8]) -> Option<Tm> {
    let mut cur = t.clone();
    for &p in pos {
        let next = match (&*cur, p) {
            (Term::App(f, _), 1) => f.clone(),
            (Term::App(_, a), 2) => a.clone(),
            (Term::TyApp(f, _), 1) => f.clone(),
            (Term::Lam(_, _, b), 1) | (Term::TyLam(_, _, b), 1) => b.clone(),
            _ => return None,
        };
        cur = next;
    }
    Some(cur)
}

/// Replaces the subterm at `pos`. The replacement is taken as already
/// living in the scope of that position.
pub fn replace_at(t: &Tm, pos: &[u8], new: Tm) -> Option<Tm> {
    if pos.is_empty() {
        return Some(new);
    }
    let rest = &pos[1..];
    Some(match (&**t, pos[0]) {
        (Term::App(f, a), 1) => app(replace_at(f, rest, new)?, a.clone()),
        (Term::App(f, a), 2) => app(f.clone(), replace_at(a, rest, new)?),
        (Term::TyApp(f, ty), 1) => tyapp(replace_at(f, rest, new)?, ty.clone()),
        (Term::Lam(h, ty, b), 1) => Arc::new(Term::Lam(h.clone(), ty.clone(), replace_at(b, rest, new)?)),
        (Term::TyLam(h, k, b), 1) => Arc::new(Term::TyLam(h.clone(), k.clone(), replace_at(b, rest, new)?)),
        _ => return None,
    })
}

pub fn format_pos(pos: &[u8]) -> String {
    if pos.is_empty() {
        "e".to_string()
    } else {
        pos.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl Term {
    pub fn as_num(&self) -> Option<&BigUint> {
        match self {
            Term::Num(n) => Some(n),
            _ => None,
        }
    }
}

/// Type-level helper shared by modules that need a nat-typed free variable.
pub fn is_const_type(t: &Ty, n: &str) -> bool {
    matches!(&**t, Type::Const(c) if &**c == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ty::{arrow, constant};

    fn nat() -> Ty {
        constant("nat")
    }

    #[test]
    fn beta_substitution_shifts_under_binders() {
        // (\y. x y)[x := \z. z] where x is index 0 outside
        let body = lam("y", nat(), app(bound(1), bound(0)));
        let id = lam("z", nat(), bound(0));
        let r = subst_tm_top(&body, &id);
        assert_eq!(r, lam("y", nat(), app(lam("z", nat(), bound(0)), bound(0))));
    }

    #[test]
    fn type_substitution_retypes_variables() {
        // (/\ . \x:0. x) body instantiated at nat: \x:nat. x
        let body = lam("x", crate::ty::bound(0), bound(0));
        let r = subst_ty_top(&body, &nat());
        assert_eq!(r, lam("x", nat(), bound(0)));
    }

    #[test]
    fn replace_and_fetch_positions() {
        let t = app(free("f", arrow(nat(), nat())), num(3u32));
        assert_eq!(subterm(&t, &[2]).unwrap(), num(3u32));
        let r = replace_at(&t, &[2], num(4u32)).unwrap();
        assert_eq!(subterm(&r, &[2]).unwrap(), num(4u32));
        assert_eq!(format_pos(&[1, 2]), "1.2");
        assert_eq!(format_pos(&[]), "e");
    }
}
