use std::sync::Arc;

use crate::kind::{Hint, Kind, Name};

pub type Ty = Arc<Type>;

/// Type constructors in nameless form. `Bound(0)` refers to the innermost
/// enclosing type binder, counting type-level `Lam`/`Forall` and term-level
/// type abstractions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Bound(usize),
    Free(Name, Kind),
    Const(Name),
    /// A type metavariable applied to the bound variables of its context.
    Meta(Name, Vec<Ty>),
    App(Ty, Ty),
    Arrow(Ty, Ty),
    Lam(Hint, Kind, Ty),
    Forall(Hint, Kind, Ty),
}

pub fn bound(i: usize) -> Ty {
    Arc::new(Type::Bound(i))
}
pub fn free(n: &str, k: Kind) -> Ty {
    Arc::new(Type::Free(Arc::from(n), k))
}
pub fn constant(n: &str) -> Ty {
    Arc::new(Type::Const(Arc::from(n)))
}
pub fn app(f: Ty, a: Ty) -> Ty {
    Arc::new(Type::App(f, a))
}
pub fn arrow(a: Ty, b: Ty) -> Ty {
    Arc::new(Type::Arrow(a, b))
}
pub fn lam(h: &str, k: Kind, body: Ty) -> Ty {
    Arc::new(Type::Lam(Hint::new(h), k, body))
}
pub fn forall(h: &str, k: Kind, body: Ty) -> Ty {
    Arc::new(Type::Forall(Hint::new(h), k, body))
}
pub fn meta(n: &str, args: Vec<Ty>) -> Ty {
    Arc::new(Type::Meta(Arc::from(n), args))
}

/// `a1 -> ... -> an -> r`
pub fn arrows(args: impl IntoIterator<Item = Ty>, r: Ty) -> Ty {
    let args: Vec<Ty> = args.into_iter().collect();
    args.into_iter().rev().fold(r, |acc, a| arrow(a, acc))
}

/// Shifts loose indices `>= cutoff` by `d`.
pub fn shift(t: &Ty, d: isize, cutoff: usize) -> Ty {
    if d == 0 || !has_loose_from(t, cutoff) {
        return t.clone();
    }
    shift_rec(t, d, cutoff)
}

fn shift_rec(t: &Ty, d: isize, c: usize) -> Ty {
    match &**t {
        Type::Bound(i) => {
            if *i >= c {
                let n = *i as isize + d;
                assert!(n >= 0, "negative de Bruijn index");
                bound(n as usize)
            } else {
                t.clone()
            }
        }
        Type::Free(..) | Type::Const(_) => t.clone(),
        Type::Meta(n, args) => Arc::new(Type::Meta(
            n.clone(),
            args.iter().map(|a| shift(a, d, c)).collect(),
        )),
        Type::App(f, a) => app(shift(f, d, c), shift(a, d, c)),
        Type::Arrow(a, b) => arrow(shift(a, d, c), shift(b, d, c)),
        Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), shift(b, d, c + 1))),
        Type::Forall(h, k, b) => {
            Arc::new(Type::Forall(h.clone(), k.clone(), shift(b, d, c + 1)))
        }
    }
}

/// True if some index `>= cutoff` occurs free.
pub fn has_loose_from(t: &Ty, cutoff: usize) -> bool {
    match &**t {
        Type::Bound(i) => *i >= cutoff,
        Type::Free(..) | Type::Const(_) => false,
        Type::Meta(_, args) => args.iter().any(|a| has_loose_from(a, cutoff)),
        Type::App(a, b) | Type::Arrow(a, b) => {
            has_loose_from(a, cutoff) || has_loose_from(b, cutoff)
        }
        Type::Lam(_, _, b) | Type::Forall(_, _, b) => has_loose_from(b, cutoff + 1),
    }
}

pub fn mentions_index(t: &Ty, idx: usize) -> bool {
    match &**t {
        Type::Bound(i) => *i == idx,
        Type::Free(..) | Type::Const(_) => false,
        Type::Meta(_, args) => args.iter().any(|a| mentions_index(a, idx)),
        Type::App(a, b) | Type::Arrow(a, b) => mentions_index(a, idx) || mentions_index(b, idx),
        Type::Lam(_, _, b) | Type::Forall(_, _, b) => mentions_index(b, idx + 1),
    }
}

/// Replaces index `j` (relative to the root) by `s`, which lives at the root scope.
pub fn subst_at(t: &Ty, j: usize, s: &Ty) -> Ty {
    subst_rec(t, j, s, 0)
}

fn subst_rec(t: &Ty, j: usize, s: &Ty, c: usize) -> Ty {
    if !has_loose_from(t, j + c) {
        return t.clone();
    }
    match &**t {
        Type::Bound(i) => {
            if *i == j + c {
                shift(s, c as isize, 0)
            } else {
                t.clone()
            }
        }
        Type::Free(..) | Type::Const(_) => t.clone(),
        Type::Meta(n, args) => Arc::new(Type::Meta(
            n.clone(),
            args.iter().map(|a| subst_rec(a, j, s, c)).collect(),
        )),
        Type::App(f, a) => app(subst_rec(f, j, s, c), subst_rec(a, j, s, c)),
        Type::Arrow(a, b) => arrow(subst_rec(a, j, s, c), subst_rec(b, j, s, c)),
        Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), subst_rec(b, j, s, c + 1))),
        Type::Forall(h, k, b) => Arc::new(Type::Forall(
            h.clone(),
            k.clone(),
            subst_rec(b, j, s, c + 1),
        )),
    }
}

/// `body[0 := s]` where `body` sits under one binder and `s` outside it.
pub fn subst_top(body: &Ty, s: &Ty) -> Ty {
    shift(&subst_at(body, 0, &shift(s, 1, 0)), -1, 0)
}

/// Instantiates a binder body and returns the beta-normal result.
pub fn instantiate(body: &Ty, s: &Ty) -> Ty {
    normalize(&subst_top(body, s))
}

/// Beta-normal form.
pub fn normalize(t: &Ty) -> Ty {
    if is_normal(t) {
        return t.clone();
    }
    match &**t {
        Type::Bound(_) | Type::Free(..) | Type::Const(_) => t.clone(),
        Type::Meta(n, args) => Arc::new(Type::Meta(n.clone(), args.iter().map(normalize).collect())),
        Type::App(f, a) => {
            let f = normalize(f);
            let a = normalize(a);
            match &*f {
                Type::Lam(_, _, b) => normalize(&subst_top(b, &a)),
                _ => app(f, a),
            }
        }
        Type::Arrow(a, b) => arrow(normalize(a), normalize(b)),
        Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), normalize(b))),
        Type::Forall(h, k, b) => Arc::new(Type::Forall(h.clone(), k.clone(), normalize(b))),
    }
}

pub fn is_normal(t: &Ty) -> bool {
    match &**t {
        Type::Bound(_) | Type::Free(..) | Type::Const(_) => true,
        Type::Meta(_, args) => args.iter().all(is_normal),
        Type::App(f, a) => !matches!(**f, Type::Lam(..)) && is_normal(f) && is_normal(a),
        Type::Arrow(a, b) => is_normal(a) && is_normal(b),
        Type::Lam(_, _, b) | Type::Forall(_, _, b) => is_normal(b),
    }
}

/// Replaces free type variables by name. Replacements must be closed
/// with respect to bound indices.
pub fn subst_free(t: &Ty, f: &dyn Fn(&str) -> Option<Ty>) -> Ty {
    match &**t {
        Type::Free(n, _) => f(n).unwrap_or_else(|| t.clone()),
        Type::Bound(_) | Type::Const(_) => t.clone(),
        Type::Meta(n, args) => Arc::new(Type::Meta(
            n.clone(),
            args.iter().map(|a| subst_free(a, f)).collect(),
        )),
        Type::App(a, b) => app(subst_free(a, f), subst_free(b, f)),
        Type::Arrow(a, b) => arrow(subst_free(a, f), subst_free(b, f)),
        Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), subst_free(b, f))),
        Type::Forall(h, k, b) => Arc::new(Type::Forall(h.clone(), k.clone(), subst_free(b, f))),
    }
}

/// Collects free type variables with their kinds, in first-occurrence order.
pub fn free_vars(t: &Ty, out: &mut Vec<(Name, Kind)>) {
    match &**t {
        Type::Free(n, k) => {
            if !out.iter().any(|(m, _)| m == n) {
                out.push((n.clone(), k.clone()));
            }
        }
        Type::Bound(_) | Type::Const(_) => {}
        Type::Meta(_, args) => args.iter().for_each(|a| free_vars(a, out)),
        Type::App(a, b) | Type::Arrow(a, b) => {
            free_vars(a, out);
            free_vars(b, out);
        }
        Type::Lam(_, _, b) | Type::Forall(_, _, b) => free_vars(b, out),
    }
}

pub fn has_meta(t: &Ty) -> bool {
    match &**t {
        Type::Meta(..) => true,
        Type::Bound(_) | Type::Free(..) | Type::Const(_) => false,
        Type::App(a, b) | Type::Arrow(a, b) => has_meta(a) || has_meta(b),
        Type::Lam(_, _, b) | Type::Forall(_, _, b) => has_meta(b),
    }
}

/// Replaces constants by closed constructors.
pub fn subst_const(t: &Ty, f: &dyn Fn(&str) -> Option<Ty>) -> Ty {
    match &**t {
        Type::Const(n) => f(n).unwrap_or_else(|| t.clone()),
        Type::Bound(_) | Type::Free(..) => t.clone(),
        Type::Meta(n, args) => Arc::new(Type::Meta(
            n.clone(),
            args.iter().map(|a| subst_const(a, f)).collect(),
        )),
        Type::App(a, b) => app(subst_const(a, f), subst_const(b, f)),
        Type::Arrow(a, b) => arrow(subst_const(a, f), subst_const(b, f)),
        Type::Lam(h, k, b) => Arc::new(Type::Lam(h.clone(), k.clone(), subst_const(b, f))),
        Type::Forall(h, k, b) => Arc::new(Type::Forall(h.clone(), k.clone(), subst_const(b, f))),
    }
}

pub fn size(t: &Ty) -> usize {
    match &**t {
        Type::Bound(_) | Type::Free(..) | Type::Const(_) => 1,
        Type::Meta(_, args) => 1 + args.iter().map(size).sum::<usize>(),
        Type::App(a, b) | Type::Arrow(a, b) => 1 + size(a) + size(b),
        Type::Lam(_, _, b) | Type::Forall(_, _, b) => 1 + size(b),
    }
}

/// Head and arguments of a type application spine.
pub fn spine(t: &Ty) -> (Ty, Vec<Ty>) {
    let mut args = Vec::new();
    let mut cur = t.clone();
    while let Type::App(f, a) = &*cur.clone() {
        args.push(a.clone());
        cur = f.clone();
    }
    args.reverse();
    (cur, args)
}

/// A type atom: neither an arrow nor a quantifier after normalization.
pub fn is_atom(t: &Ty) -> bool {
    !matches!(**t, Type::Arrow(..) | Type::Forall(..))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Kind {
        Kind::Star
    }

    #[test]
    fn single_beta_step() {
        let nat = constant("nat");
        let id = lam("a", star(), arrow(bound(0), bound(0)));
        assert_eq!(normalize(&app(id, nat.clone())), arrow(nat.clone(), nat));
    }

    #[test]
    fn eta_like_redex_reduces_to_body() {
        let sigma = free("s", star());
        let t = app(lam("g", star(), sigma.clone()), free("g", star()));
        assert_eq!(normalize(&t), sigma);
    }

    #[test]
    fn substitution_under_binder_avoids_capture() {
        // (forall a. a -> b)[b := a], with b the enclosing binder
        let body = forall("a", star(), arrow(bound(0), bound(1)));
        let outer = free("a", star());
        let inst = instantiate(&body, &outer);
        assert_eq!(inst, forall("a2", star(), arrow(bound(0), outer)));
    }

    #[test]
    fn normalization_is_idempotent_on_nested_redexes() {
        let k = Kind::arrow(star(), star());
        let c = constant("c");
        let t = app(
            lam("f", k, app(bound(0), app(bound(0), c.clone()))),
            lam("x", star(), arrow(bound(0), bound(0))),
        );
        let n = normalize(&t);
        assert_eq!(n, normalize(&n));
        let cc = arrow(c.clone(), c);
        assert_eq!(n, arrow(cc.clone(), cc));
    }
}
