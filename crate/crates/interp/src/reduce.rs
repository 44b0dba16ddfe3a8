use std::sync::Arc;

use num_bigint::BigUint;
use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::{self, Type};

use crate::builtins::{self, chi, is_nat, FLATTEN, LIFT, PLUS, TIMES};

/// A single contraction: rule number, position of the redex, and the
/// whole term after the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: u8,
    pub pos: Vec<u8>,
    pub result: Tm,
}

/// Contracts the node itself if it is a redex.
pub fn contract(t: &Tm) -> Option<(u8, Tm)> {
    match &**t {
        Term::App(f, a) => {
            if let Term::Lam(_, _, body) = &**f {
                return Some((4, term::subst_tm_top(body, a)));
            }
        }
        Term::TyApp(f, s) => {
            if let Term::TyLam(_, _, body) = &**f {
                return Some((4, term::subst_ty_top(body, s)));
            }
            return None;
        }
        _ => return None,
    }
    let (head, args) = term::spine(t);
    let Term::Sym(name) = &*head else { return None };
    match (&**name, &args[..]) {
        (PLUS | TIMES, [Arg::Ty(s), Arg::Tm(a), Arg::Tm(b)]) => {
            let op = if &**name == PLUS { builtins::plus } else { builtins::times };
            match &**s {
                Type::Const(_) if is_nat(s) => {
                    let (Term::Num(n), Term::Num(m)) = (&**a, &**b) else { return None };
                    let r: BigUint = if &**name == PLUS { n + m } else { n * m };
                    Some((5, Arc::new(Term::Num(r))))
                }
                Type::Arrow(dom, cod) => {
                    let a = term::shift_tm(a, 1, 0);
                    let b = term::shift_tm(b, 1, 0);
                    let x = term::bound(0);
                    let body = op(cod, term::app(a, x.clone()), term::app(b, x));
                    Some((6, term::lam("x", dom.clone(), body)))
                }
                Type::Forall(h, k, inner) => {
                    let a = term::shift_ty(a, 1, 0);
                    let b = term::shift_ty(b, 1, 0);
                    let al = ty::bound(0);
                    let body = op(inner, term::tyapp(a, al.clone()), term::tyapp(b, al));
                    Some((7, Arc::new(Term::TyLam(h.clone(), k.clone(), body))))
                }
                _ => None,
            }
        }
        (FLATTEN, [Arg::Ty(s), Arg::Tm(a)]) => match &**s {
            Type::Const(_) if is_nat(s) => Some((8, a.clone())),
            Type::Arrow(dom, cod) => {
                let zero = builtins::lift(dom, term::num(0u32));
                Some((9, builtins::flatten(cod, term::app(a.clone(), zero))))
            }
            Type::Forall(_, k, inner) => {
                let c = chi(k);
                Some((10, builtins::flatten(&ty::instantiate(inner, &c), term::tyapp(a.clone(), c))))
            }
            _ => None,
        },
        (LIFT, [Arg::Ty(s), Arg::Tm(a)]) => match &**s {
            Type::Const(_) if is_nat(s) => Some((11, a.clone())),
            Type::Arrow(dom, cod) => {
                let body = builtins::lift(cod, term::shift_tm(a, 1, 0));
                Some((12, term::lam("y", dom.clone(), body)))
            }
            Type::Forall(h, k, inner) => {
                let body = builtins::lift(inner, term::shift_ty(a, 1, 0));
                Some((13, Arc::new(Term::TyLam(h.clone(), k.clone(), body))))
            }
            _ => None,
        },
        _ => None,
    }
}

fn children(t: &Tm) -> Vec<(u8, Tm)> {
    match &**t {
        Term::App(f, a) => vec![(1, f.clone()), (2, a.clone())],
        Term::TyApp(f, _) | Term::Lam(_, _, f) | Term::TyLam(_, _, f) => vec![(1, f.clone())],
        _ => Vec::new(),
    }
}

/// All one-step reducts in leftmost-outermost position order.
pub fn reduce_step(t: &Tm) -> Vec<Step> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    collect(t, t, &mut pos, &mut out);
    out
}

fn collect(root: &Tm, t: &Tm, pos: &mut Vec<u8>, out: &mut Vec<Step>) {
    if let Some((rule, r)) = contract(t) {
        let result = term::replace_at(root, pos, r).expect("valid position");
        out.push(Step { rule, pos: pos.clone(), result });
    }
    for (i, c) in children(t) {
        pos.push(i);
        collect(root, &c, pos, out);
        pos.pop();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    LeftmostInnermost,
}

/// The redex chosen by the strategy, as (rule, position, contractum).
pub fn select(t: &Tm, strategy: Strategy) -> Option<(u8, Vec<u8>, Tm)> {
    let mut pos = Vec::new();
    match strategy {
        Strategy::LeftmostOutermost => find_outer(t, &mut pos),
        Strategy::LeftmostInnermost => find_inner(t, &mut pos),
    }
}

fn find_outer(t: &Tm, pos: &mut Vec<u8>) -> Option<(u8, Vec<u8>, Tm)> {
    if let Some((rule, r)) = contract(t) {
        return Some((rule, pos.clone(), r));
    }
    for (i, c) in children(t) {
        pos.push(i);
        let found = find_outer(&c, pos);
        pos.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn find_inner(t: &Tm, pos: &mut Vec<u8>) -> Option<(u8, Vec<u8>, Tm)> {
    for (i, c) in children(t) {
        pos.push(i);
        let found = find_inner(&c, pos);
        pos.pop();
        if found.is_some() {
            return found;
        }
    }
    contract(t).map(|(rule, r)| (rule, pos.clone(), r))
}

pub fn is_normal(t: &Tm) -> bool {
    find_outer(t, &mut Vec::new()).is_none()
}
