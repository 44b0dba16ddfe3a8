use std::collections::HashMap;
use std::fmt;

use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::Metas;
use polyterm_interp::builtins;
use polyterm_interp::nf;

use crate::flow;
use crate::poly::{to_polynomial, Monomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Strict,
    Weak,
    Unknown,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self != Verdict::Unknown
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Strict => "Strict",
            Verdict::Weak => "Weak",
            Verdict::Unknown => "Unknown",
        })
    }
}

/// Outcome of a symbolic comparison together with both sides in canonical
/// polynomial form at the base type reached by applying fresh arguments.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub verdict: Verdict,
    pub base: Ty,
    pub args: Vec<Arg>,
    pub lhs: Poly,
    pub rhs: Poly,
}

/// Symbolic comparison of open interpretation terms. Free variables and
/// metavariables are opaque; metavariable types come from `metas`.
pub struct Comparator<'a> {
    metas: &'a Metas,
    fresh: usize,
    memo: HashMap<(Tm, Tm), bool>,
}

impl<'a> Comparator<'a> {
    pub fn new(metas: &'a Metas) -> Comparator<'a> {
        Comparator { metas, fresh: 0, memo: HashMap::new() }
    }

    fn fresh_name(&mut self, p: &str) -> String {
        self.fresh += 1;
        format!("_{p}{}", self.fresh)
    }

    /// Applies both sides to fresh arguments until the type is a base type.
    pub fn saturate(&mut self, s: &Tm, t: &Tm, ty: &Ty) -> (Tm, Tm, Ty, Vec<Arg>) {
        let mut s = nf(&term::canonicalize(s));
        let mut t = nf(&term::canonicalize(t));
        let mut ty = ty::normalize(ty);
        let mut args = Vec::new();
        loop {
            match &*ty.clone() {
                Type::Arrow(d, c) => {
                    let z = term::free(&self.fresh_name("z"), d.clone());
                    s = nf(&term::app(s, z.clone()));
                    t = nf(&term::app(t, z.clone()));
                    args.push(Arg::Tm(z));
                    ty = c.clone();
                }
                Type::Forall(_, k, b) => {
                    let a = ty::free(&self.fresh_name("a"), k.clone());
                    s = nf(&term::tyapp(s, a.clone()));
                    t = nf(&term::tyapp(t, a.clone()));
                    ty = ty::instantiate(b, &a);
                    args.push(Arg::Ty(a));
                }
                _ => return (s, t, ty, args),
            }
        }
    }

    pub fn compare(&mut self, s: &Tm, t: &Tm, ty: &Ty) -> Comparison {
        let (s, t, base, args) = self.saturate(s, t, ty);
        let lhs = to_polynomial(&s, &base);
        let rhs = to_polynomial(&t, &base);
        let verdict = self.compare_polys(&lhs, &rhs);
        Comparison { verdict, base, args, lhs, rhs }
    }

    pub fn verdict(&mut self, s: &Tm, t: &Tm, ty: &Ty) -> Verdict {
        self.compare(s, t, ty).verdict
    }

    /// `Strict` needs a weak cover of every non-constant right monomial and
    /// a larger constant on the left.
    pub fn compare_polys(&mut self, lhs: &Poly, rhs: &Poly) -> Verdict {
        let (cl, cr) = (lhs.constant_part(), rhs.constant_part());
        if cl < cr {
            return Verdict::Unknown;
        }
        let l: Vec<(&Monomial, _)> = lhs.terms.iter().filter(|(m, _)| !m.is_constant()).collect();
        let r: Vec<(&Monomial, _)> = rhs.terms.iter().filter(|(m, _)| !m.is_constant()).collect();
        let mut edges = Vec::new();
        for (j, (rm, _)) in r.iter().enumerate() {
            for (i, (lm, _)) in l.iter().enumerate() {
                if self.monomial_geq(lm, rm) {
                    edges.push((i, j));
                }
            }
        }
        let supply: Vec<_> = l.iter().map(|(_, c)| (*c).clone()).collect();
        let demand: Vec<_> = r.iter().map(|(_, c)| (*c).clone()).collect();
        if !flow::covers(&supply, &demand, &edges) {
            Verdict::Unknown
        } else if cl > cr {
            Verdict::Strict
        } else {
            Verdict::Weak
        }
    }

    fn monomial_geq(&mut self, a: &Monomial, b: &Monomial) -> bool {
        if a == b {
            return true;
        }
        a.nat.len() == b.nat.len()
            && a.typed.len() == b.typed.len()
            && self.atoms_match(&a.nat, &b.nat, &mut vec![false; a.nat.len()])
            && self.atoms_match(&a.typed, &b.typed, &mut vec![false; a.typed.len()])
    }

    fn atoms_match(&mut self, xs: &[Tm], ys: &[Tm], used: &mut Vec<bool>) -> bool {
        let Some((y, rest)) = ys.split_first() else { return true };
        for i in 0..xs.len() {
            if !used[i] && self.atom_geq(&xs[i], y) {
                used[i] = true;
                if self.atoms_match(xs, rest, used) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }

    fn head_parts(&self, t: &Tm) -> Option<(Tm, Ty, Vec<Arg>)> {
        let (head, args) = term::spine(t);
        match &*head {
            Term::Meta(n, margs) => {
                let ty = self.metas.terms.get(n)?.clone();
                let all = [margs.clone(), args].concat();
                Some((term::meta(n, Vec::new()), ty, all))
            }
            Term::Free(_, ty) => Some((head.clone(), ty.clone(), args)),
            Term::Sym(n) => Some((head.clone(), builtins::builtin_type(n)?, args)),
            _ => None,
        }
    }

    /// Weak order on atoms: equal, or the same head with pairwise weakly
    /// greater arguments.
    pub fn atom_geq(&mut self, a: &Tm, b: &Tm) -> bool {
        if a == b {
            return true;
        }
        let key = (a.clone(), b.clone());
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = self.atom_geq_uncached(a, b);
        self.memo.insert(key, r);
        r
    }

    fn atom_geq_uncached(&mut self, a: &Tm, b: &Tm) -> bool {
        let (Some((ha, mut ty, xs)), Some((hb, _, ys))) = (self.head_parts(a), self.head_parts(b)) else {
            return false;
        };
        if ha != hb || xs.len() != ys.len() {
            return false;
        }
        for (x, y) in xs.iter().zip(&ys) {
            ty = ty::normalize(&ty);
            match (x, y, &*ty.clone()) {
                (Arg::Ty(p), Arg::Ty(q), Type::Forall(_, _, body)) if p == q => ty = ty::instantiate(body, p),
                (Arg::Tm(u), Arg::Tm(v), Type::Arrow(d, c)) => {
                    if u != v && !self.verdict(u, v, d).holds() {
                        return false;
                    }
                    ty = c.clone();
                }
                _ => return false,
            }
        }
        true
    }
}
