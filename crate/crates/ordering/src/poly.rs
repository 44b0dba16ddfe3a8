use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::Ty;
use polyterm_interp::builtins::{self, is_nat, FLATTEN, LIFT, PLUS, TIMES};

/// A product of atoms. At type `nat` every atom is in `nat`; at any other
/// base type `typed` holds the factors of that type and `nat` the factors
/// under the lift.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub nat: Vec<Tm>,
    pub typed: Vec<Tm>,
}

impl Monomial {
    pub fn is_constant(&self) -> bool {
        self.nat.is_empty() && self.typed.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.nat.len() + self.typed.len()
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut nat = [self.nat.clone(), o.nat.clone()].concat();
        let mut typed = [self.typed.clone(), o.typed.clone()].concat();
        nat.sort();
        typed.sort();
        Monomial { nat, typed }
    }
}

/// A sum of monomials with positive coefficients at a fixed base type.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, BigUint>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: BigUint) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn atom(a: Tm, at_nat: bool) -> Poly {
        let m = if at_nat {
            Monomial { nat: vec![a], typed: vec![] }
        } else {
            Monomial { nat: vec![], typed: vec![a] }
        };
        let mut p = Poly::zero();
        p.add_term(m, BigUint::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(m).or_insert_with(BigUint::zero) += c;
    }

    pub fn add(mut self, o: Poly) -> Poly {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn constant_part(&self) -> BigUint {
        self.terms.get(&Monomial::default()).cloned().unwrap_or_default()
    }

    /// Pushes a polynomial at `sigma` through `flatten`: each factor of type
    /// `sigma` becomes the nat atom `flatten_sigma(a)`.
    fn flattened(self, sigma: &Ty) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in self.terms {
            let mut nat = m.nat;
            nat.extend(m.typed.into_iter().map(|a| builtins::flatten(sigma, a)));
            nat.sort();
            r.add_term(Monomial { nat, typed: vec![] }, c);
        }
        r
    }

    /// Reading of the polynomial as a term of type `ty`.
    pub fn denote(&self, ty: &Ty) -> Tm {
        let at_nat = is_nat(ty);
        let mut acc: Option<Tm> = None;
        for (m, c) in &self.terms {
            let nat_ty = builtins::nat();
            let natpart = |with_one: bool| {
                let mut f: Vec<Tm> = Vec::new();
                if !c.is_one() || with_one {
                    f.push(term::num(c.clone()));
                }
                f.extend(m.nat.iter().cloned());
                f.into_iter().reduce(|a, b| builtins::times(&nat_ty, a, b))
            };
            let mono = if at_nat {
                let mut f: Vec<Tm> = natpart(m.is_constant()).into_iter().collect();
                f.extend(m.typed.iter().cloned());
                f.into_iter().reduce(|a, b| builtins::times(&nat_ty, a, b)).expect("nonempty monomial")
            } else {
                let n = natpart(m.nat.is_empty() && m.typed.is_empty());
                let mut f: Vec<Tm> = n.map(|n| builtins::lift(ty, n)).into_iter().collect();
                f.extend(m.typed.iter().cloned());
                f.into_iter().reduce(|a, b| builtins::times(ty, a, b)).expect("nonempty monomial")
            };
            acc = Some(match acc {
                None => mono,
                Some(a) => builtins::plus(ty, a, mono),
            });
        }
        acc.unwrap_or_else(|| {
            if at_nat {
                term::num(0u32)
            } else {
                builtins::lift(ty, term::num(0u32))
            }
        })
    }
}

pub fn builtin_call(t: &Tm) -> Option<(&'static str, Vec<Arg>)> {
    let (head, args) = term::spine(t);
    let Term::Sym(n) = &*head else { return None };
    let name = match &**n {
        PLUS => PLUS,
        TIMES => TIMES,
        LIFT => LIFT,
        FLATTEN => FLATTEN,
        _ => return None,
    };
    let full = match name {
        PLUS | TIMES => matches!(&args[..], [Arg::Ty(_), Arg::Tm(_), Arg::Tm(_)]),
        _ => matches!(&args[..], [Arg::Ty(_), Arg::Tm(_)]),
    };
    full.then_some((name, args))
}

/// Polynomial reading of a normal term of base type `ty`.
pub fn to_polynomial(t: &Tm, ty: &Ty) -> Poly {
    if let Term::Num(n) = &**t {
        return Poly::constant(n.clone());
    }
    match builtin_call(t) {
        Some((name, args)) => match (name, &args[..]) {
            (PLUS, [Arg::Ty(s), Arg::Tm(a), Arg::Tm(b)]) => to_polynomial(a, s).add(to_polynomial(b, s)),
            (TIMES, [Arg::Ty(s), Arg::Tm(a), Arg::Tm(b)]) => to_polynomial(a, s).mul(&to_polynomial(b, s)),
            (LIFT, [Arg::Ty(_), Arg::Tm(n)]) => to_polynomial(n, &builtins::nat()),
            (FLATTEN, [Arg::Ty(s), Arg::Tm(a)]) => to_polynomial(a, s).flattened(s),
            _ => unreachable!("builtin_call checks arity"),
        },
        None => Poly::atom(canon_atom(t), is_nat(ty)),
    }
}

/// Rebuilds a term with every polynomial subterm in canonical form.
pub fn canon(t: &Tm) -> Tm {
    match &**t {
        Term::Lam(h, ty, b) => Arc::new(Term::Lam(h.clone(), ty.clone(), canon(b))),
        Term::TyLam(h, k, b) => Arc::new(Term::TyLam(h.clone(), k.clone(), canon(b))),
        Term::Num(_) => t.clone(),
        _ => match builtin_call(t) {
            Some((name, args)) => {
                let Some(Arg::Ty(s)) = args.first() else { unreachable!() };
                let ty = if name == FLATTEN { builtins::nat() } else { s.clone() };
                to_polynomial(t, &ty).denote(&ty)
            }
            None => canon_atom(t),
        },
    }
}

fn canon_args(args: &[Arg]) -> Vec<Arg> {
    args.iter()
        .map(|a| match a {
            Arg::Ty(s) => Arg::Ty(s.clone()),
            Arg::Tm(u) => Arg::Tm(canon(u)),
        })
        .collect()
}

fn canon_atom(t: &Tm) -> Tm {
    let (head, args) = term::spine(t);
    let head = match &*head {
        Term::Meta(n, margs) => Arc::new(Term::Meta(n.clone(), canon_args(margs))),
        Term::Lam(..) | Term::TyLam(..) => canon(&head),
        _ => head,
    };
    term::apply_args(head, &canon_args(&args))
}
