use std::sync::atomic::{AtomicUsize, Ordering};

use indexmap::IndexMap;
use num_bigint::BigUint;
use polyterm_core::kind::{Kind, Name};
use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::{print, Metas};
use polyterm_interp::gen::{random_con, Scope, TermGen};
use polyterm_interp::{nf, Evaluator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::compare::Verdict;
use crate::error::{OrderingError, Result};

/// Closed instances for the free variables and metavariables of a
/// comparison.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Closure {
    pub types: IndexMap<Name, Ty>,
    pub terms: IndexMap<Name, Tm>,
}

impl Closure {
    pub fn ty(&self, t: &Ty) -> Ty {
        ty::normalize(&self.ty_rec(t))
    }

    fn ty_rec(&self, t: &Ty) -> Ty {
        match &**t {
            Type::Bound(_) | Type::Const(_) => t.clone(),
            Type::Free(n, _) => self.types.get(n).cloned().unwrap_or_else(|| t.clone()),
            Type::Meta(n, args) => {
                let args: Vec<Ty> = args.iter().map(|a| self.ty_rec(a)).collect();
                match self.types.get(n) {
                    Some(b) => args.into_iter().fold(b.clone(), ty::app),
                    None => ty::meta(n, args),
                }
            }
            Type::App(f, a) => ty::app(self.ty_rec(f), self.ty_rec(a)),
            Type::Arrow(a, b) => ty::arrow(self.ty_rec(a), self.ty_rec(b)),
            Type::Lam(h, k, b) => std::sync::Arc::new(Type::Lam(h.clone(), k.clone(), self.ty_rec(b))),
            Type::Forall(h, k, b) => std::sync::Arc::new(Type::Forall(h.clone(), k.clone(), self.ty_rec(b))),
        }
    }

    fn arg(&self, a: &Arg) -> Arg {
        match a {
            Arg::Ty(t) => Arg::Ty(self.ty(t)),
            Arg::Tm(u) => Arg::Tm(self.term(u)),
        }
    }

    /// Replaces every instantiated variable; bindings are closed.
    pub fn term(&self, t: &Tm) -> Tm {
        match &**t {
            Term::Bound(_) | Term::Sym(_) | Term::Num(_) => t.clone(),
            Term::Free(n, fty) => match self.terms.get(n) {
                Some(b) => b.clone(),
                None => term::free(n, self.ty(fty)),
            },
            Term::Meta(n, args) => {
                let args: Vec<Arg> = args.iter().map(|a| self.arg(a)).collect();
                match self.terms.get(n) {
                    Some(b) => term::apply_args(b.clone(), &args),
                    None => std::sync::Arc::new(Term::Meta(n.clone(), args)),
                }
            }
            Term::Lam(h, bty, b) => std::sync::Arc::new(Term::Lam(h.clone(), self.ty(bty), self.term(b))),
            Term::TyLam(h, k, b) => std::sync::Arc::new(Term::TyLam(h.clone(), k.clone(), self.term(b))),
            Term::App(f, a) => term::app(self.term(f), self.term(a)),
            Term::TyApp(f, s) => term::tyapp(self.term(f), self.ty(s)),
        }
    }
}

/// The variables a closure has to cover, types before terms.
#[derive(Clone, Debug, Default)]
pub struct Holes {
    pub types: Vec<(Name, Kind)>,
    pub terms: Vec<(Name, Ty)>,
}

impl Holes {
    /// Free variables and metavariables of the given terms.
    pub fn of(ts: &[&Tm], metas: &Metas) -> Result<Holes> {
        let mut h = Holes::default();
        for t in ts {
            h.collect_tm(t, metas)?;
        }
        Ok(h)
    }

    fn add_ty(&mut self, n: &Name, k: Kind) {
        if !self.types.iter().any(|(m, _)| m == n) {
            self.types.push((n.clone(), k));
        }
    }

    fn collect_ty(&mut self, t: &Ty, metas: &Metas) -> Result<()> {
        match &**t {
            Type::Bound(_) | Type::Const(_) => {}
            Type::Free(n, k) => self.add_ty(n, k.clone()),
            Type::Meta(n, args) => {
                let k = metas.types.get(n).ok_or_else(|| OrderingError::UnknownMeta(n.clone()))?;
                self.add_ty(n, k.clone());
                for a in args {
                    self.collect_ty(a, metas)?;
                }
            }
            Type::App(a, b) | Type::Arrow(a, b) => {
                self.collect_ty(a, metas)?;
                self.collect_ty(b, metas)?;
            }
            Type::Lam(_, _, b) | Type::Forall(_, _, b) => self.collect_ty(b, metas)?,
        }
        Ok(())
    }

    fn add_tm(&mut self, n: &Name, t: &Ty, metas: &Metas) -> Result<()> {
        if !self.terms.iter().any(|(m, _)| m == n) {
            self.collect_ty(t, metas)?;
            self.terms.push((n.clone(), t.clone()));
        }
        Ok(())
    }

    fn collect_tm(&mut self, t: &Tm, metas: &Metas) -> Result<()> {
        match &**t {
            Term::Bound(_) | Term::Sym(_) | Term::Num(_) => {}
            Term::Free(n, fty) => self.add_tm(n, fty, metas)?,
            Term::Meta(n, args) => {
                let fty = metas.terms.get(n).ok_or_else(|| OrderingError::UnknownMeta(n.clone()))?;
                self.add_tm(n, fty, metas)?;
                for a in args {
                    match a {
                        Arg::Ty(s) => self.collect_ty(s, metas)?,
                        Arg::Tm(u) => self.collect_tm(u, metas)?,
                    }
                }
            }
            Term::Lam(_, bty, b) => {
                self.collect_ty(bty, metas)?;
                self.collect_tm(b, metas)?;
            }
            Term::TyLam(_, _, b) => self.collect_tm(b, metas)?,
            Term::App(f, a) => {
                self.collect_tm(f, metas)?;
                self.collect_tm(a, metas)?;
            }
            Term::TyApp(f, s) => {
                self.collect_tm(f, metas)?;
                self.collect_ty(s, metas)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub seed: u64,
    pub closures: usize,
    pub args: usize,
    /// Size budget for generated term images and arguments.
    pub budget: usize,
    pub fuel: u64,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig { seed: 0, closures: 200, args: 5, budget: 8, fuel: 2_000_000 }
    }
}

/// A closure and argument vector under which a claimed inequality fails.
#[derive(Clone, Debug)]
pub struct Witness {
    pub closure: Closure,
    pub args: Vec<Arg>,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

impl Witness {
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.closure.types.iter().map(|(n, t)| format!("{n} := {}", print::ty_string(t))).collect();
        parts.extend(self.closure.terms.iter().map(|(n, t)| format!("{n} := {}", print::term_string(t))));
        let args: Vec<String> = self
            .args
            .iter()
            .map(|a| match a {
                Arg::Ty(t) => format!("[{}]", print::ty_string(t)),
                Arg::Tm(t) => print::term_string(t),
            })
            .collect();
        format!("{{{}}} applied to ({}) gives {} against {}", parts.join(", "), args.join(", "), self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug)]
pub enum GroundOutcome {
    /// Number of evaluated samples, all agreeing with the claim.
    Consistent(usize),
    Refuted(Box<Witness>),
}

/// Samples a closure: type instances first, then final term images.
pub fn sample_closure<R: Rng>(rng: &mut R, holes: &Holes, budget: usize) -> Closure {
    let mut cl = Closure::default();
    for (n, k) in &holes.types {
        let t = random_con(rng, k, 2, &mut Vec::new());
        cl.types.insert(n.clone(), t);
    }
    for (n, t) in &holes.terms {
        let target = cl.ty(t);
        let img = nf(&TermGen::new(rng).term(&target, budget, &mut Scope::default()));
        cl.terms.insert(n.clone(), img);
    }
    cl
}

/// Final arguments that bring a closed term of type `ty` down to nat.
pub fn sample_args<R: Rng>(rng: &mut R, ty: &Ty, budget: usize) -> Vec<Arg> {
    let mut out = Vec::new();
    let mut cur = ty::normalize(ty);
    loop {
        match &*cur.clone() {
            Type::Arrow(d, c) => {
                out.push(Arg::Tm(nf(&TermGen::new(rng).term(d, budget, &mut Scope::default()))));
                cur = c.clone();
            }
            Type::Forall(_, k, b) => {
                let s = random_con(rng, k, 2, &mut Vec::new());
                cur = ty::instantiate(b, &s);
                out.push(Arg::Ty(s));
            }
            _ => return out,
        }
    }
}

fn value(t: &Tm, fuel: u64) -> Option<BigUint> {
    Evaluator::new(fuel).eval_nat(t).ok()
}

fn satisfies(claim: Verdict, l: &BigUint, r: &BigUint) -> bool {
    match claim {
        Verdict::Strict => l > r,
        Verdict::Weak => l >= r,
        Verdict::Unknown => true,
    }
}

/// Tests `s > t` (or `s >= t` for a weak claim) at type `ty` on sampled
/// closures and arguments, evaluating the closed instances directly.
pub fn ground_compare(s: &Tm, t: &Tm, ty: &Ty, metas: &Metas, claim: Verdict, cfg: &OracleConfig) -> Result<GroundOutcome> {
    let holes = Holes::of(&[s, t], metas)?;
    let checked = AtomicUsize::new(0);
    let found = (0..cfg.closures).into_par_iter().find_map_first(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let cl = sample_closure(&mut rng, &holes, cfg.budget);
        let (cs, ct, cty) = (cl.term(s), cl.term(t), cl.ty(ty));
        for _ in 0..cfg.args {
            let args = sample_args(&mut rng, &cty, cfg.budget);
            let (Some(l), Some(r)) = (
                value(&term::apply_args(cs.clone(), &args), cfg.fuel),
                value(&term::apply_args(ct.clone(), &args), cfg.fuel),
            ) else {
                continue;
            };
            checked.fetch_add(1, Ordering::Relaxed);
            if !satisfies(claim, &l, &r) {
                return Some(Witness { closure: cl, args, lhs: l, rhs: r });
            }
        }
        None
    });
    Ok(match found {
        Some(w) => GroundOutcome::Refuted(Box::new(w)),
        None => GroundOutcome::Consistent(checked.into_inner()),
    })
}
