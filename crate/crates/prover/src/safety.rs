use indexmap::IndexMap;
use polyterm_core::kind::Name;
use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::{Metas, Signature};
use polyterm_interp::builtins::{self, FLATTEN, LIFT, PLUS, TIMES};
use polyterm_interp::nf;
use polyterm_ordering::Comparator;
use polyterm_pfs::validate::symbol_arity;
use serde::Serialize;

use crate::error::{ProverError, Result};
use crate::interpretation::Interpretation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Safety {
    Safe,
    /// 1-based positions and binder names of the arguments not shown safe.
    Unknown(Vec<(usize, String)>),
}

impl Safety {
    pub fn is_safe(&self) -> bool {
        *self == Safety::Safe
    }

    pub fn reason(&self) -> String {
        match self {
            Safety::Safe => "safe".into(),
            Safety::Unknown(xs) => {
                let names: Vec<String> = xs.iter().map(|(i, n)| format!("argument {i} ({n})")).collect();
                format!("not shown safe for {}", names.join(", "))
            }
        }
    }
}

struct Opener {
    fresh: usize,
}

impl Opener {
    fn name(&mut self, p: &str) -> String {
        self.fresh += 1;
        format!("_{p}{}", self.fresh)
    }

    fn open_ty(&mut self, t: &Tm, k: &polyterm_core::Kind) -> (Tm, Ty) {
        let a = ty::free(&self.name("t"), k.clone());
        let r = match &**t {
            Term::TyLam(_, _, b) => term::subst_ty_top(b, &a),
            _ => term::tyapp(t.clone(), a.clone()),
        };
        (r, a)
    }

    fn open_tm(&mut self, t: &Tm, d: &Ty) -> (Tm, Tm) {
        let x = term::free(&self.name("x"), d.clone());
        let r = match &**t {
            Term::Lam(_, _, b) => term::subst_tm_top(b, &x),
            _ => term::app(t.clone(), x.clone()),
        };
        (r, x)
    }
}

fn hint_of(t: &Tm) -> Option<String> {
    match &**t {
        Term::Lam(h, _, _) => Some(h.as_str().to_string()),
        _ => None,
    }
}

fn at_least_one(s: &Tm, sigma: &Ty) -> bool {
    let metas = Metas::default();
    let one = builtins::lift(sigma, term::num(1u32));
    Comparator::new(&metas).verdict(s, &one, sigma).holds()
}

/// The syntactic safety criteria: head variable, lift and flatten, either
/// summand, a factor next to something at least `lift(1)`, and binders.
fn safe_for(t: &Tm, x: &str, op: &mut Opener) -> bool {
    match &**t {
        Term::TyLam(_, k, _) => {
            let (b, _) = op.open_ty(t, k);
            return safe_for(&b, x, op);
        }
        Term::Lam(_, d, _) => {
            let (b, _) = op.open_tm(t, d);
            return safe_for(&b, x, op);
        }
        _ => {}
    }
    let (head, args) = term::spine(t);
    match &*head {
        Term::Free(n, _) if &**n == x => true,
        Term::Sym(s) => match (&**s, &args[..]) {
            (LIFT | FLATTEN, [Arg::Ty(_), Arg::Tm(a)]) => safe_for(a, x, op),
            (PLUS, [Arg::Ty(_), Arg::Tm(a), Arg::Tm(b)]) => safe_for(a, x, op) || safe_for(b, x, op),
            (TIMES, [Arg::Ty(s), Arg::Tm(a), Arg::Tm(b)]) => {
                (safe_for(a, x, op) && at_least_one(b, s)) || (safe_for(b, x, op) && at_least_one(a, s))
            }
            _ => false,
        },
        _ => false,
    }
}

/// Checks one symbol: `J(f)` is opened along the declared type, eta
/// expanding where binders are missing, and each argument is checked on the
/// body and then on its normal form.
pub fn symbol_safety(interp: &Interpretation, sig: &Signature, f: &str) -> Result<Safety> {
    let decl = sig.symbol(f).ok_or_else(|| ProverError::UnmappedSymbol(f.to_string()))?;
    let jf = interp.j.get(f).ok_or_else(|| ProverError::UnmappedSymbol(f.to_string()))?;
    let (n, k) = symbol_arity(decl);
    let mut op = Opener { fresh: 0 };
    let mut body = jf.clone();
    let mut fty = interp.interpret_type(decl)?;
    for _ in 0..n {
        let Type::Forall(_, kd, b) = &*fty.clone() else {
            return Err(ProverError::Shape { symbol: f.to_string(), msg: "missing type binder".into() });
        };
        let (nb, a) = op.open_ty(&body, kd);
        body = nb;
        fty = ty::instantiate(b, &a);
    }
    let mut vars = Vec::new();
    for i in 0..k {
        let Type::Arrow(d, c) = &*ty::normalize(&fty) else {
            return Err(ProverError::Shape { symbol: f.to_string(), msg: "missing term binder".into() });
        };
        let hint = hint_of(&body).unwrap_or_else(|| format!("x{}", i + 1));
        let (nb, x) = op.open_tm(&body, d);
        body = nb;
        fty = c.clone();
        let Term::Free(name, _) = &*x else { unreachable!() };
        vars.push((i + 1, hint, name.to_string()));
    }
    let normal = nf(&body);
    let bad: Vec<(usize, String)> = vars
        .into_iter()
        .filter(|(_, _, x)| !safe_for(&body, x, &mut op) && !safe_for(&normal, x, &mut op))
        .map(|(i, h, _)| (i, h))
        .collect();
    Ok(if bad.is_empty() { Safety::Safe } else { Safety::Unknown(bad) })
}

pub fn check_safety(interp: &Interpretation, sig: &Signature, symbols: &[Name]) -> Result<IndexMap<Name, Safety>> {
    let mut out = IndexMap::new();
    for f in symbols {
        out.insert(f.clone(), symbol_safety(interp, sig, f)?);
    }
    Ok(out)
}
