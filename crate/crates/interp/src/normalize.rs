use polyterm_core::term::{self, Term, Tm};

use crate::error::{InterpError, Result};
use crate::reduce::{contract, select, Strategy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: u8,
    pub pos: Vec<u8>,
    pub before: Tm,
    pub after: Tm,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace(pub Vec<TraceStep>);

impl Trace {
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Default step budget for a term.
pub fn default_fuel(t: &Tm) -> u64 {
    let s = term::size(t) as u64;
    (10 * s * s).max(100)
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub strategy: Strategy,
    pub fuel: Option<u64>,
    pub trace: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options { strategy: Strategy::LeftmostOutermost, fuel: None, trace: false }
    }
}

/// Rewrites to normal form one step at a time.
pub fn normalize_with(t: &Tm, opts: Options) -> Result<(Tm, Trace, u64)> {
    let fuel = opts.fuel.unwrap_or_else(|| default_fuel(t));
    let mut cur = t.clone();
    let mut trace = Trace::default();
    let mut steps = 0u64;
    while let Some((rule, pos, r)) = select(&cur, opts.strategy) {
        if steps == fuel {
            return Err(InterpError::FuelExhausted(fuel));
        }
        steps += 1;
        let next = term::replace_at(&cur, &pos, r).expect("valid position");
        if opts.trace {
            trace.0.push(TraceStep { rule, pos, before: cur.clone(), after: next.clone() });
        }
        cur = next;
    }
    Ok((cur, trace, steps))
}

pub fn normalize(t: &Tm) -> Result<Tm> {
    Ok(normalize_with(t, Options::default())?.0)
}

/// Normal form computed bottom-up without fuel accounting. Only for
/// well-typed input, where it terminates.
pub fn nf(t: &Tm) -> Tm {
    match &**t {
        Term::Lam(h, ty, b) => {
            let nb = nf(b);
            if std::sync::Arc::ptr_eq(&nb, b) {
                t.clone()
            } else {
                std::sync::Arc::new(Term::Lam(h.clone(), ty.clone(), nb))
            }
        }
        Term::TyLam(h, k, b) => {
            let nb = nf(b);
            if std::sync::Arc::ptr_eq(&nb, b) {
                t.clone()
            } else {
                std::sync::Arc::new(Term::TyLam(h.clone(), k.clone(), nb))
            }
        }
        Term::App(f, a) => {
            let node = term::app(nf(f), nf(a));
            match contract(&node) {
                Some((_, r)) => nf(&r),
                None => node,
            }
        }
        Term::TyApp(f, s) => {
            let node = term::tyapp(nf(f), s.clone());
            match contract(&node) {
                Some((_, r)) => nf(&r),
                None => node,
            }
        }
        _ => t.clone(),
    }
}
