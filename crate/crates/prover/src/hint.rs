use std::fmt;

use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::Ty;
use polyterm_core::{typecheck, Metas};
use polyterm_interp::builtins::{self, LIFT, PLUS, TIMES};
use polyterm_interp::reduce::contract;
use polyterm_ordering::{builtin_call, Comparator, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `a op b ~ b op a`
    Comm,
    /// `(a op b) op c ~ a op (b op c)`
    Assoc,
    /// `a (+) 0 ~ a` and `a (*) 1 ~ a`
    Unit,
    /// `a (*) (b (+) c) ~ a (*) b (+) a (*) c`
    Distrib,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    Beta,
    LiftSplit,
    ApproxIdentity(Identity),
    /// Keeps the given operand of a sum.
    PluspartsDrop(u8),
    Congruence,
}

/// A path through spines: component `i > 0` selects the i-th term argument
/// of the spine (or the body of a binder), `0` selects the head.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pos(pub Vec<u8>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HintStep {
    pub lemma: Lemma,
    pub side: Side,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HintScript {
    pub steps: Vec<HintStep>,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
        })
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl fmt::Display for HintStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, extra) = match self.lemma {
            Lemma::Beta => ("beta", String::new()),
            Lemma::LiftSplit => ("lift-split", String::new()),
            Lemma::ApproxIdentity(i) => (
                "approx-identity",
                match i {
                    Identity::Comm => " comm",
                    Identity::Assoc => " assoc",
                    Identity::Unit => " unit",
                    Identity::Distrib => " distrib",
                }
                .to_string(),
            ),
            Lemma::PluspartsDrop(k) => ("plusparts-drop", format!(" keep {k}")),
            Lemma::Congruence => ("weak-monotonicity-congruence", String::new()),
        };
        write!(f, "{name} {} {}{extra}", self.side, self.pos)
    }
}

impl fmt::Display for HintScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        f.write_str(&steps.join("; "))
    }
}

impl Pos {
    pub fn parse(s: &str) -> Result<Pos, String> {
        if s == "e" {
            return Ok(Pos::default());
        }
        s.split('.')
            .map(|p| p.parse::<u8>().map_err(|_| format!("bad position component `{p}`")))
            .collect::<Result<Vec<_>, _>>()
            .map(Pos)
    }

    pub fn child(&self, i: u8) -> Pos {
        let mut v = self.0.clone();
        v.push(i);
        Pos(v)
    }
}

impl HintStep {
    pub fn parse(src: &str) -> Result<HintStep, String> {
        let words: Vec<&str> = src.split_whitespace().collect();
        let (name, rest) = words.split_first().ok_or("empty hint step")?;
        let side = match rest.first() {
            Some(&"lhs") => Side::Lhs,
            Some(&"rhs") => Side::Rhs,
            _ => return Err(format!("`{name}` needs a side, `lhs` or `rhs`")),
        };
        let pos = Pos::parse(rest.get(1).ok_or_else(|| format!("`{name}` needs a position"))?)?;
        let args = &rest[2..];
        let lemma = match (*name, args) {
            ("beta", []) => Lemma::Beta,
            ("lift-split", []) => Lemma::LiftSplit,
            ("weak-monotonicity-congruence", []) => Lemma::Congruence,
            ("approx-identity", [id]) => Lemma::ApproxIdentity(match *id {
                "comm" => Identity::Comm,
                "assoc" => Identity::Assoc,
                "unit" => Identity::Unit,
                "distrib" => Identity::Distrib,
                other => return Err(format!("unknown identity `{other}`")),
            }),
            ("plusparts-drop", ["keep", k]) => match *k {
                "1" => Lemma::PluspartsDrop(1),
                "2" => Lemma::PluspartsDrop(2),
                _ => return Err("plusparts-drop keeps operand 1 or 2".into()),
            },
            (n, _) => return Err(format!("malformed `{n}` step")),
        };
        if lemma == Lemma::PluspartsDrop(1) || lemma == Lemma::PluspartsDrop(2) {
            if side == Side::Rhs {
                return Err("plusparts-drop only applies to the left-hand side".into());
            }
        }
        Ok(HintStep { lemma, side, pos })
    }
}

impl HintScript {
    pub fn parse(src: &str) -> Result<HintScript, String> {
        let steps = src
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(HintStep::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HintScript { steps })
    }
}

/// Translates a spine position to a raw term position, reporting whether
/// the path crosses a binder.
fn locate(t: &Tm, pos: &Pos) -> Result<(Vec<u8>, bool), String> {
    let mut raw = Vec::new();
    let mut cur = t.clone();
    let mut under = false;
    for &i in &pos.0 {
        match &*cur.clone() {
            Term::Lam(_, _, b) | Term::TyLam(_, _, b) if i == 1 => {
                raw.push(1);
                under = true;
                cur = b.clone();
            }
            _ => {
                let (head, args) = term::spine(&cur);
                if i == 0 {
                    raw.extend(std::iter::repeat(1).take(args.len()));
                    cur = head;
                    continue;
                }
                let tms: Vec<usize> =
                    args.iter().enumerate().filter(|(_, a)| matches!(a, Arg::Tm(_))).map(|(k, _)| k).collect();
                let k = *tms.get(i as usize - 1).ok_or_else(|| format!("no argument {i} at {pos}"))?;
                raw.extend(std::iter::repeat(1).take(args.len() - 1 - k));
                raw.push(2);
                let Arg::Tm(a) = &args[k] else { unreachable!() };
                cur = a.clone();
            }
        }
    }
    Ok((raw, under))
}

fn call(t: &Tm, name: &str) -> Option<(Ty, Tm, Tm)> {
    match builtin_call(t)? {
        (n, args) if n == name => match &args[..] {
            [Arg::Ty(s), Arg::Tm(a), Arg::Tm(b)] => Some((s.clone(), a.clone(), b.clone())),
            _ => None,
        },
        _ => None,
    }
}

fn arith(t: &Tm) -> Option<(&'static str, Ty, Tm, Tm)> {
    call(t, PLUS).map(|(s, a, b)| (PLUS, s, a, b)).or_else(|| call(t, TIMES).map(|(s, a, b)| (TIMES, s, a, b)))
}

fn op(name: &str, s: &Ty, a: Tm, b: Tm) -> Tm {
    if name == PLUS {
        builtins::plus(s, a, b)
    } else {
        builtins::times(s, a, b)
    }
}

fn is_unit(t: &Tm, name: &str) -> bool {
    let want = term::num(if name == PLUS { 0u32 } else { 1 });
    let n = match builtin_call(t) {
        Some((LIFT, args)) => match &args[..] {
            [Arg::Ty(_), Arg::Tm(n)] => n.clone(),
            _ => return false,
        },
        _ => t.clone(),
    };
    n == want
}

fn identity(s: &Tm, id: Identity) -> Option<Tm> {
    let (name, ty, a, b) = arith(s)?;
    match id {
        Identity::Comm => Some(op(name, &ty, b, a)),
        Identity::Assoc => {
            let (n2, t2, x, y) = arith(&a)?;
            (n2 == name && t2 == ty).then(|| op(name, &ty, x, op(name, &ty, y, b)))
        }
        Identity::Unit => is_unit(&b, name).then_some(a),
        Identity::Distrib => {
            let (bs, bt, x, y) = arith(&b)?;
            (name == TIMES && bs == PLUS && bt == ty)
                .then(|| builtins::plus(&ty, builtins::times(&ty, a.clone(), x), builtins::times(&ty, a, y)))
        }
    }
}

fn lift_split(s: &Tm) -> Option<Tm> {
    let (LIFT, args) = builtin_call(s)? else { return None };
    let [Arg::Ty(sigma), Arg::Tm(n)] = &args[..] else { return None };
    let (name, nat, a, b) = arith(n)?;
    builtins::is_nat(&nat).then(|| op(name, sigma, builtins::lift(sigma, a), builtins::lift(sigma, b)))
}

/// One applied step together with the goal it produced.
#[derive(Clone, Debug)]
pub struct Replayed {
    pub step: HintStep,
    pub lhs: Tm,
    pub rhs: Tm,
}

/// Applies each step to the goal `lhs` against `rhs`. Every step either
/// preserves the interpretation up to equivalence, weakens the left side or
/// strengthens the right side, so the final goal implies the original one.
pub fn replay(script: &HintScript, lhs: &Tm, rhs: &Tm, metas: &Metas) -> Result<Vec<Replayed>, (usize, String)> {
    let sig = builtins::signature();
    let mut cmp = Comparator::new(metas);
    let (mut l, mut r) = (lhs.clone(), rhs.clone());
    let mut out = Vec::new();
    for (k, step) in script.steps.iter().enumerate() {
        let fail = |m: String| (k + 1, m);
        let target = if step.side == Side::Lhs { &l } else { &r };
        let (raw, under) = locate(target, &step.pos).map_err(fail)?;
        let sub = term::subterm(target, &raw).ok_or_else(|| fail(format!("no subterm at {}", step.pos)))?;
        let new = match step.lemma {
            Lemma::Beta => contract(&sub).map(|(_, t)| t).ok_or("no redex at this position".to_string()),
            Lemma::LiftSplit => lift_split(&sub).ok_or("expected lift of a sum or product".to_string()),
            Lemma::ApproxIdentity(id) => identity(&sub, id).ok_or(format!("identity does not match {sub:?}")),
            Lemma::PluspartsDrop(i) => match call(&sub, PLUS) {
                Some((_, a, b)) => Ok(if i == 1 { a } else { b }),
                None => Err("expected a sum".to_string()),
            },
            Lemma::Congruence => {
                let other = if step.side == Side::Lhs { &r } else { &l };
                let (oraw, ounder) = locate(other, &step.pos).map_err(fail)?;
                if under || ounder {
                    return Err(fail("congruence positions may not lie under binders".into()));
                }
                let osub = term::subterm(other, &oraw).ok_or_else(|| fail(format!("no subterm at {}", step.pos)))?;
                let (big, small) = if step.side == Side::Lhs { (&sub, &osub) } else { (&osub, &sub) };
                let ty = typecheck(big, &sig, metas).map_err(|e| fail(e.to_string()))?;
                let ty2 = typecheck(small, &sig, metas).map_err(|e| fail(e.to_string()))?;
                if ty != ty2 {
                    return Err(fail("subterms have different types".into()));
                }
                match cmp.verdict(big, small, &ty) {
                    Verdict::Unknown => Err("subterms are not weakly ordered".to_string()),
                    _ => Ok(osub),
                }
            }
        }
        .map_err(fail)?;
        let replaced = term::replace_at(target, &raw, new).ok_or_else(|| fail("replacement failed".into()))?;
        match step.side {
            Side::Lhs => l = replaced,
            Side::Rhs => r = replaced,
        }
        out.push(Replayed { step: step.clone(), lhs: l.clone(), rhs: r.clone() });
    }
    Ok(out)
}

/// Every position reachable through binder bodies and spine arguments,
/// outermost first.
fn positions(t: &Tm, at: Pos, out: &mut Vec<(Pos, Tm)>) {
    out.push((at.clone(), t.clone()));
    match &**t {
        Term::Lam(_, _, b) | Term::TyLam(_, _, b) => positions(b, at.child(1), out),
        Term::Meta(..) => {}
        _ => {
            let tms = term::spine(t).1.into_iter().filter_map(|a| match a {
                Arg::Tm(a) => Some(a),
                Arg::Ty(_) => None,
            });
            for (k, a) in tms.enumerate() {
                positions(&a, at.child(k as u8 + 1), out);
            }
        }
    }
}

fn find(t: &Tm, pred: impl Fn(&Tm) -> bool) -> Vec<Pos> {
    let mut all = Vec::new();
    positions(t, Pos::default(), &mut all);
    all.into_iter().filter(|(_, s)| pred(s)).map(|(p, _)| p).collect()
}

/// Pushes lifts inward on both sides, then searches for left summands that
/// can be dropped without losing the verdict of `lhs` against `rhs`.
pub fn suggest(lhs: &Tm, rhs: &Tm, ty: &Ty, metas: &Metas) -> HintScript {
    let mut cmp = Comparator::new(metas);
    let goal = cmp.verdict(lhs, rhs, ty);
    let mut script = HintScript::default();
    if goal == Verdict::Unknown {
        return script;
    }
    let (mut l, mut r) = (lhs.clone(), rhs.clone());
    for side in [Side::Lhs, Side::Rhs] {
        loop {
            let cur = if side == Side::Lhs { &l } else { &r };
            let Some(pos) = find(cur, |s| lift_split(s).is_some()).into_iter().next() else { break };
            let step = HintStep { lemma: Lemma::LiftSplit, side, pos };
            let Ok(done) = replay(&HintScript { steps: vec![step.clone()] }, &l, &r, metas) else { break };
            l = done[0].lhs.clone();
            r = done[0].rhs.clone();
            script.steps.push(step);
        }
    }
    'outer: loop {
        for p in find(&l, |s| call(s, PLUS).is_some()) {
            for keep in [1, 2] {
                let step = HintStep { lemma: Lemma::PluspartsDrop(keep), side: Side::Lhs, pos: p.clone() };
                let Ok(done) = replay(&HintScript { steps: vec![step.clone()] }, &l, &r, metas) else { continue };
                if cmp.verdict(&done[0].lhs, &r, ty) == goal {
                    script.steps.push(step);
                    l = done[0].lhs.clone();
                    continue 'outer;
                }
            }
        }
        return script;
    }
}
