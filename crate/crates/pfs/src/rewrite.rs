use polyterm_core::term::{format_pos, replace_at, Term, Tm};
use polyterm_core::Ty;

use crate::matching::{match_schema, Replacement};
use crate::schema::RuleSchema;

/// A term with one designated position, the hole, of type `hole`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub term: Tm,
    pub pos: Vec<u8>,
    pub hole: Ty,
}

impl Context {
    pub fn fill(&self, t: Tm) -> Tm {
        replace_at(&self.term, &self.pos, t).expect("context position exists")
    }

    pub fn position(&self) -> String {
        format_pos(&self.pos)
    }
}

#[derive(Clone, Debug)]
pub struct Reduct {
    pub rule: usize,
    pub context: Context,
    pub bindings: Replacement,
    pub result: Tm,
}

/// Subterms in pre-order, left to right.
pub fn positions(t: &Tm) -> Vec<(Vec<u8>, Tm)> {
    fn rec(t: &Tm, path: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, Tm)>) {
        out.push((path.clone(), t.clone()));
        match &**t {
            Term::App(f, a) => {
                path.push(1);
                rec(f, path, out);
                path.pop();
                path.push(2);
                rec(a, path, out);
                path.pop();
            }
            Term::TyApp(f, _) | Term::Lam(_, _, f) | Term::TyLam(_, _, f) => {
                path.push(1);
                rec(f, path, out);
                path.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    rec(t, &mut Vec::new(), &mut out);
    out
}

/// All one-step reducts, outermost positions first and rules in order.
pub fn rewrite_step(t: &Tm, rules: &[RuleSchema]) -> Vec<Reduct> {
    let mut out = Vec::new();
    for (pos, sub) in positions(t) {
        for (i, r) in rules.iter().enumerate() {
            let Some(b) = match_schema(r, &sub) else { continue };
            let (Some(rhs), Some(hole)) = (b.instantiate(r, &r.rhs), b.inst_ty(r, &r.ty, 0)) else { continue };
            let context = Context { term: t.clone(), pos: pos.clone(), hole };
            let result = context.fill(rhs);
            out.push(Reduct { rule: i, context, bindings: b, result });
        }
    }
    out
}
