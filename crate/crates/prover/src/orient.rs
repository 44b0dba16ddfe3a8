use polyterm_core::term::{self, Tm};
use polyterm_core::ty::Ty;
use polyterm_core::{typecheck, Metas};
use polyterm_interp::{builtins, nf};
use polyterm_ordering::{ground_compare, Comparator, GroundOutcome, OracleConfig, Verdict};
use polyterm_pfs::RuleSchema;
use serde::{Serialize, Serializer};

use crate::error::{ProverError, Result};
use crate::hint::{self, HintScript};
use crate::interpretation::Interpretation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleSummary {
    Consistent(usize),
    Refuted(String),
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct HintLine {
    pub step: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationResult {
    pub rule: String,
    #[serde(serialize_with = "verdict_name")]
    pub verdict: Verdict,
    pub base: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hints: Vec<HintLine>,
    pub oracle: OracleSummary,
}

fn verdict_name<S: Serializer>(v: &Verdict, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Both interpreted sides in normal form, with their type and the
/// interpreted metavariable declarations.
pub struct Goal {
    pub lhs: Tm,
    pub rhs: Tm,
    pub ty: Ty,
    pub metas: Metas,
}

pub fn interpret_rule(r: &RuleSchema, interp: &Interpretation) -> Result<Goal> {
    let metas = interp.interpret_metas(&r.core_metas())?;
    let lhs = interp.interpret_term(&r.lhs)?;
    let rhs = interp.interpret_term(&r.rhs)?;
    let ty = interp.interpret_type(&r.ty)?;
    let sig = builtins::signature();
    for side in [&lhs, &rhs] {
        let got = typecheck(side, &sig, &metas).map_err(|e| ProverError::IllTyped { rule: r.name.clone(), msg: e.to_string() })?;
        if got != ty {
            return Err(ProverError::IllTyped { rule: r.name.clone(), msg: "side type differs from the rule type".into() });
        }
    }
    Ok(Goal { lhs: nf(&term::canonicalize(&lhs)), rhs: nf(&term::canonicalize(&rhs)), ty, metas })
}

/// Interprets both sides of a rule, replays its hint script if there is
/// one, compares the resulting goal and cross-checks a positive verdict on
/// the original sides with the ground oracle.
pub fn orient_rule(r: &RuleSchema, interp: &Interpretation, cfg: &OracleConfig) -> Result<OrientationResult> {
    let g = interpret_rule(r, interp)?;
    let (mut l, mut rh) = (g.lhs.clone(), g.rhs.clone());
    let mut hints = Vec::new();
    if let Some(script) = interp.hints.get(&r.name) {
        let steps = hint::replay(script, &l, &rh, &g.metas)
            .map_err(|(step, msg)| ProverError::HintReplay { rule: r.name.clone(), step, msg })?;
        for s in &steps {
            hints.push(HintLine { step: s.step.to_string(), lhs: r.show_term(&s.lhs, false), rhs: r.show_term(&s.rhs, false) });
        }
        if let Some(last) = steps.last() {
            l = last.lhs.clone();
            rh = last.rhs.clone();
        }
    }
    let c = Comparator::new(&g.metas).compare(&l, &rh, &g.ty);
    let oracle = match c.verdict {
        Verdict::Unknown => OracleSummary::Skipped,
        v => match ground_compare(&g.lhs, &g.rhs, &g.ty, &g.metas, v, cfg) {
            Ok(GroundOutcome::Consistent(n)) => OracleSummary::Consistent(n),
            Ok(GroundOutcome::Refuted(w)) => OracleSummary::Refuted(w.describe()),
            Err(e) => OracleSummary::Refuted(e.to_string()),
        },
    };
    Ok(OrientationResult {
        rule: r.name.clone(),
        verdict: c.verdict,
        base: r.show_type(&c.base, false),
        lhs: r.show_term(&c.lhs.denote(&c.base), false),
        rhs: r.show_term(&c.rhs.denote(&c.base), false),
        hints,
        oracle,
    })
}

/// A drop-only script for the rule under `interp` that keeps its verdict.
pub fn suggest_hint(r: &RuleSchema, interp: &Interpretation) -> Result<HintScript> {
    let g = interpret_rule(r, interp)?;
    Ok(hint::suggest(&g.lhs, &g.rhs, &g.ty, &g.metas))
}
