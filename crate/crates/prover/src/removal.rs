use std::fmt::Write as _;

use indexmap::IndexMap;
use polyterm_core::term::{Arg, Term, Tm};
use polyterm_core::Name;
use polyterm_ordering::{OracleConfig, Verdict};
use polyterm_pfs::{RuleSchema, System};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ProverError, Result};
use crate::interpretation::Interpretation;
use crate::orient::{orient_rule, OracleSummary, OrientationResult};
use crate::safety::check_safety;

pub const TRANSCRIPT_HEADER: &str = "# polyterm-transcript v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Terminating,
    Stuck(Vec<String>),
}

#[derive(Clone, Debug, Serialize)]
pub struct Round {
    pub interpretation: String,
    pub safety: IndexMap<String, String>,
    pub results: Vec<OrientationResult>,
    pub removed: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofTranscript {
    pub rounds: Vec<Round>,
    pub status: Status,
}

fn symbols_in(t: &Tm, out: &mut Vec<Name>) {
    match &**t {
        Term::Sym(n) => {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        Term::Meta(_, args) => {
            for a in args {
                if let Arg::Tm(a) = a {
                    symbols_in(a, out);
                }
            }
        }
        Term::Lam(_, _, b) | Term::TyLam(_, _, b) | Term::TyApp(b, _) => symbols_in(b, out),
        Term::App(f, a) => {
            symbols_in(f, out);
            symbols_in(a, out);
        }
        Term::Bound(_) | Term::Free(..) | Term::Num(_) => {}
    }
}

/// Removes strictly oriented rules round by round, one interpretation per
/// round. A round removes nothing unless every remaining rule is oriented
/// and at least one strictly.
pub fn rule_removal(sys: &System, interps: &[Interpretation], cfg: &OracleConfig) -> Result<ProofTranscript> {
    let mut remaining: Vec<&RuleSchema> = sys.rules.iter().collect();
    let mut rounds = Vec::new();
    let mut last_strict: Option<Vec<String>> = None;
    for (k, interp) in interps.iter().enumerate() {
        if remaining.is_empty() {
            break;
        }
        let round = k + 1;
        let mut syms = Vec::new();
        for r in &remaining {
            symbols_in(&r.lhs, &mut syms);
            symbols_in(&r.rhs, &mut syms);
        }
        let safety = check_safety(interp, &sys.sig, &syms)?;
        if let Some((f, s)) = safety.iter().find(|(_, s)| !s.is_safe()) {
            return Err(ProverError::SafetyFailure { round, symbol: f.to_string(), reason: s.reason() });
        }
        let results = remaining
            .par_iter()
            .map(|r| orient_rule(r, interp, cfg))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = results.iter().find(|o| matches!(o.oracle, OracleSummary::Refuted(_))) {
            let OracleSummary::Refuted(w) = &bad.oracle else { unreachable!() };
            return Err(ProverError::OracleRefuted { rule: bad.rule.clone(), witness: w.clone() });
        }
        let strict: Vec<String> =
            results.iter().filter(|o| o.verdict == Verdict::Strict).map(|o| o.rule.clone()).collect();
        let aborted = if let Some(o) = results.iter().find(|o| o.verdict == Verdict::Unknown) {
            Some(format!("rule {} is not oriented", o.rule))
        } else if strict.is_empty() {
            Some("no rule is oriented strictly".to_string())
        } else {
            None
        };
        let removed = if aborted.is_none() { strict.clone() } else { Vec::new() };
        remaining.retain(|r| !removed.contains(&r.name));
        last_strict = Some(strict);
        rounds.push(Round {
            interpretation: interp.name.clone(),
            safety: safety.iter().map(|(f, s)| (f.to_string(), s.reason())).collect(),
            results,
            removed,
            aborted,
        });
    }
    let status = if remaining.is_empty() {
        Status::Terminating
    } else {
        let strict = last_strict.unwrap_or_default();
        Status::Stuck(remaining.iter().map(|r| r.name.clone()).filter(|n| !strict.contains(n)).collect())
    };
    Ok(ProofTranscript { rounds, status })
}

impl ProofTranscript {
    pub fn is_terminating(&self) -> bool {
        self.status == Status::Terminating
    }

    /// The structured form, preceded by the version header line.
    pub fn to_json(&self) -> String {
        let body = serde_json::to_string_pretty(self).expect("transcript serializes");
        format!("{TRANSCRIPT_HEADER}\n{body}\n")
    }

    pub fn render(&self, polynomials: bool) -> String {
        let mut s = String::new();
        for (k, r) in self.rounds.iter().enumerate() {
            let _ = writeln!(s, "round {}: {}", k + 1, r.interpretation);
            let safe: Vec<&str> = r.safety.keys().map(String::as_str).collect();
            let _ = writeln!(s, "  safe: {}", safe.join(", "));
            for o in &r.results {
                let oracle = match &o.oracle {
                    OracleSummary::Consistent(n) => format!("oracle consistent on {n} samples"),
                    OracleSummary::Refuted(w) => format!("oracle refuted: {w}"),
                    OracleSummary::Skipped => "oracle skipped".to_string(),
                };
                let _ = writeln!(s, "  {:<12} {:<8} {oracle}", o.rule, o.verdict.to_string());
                for h in &o.hints {
                    let _ = writeln!(s, "      hint {}", h.step);
                }
                if polynomials {
                    let _ = writeln!(s, "      at {}", o.base);
                    let _ = writeln!(s, "      lhs {}", o.lhs);
                    let _ = writeln!(s, "      rhs {}", o.rhs);
                }
            }
            match &r.aborted {
                Some(why) => {
                    let _ = writeln!(s, "  nothing removed: {why}");
                }
                None => {
                    let _ = writeln!(s, "  removed: {}", r.removed.join(", "));
                }
            }
        }
        match &self.status {
            Status::Terminating => {
                let _ = writeln!(s, "terminating after {} rounds", self.rounds.len());
            }
            Status::Stuck(rest) => {
                let _ = writeln!(s, "stuck, not oriented: {}", rest.join(", "));
            }
        }
        s
    }
}
