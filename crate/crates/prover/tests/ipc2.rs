use polyterm_interp::builtins::nat;
use polyterm_ordering::{OracleConfig, Verdict};
use polyterm_pfs::{load_system, System};
use polyterm_prover::{check_safety, load_interpretation, orient_rule, rule_removal, HintScript, Interpretation, ProverError, Status};

const LET_RULES: [&str; 7] = ["eps_let", "app_let", "tapp_let", "pr1_let", "pr2_let", "case_let", "let_let"];

fn ipc2() -> System {
    load_system(include_str!("../../../corpus/ipc2.pfs")).unwrap()
}

fn interp(sys: &System, extra: &str) -> Interpretation {
    let src = format!("{}\n{extra}", include_str!("../../../corpus/ipc2.interp"));
    load_interpretation(&src, "ipc2.interp", &sys.sig).unwrap()
}

fn cfg() -> OracleConfig {
    OracleConfig { closures: 20, ..Default::default() }
}

#[test]
fn bottom_is_nat() {
    let sys = ipc2();
    let i = interp(&sys, "");
    assert_eq!(i.interpret_type(&polyterm_core::ty::constant("bot")).unwrap(), nat());
}

#[test]
fn every_symbol_is_safe() {
    let sys = ipc2();
    let i = interp(&sys, "");
    let syms: Vec<_> = sys.sig.symbols.keys().cloned().collect();
    let m = check_safety(&i, &sys.sig, &syms).unwrap();
    assert_eq!(m.len(), sys.sig.symbols.len());
    for (f, s) in &m {
        assert!(s.is_safe(), "{f}: {}", s.reason());
    }
}

#[test]
fn stuck_on_let_commutations() {
    let sys = ipc2();
    let tr = rule_removal(&sys, &[interp(&sys, "")], &cfg()).unwrap();
    assert_eq!(tr.status, Status::Stuck(LET_RULES.iter().map(|s| s.to_string()).collect()));
    let round = &tr.rounds[0];
    assert!(round.removed.is_empty());
    assert!(round.aborted.is_some());
    let strict = round.results.iter().filter(|o| o.verdict == Verdict::Strict).count();
    assert_eq!(strict, 21);
    for o in &round.results {
        assert_eq!(o.verdict == Verdict::Unknown, LET_RULES.contains(&o.rule.as_str()), "{}", o.rule);
        assert_eq!(!o.hints.is_empty(), o.rule.ends_with("_case"), "{}", o.rule);
    }
}

#[test]
fn hints_agree_with_the_automatic_verdict() {
    let sys = ipc2();
    let with = interp(&sys, "");
    let mut without = with.clone();
    without.hints.clear();
    for name in with.hints.keys() {
        let r = sys.rule(name).unwrap();
        let a = orient_rule(r, &with, &cfg()).unwrap();
        let b = orient_rule(r, &without, &cfg()).unwrap();
        assert_eq!((a.verdict, b.verdict), (Verdict::Strict, Verdict::Strict), "{name}");
        assert_eq!(a.hints.len(), with.hints[name].steps.len());
        assert_eq!(a.rhs, b.rhs, "{name}");
    }
}

#[test]
fn failing_hint_step_is_reported() {
    let sys = ipc2();
    let i = interp(&sys, "hint eps_eps: lift-split lhs e; approx-identity rhs 7 comm");
    match orient_rule(sys.rule("eps_eps").unwrap(), &i, &cfg()) {
        Err(ProverError::HintReplay { rule, step: 2, .. }) => assert_eq!(rule, "eps_eps"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn weakening_too_far_loses_strictness() {
    let sys = ipc2();
    let i = interp(&sys, "hint beta: plusparts-drop lhs e keep 2");
    let o = orient_rule(sys.rule("beta").unwrap(), &i, &cfg()).unwrap();
    assert_ne!(o.verdict, Verdict::Strict);
}

#[test]
fn hint_scripts_round_trip() {
    let sys = ipc2();
    let i = interp(&sys, "");
    for h in i.hints.values() {
        assert_eq!(&HintScript::parse(&h.to_string()).unwrap(), h);
    }
    assert!(HintScript::parse("plusparts-drop rhs e keep 1").is_err());
    assert!(HintScript::parse("approx-identity lhs 1.x comm").is_err());
    assert!(HintScript::parse("beta lhs").is_err());
    assert!(HintScript::parse("approx-identity lhs e swap").is_err());
}
