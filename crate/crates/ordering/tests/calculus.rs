use polyterm_core::ty::{self, Ty};
use polyterm_core::{Metas, Tm};
use polyterm_interp::builtins::nat;
use polyterm_ordering::{canon, ground_compare, to_polynomial, Comparator, GroundOutcome, OracleConfig, Verdict};
use polyterm_text::Env;

fn env() -> Env {
    let mut e = Env::interp();
    let nn = ty::arrow(nat(), nat());
    e.free_tms.insert("x".into(), nat());
    e.free_tms.insert("y".into(), nat());
    e.free_tms.insert("s".into(), nn.clone());
    e.free_tms.insert("f".into(), ty::arrow(nn, nat()));
    let poly = e.parse_type("!a. a -> a").unwrap().0;
    e.free_tms.insert("p".into(), poly);
    e
}

fn tm(src: &str) -> (Tm, Ty) {
    env().parse_term(src, None).unwrap()
}

fn verdict(l: &str, r: &str) -> Verdict {
    let (s, ty) = tm(l);
    let (t, ty2) = tm(r);
    assert_eq!(ty, ty2);
    let metas = Metas::default();
    Comparator::new(&metas).verdict(&s, &t, &ty)
}

fn oracle(l: &str, r: &str, claim: Verdict) -> GroundOutcome {
    let (s, ty) = tm(l);
    let (t, _) = tm(r);
    let cfg = OracleConfig { closures: 60, ..OracleConfig::default() };
    ground_compare(&s, &t, &ty, &Metas::default(), claim, &cfg).unwrap()
}

#[test]
fn polynomial_identities() {
    let same = |a: &str, b: &str| {
        let (s, ty) = tm(a);
        let (t, _) = tm(b);
        assert_eq!(to_polynomial(&s, &ty), to_polynomial(&t, &ty), "{a} vs {b}");
        assert_eq!(canon(&s), canon(&t));
    };
    same("x (+) y", "y (+) x");
    same("(x (+) y) (*) x", "x (*) x (+) y (*) x");
    same("x (*) (y (*) 2)", "2 (*) y (*) x");
    same("x (+) 0", "x");
    same("2 (*) x", "x (+) x");
    same("s (x (+) y)", "s (y (+) x)");
}

#[test]
fn constants_decide_strictness() {
    assert_eq!(verdict("x (+) 1", "x"), Verdict::Strict);
    assert_eq!(verdict("x", "x (+) 1"), Verdict::Unknown);
    assert_eq!(verdict("x (*) 2", "x"), Verdict::Weak);
    assert_eq!(verdict("x (*) y", "x"), Verdict::Unknown);
    assert_eq!(verdict("3", "2"), Verdict::Strict);
    assert_eq!(verdict("x (+) y (+) 1", "y (+) x"), Verdict::Strict);
}

#[test]
fn coefficients_split_across_monomials() {
    assert_eq!(verdict("3 (*) x (+) 2", "x (+) x (+) 1"), Verdict::Strict);
    assert_eq!(verdict("x (+) 2", "x (+) x (+) 1"), Verdict::Unknown);
}

#[test]
fn scaled_sum_dominates_summand() {
    assert_eq!(verdict("2 (*) s x (+) y", "s x"), Verdict::Weak);
    assert_eq!(verdict("2 (*) s x (+) y (+) 1", "s x"), Verdict::Strict);
}

#[test]
fn monotone_arguments() {
    assert_eq!(verdict("s (x (+) 1)", "s x"), Verdict::Weak);
    assert_eq!(verdict("s x", "s (x (+) 1)"), Verdict::Unknown);
    assert_eq!(verdict("f (\\z:nat. s z (+) 1)", "f s"), Verdict::Weak);
}

#[test]
fn higher_types_apply_fresh_arguments() {
    assert_eq!(verdict("\\z:nat. s z (+) 1", "s"), Verdict::Strict);
    assert_eq!(verdict("s (+) lift[nat -> nat](2)", "s (+) lift[nat -> nat](1)"), Verdict::Strict);
    assert_eq!(verdict("/\\a. \\z:a. p[a](z) (+) lift[a](1)", "p"), Verdict::Strict);
    assert_eq!(verdict("flatten[nat -> nat](s)", "s 0"), Verdict::Weak);
}

#[test]
fn flatten_of_lift() {
    assert_eq!(verdict("flatten[!a. a -> a](lift[!a. a -> a](x))", "x"), Verdict::Weak);
    let (s, ty) = tm("/\\a. \\z:a. flatten[a](lift[a](x (+) 1) (+) z)");
    let (t, _) = tm("/\\a. \\z:a. x (+) flatten[a](z) (+) 1");
    let metas = Metas::default();
    let c = Comparator::new(&metas).compare(&s, &t, &ty);
    assert_eq!(c.verdict, Verdict::Weak);
    assert_eq!(c.lhs, c.rhs);
}

#[test]
fn oracle_refutes_false_claims() {
    match oracle("x (+) 1", "x (*) 2", Verdict::Strict) {
        GroundOutcome::Refuted(w) => assert!(w.lhs <= w.rhs),
        other => panic!("{other:?}"),
    }
    assert!(matches!(oracle("s", "s (+) lift[nat -> nat](1)", Verdict::Weak), GroundOutcome::Refuted(_)));
}

#[test]
fn oracle_agrees_with_strict_verdicts() {
    for (l, r) in [
        ("x (+) 1", "x"),
        ("\\z:nat. s z (+) 1", "s"),
        ("2 (*) s x (+) y (+) 1", "s x"),
        ("/\\a. \\z:a. p[a](z) (+) lift[a](1)", "p"),
    ] {
        assert_eq!(verdict(l, r), Verdict::Strict);
        match oracle(l, r, Verdict::Strict) {
            GroundOutcome::Consistent(n) => assert!(n > 0, "{l}"),
            GroundOutcome::Refuted(w) => panic!("{l} > {r} refuted by {w:?}"),
        }
    }
}

#[test]
fn oracle_is_deterministic() {
    let run = || match oracle("x (*) x", "x (+) 1", Verdict::Weak) {
        GroundOutcome::Refuted(w) => (w.lhs, w.rhs),
        other => panic!("{other:?}"),
    };
    assert_eq!(run(), run());
}
