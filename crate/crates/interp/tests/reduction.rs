use num_bigint::BigUint;
use polyterm_core::term::{self, Tm};
use polyterm_core::ty::{self, Ty};
use polyterm_core::typeck::{typecheck, Metas};
use polyterm_core::Kind;
use polyterm_interp::builtins::{flatten, lift, nat, plus, signature, times};
use polyterm_interp::gen::{Scope, TermGen};
use polyterm_interp::{
    is_final, nat_value, nf, normalize_with, reduce_step, Evaluator, InterpError, Options, Strategy,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nn() -> Ty {
    ty::arrow(nat(), nat())
}

fn rules(t: &Tm, strategy: Strategy) -> (Tm, Vec<u8>) {
    let (r, trace, _) = normalize_with(t, Options { strategy, fuel: None, trace: true }).unwrap();
    (r, trace.0.iter().map(|s| s.rule).collect())
}

#[test]
fn numeral_arithmetic() {
    let t = plus(&nat(), term::num(2u32), term::num(3u32));
    let steps = reduce_step(&t);
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].rule, 5);
    assert_eq!(steps[0].result, term::num(5u32));
    let t = times(&nat(), term::num(4u32), term::num(3u32));
    assert_eq!(reduce_step(&t)[0].result, term::num(12u32));
}

#[test]
fn flatten_at_quantified_type_uses_chi() {
    let sigma = ty::forall("a", Kind::Star, ty::arrow(ty::bound(0), ty::bound(0)));
    let s = term::free("s", sigma.clone());
    let t = flatten(&sigma, s.clone());
    let steps = reduce_step(&t);
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].rule, 10);
    assert_eq!(steps[0].result, flatten(&nn(), term::tyapp(s, nat())));
}

#[test]
fn sum_at_type_variable_is_not_a_redex() {
    let body = plus(&ty::bound(0), term::bound(0), term::bound(0));
    let t = term::tylam("a", Kind::Star, term::lam("x", ty::bound(0), body));
    assert!(reduce_step(&t).is_empty());
}

#[test]
fn flatten_of_lift_at_arrow() {
    let t = flatten(&nn(), lift(&nn(), term::num(3u32)));
    let (r, seq) = rules(&t, Strategy::LeftmostOutermost);
    assert_eq!(r, term::num(3u32));
    assert_eq!(seq, vec![9, 8, 12, 4, 11]);
    let mut sorted = seq.clone();
    sorted.sort();
    assert_eq!(sorted, vec![4, 8, 9, 11, 12]);
    let (r2, _) = rules(&t, Strategy::LeftmostInnermost);
    assert_eq!(r2, r);
}

#[test]
fn sum_with_lifted_constant_applied() {
    let s = term::free("s", nn());
    let t = term::free("t", nat());
    let input = term::app(plus(&nn(), s.clone(), lift(&nn(), term::num(1u32))), t.clone());
    let (r, trace, _) =
        normalize_with(&input, Options { strategy: Strategy::LeftmostOutermost, fuel: None, trace: true }).unwrap();
    assert_eq!(r, plus(&nat(), term::app(s, t), term::num(1u32)));
    let seq: Vec<(u8, String)> = trace.0.iter().map(|s| (s.rule, term::format_pos(&s.pos))).collect();
    let expect: Vec<(u8, String)> = [(6, "1"), (4, "e"), (12, "2.1"), (4, "2"), (11, "2")]
        .iter()
        .map(|(r, p)| (*r, p.to_string()))
        .collect();
    assert_eq!(seq, expect);
    for w in trace.0.windows(2) {
        assert_eq!(w[0].after, w[1].before);
    }
}

#[test]
fn numeral_is_final_and_normal() {
    let seven = term::num(7u32);
    assert!(reduce_step(&seven).is_empty());
    assert!(is_final(&seven));
    assert_eq!(nat_value(&seven).unwrap(), BigUint::from(7u32));
    let open = plus(&nat(), term::free("x", nat()), term::num(1u32));
    assert!(!is_final(&open));
    assert_eq!(nat_value(&term::free("x", nat())), Err(InterpError::NotFinal));
    let id = term::lam("x", nat(), term::bound(0));
    assert!(is_final(&id));
    assert_eq!(nat_value(&id), Err(InterpError::NotNat));
    let redex = term::lam("x", nat(), plus(&nat(), term::bound(0), term::num(1u32)));
    assert!(is_final(&redex));
}

#[test]
fn fuel_exhaustion_is_reported() {
    let t = flatten(&nn(), lift(&nn(), term::num(3u32)));
    let r = normalize_with(&t, Options { strategy: Strategy::LeftmostOutermost, fuel: Some(2), trace: false });
    assert_eq!(r, Err(InterpError::FuelExhausted(2)));
}

#[test]
fn steps_preserve_types_and_strategies_agree() {
    let sig = signature();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let free = vec![("f".into(), nn()), ("n".into(), nat())];
    for _ in 0..200 {
        let mut sc = Scope::with_free(free.clone());
        let (t, sigma) = TermGen::new(&mut rng).any(20, &mut sc);
        assert_eq!(typecheck(&t, &sig, &Metas::default()).unwrap(), sigma, "{t}");
        for s in reduce_step(&t) {
            assert_eq!(typecheck(&s.result, &sig, &Metas::default()).unwrap(), sigma);
        }
        let (a, _) = rules(&t, Strategy::LeftmostOutermost);
        let (b, _) = rules(&t, Strategy::LeftmostInnermost);
        assert_eq!(a, b, "{t}");
        assert_eq!(nf(&t), a);
    }
}

#[test]
fn evaluator_agrees_with_rewriting() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let mut sc = Scope::default();
        let t = TermGen::new(&mut rng).term(&nat(), 25, &mut sc);
        let n = nf(&t);
        let v = Evaluator::new(1_000_000).eval_nat(&t).unwrap();
        assert_eq!(nat_value(&n).unwrap(), v, "{t}");
    }
}
