use polyterm_core::ty::{self, Ty};
use polyterm_core::{kind_of, Kind, Metas, Signature};
use proptest::prelude::*;

fn sig() -> Signature {
    let mut s = Signature::new();
    s.add_const("o", Kind::Star).unwrap();
    s
}

/// Types of kind `*` under `n` binders of kind `*`, including beta redexes.
fn star(n: usize, depth: u32) -> BoxedStrategy<Ty> {
    let mut leaves = vec![Just(ty::constant("o")).boxed()];
    if n > 0 {
        leaves.push((0..n).prop_map(ty::bound).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves).boxed();
    if depth == 0 {
        return leaf;
    }
    prop_oneof![
        1 => leaf,
        2 => (star(n, depth - 1), star(n, depth - 1)).prop_map(|(a, b)| ty::arrow(a, b)),
        1 => star(n + 1, depth - 1).prop_map(|b| ty::forall("a", Kind::Star, b)),
        1 => (star(n + 1, depth - 1), star(n, depth - 1))
            .prop_map(|(b, a)| ty::app(ty::lam("a", Kind::Star, b), a)),
    ]
    .boxed()
}

proptest! {
    #[test]
    fn shift_round_trips(t in star(3, 4), d in 1isize..4, c in 0usize..3) {
        prop_assert_eq!(ty::shift(&ty::shift(&t, d, c), -d, c), t);
    }

    #[test]
    fn substituting_a_vacuous_binder_is_identity(t in star(2, 4), s in star(2, 3)) {
        prop_assert_eq!(ty::subst_top(&ty::shift(&t, 1, 0), &s), t);
    }

    #[test]
    fn normalization_is_idempotent(t in star(2, 5)) {
        let n = ty::normalize(&t);
        prop_assert!(ty::is_normal(&n));
        prop_assert_eq!(ty::normalize(&n), n);
    }

    #[test]
    fn normalization_preserves_kinds(t in star(2, 5)) {
        let env = vec![Kind::Star; 2];
        let (s, m) = (sig(), Metas::default());
        prop_assert_eq!(kind_of(&t, &env, &s, &m).unwrap(), Kind::Star);
        prop_assert_eq!(kind_of(&ty::normalize(&t), &env, &s, &m).unwrap(), Kind::Star);
    }

    #[test]
    fn normalization_commutes_with_substitution(b in star(3, 4), s in star(2, 3)) {
        let lhs = ty::normalize(&ty::subst_top(&b, &s));
        let rhs = ty::normalize(&ty::subst_top(&ty::normalize(&b), &ty::normalize(&s)));
        prop_assert_eq!(lhs, rhs);
    }
}
