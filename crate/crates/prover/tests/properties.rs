use polyterm_core::term::{self, Tm};
use polyterm_core::{typecheck, Kind, Metas, Name, Ty};
use polyterm_interp::builtins;
use polyterm_ordering::{ground_compare, GroundOutcome, OracleConfig, Verdict};
use polyterm_pfs::gen::{GenScope, PfsGen};
use polyterm_pfs::{load_system, rewrite_step, System};
use polyterm_prover::{load_interpretation, Interpretation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(pfs: &str, interp: &str) -> (System, Interpretation) {
    let d = format!("{}/../../corpus", env!("CARGO_MANIFEST_DIR"));
    let sys = load_system(&std::fs::read_to_string(format!("{d}/{pfs}")).unwrap()).unwrap();
    let i = load_interpretation(&std::fs::read_to_string(format!("{d}/{interp}")).unwrap(), interp, &sys.sig).unwrap();
    (sys, i)
}

/// Pairs `(s, x, t)` with `x` free in `s` and `t` of the type of `x`.
fn samples(sys: &System, seed: u64, want: usize) -> Vec<(Tm, Name, Tm)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..want * 40 {
        if out.len() == want {
            break;
        }
        let mut g = PfsGen::new(&sys.sig, &mut rng);
        let target = g.ty(&Kind::Star, 1, &mut GenScope::default());
        let Some(s) = g.term(&target, 12, &mut GenScope::default()) else { continue };
        let mut fv = Vec::new();
        term::free_vars(&s, &mut fv);
        let Some((x, xty)) = fv.first().cloned() else { continue };
        let Some(t) = g.term(&xty, 8, &mut GenScope::default()) else { continue };
        out.push((s, x, t));
    }
    out
}

fn subst(s: &Tm, x: &str, t: &Tm) -> Tm {
    term::subst_free(s, &|m| (m == x).then(|| t.clone()))
}

#[test]
fn interpretation_commutes_with_substitution() {
    let mut n = 0;
    for (pfs, interp, seed) in [("fold.pfs", "fold-round1.interp", 1), ("ipc2.pfs", "ipc2.interp", 2)] {
        let (sys, i) = setup(pfs, interp);
        for (s, x, t) in samples(&sys, seed, 250) {
            let lhs = subst(&i.interpret_term(&s).unwrap(), &x, &i.interpret_term(&t).unwrap());
            let rhs = i.interpret_term(&subst(&s, &x, &t)).unwrap();
            assert_eq!(term::canonicalize(&lhs), term::canonicalize(&rhs));
            n += 1;
        }
    }
    assert_eq!(n, 500);
}

#[test]
fn interpretation_preserves_types() {
    let sig = builtins::signature();
    for (pfs, interp, seed) in [("fold.pfs", "fold-round1.interp", 3), ("ipc2.pfs", "ipc2.interp", 4)] {
        let (sys, i) = setup(pfs, interp);
        for (s, _, _) in samples(&sys, seed, 100) {
            let ty: Ty = typecheck(&s, &sys.sig, &Metas::default()).unwrap();
            assert_eq!(typecheck(&i.interpret_term(&s).unwrap(), &sig, &Metas::default()).unwrap(), i.interpret_type(&ty).unwrap());
        }
    }
}

#[test]
fn strict_rules_decrease_in_context() {
    let (sys, i) = setup("fold.pfs", "fold-round1.interp");
    let strict: Vec<_> = sys.rules.iter().filter(|r| r.name.starts_with("foldl")).cloned().collect();
    let cfg = OracleConfig { closures: 10, args: 3, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..400 {
        let mut g = PfsGen::new(&sys.sig, &mut rng);
        let target = g.ty(&Kind::Star, 1, &mut GenScope::default());
        let Some(t) = g.term(&target, 14, &mut GenScope::default()) else { continue };
        let ty = i.interpret_type(&typecheck(&t, &sys.sig, &Metas::default()).unwrap()).unwrap();
        for red in rewrite_step(&t, &strict) {
            let (a, b) = (i.interpret_term(&t).unwrap(), i.interpret_term(&red.result).unwrap());
            let out = ground_compare(&a, &b, &ty, &Metas::default(), Verdict::Strict, &cfg).unwrap();
            assert!(matches!(out, GroundOutcome::Consistent(_)), "{out:?}");
            checked += 1;
        }
    }
    assert!(checked >= 30, "{checked}");
}
