use polyterm_core::print::Printer;
use polyterm_core::{ty, typecheck, Metas};
use polyterm_pfs::gen::{GenScope, PfsGen};
use polyterm_pfs::{check_system, load_system, match_schema, print_system, rewrite_step, validate_pfs_term, PfsError, System};
use polyterm_text::{Env, Scope};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fold() -> System {
    load_system(include_str!("../../../corpus/fold.pfs")).unwrap()
}

fn env(sys: &System, frees: &[(&str, &str)]) -> Env {
    let mut e = Env::new(sys.sig.clone());
    for (n, t) in frees {
        let (t, _) = e.parse_type(t).unwrap();
        e.free_tms.insert(n.to_string(), t);
    }
    e
}

fn term(e: &Env, src: &str) -> polyterm_core::Tm {
    e.term(&polyterm_text::raw::parse_term(src).unwrap(), &mut Scope::default(), None).unwrap().0
}

#[test]
fn fold_system_loads() {
    let sys = fold();
    assert_eq!(sys.rules.len(), 4);
    let names: Vec<&str> = sys.rules.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, ["app_beta", "tyapp_beta", "foldl_nil", "foldl_cons"]);
    let r = sys.rule("app_beta").unwrap();
    assert_eq!(r.display(false), "@[sigma, tau](\\x:sigma. S, T) => S[x:=T]");
    assert_eq!(Printer::default().ty(&r.ty), "tau");
}

#[test]
fn print_then_load_is_identity() {
    let sys = fold();
    let txt = print_system(&sys, false);
    let again = load_system(&txt).unwrap();
    assert_eq!(sys.sig.consts, again.sig.consts);
    assert_eq!(sys.sig.symbols, again.sig.symbols);
    for (a, b) in sys.rules.iter().zip(&again.rules) {
        assert_eq!((&a.lhs, &a.rhs, &a.ty), (&b.lhs, &b.rhs, &b.ty), "{}", a.name);
    }
    let uni = load_system(&print_system(&sys, true)).unwrap();
    assert_eq!(uni.rules[3].rhs, sys.rules[3].rhs);
}

#[test]
fn head_restriction() {
    let sys = fold();
    let e = env(&sys, &[("f", "!a. List -> a -> List"), ("s", "List"), ("x", "!a. a")]);
    let ok = term(&e, "foldl[List](f, s, nil)");
    validate_pfs_term(&ok, &sys.sig).unwrap();
    let bad = term(&e, "(\\y:List. y) s");
    assert!(matches!(validate_pfs_term(&bad, &sys.sig), Err(PfsError::HeadViolation { .. })));
    let tyapp = term(&e, "x[List]");
    validate_pfs_term(&tyapp, &sys.sig).unwrap();
    let var_head = term(&e, "f[List] s");
    assert!(validate_pfs_term(&var_head, &sys.sig).is_err());
}

#[test]
fn matching_and_rewriting() {
    let sys = fold();
    let e = env(&sys, &[("f", "!a. List -> a -> List"), ("s", "List"), ("h", "List -> List"), ("t", "List")]);
    let nil = term(&e, "foldl[List](f, s, nil)");
    let rs = rewrite_step(&nil, &sys.rules);
    assert_eq!(rs.len(), 1);
    assert_eq!(Printer::default().term(&rs[0].result), "s");
    let cons = term(&e, "foldl[List](f, s, cons[List -> List](h, t))");
    let rs = rewrite_step(&cons, &sys.rules);
    assert_eq!(rs.len(), 1);
    assert_eq!(sys.rules[rs[0].rule].name, "foldl_cons");
    let want = term(
        &e,
        "foldl[List](f, @[List -> List, List](@[List, (List -> List) -> List](A[\\a. List -> a -> List, List -> List](f), s), h), t)",
    );
    assert_eq!(rs[0].result, want);
    assert!(match_schema(sys.rule("foldl_nil").unwrap(), &cons).is_none());
    let v = term(&e, "s");
    assert!(rewrite_step(&v, &sys.rules).is_empty());
}

#[test]
fn higher_order_type_patterns() {
    let sys = fold();
    let mut e = env(&sys, &[]);
    e.free_tys.insert("P".into(), polyterm_text::kind("* => *").unwrap());
    e.free_tms.insert("s".into(), e.parse_type("!c. P c").unwrap().0);
    let subj = term(&e, "A[\\c. P c, List](/\\c. s[c])");
    let r = sys.rule("tyapp_beta").unwrap();
    let b = match_schema(r, &subj).unwrap();
    let f = |n: &str| r.meta_ctx(n);
    let p = Printer { unicode: false, meta_ctx: Some(&f) };
    assert_eq!(p.ty_under(&b.types["sigma"], &["a".into()]), "P a");
    assert_eq!(Printer::default().ty(&b.types["tau"]), "List");
    let out = rewrite_step(&subj, &sys.rules);
    assert_eq!(Printer::default().term(&out[0].result), "s [List]");
    let beta = term(&e, "@[List, List](\\y:List. cons[List](y, y), nil)");
    let out = rewrite_step(&beta, &sys.rules);
    assert_eq!(Printer::default().term(&out[0].result), "cons[List](nil, nil)");
}

#[test]
fn rewriting_under_binders() {
    let sys = fold();
    let e = env(&sys, &[("t", "List")]);
    let subj = term(&e, "@[List, List](\\y:List. @[List, List](\\z:List. cons[List](y, z), y), t)");
    let out = rewrite_step(&subj, &sys.rules);
    assert_eq!(out.len(), 2);
    assert_eq!(out[1].context.position(), "1.2.1");
    assert_eq!(Printer::default().term(&out[1].result), "@[List, List](\\y:List. cons[List](y, y), t)");
    assert_eq!(Printer::default().term(&out[0].result), "@[List, List](\\z:List. cons[List](t, z), t)");
}

#[test]
fn rule_errors() {
    let base = "kind List : *\nchi List\nsymbol f : List -> List\n";
    let (_, errs) = check_system(&format!("{base}meta X : List\nrule r: f(X) => Y\n"));
    assert!(matches!(errs[..], [PfsError::Scope { .. }]), "{errs:?}");
    let (_, errs) = check_system(&format!("{base}meta X Y : List\nrule r: f(X) => Y\n"));
    assert!(matches!(errs[..], [PfsError::Scope { .. }]), "{errs:?}");
    let (_, errs) = check_system(&format!("{base}symbol n : List -> List -> List\nmeta X : List\nrule r: f(X) => n(X)\n"));
    assert!(matches!(errs[..], [PfsError::TypeMismatch { .. }]), "{errs:?}");
    let (_, errs) = check_system("kind List : *\nsymbol nil : List\n");
    assert_eq!(errs.len(), 1);
}

#[test]
fn sampled_reducts_stay_typed_and_valid() {
    let sys = fold();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hits = 0;
    for _ in 0..300 {
        let mut g = PfsGen::new(&sys.sig, &mut rng);
        let target = ty::constant("List");
        let Some(t) = g.term(&target, 12, &mut GenScope::default()) else { continue };
        validate_pfs_term(&t, &sys.sig).unwrap();
        assert_eq!(typecheck(&t, &sys.sig, &Metas::default()).unwrap(), target);
        for red in rewrite_step(&t, &sys.rules) {
            hits += 1;
            validate_pfs_term(&red.result, &sys.sig).unwrap();
            assert_eq!(typecheck(&red.result, &sys.sig, &Metas::default()).unwrap(), target);
            let r = &sys.rules[red.rule];
            let sub = polyterm_core::term::subterm(&t, &red.context.pos).unwrap();
            assert_eq!(red.bindings.instantiate(r, &r.lhs).unwrap(), sub);
        }
    }
    assert!(hits > 20, "only {hits} reducts");
}

#[test]
fn substitution_preserves_validity() {
    let sys = fold();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let list = ty::constant("List");
    let mut n = 0;
    for _ in 0..200 {
        let mut g = PfsGen::new(&sys.sig, &mut rng);
        let (Some(s), Some(t)) = (g.term(&list, 10, &mut GenScope::default()), g.term(&list, 6, &mut GenScope::default())) else {
            continue;
        };
        let Some((x, _)) = g.frees.iter().find(|(_, ft)| *ft == list).cloned() else { continue };
        let r = polyterm_core::term::subst_free(&s, &|m| (m == &*x).then(|| t.clone()));
        validate_pfs_term(&r, &sys.sig).unwrap();
        assert_eq!(typecheck(&r, &sys.sig, &Metas::default()).unwrap(), list);
        n += 1;
    }
    assert!(n > 100);
}
