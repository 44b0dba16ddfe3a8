use std::time::{Duration, Instant};

use clap::Parser;
use polyterm_core::term::{self, Tm};
use polyterm_core::{Metas, Ty};
use polyterm_interp::builtins::{flatten, lift, nat, plus, times};
use polyterm_interp::gen::{random_type, Scope, TermGen};
use polyterm_interp::{is_final, nf, normalize_with, InterpError, Options, Strategy};
use polyterm_ordering::{ground_compare, GroundOutcome, OracleConfig, Verdict};
use polyterm_pfs::{load_system, System};
use polyterm_prover::{
    check_safety, load_interpretation, orient_rule, rule_removal, Interpretation, OracleSummary, OrientationResult,
    ProofTranscript, Safety, Status,
};
use polyterm_text::Env;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn corpus(f: &str) -> String {
    std::fs::read_to_string(format!("{}/../../corpus/{f}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn system(f: &str) -> System {
    load_system(&corpus(f)).unwrap()
}

fn interp(sys: &System, f: &str) -> Interpretation {
    load_interpretation(&corpus(f), f, &sys.sig).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

struct Runs {
    round_one: (Vec<OrientationResult>, Duration),
    fold: (ProofTranscript, Duration),
    ipc2: (ProofTranscript, Duration),
}

fn runs() -> Runs {
    let cfg = OracleConfig::default();
    let fold = system("fold.pfs");
    let r1 = interp(&fold, "fold-round1.interp");
    let r2 = interp(&fold, "fold-round2.interp");
    let round_one = timed(|| fold.rules.iter().map(|r| orient_rule(r, &r1, &cfg).unwrap()).collect());
    let fold_tr = timed(|| rule_removal(&fold, &[r1.clone(), r2.clone()], &cfg).unwrap());
    let ipc2 = system("ipc2.pfs");
    let i = interp(&ipc2, "ipc2.interp");
    let ipc2_tr = timed(|| rule_removal(&ipc2, &[i], &cfg).unwrap());
    Runs { round_one, fold: fold_tr, ipc2: ipc2_tr }
}

fn criterion_1(r: &Runs) -> Outcome {
    let (res, took) = &r.round_one;
    let got: Vec<(&str, Verdict)> = res.iter().map(|o| (o.rule.as_str(), o.verdict)).collect();
    let want = vec![
        ("app_beta", Verdict::Weak),
        ("tyapp_beta", Verdict::Weak),
        ("foldl_nil", Verdict::Strict),
        ("foldl_cons", Verdict::Strict),
    ];
    ensure(got == want, || format!("verdicts {got:?}"))?;
    ensure(*took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("foldl rules Strict, beta rules Weak in {took:.2?}"))
}

fn criterion_2(r: &Runs) -> Outcome {
    let (tr, took) = &r.fold;
    ensure(tr.status == Status::Terminating, || format!("status {:?}", tr.status))?;
    ensure(tr.rounds.len() == 2, || format!("{} rounds", tr.rounds.len()))?;
    ensure(tr.rounds[0].removed == ["foldl_nil", "foldl_cons"], || format!("round 1 removed {:?}", tr.rounds[0].removed))?;
    ensure(tr.rounds[1].removed == ["app_beta", "tyapp_beta"], || format!("round 2 removed {:?}", tr.rounds[1].removed))?;
    ensure(*took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("terminating in 2 rounds in {took:.2?}"))
}

fn criterion_3(r: &Runs) -> Outcome {
    let (tr, took) = &r.ipc2;
    let lets = ["eps_let", "app_let", "tapp_let", "pr1_let", "pr2_let", "case_let", "let_let"];
    let res = &tr.rounds[0].results;
    ensure(res.len() == 28, || format!("{} rules", res.len()))?;
    let strict = res.iter().filter(|o| o.verdict == Verdict::Strict).count();
    ensure(strict == 21, || format!("{strict} strict"))?;
    for o in res {
        let is_let = lets.contains(&o.rule.as_str());
        ensure(is_let == (o.verdict == Verdict::Unknown), || format!("{} is {}", o.rule, o.verdict))?;
    }
    let hinted = res.iter().filter(|o| !o.hints.is_empty()).count();
    ensure(tr.status == Status::Stuck(lets.iter().map(|s| s.to_string()).collect()), || format!("{:?}", tr.status))?;
    ensure(*took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("21 Strict ({hinted} via replayed hints), 7 let rules Unknown in {took:.2?}"))
}

fn criterion_4() -> Outcome {
    let mut env = Env::interp();
    env.free_tms.insert("s".into(), env.parse_type("nat -> nat").unwrap().0);
    env.free_tms.insert("t".into(), nat());
    let p = |src: &str| term::canonicalize(&env.parse_term(src, None).unwrap().0);
    let chain = [
        "(\\x:nat. s x (+) lift[nat -> nat](1) x) t",
        "s t (+) lift[nat -> nat](1) t",
        "s t (+) (\\y:nat. lift[nat](1)) t",
        "s t (+) lift[nat](1)",
        "s t (+) 1",
    ];
    let start = p("(s (+) lift[nat -> nat](1)) . t");
    let (_, trace, _) = normalize_with(&start, Options { strategy: Strategy::LeftmostOutermost, fuel: None, trace: true })
        .map_err(|e| e.to_string())?;
    let got: Vec<Tm> = trace.0.iter().map(|s| term::canonicalize(&s.after)).collect();
    let want: Vec<Tm> = chain.iter().map(|s| p(s)).collect();
    ensure(got == want, || format!("trace of {} steps differs", got.len()))?;
    let cli = polyterm_cli::Cli::try_parse_from([
        "polyterm",
        "normalize",
        "--trace",
        "-f",
        "s:nat -> nat",
        "-f",
        "t:nat",
        "(s (+) lift[nat->nat](1)) . t",
    ])
    .map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    polyterm_cli::run(cli, &mut out).map_err(|e| e.to_string())?;
    let out = String::from_utf8(out).unwrap();
    ensure(out.lines().last() == Some("s t (+) 1"), || out.clone())?;
    Ok("5 steps, ending in s t (+) 1".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let free = vec![("f".into(), Ty::clone(&polyterm_core::ty::arrow(nat(), nat()))), ("n".into(), nat())];
    let (mut done, mut max) = (0, 0);
    while done < 1000 {
        let mut sc = Scope::with_free(free.clone());
        let budget = rng.gen_range(4..=30);
        let (t, _) = TermGen::new(&mut rng).any(budget, &mut sc);
        let size = term::size(&t);
        if size > 30 {
            continue;
        }
        let fuel = 10 * (size * size) as u64;
        let run = |strategy| normalize_with(&t, Options { strategy, fuel: Some(fuel), trace: false });
        let (a, b) = match (run(Strategy::LeftmostOutermost), run(Strategy::LeftmostInnermost)) {
            (Ok(a), Ok(b)) => (a.0, b.0),
            (Err(InterpError::FuelExhausted(_)), _) | (_, Err(InterpError::FuelExhausted(_))) => {
                return Err(format!("fuel {fuel} exhausted on {t}"))
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.to_string()),
        };
        ensure(a == b, || format!("strategies disagree on {t}"))?;
        max = max.max(size);
        done += 1;
    }
    Ok(format!("{done} terms up to size {max}, no fuel exhaustion"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut finals = 0;
    for _ in 0..600 {
        let budget = rng.gen_range(1..=30);
        let t = TermGen::new(&mut rng).term(&nat(), budget, &mut Scope::default());
        let n = nf(&t);
        ensure(is_final(&n), || format!("normal form of {t} is not final"))?;
        ensure(n.as_num().is_some(), || format!("final {n} of type nat is not a numeral"))?;
        finals += 1;
    }
    Ok(format!("{finals} finals of type nat, all numerals"))
}

fn criterion_7(r: &Runs) -> Outcome {
    let mut all: Vec<&OrientationResult> = r.round_one.0.iter().collect();
    for tr in [&r.fold.0, &r.ipc2.0] {
        all.extend(tr.rounds.iter().flat_map(|x| x.results.iter()));
    }
    let mut checked = 0;
    for o in all.into_iter().filter(|o| o.verdict != Verdict::Unknown) {
        match &o.oracle {
            OracleSummary::Consistent(n) => {
                ensure(*n == 1000, || format!("{}: only {n} samples", o.rule))?;
                checked += 1;
            }
            other => return Err(format!("{}: {other:?}", o.rule)),
        }
    }
    Ok(format!("{checked} verdicts, 200 closures x 5 arguments each, no refutation"))
}

/// A sampled instance of one calculation identity: the two sides, their
/// type and the claimed relation.
type Instance = (Tm, Tm, Ty, Claim);

#[derive(Clone, Copy, PartialEq)]
enum Claim {
    Equiv,
    Geq,
    Gt,
}

fn identities() -> Vec<(&'static str, fn(&mut ChaCha8Rng) -> Instance)> {
    fn sample(rng: &mut ChaCha8Rng) -> (Ty, Tm, Tm, Tm, Tm, Tm) {
        let sigma = random_type(rng, 2, 0);
        let free = vec![("x".into(), sigma.clone()), ("k".into(), nat())];
        let mut g = || {
            let mut sc = Scope::with_free(free.clone());
            let b = rng.gen_range(1..8);
            TermGen::new(rng).term(&sigma, b, &mut sc)
        };
        let (s, t, u) = (g(), g(), g());
        let mut sc = Scope::with_free(free.clone());
        let n = TermGen::new(rng).term(&nat(), 5, &mut sc);
        let m = TermGen::new(rng).term(&nat(), 5, &mut sc);
        (sigma, s, t, u, n, m)
    }
    vec![
        ("s (+) t ~ t (+) s", |r| {
            let (g, s, t, ..) = sample(r);
            (plus(&g, s.clone(), t.clone()), plus(&g, t, s), g, Claim::Equiv)
        }),
        ("s (*) t ~ t (*) s", |r| {
            let (g, s, t, ..) = sample(r);
            (times(&g, s.clone(), t.clone()), times(&g, t, s), g, Claim::Equiv)
        }),
        ("s (+) (t (+) u) ~ (s (+) t) (+) u", |r| {
            let (g, s, t, u, ..) = sample(r);
            (plus(&g, s.clone(), plus(&g, t.clone(), u.clone())), plus(&g, plus(&g, s, t), u), g, Claim::Equiv)
        }),
        ("s (*) (t (*) u) ~ (s (*) t) (*) u", |r| {
            let (g, s, t, u, ..) = sample(r);
            (times(&g, s.clone(), times(&g, t.clone(), u.clone())), times(&g, times(&g, s, t), u), g, Claim::Equiv)
        }),
        ("s (*) (t (+) u) ~ s (*) t (+) s (*) u", |r| {
            let (g, s, t, u, ..) = sample(r);
            let l = times(&g, s.clone(), plus(&g, t.clone(), u.clone()));
            (l, plus(&g, times(&g, s.clone(), t), times(&g, s, u)), g, Claim::Equiv)
        }),
        ("lift(0) (+) s ~ s", |r| {
            let (g, s, ..) = sample(r);
            (plus(&g, lift(&g, term::num(0u32)), s.clone()), s, g, Claim::Equiv)
        }),
        ("lift(1) (*) s ~ s", |r| {
            let (g, s, ..) = sample(r);
            (times(&g, lift(&g, term::num(1u32)), s.clone()), s, g, Claim::Equiv)
        }),
        ("lift(n + m) ~ lift(n) (+) lift(m)", |r| {
            let (g, _, _, _, n, m) = sample(r);
            (lift(&g, plus(&nat(), n.clone(), m.clone())), plus(&g, lift(&g, n), lift(&g, m)), g, Claim::Equiv)
        }),
        ("lift(n m) ~ lift(n) (*) lift(m)", |r| {
            let (g, _, _, _, n, m) = sample(r);
            (lift(&g, times(&nat(), n.clone(), m.clone())), times(&g, lift(&g, n), lift(&g, m)), g, Claim::Equiv)
        }),
        ("flatten(lift(n)) ~ n", |r| {
            let (g, _, _, _, n, _) = sample(r);
            (flatten(&g, lift(&g, n.clone())), n, nat(), Claim::Equiv)
        }),
        ("s (+) t >= s", |r| {
            let (g, s, t, ..) = sample(r);
            (plus(&g, s.clone(), t), s, g, Claim::Geq)
        }),
        ("s (+) t >= t", |r| {
            let (g, s, t, ..) = sample(r);
            (plus(&g, s, t.clone()), t, g, Claim::Geq)
        }),
        ("s (+) lift(n) > s for n > 0", |r| {
            let (g, s, _, _, n, _) = sample(r);
            let n = plus(&nat(), n, term::num(r.gen_range(1..4u32)));
            (plus(&g, s.clone(), lift(&g, n)), s, g, Claim::Gt)
        }),
        ("lift(n) (+) t > t for n > 0", |r| {
            let (g, _, t, _, n, _) = sample(r);
            let n = plus(&nat(), term::num(r.gen_range(1..4u32)), n);
            (plus(&g, lift(&g, n), t.clone()), t, g, Claim::Gt)
        }),
    ]
}

fn criterion_8() -> Outcome {
    let ids = identities();
    for (k, (name, make)) in ids.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + k as u64);
        for i in 0..100 {
            let (a, b, ty, claim) = make(&mut rng);
            let cfg = OracleConfig { seed: i, closures: 5, args: 3, ..Default::default() };
            let check = |l: &Tm, r: &Tm, v| match ground_compare(l, r, &ty, &Metas::default(), v, &cfg) {
                Ok(GroundOutcome::Consistent(_)) => Ok(()),
                Ok(GroundOutcome::Refuted(w)) => Err(format!("{name}: refuted by {}", w.describe())),
                Err(e) => Err(format!("{name}: {e}")),
            };
            match claim {
                Claim::Equiv => {
                    check(&a, &b, Verdict::Weak)?;
                    check(&b, &a, Verdict::Weak)?;
                }
                Claim::Geq => check(&a, &b, Verdict::Weak)?,
                Claim::Gt => check(&a, &b, Verdict::Strict)?,
            }
        }
    }
    Ok(format!("{} identities x 100 instantiations", ids.len()))
}

fn criterion_9() -> Outcome {
    let fold = system("fold.pfs");
    let all = |sys: &System, i: &Interpretation| {
        let syms: Vec<_> = sys.sig.symbols.keys().cloned().collect();
        check_safety(i, &sys.sig, &syms).unwrap()
    };
    let m = all(&fold, &interp(&fold, "fold-round1.interp"));
    ensure(m.values().all(Safety::is_safe), || format!("{m:?}"))?;
    let m = all(&fold, &interp(&fold, "fold-unsafe.interp"));
    let want = Safety::Unknown(vec![(1, "f".into()), (2, "x".into())]);
    ensure(m["foldl"] == want, || format!("foldl: {:?}", m["foldl"]))?;
    ensure(m.iter().all(|(f, s)| &**f == "foldl" || s.is_safe()), || format!("{m:?}"))?;
    let ipc2 = system("ipc2.pfs");
    let m = all(&ipc2, &interp(&ipc2, "ipc2.interp"));
    ensure(m.values().all(Safety::is_safe), || format!("{m:?}"))?;
    Ok(format!("fold safe, unsafe foldl flagged on f and x, all {} IPC2 symbols safe", m.len()))
}

fn criterion_10() -> Outcome {
    use polyterm_pfs::gen::{GenScope, PfsGen};
    let mut n = 0;
    for (pfs, file, seed) in [("fold.pfs", "fold-round1.interp", 10), ("ipc2.pfs", "ipc2.interp", 11)] {
        let sys = system(pfs);
        let i = interp(&sys, file);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut here = 0;
        for _ in 0..20_000 {
            if here == 250 {
                break;
            }
            let mut g = PfsGen::new(&sys.sig, &mut rng);
            let target = g.ty(&polyterm_core::Kind::Star, 1, &mut GenScope::default());
            let Some(s) = g.term(&target, 12, &mut GenScope::default()) else { continue };
            let mut fv = Vec::new();
            term::free_vars(&s, &mut fv);
            let Some((x, xty)) = fv.first().cloned() else { continue };
            let Some(t) = g.term(&xty, 8, &mut GenScope::default()) else { continue };
            let sub = |a: &Tm, b: &Tm| term::subst_free(a, &|m| (m == &*x).then(|| b.clone()));
            let l = sub(&i.interpret_term(&s).unwrap(), &i.interpret_term(&t).unwrap());
            let r = i.interpret_term(&sub(&s, &t)).unwrap();
            ensure(term::canonicalize(&l) == term::canonicalize(&r), || format!("{pfs}: {s} with {x} := {t}"))?;
            here += 1;
        }
        n += here;
    }
    ensure(n == 500, || format!("only {n} samples"))?;
    Ok(format!("{n} substitutions commute"))
}

#[test]
fn acceptance() {
    let r = runs();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "fold round 1 orientation", criterion_1(&r)),
        (2, "fold end-to-end", criterion_2(&r)),
        (3, "IPC2 orientation", criterion_3(&r)),
        (4, "normalization golden", criterion_4()),
        (5, "unique normal forms", criterion_5()),
        (6, "finals of type nat", criterion_6()),
        (7, "oracle/symbolic consistency", criterion_7(&r)),
        (8, "calculation lemmas", criterion_8()),
        (9, "safety checker", criterion_9()),
        (10, "substitution commutation", criterion_10()),
    ];
    let mut failed = Vec::new();
    for (n, name, out) in &results {
        match out {
            Ok(d) => println!("criterion {n:>2} PASS  {name}: {d}"),
            Err(e) => {
                println!("criterion {n:>2} FAIL  {name}: {e}");
                failed.push(*n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
