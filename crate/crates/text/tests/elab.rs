use polyterm_core::print::Printer;
use polyterm_core::{ty, typecheck, Kind, Metas};
use polyterm_interp::builtins;
use polyterm_interp::normalize::normalize;
use polyterm_text::{kind, raw, Env, TextError};

fn interp_env() -> Env {
    let mut env = Env::interp();
    let nn = ty::arrow(builtins::nat(), builtins::nat());
    env.free_tms.insert("s".into(), nn);
    env.free_tms.insert("t".into(), builtins::nat());
    env
}

#[test]
fn kinds_parse() {
    assert_eq!(kind("*").unwrap(), Kind::Star);
    assert_eq!(kind("(* => *) => *").unwrap().to_string(), "(* => *) => *");
    assert_eq!(kind("* ⇒ * ⇒ *").unwrap().arity(), 2);
}

#[test]
fn types_round_trip() {
    let env = interp_env();
    for src in ["nat -> nat -> nat", "!a. a -> a", "!f:* => *. f nat", "(nat -> nat) -> nat"] {
        let (t, _) = env.parse_type(src).unwrap();
        assert_eq!(Printer::default().ty(&t), src);
        let (t2, _) = env.parse_type(&Printer::default().ty(&t)).unwrap();
        assert_eq!(t, t2);
    }
    let (u, _) = env.parse_type("∀α. α → α").unwrap();
    let (a, _) = env.parse_type("!b. b -> b").unwrap();
    assert_eq!(u, a);
}

#[test]
fn terms_round_trip_and_typecheck() {
    let env = interp_env();
    let nn = env.parse_type("nat -> nat").unwrap().0;
    let srcs = [
        ("\\x:nat. x (+) 1", Some(nn.clone())),
        ("(s (+) lift[nat -> nat](1)) . t", None),
        ("flatten[nat -> nat](s)", None),
        ("/\\a. \\x:a. x", None),
        ("(\\x:nat. x (*) 2) 3", None),
    ];
    for (src, exp) in srcs {
        let (t, ty1) = env.parse_term(src, exp.as_ref()).unwrap();
        let ty2 = typecheck(&t, &env.sig, &Metas::default()).unwrap();
        assert_eq!(ty1, ty2, "{src}");
        let shown = Printer::default().term(&t);
        let (back, _) = env.parse_term(&shown, None).unwrap();
        assert_eq!(back, t, "{src} printed as {shown}");
    }
}

#[test]
fn builtin_inference() {
    let env = interp_env();
    let (t, ty1) = env.parse_term("s (+) lift(1)", None).unwrap();
    assert_eq!(Printer::default().ty(&ty1), "nat -> nat");
    assert_eq!(Printer::default().term(&t), "s (+) lift[nat -> nat](1)");
    let e = env.parse_term("lift(1)", None).unwrap_err();
    assert!(matches!(e, TextError::Infer(..)));
    let (t, _) = env.parse_term("plus(t, 2)", None).unwrap();
    let n = normalize(&t).unwrap();
    assert_eq!(Printer::default().term(&n), "t (+) 2");
}

#[test]
fn example_thirteen_reduces() {
    let env = interp_env();
    let (t, _) = env.parse_term("(s (+) lift[nat -> nat](1)) . t", None).unwrap();
    let n = normalize(&t).unwrap();
    assert_eq!(Printer::default().term(&n), "s t (+) 1");
}

#[test]
fn unicode_input() {
    let env = interp_env();
    let (a, _) = env.parse_term("Λα. λx:α. x", None).unwrap();
    let (b, _) = env.parse_term("/\\a. \\x:a. x", None).unwrap();
    assert_eq!(a, b);
    let (c, _) = env.parse_term("t ⊕ t ⊗ 2", None).unwrap();
    let (d, _) = env.parse_term("t (+) (t (*) 2)", None).unwrap();
    assert_eq!(c, d);
}

#[test]
fn macros_elaborate() {
    let env = interp_env();
    let (p, _) = env.parse_type("#prod(nat, nat -> nat)").unwrap();
    let (t, ty1) = env.parse_term("#pi2(#pair(t, s))", None).unwrap();
    assert_eq!(Printer::default().ty(&ty1), "nat -> nat");
    let n = normalize(&t).unwrap();
    assert_eq!(Printer::default().term(&n), "s");
    let (_, pt) = env.parse_term("#pair(t, s)", None).unwrap();
    assert_eq!(pt, p);
    let (ex, _) = env.parse_type("#ex(a:*. a -> nat)").unwrap();
    let (w, wt) = env.parse_term("#expair[nat](s)", Some(&ex)).unwrap();
    assert_eq!(wt, ex);
    assert_eq!(typecheck(&w, &env.sig, &Metas::default()).unwrap(), ex);
}

#[test]
fn errors_carry_positions() {
    let env = interp_env();
    let e = env.parse_term("\\x:nat.\n  y x", None).unwrap_err();
    match e {
        TextError::Unknown(sp, n) => {
            assert_eq!(n, "y");
            assert_eq!(sp.line, 2);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(env.parse_term("t t", None), Err(TextError::Type(..))));
    assert!(raw::parse_term("(\\x:nat. x").is_err());
    assert!(matches!(env.parse_type("nat nat"), Err(TextError::Kind(..))));
}
