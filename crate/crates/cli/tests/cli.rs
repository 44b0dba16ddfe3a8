use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(f: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus")).join(f)
}

fn polyterm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyterm")).args(args).env_remove("POLYTERM_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(f: &str) -> String {
    corpus(f).to_string_lossy().into_owned()
}

#[test]
fn check_accepts_the_corpus() {
    let o = polyterm(&["check", &path("fold.pfs"), "--interp", &path("fold-round1.interp")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 type constants, 5 symbols, 4 rules"));
    let o = polyterm(&["check", &path("ipc2.pfs")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("28 rules"));
    assert_eq!(out.lines().filter(|l| l.contains(" => ")).count(), 28);
}

#[test]
fn check_reports_scope_errors() {
    let dir = std::env::temp_dir().join(format!("polyterm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("bad.pfs");
    std::fs::write(&f, "kind o : *\nsymbol f : o -> o\nmeta X Y : o\nrule bad: f(X) => Y\n").unwrap();
    let o = polyterm(&["check", &f.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("scope"), "{}", stdout(&o));
}

#[test]
fn normalize_examples() {
    let o = polyterm(&["normalize", "-f", "s:nat -> nat", "-f", "t:nat", "--trace", "(s (+) lift[nat->nat](1)) . t"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("~>")).count(), 5);
    assert_eq!(out.lines().last(), Some("s t (+) 1"));
    assert_eq!(stdout(&polyterm(&["normalize", "plus[nat] 2 3"])).trim(), "5");
    let o = polyterm(&["normalize", "--trace", "-f", "x:nat", "x (+) 1"]);
    assert_eq!(stdout(&o), "   x (+) 1\nx (+) 1\n");
    let o = polyterm(&["normalize", "--unicode", "-f", "x:nat", "x (+) 1"]);
    assert_eq!(stdout(&o).trim(), "x ⊕ 1");
}

#[test]
fn normalize_rejects_ill_typed_input() {
    let o = polyterm(&["normalize", "-f", "x:nat", "x x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn compare_examples() {
    let o = polyterm(&["compare", "-f", "x:nat -> nat", "x (+) lift[nat -> nat](1)", "x"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("symbolic: Strict"));
    assert!(out.contains("oracle: consistent"));
    let o = polyterm(&["compare", "-f", "x:nat", "x", "x", "--relation", "gt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("oracle: refuted"));
    assert!(stdout(&o).contains("witness"));
    let o = polyterm(&["compare", "-f", "X:nat", "lift[nat](2) (*) X", "X", "--relation", "ge"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("symbolic: Weak"));
    let o = polyterm(&["compare", "-f", "x:nat", "-f", "y:nat -> nat", "x", "y"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn prove_exit_codes() {
    let o = polyterm(&["prove", &path("fold.pfs"), &path("fold-round1.interp"), &path("fold-round2.interp")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("terminating after 2 rounds\n"));
    let o = polyterm(&["prove", &path("ipc2.pfs"), &path("ipc2.interp"), "--oracle-budget", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("stuck, not oriented: eps_let, app_let, tapp_let, pr1_let, pr2_let, case_let, let_let"));
    let o = polyterm(&["prove", &path("fold.pfs"), &path("fold-unsafe.interp")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("foldl"));
}

#[test]
fn transcripts_are_deterministic() {
    let dir = std::env::temp_dir().join(format!("polyterm-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let run = |name: &str, seed: Option<&str>| {
        let j = dir.join(name);
        let mut c = Command::new(env!("CARGO_BIN_EXE_polyterm"));
        c.args(["prove", &path("fold.pfs"), &path("fold-round1.interp"), &path("fold-round2.interp"), "--json"]);
        c.arg(&j);
        match seed {
            Some(s) => c.env("POLYTERM_SEED", s),
            None => c.env_remove("POLYTERM_SEED"),
        };
        let o = c.output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        (stdout(&o), std::fs::read_to_string(j).unwrap())
    };
    let a = run("a.json", Some("7"));
    let b = run("b.json", Some("7"));
    assert_eq!(a, b);
    assert!(a.1.starts_with("# polyterm-transcript v1\n"));
    let body: &str = a.1.split_once('\n').unwrap().1;
    assert!(body.contains("\"terminating\""));
    assert_eq!(run("c.json", None).0, a.0);
}

#[test]
fn hint_suggestions_replay() {
    let o = polyterm(&["hint", &path("ipc2.pfs"), &path("ipc2.interp"), "--rule", "tapp_case"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.starts_with("hint tapp_case: "));
    let shipped = std::fs::read_to_string(corpus("ipc2.interp")).unwrap();
    assert!(shipped.contains(line.trim()));
}
