use polyterm_core::term;
use polyterm_core::ty;
use polyterm_core::Signature;
use polyterm_pfs::syntax::{statements, Stmt};
use polyterm_text::{Env, Scope, TextError};

use crate::error::{ProverError, Result};
use crate::hint::HintScript;
use crate::interpretation::Interpretation;

fn text_err(st: &Stmt, e: TextError) -> ProverError {
    ProverError::Text { line: e.span().line.max(st.line), err: e }
}

fn invalid(st: &Stmt, msg: String) -> ProverError {
    ProverError::Invalid { line: st.line, msg }
}

/// Reads `typemap`, `map` and `hint` statements and checks kinds and
/// types against the system signature.
pub fn load_interpretation(src: &str, name: &str, sig: &Signature) -> Result<Interpretation> {
    let stmts = statements(src);
    let env = Env::interp();
    let mut out = Interpretation { name: name.to_string(), ..Interpretation::default() };
    for st in &stmts {
        match st.keyword() {
            "typemap" | "map" | "hint" => {}
            k => return Err(ProverError::Syntax { line: st.line, msg: format!("unknown statement `{k}`") }),
        }
    }
    for st in stmts.iter().filter(|s| s.keyword() == "typemap") {
        let (head, mut p) = st.split_on('=')?;
        let rt = p.ty().map_err(|e| text_err(st, e))?;
        p.expect_eof().map_err(|e| text_err(st, e))?;
        let (t, k) = env.ty(&rt, &mut Scope::default()).map_err(|e| text_err(st, e))?;
        let want = sig
            .consts
            .get(head.as_str())
            .ok_or_else(|| invalid(st, format!("`{head}` is not a type constant of the system")))?;
        if *want != k {
            return Err(invalid(st, format!("`{head}` has kind {want} but its image has kind {k}")));
        }
        if out.tm.insert(head.as_str().into(), ty::normalize(&t)).is_some() {
            return Err(invalid(st, format!("`{head}` is mapped twice")));
        }
    }
    for st in stmts.iter().filter(|s| s.keyword() == "map") {
        let (head, mut p) = st.split_on('=')?;
        let rt = p.term().map_err(|e| text_err(st, e))?;
        p.expect_eof().map_err(|e| text_err(st, e))?;
        let decl = sig
            .symbol(&head)
            .ok_or_else(|| invalid(st, format!("`{head}` is not a symbol of the system")))?;
        let want = out.interpret_type(decl)?;
        let (j, got) = env.term(&rt, &mut Scope::default(), Some(&want)).map_err(|e| text_err(st, e))?;
        if got != want {
            return Err(invalid(st, format!("interpretation of `{head}` has the wrong type")));
        }
        if !term::is_closed(&j) {
            return Err(invalid(st, format!("interpretation of `{head}` is not closed")));
        }
        if out.j.insert(head.as_str().into(), term::canonicalize(&j)).is_some() {
            return Err(invalid(st, format!("`{head}` is mapped twice")));
        }
    }
    for st in stmts.iter().filter(|s| s.keyword() == "hint") {
        let colon = st.text.find(':').ok_or_else(|| st.syntax("expected `:`"))?;
        let rule = st.text["hint".len()..colon].trim().to_string();
        let script = HintScript::parse(&st.text[colon + 1..]).map_err(|msg| invalid(st, msg))?;
        if out.hints.insert(rule.clone(), script).is_some() {
            return Err(invalid(st, format!("two hints for rule `{rule}`")));
        }
    }
    Ok(out)
}
