use indexmap::IndexMap;
use polyterm_core::print::{kind_string, Printer};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::{Kind, Signature};
use polyterm_text::elab::elab_kind;
use polyterm_text::lexer::Tok;
use polyterm_text::raw::{Parser, RKind, RTerm, RType};
use polyterm_text::{meta_contexts, Env, MetaInfo, Scope, TextError};

use crate::error::{PfsError, Result};
use crate::schema::{check_rule_wellformed, RuleSchema, System};

/// One logical statement: a line starting in column one and its indented
/// continuation lines.
#[derive(Clone, Debug)]
pub struct Stmt {
    pub line: usize,
    pub text: String,
}

fn is_comment(l: &str) -> bool {
    let t = l.trim_start();
    t.is_empty() || (t.starts_with('#') && t[1..].chars().next().map_or(true, char::is_whitespace))
}

pub fn statements(src: &str) -> Vec<Stmt> {
    let mut out: Vec<Stmt> = Vec::new();
    for (i, l) in src.lines().enumerate() {
        if is_comment(l) {
            continue;
        }
        if l.starts_with(char::is_whitespace) {
            if let Some(last) = out.last_mut() {
                last.text.push('\n');
                last.text.push_str(l);
                continue;
            }
        }
        out.push(Stmt { line: i + 1, text: l.to_string() });
    }
    out
}

impl Stmt {
    pub fn keyword(&self) -> &str {
        self.text.split_whitespace().next().unwrap_or("")
    }

    /// The text after the keyword up to the first `:` and a parser for the
    /// remainder, columns preserved.
    pub fn split_header(&self) -> Result<(String, Parser)> {
        self.split_on(':')
    }

    /// Like [`Stmt::split_header`] with another separator.
    pub fn split_on(&self, sep: char) -> Result<(String, Parser)> {
        let kw = self.keyword().len();
        let colon = self.text.find(sep).ok_or_else(|| self.syntax(&format!("expected `{sep}`")))?;
        let head = self.text[kw..colon].trim().to_string();
        let blank: String = self.text[..=colon].chars().map(|c| if c == '\n' { c } else { ' ' }).collect();
        let rest = format!("{blank}{}", &self.text[colon + 1..]);
        let p = Parser::new(&rest, self.line).map_err(|e| self.text_err(e))?;
        Ok((head, p))
    }

    pub fn rest(&self) -> &str {
        self.text[self.keyword().len()..].trim()
    }

    pub fn syntax(&self, msg: &str) -> PfsError {
        PfsError::Syntax { line: self.line, msg: msg.to_string() }
    }

    pub fn text_err(&self, e: TextError) -> PfsError {
        PfsError::Text { line: e.span().line.max(self.line), err: e }
    }
}

fn names(head: &str, st: &Stmt) -> Result<Vec<String>> {
    let ns: Vec<String> = head.split_whitespace().map(str::to_string).collect();
    if ns.is_empty() {
        return Err(st.syntax("expected a name"));
    }
    Ok(ns)
}

#[derive(Clone, Debug)]
enum Annot {
    Kind(RKind),
    Type(RType),
}

#[derive(Clone, Debug)]
struct MetaDecl {
    name: String,
    annot: Annot,
}

fn categorize(rule: &str, e: TextError) -> PfsError {
    match e {
        TextError::Unknown(..) | TextError::Scope(..) => PfsError::Scope { rule: rule.to_string(), msg: e.to_string() },
        TextError::Lex(..) | TextError::Parse(..) => PfsError::Text { line: e.span().line, err: e },
        _ => PfsError::TypeMismatch { rule: rule.to_string(), msg: e.to_string() },
    }
}

fn elab_rule(sig: &Signature, name: &str, decls: &[MetaDecl], lhs: &RTerm, rhs: &RTerm) -> Result<RuleSchema> {
    let scope_err = |msg: String| PfsError::Scope { rule: name.to_string(), msg };
    let all: Vec<String> = decls.iter().map(|d| d.name.clone()).collect();
    let tys: Vec<String> = decls.iter().filter(|d| matches!(d.annot, Annot::Kind(_))).map(|d| d.name.clone()).collect();
    let ctxs = meta_contexts(lhs, &all, &tys);
    let mut env = Env::new(sig.clone());
    let mut order: Vec<&MetaDecl> = decls.iter().filter(|d| matches!(d.annot, Annot::Kind(_))).collect();
    order.extend(decls.iter().filter(|d| matches!(d.annot, Annot::Type(_))));
    for d in order {
        let ctx = ctxs
            .get(&d.name)
            .ok_or_else(|| scope_err(format!("metavariable `{}` does not occur on the left-hand side", d.name)))?;
        let names: Vec<(String, bool)> = ctx.iter().map(|e| (e.name.clone(), e.is_type)).collect();
        let info = match &d.annot {
            Annot::Kind(k) => {
                let kinds = ctx.iter().map(|e| e.kind.as_ref().map(elab_kind).unwrap_or(Kind::Star));
                MetaInfo { is_type: true, ctx: names, kind: Kind::arrows(kinds, elab_kind(k)), ty: None }
            }
            Annot::Type(t) => {
                let mut sc = Scope::default();
                let mut layers = Vec::new();
                for e in ctx {
                    if e.is_type {
                        let k = e.kind.as_ref().map(elab_kind).unwrap_or(Kind::Star);
                        sc.tys.push((e.name.clone(), k.clone()));
                        layers.push((e.name.clone(), Err(k)));
                    } else {
                        let rt = e.ty.as_ref().ok_or_else(|| {
                            scope_err(format!("binder `{}` in the context of `{}` needs a type", e.name, d.name))
                        })?;
                        let bt = env.ty_star(rt, &mut sc).map_err(|e| categorize(name, e))?;
                        sc.tms.push((e.name.clone(), bt.clone(), sc.tys.len()));
                        layers.push((e.name.clone(), Ok(bt)));
                    }
                }
                let mut flat = env.ty_star(t, &mut sc).map_err(|e| categorize(name, e))?;
                for (h, l) in layers.into_iter().rev() {
                    flat = match l {
                        Ok(bt) => ty::arrow(bt, flat),
                        Err(k) => ty::forall(&h, k, flat),
                    };
                }
                MetaInfo { is_type: false, ctx: names, kind: Kind::Star, ty: Some(flat) }
            }
        };
        env.metas.insert(d.name.clone(), info);
    }
    let (l, lt) = env.term(lhs, &mut Scope::default(), None).map_err(|e| categorize(name, e))?;
    let (r, rt) = env.term(rhs, &mut Scope::default(), None).map_err(|e| categorize(name, e))?;
    let rule = RuleSchema { name: name.to_string(), metas: env.metas, lhs: l, rhs: r, ty: lt.clone() };
    if lt != rt {
        return Err(PfsError::TypeMismatch {
            rule: name.to_string(),
            msg: format!(
                "left-hand side has type {}, right-hand side {}",
                rule.show_type(&lt, false),
                rule.show_type(&rt, false)
            ),
        });
    }
    check_rule_wellformed(&rule, sig)?;
    Ok(rule)
}

/// Loads a system file, stopping at the first error.
pub fn load_system(src: &str) -> Result<System> {
    let (sys, errs) = check_system(src);
    match errs.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(sys),
    }
}

/// Loads a system file and collects every diagnostic. Rules with errors
/// are left out of the returned system.
pub fn check_system(src: &str) -> (System, Vec<PfsError>) {
    let mut sys = System::default();
    let mut errs = Vec::new();
    let mut pending: Vec<MetaDecl> = Vec::new();
    let mut chi_seen = false;
    for st in statements(src) {
        if let Err(e) = statement(&st, &mut sys, &mut pending, &mut chi_seen) {
            errs.push(e);
        }
    }
    if !pending.is_empty() {
        errs.push(PfsError::Syntax { line: 0, msg: "metavariable declarations without a following rule".into() });
    }
    if !chi_seen {
        errs.push(PfsError::Syntax { line: 0, msg: "no chi constant designated".into() });
    }
    (sys, errs)
}

fn statement(st: &Stmt, sys: &mut System, pending: &mut Vec<MetaDecl>, chi: &mut bool) -> Result<()> {
    match st.keyword() {
        "kind" => {
            let (head, mut p) = st.split_header()?;
            let k = p.kind().and_then(|k| p.expect_eof().map(|_| k)).map_err(|e| st.text_err(e))?;
            for n in names(&head, st)? {
                sys.sig.add_const(&n, elab_kind(&k))?;
            }
        }
        "chi" => {
            sys.sig.set_chi(st.rest())?;
            *chi = true;
        }
        "symbol" => {
            let (head, mut p) = st.split_header()?;
            let rt = p.ty().and_then(|t| p.expect_eof().map(|_| t)).map_err(|e| st.text_err(e))?;
            let env = Env::new(sys.sig.clone());
            let t = env.ty_star(&rt, &mut Scope::default()).map_err(|e| st.text_err(e))?;
            for n in names(&head, st)? {
                sys.sig.add_symbol(&n, t.clone())?;
            }
        }
        "meta" => {
            let (head, mut p) = st.split_header()?;
            let save = p.clone();
            let annot = match p.kind().and_then(|k| p.expect_eof().map(|_| k)) {
                Ok(k) => Annot::Kind(k),
                Err(_) => {
                    let mut p = save;
                    Annot::Type(p.ty().and_then(|t| p.expect_eof().map(|_| t)).map_err(|e| st.text_err(e))?)
                }
            };
            for n in names(&head, st)? {
                pending.push(MetaDecl { name: n, annot: annot.clone() });
            }
        }
        "rule" => {
            let decls = std::mem::take(pending);
            let (name, mut p) = st.split_header()?;
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(st.syntax("expected a rule name"));
            }
            if sys.rule(&name).is_some() {
                return Err(st.syntax(&format!("rule `{name}` is declared twice")));
            }
            let lhs = p.term().map_err(|e| st.text_err(e))?;
            p.skip(&Tok::FatArrow).map_err(|e| st.text_err(e))?;
            let rhs = p.term().and_then(|t| p.expect_eof().map(|_| t)).map_err(|e| st.text_err(e))?;
            let r = elab_rule(&sys.sig, &name, &decls, &lhs, &rhs)?;
            sys.rules.push(r);
        }
        other => return Err(st.syntax(&format!("unknown statement `{other}`"))),
    }
    Ok(())
}

/// Strips a flattened metavariable declaration back to the annotation
/// written in the file.
fn declared(info: &MetaInfo) -> (Option<Kind>, Option<Ty>, Vec<String>) {
    if info.is_type {
        let mut k = info.kind.clone();
        for _ in &info.ctx {
            if let Kind::Arrow(_, b) = k.clone() {
                k = (*b).clone();
            }
        }
        return (Some(k), None, Vec::new());
    }
    let mut cur = info.ty.clone().expect("term metavariable has a type");
    let mut names = Vec::new();
    for (n, is_ty) in &info.ctx {
        cur = match (&*cur.clone(), is_ty) {
            (Type::Forall(_, _, b), true) => {
                names.push(n.clone());
                b.clone()
            }
            (Type::Arrow(_, b), false) => b.clone(),
            _ => break,
        };
    }
    (None, Some(cur), names)
}

/// Prints a system in the file format accepted by `load_system`.
pub fn print_system(sys: &System, unicode: bool) -> String {
    let mut out = String::new();
    let plain = Printer { unicode, meta_ctx: None };
    for (n, k) in &sys.sig.consts {
        out.push_str(&format!("kind {n} : {}\n", kind_string(k, unicode)));
    }
    if let Some(c) = &sys.sig.chi {
        out.push_str(&format!("chi {c}\n"));
    }
    for (n, t) in &sys.sig.symbols {
        out.push_str(&format!("symbol {n} : {}\n", plain.ty(t)));
    }
    for r in &sys.rules {
        out.push('\n');
        let f = |n: &str| r.meta_ctx(n);
        let p = Printer { unicode, meta_ctx: Some(&f) };
        let mut groups: IndexMap<String, Vec<&str>> = IndexMap::new();
        for (n, info) in &r.metas {
            let (k, t, names) = declared(info);
            let annot = match (k, t) {
                (Some(k), _) => kind_string(&k, unicode),
                (_, Some(t)) => p.ty_under(&t, &names),
                _ => unreachable!(),
            };
            groups.entry(annot).or_default().push(n);
        }
        for (annot, ns) in groups {
            out.push_str(&format!("meta {} : {annot}\n", ns.join(" ")));
        }
        out.push_str(&format!("rule {}: {}\n", r.name, r.display(unicode)));
    }
    out
}
