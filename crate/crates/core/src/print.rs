use std::collections::HashSet;
use std::fmt;

use crate::kind::{Kind, Name};
use crate::term::{self, Arg, Term, Tm};
use crate::ty::{self, Ty, Type};

/// Context of a metavariable: binder names with a flag for type binders.
pub type MetaCtxFn<'a> = &'a dyn Fn(&str) -> Option<Vec<(Name, bool)>>;

#[derive(Clone, Copy, Default)]
pub struct Printer<'a> {
    pub unicode: bool,
    pub meta_ctx: Option<MetaCtxFn<'a>>,
}

#[derive(Default, Clone)]
struct Env {
    tys: Vec<String>,
    tms: Vec<String>,
}

impl Env {
    fn resolve_ty(&self, n: &str) -> Option<usize> {
        self.tys.iter().rev().position(|m| m == n)
    }
    fn resolve_tm(&self, n: &str) -> Option<usize> {
        self.tms.iter().rev().position(|m| m == n)
    }
}

pub fn kind_string(k: &Kind, unicode: bool) -> String {
    match k {
        Kind::Star => "*".into(),
        Kind::Arrow(a, b) => {
            let arr = if unicode { "⇒" } else { "=>" };
            let l = kind_string(a, unicode);
            let l = if a.is_star() { l } else { format!("({l})") };
            format!("{l} {arr} {}", kind_string(b, unicode))
        }
    }
}

pub fn ty_string(t: &Ty) -> String {
    Printer::default().ty(t)
}

pub fn term_string(t: &Tm) -> String {
    Printer::default().term(t)
}

fn tm_mentions_ty(t: &Tm, idx: usize) -> bool {
    match &**t {
        Term::Bound(_) | Term::Sym(_) | Term::Num(_) => false,
        Term::Free(_, ty) => ty::mentions_index(ty, idx),
        Term::Meta(_, args) => args.iter().any(|a| match a {
            Arg::Ty(t) => ty::mentions_index(t, idx),
            Arg::Tm(t) => tm_mentions_ty(t, idx),
        }),
        Term::Lam(_, ty, b) => ty::mentions_index(ty, idx) || tm_mentions_ty(b, idx),
        Term::TyLam(_, _, b) => tm_mentions_ty(b, idx + 1),
        Term::App(f, a) => tm_mentions_ty(f, idx) || tm_mentions_ty(a, idx),
        Term::TyApp(f, ty) => tm_mentions_ty(f, idx) || ty::mentions_index(ty, idx),
    }
}

fn ty_names(t: &Ty, out: &mut HashSet<String>) {
    match &**t {
        Type::Bound(_) => {}
        Type::Free(n, _) | Type::Const(n) => {
            out.insert(n.to_string());
        }
        Type::Meta(n, args) => {
            out.insert(n.to_string());
            args.iter().for_each(|a| ty_names(a, out));
        }
        Type::App(a, b) | Type::Arrow(a, b) => {
            ty_names(a, out);
            ty_names(b, out);
        }
        Type::Lam(_, _, b) | Type::Forall(_, _, b) => ty_names(b, out),
    }
}

fn tm_names(t: &Tm, out: &mut HashSet<String>) {
    match &**t {
        Term::Bound(_) | Term::Num(_) => {}
        Term::Free(n, ty) => {
            out.insert(n.to_string());
            ty_names(ty, out);
        }
        Term::Sym(n) => {
            out.insert(n.to_string());
        }
        Term::Meta(n, args) => {
            out.insert(n.to_string());
            for a in args {
                match a {
                    Arg::Ty(t) => ty_names(t, out),
                    Arg::Tm(t) => tm_names(t, out),
                }
            }
        }
        Term::Lam(_, ty, b) => {
            ty_names(ty, out);
            tm_names(b, out)
        }
        Term::TyLam(_, _, b) => tm_names(b, out),
        Term::App(a, b) => {
            tm_names(a, out);
            tm_names(b, out)
        }
        Term::TyApp(a, ty) => {
            tm_names(a, out);
            ty_names(ty, out)
        }
    }
}

fn paren(s: String, inner: u8, outer: u8) -> String {
    if inner < outer {
        format!("({s})")
    } else {
        s
    }
}

fn fresh(base: &str, scope: &[String], avoid: &HashSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|c| !avoid.contains(c) && !scope.contains(c))
        .expect("infinite supply")
}

impl<'a> Printer<'a> {
    pub fn unicode() -> Printer<'a> {
        Printer { unicode: true, meta_ctx: None }
    }

    pub fn with_meta_ctx(mut self, f: MetaCtxFn<'a>) -> Printer<'a> {
        self.meta_ctx = Some(f);
        self
    }

    pub fn ty(&self, t: &Ty) -> String {
        let mut avoid = HashSet::new();
        ty_names(t, &mut avoid);
        self.ty_in(t, &mut Env::default(), &avoid, 0)
    }

    /// Prints a type under the given type binder names, outermost first.
    pub fn ty_under(&self, t: &Ty, names: &[String]) -> String {
        let mut avoid = HashSet::new();
        ty_names(t, &mut avoid);
        let mut env = Env { tys: names.to_vec(), tms: Vec::new() };
        self.ty_in(t, &mut env, &avoid, 0)
    }

    pub fn term(&self, t: &Tm) -> String {
        let mut avoid = HashSet::new();
        tm_names(t, &mut avoid);
        self.tm_in(t, &mut Env::default(), &avoid, 0)
    }

    pub fn kind(&self, k: &Kind) -> String {
        kind_string(k, self.unicode)
    }

    fn binder_name(&self, hint: &str, scope: &[String], avoid: &HashSet<String>, used: impl Fn(usize) -> bool, dflt: &str) -> String {
        let cand = if hint.is_empty() { dflt.to_string() } else { hint.to_string() };
        let captured = match scope.iter().rev().position(|m| *m == cand) {
            Some(k) => used(k + 1),
            None => false,
        };
        if captured || avoid.contains(&cand) {
            fresh(&cand, scope, avoid)
        } else {
            cand
        }
    }

    fn ty_in(&self, t: &Ty, env: &mut Env, avoid: &HashSet<String>, prec: u8) -> String {
        let u = self.unicode;
        match &**t {
            Type::Bound(i) => match env.tys.len().checked_sub(i + 1) {
                Some(p) => env.tys[p].clone(),
                None => format!("#{i}"),
            },
            Type::Free(n, _) | Type::Const(n) => n.to_string(),
            Type::Meta(n, args) => self.meta_ty(n, args, env, avoid),
            Type::App(f, a) => {
                let s = format!("{} {}", self.ty_in(f, env, avoid, 2), self.ty_in(a, env, avoid, 3));
                paren(s, 2, prec)
            }
            Type::Arrow(a, b) => {
                let arr = if u { "→" } else { "->" };
                let s = format!("{} {arr} {}", self.ty_in(a, env, avoid, 2), self.ty_in(b, env, avoid, 1));
                paren(s, 1, prec)
            }
            Type::Lam(h, k, b) | Type::Forall(h, k, b) => {
                let n = self.binder_name(h.as_str(), &env.tys, avoid, |k| ty::mentions_index(b, k), "a");
                let sym = match (&**t, u) {
                    (Type::Lam(..), false) => "\\",
                    (Type::Lam(..), true) => "λ",
                    (_, false) => "!",
                    (_, true) => "∀",
                };
                let ks = if k.is_star() { String::new() } else { format!(":{}", self.kind(k)) };
                env.tys.push(n.clone());
                let body = self.ty_in(b, env, avoid, 0);
                env.tys.pop();
                paren(format!("{sym}{n}{ks}. {body}"), 0, prec)
            }
        }
    }

    fn meta_ty(&self, n: &Name, args: &[Ty], env: &mut Env, avoid: &HashSet<String>) -> String {
        if args.is_empty() {
            return n.to_string();
        }
        match self.meta_ctx.and_then(|f| f(n)) {
            Some(ctx) if ctx.len() == args.len() => {
                let mut over = Vec::new();
                for ((cn, _), a) in ctx.iter().zip(args) {
                    let dflt = env.resolve_ty(cn).map(ty::bound);
                    if dflt.as_ref() != Some(a) {
                        over.push(format!("{cn}:={}", self.ty_in(a, env, avoid, 0)));
                    }
                }
                if over.is_empty() {
                    n.to_string()
                } else {
                    format!("{n}[{}]", over.join(", "))
                }
            }
            _ => {
                let parts: Vec<String> = args.iter().map(|a| self.ty_in(a, env, avoid, 0)).collect();
                format!("{n}{{{}}}", parts.join(", "))
            }
        }
    }

    fn meta_tm(&self, n: &Name, args: &[Arg], env: &mut Env, avoid: &HashSet<String>) -> String {
        if args.is_empty() {
            return n.to_string();
        }
        match self.meta_ctx.and_then(|f| f(n)) {
            Some(ctx) if ctx.len() == args.len() => {
                let mut over = Vec::new();
                for ((cn, is_ty), a) in ctx.iter().zip(args) {
                    let same = match (a, is_ty) {
                        (Arg::Ty(t), true) => env.resolve_ty(cn).map(ty::bound).as_ref() == Some(t),
                        (Arg::Tm(t), false) => env.resolve_tm(cn).map(term::bound).as_ref() == Some(t),
                        _ => false,
                    };
                    if !same {
                        let s = match a {
                            Arg::Ty(t) => self.ty_in(t, env, avoid, 0),
                            Arg::Tm(t) => self.tm_in(t, env, avoid, 0),
                        };
                        over.push(format!("{cn}:={s}"));
                    }
                }
                if over.is_empty() {
                    n.to_string()
                } else {
                    format!("{n}[{}]", over.join(", "))
                }
            }
            _ => {
                let parts: Vec<String> = args
                    .iter()
                    .map(|a| match a {
                        Arg::Ty(t) => format!("[{}]", self.ty_in(t, env, avoid, 0)),
                        Arg::Tm(t) => self.tm_in(t, env, avoid, 0),
                    })
                    .collect();
                format!("{n}{{{}}}", parts.join(", "))
            }
        }
    }

    fn arg_tail(&self, args: &[Arg], env: &mut Env, avoid: &HashSet<String>) -> String {
        let mut s = String::new();
        for a in args {
            match a {
                Arg::Ty(t) => {
                    s.push_str(" [");
                    s.push_str(&self.ty_in(t, env, avoid, 0));
                    s.push(']');
                }
                Arg::Tm(t) => {
                    s.push(' ');
                    s.push_str(&self.tm_in(t, env, avoid, 4));
                }
            }
        }
        s
    }

    fn tm_in(&self, t: &Tm, env: &mut Env, avoid: &HashSet<String>, prec: u8) -> String {
        let u = self.unicode;
        match &**t {
            Term::Bound(i) => match env.tms.len().checked_sub(i + 1) {
                Some(p) => env.tms[p].clone(),
                None => format!("#{i}"),
            },
            Term::Free(n, _) | Term::Sym(n) => n.to_string(),
            Term::Num(n) => n.to_string(),
            Term::Meta(n, args) => self.meta_tm(n, args, env, avoid),
            Term::Lam(h, bty, b) => {
                let n = self.binder_name(h.as_str(), &env.tms, avoid, |k| term::mentions_tm_index(b, k), "x");
                let ts = self.ty_in(bty, env, avoid, 0);
                env.tms.push(n.clone());
                let body = self.tm_in(b, env, avoid, 0);
                env.tms.pop();
                let l = if u { "λ" } else { "\\" };
                paren(format!("{l}{n}:{ts}. {body}"), 0, prec)
            }
            Term::TyLam(h, k, b) => {
                let n = self.binder_name(h.as_str(), &env.tys, avoid, |k| tm_mentions_ty(b, k), "a");
                let ks = if k.is_star() { String::new() } else { format!(":{}", self.kind(k)) };
                env.tys.push(n.clone());
                let body = self.tm_in(b, env, avoid, 0);
                env.tys.pop();
                let l = if u { "Λ" } else { "/\\" };
                paren(format!("{l}{n}{ks}. {body}"), 0, prec)
            }
            Term::App(..) | Term::TyApp(..) => {
                let (head, args) = term::spine(t);
                if let Term::Sym(s) = &*head {
                    let infix = match &**s {
                        "plus" => Some((if u { "⊕" } else { "(+)" }, 1u8)),
                        "times" => Some((if u { "⊗" } else { "(*)" }, 2u8)),
                        _ => None,
                    };
                    if let (Some((op, lvl)), [Arg::Ty(_), Arg::Tm(a), Arg::Tm(b), rest @ ..]) = (infix, &args[..]) {
                        let s = format!(
                            "{} {op} {}",
                            self.tm_in(a, env, avoid, lvl),
                            self.tm_in(b, env, avoid, lvl + 1)
                        );
                        if rest.is_empty() {
                            return paren(s, lvl, prec);
                        }
                        let s = format!("({s}){}", self.arg_tail(rest, env, avoid));
                        return paren(s, 3, prec);
                    }
                    let nty = args.iter().take_while(|a| matches!(a, Arg::Ty(_))).count();
                    let ntm = args[nty..].iter().take_while(|a| matches!(a, Arg::Tm(_))).count();
                    let mut s = s.to_string();
                    if nty > 0 {
                        let tys: Vec<String> = args[..nty]
                            .iter()
                            .map(|a| match a {
                                Arg::Ty(t) => self.ty_in(t, env, avoid, 0),
                                Arg::Tm(_) => unreachable!(),
                            })
                            .collect();
                        s.push_str(&format!("[{}]", tys.join(", ")));
                    }
                    if ntm > 0 {
                        let tms: Vec<String> = args[nty..nty + ntm]
                            .iter()
                            .map(|a| match a {
                                Arg::Tm(t) => self.tm_in(t, env, avoid, 0),
                                Arg::Ty(_) => unreachable!(),
                            })
                            .collect();
                        s.push_str(&format!("({})", tms.join(", ")));
                    }
                    let rest = &args[nty + ntm..];
                    if rest.is_empty() {
                        return s;
                    }
                    let s = format!("{s}{}", self.arg_tail(rest, env, avoid));
                    return paren(s, 3, prec);
                }
                let s = format!("{}{}", self.tm_in(&head, env, avoid, 3), self.arg_tail(&args, env, avoid));
                paren(s, 3, prec)
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Printer::default().ty(&std::sync::Arc::new(self.clone())))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Printer::default().term(&std::sync::Arc::new(self.clone())))
    }
}
