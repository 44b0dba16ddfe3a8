use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;
use polyterm_core::print::Printer;
use polyterm_core::term::{self, Arg, Term, Tm};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::{Hint, Kind, Metas, Signature};
use polyterm_interp::builtins::{self, FLATTEN, LIFT, PLUS, TIMES};

use crate::error::{Result, Span, TextError};
use crate::raw::{RKind, RTerm, RType, SubstArg, TmBinder, TyBinder};

/// A declared metavariable. `ctx` lists the binders it may depend on,
/// outermost first, flagged `true` for type binders.
#[derive(Clone, Debug)]
pub struct MetaInfo {
    pub is_type: bool,
    pub ctx: Vec<(String, bool)>,
    pub kind: Kind,
    pub ty: Option<Ty>,
}

/// Names visible to the elaborator besides local binders.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub sig: Signature,
    pub free_tms: IndexMap<String, Ty>,
    pub free_tys: IndexMap<String, Kind>,
    pub metas: IndexMap<String, MetaInfo>,
    /// Whether `plus`, `times`, `lift`, `flatten` may omit their type argument.
    pub builtins: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub tys: Vec<(String, Kind)>,
    /// Name, type, and type depth at the binding site.
    pub tms: Vec<(String, Ty, usize)>,
}

impl Scope {
    fn lookup_ty(&self, n: &str) -> Option<(usize, Kind)> {
        self.tys
            .iter()
            .rev()
            .position(|(m, _)| m == n)
            .map(|i| (i, self.tys[self.tys.len() - 1 - i].1.clone()))
    }

    fn lookup_tm(&self, n: &str) -> Option<(usize, Ty)> {
        let i = self.tms.iter().rev().position(|(m, _, _)| m == n)?;
        let (_, t, d) = &self.tms[self.tms.len() - 1 - i];
        Some((i, ty::shift(t, (self.tys.len() - d) as isize, 0)))
    }
}

pub fn elab_kind(k: &RKind) -> Kind {
    match k {
        RKind::Star => Kind::Star,
        RKind::Arrow(a, b) => Kind::arrow(elab_kind(a), elab_kind(b)),
    }
}

fn binder_kind(b: &TyBinder) -> Kind {
    b.kind.as_ref().map(elab_kind).unwrap_or(Kind::Star)
}

/// Splits an encoded product `!p. (s -> t -> p) -> p`.
pub fn split_product(t: &Ty) -> Option<(Ty, Ty)> {
    let Type::Forall(_, Kind::Star, body) = &**t else { return None };
    let Type::Arrow(f, r) = &**body else { return None };
    if **r != Type::Bound(0) {
        return None;
    }
    let Type::Arrow(s, rest) = &**f else { return None };
    let Type::Arrow(u, p) = &**rest else { return None };
    if **p != Type::Bound(0) || ty::mentions_index(s, 0) || ty::mentions_index(u, 0) {
        return None;
    }
    Some((ty::shift(s, -1, 0), ty::shift(u, -1, 0)))
}

/// Splits an encoded existential `!p. (!a:k. s -> p) -> p` into `k` and
/// the body `s` under `a`.
pub fn split_exists(t: &Ty) -> Option<(Kind, Ty)> {
    let Type::Forall(_, Kind::Star, body) = &**t else { return None };
    let Type::Arrow(f, r) = &**body else { return None };
    if **r != Type::Bound(0) {
        return None;
    }
    let Type::Forall(_, k, inner) = &**f else { return None };
    let Type::Arrow(s, p) = &**inner else { return None };
    if **p != Type::Bound(1) || ty::mentions_index(s, 1) {
        return None;
    }
    Some((k.clone(), ty::shift(s, -1, 1)))
}

pub fn product(s: &Ty, t: &Ty) -> Ty {
    let p = ty::bound(0);
    let s = ty::shift(s, 1, 0);
    let t = ty::shift(t, 1, 0);
    ty::forall("p", Kind::Star, ty::arrow(ty::arrows([s, t], p.clone()), p))
}

/// `!p. (!a:k. body -> p) -> p` where `body` sits under `a`.
pub fn exists(h: &str, k: &Kind, body: &Ty) -> Ty {
    let inner = ty::forall(h, k.clone(), ty::arrow(ty::shift(body, 1, 1), ty::bound(1)));
    ty::forall("p", Kind::Star, ty::arrow(inner, ty::bound(0)))
}

pub fn pair(s: &Ty, t: &Ty, a: &Tm, b: &Tm) -> Tm {
    let p = ty::bound(0);
    let xt = ty::arrows([ty::shift(s, 1, 0), ty::shift(t, 1, 0)], p);
    let a = term::shift_tm(&term::shift_ty(a, 1, 0), 1, 0);
    let b = term::shift_tm(&term::shift_ty(b, 1, 0), 1, 0);
    term::tylam("p", Kind::Star, term::lam("x", xt, term::apps(term::bound(0), [a, b])))
}

pub fn proj(i: usize, s: &Ty, t: &Ty, p: &Tm) -> Tm {
    let pick = term::lam("x", s.clone(), term::lam("y", t.clone(), term::bound(if i == 1 { 1 } else { 0 })));
    let target = if i == 1 { s } else { t };
    term::app(term::tyapp(p.clone(), target.clone()), pick)
}

/// `/\p. \x:(!a:k. body -> p). x [w] t`.
pub fn expair(k: &Kind, body: &Ty, w: &Ty, t: &Tm) -> Tm {
    let xt = ty::forall("a", k.clone(), ty::arrow(ty::shift(body, 1, 1), ty::bound(1)));
    let w = ty::shift(w, 1, 0);
    let t = term::shift_tm(&term::shift_ty(t, 1, 0), 1, 0);
    term::tylam("p", Kind::Star, term::lam("x", xt, term::app(term::tyapp(term::bound(0), w), t)))
}

impl Env {
    pub fn new(sig: Signature) -> Env {
        Env { sig, ..Env::default() }
    }

    /// The signature of interpretation terms with builtin inference on.
    pub fn interp() -> Env {
        Env { sig: builtins::signature(), builtins: true, ..Env::default() }
    }

    pub fn core_metas(&self) -> Metas {
        let mut m = Metas::default();
        for (n, info) in &self.metas {
            if info.is_type {
                m.types.insert(n.as_str().into(), info.kind.clone());
            } else if let Some(t) = &info.ty {
                m.terms.insert(n.as_str().into(), t.clone());
            }
        }
        m
    }

    pub fn printer(&self) -> impl Fn(&str) -> Option<Vec<(polyterm_core::Name, bool)>> + '_ {
        move |n: &str| {
            self.metas
                .get(n)
                .map(|m| m.ctx.iter().map(|(c, t)| (c.as_str().into(), *t)).collect())
        }
    }

    fn show(&self, t: &Ty) -> String {
        Printer::default().ty(t)
    }

    pub fn kind_check(&self, t: &Ty, sc: &Scope, span: Span) -> Result<Kind> {
        let kinds: Vec<Kind> = sc.tys.iter().map(|(_, k)| k.clone()).collect();
        polyterm_core::kind_of(t, &kinds, &self.sig, &self.core_metas()).map_err(|e| TextError::Core(span, e))
    }

    pub fn ty(&self, t: &RType, sc: &mut Scope) -> Result<(Ty, Kind)> {
        let (t, k) = self.ty_rec(t, sc)?;
        Ok((ty::normalize(&t), k))
    }

    pub fn ty_star(&self, t: &RType, sc: &mut Scope) -> Result<Ty> {
        let (r, k) = self.ty(t, sc)?;
        if !k.is_star() {
            return Err(TextError::Kind(t.span(), format!("expected a type, found kind {k}")));
        }
        Ok(r)
    }

    fn ty_rec(&self, t: &RType, sc: &mut Scope) -> Result<(Ty, Kind)> {
        match t {
            RType::Var(n, span) => {
                if let Some((i, k)) = sc.lookup_ty(n) {
                    return Ok((ty::bound(i), k));
                }
                if self.metas.get(n).is_some_and(|m| m.is_type) {
                    return self.meta_ty(n, &[], *span, sc);
                }
                if let Some(k) = self.free_tys.get(n) {
                    return Ok((ty::free(n, k.clone()), k.clone()));
                }
                if let Some(k) = self.sig.consts.get(n.as_str()) {
                    return Ok((ty::constant(n), k.clone()));
                }
                Err(TextError::Unknown(*span, n.clone()))
            }
            RType::App(f, a) => {
                let (f2, kf) = self.ty_rec(f, sc)?;
                let (a2, ka) = self.ty_rec(a, sc)?;
                match kf {
                    Kind::Arrow(from, to) if *from == ka => Ok((ty::app(f2, a2), (*to).clone())),
                    Kind::Arrow(from, _) => {
                        Err(TextError::Kind(a.span(), format!("argument has kind {ka}, expected {from}")))
                    }
                    Kind::Star => Err(TextError::Kind(f.span(), "applying a constructor of kind *".into())),
                }
            }
            RType::Arrow(a, b) => {
                let (a2, ka) = self.ty_rec(a, sc)?;
                let (b2, kb) = self.ty_rec(b, sc)?;
                for (k, s) in [(ka, a), (kb, b)] {
                    if !k.is_star() {
                        return Err(TextError::Kind(s.span(), format!("arrow operand has kind {k}")));
                    }
                }
                Ok((ty::arrow(a2, b2), Kind::Star))
            }
            RType::Lam(b, body) | RType::Forall(b, body) => {
                let k = binder_kind(b);
                sc.tys.push((b.name.clone(), k.clone()));
                let r = self.ty_rec(body, sc);
                sc.tys.pop();
                let (body2, kb) = r?;
                let h = Hint::new(&b.name);
                if matches!(t, RType::Lam(..)) {
                    Ok((Arc::new(Type::Lam(h, k.clone(), body2)), Kind::arrow(k, kb)))
                } else {
                    if !kb.is_star() {
                        return Err(TextError::Kind(body.span(), format!("quantifier body has kind {kb}")));
                    }
                    Ok((Arc::new(Type::Forall(h, k, body2)), Kind::Star))
                }
            }
            RType::Subst(inner, subs) => match &**inner {
                RType::Var(n, span) if sc.lookup_ty(n).is_none() && self.metas.get(n).is_some_and(|m| m.is_type) => {
                    self.meta_ty(n, subs, *span, sc)
                }
                _ => Err(TextError::Scope(inner.span(), "explicit substitution applies only to metavariables".into())),
            },
            RType::Macro(m, span, args, bs) => match (m.as_str(), &args[..], &bs[..]) {
                ("prod", [a, b], []) => {
                    let (a2, ka) = self.ty_rec(a, sc)?;
                    let (b2, kb) = self.ty_rec(b, sc)?;
                    if !ka.is_star() || !kb.is_star() {
                        return Err(TextError::Kind(*span, "product components must be types".into()));
                    }
                    Ok((product(&ty::normalize(&a2), &ty::normalize(&b2)), Kind::Star))
                }
                ("ex", [body], [b]) => {
                    let k = binder_kind(b);
                    sc.tys.push((b.name.clone(), k.clone()));
                    let r = self.ty_rec(body, sc);
                    sc.tys.pop();
                    let (body2, kb) = r?;
                    if !kb.is_star() {
                        return Err(TextError::Kind(*span, "existential body must be a type".into()));
                    }
                    Ok((exists(&b.name, &k, &ty::normalize(&body2)), Kind::Star))
                }
                _ => Err(TextError::Parse(*span, format!("unknown type macro #{m}"))),
            },
        }
    }

    fn overrides<'s>(&self, n: &str, subs: &'s [SubstArg], ctx: &[(String, bool)]) -> Result<HashMap<&'s str, &'s SubstArg>> {
        let mut map = HashMap::new();
        for s in subs {
            if !ctx.iter().any(|(c, _)| *c == s.name) {
                return Err(TextError::Scope(s.span, format!("`{}` is not in the context of `{n}`", s.name)));
            }
            map.insert(s.name.as_str(), s);
        }
        Ok(map)
    }

    fn meta_ty(&self, n: &str, subs: &[SubstArg], span: Span, sc: &mut Scope) -> Result<(Ty, Kind)> {
        let info = &self.metas[n];
        let over = self.overrides(n, subs, &info.ctx)?;
        let mut k = info.kind.clone();
        let mut args = Vec::new();
        for (c, _) in &info.ctx {
            let Kind::Arrow(from, to) = k.clone() else {
                return Err(TextError::Kind(span, format!("context of `{n}` does not match its kind")));
            };
            let a = match over.get(c.as_str()) {
                Some(s) => {
                    let rt = s.as_type.as_ref().ok_or_else(|| TextError::Parse(s.span, "expected a type".into()))?;
                    let (a, ka) = self.ty_rec(rt, sc)?;
                    if ka != *from {
                        return Err(TextError::Kind(s.span, format!("substituted constructor has kind {ka}, expected {from}")));
                    }
                    a
                }
                None => match sc.lookup_ty(c) {
                    Some((i, kc)) if kc == *from => ty::bound(i),
                    Some(_) => return Err(TextError::Kind(span, format!("binder `{c}` has the wrong kind for `{n}`"))),
                    None => return Err(TextError::Scope(span, format!("context variable `{c}` of `{n}` is not in scope"))),
                },
            };
            args.push(a);
            k = (*to).clone();
        }
        Ok((ty::meta(n, args), k))
    }

    fn meta_tm(&self, n: &str, subs: &[SubstArg], span: Span, sc: &mut Scope) -> Result<(Tm, Ty)> {
        let info = &self.metas[n];
        let over = self.overrides(n, subs, &info.ctx)?;
        let mut cur = info
            .ty
            .clone()
            .ok_or_else(|| TextError::Scope(span, format!("metavariable `{n}` has no type")))?;
        let mut args = Vec::new();
        for (c, is_ty) in &info.ctx {
            match (is_ty, &*cur.clone()) {
                (true, Type::Forall(_, k, body)) => {
                    let a = match over.get(c.as_str()) {
                        Some(s) => {
                            let rt = s.as_type.as_ref().ok_or_else(|| TextError::Parse(s.span, "expected a type".into()))?;
                            let (a, ka) = self.ty(rt, sc)?;
                            if ka != *k {
                                return Err(TextError::Kind(s.span, format!("substituted constructor has kind {ka}, expected {k}")));
                            }
                            a
                        }
                        None => match sc.lookup_ty(c) {
                            Some((i, _)) => ty::bound(i),
                            None => return Err(TextError::Scope(span, format!("context variable `{c}` of `{n}` is not in scope"))),
                        },
                    };
                    cur = ty::instantiate(body, &a);
                    args.push(Arg::Ty(a));
                }
                (false, Type::Arrow(dom, cod)) => {
                    let a = match over.get(c.as_str()) {
                        Some(s) => {
                            let rt = s.as_term.as_ref().ok_or_else(|| TextError::Parse(s.span, "expected a term".into()))?;
                            self.term(rt, sc, Some(dom))?.0
                        }
                        None => match sc.lookup_tm(c) {
                            Some((i, t)) if t == *dom => term::bound(i),
                            Some((_, t)) => {
                                return Err(TextError::Type(
                                    span,
                                    format!("binder `{c}` has type {}, `{n}` expects {}", self.show(&t), self.show(dom)),
                                ))
                            }
                            None => return Err(TextError::Scope(span, format!("context variable `{c}` of `{n}` is not in scope"))),
                        },
                    };
                    cur = cod.clone();
                    args.push(Arg::Tm(a));
                }
                _ => return Err(TextError::Type(span, format!("context of `{n}` does not match its type"))),
            }
        }
        Ok((term::meta(n, args), cur))
    }

    fn check(&self, got: Ty, exp: Option<&Ty>, span: Span) -> Result<Ty> {
        match exp {
            Some(e) if *e != got => Err(TextError::Type(
                span,
                format!("expected {}, found {}", self.show(e), self.show(&got)),
            )),
            _ => Ok(got),
        }
    }

    fn is_builtin_var(&self, t: &RTerm, sc: &Scope) -> Option<&'static str> {
        let RTerm::Var(n, _) = t else { return None };
        if !self.builtins || sc.lookup_tm(n).is_some() || self.metas.contains_key(n) || self.free_tms.contains_key(n) {
            return None;
        }
        [PLUS, TIMES, LIFT, FLATTEN].into_iter().find(|b| b == n)
    }

    fn arith(&self, times: bool, a: &RTerm, b: Option<&RTerm>, sc: &mut Scope, exp: Option<&Ty>, span: Span) -> Result<(Tm, Ty)> {
        let (a2, sigma) = match (b, exp) {
            (Some(_), Some(e)) => (self.term(a, sc, Some(e))?.0, e.clone()),
            _ => self.term(a, sc, None)?,
        };
        let op = term::tyapp(term::sym(if times { TIMES } else { PLUS }), sigma.clone());
        match b {
            Some(b) => {
                let (b2, _) = self.term(b, sc, Some(&sigma))?;
                Ok((term::apps(op, [a2, b2]), sigma))
            }
            None => {
                let t = ty::arrow(sigma.clone(), sigma);
                let t = self.check(t, exp, span)?;
                Ok((term::app(op, a2), t))
            }
        }
    }

    fn builtin_call(&self, b: &str, args: &[RTerm], sc: &mut Scope, exp: Option<&Ty>, span: Span) -> Result<(Tm, Ty)> {
        match (b, args) {
            (PLUS | TIMES, [a]) => self.arith(b == TIMES, a, None, sc, exp, span),
            (PLUS | TIMES, [a, c]) => self.arith(b == TIMES, a, Some(c), sc, exp, span),
            (LIFT, [n]) => {
                let sigma = exp.cloned().ok_or_else(|| TextError::Infer(span, "the type argument of lift".into()))?;
                let (n2, _) = self.term(n, sc, Some(&builtins::nat()))?;
                Ok((builtins::lift(&sigma, n2), sigma))
            }
            (FLATTEN, [a]) => {
                let (a2, sigma) = self.term(a, sc, None)?;
                let r = self.check(builtins::nat(), exp, span)?;
                Ok((builtins::flatten(&sigma, a2), r))
            }
            _ => Err(TextError::Type(span, format!("wrong number of arguments for {b}"))),
        }
    }

    /// Elaborates a term, checking it against `exp` when given.
    pub fn term(&self, t: &RTerm, sc: &mut Scope, exp: Option<&Ty>) -> Result<(Tm, Ty)> {
        match t {
            RTerm::Var(n, span) => {
                let (tm, ty) = if let Some((i, ty)) = sc.lookup_tm(n) {
                    (term::bound(i), ty)
                } else if self.metas.get(n).is_some_and(|m| !m.is_type) {
                    self.meta_tm(n, &[], *span, sc)?
                } else if let Some(ty) = self.free_tms.get(n) {
                    (term::free(n, ty.clone()), ty.clone())
                } else if let Some(ty) = self.sig.symbol(n) {
                    (term::sym(n), ty.clone())
                } else {
                    return Err(TextError::Unknown(*span, n.clone()));
                };
                Ok((tm, self.check(ty, exp, *span)?))
            }
            RTerm::Num(n, span) => {
                let r = self.check(builtins::nat(), exp, *span)?;
                Ok((Arc::new(Term::Num(n.clone())), r))
            }
            RTerm::Lam(b, body) => self.lam(b, body, sc, exp),
            RTerm::TyLam(b, body) => {
                let k = binder_kind(b);
                let inner = match exp.map(|e| &**e) {
                    Some(Type::Forall(_, ke, inner)) if *ke == k => Some(inner.clone()),
                    Some(_) => {
                        return Err(TextError::Type(b.span, format!("type abstraction checked against {}", self.show(exp.unwrap()))))
                    }
                    None => None,
                };
                sc.tys.push((b.name.clone(), k.clone()));
                let r = self.term(body, sc, inner.as_ref());
                sc.tys.pop();
                let (body2, bt) = r?;
                let h = Hint::new(&b.name);
                Ok((
                    Arc::new(Term::TyLam(h.clone(), k.clone(), body2)),
                    Arc::new(Type::Forall(h, k, bt)),
                ))
            }
            RTerm::App(f, a) => {
                let span = t.span();
                match self.term(f, sc, None) {
                    Ok((f2, fty)) => match &*fty {
                        Type::Arrow(dom, cod) => {
                            let (a2, _) = self.term(a, sc, Some(dom))?;
                            Ok((term::app(f2, a2), self.check(cod.clone(), exp, span)?))
                        }
                        _ => Err(TextError::Type(f.span(), format!("applying a term of type {}", self.show(&fty)))),
                    },
                    Err(TextError::Infer(..)) if exp.is_some() => {
                        let (a2, aty) = self.term(a, sc, None)?;
                        let want = ty::arrow(aty, exp.unwrap().clone());
                        let (f2, _) = self.term(f, sc, Some(&want))?;
                        Ok((term::app(f2, a2), exp.unwrap().clone()))
                    }
                    Err(e) => Err(e),
                }
            }
            RTerm::TyApp(f, targ, span) => {
                let (f2, fty) = self.term(f, sc, None)?;
                let (a2, ka) = self.ty(targ, sc)?;
                match &*fty {
                    Type::Forall(_, k, body) if *k == ka => {
                        let r = ty::instantiate(body, &a2);
                        Ok((term::tyapp(f2, a2), self.check(r, exp, *span)?))
                    }
                    Type::Forall(_, k, _) => Err(TextError::Kind(targ.span(), format!("type argument has kind {ka}, expected {k}"))),
                    _ => Err(TextError::Type(*span, format!("type application of a term of type {}", self.show(&fty)))),
                }
            }
            RTerm::Call(f, args, span) => {
                if let Some(b) = self.is_builtin_var(f, sc) {
                    return self.builtin_call(b, args, sc, exp, *span);
                }
                let mut acc = (**f).clone();
                for a in args {
                    acc = RTerm::App(Box::new(acc), Box::new(a.clone()));
                }
                self.term(&acc, sc, exp)
            }
            RTerm::Subst(inner, subs) => match &**inner {
                RTerm::Var(n, span) if sc.lookup_tm(n).is_none() && self.metas.get(n).is_some_and(|m| !m.is_type) => {
                    let (tm, ty) = self.meta_tm(n, subs, *span, sc)?;
                    Ok((tm, self.check(ty, exp, *span)?))
                }
                _ => Err(TextError::Scope(inner.span(), "explicit substitution applies only to metavariables".into())),
            },
            RTerm::Plus(a, b, span) | RTerm::Times(a, b, span) => {
                if !self.builtins {
                    return Err(TextError::Parse(*span, "arithmetic is only available in interpretation terms".into()));
                }
                self.arith(matches!(t, RTerm::Times(..)), a, Some(b), sc, exp, *span)
            }
            RTerm::Macro(m, span, tys, args) => self.macro_term(m, *span, tys, args, sc, exp),
        }
    }

    fn lam(&self, b: &TmBinder, body: &RTerm, sc: &mut Scope, exp: Option<&Ty>) -> Result<(Tm, Ty)> {
        let (dom, cod) = match exp.map(|e| &**e) {
            Some(Type::Arrow(d, c)) => (Some(d.clone()), Some(c.clone())),
            Some(_) => return Err(TextError::Type(b.span, format!("abstraction checked against {}", self.show(exp.unwrap())))),
            None => (None, None),
        };
        let bty = match (&b.ty, dom) {
            (Some(rt), d) => {
                let t = self.ty_star(rt, sc)?;
                if let Some(d) = d {
                    if d != t {
                        return Err(TextError::Type(b.span, format!("binder has type {}, expected {}", self.show(&t), self.show(&d))));
                    }
                }
                t
            }
            (None, Some(d)) => d,
            (None, None) => return Err(TextError::Infer(b.span, format!("the type of `{}`", b.name))),
        };
        sc.tms.push((b.name.clone(), bty.clone(), sc.tys.len()));
        let r = self.term(body, sc, cod.as_ref());
        sc.tms.pop();
        let (body2, bt) = r?;
        Ok((term::lam(&b.name, bty.clone(), body2), ty::arrow(bty, bt)))
    }

    fn macro_term(&self, m: &str, span: Span, tys: &[RType], args: &[RTerm], sc: &mut Scope, exp: Option<&Ty>) -> Result<(Tm, Ty)> {
        match (m, tys, args) {
            ("pair", [], [a, b]) => {
                let comps = exp.and_then(split_product);
                let (a2, s) = self.term(a, sc, comps.as_ref().map(|c| &c.0))?;
                let (b2, t) = self.term(b, sc, comps.as_ref().map(|c| &c.1))?;
                let r = self.check(product(&s, &t), exp, span)?;
                Ok((pair(&s, &t, &a2, &b2), r))
            }
            ("pi1" | "pi2", [], [p]) => {
                let (p2, pt) = self.term(p, sc, None)?;
                let (s, t) = split_product(&pt)
                    .ok_or_else(|| TextError::Type(span, format!("projection from {}", self.show(&pt))))?;
                let i = if m == "pi1" { 1 } else { 2 };
                let r = if i == 1 { s.clone() } else { t.clone() };
                let r = self.check(r, exp, span)?;
                Ok((proj(i, &s, &t, &p2), r))
            }
            ("expair", [w], [a]) | ("expair", [w, _], [a]) => {
                let target = match tys.get(1) {
                    Some(rt) => self.ty_star(rt, sc)?,
                    None => exp.cloned().ok_or_else(|| TextError::Infer(span, "the type of an existential pair".into()))?,
                };
                let (k, body) = split_exists(&target)
                    .ok_or_else(|| TextError::Type(span, format!("{} is not an existential", self.show(&target))))?;
                let (w2, kw) = self.ty(w, sc)?;
                if kw != k {
                    return Err(TextError::Kind(w.span(), format!("witness has kind {kw}, expected {k}")));
                }
                let want = ty::instantiate(&body, &w2);
                let (a2, _) = self.term(a, sc, Some(&want))?;
                let r = self.check(target, exp, span)?;
                Ok((expair(&k, &body, &w2, &a2), r))
            }
            _ => Err(TextError::Parse(span, format!("unknown or malformed macro #{m}"))),
        }
    }
}
