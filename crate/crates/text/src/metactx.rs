use indexmap::IndexMap;

use crate::raw::{RKind, RTerm, RType, SubstArg};

/// A binder enclosing a metavariable occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtxEntry {
    pub name: String,
    pub is_type: bool,
    pub kind: Option<RKind>,
    pub ty: Option<RType>,
}

type Stack = Vec<CtxEntry>;

/// For each of `names` occurring in `t`, the longest binder prefix shared
/// by all its occurrences. Names in `ty_metas` see only type binders.
pub fn meta_contexts(t: &RTerm, names: &[String], ty_metas: &[String]) -> IndexMap<String, Vec<CtxEntry>> {
    let mut w = Walk { names, ty_metas, out: IndexMap::new(), stack: Vec::new() };
    w.term(t);
    w.out
}

struct Walk<'a> {
    names: &'a [String],
    ty_metas: &'a [String],
    out: IndexMap<String, Stack>,
    stack: Stack,
}

impl Walk<'_> {
    fn hit(&mut self, n: &str) {
        if !self.names.iter().any(|m| m == n) {
            return;
        }
        let here: Stack = if self.ty_metas.iter().any(|m| m == n) {
            self.stack.iter().filter(|e| e.is_type).cloned().collect()
        } else {
            self.stack.clone()
        };
        match self.out.get_mut(n) {
            Some(prev) => {
                let k = prev.iter().zip(&here).take_while(|(a, b)| a == b).count();
                prev.truncate(k);
            }
            None => {
                self.out.insert(n.to_string(), here);
            }
        }
    }

    fn under<F: FnOnce(&mut Self)>(&mut self, e: CtxEntry, f: F) {
        self.stack.push(e);
        f(self);
        self.stack.pop();
    }

    fn subs(&mut self, s: &[SubstArg]) {
        for a in s {
            if let Some(t) = &a.as_term {
                self.term(t);
            } else if let Some(t) = &a.as_type {
                self.ty(t);
            }
        }
    }

    fn ty(&mut self, t: &RType) {
        match t {
            RType::Var(n, _) => {
                if !self.stack.iter().any(|e| e.is_type && e.name == *n) {
                    self.hit(n)
                }
            }
            RType::App(a, b) | RType::Arrow(a, b) => {
                self.ty(a);
                self.ty(b);
            }
            RType::Lam(b, body) | RType::Forall(b, body) => self.under(ty_entry(&b.name, &b.kind), |w| w.ty(body)),
            RType::Subst(inner, s) => {
                self.ty(inner);
                self.subs(s);
            }
            RType::Macro(_, _, args, bs) => match bs.first() {
                Some(b) => self.under(ty_entry(&b.name, &b.kind), |w| args.iter().for_each(|a| w.ty(a))),
                None => args.iter().for_each(|a| self.ty(a)),
            },
        }
    }

    fn term(&mut self, t: &RTerm) {
        match t {
            RTerm::Var(n, _) => {
                if !self.stack.iter().any(|e| !e.is_type && e.name == *n) {
                    self.hit(n)
                }
            }
            RTerm::Num(..) => {}
            RTerm::Lam(b, body) => {
                if let Some(bt) = &b.ty {
                    self.ty(bt);
                }
                let e = CtxEntry { name: b.name.clone(), is_type: false, kind: None, ty: b.ty.clone() };
                self.under(e, |w| w.term(body))
            }
            RTerm::TyLam(b, body) => self.under(ty_entry(&b.name, &b.kind), |w| w.term(body)),
            RTerm::App(a, b) | RTerm::Plus(a, b, _) | RTerm::Times(a, b, _) => {
                self.term(a);
                self.term(b);
            }
            RTerm::TyApp(f, a, _) => {
                self.term(f);
                self.ty(a);
            }
            RTerm::Call(f, args, _) => {
                self.term(f);
                args.iter().for_each(|a| self.term(a));
            }
            RTerm::Subst(inner, s) => {
                self.term(inner);
                self.subs(s);
            }
            RTerm::Macro(_, _, tys, args) => {
                tys.iter().for_each(|a| self.ty(a));
                args.iter().for_each(|a| self.term(a));
            }
        }
    }
}

fn ty_entry(n: &str, k: &Option<RKind>) -> CtxEntry {
    CtxEntry { name: n.to_string(), is_type: true, kind: k.clone(), ty: None }
}
