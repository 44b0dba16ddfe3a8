use polyterm_core::kind::{Kind, Name};
use polyterm_core::term::{self, Tm};
use polyterm_core::ty::{self, Ty, Type};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::builtins::{self, nat};

/// A kind-`*` type over nat, arrows and quantifiers, with `tyvars` type
/// binders of kind `*` in scope.
pub fn random_type<R: Rng>(rng: &mut R, depth: usize, tyvars: usize) -> Ty {
    random_type_in(rng, depth, &mut vec![Kind::Star; tyvars])
}

/// Like [`random_type`] with binders of the listed kinds, outermost first.
/// Higher-kinded binders occur applied to random arguments.
pub fn random_type_in<R: Rng>(rng: &mut R, depth: usize, kinds: &mut Vec<Kind>) -> Ty {
    if depth == 0 {
        if !kinds.is_empty() && rng.gen_bool(0.3) {
            let i = rng.gen_range(0..kinds.len());
            let mut k = kinds[kinds.len() - 1 - i].clone();
            let mut t = ty::bound(i);
            while let Kind::Arrow(a, b) = k {
                t = ty::app(t, random_con(rng, &a, 0, kinds));
                k = (*b).clone();
            }
            return t;
        }
        return nat();
    }
    match rng.gen_range(0..6) {
        0 | 1 => random_type_in(rng, 0, kinds),
        2 | 3 => {
            let a = random_type_in(rng, depth - 1, kinds);
            ty::arrow(a, random_type_in(rng, depth - 1, kinds))
        }
        4 => {
            kinds.push(Kind::Star);
            let b = random_type_in(rng, depth - 1, kinds);
            kinds.pop();
            ty::forall("a", Kind::Star, b)
        }
        _ => ty::arrow(nat(), random_type_in(rng, depth - 1, kinds)),
    }
}

/// A type constructor of kind `k`, in beta-normal form.
pub fn random_con<R: Rng>(rng: &mut R, k: &Kind, depth: usize, kinds: &mut Vec<Kind>) -> Ty {
    match k {
        Kind::Star => ty::normalize(&random_type_in(rng, depth, kinds)),
        Kind::Arrow(a, b) => {
            kinds.push((**a).clone());
            let body = random_con(rng, b, depth, kinds);
            kinds.pop();
            ty::lam("a", (**a).clone(), body)
        }
    }
}

/// Scope for typed term generation.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub tydepth: usize,
    /// Kinds of the innermost type binders; binders beyond these have kind `*`.
    pub kinds: Vec<Kind>,
    /// Binder type and the type depth at its binding site.
    pub vars: Vec<(Ty, usize)>,
    pub free: Vec<(Name, Ty)>,
}

impl Scope {
    pub fn with_free(free: Vec<(Name, Ty)>) -> Scope {
        Scope { free, ..Scope::default() }
    }

    fn kind_list(&self) -> Vec<Kind> {
        let mut k = vec![Kind::Star; self.tydepth.saturating_sub(self.kinds.len())];
        k.extend(self.kinds.iter().cloned());
        k
    }

    fn push_ty(&mut self, k: Kind) {
        self.tydepth += 1;
        self.kinds.push(k);
    }

    fn pop_ty(&mut self) {
        self.tydepth -= 1;
        self.kinds.pop();
    }

    fn var_type(&self, i: usize) -> Ty {
        let (t, d) = &self.vars[self.vars.len() - 1 - i];
        ty::shift(t, (self.tydepth - d) as isize, 0)
    }

    fn candidates(&self, target: &Ty) -> Vec<Tm> {
        let mut out = Vec::new();
        for i in 0..self.vars.len() {
            if self.var_type(i) == *target {
                out.push(term::bound(i));
            }
        }
        if self.tydepth == 0 {
            for (n, t) in &self.free {
                if t == target {
                    out.push(term::free(n, t.clone()));
                }
            }
        } else {
            for (n, t) in &self.free {
                if ty::shift(t, self.tydepth as isize, 0) == *target {
                    out.push(term::free(n, t.clone()));
                }
            }
        }
        out
    }

    /// Variables whose type ends in the target after term arguments.
    fn heads(&self, target: &Ty) -> Vec<(Tm, Vec<Ty>)> {
        let mut out = Vec::new();
        let mut consider = |head: Tm, mut t: Ty| {
            let mut args = Vec::new();
            while let Type::Arrow(a, b) = &*t.clone() {
                args.push(a.clone());
                t = b.clone();
                if t == *target {
                    out.push((head.clone(), args.clone()));
                }
            }
        };
        for i in 0..self.vars.len() {
            consider(term::bound(i), self.var_type(i));
        }
        for (n, t) in &self.free {
            consider(term::free(n, t.clone()), ty::shift(t, self.tydepth as isize, 0));
        }
        out
    }
}

pub struct TermGen<'r, R: Rng> {
    pub rng: &'r mut R,
    pub type_depth: usize,
    pub max_num: u32,
}

impl<'r, R: Rng> TermGen<'r, R> {
    pub fn new(rng: &'r mut R) -> TermGen<'r, R> {
        TermGen { rng, type_depth: 2, max_num: 3 }
    }

    fn num(&mut self) -> Tm {
        term::num(self.rng.gen_range(0..=self.max_num))
    }

    fn leaf(&mut self, target: &Ty, sc: &Scope) -> Tm {
        let mut c = sc.candidates(target);
        if !c.is_empty() && self.rng.gen_bool(0.6) {
            return c.swap_remove(self.rng.gen_range(0..c.len()));
        }
        if builtins::is_nat(target) {
            return self.num();
        }
        let n = self.num();
        builtins::lift(target, n)
    }

    fn rtype(&mut self, sc: &Scope) -> Ty {
        let d = self.rng.gen_range(0..=self.type_depth);
        random_type_in(self.rng, d, &mut sc.kind_list())
    }

    /// A term of the target type that uses roughly `budget` nodes.
    pub fn term(&mut self, target: &Ty, budget: usize, sc: &mut Scope) -> Tm {
        if budget <= 2 {
            return self.leaf(target, sc);
        }
        let b = budget - 1;
        let choice = self.rng.gen_range(0..11);
        match choice {
            0 | 1 => {
                let l = self.rng.gen_range(1..b);
                let x = self.term(target, l, sc);
                let y = self.term(target, b - l, sc);
                if choice == 0 {
                    builtins::plus(target, x, y)
                } else {
                    builtins::times(target, x, y)
                }
            }
            2 if builtins::is_nat(target) => {
                let s = self.rtype(sc);
                let x = self.term(&s, b - 1, sc);
                builtins::flatten(&s, x)
            }
            2 | 3 => match &**target {
                Type::Arrow(dom, cod) => {
                    sc.vars.push((dom.clone(), sc.tydepth));
                    let body = self.term(cod, b, sc);
                    sc.vars.pop();
                    term::lam("x", dom.clone(), body)
                }
                Type::Forall(_, k, inner) => {
                    sc.push_ty(k.clone());
                    let body = self.term(inner, b, sc);
                    sc.pop_ty();
                    term::tylam("a", k.clone(), body)
                }
                _ => {
                    let x = self.term(&nat(), b - 1, sc);
                    builtins::lift(target, x)
                }
            },
            4 => {
                let s = self.rtype(sc);
                let l = self.rng.gen_range(1..b);
                sc.vars.push((s.clone(), sc.tydepth));
                let body = self.term(target, l, sc);
                sc.vars.pop();
                let arg = self.term(&s, b - l, sc);
                term::app(term::lam("x", s, body), arg)
            }
            5 => {
                let s = self.rtype(sc);
                sc.push_ty(Kind::Star);
                let body = self.term(&ty::shift(target, 1, 0), b, sc);
                sc.pop_ty();
                term::tyapp(term::tylam("a", Kind::Star, body), s)
            }
            6 | 7 => {
                let s = self.rtype(sc);
                let l = self.rng.gen_range(1..b);
                let f = self.term(&ty::arrow(s.clone(), target.clone()), l, sc);
                let a = self.term(&s, b - l, sc);
                term::app(f, a)
            }
            8 => {
                let s = self.rtype(sc);
                let t = ty::forall("a", Kind::Star, ty::shift(target, 1, 0));
                let f = self.term(&t, b, sc);
                term::tyapp(f, s)
            }
            9 => {
                let hs = sc.heads(target);
                match hs.choose(self.rng) {
                    Some((h, args)) => {
                        let per = (b / args.len().max(1)).max(1);
                        let mut t = h.clone();
                        for a in args.clone() {
                            let x = self.term(&a, per, sc);
                            t = term::app(t, x);
                        }
                        t
                    }
                    None => self.leaf(target, sc),
                }
            }
            _ => {
                let x = self.term(&nat(), b - 1, sc);
                builtins::lift(target, x)
            }
        }
    }

    /// A term of a random type.
    pub fn any(&mut self, budget: usize, sc: &mut Scope) -> (Tm, Ty) {
        let t = self.rtype(sc);
        (self.term(&t, budget, sc), t)
    }
}
