use polyterm_core::term::{self, Tm};
use polyterm_core::ty::{self, Ty, Type};
use polyterm_core::{kind_of, Kind, Metas, Name, Signature};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::rename::rename_ty;
use crate::validate::symbol_arity;

/// Binders in scope during generation.
#[derive(Clone, Debug, Default)]
pub struct GenScope {
    pub kinds: Vec<Kind>,
    /// Binder type and type depth at its binding site.
    pub vars: Vec<(Ty, usize)>,
}

impl GenScope {
    fn var_type(&self, i: usize) -> Ty {
        let (t, d) = &self.vars[self.vars.len() - 1 - i];
        ty::shift(t, (self.kinds.len() - d) as isize, 0)
    }
}

/// Random well-typed terms obeying the head restriction. Free variables
/// are drawn from, and added to, `frees`.
pub struct PfsGen<'a, R: Rng> {
    pub sig: &'a Signature,
    pub rng: &'a mut R,
    pub frees: Vec<(Name, Ty)>,
    pub type_depth: usize,
}

impl<'a, R: Rng> PfsGen<'a, R> {
    pub fn new(sig: &'a Signature, rng: &'a mut R) -> PfsGen<'a, R> {
        PfsGen { sig, rng, frees: Vec::new(), type_depth: 2 }
    }

    fn kind(&self, t: &Ty, sc: &GenScope) -> Option<Kind> {
        kind_of(t, &sc.kinds, self.sig, &Metas::default()).ok()
    }

    /// A random constructor of kind `k`.
    pub fn ty(&mut self, k: &Kind, depth: usize, sc: &mut GenScope) -> Ty {
        ty::normalize(&self.ty_rec(k, depth, sc))
    }

    fn ty_rec(&mut self, k: &Kind, depth: usize, sc: &mut GenScope) -> Ty {
        let mut atoms: Vec<Ty> = Vec::new();
        for (i, bk) in sc.kinds.iter().rev().enumerate() {
            if bk == k {
                atoms.push(ty::bound(i));
            }
        }
        let mut heads = Vec::new();
        for (n, ck) in &self.sig.consts {
            if ck == k {
                atoms.push(ty::constant(n));
            } else {
                let mut args = Vec::new();
                let mut cur = ck.clone();
                while let Kind::Arrow(a, b) = cur.clone() {
                    args.push((*a).clone());
                    cur = (*b).clone();
                    if cur == *k {
                        heads.push((n.clone(), args.clone()));
                    }
                }
            }
        }
        if let Kind::Arrow(a, b) = k {
            if atoms.is_empty() || depth > 0 && self.rng.gen_bool(0.5) {
                sc.kinds.push((**a).clone());
                let body = self.ty_rec(b, depth.saturating_sub(1), sc);
                sc.kinds.pop();
                return ty::lam("a", (**a).clone(), body);
            }
        }
        if depth == 0 || self.rng.gen_bool(0.4) {
            if let Some(t) = atoms.choose(self.rng) {
                return t.clone();
            }
        }
        let choice = self.rng.gen_range(0..4);
        if k.is_star() && choice == 0 {
            let a = self.ty_rec(k, depth - 1, sc);
            let b = self.ty_rec(k, depth - 1, sc);
            return ty::arrow(a, b);
        }
        if k.is_star() && choice == 1 {
            sc.kinds.push(Kind::Star);
            let b = self.ty_rec(k, depth - 1, sc);
            sc.kinds.pop();
            return ty::forall("a", Kind::Star, b);
        }
        if let Some((n, args)) = heads.choose(self.rng).cloned() {
            let mut t = ty::constant(&n);
            for a in args {
                let x = self.ty_rec(&a, depth - 1, sc);
                t = ty::app(t, x);
            }
            return t;
        }
        atoms.choose(self.rng).cloned().unwrap_or_else(|| {
            let x = ty::constant(self.sig.consts.keys().next().map(|n| &**n).unwrap_or("?"));
            x
        })
    }

    fn free_var(&mut self, target: &Ty) -> Option<Tm> {
        if ty::has_loose_from(target, 0) {
            return None;
        }
        let same: Vec<Name> = self.frees.iter().filter(|(_, t)| t == target).map(|(n, _)| n.clone()).collect();
        if let Some(n) = same.choose(self.rng) {
            if self.rng.gen_bool(0.6) {
                return Some(term::free(n, target.clone()));
            }
        }
        let n: Name = format!("x{}", self.frees.len()).as_str().into();
        self.frees.push((n.clone(), target.clone()));
        Some(term::free(&n, target.clone()))
    }

    fn leaf(&mut self, target: &Ty, sc: &GenScope) -> Option<Tm> {
        let bound: Vec<usize> = (0..sc.vars.len()).filter(|&i| sc.var_type(i) == *target).collect();
        if let Some(i) = bound.choose(self.rng) {
            if self.rng.gen_bool(0.7) {
                return Some(term::bound(*i));
            }
        }
        self.free_var(target).or_else(|| bound.first().map(|i| term::bound(*i)))
    }

    /// A term of type `target` with roughly `budget` nodes.
    pub fn term(&mut self, target: &Ty, budget: usize, sc: &mut GenScope) -> Option<Tm> {
        for _ in 0..8 {
            let r = match self.rng.gen_range(0..10) {
                0 | 1 => self.leaf(target, sc),
                2 | 3 if budget > 1 => self.abstraction(target, budget, sc),
                _ => self.symbol_app(target, budget, sc),
            };
            if r.is_some() {
                return r;
            }
        }
        self.leaf(target, sc)
    }

    fn abstraction(&mut self, target: &Ty, budget: usize, sc: &mut GenScope) -> Option<Tm> {
        match &**target {
            Type::Arrow(d, c) => {
                sc.vars.push((d.clone(), sc.kinds.len()));
                let body = self.term(c, budget - 1, sc);
                sc.vars.pop();
                Some(term::lam("x", d.clone(), body?))
            }
            Type::Forall(_, k, b) => {
                sc.kinds.push(k.clone());
                let body = self.term(b, budget - 1, sc);
                sc.kinds.pop();
                Some(term::tylam("a", k.clone(), body?))
            }
            _ => None,
        }
    }

    fn symbol_app(&mut self, target: &Ty, budget: usize, sc: &mut GenScope) -> Option<Tm> {
        let syms: Vec<(Name, Ty)> = self.sig.symbols.iter().map(|(n, t)| (n.clone(), t.clone())).collect();
        let (name, sty) = syms.choose(self.rng)?.clone();
        let (n, k) = symbol_arity(&sty);
        let mut pkinds = Vec::new();
        let mut body = sty.clone();
        for _ in 0..n {
            let Type::Forall(_, pk, b) = &*body.clone() else { unreachable!() };
            pkinds.push(pk.clone());
            body = b.clone();
        }
        let m = if budget <= 1 { k } else { k - self.rng.gen_range(0..=k.min(1)) };
        if budget <= 1 && k > 0 {
            return None;
        }
        let mut res = body.clone();
        for _ in 0..m {
            let Type::Arrow(_, b) = &*res.clone() else { unreachable!() };
            res = b.clone();
        }
        let mut binds: Vec<Option<Ty>> = vec![None; n];
        if !self.fo_match(&res, target, 0, n, &pkinds, &mut binds, sc) {
            return None;
        }
        let mut inst = sty;
        let mut tyargs = Vec::new();
        for (p, b) in binds.into_iter().enumerate() {
            let a = match b {
                Some(a) => a,
                None => {
                    let d = self.type_depth;
                    self.ty(&pkinds[p], d, sc)
                }
            };
            let Type::Forall(_, _, b) = &*inst.clone() else { unreachable!() };
            inst = ty::instantiate(b, &a);
            tyargs.push(a);
        }
        let mut t = tyargs.into_iter().fold(term::sym(&name), term::tyapp);
        let share = (budget.saturating_sub(1) / m.max(1)).max(1);
        for _ in 0..m {
            let Type::Arrow(a, b) = &*inst.clone() else { return None };
            let x = self.term(a, share, sc)?;
            t = term::app(t, x);
            inst = b.clone();
        }
        (inst == *target).then_some(t)
    }

    /// First-order match of a symbol result type against the target,
    /// binding the symbol's type parameters.
    #[allow(clippy::too_many_arguments)]
    fn fo_match(&self, p: &Ty, s: &Ty, l: usize, n: usize, pk: &[Kind], binds: &mut [Option<Ty>], sc: &GenScope) -> bool {
        match (&**p, &**s) {
            (Type::Bound(j), _) if *j >= l => {
                let idx = n - 1 - (j - l);
                let Some(cand) = rename_ty(s, 0, &|i| i.checked_sub(l)) else { return false };
                match &binds[idx] {
                    Some(b) => *b == cand,
                    None => {
                        if self.kind(&cand, sc).as_ref() != Some(&pk[idx]) {
                            return false;
                        }
                        binds[idx] = Some(cand);
                        true
                    }
                }
            }
            (Type::Bound(i), Type::Bound(j)) => i == j,
            (Type::Const(a), Type::Const(b)) => a == b,
            (Type::App(f, a), Type::App(g, b)) | (Type::Arrow(f, a), Type::Arrow(g, b)) => {
                self.fo_match(f, g, l, n, pk, binds, sc) && self.fo_match(a, b, l, n, pk, binds, sc)
            }
            (Type::Forall(_, k, b), Type::Forall(_, k2, c)) | (Type::Lam(_, k, b), Type::Lam(_, k2, c)) => {
                k == k2 && self.fo_match(b, c, l + 1, n, pk, binds, &GenScope { kinds: [sc.kinds.clone(), vec![k.clone()]].concat(), vars: Vec::new() })
            }
            _ => false,
        }
    }
}
