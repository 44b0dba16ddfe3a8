use std::cell::Cell;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::Zero;
use polyterm_core::term::{Term, Tm};
use polyterm_core::ty::{self, Ty, Type};

use crate::builtins::{chi, is_nat, FLATTEN, LIFT, PLUS, TIMES};
use crate::error::{InterpError, Result};

type FunV = Rc<dyn Fn(Value) -> Result<Value>>;
type TyFunV = Rc<dyn Fn(Ty) -> Result<Value>>;

/// Semantic values of closed interpretation terms.
#[derive(Clone)]
pub enum Value {
    Nat(BigUint),
    Fun(FunV),
    TyFun(TyFunV),
}

impl std::fmt::Debug for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Fun(_) => write!(f, "<fun>"),
            Value::TyFun(_) => write!(f, "<tyfun>"),
        }
    }
}

/// Argument to a semantic value.
#[derive(Clone, Debug)]
pub enum VArg {
    Ty(Ty),
    Tm(Value),
}

#[derive(Clone)]
pub struct Evaluator {
    fuel: Rc<Cell<u64>>,
    limit: u64,
}

fn stuck(msg: &str) -> InterpError {
    InterpError::Stuck(msg.to_string())
}

fn close_type(t: &Ty, tyenv: &[Ty]) -> Ty {
    let mut r = t.clone();
    if tyenv.is_empty() || !ty::has_loose_from(&r, 0) {
        return ty::normalize(&r);
    }
    for s in tyenv.iter().rev() {
        r = ty::subst_top(&r, s);
    }
    ty::normalize(&r)
}

impl Evaluator {
    pub fn new(limit: u64) -> Evaluator {
        Evaluator { fuel: Rc::new(Cell::new(limit)), limit }
    }

    fn tick(&self) -> Result<()> {
        let f = self.fuel.get();
        if f == 0 {
            return Err(InterpError::FuelExhausted(self.limit));
        }
        self.fuel.set(f - 1);
        Ok(())
    }

    pub fn apply(&self, f: &Value, a: Value) -> Result<Value> {
        self.tick()?;
        match f {
            Value::Fun(g) => g(a),
            _ => Err(stuck("applying a non-function")),
        }
    }

    pub fn tyapply(&self, f: &Value, a: Ty) -> Result<Value> {
        self.tick()?;
        match f {
            Value::TyFun(g) => g(a),
            _ => Err(stuck("type application of a non-abstraction")),
        }
    }

    pub fn apply_all(&self, f: Value, args: &[VArg]) -> Result<Value> {
        args.iter().try_fold(f, |acc, a| match a {
            VArg::Ty(t) => self.tyapply(&acc, t.clone()),
            VArg::Tm(v) => self.apply(&acc, v.clone()),
        })
    }

    /// Evaluates a closed term.
    pub fn eval(&self, t: &Tm) -> Result<Value> {
        self.eval_in(t, &Rc::new(Vec::new()), &Rc::new(Vec::new()))
    }

    pub fn eval_nat(&self, t: &Tm) -> Result<BigUint> {
        match self.eval(t)? {
            Value::Nat(n) => Ok(n),
            _ => Err(InterpError::NotNat),
        }
    }

    fn eval_in(&self, t: &Tm, tyenv: &Rc<Vec<Ty>>, env: &Rc<Vec<Value>>) -> Result<Value> {
        self.tick()?;
        match &**t {
            Term::Bound(i) => env
                .len()
                .checked_sub(i + 1)
                .map(|p| env[p].clone())
                .ok_or_else(|| stuck("unbound variable")),
            Term::Free(..) => Err(stuck("free variable")),
            Term::Meta(..) => Err(stuck("metavariable")),
            Term::Num(n) => Ok(Value::Nat(n.clone())),
            Term::Sym(s) => self.builtin(s),
            Term::Lam(_, _, body) => {
                let me = self.clone();
                let body = body.clone();
                let tyenv = tyenv.clone();
                let env = env.clone();
                Ok(Value::Fun(Rc::new(move |v| {
                    let mut e = (*env).clone();
                    e.push(v);
                    me.eval_in(&body, &tyenv, &Rc::new(e))
                })))
            }
            Term::TyLam(_, _, body) => {
                let me = self.clone();
                let body = body.clone();
                let tyenv = tyenv.clone();
                let env = env.clone();
                Ok(Value::TyFun(Rc::new(move |s| {
                    let mut e = (*tyenv).clone();
                    e.push(s);
                    me.eval_in(&body, &Rc::new(e), &env)
                })))
            }
            Term::App(f, a) => {
                let fv = self.eval_in(f, tyenv, env)?;
                let av = self.eval_in(a, tyenv, env)?;
                self.apply(&fv, av)
            }
            Term::TyApp(f, s) => {
                let fv = self.eval_in(f, tyenv, env)?;
                self.tyapply(&fv, close_type(s, tyenv))
            }
        }
    }

    fn builtin(&self, s: &str) -> Result<Value> {
        let me = self.clone();
        let v = match s {
            PLUS | TIMES => {
                let times = s == TIMES;
                Value::TyFun(Rc::new(move |sigma| {
                    let me = me.clone();
                    Ok(Value::Fun(Rc::new(move |a| {
                        let me = me.clone();
                        let sigma = sigma.clone();
                        Ok(Value::Fun(Rc::new(move |b| me.arith(times, &sigma, a.clone(), b))))
                    })))
                }))
            }
            LIFT => Value::TyFun(Rc::new(move |sigma| {
                let me = me.clone();
                Ok(Value::Fun(Rc::new(move |n| match n {
                    Value::Nat(n) => me.lift(&sigma, n),
                    _ => Err(stuck("lift of a non-numeral")),
                })))
            })),
            FLATTEN => Value::TyFun(Rc::new(move |sigma| {
                let me = me.clone();
                Ok(Value::Fun(Rc::new(move |v| me.flatten(&sigma, v))))
            })),
            _ => return Err(stuck("unknown symbol")),
        };
        Ok(v)
    }

    pub fn arith(&self, times: bool, sigma: &Ty, a: Value, b: Value) -> Result<Value> {
        self.tick()?;
        match &**sigma {
            Type::Const(_) if is_nat(sigma) => match (a, b) {
                (Value::Nat(x), Value::Nat(y)) => Ok(Value::Nat(if times { x * y } else { x + y })),
                _ => Err(stuck("arithmetic on non-numerals")),
            },
            Type::Arrow(_, cod) => {
                let me = self.clone();
                let cod = cod.clone();
                Ok(Value::Fun(Rc::new(move |x| {
                    let fa = me.apply(&a, x.clone())?;
                    let fb = me.apply(&b, x)?;
                    me.arith(times, &cod, fa, fb)
                })))
            }
            Type::Forall(_, _, body) => {
                let me = self.clone();
                let body = body.clone();
                Ok(Value::TyFun(Rc::new(move |r| {
                    let fa = me.tyapply(&a, r.clone())?;
                    let fb = me.tyapply(&b, r.clone())?;
                    me.arith(times, &ty::instantiate(&body, &r), fa, fb)
                })))
            }
            _ => Err(stuck("arithmetic at an open type")),
        }
    }

    pub fn lift(&self, sigma: &Ty, n: BigUint) -> Result<Value> {
        self.tick()?;
        match &**sigma {
            Type::Const(_) if is_nat(sigma) => Ok(Value::Nat(n)),
            Type::Arrow(_, cod) => {
                let me = self.clone();
                let cod = cod.clone();
                Ok(Value::Fun(Rc::new(move |_| me.lift(&cod, n.clone()))))
            }
            Type::Forall(_, _, body) => {
                let me = self.clone();
                let body = body.clone();
                Ok(Value::TyFun(Rc::new(move |r| me.lift(&ty::instantiate(&body, &r), n.clone()))))
            }
            _ => Err(stuck("lift at an open type")),
        }
    }

    pub fn flatten(&self, sigma: &Ty, v: Value) -> Result<Value> {
        self.tick()?;
        match &**sigma {
            Type::Const(_) if is_nat(sigma) => Ok(v),
            Type::Arrow(dom, cod) => {
                let zero = self.lift(dom, BigUint::zero())?;
                let r = self.apply(&v, zero)?;
                self.flatten(cod, r)
            }
            Type::Forall(_, k, body) => {
                let c = chi(k);
                let r = self.tyapply(&v, c.clone())?;
                self.flatten(&ty::instantiate(body, &c), r)
            }
            _ => Err(stuck("flatten at an open type")),
        }
    }
}
