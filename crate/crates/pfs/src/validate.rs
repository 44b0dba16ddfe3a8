use polyterm_core::term::{format_pos, spine, Arg, Term, Tm};
use polyterm_core::ty::Type;
use polyterm_core::{Signature, Ty};

use crate::error::{PfsError, Result};

/// Leading quantifiers and arrow arity of a declared symbol type.
pub fn symbol_arity(t: &Ty) -> (usize, usize) {
    let mut cur = t;
    let mut n = 0;
    while let Type::Forall(_, _, b) = &**cur {
        n += 1;
        cur = b;
    }
    let mut k = 0;
    while let Type::Arrow(_, b) = &**cur {
        k += 1;
        cur = b;
    }
    (n, k)
}

fn violation(path: &[u8], msg: impl Into<String>) -> PfsError {
    PfsError::HeadViolation { path: format_pos(path), msg: msg.into() }
}

/// Checks that every term application is headed by a function symbol
/// given all its type arguments and fewer term arguments than its arity.
pub fn validate_pfs_term(t: &Tm, sig: &Signature) -> Result<()> {
    let mut path = Vec::new();
    walk(t, sig, &mut path)
}

fn walk(t: &Tm, sig: &Signature, path: &mut Vec<u8>) -> Result<()> {
    match &**t {
        Term::App(f, a) => {
            check_head(t, sig, path)?;
            path.push(1);
            walk(f, sig, path)?;
            path.pop();
            path.push(2);
            walk(a, sig, path)?;
            path.pop();
        }
        Term::TyApp(f, _) | Term::Lam(_, _, f) | Term::TyLam(_, _, f) => {
            path.push(1);
            walk(f, sig, path)?;
            path.pop();
        }
        Term::Meta(_, args) => {
            for a in args {
                if let Arg::Tm(u) = a {
                    walk(u, sig, path)?;
                }
            }
        }
        Term::Bound(_) | Term::Free(..) | Term::Sym(_) | Term::Num(_) => {}
    }
    Ok(())
}

fn check_head(t: &Tm, sig: &Signature, path: &[u8]) -> Result<()> {
    let (head, args) = spine(t);
    let name = match &*head {
        Term::Sym(n) => n,
        Term::Bound(_) | Term::Free(..) | Term::Meta(..) => return Err(violation(path, "variable at the head of an application")),
        Term::Lam(..) | Term::TyLam(..) => return Err(violation(path, "abstraction at the head of an application")),
        _ => return Err(violation(path, "ill-formed application head")),
    };
    let ty = sig.symbol(name).ok_or_else(|| PfsError::Core(polyterm_core::CoreError::UnknownSymbol(name.clone())))?;
    let (n, k) = symbol_arity(ty);
    let tys = args.iter().take_while(|a| matches!(a, Arg::Ty(_))).count();
    if tys != n {
        return Err(violation(path, format!("`{name}` expects {n} type arguments before its term arguments")));
    }
    if args[tys..].iter().any(|a| matches!(a, Arg::Ty(_))) {
        return Err(violation(path, format!("type application of a full application of `{name}` is applied further")));
    }
    if args.len() - tys > k {
        return Err(violation(path, format!("`{name}` is applied to more than {k} arguments")));
    }
    Ok(())
}
