use num_bigint::BigUint;
use polyterm_core::term::{self, Term, Tm};
use polyterm_core::typeck::{typecheck, Metas};

use crate::builtins::{is_nat, signature};
use crate::error::{InterpError, Result};
use crate::reduce::is_normal;

/// No free term variables and no metavariables.
pub fn is_closed(t: &Tm) -> bool {
    term::is_closed(t)
}

pub fn is_final(t: &Tm) -> bool {
    is_closed(t) && is_normal(t)
}

/// The value of a final term of type nat.
pub fn nat_value(t: &Tm) -> Result<BigUint> {
    if !is_final(t) {
        return Err(InterpError::NotFinal);
    }
    let ty = typecheck(t, &signature(), &Metas::default())?;
    if !is_nat(&ty) {
        return Err(InterpError::NotNat);
    }
    match &**t {
        Term::Num(n) => Ok(n.clone()),
        _ => Err(InterpError::NotFinal),
    }
}
