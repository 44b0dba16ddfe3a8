use polyterm_core::term::{self, Tm};
use polyterm_core::ty::{self, Ty};
use polyterm_core::{Kind, Signature};

pub const NAT: &str = "nat";
pub const PLUS: &str = "plus";
pub const TIMES: &str = "times";
pub const LIFT: &str = "lift";
pub const FLATTEN: &str = "flatten";

pub fn is_builtin(n: &str) -> bool {
    matches!(n, PLUS | TIMES | LIFT | FLATTEN)
}

pub fn nat() -> Ty {
    ty::constant(NAT)
}

/// The builtin type of a builtin symbol.
pub fn builtin_type(n: &str) -> Option<Ty> {
    let a = || ty::bound(0);
    let t = match n {
        PLUS | TIMES => ty::arrows([a(), a()], a()),
        LIFT => ty::arrow(nat(), a()),
        FLATTEN => ty::arrow(a(), nat()),
        _ => return None,
    };
    Some(ty::forall("a", Kind::Star, t))
}

/// `nat : *` with `chi = nat` and the four builtin symbols.
pub fn signature() -> Signature {
    let mut sig = Signature::new();
    sig.add_const(NAT, Kind::Star).expect("fresh signature");
    sig.set_chi(NAT).expect("nat declared");
    for s in [PLUS, TIMES, LIFT, FLATTEN] {
        sig.add_symbol(s, builtin_type(s).expect("builtin")).expect("fresh signature");
    }
    sig
}

pub fn chi(k: &Kind) -> Ty {
    polyterm_core::chi(&nat(), k)
}

pub fn plus(s: &Ty, a: Tm, b: Tm) -> Tm {
    term::app(term::app(term::tyapp(term::sym(PLUS), s.clone()), a), b)
}

pub fn times(s: &Ty, a: Tm, b: Tm) -> Tm {
    term::app(term::app(term::tyapp(term::sym(TIMES), s.clone()), a), b)
}

pub fn lift(s: &Ty, n: Tm) -> Tm {
    term::app(term::tyapp(term::sym(LIFT), s.clone()), n)
}

pub fn flatten(s: &Ty, t: Tm) -> Tm {
    term::app(term::tyapp(term::sym(FLATTEN), s.clone()), t)
}

pub fn is_nat(t: &Ty) -> bool {
    term::is_const_type(t, NAT)
}
