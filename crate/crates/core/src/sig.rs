use indexmap::IndexMap;

use crate::error::{CoreError, Result};
use crate::kind::{Kind, Name};
use crate::ty::{self, Ty};
use crate::typeck;

/// Type constants, function symbols and the designated `chi` constant.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub consts: IndexMap<Name, Kind>,
    pub symbols: IndexMap<Name, Ty>,
    pub chi: Option<Name>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_const(&mut self, n: &str, k: Kind) -> Result<()> {
        if self.consts.contains_key(n) {
            return Err(CoreError::Duplicate(n.into()));
        }
        self.consts.insert(n.into(), k);
        Ok(())
    }

    /// Declares a symbol; its type must be closed and of kind `*`.
    pub fn add_symbol(&mut self, n: &str, t: Ty) -> Result<()> {
        if self.symbols.contains_key(n) {
            return Err(CoreError::Duplicate(n.into()));
        }
        let mut fv = Vec::new();
        ty::free_vars(&t, &mut fv);
        if !fv.is_empty() || ty::has_loose_from(&t, 0) || ty::has_meta(&t) {
            return Err(CoreError::OpenSymbolType(n.into()));
        }
        let k = typeck::kind_of(&t, &[], self, &typeck::Metas::default())?;
        if !k.is_star() {
            return Err(CoreError::KindMismatch {
                path: n.to_string(),
                msg: format!("symbol type has kind {k}"),
            });
        }
        self.symbols.insert(n.into(), ty::normalize(&t));
        Ok(())
    }

    pub fn set_chi(&mut self, n: &str) -> Result<()> {
        match self.consts.get(n) {
            Some(Kind::Star) => {
                self.chi = Some(n.into());
                Ok(())
            }
            Some(k) => Err(CoreError::KindMismatch {
                path: n.to_string(),
                msg: format!("chi must have kind *, found {k}"),
            }),
            None => Err(CoreError::UnknownConstant(n.into())),
        }
    }

    pub fn symbol(&self, n: &str) -> Option<&Ty> {
        self.symbols.get(n)
    }

    pub fn chi_base(&self) -> Result<Ty> {
        self.chi.as_deref().map(ty::constant).ok_or(CoreError::NoChi)
    }
}

/// `chi(*) = base`, `chi(k1 => k2) = \a:k1. chi(k2)`.
pub fn chi(base: &Ty, k: &Kind) -> Ty {
    match k {
        Kind::Star => base.clone(),
        Kind::Arrow(a, b) => ty::lam("a", (**a).clone(), chi(base, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Kind {
        Kind::Star
    }

    #[test]
    fn chi_unfolds_along_the_kind() {
        let base = ty::constant("c");
        assert_eq!(chi(&base, &star()), base);
        let k1 = Kind::arrow(star(), star());
        assert_eq!(chi(&base, &k1), ty::lam("a", star(), base.clone()));
        let k2 = Kind::arrow(k1.clone(), star());
        assert_eq!(chi(&base, &k2), ty::lam("a", k1, base.clone()));
    }

    #[test]
    fn chi_kind_checks() {
        let mut sig = Signature::new();
        sig.add_const("c", star()).unwrap();
        sig.set_chi("c").unwrap();
        let base = sig.chi_base().unwrap();
        for k in [
            star(),
            Kind::arrow(star(), star()),
            Kind::arrow(Kind::arrow(star(), star()), Kind::arrows([star(), star()], star())),
        ] {
            let t = chi(&base, &k);
            assert_eq!(typeck::kind_of(&t, &[], &sig, &typeck::Metas::default()).unwrap(), k);
        }
    }

    #[test]
    fn rejects_open_and_duplicate_symbols() {
        let mut sig = Signature::new();
        sig.add_const("List", star()).unwrap();
        assert!(matches!(sig.add_const("List", star()), Err(CoreError::Duplicate(_))));
        let open = ty::free("a", star());
        assert!(matches!(sig.add_symbol("f", open), Err(CoreError::OpenSymbolType(_))));
        sig.add_symbol("nil", ty::constant("List")).unwrap();
        assert!(sig.add_symbol("nil", ty::constant("List")).is_err());
    }
}
