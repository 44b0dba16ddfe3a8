use std::fmt;
use std::sync::Arc;

/// Kinds: `*` and `k1 => k2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Star,
    Arrow(Arc<Kind>, Arc<Kind>),
}

impl Kind {
    pub fn arrow(from: Kind, to: Kind) -> Kind {
        Kind::Arrow(Arc::new(from), Arc::new(to))
    }

    /// Builds `k1 => ... => kn => result`.
    pub fn arrows(args: impl IntoIterator<Item = Kind>, result: Kind) -> Kind {
        let args: Vec<Kind> = args.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, k| Kind::arrow(k, acc))
    }

    pub fn is_star(&self) -> bool {
        matches!(self, Kind::Star)
    }

    /// Number of arrows along the right spine.
    pub fn arity(&self) -> usize {
        match self {
            Kind::Star => 0,
            Kind::Arrow(_, r) => 1 + r.arity(),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Star => write!(f, "*"),
            Kind::Arrow(a, b) => {
                if a.is_star() {
                    write!(f, "* => {b}")
                } else {
                    write!(f, "({a}) => {b}")
                }
            }
        }
    }
}

/// A binder name kept only for display. All hints compare equal, so
/// structural equality of nameless trees is alpha-equivalence.
#[derive(Clone, Debug)]
pub struct Hint(pub Arc<str>);

impl Hint {
    pub fn new(s: &str) -> Hint {
        Hint(Arc::from(s))
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}
impl Eq for Hint {}
impl std::hash::Hash for Hint {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}
impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Hint) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Hint {
    fn cmp(&self, _: &Hint) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_right_assoc() {
        let k = Kind::arrows([Kind::Star, Kind::Star], Kind::Star);
        assert_eq!(k.to_string(), "* => * => *");
        let h = Kind::arrow(Kind::arrow(Kind::Star, Kind::Star), Kind::Star);
        assert_eq!(h.to_string(), "(* => *) => *");
        assert_eq!(h.arity(), 1);
    }

    #[test]
    fn hints_are_invisible_to_equality() {
        assert_eq!(Hint::new("a"), Hint::new("b"));
    }
}
