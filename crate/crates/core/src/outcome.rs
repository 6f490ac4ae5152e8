use std::fmt;

/// Result of a checked property: either it holds, or here is why not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<W> {
    Pass,
    Fail(W),
}

impl<W> Outcome<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Outcome::Pass => None,
            Outcome::Fail(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Outcome<V> {
        match self {
            Outcome::Pass => Outcome::Pass,
            Outcome::Fail(w) => Outcome::Fail(f(w)),
        }
    }
}

impl<W: fmt::Display> fmt::Display for Outcome<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Pass => write!(f, "pass"),
            Outcome::Fail(w) => write!(f, "fail: {w}"),
        }
    }
}
