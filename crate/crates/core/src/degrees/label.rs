use std::fmt;
use std::sync::Arc;

/// Name of a Turing degree (`0`, `0'`, or a user-declared label).
///
/// Labels are metadata attached to scalars; nothing in the crate tries to
/// compute the degree of a real from its digits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeLabel(Arc<str>);

impl DegreeLabel {
    pub const BOTTOM: &'static str = "0";

    pub fn new(name: impl AsRef<str>) -> Self {
        DegreeLabel(Arc::from(name.as_ref()))
    }

    /// The degree of the computable sets.
    pub fn bottom() -> Self {
        Self::new(Self::BOTTOM)
    }

    /// The degree of the halting problem.
    pub fn jump() -> Self {
        Self::new("0'")
    }

    pub fn double_jump() -> Self {
        Self::new("0''")
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_bottom(&self) -> bool {
        &*self.0 == Self::BOTTOM
    }

    /// Identifier check used by the file parsers: non-empty, no whitespace,
    /// no `@` or `:` (they delimit scalar literals).
    pub fn is_valid_name(name: &str) -> bool {
        !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '@' || c == ':')
    }
}

impl fmt::Display for DegreeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for DegreeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DegreeLabel({})", self.0)
    }
}
