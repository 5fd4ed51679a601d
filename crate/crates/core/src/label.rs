use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize};

/// Leaf label. A nonempty token without whitespace or any of `(),;:#[]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Label(Arc<str>);

/// Characters that terminate a label token.
pub(crate) fn is_reserved(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | ',' | ';' | ':' | '#' | '[' | ']')
}

impl Label {
    pub fn new(name: &str) -> Option<Label> {
        if name.is_empty() || name.chars().any(is_reserved) {
            return None;
        }
        Some(Label(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Label::new(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid label {s:?}")))
    }
}

/// Convenience for tests and literals; panics on an invalid token.
impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s).unwrap_or_else(|| panic!("invalid label {s:?}"))
    }
}
