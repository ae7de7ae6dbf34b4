use std::fmt;

use thiserror::Error;

use crate::symexpr::FUNCTION_NAMES;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("chart dimension {0} is not odd and at least 3")]
    BadDimension(usize),
    #[error("duplicate coordinate name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is not a valid coordinate name")]
    InvalidName(String),
}

/// An odd-dimensional coordinate chart `(x^0, .., x^{2n})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, ChartError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let dim = names.len();
        if dim < 3 || dim % 2 == 0 {
            return Err(ChartError::BadDimension(dim));
        }
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) || FUNCTION_NAMES.contains(&name.as_str()) {
                return Err(ChartError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(ChartError::DuplicateName(name.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Half of `dim - 1`.
    pub fn n(&self) -> usize {
        (self.names.len() - 1) / 2
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.names.join(", "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
