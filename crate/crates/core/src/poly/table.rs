use std::collections::HashMap;
use std::sync::Arc;

use crate::{Error, Result};

/// Ordered set of named variables with integer degrees.
///
/// Each variable may also carry an auxiliary weight label (used for the
/// higher-Chow index of base generators). Labels never affect degree or
/// truncation; they are only summed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableTable {
    names: Vec<String>,
    degrees: Vec<i32>,
    weights: Vec<i32>,
    index: HashMap<String, usize>,
    has_positive: bool,
}

impl VariableTable {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, i32)>) -> Result<Self> {
        Self::with_weights(vars.into_iter().map(|(n, d)| (n, d, 0)))
    }

    /// Builds a table from `(name, degree, weight label)` triples.
    pub fn with_weights<S: Into<String>>(
        vars: impl IntoIterator<Item = (S, i32, i32)>,
    ) -> Result<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut weights = Vec::new();
        let mut index = HashMap::new();
        for (name, degree, weight) in vars {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(Error::structural(format!("invalid variable name `{name}`")));
            }
            if degree == 0 {
                return Err(Error::structural(format!("variable `{name}` has degree 0")));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::structural(format!("duplicate variable `{name}`")));
            }
            names.push(name);
            degrees.push(degree);
            weights.push(weight);
        }
        let has_positive = degrees.iter().any(|&d| d > 0);
        Ok(VariableTable {
            names,
            degrees,
            weights,
            index,
            has_positive,
        })
    }

    pub fn empty() -> Self {
        Self::new(std::iter::empty::<(String, i32)>()).unwrap()
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn weight_label(&self, i: usize) -> i32 {
        self.weights[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// True if some variable has positive degree; decides how filtration
    /// weight is measured.
    pub fn has_positive(&self) -> bool {
        self.has_positive
    }

    /// True if some variable has negative degree.
    pub fn has_negative(&self) -> bool {
        self.degrees.iter().any(|&d| d < 0)
    }

    /// Weight contributed by one power of variable `i` to the truncation filtration.
    pub fn filtration_unit(&self, i: usize) -> u32 {
        let d = self.degrees[i];
        if self.has_positive {
            d.max(0) as u32
        } else {
            d.unsigned_abs()
        }
    }

    /// Returns a table with the given variables appended after these.
    pub fn extended<S: Into<String>>(
        &self,
        extra: impl IntoIterator<Item = (S, i32, i32)>,
    ) -> Result<Self> {
        let own = self
            .names
            .iter()
            .cloned()
            .zip(self.degrees.iter().copied())
            .zip(self.weights.iter().copied())
            .map(|((n, d), w)| (n, d, w));
        let extra = extra.into_iter().map(|(n, d, w)| (n.into(), d, w));
        Self::with_weights(own.chain(extra))
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
