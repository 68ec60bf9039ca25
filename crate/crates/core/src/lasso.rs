//! Eventually periodic streams `prefix · period^ω` in normal form.

use std::fmt;

use crate::error::{Error, Result};

/// An eventually periodic stream over symbol names.
///
/// Always stored in normal form: the period is primitive and the prefix
/// cannot be shortened by rotating the period, so two lassos denote the same
/// stream iff they are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    prefix: Vec<String>,
    period: Vec<String>,
}

impl Lasso {
    pub fn new<P, Q>(prefix: P, period: Q) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        Q: IntoIterator,
        Q::Item: Into<String>,
    {
        let mut prefix: Vec<String> = prefix.into_iter().map(Into::into).collect();
        let mut period: Vec<String> = period.into_iter().map(Into::into).collect();
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let root = primitive_root_len(&period);
        period.truncate(root);
        while prefix.last().is_some() && prefix.last() == period.last() {
            prefix.pop();
            period.rotate_right(1);
        }
        Ok(Lasso { prefix, period })
    }

    pub fn prefix(&self) -> &[String] {
        &self.prefix
    }

    pub fn period(&self) -> &[String] {
        &self.period
    }

    /// The `i`-th letter of the stream.
    pub fn letter(&self, i: usize) -> &str {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn take(&self, n: usize) -> Vec<&str> {
        (0..n).map(|i| self.letter(i)).collect()
    }
}

/// Length of the shortest `r` with `word = r^k`.
fn primitive_root_len(word: &[String]) -> usize {
    let n = word.len();
    (1..=n)
        .filter(|d| n % d == 0)
        .find(|&d| (d..n).all(|i| word[i] == word[i - d]))
        .unwrap_or(n)
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.prefix {
            write!(f, "{p} ")?;
        }
        write!(f, "({})^w", self.period.join(" "))
    }
}
