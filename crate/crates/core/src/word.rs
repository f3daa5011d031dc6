//! Words over the generators `a1 … ad`.
//!
//! Letters are stored 0-based; the textual form (`"a3 a3"`) and JSON form are 1-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite word on the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord(pub Vec<usize>);

impl GroupWord {
    pub fn new(letters: Vec<usize>) -> Self {
        GroupWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Builds a word from 1-based generator indices.
    pub fn from_one_based(indices: &[usize], degree: usize) -> Result<Self> {
        indices
            .iter()
            .map(|&i| {
                if i == 0 || i > degree {
                    Err(Error::InvalidWord(format!(
                        "generator index {i} outside 1..={degree}"
                    )))
                } else {
                    Ok(i - 1)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(GroupWord)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x + 1).collect()
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        match self.0.iter().find(|&&x| x >= degree) {
            Some(&x) => Err(Error::InvalidWord(format!(
                "letter a{} outside a1..a{degree}",
                x + 1
            ))),
            None => Ok(()),
        }
    }

    /// Formal inverse: reversed, each letter replaced by its inverse under `sigma`.
    pub fn inverse(&self, sigma: &[usize]) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&x| sigma[x]).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    pub fn rotated(&self, k: usize) -> GroupWord {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        GroupWord(v)
    }

    /// Least cyclic rotation of the word and of its formal inverse.
    ///
    /// Two relators define the same face up to starting point and direction iff
    /// their normal forms agree.
    pub fn cyclic_normal_form(&self, sigma: &[usize]) -> GroupWord {
        let inv = self.inverse(sigma);
        (0..self.len().max(1))
            .flat_map(|k| [self.rotated(k), inv.rotated(k)])
            .min()
            .unwrap_or_default()
    }

    /// Applies a generator relabeling `letter -> map[letter]`.
    pub fn relabeled(&self, map: &[usize]) -> GroupWord {
        GroupWord(self.0.iter().map(|&x| map[x]).collect())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|x| format!("a{}", x + 1)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Parses whitespace-separated generator names such as `"a3 a3"`.
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| {
                let digits = tok
                    .strip_prefix('a')
                    .ok_or_else(|| Error::InvalidWord(format!("bad generator name {tok:?}")))?;
                match digits.parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(Error::InvalidWord(format!("bad generator name {tok:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(GroupWord)
    }
}
