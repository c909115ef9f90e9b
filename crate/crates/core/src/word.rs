//! Words (noncommutative monomials) and multidegrees.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Variable index. Variables are 1-based, `x1, x2, ...`.
pub type Var = u16;

/// A word `x_{i1} x_{i2} ... x_{ik}`; the empty word is the unit.
///
/// Words are ordered by length first and lexicographically within a length.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(Vec<Var>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(v: Var) -> Self {
        debug_assert!(v >= 1);
        Word(vec![v])
    }

    pub fn from_letters(letters: Vec<Var>) -> Self {
        debug_assert!(letters.iter().all(|&v| v >= 1));
        Word(letters)
    }

    pub fn letters(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_var(&self) -> Var {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn multidegree(&self, n: usize) -> MultiDegree {
        let mut d = vec![0u32; n];
        for &v in &self.0 {
            d[v as usize - 1] += 1;
        }
        MultiDegree(d)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

/// Per-variable degrees `(i_1, ..., i_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn zero(n: usize) -> Self {
        MultiDegree(vec![0; n])
    }

    pub fn unit(n: usize, var: Var) -> Self {
        let mut d = vec![0; n];
        d[var as usize - 1] = 1;
        MultiDegree(d)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, var: Var) -> u32 {
        self.0.get(var as usize - 1).copied().unwrap_or(0)
    }

    /// Bitmask of the variables with positive degree (bit `i-1` for `x_i`).
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << i))
    }

    pub fn le(&self, other: &MultiDegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
