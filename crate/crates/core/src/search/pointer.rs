//! Reading pointers: one read position per input tape.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("pointer dimensions differ: {0} vs {1}")]
pub struct DimensionMismatch(pub usize, pub usize);

/// Element of the monoid `<N^n, +, 0>`, ordered lexicographically for map
/// lookups. The precedence partial order is [`Pointer::precedes`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pointer(Vec<usize>);

impl Pointer {
    pub fn origin(n: usize) -> Self {
        Pointer(vec![0; n])
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Sum of the positions; the pending-queue priority.
    pub fn key(&self) -> usize {
        self.0.iter().sum()
    }

    /// `self ≺ other` iff `self + c = other` for some non-zero `c ∈ N^n`.
    pub fn precedes(&self, other: &Pointer) -> Result<bool, DimensionMismatch> {
        if self.dim() != other.dim() {
            return Err(DimensionMismatch(self.dim(), other.dim()));
        }
        let le = self.0.iter().zip(&other.0).all(|(a, b)| a <= b);
        Ok(le && self.0 != other.0)
    }
}

impl From<Vec<usize>> for Pointer {
    fn from(v: Vec<usize>) -> Self {
        Pointer(v)
    }
}

impl fmt::Display for Pointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(">")
    }
}
