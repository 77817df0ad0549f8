//! Edit-distance matrix with backtracked alignment.

use crate::scalar::TropicalScalar;
use crate::semiring::{Semiring, TropicalMin};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EditCosts<T> {
    pub insert: T,
    pub delete: T,
    /// Diagonal move between different symbols.
    pub substitute: T,
    /// Diagonal move between equal symbols.
    pub matched: T,
}

impl<T: TropicalScalar> EditCosts<T> {
    /// Unit insertions and deletions, substitutions disabled.
    pub fn indel_only() -> Self {
        EditCosts {
            insert: T::one(),
            delete: T::one(),
            substitute: T::pos_infinity(),
            matched: T::zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditOp {
    Match,
    Substitute,
    Insert,
    Delete,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EditDistance<T> {
    /// `(|a|+1) x (|b|+1)`; row `i` is the prefix of `a` of length `i`.
    pub matrix: Vec<Vec<T>>,
    pub distance: T,
    pub ops: Vec<EditOp>,
    a: Vec<char>,
    b: Vec<char>,
}

impl<T> EditDistance<T> {
    /// The two words with `marker` at insertion/deletion slots.
    pub fn aligned(&self, marker: char) -> (String, String) {
        let (mut i, mut j) = (0, 0);
        let mut out = (String::new(), String::new());
        for op in &self.ops {
            match op {
                EditOp::Match | EditOp::Substitute => {
                    out.0.push(self.a[i]);
                    out.1.push(self.b[j]);
                    i += 1;
                    j += 1;
                }
                EditOp::Insert => {
                    out.0.push(marker);
                    out.1.push(self.b[j]);
                    j += 1;
                }
                EditOp::Delete => {
                    out.0.push(self.a[i]);
                    out.1.push(marker);
                    i += 1;
                }
            }
        }
        out
    }
}

/// Fills `x[i][j] = min(x[i][j-1] + insert, x[i-1][j] + delete, x[i-1][j-1] + diag)`
/// row by row from `x[0][0] = 0`, then backtracks one optimal operation
/// sequence preferring diagonal, then deletion, then insertion.
pub fn edit_distance_matrix<T: TropicalScalar>(a: &str, b: &str, costs: &EditCosts<T>) -> EditDistance<T> {
    type K<T> = TropicalMin<T>;
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let diag = |i: usize, j: usize| if a[i - 1] == b[j - 1] { costs.matched } else { costs.substitute };

    let mut x = vec![vec![K::<T>::zero(); b.len() + 1]; a.len() + 1];
    x[0][0] = T::zero();
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best = K::<T>::zero();
            if j > 0 {
                best = K::<T>::plus(best, K::<T>::times(x[i][j - 1], costs.insert));
            }
            if i > 0 {
                best = K::<T>::plus(best, K::<T>::times(x[i - 1][j], costs.delete));
            }
            if i > 0 && j > 0 {
                best = K::<T>::plus(best, K::<T>::times(x[i - 1][j - 1], diag(i, j)));
            }
            x[i][j] = best;
        }
    }

    let mut ops = Vec::new();
    let (mut i, mut j) = (a.len(), b.len());
    while (i, j) != (0, 0) && !x[i][j].is_pos_infinite() {
        let here = x[i][j];
        if i > 0 && j > 0 && K::<T>::times(x[i - 1][j - 1], diag(i, j)) == here {
            ops.push(if a[i - 1] == b[j - 1] { EditOp::Match } else { EditOp::Substitute });
            i -= 1;
            j -= 1;
        } else if i > 0 && K::<T>::times(x[i - 1][j], costs.delete) == here {
            ops.push(EditOp::Delete);
            i -= 1;
        } else {
            ops.push(EditOp::Insert);
            j -= 1;
        }
    }
    ops.reverse();

    EditDistance {
        distance: x[a.len()][b.len()],
        matrix: x,
        ops,
        a,
        b,
    }
}
