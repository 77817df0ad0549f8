//! Word alignment as 2-tape best-path search on a 5-tape machine.
//!
//! Tapes 0 and 1 read the two words, tapes 2 and 3 write them back with a
//! gap marker at every insertion or deletion slot, and tape 4 writes the
//! operation: `K` (keep), `I` (insert) or `D` (delete).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::machine::{Label, StringTuple};
use crate::search::{best_transduction, SearchError};
use crate::text::ALIGNED_EPSILON;
use crate::TropicalMachine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignerSpec {
    /// Restricts the input symbols when set.
    pub alphabet: Option<BTreeSet<char>>,
    pub insert_cost: i64,
    pub delete_cost: i64,
    pub match_cost: i64,
    /// Gap symbol written on the output tapes.
    pub marker: char,
    /// Disallow an insertion immediately followed by a deletion.
    pub forbid_insert_then_delete: bool,
}

impl Default for AlignerSpec {
    fn default() -> Self {
        AlignerSpec {
            alphabet: None,
            insert_cost: 1,
            delete_cost: 1,
            match_cost: 0,
            marker: ALIGNED_EPSILON,
            forbid_insert_then_delete: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("gap marker {0:?} occurs in the alphabet")]
    MarkerInAlphabet(char),
    #[error("symbol {0:?} is outside the aligner alphabet")]
    SymbolOutsideAlphabet(char),
    #[error("edit costs must be non-negative")]
    NegativeCost,
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// One optimal alignment of a word pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub a: String,
    pub b: String,
    /// One of `K`, `I`, `D` per aligned position.
    pub ops: String,
    pub weight: i64,
}

const KEEP: &str = "K";
const INSERT: &str = "I";
const DELETE: &str = "D";

fn check_spec(spec: &AlignerSpec) -> Result<(), AlignError> {
    if spec.insert_cost < 0 || spec.delete_cost < 0 || spec.match_cost < 0 {
        return Err(AlignError::NegativeCost);
    }
    if spec.alphabet.as_ref().is_some_and(|a| a.contains(&spec.marker)) {
        return Err(AlignError::MarkerInAlphabet(spec.marker));
    }
    Ok(())
}

/// Builds the aligner machine.
///
/// The plain aligner has one state, initial and final with weight 0, and
/// three wildcard transitions (keep, insert, delete). With
/// `forbid_insert_then_delete` a second state remembers that the last
/// operation was an insertion and has no delete transition.
pub fn build_aligner(spec: &AlignerSpec) -> Result<TropicalMachine, AlignError> {
    check_spec(spec)?;
    let gap = Label::Literal(vec![spec.marker]);
    let x = Label::var(1);
    let keep = vec![x.clone(), x.clone(), x.clone(), x.clone(), Label::lit(KEEP)];
    let insert = vec![Label::eps(), x.clone(), gap.clone(), x.clone(), Label::lit(INSERT)];
    let delete = vec![x.clone(), Label::eps(), x.clone(), gap, Label::lit(DELETE)];

    let states = if spec.forbid_insert_then_delete { 2 } else { 1 };
    let mut m = TropicalMachine::with_states(5, states);
    for q in 0..states {
        m.set_initial(q, 0);
        m.set_final(q, 0);
    }
    // after an insertion the machine sits in the last state
    let after_insert = states - 1;
    m.add_transition(0, 0, keep.clone(), spec.match_cost);
    m.add_transition(0, after_insert, insert.clone(), spec.insert_cost);
    m.add_transition(0, 0, delete, spec.delete_cost);
    if spec.forbid_insert_then_delete {
        m.add_transition(1, 0, keep, spec.match_cost);
        m.add_transition(1, 1, insert, spec.insert_cost);
    }
    Ok(m)
}

/// An aligner machine built once and reused for many pairs.
#[derive(Clone, Debug)]
pub struct Aligner {
    spec: AlignerSpec,
    machine: TropicalMachine,
}

impl Aligner {
    pub fn new(spec: AlignerSpec) -> Result<Self, AlignError> {
        let machine = build_aligner(&spec)?;
        Ok(Aligner { spec, machine })
    }

    pub fn spec(&self) -> &AlignerSpec {
        &self.spec
    }

    pub fn machine(&self) -> &TropicalMachine {
        &self.machine
    }

    pub fn align(&self, a: &str, b: &str) -> Result<Alignment, AlignError> {
        for c in a.chars().chain(b.chars()) {
            if c == self.spec.marker {
                return Err(AlignError::MarkerInAlphabet(c));
            }
            if self.spec.alphabet.as_ref().is_some_and(|s| !s.contains(&c)) {
                return Err(AlignError::SymbolOutsideAlphabet(c));
            }
        }
        let t = best_transduction(&self.machine, &StringTuple::new([a, b]), &[0, 1])?;
        let [a, b, ops]: [String; 3] = t.outputs.try_into().expect("aligner has three output tapes");
        Ok(Alignment {
            a,
            b,
            ops,
            weight: t.weight,
        })
    }
}

/// Aligns one pair with a freshly built aligner.
pub fn align_pair(a: &str, b: &str, spec: &AlignerSpec) -> Result<Alignment, AlignError> {
    Aligner::new(spec.clone())?.align(a, b)
}

/// Removes every gap marker.
pub fn strip_markers(aligned: &str, marker: char) -> String {
    aligned.chars().filter(|&c| c != marker).collect()
}
