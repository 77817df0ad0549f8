//! Weighted multi-tape finite-state machines and n-tape best-path search.
//!
//! A machine with `n` tapes carries an n-tuple of strings on every transition.
//! Given strings for some of its tapes, [`fsm_viterbi`] finds the path of
//! optimal weight that reads exactly those strings, and
//! [`best_transduction`] returns what that path writes on the other tapes.
//!
//! Weights come from a [`Semiring`]; the numeric carrier is a type
//! parameter, with the usual instantiations aliased below.
//!
//! ```
//! use ntwfsm::{align_pair, AlignerSpec};
//!
//! let spec = AlignerSpec { marker: '-', ..AlignerSpec::default() };
//! let a = align_pair("swum", "swim", &spec).unwrap();
//! assert_eq!(a.weight, 2);
//! ```

pub mod alignment;
pub mod machine;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod search;
pub mod semiring;
pub mod text;

pub use alignment::{align_pair, build_aligner, strip_markers, Aligner, AlignerSpec, Alignment, AlignError};
pub use machine::{Label, Machine, ModelError, StateId, StringTuple, Transition, TransitionId, VarClass};
pub use search::{
    best_transduction, fsa_viterbi, fsm_viterbi, fsm_viterbi_with, BestPath, HeapKind, Pointer, SearchError,
    SearchOptions, SearchStats, Transduction,
};
pub use semiring::{Direction, ProbMax, Semiring, TropicalMax, TropicalMin};
pub use text::{parse_machine, write_machine, AnyMachine, ParseError, ALIGNED_EPSILON};

/// Integer min-plus weights.
pub type Tropical = TropicalMin<i64>;
/// Integer max-plus weights.
pub type TropicalMaxI64 = TropicalMax<i64>;
/// Double-precision max-times probabilities.
pub type Probability = ProbMax<f64>;

pub type TropicalMachine = Machine<Tropical>;
pub type TropicalMaxMachine = Machine<TropicalMaxI64>;
pub type ProbabilityMachine = Machine<Probability>;
