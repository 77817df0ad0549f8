//! The n-tape weighted machine `<Σ, Q, K, E, λ, ρ>`.
//!
//! Tapes are indexed from 0 in the library. Which tapes are read as input is
//! not a property of the machine; every search takes the input tape indices
//! explicitly, and the remaining tapes are outputs.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::semiring::Semiring;

pub type StateId = usize;
pub type TransitionId = usize;

/// Equivalence class of a wildcard. All wildcards of one transition sharing
/// a class read or write the same symbol.
pub type VarClass = u32;

/// One tape component of a transition label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// A (possibly empty, possibly multi-symbol) string. Empty means ε.
    Literal(Vec<char>),
    /// Wildcard matching exactly one symbol.
    Var(VarClass),
}

impl Label {
    pub fn lit(s: &str) -> Self {
        Label::Literal(s.chars().collect())
    }

    pub fn eps() -> Self {
        Label::Literal(Vec::new())
    }

    pub fn var(class: VarClass) -> Self {
        Label::Var(class)
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, Label::Literal(s) if s.is_empty())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::label_token(self))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition<W> {
    pub source: StateId,
    pub target: StateId,
    pub labels: Vec<Label>,
    pub weight: W,
}

impl<W> Transition<W> {
    /// True if the transition reads nothing on any of `input_tapes`.
    pub fn is_eps_on(&self, input_tapes: &[usize]) -> bool {
        input_tapes
            .iter()
            .all(|&t| self.labels.get(t).is_some_and(Label::is_eps))
    }
}

/// The strings `<s_1, ..., s_n>` searched against the input tapes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct StringTuple(Vec<Vec<char>>);

impl StringTuple {
    pub fn new<I, S>(strings: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StringTuple(strings.into_iter().map(|s| s.as_ref().chars().collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tape(&self, i: usize) -> &[char] {
        &self.0[i]
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.0.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[char]> {
        self.0.iter().map(Vec::as_slice)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|s| s.iter().collect()).collect()
    }
}

impl<S: AsRef<str>> FromIterator<S> for StringTuple {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        StringTuple::new(iter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("transition {transition} has {found} labels, machine arity is {expected}")]
    ArityMismatch {
        transition: TransitionId,
        expected: usize,
        found: usize,
    },
    #[error("transition {transition} refers to state {state}, machine has {states} states")]
    DanglingState {
        transition: TransitionId,
        state: StateId,
        states: usize,
    },
    #[error("transition {transition} reads ε on every input tape")]
    ForbiddenEpsilonTransition { transition: TransitionId },
    #[error("transition {transition}: wildcard class {class} is not bound by any input tape")]
    UnboundOutputVar {
        transition: TransitionId,
        class: VarClass,
    },
    #[error("invalid input tapes {tapes:?} for a {arity}-tape machine")]
    InvalidInputTapes { tapes: Vec<usize>, arity: usize },
    #[error("path is disconnected at position {position}")]
    DisconnectedPath { position: usize },
    #[error("unknown transition {0}")]
    UnknownTransition(TransitionId),
    #[error("unknown state {0}")]
    UnknownState(StateId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Machine<S: Semiring> {
    arity: usize,
    initial: Vec<S::Weight>,
    finals: Vec<S::Weight>,
    transitions: Vec<Transition<S::Weight>>,
    // E(q) in insertion order; may be longer than the state count when a
    // transition names a state that does not exist yet.
    outgoing: Vec<Vec<TransitionId>>,
    eps_mode: bool,
    semiring: S,
}

impl<S: Semiring> Machine<S> {
    pub fn new(arity: usize) -> Self {
        Machine {
            arity,
            initial: Vec::new(),
            finals: Vec::new(),
            transitions: Vec::new(),
            outgoing: Vec::new(),
            eps_mode: false,
            semiring: S::default(),
        }
    }

    pub fn with_states(arity: usize, states: usize) -> Self {
        let mut m = Self::new(arity);
        m.add_states(states);
        m
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn semiring(&self) -> S {
        self.semiring
    }

    pub fn eps_mode(&self) -> bool {
        self.eps_mode
    }

    pub fn set_eps_mode(&mut self, on: bool) {
        self.eps_mode = on;
    }

    pub fn add_state(&mut self) -> StateId {
        self.initial.push(S::zero());
        self.finals.push(S::zero());
        self.initial.len() - 1
    }

    pub fn add_states(&mut self, n: usize) {
        for _ in 0..n {
            self.add_state();
        }
    }

    pub fn set_initial(&mut self, q: StateId, w: S::Weight) {
        self.initial[q] = w;
    }

    pub fn set_final(&mut self, q: StateId, w: S::Weight) {
        self.finals[q] = w;
    }

    pub fn initial_weight(&self, q: StateId) -> S::Weight {
        self.initial[q]
    }

    pub fn final_weight(&self, q: StateId) -> S::Weight {
        self.finals[q]
    }

    pub fn add_transition(
        &mut self,
        source: StateId,
        target: StateId,
        labels: Vec<Label>,
        weight: S::Weight,
    ) -> TransitionId {
        let id = self.transitions.len();
        self.transitions.push(Transition {
            source,
            target,
            labels,
            weight,
        });
        if self.outgoing.len() <= source {
            self.outgoing.resize_with(source + 1, Vec::new);
        }
        self.outgoing[source].push(id);
        id
    }

    pub fn transition(&self, id: TransitionId) -> &Transition<S::Weight> {
        &self.transitions[id]
    }

    pub fn transitions(&self) -> &[Transition<S::Weight>] {
        &self.transitions
    }

    /// Outgoing transitions of `q`, in insertion (file) order.
    pub fn outgoing(&self, q: StateId) -> &[TransitionId] {
        self.outgoing.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.num_states()
    }

    /// Symbols occurring in literal labels.
    pub fn alphabet(&self) -> BTreeSet<char> {
        self.transitions
            .iter()
            .flat_map(|t| t.labels.iter())
            .filter_map(|l| match l {
                Label::Literal(s) => Some(s.iter().copied()),
                Label::Var(_) => None,
            })
            .flatten()
            .collect()
    }

    /// Tapes not listed in `input_tapes`, in increasing order.
    pub fn output_tapes(&self, input_tapes: &[usize]) -> Vec<usize> {
        (0..self.arity).filter(|t| !input_tapes.contains(t)).collect()
    }

    pub fn check_input_tapes(&self, input_tapes: &[usize]) -> Result<(), ModelError> {
        let distinct: BTreeSet<_> = input_tapes.iter().collect();
        if input_tapes.is_empty()
            || distinct.len() != input_tapes.len()
            || input_tapes.iter().any(|&t| t >= self.arity)
        {
            return Err(ModelError::InvalidInputTapes {
                tapes: input_tapes.to_vec(),
                arity: self.arity,
            });
        }
        Ok(())
    }

    /// Structural checks needed before a search reading `input_tapes`.
    pub fn validate(&self, input_tapes: &[usize], allow_eps: bool) -> Result<(), ModelError> {
        self.check_input_tapes(input_tapes)?;
        let states = self.num_states();
        for (id, t) in self.transitions.iter().enumerate() {
            for q in [t.source, t.target] {
                if q >= states {
                    return Err(ModelError::DanglingState {
                        transition: id,
                        state: q,
                        states,
                    });
                }
            }
            if t.labels.len() != self.arity {
                return Err(ModelError::ArityMismatch {
                    transition: id,
                    expected: self.arity,
                    found: t.labels.len(),
                });
            }
            if !allow_eps && t.is_eps_on(input_tapes) {
                return Err(ModelError::ForbiddenEpsilonTransition { transition: id });
            }
            for (tape, label) in t.labels.iter().enumerate() {
                if let Label::Var(c) = label {
                    if input_tapes.contains(&tape) {
                        continue;
                    }
                    let bound = input_tapes
                        .iter()
                        .any(|&i| t.labels[i] == Label::Var(*c));
                    if !bound {
                        return Err(ModelError::UnboundOutputVar {
                            transition: id,
                            class: *c,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// A state on a cycle made only of transitions that read nothing on the
    /// input tapes, if there is one.
    pub fn find_epsilon_cycle(&self, input_tapes: &[usize]) -> Option<StateId> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let n = self.num_states();
        let mut mark = vec![Mark::New; n];
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            // iterative DFS: (state, next outgoing index)
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Open;
            while let Some(&mut (q, ref mut next)) = stack.last_mut() {
                let out = self.outgoing(q);
                if *next < out.len() {
                    let t = &self.transitions[out[*next]];
                    *next += 1;
                    if t.target >= n || !t.is_eps_on(input_tapes) {
                        continue;
                    }
                    match mark[t.target] {
                        Mark::Open => return Some(t.target),
                        Mark::New => {
                            mark[t.target] = Mark::Open;
                            stack.push((t.target, 0));
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[q] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Weight of a path anchored at `start`: λ(start) ⊗ w(e_1) ⊗ … ⊗ ρ(last).
    /// An empty path weighs λ(start) ⊗ ρ(start).
    pub fn path_weight(&self, start: StateId, path: &[TransitionId]) -> Result<S::Weight, ModelError> {
        if start >= self.num_states() {
            return Err(ModelError::UnknownState(start));
        }
        let mut w = self.initial[start];
        let mut at = start;
        for (position, &id) in path.iter().enumerate() {
            let t = self
                .transitions
                .get(id)
                .ok_or(ModelError::UnknownTransition(id))?;
            if t.source != at {
                return Err(ModelError::DisconnectedPath { position });
            }
            if t.target >= self.num_states() {
                return Err(ModelError::UnknownState(t.target));
            }
            w = S::times(w, t.weight);
            at = t.target;
        }
        Ok(S::times(w, self.finals[at]))
    }

    /// ⊗-product of the transition weights alone, without λ and ρ.
    pub fn inner_weight(&self, path: &[TransitionId]) -> Result<S::Weight, ModelError> {
        let mut w = S::one();
        for (position, pair) in path.windows(2).enumerate() {
            if self.transitions[pair[0]].target != self.transitions[pair[1]].source {
                return Err(ModelError::DisconnectedPath { position: position + 1 });
            }
        }
        for &id in path {
            let t = self
                .transitions
                .get(id)
                .ok_or(ModelError::UnknownTransition(id))?;
            w = S::times(w, t.weight);
        }
        Ok(w)
    }

    /// Same topology and labels, weights mapped into another semiring.
    pub fn map_weights<T: Semiring>(&self, f: impl Fn(S::Weight) -> T::Weight) -> Machine<T> {
        Machine {
            arity: self.arity,
            initial: self.initial.iter().map(|&w| f(w)).collect(),
            finals: self.finals.iter().map(|&w| f(w)).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    source: t.source,
                    target: t.target,
                    labels: t.labels.clone(),
                    weight: f(t.weight),
                })
                .collect(),
            outgoing: self.outgoing.clone(),
            eps_mode: self.eps_mode,
            semiring: T::default(),
        }
    }
}
