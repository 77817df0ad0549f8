//! Hidden Markov models, their conversion to single-tape machines, and the
//! textbook Viterbi dynamic program.

use thiserror::Error;

use crate::machine::{Label, Machine};
use crate::scalar::ProbabilityScalar;
use crate::semiring::ProbMax;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HmmError {
    #[error("{0} is not a probability distribution")]
    InvalidDistribution(String),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("symbol {0:?} is not in the output alphabet")]
    UnknownSymbol(char),
}

/// `<Σ, Q, π, A, B>` with `transition[i][j] = p(x_t = j | x_{t-1} = i)` and
/// `emission[j][k] = p(o_t = symbols[k] | x_t = j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HmmModel<T> {
    pub symbols: Vec<char>,
    pub initial: Vec<T>,
    pub transition: Vec<Vec<T>>,
    pub emission: Vec<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViterbiPath<T> {
    pub states: Vec<usize>,
    pub probability: T,
}

fn check_distribution<T: ProbabilityScalar>(what: String, row: &[T]) -> Result<(), HmmError> {
    let tol = T::from(1e-9).expect("representable tolerance");
    let in_range = row.iter().all(|&p| p >= T::zero() && p <= T::one());
    let sum = row.iter().fold(T::zero(), |a, &b| a + b);
    if in_range && (sum - T::one()).abs() <= tol {
        Ok(())
    } else {
        Err(HmmError::InvalidDistribution(what))
    }
}

impl<T: ProbabilityScalar> HmmModel<T> {
    pub fn new(
        symbols: Vec<char>,
        initial: Vec<T>,
        transition: Vec<Vec<T>>,
        emission: Vec<Vec<T>>,
    ) -> Result<Self, HmmError> {
        let h = HmmModel {
            symbols,
            initial,
            transition,
            emission,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    pub fn validate(&self) -> Result<(), HmmError> {
        let n = self.num_states();
        if self.transition.len() != n || self.transition.iter().any(|r| r.len() != n) {
            return Err(HmmError::Shape(format!("transition matrix must be {n}x{n}")));
        }
        let k = self.symbols.len();
        if self.emission.len() != n || self.emission.iter().any(|r| r.len() != k) {
            return Err(HmmError::Shape(format!("emission matrix must be {n}x{k}")));
        }
        check_distribution("initial vector".into(), &self.initial)?;
        for (i, row) in self.transition.iter().enumerate() {
            check_distribution(format!("transition row {i}"), row)?;
        }
        for (i, row) in self.emission.iter().enumerate() {
            check_distribution(format!("emission row {i}"), row)?;
        }
        Ok(())
    }

    fn symbol_index(&self, c: char) -> Result<usize, HmmError> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .ok_or(HmmError::UnknownSymbol(c))
    }

    /// Joint probability of a state sequence and an observation, computed
    /// term by term.
    pub fn joint_probability(&self, states: &[usize], observation: &str) -> Result<T, HmmError> {
        let obs: Vec<char> = observation.chars().collect();
        if states.len() != obs.len() {
            return Err(HmmError::Shape("state and observation lengths differ".into()));
        }
        let mut p = T::one();
        for (t, (&x, &o)) in states.iter().zip(&obs).enumerate() {
            let k = self.symbol_index(o)?;
            let step = if t == 0 { self.initial[x] } else { self.transition[states[t - 1]][x] };
            p = p * step * self.emission[x][k];
        }
        Ok(p)
    }
}

/// Single-tape machine whose best path on an observation is the most likely
/// state sequence. State 0 is a fresh start state; HMM state `j` becomes
/// machine state `j + 1`. Arcs weigh `π_j·b_j(σ)` out of the start state and
/// `a_ij·b_j(σ)` between HMM states. Every state is final with weight 1.
pub fn hmm_to_wfsm<T: ProbabilityScalar>(h: &HmmModel<T>) -> Result<Machine<ProbMax<T>>, HmmError> {
    h.validate()?;
    let n = h.num_states();
    let mut m = Machine::<ProbMax<T>>::with_states(1, n + 1);
    m.set_initial(0, T::one());
    for q in 0..=n {
        m.set_final(q, T::one());
    }
    for j in 0..n {
        for (k, &sym) in h.symbols.iter().enumerate() {
            m.add_transition(0, j + 1, vec![Label::Literal(vec![sym])], h.initial[j] * h.emission[j][k]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            for (k, &sym) in h.symbols.iter().enumerate() {
                m.add_transition(
                    i + 1,
                    j + 1,
                    vec![Label::Literal(vec![sym])],
                    h.transition[i][j] * h.emission[j][k],
                );
            }
        }
    }
    Ok(m)
}

/// Textbook Viterbi over the `T x |Q|` trellis.
///
/// `δ_t(j) = max_i δ_{t-1}(i) · (a_ij · b_j(o_t))`; ties go to the lowest
/// state id, both for back-pointers and for the final state.
pub fn classical_viterbi<T: ProbabilityScalar>(h: &HmmModel<T>, observation: &str) -> Result<ViterbiPath<T>, HmmError> {
    let obs = observation
        .chars()
        .map(|c| h.symbol_index(c))
        .collect::<Result<Vec<_>, _>>()?;
    let n = h.num_states();
    if obs.is_empty() {
        return Ok(ViterbiPath {
            states: Vec::new(),
            probability: T::one(),
        });
    }
    let mut delta: Vec<T> = (0..n).map(|j| h.initial[j] * h.emission[j][obs[0]]).collect();
    let mut psi: Vec<Vec<usize>> = Vec::with_capacity(obs.len());
    psi.push(vec![0; n]);
    for &o in &obs[1..] {
        let mut next = vec![T::zero(); n];
        let mut back = vec![0; n];
        for j in 0..n {
            for (i, &d) in delta.iter().enumerate() {
                let cand = d * (h.transition[i][j] * h.emission[j][o]);
                if cand > next[j] {
                    next[j] = cand;
                    back[j] = i;
                }
            }
        }
        delta = next;
        psi.push(back);
    }
    let mut last = 0;
    for j in 1..n {
        if delta[j] > delta[last] {
            last = j;
        }
    }
    let probability = delta[last];
    let mut states = vec![last; obs.len()];
    for t in (1..obs.len()).rev() {
        states[t - 1] = psi[t][states[t]];
    }
    Ok(ViterbiPath { states, probability })
}
