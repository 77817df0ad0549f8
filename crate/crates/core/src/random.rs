//! Seeded generators for randomized cross-checks: small tropical machines
//! with mixed labels, input tuples, and hidden Markov models.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::machine::{Label, StringTuple};
use crate::oracle::HmmModel;
use crate::TropicalMachine;

#[derive(Clone, Debug)]
pub struct CaseParams {
    /// Input tapes per machine, drawn from `1..=max_arity`.
    pub max_arity: usize,
    pub max_states: usize,
    pub max_transitions: usize,
    pub max_input_len: usize,
    pub max_weight: i64,
    pub alphabet: Vec<char>,
    /// Sometimes add one output tape (interleaved with the input tapes).
    pub output_tapes: bool,
}

impl Default for CaseParams {
    fn default() -> Self {
        CaseParams {
            max_arity: 3,
            max_states: 6,
            max_transitions: 20,
            max_input_len: 6,
            max_weight: 9,
            alphabet: vec!['a', 'b'],
            output_tapes: true,
        }
    }
}

/// A machine, an input tuple, and the tapes the tuple is read on.
#[derive(Clone, Debug)]
pub struct Case {
    pub machine: TropicalMachine,
    pub input: StringTuple,
    pub input_tapes: Vec<usize>,
}

fn random_literal<R: Rng>(rng: &mut R, alphabet: &[char], len: usize) -> Label {
    Label::Literal((0..len).map(|_| *alphabet.choose(rng).expect("non-empty alphabet")).collect())
}

fn input_label<R: Rng>(rng: &mut R, alphabet: &[char]) -> Label {
    match rng.gen_range(0..100) {
        0..=24 => Label::eps(),
        25..=59 => random_literal(rng, alphabet, 1),
        60..=74 => random_literal(rng, alphabet, 2),
        _ => Label::Var(rng.gen_range(1..=2)),
    }
}

/// A random ε-free machine over `params.alphabet` with integer weights in
/// `0..=max_weight`.
pub fn random_machine<R: Rng>(rng: &mut R, params: &CaseParams) -> (TropicalMachine, Vec<usize>) {
    let inputs = rng.gen_range(1..=params.max_arity);
    let outputs = usize::from(params.output_tapes && rng.gen_bool(0.5));
    let arity = inputs + outputs;
    let mut tapes: Vec<usize> = (0..arity).collect();
    tapes.shuffle(rng);
    let input_tapes: Vec<usize> = tapes[..inputs].to_vec();

    let states = rng.gen_range(1..=params.max_states);
    let mut m = TropicalMachine::with_states(arity, states);
    for q in 0..states {
        if rng.gen_bool(0.4) {
            m.set_initial(q, rng.gen_range(0..=3));
        }
        if rng.gen_bool(0.4) {
            m.set_final(q, rng.gen_range(0..=3));
        }
    }
    if m.states().all(|q| m.initial_weight(q) == i64::MAX) {
        m.set_initial(0, 0);
    }
    if m.states().all(|q| m.final_weight(q) == i64::MAX) {
        m.set_final(rng.gen_range(0..states), 0);
    }

    for _ in 0..rng.gen_range(1..=params.max_transitions) {
        let mut labels = vec![Label::eps(); arity];
        for &t in &input_tapes {
            labels[t] = input_label(rng, &params.alphabet);
        }
        if input_tapes.iter().all(|&t| labels[t].is_eps()) {
            let t = *input_tapes.choose(rng).expect("at least one input tape");
            labels[t] = random_literal(rng, &params.alphabet, 1);
        }
        let bound: Vec<u32> = input_tapes
            .iter()
            .filter_map(|&t| match labels[t] {
                Label::Var(c) => Some(c),
                Label::Literal(_) => None,
            })
            .collect();
        for (t, label) in labels.iter_mut().enumerate() {
            if input_tapes.contains(&t) {
                continue;
            }
            *label = match (rng.gen_range(0..3), bound.choose(rng)) {
                (0, Some(&c)) => Label::Var(c),
                (1, _) => Label::eps(),
                _ => {
                    let len = rng.gen_range(1..=2);
                    random_literal(rng, &params.alphabet, len)
                }
            };
        }
        let (src, dst) = (rng.gen_range(0..states), rng.gen_range(0..states));
        m.add_transition(src, dst, labels, rng.gen_range(0..=params.max_weight));
    }
    (m, input_tapes)
}

/// Input strings read off a random walk through the machine, so that many
/// generated cases have an accepting path.
fn walk_input<R: Rng>(rng: &mut R, m: &TropicalMachine, input_tapes: &[usize], params: &CaseParams) -> StringTuple {
    let initials: Vec<usize> = m.states().filter(|&q| m.initial_weight(q) != i64::MAX).collect();
    let mut q = *initials.choose(rng).expect("machine has an initial state");
    let mut strings = vec![String::new(); input_tapes.len()];
    for _ in 0..2 * params.max_input_len {
        if m.final_weight(q) != i64::MAX && rng.gen_bool(0.3) {
            break;
        }
        let Some(&tid) = m.outgoing(q).choose(rng) else { break };
        let t = m.transition(tid);
        let mut bound = std::collections::HashMap::new();
        let mut next = strings.clone();
        for (k, &tape) in input_tapes.iter().enumerate() {
            match &t.labels[tape] {
                Label::Literal(s) => next[k].extend(s.iter()),
                Label::Var(c) => {
                    let sym = *bound
                        .entry(*c)
                        .or_insert_with(|| *params.alphabet.choose(rng).expect("non-empty alphabet"));
                    next[k].push(sym);
                }
            }
        }
        if next.iter().any(|s| s.chars().count() > params.max_input_len) {
            break;
        }
        strings = next;
        q = t.target;
    }
    StringTuple::new(strings)
}

fn random_strings<R: Rng>(rng: &mut R, n: usize, params: &CaseParams) -> StringTuple {
    (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=params.max_input_len);
            (0..len)
                .map(|_| *params.alphabet.choose(rng).expect("non-empty alphabet"))
                .collect::<String>()
        })
        .collect()
}

pub fn random_case<R: Rng>(rng: &mut R, params: &CaseParams) -> Case {
    let (machine, input_tapes) = random_machine(rng, params);
    let input = if rng.gen_bool(0.5) {
        walk_input(rng, &machine, &input_tapes, params)
    } else {
        random_strings(rng, input_tapes.len(), params)
    };
    Case {
        machine,
        input,
        input_tapes,
    }
}

fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|x| x / sum).collect()
}

/// A random HMM with `1..=max_states` states over `1..=max_symbols` symbols.
pub fn random_hmm<R: Rng>(rng: &mut R, max_states: usize, max_symbols: usize) -> HmmModel<f64> {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_symbols);
    let symbols: Vec<char> = ('a'..='z').take(k).collect();
    HmmModel::new(
        symbols,
        random_distribution(rng, n),
        (0..n).map(|_| random_distribution(rng, n)).collect(),
        (0..n).map(|_| random_distribution(rng, k)).collect(),
    )
    .expect("normalised rows form a valid model")
}

pub fn random_observation<R: Rng>(rng: &mut R, h: &HmmModel<f64>, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| *h.symbols.choose(rng).expect("non-empty alphabet"))
        .collect()
}
