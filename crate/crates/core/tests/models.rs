use std::collections::BTreeSet;

use ntwfsm::oracle::{classical_viterbi, edit_distance_matrix, enumerate_accepting_paths, hmm_to_wfsm, EditCosts};
use ntwfsm::random::{random_hmm, random_observation};
use ntwfsm::{
    align_pair, build_aligner, fsa_viterbi, fsm_viterbi, AlignerSpec, Label, SearchError, StringTuple,
    TropicalMachine,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn hmm_machines_match_classical_viterbi() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let h = random_hmm(&mut rng, 8, 5);
        let obs = random_observation(&mut rng, &h, 12);
        let classical = classical_viterbi(&h, &obs).unwrap();
        let m = hmm_to_wfsm(&h).unwrap();
        let p = fsa_viterbi(&m, &obs).unwrap();
        assert!((p.weight.ln() - classical.probability.ln()).abs() < 1e-9, "case {i}");
        let states: Vec<usize> = p.transitions.iter().map(|&t| m.transition(t).target - 1).collect();
        assert_eq!(states, classical.states, "case {i}");
    }
}

fn dash() -> AlignerSpec {
    AlignerSpec {
        marker: '-',
        ..AlignerSpec::default()
    }
}

fn random_word<R: Rng>(rng: &mut R, alphabet: &[char], max: usize) -> String {
    let len = rng.gen_range(0..=max);
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

#[test]
fn aligner_weight_is_edit_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let alphabet: Vec<char> = "abcd".chars().collect();
    for _ in 0..500 {
        let a = random_word(&mut rng, &alphabet, 8);
        let b = random_word(&mut rng, &alphabet, 8);
        let got = align_pair(&a, &b, &dash()).unwrap();
        let want = edit_distance_matrix(&a, &b, &EditCosts::<i64>::indel_only()).distance;
        assert_eq!(got.weight, want, "{a:?} {b:?}");
    }
}

#[test]
fn documented_alignments() {
    let g = align_pair("gemacht", "machen", &dash()).unwrap();
    assert_eq!((g.a.as_str(), g.b.as_str(), g.ops.as_str(), g.weight), ("gemacht--", "--mach-en", "DDKKKKDII", 5));
    let s = align_pair("swum", "swim", &dash()).unwrap();
    assert_eq!((s.a.as_str(), s.b.as_str(), s.weight), ("swu-m", "sw-im", 2));
}

fn words(alphabet: &[char], max: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn forbid_variant_never_accepts_insert_then_delete() {
    let spec = AlignerSpec {
        forbid_insert_then_delete: true,
        ..dash()
    };
    let m = build_aligner(&spec).unwrap();
    let ws = words(&['x', 'y'], 3);
    for a in &ws {
        for b in &ws {
            let paths = enumerate_accepting_paths(&m, &StringTuple::new([a, b]), &[0, 1]);
            assert!(!paths.is_empty());
            for p in &paths {
                assert!(!p.tapes[4].contains("ID"), "{a} {b}: {}", p.tapes[4]);
            }
            let best = align_pair(a, b, &spec).unwrap();
            assert_eq!(Some(best.weight), paths.iter().map(|p| p.weight).min());
        }
    }
}

/// An ε-augmented machine: states 0 -a-> 1 -ε-> 2 -b-> 3, plus an
/// ε-shortcut 0 -ε-> 2 with a higher cost.
fn with_eps() -> TropicalMachine {
    let mut m = TropicalMachine::with_states(2, 4);
    m.set_eps_mode(true);
    m.set_initial(0, 0);
    m.set_final(3, 0);
    m.set_final(1, 5);
    m.add_transition(0, 1, vec![Label::lit("a"), Label::lit("A")], 1);
    m.add_transition(1, 2, vec![Label::eps(), Label::lit("-")], 1);
    m.add_transition(2, 3, vec![Label::lit("b"), Label::lit("B")], 2);
    m.add_transition(0, 2, vec![Label::eps(), Label::lit("+")], 6);
    m.add_transition(3, 0, vec![Label::var(1), Label::var(1)], 1);
    m
}

/// The same relation with the ε-transitions folded into their neighbours.
fn eps_free() -> TropicalMachine {
    let mut m = TropicalMachine::with_states(2, 4);
    m.set_initial(0, 0);
    m.set_final(3, 0);
    m.set_final(1, 5);
    m.add_transition(0, 1, vec![Label::lit("a"), Label::lit("A")], 1);
    m.add_transition(1, 3, vec![Label::lit("b"), Label::lit("-B")], 3);
    m.add_transition(0, 3, vec![Label::lit("b"), Label::lit("+B")], 8);
    m.add_transition(3, 0, vec![Label::var(1), Label::var(1)], 1);
    m
}

#[test]
fn eps_augmented_machine_matches_hand_built_equivalent() {
    let m = with_eps();
    let e = eps_free();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let alphabet = ['a', 'b', 'x'];
    let mut accepted = 0;
    for _ in 0..50 {
        let mut s = String::new();
        for _ in 0..rng.gen_range(0..4) {
            s.push_str(["ab", "b", "xab", "a"][rng.gen_range(0..4)]);
        }
        if rng.gen_bool(0.2) {
            s = random_word(&mut rng, &alphabet, 6);
        }
        let input = StringTuple::new([s.as_str()]);
        let x = fsm_viterbi(&m, &input, &[0]).map(|p| (p.weight, p.tapes[1].clone()));
        let y = fsm_viterbi(&e, &input, &[0]).map(|p| (p.weight, p.tapes[1].clone()));
        assert_eq!(x, y, "{s:?}");
        accepted += usize::from(x.is_ok());
    }
    assert!(accepted >= 10);
}

#[test]
fn eps_self_loop_is_reported() {
    let mut m = with_eps();
    m.add_transition(2, 2, vec![Label::eps(), Label::lit("z")], 0);
    assert_eq!(
        fsm_viterbi(&m, &StringTuple::new(["ab"]), &[0]),
        Err(SearchError::EpsilonCycle { state: 2 })
    );
}

#[test]
fn alphabet_restriction() {
    let spec = AlignerSpec {
        alphabet: Some("ab".chars().collect::<BTreeSet<_>>()),
        ..dash()
    };
    assert!(align_pair("ab", "ba", &spec).is_ok());
    assert!(align_pair("abz", "ba", &spec).is_err());
}
