//! Matching transition labels against the input strings at a pointer.

use crate::machine::{Label, StringTuple, VarClass};

use super::pointer::Pointer;

/// Symbols bound to wildcard classes by one transition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings(Vec<(VarClass, char)>);

impl Bindings {
    pub fn get(&self, class: VarClass) -> Option<char> {
        self.0.iter().find(|(c, _)| *c == class).map(|&(_, s)| s)
    }

    fn bind(&mut self, class: VarClass, sym: char) -> bool {
        match self.get(class) {
            Some(s) => s == sym,
            None => {
                self.0.push((class, sym));
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The string a label contributes to its tape under these bindings.
    /// Unbound wildcards contribute nothing.
    pub fn resolve(&self, label: &Label) -> Vec<char> {
        match label {
            Label::Literal(s) => s.clone(),
            Label::Var(c) => self.get(*c).into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub pointer: Pointer,
    pub bindings: Bindings,
    pub is_eps_move: bool,
}

/// Matches `labels` against `input` at `at`.
///
/// `input_tapes[k]` is the machine tape read against `input.tape(k)`, and
/// `at.positions()[k]` is the read position on that string. Tapes not listed
/// are outputs and never constrain the match.
pub fn match_transition(
    labels: &[Label],
    input: &StringTuple,
    at: &Pointer,
    input_tapes: &[usize],
) -> Option<Match> {
    let mut bindings = Bindings::default();
    let mut advance = Vec::with_capacity(input_tapes.len());
    for (k, &tape) in input_tapes.iter().enumerate() {
        let s = input.tape(k);
        let p = at.positions()[k];
        let step = match &labels[tape] {
            Label::Literal(lit) => {
                if s.len() - p < lit.len() || s[p..p + lit.len()] != lit[..] {
                    return None;
                }
                lit.len()
            }
            Label::Var(class) => {
                let &sym = s.get(p)?;
                if !bindings.bind(*class, sym) {
                    return None;
                }
                1
            }
        };
        advance.push(p + step);
    }
    let is_eps_move = advance.iter().zip(at.positions()).all(|(a, b)| a == b);
    Some(Match {
        pointer: Pointer::from(advance),
        bindings,
        is_eps_move,
    })
}
