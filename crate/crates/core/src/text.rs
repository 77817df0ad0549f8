//! Line-oriented text format for machines.
//!
//! ```text
//! # comment
//! ntwfsm n=<arity> semiring=<name> [states=<count>] [eps-mode]
//! i <state> [<weight>]
//! f <state> [<weight>]
//! t <src> <dst> <label_1> ... <label_n> <weight>
//! ```
//!
//! A label token is `<eps>` (empty string), `?<class>` (wildcard), or a
//! literal. Inside a literal `<aeps>` stands for [`ALIGNED_EPSILON`] and a
//! backslash escapes the next character (`\s` space, `\t` tab, `\n` newline,
//! `\\`, `\<`, `\?`, `\#`). A token starting with `#` comments out the
//! rest of the line. Omitted initial/final weights default to the
//! semiring's one; states without an `i`/`f` line get zero.

use std::fmt::Write as _;

use thiserror::Error;

use crate::machine::{Label, Machine, ModelError, StateId};
use crate::semiring::{ProbMax, Semiring, TropicalMax, TropicalMin, WeightParseError};

/// The aligned-epsilon symbol: an ordinary alphabet symbol standing for a gap.
pub const ALIGNED_EPSILON: char = '\u{E000}';

const EPS_TOKEN: &str = "<eps>";
const AEPS_TOKEN: &str = "<aeps>";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("missing `ntwfsm` header")]
    MissingHeader,
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
    #[error("semiring `{found}` where `{expected}` was required")]
    SemiringMismatch { expected: &'static str, found: String },
    #[error("transition has {found} labels, machine arity is {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Weight(#[from] WeightParseError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Header {
    line: usize,
    arity: usize,
    semiring: String,
    states: Option<usize>,
    eps_mode: bool,
}

/// A token starting with `#` begins a comment that runs to the end of the line.
fn strip_comment(line: &str) -> &str {
    let mut prev_blank = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_blank {
            return &line[..i];
        }
        prev_blank = c.is_whitespace();
    }
    line
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_header(line: usize, s: &str) -> Result<Header, ParseError> {
    let mut tokens = s.split_whitespace();
    if tokens.next() != Some("ntwfsm") {
        return Err(ParseError {
            line,
            kind: ParseErrorKind::MissingHeader,
        });
    }
    let mut arity = None;
    let mut semiring = None;
    let mut states = None;
    let mut eps_mode = false;
    for tok in tokens {
        match tok.split_once('=') {
            Some(("n", v)) => {
                let n: usize = v.parse().map_err(|_| syntax(line, format!("bad arity `{v}`")))?;
                if n == 0 {
                    return Err(syntax(line, "arity must be at least 1"));
                }
                arity = Some(n);
            }
            Some(("semiring", v)) => semiring = Some(v.to_string()),
            Some(("states", v)) => {
                states = Some(v.parse().map_err(|_| syntax(line, format!("bad state count `{v}`")))?)
            }
            None if tok == "eps-mode" => eps_mode = true,
            _ => return Err(syntax(line, format!("unexpected header field `{tok}`"))),
        }
    }
    Ok(Header {
        line,
        arity: arity.ok_or_else(|| syntax(line, "header lacks n=<arity>"))?,
        semiring: semiring.ok_or_else(|| syntax(line, "header lacks semiring=<name>"))?,
        states,
        eps_mode,
    })
}

fn header_of(text: &str) -> Result<Header, ParseError> {
    match significant_lines(text).next() {
        Some((line, s)) => parse_header(line, s),
        None => Err(ParseError {
            line: 0,
            kind: ParseErrorKind::MissingHeader,
        }),
    }
}

/// Name of the semiring declared in the header.
pub fn declared_semiring(text: &str) -> Result<String, ParseError> {
    header_of(text).map(|h| h.semiring)
}

pub fn parse_label(token: &str) -> Result<Label, String> {
    if token == EPS_TOKEN {
        return Ok(Label::eps());
    }
    if let Some(class) = token.strip_prefix('?') {
        return class
            .parse()
            .map(Label::Var)
            .map_err(|_| format!("bad wildcard `{token}`"));
    }
    let mut out = Vec::new();
    let mut rest = token;
    while let Some(c) = rest.chars().next() {
        match c {
            '\\' => {
                let mut it = rest[1..].chars();
                let e = it.next().ok_or_else(|| format!("dangling escape in `{token}`"))?;
                out.push(match e {
                    's' => ' ',
                    't' => '\t',
                    'n' => '\n',
                    '\\' | '<' | '?' | '#' => e,
                    _ => return Err(format!("unknown escape `\\{e}` in `{token}`")),
                });
                rest = &rest[1 + e.len_utf8()..];
            }
            '<' => {
                if let Some(r) = rest.strip_prefix(AEPS_TOKEN) {
                    out.push(ALIGNED_EPSILON);
                    rest = r;
                } else {
                    return Err(format!("unescaped `<` in `{token}`"));
                }
            }
            _ => {
                out.push(c);
                rest = &rest[c.len_utf8()..];
            }
        }
    }
    Ok(Label::Literal(out))
}

/// Renders one label as it appears in the text format.
pub fn label_token(label: &Label) -> String {
    match label {
        Label::Var(c) => format!("?{c}"),
        Label::Literal(s) if s.is_empty() => EPS_TOKEN.to_string(),
        Label::Literal(s) => {
            let mut out = String::new();
            for &c in s {
                match c {
                    ALIGNED_EPSILON => out.push_str(AEPS_TOKEN),
                    ' ' => out.push_str("\\s"),
                    '\t' => out.push_str("\\t"),
                    '\n' => out.push_str("\\n"),
                    '\\' | '<' | '?' | '#' => {
                        out.push('\\');
                        out.push(c);
                    }
                    _ => out.push(c),
                }
            }
            out
        }
    }
}

fn parse_state(line: usize, tok: Option<&str>) -> Result<StateId, ParseError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing state"))?;
    tok.parse().map_err(|_| syntax(line, format!("bad state `{tok}`")))
}

fn parse_weight<S: Semiring>(line: usize, tok: &str) -> Result<S::Weight, ParseError> {
    S::parse_weight(tok).map_err(|e| ParseError {
        line,
        kind: e.into(),
    })
}

/// Parses a machine whose header must name the semiring `S`.
pub fn parse_machine<S: Semiring>(text: &str) -> Result<Machine<S>, ParseError> {
    let header = header_of(text)?;
    if header.semiring != S::NAME {
        return Err(ParseError {
            line: header.line,
            kind: ParseErrorKind::SemiringMismatch {
                expected: S::NAME,
                found: header.semiring,
            },
        });
    }
    parse_body::<S>(text, &header)
}

fn parse_body<S: Semiring>(text: &str, header: &Header) -> Result<Machine<S>, ParseError> {
    let n = header.arity;
    let mut initial = Vec::new();
    let mut finals = Vec::new();
    let mut transitions = Vec::new();
    let mut max_state: Option<StateId> = None;
    let mut note = |q: StateId| max_state = Some(max_state.map_or(q, |m| m.max(q)));

    for (line, s) in significant_lines(text).skip(1) {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        match tokens[0] {
            "i" | "f" => {
                if tokens.len() > 3 {
                    return Err(syntax(line, "too many fields"));
                }
                let q = parse_state(line, tokens.get(1).copied())?;
                let w = match tokens.get(2) {
                    Some(tok) => parse_weight::<S>(line, tok)?,
                    None => S::one(),
                };
                note(q);
                if tokens[0] == "i" {
                    initial.push((q, w));
                } else {
                    finals.push((q, w));
                }
            }
            "t" => {
                if tokens.len() < 4 {
                    return Err(syntax(line, "transition needs source, target, labels and weight"));
                }
                let found = tokens.len() - 4;
                if found != n {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::ArityMismatch { expected: n, found },
                    });
                }
                let src = parse_state(line, Some(tokens[1]))?;
                let dst = parse_state(line, Some(tokens[2]))?;
                let labels = tokens[3..3 + n]
                    .iter()
                    .map(|t| parse_label(t).map_err(|m| syntax(line, m)))
                    .collect::<Result<Vec<_>, _>>()?;
                let w = parse_weight::<S>(line, tokens[3 + n])?;
                note(src);
                note(dst);
                transitions.push((src, dst, labels, w));
            }
            other => return Err(syntax(line, format!("unknown line kind `{other}`"))),
        }
    }

    let used = max_state.map_or(0, |m| m + 1);
    let states = match header.states {
        Some(count) if count < used => {
            return Err(syntax(
                header.line,
                format!("states={count} but state {} is used", used - 1),
            ))
        }
        Some(count) => count,
        None => used,
    };
    let mut m = Machine::<S>::with_states(n, states);
    m.set_eps_mode(header.eps_mode);
    for (q, w) in initial {
        m.set_initial(q, w);
    }
    for (q, w) in finals {
        m.set_final(q, w);
    }
    for (src, dst, labels, w) in transitions {
        m.add_transition(src, dst, labels, w);
    }
    Ok(m)
}

pub fn write_machine<S: Semiring>(m: &Machine<S>) -> String {
    let mut out = String::new();
    write!(out, "ntwfsm n={} semiring={} states={}", m.arity(), S::NAME, m.num_states()).unwrap();
    if m.eps_mode() {
        out.push_str(" eps-mode");
    }
    out.push('\n');
    for q in m.states() {
        let w = m.initial_weight(q);
        if !S::is_zero(w) {
            writeln!(out, "i {q} {}", S::format_weight(w)).unwrap();
        }
    }
    for q in m.states() {
        let w = m.final_weight(q);
        if !S::is_zero(w) {
            writeln!(out, "f {q} {}", S::format_weight(w)).unwrap();
        }
    }
    for t in m.transitions() {
        write!(out, "t {} {}", t.source, t.target).unwrap();
        for l in &t.labels {
            write!(out, " {}", label_token(l)).unwrap();
        }
        writeln!(out, " {}", S::format_weight(t.weight)).unwrap();
    }
    out
}

/// A machine whose semiring is only known at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMachine {
    TropicalMin(Machine<TropicalMin<i64>>),
    TropicalMax(Machine<TropicalMax<i64>>),
    ProbMax(Machine<ProbMax<f64>>),
}

/// Applies a generic expression to whichever machine an [`AnyMachine`] holds.
#[macro_export]
macro_rules! with_machine {
    ($any:expr, $m:ident => $body:expr) => {
        match $any {
            $crate::AnyMachine::TropicalMin($m) => $body,
            $crate::AnyMachine::TropicalMax($m) => $body,
            $crate::AnyMachine::ProbMax($m) => $body,
        }
    };
}

impl AnyMachine {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let header = header_of(text)?;
        match header.semiring.as_str() {
            "tropical-min" => parse_body(text, &header).map(AnyMachine::TropicalMin),
            "tropical-max" => parse_body(text, &header).map(AnyMachine::TropicalMax),
            "prob-max" => parse_body(text, &header).map(AnyMachine::ProbMax),
            _ => Err(ParseError {
                line: header.line,
                kind: ParseErrorKind::UnknownSemiring(header.semiring),
            }),
        }
    }

    pub fn semiring_name(&self) -> &'static str {
        match self {
            AnyMachine::TropicalMin(_) => TropicalMin::<i64>::NAME,
            AnyMachine::TropicalMax(_) => TropicalMax::<i64>::NAME,
            AnyMachine::ProbMax(_) => ProbMax::<f64>::NAME,
        }
    }

    pub fn arity(&self) -> usize {
        with_machine!(self, m => m.arity())
    }

    pub fn eps_mode(&self) -> bool {
        with_machine!(self, m => m.eps_mode())
    }

    pub fn validate(&self, input_tapes: &[usize], allow_eps: bool) -> Result<(), ModelError> {
        with_machine!(self, m => m.validate(input_tapes, allow_eps))
    }

    pub fn to_text(&self) -> String {
        with_machine!(self, m => write_machine(m))
    }
}
