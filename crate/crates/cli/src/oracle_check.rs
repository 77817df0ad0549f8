//! Randomized cross-check of the trellis search against intersection
//! followed by Dijkstra.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ntwfsm::oracle::{best_weight_by_intersection, OracleError};
use ntwfsm::random::{random_case, Case, CaseParams};
use ntwfsm::{fsm_viterbi, write_machine, SearchError};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct OracleCheckConfig {
    pub seed: u64,
    pub cases: usize,
    pub params: CaseParams,
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        OracleCheckConfig {
            seed: 0,
            cases: 300,
            params: CaseParams::default(),
        }
    }
}

/// Best weight on a case, `None` when nothing is accepted.
pub type Solver = fn(&Case) -> Result<Option<i64>, SearchError>;

/// The solver under test in normal runs.
pub fn trellis_solver(case: &Case) -> Result<Option<i64>, SearchError> {
    match fsm_viterbi(&case.machine, &case.input, &case.input_tapes) {
        Ok(p) => Ok(Some(p.weight)),
        Err(SearchError::NoAcceptingPath) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Case `index` of the stream for `seed`; each case has its own ChaCha
/// stream, so a case can be regenerated without the ones before it.
pub fn generate_case(seed: u64, index: usize, params: &CaseParams) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    random_case(&mut rng, params)
}

#[derive(Debug)]
pub struct Counterexample {
    pub seed: u64,
    pub index: usize,
    pub case: Case,
    pub expected: Result<Option<i64>, OracleError>,
    pub found: Result<Option<i64>, SearchError>,
}

#[derive(Debug, Default)]
pub struct OracleReport {
    pub cases: usize,
    pub accepted: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Counterexample>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

pub fn run_oracle_check(cfg: &OracleCheckConfig, solver: Solver) -> OracleReport {
    let mut report = OracleReport::default();
    for index in 0..cfg.cases {
        let case = generate_case(cfg.seed, index, &cfg.params);
        let expected = best_weight_by_intersection(&case.machine, &case.input, &case.input_tapes);
        let found = solver(&case);
        report.cases += 1;
        match (&expected, &found) {
            (Ok(e), Ok(f)) if e == f => report.accepted += usize::from(e.is_some()),
            _ => {
                report.mismatches += 1;
                if report.first_mismatch.is_none() {
                    report.first_mismatch = Some(Counterexample {
                        seed: cfg.seed,
                        index,
                        case,
                        expected,
                        found,
                    });
                }
            }
        }
    }
    report
}

fn describe<E: std::fmt::Display>(r: &Result<Option<i64>, E>) -> String {
    match r {
        Ok(Some(w)) => w.to_string(),
        Ok(None) => "no accepting path".into(),
        Err(e) => format!("error: {e}"),
    }
}

pub fn write_report(report: &OracleReport, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(
        out,
        "{} cases, {} accepted, {} mismatches",
        report.cases, report.accepted, report.mismatches
    )?;
    if let Some(c) = &report.first_mismatch {
        writeln!(out, "first mismatch: seed {} case {}", c.seed, c.index)?;
        writeln!(out, "oracle: {}", describe(&c.expected))?;
        writeln!(out, "search: {}", describe(&c.found))?;
        let tapes: Vec<String> = c.case.input_tapes.iter().map(|t| (t + 1).to_string()).collect();
        writeln!(out, "input tapes: {}", tapes.join(","))?;
        for (tape, s) in tapes.iter().zip(c.case.input.to_strings()) {
            writeln!(out, "tape {tape}: {s:?}")?;
        }
        write!(out, "{}", write_machine(&c.case.machine))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let p = CaseParams::default();
        for i in [0, 5, 17] {
            let a = generate_case(9, i, &p);
            let b = generate_case(9, i, &p);
            assert_eq!(a.machine, b.machine);
            assert_eq!(a.input, b.input);
        }
        assert_ne!(generate_case(9, 0, &p).machine, generate_case(9, 1, &p).machine);
    }

    #[test]
    fn small_run_passes() {
        let cfg = OracleCheckConfig {
            cases: 50,
            ..OracleCheckConfig::default()
        };
        let report = run_oracle_check(&cfg, trellis_solver);
        assert!(report.passed());
        assert_eq!(report.cases, 50);
    }
}
