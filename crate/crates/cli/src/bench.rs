//! Alignment scaling benchmark: a word pair repeated `r` times, for
//! `r = 1..=rmax`, timed against `r = 1`.

use std::io::Write;
use std::time::{Duration, Instant};

use ntwfsm::search::{fsm_viterbi_with, HeapKind, SearchOptions};
use ntwfsm::{build_aligner, AlignerSpec, StringTuple, TropicalMachine};

use crate::{CliError, OutputFormat};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub rmax: usize,
    pub a: String,
    pub b: String,
    pub trials: usize,
    /// Also time the search with the Fibonacci heap (column D).
    pub compare_heaps: bool,
    /// Each trial repeats the alignment until at least this much time has passed.
    pub min_trial: Duration,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            rmax: 8,
            a: "gemacht".into(),
            b: "machen".into(),
            trials: 5,
            compare_heaps: false,
            min_trial: Duration::from_millis(20),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub r: usize,
    pub len_a: usize,
    pub len_b: usize,
    /// Median seconds per alignment.
    pub seconds: f64,
    /// B: measured time relative to `r = 1`.
    pub ratio: f64,
    /// A: `r²`.
    pub quadratic: f64,
    /// C: `r²(1 + 2 log r / log(|a||b|))`.
    pub worst_case: f64,
    pub fibonacci_seconds: Option<f64>,
    /// D: as B, with the Fibonacci heap.
    pub fibonacci_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub a: String,
    pub b: String,
    pub trials: usize,
    pub rows: Vec<BenchRow>,
}

pub fn column_a(r: usize) -> f64 {
    (r * r) as f64
}

/// `base` is `|a||b|` of the unrepeated pair.
pub fn column_c(r: usize, base: usize) -> f64 {
    let r = r as f64;
    r * r * (1.0 + 2.0 * r.ln() / (base as f64).ln())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn time_alignment(m: &TropicalMachine, input: &StringTuple, heap: HeapKind, cfg: &BenchConfig) -> Result<f64, CliError> {
    let opts = SearchOptions {
        heap,
        check_heap_order: false,
    };
    let mut samples = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let start = Instant::now();
        let mut calls = 0u32;
        loop {
            std::hint::black_box(fsm_viterbi_with(m, input, &[0, 1], &opts).0?);
            calls += 1;
            if start.elapsed() >= cfg.min_trial {
                break;
            }
        }
        samples.push(start.elapsed().as_secs_f64() / f64::from(calls));
    }
    Ok(median(samples))
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, CliError> {
    if cfg.rmax < 1 {
        return Err(CliError::Usage("--rmax must be at least 1".into()));
    }
    if cfg.trials < 1 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let base = cfg.a.chars().count() * cfg.b.chars().count();
    if base < 2 {
        return Err(CliError::Usage("the benchmark pair needs |a||b| >= 2".into()));
    }
    let machine = build_aligner(&AlignerSpec::default())?;
    let mut rows: Vec<BenchRow> = Vec::with_capacity(cfg.rmax);
    for r in 1..=cfg.rmax {
        let input = StringTuple::new([cfg.a.repeat(r), cfg.b.repeat(r)]);
        let seconds = time_alignment(&machine, &input, HeapKind::Binary, cfg)?;
        let fibonacci_seconds = if cfg.compare_heaps {
            Some(time_alignment(&machine, &input, HeapKind::Fibonacci, cfg)?)
        } else {
            None
        };
        let first = rows.first();
        rows.push(BenchRow {
            r,
            len_a: input.tape(0).len(),
            len_b: input.tape(1).len(),
            seconds,
            ratio: first.map_or(1.0, |f| seconds / f.seconds),
            quadratic: column_a(r),
            worst_case: column_c(r, base),
            fibonacci_seconds,
            fibonacci_ratio: fibonacci_seconds.map(|t| first.and_then(|f| f.fibonacci_seconds).map_or(1.0, |f| t / f)),
        });
    }
    Ok(BenchReport {
        a: cfg.a.clone(),
        b: cfg.b.clone(),
        trials: cfg.trials,
        rows,
    })
}

pub fn write_report(report: &BenchReport, format: OutputFormat, out: &mut dyn Write) -> Result<(), CliError> {
    let with_d = report.rows.iter().any(|r| r.fibonacci_ratio.is_some());
    match format {
        OutputFormat::Text => {
            writeln!(
                out,
                "pair {}:{}, median of {} trials per r",
                report.a, report.b, report.trials
            )?;
            write!(out, "{:>3} {:>5} {:>5} {:>12} {:>8} {:>6} {:>8}", "r", "|a|", "|b|", "ms/align", "B", "A", "C")?;
            if with_d {
                write!(out, " {:>8}", "D")?;
            }
            writeln!(out)?;
            for row in &report.rows {
                write!(
                    out,
                    "{:>3} {:>5} {:>5} {:>12.4} {:>8.2} {:>6.0} {:>8.1}",
                    row.r,
                    row.len_a,
                    row.len_b,
                    row.seconds * 1e3,
                    row.ratio,
                    row.quadratic,
                    row.worst_case
                )?;
                if let Some(d) = row.fibonacci_ratio {
                    write!(out, " {d:>8.2}")?;
                }
                writeln!(out)?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["r", "len_a", "len_b", "seconds", "B", "A", "C"];
            if with_d {
                header.push("D");
            }
            w.write_record(&header)?;
            for row in &report.rows {
                let mut rec = vec![
                    row.r.to_string(),
                    row.len_a.to_string(),
                    row.len_b.to_string(),
                    format!("{:.9}", row.seconds),
                    format!("{:.4}", row.ratio),
                    format!("{}", row.quadratic),
                    format!("{:.4}", row.worst_case),
                ];
                if let Some(d) = row.fibonacci_ratio {
                    rec.push(format!("{d:.4}"));
                }
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_columns() {
        assert_eq!(column_a(1), 1.0);
        assert_eq!(column_a(8), 64.0);
        assert_eq!(column_c(1, 42), 1.0);
        assert_eq!(column_c(8, 42).round(), 135.0);
        // r = 2: 4 (1 + 2 ln 2 / ln 42)
        assert!((column_c(2, 42) - 5.4836).abs() < 1e-3);
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn small_run() {
        let cfg = BenchConfig {
            rmax: 2,
            trials: 1,
            compare_heaps: true,
            min_trial: Duration::ZERO,
            ..BenchConfig::default()
        };
        let report = run_bench(&cfg).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].ratio, 1.0);
        assert_eq!(report.rows[0].fibonacci_ratio, Some(1.0));
        assert_eq!((report.rows[1].len_a, report.rows[1].len_b), (14, 12));
        let mut csv = Vec::new();
        write_report(&report, OutputFormat::Csv, &mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("r,len_a,len_b,seconds,B,A,C,D\n"), "{csv}");
        assert!(run_bench(&BenchConfig { rmax: 0, ..cfg }).is_err());
    }
}
