use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ntwfsm::random::CaseParams;
use ntwfsm::Direction;
use ntwfsm_cli::bench::{run_bench, BenchConfig};
use ntwfsm_cli::commands::{cmd_align, cmd_align_batch, cmd_bestpath, cmd_transduce, cmd_validate, AlignArgs, SearchArgs};
use ntwfsm_cli::oracle_check::{run_oracle_check, trellis_solver, OracleCheckConfig};
use ntwfsm_cli::{bench, load_machine, oracle_check, parse_tape_list, CliError, OutputFormat};

/// Best paths, transductions and word alignments with n-tape weighted
/// finite-state machines.
#[derive(Parser, Debug)]
#[command(name = "ntwfsm", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Machine file
    #[arg(long, global = true)]
    machine: Option<PathBuf>,
    /// Comma-separated input tapes, numbered from 1 (default: 1..k for k input strings)
    #[arg(long, global = true)]
    input_tapes: Option<String>,
    /// Search direction; overrides the one implied by a tropical machine's semiring
    #[arg(long, global = true, value_enum)]
    direction: Option<DirectionArg>,
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the best path accepting the input strings
    Bestpath {
        inputs: Vec<String>,
    },
    /// Print the output tapes and weight of the best path
    Transduce {
        inputs: Vec<String>,
    },
    /// Align two words with the built-in aligner
    Align {
        a: Option<String>,
        b: Option<String>,
        /// Gap symbol in the aligned words
        #[arg(long, default_value_t = '-')]
        marker: char,
        /// Never follow an insertion directly by a deletion
        #[arg(long)]
        forbid_id: bool,
        /// Tab-separated word pairs, one per line (`-` for stdin)
        #[arg(long, conflicts_with_all = ["a", "b"])]
        batch: Option<PathBuf>,
    },
    /// Time alignments of a word pair repeated 1..=rmax times
    Bench {
        #[arg(long, default_value_t = 8)]
        rmax: usize,
        /// Word pair as `a:b`
        #[arg(long, default_value = "gemacht:machen")]
        pair: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Minimum wall time per trial in milliseconds
        #[arg(long, default_value_t = 20)]
        min_trial_ms: u64,
        /// Add column D: the same ratios with the Fibonacci heap
        #[arg(long)]
        compare_heaps: bool,
    },
    /// Compare the search with intersection + Dijkstra on random machines
    OracleCheck {
        #[arg(long, default_value_t = 300)]
        cases: usize,
        #[arg(long, default_value_t = 6)]
        max_states: usize,
        #[arg(long, default_value_t = 20)]
        max_trans: usize,
        /// Maximum number of input tapes
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// Check a machine file
    Validate,
}

fn require_machine(g: &Global) -> Result<&Path, CliError> {
    g.machine
        .as_deref()
        .ok_or_else(|| CliError::Usage("--machine is required for this command".into()))
}

fn search_args(g: &Global, inputs: Vec<String>) -> Result<SearchArgs, CliError> {
    Ok(SearchArgs {
        inputs,
        input_tapes: g.input_tapes.as_deref().map(parse_tape_list).transpose()?,
        direction: g.direction.map(|d| match d {
            DirectionArg::Min => Direction::Min,
            DirectionArg::Max => Direction::Max,
        }),
        format: format(g),
    })
}

fn format(g: &Global) -> OutputFormat {
    match g.format {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Csv => OutputFormat::Csv,
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let g = &cli.global;
    match cli.command {
        Command::Bestpath { inputs } => {
            let machine = load_machine(require_machine(g)?)?;
            cmd_bestpath(machine, &search_args(g, inputs)?, out)
        }
        Command::Transduce { inputs } => {
            let machine = load_machine(require_machine(g)?)?;
            cmd_transduce(machine, &search_args(g, inputs)?, out)
        }
        Command::Align {
            a,
            b,
            marker,
            forbid_id,
            batch,
        } => {
            let args = AlignArgs {
                marker,
                forbid_insert_then_delete: forbid_id,
                format: format(g),
            };
            match (batch, a, b) {
                (Some(path), _, _) if path.as_os_str() == "-" => cmd_align_batch(&mut io::stdin().lock(), &args, out),
                (Some(path), _, _) => {
                    let file = File::open(&path).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    cmd_align_batch(&mut BufReader::new(file), &args, out)
                }
                (None, Some(a), Some(b)) => cmd_align(&a, &b, &args, out),
                _ => Err(CliError::Usage("align needs two words or --batch FILE".into())),
            }
        }
        Command::Bench {
            rmax,
            pair,
            trials,
            min_trial_ms,
            compare_heaps,
        } => {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("--pair `{pair}` is not of the form a:b")))?;
            let cfg = BenchConfig {
                rmax,
                a: a.into(),
                b: b.into(),
                trials,
                compare_heaps,
                min_trial: Duration::from_millis(min_trial_ms),
            };
            bench::write_report(&run_bench(&cfg)?, format(g), out)
        }
        Command::OracleCheck {
            cases,
            max_states,
            max_trans,
            arity,
        } => {
            if max_states == 0 || max_trans == 0 || arity == 0 {
                return Err(CliError::Usage("--max-states, --max-trans and --arity must be positive".into()));
            }
            let cfg = OracleCheckConfig {
                seed: g.seed,
                cases,
                params: CaseParams {
                    max_arity: arity,
                    max_states,
                    max_transitions: max_trans,
                    ..CaseParams::default()
                },
            };
            let report = run_oracle_check(&cfg, trellis_solver);
            oracle_check::write_report(&report, out)?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failed("search and oracle disagree".into()))
            }
        }
        Command::Validate => {
            let machine = load_machine(require_machine(g)?)?;
            let tapes = g.input_tapes.as_deref().map(parse_tape_list).transpose()?;
            cmd_validate(&machine, tapes.as_deref(), out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ntwfsm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
