//! `bestpath`, `transduce`, `align` and `validate`.

use std::io::{BufRead, Write};

use ntwfsm::{
    fsm_viterbi, with_machine, Aligner, AlignerSpec, Alignment, AnyMachine, BestPath, Direction, Machine,
    Semiring, SearchError, StringTuple, ALIGNED_EPSILON,
};

use crate::{CliError, OutputFormat};

/// Shared options of the machine-driven commands.
#[derive(Clone, Debug, Default)]
pub struct SearchArgs {
    pub inputs: Vec<String>,
    /// 0-based; defaults to the first `inputs.len()` tapes.
    pub input_tapes: Option<Vec<usize>>,
    pub direction: Option<Direction>,
    pub format: OutputFormat,
}

impl SearchArgs {
    fn tapes(&self) -> Vec<usize> {
        self.input_tapes
            .clone()
            .unwrap_or_else(|| (0..self.inputs.len()).collect())
    }
}

/// Re-types a tropical machine so the search runs in the requested direction.
/// Weights are kept; only the order (and the matching zero) changes.
pub fn with_direction(machine: AnyMachine, direction: Option<Direction>) -> Result<AnyMachine, CliError> {
    Ok(match (machine, direction) {
        (AnyMachine::TropicalMin(m), Some(Direction::Max)) => {
            AnyMachine::TropicalMax(m.map_weights(|w| if w == i64::MAX { i64::MIN } else { w }))
        }
        (AnyMachine::TropicalMax(m), Some(Direction::Min)) => {
            AnyMachine::TropicalMin(m.map_weights(|w| if w == i64::MIN { i64::MAX } else { w }))
        }
        (AnyMachine::ProbMax(_), Some(Direction::Min)) => {
            return Err(CliError::Usage("a prob-max machine can only be searched with --direction max".into()))
        }
        (m, _) => m,
    })
}

fn display(s: &str) -> String {
    s.replace(ALIGNED_EPSILON, "-")
}

fn search<S: Semiring>(m: &Machine<S>, args: &SearchArgs) -> Result<BestPath<S::Weight>, CliError> {
    let tapes = args.tapes();
    if tapes.len() != args.inputs.len() {
        return Err(CliError::Usage(format!(
            "{} input strings for {} input tapes",
            args.inputs.len(),
            tapes.len()
        )));
    }
    Ok(fsm_viterbi(m, &StringTuple::new(&args.inputs), &tapes)?)
}

fn write_path<S: Semiring>(
    m: &Machine<S>,
    path: &BestPath<S::Weight>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let transitions = path
        .transitions
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let weight = S::format_weight(path.weight);
    match format {
        OutputFormat::Text => {
            writeln!(out, "start\t{}", path.start)?;
            writeln!(out, "end\t{}", path.end(m))?;
            writeln!(out, "transitions\t{transitions}")?;
            for (i, tape) in path.tapes.iter().enumerate() {
                writeln!(out, "tape{}\t{}", i + 1, display(tape))?;
            }
            writeln!(out, "weight\t{weight}")?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["start".to_string(), "end".into(), "transitions".into()];
            header.extend((1..=path.tapes.len()).map(|i| format!("tape{i}")));
            header.push("weight".into());
            w.write_record(&header)?;
            let mut row = vec![path.start.to_string(), path.end(m).to_string(), transitions];
            row.extend(path.tapes.iter().map(|t| display(t)));
            row.push(weight);
            w.write_record(&row)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_bestpath(machine: AnyMachine, args: &SearchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let machine = with_direction(machine, args.direction)?;
    with_machine!(&machine, m => {
        let path = search(m, args)?;
        write_path(m, &path, args.format, out)
    })
}

pub fn cmd_transduce(machine: AnyMachine, args: &SearchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let machine = with_direction(machine, args.direction)?;
    let fields = with_machine!(&machine, m => transduction_fields(m, args)?);
    write_row(&fields, args.format, out)
}

/// Output tapes in tape order, then the weight.
fn transduction_fields<S: Semiring>(m: &Machine<S>, args: &SearchArgs) -> Result<Vec<String>, CliError> {
    let path = search(m, args)?;
    let mut fields: Vec<String> = m
        .output_tapes(&args.tapes())
        .into_iter()
        .map(|t| display(&path.tapes[t]))
        .collect();
    fields.push(S::format_weight(path.weight));
    Ok(fields)
}

fn write_row(fields: &[String], format: OutputFormat, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        OutputFormat::Text => writeln!(out, "{}", fields.join("\t"))?,
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(fields)?;
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct AlignArgs {
    pub marker: char,
    pub forbid_insert_then_delete: bool,
    pub format: OutputFormat,
}

impl AlignArgs {
    pub fn aligner(&self) -> Result<Aligner, CliError> {
        Ok(Aligner::new(AlignerSpec {
            marker: self.marker,
            forbid_insert_then_delete: self.forbid_insert_then_delete,
            ..AlignerSpec::default()
        })?)
    }
}

fn alignment_fields(a: &Alignment) -> [String; 4] {
    [a.a.clone(), a.b.clone(), a.ops.clone(), a.weight.to_string()]
}

pub fn cmd_align(a: &str, b: &str, args: &AlignArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let aligned = args.aligner()?.align(a, b)?;
    write_row(&alignment_fields(&aligned), args.format, out)
}

/// One tab-separated pair per line; blank lines are skipped. Output rows are
/// written as each pair is aligned.
pub fn cmd_align_batch(input: &mut dyn BufRead, args: &AlignArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let aligner = args.aligner()?;
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [a, b] = fields[..] else {
            return Err(CliError::Usage(format!("line {}: expected two tab-separated words", n + 1)));
        };
        let aligned = aligner.align(a, b).map_err(|e| match CliError::from(e) {
            CliError::Usage(msg) => CliError::Usage(format!("line {}: {msg}", n + 1)),
            other => other,
        })?;
        write_row(&alignment_fields(&aligned), args.format, out)?;
    }
    Ok(())
}

/// Structural checks; in ε-mode also looks for ε-cycles.
pub fn cmd_validate(machine: &AnyMachine, input_tapes: Option<&[usize]>, out: &mut dyn Write) -> Result<(), CliError> {
    let all: Vec<usize> = (0..machine.arity()).collect();
    let tapes = input_tapes.unwrap_or(&all);
    machine.validate(tapes, machine.eps_mode())?;
    if let Some(state) = with_machine!(machine, m => m.find_epsilon_cycle(tapes)) {
        return Err(SearchError::EpsilonCycle { state }.into());
    }
    let (states, transitions) = with_machine!(machine, m => (m.num_states(), m.num_transitions()));
    writeln!(
        out,
        "ok\tsemiring={}\tn={}\tstates={}\ttransitions={}",
        machine.semiring_name(),
        machine.arity(),
        states,
        transitions
    )?;
    Ok(())
}
