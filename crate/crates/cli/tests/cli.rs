use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use ntwfsm::{build_aligner, AlignerSpec, AnyMachine};
use ntwfsm_cli::oracle_check::{run_oracle_check, OracleCheckConfig};
use ntwfsm_cli::{load_machine, oracle_check};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ntwfsm"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ntwfsm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn shipped_aligner_is_the_built_one() {
    let shipped = load_machine(&data("aligner.ntwfsm")).unwrap();
    assert_eq!(shipped, AnyMachine::TropicalMin(build_aligner(&AlignerSpec::default()).unwrap()));
}

#[test]
fn bestpath_with_aligner_file() {
    let machine = data("aligner.ntwfsm");
    let o = run(&["--machine", machine.to_str().unwrap(), "bestpath", "swum", "swim"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().last(), Some("weight\t2"));
    assert!(text.contains("tape5\tKKDIK\n"), "{text}");
}

#[test]
fn transduce_with_explicit_tapes() {
    let machine = data("aligner.ntwfsm");
    // read the words from tapes 2 and 1: the roles of a and b swap
    let o = run(&[
        "--machine",
        machine.to_str().unwrap(),
        "--input-tapes",
        "2,1",
        "transduce",
        "machen",
        "gemacht",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.ends_with("\t5\n"), "{text}");
    let fields: Vec<&str> = text.trim_end().split('\t').collect();
    assert_eq!(fields[0].replace('-', ""), "gemacht");
    assert_eq!(fields[1].replace('-', ""), "machen");
}

#[test]
fn exit_codes() {
    let machine = data("aligner.ntwfsm");
    let m = machine.to_str().unwrap();
    assert_eq!(run(&["--machine", "/nonexistent/file", "bestpath", "a"]).status.code(), Some(2));
    assert_eq!(run(&["bestpath", "a"]).status.code(), Some(2));
    assert_eq!(run(&["--machine", m, "--input-tapes", "0", "bestpath", "a"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let broken = temp_file("broken.ntwfsm", "ntwfsm n=1 semiring=tropical-min\nt 0 1 a b 1\n");
    assert_eq!(run(&["--machine", broken.to_str().unwrap(), "validate"]).status.code(), Some(3));

    let single = temp_file("single.ntwfsm", "ntwfsm n=1 semiring=tropical-min\ni 0\nf 1\nt 0 1 a 1\n");
    let s = single.to_str().unwrap();
    let o = run(&["--machine", s, "bestpath", "b"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no accepting path"));
    assert_eq!(run(&["--machine", s, "bestpath", "a"]).status.code(), Some(0));

    let cyclic = temp_file(
        "cyclic.ntwfsm",
        "ntwfsm n=1 semiring=tropical-min eps-mode\ni 0\nf 1\nt 0 1 a 1\nt 1 1 <eps> 0\n",
    );
    let c = cyclic.to_str().unwrap();
    assert_eq!(run(&["--machine", c, "bestpath", "a"]).status.code(), Some(3));
    assert_eq!(run(&["--machine", c, "validate"]).status.code(), Some(3));
}

#[test]
fn direction_flag() {
    let prob = temp_file("prob.ntwfsm", "ntwfsm n=1 semiring=prob-max\ni 0\nf 0\nt 0 0 a 0.5\n");
    let p = prob.to_str().unwrap();
    assert_eq!(run(&["--machine", p, "--direction", "min", "bestpath", "a"]).status.code(), Some(2));
    let o = run(&["--machine", p, "--direction", "max", "transduce", "aa"]);
    assert_eq!(stdout(&o), "0.25\n");

    let two = temp_file(
        "two.ntwfsm",
        "ntwfsm n=2 semiring=tropical-min\ni 0\nf 1\nt 0 1 a cheap 1\nt 0 1 a dear 7\n",
    );
    let t = two.to_str().unwrap();
    assert_eq!(stdout(&run(&["--machine", t, "transduce", "a"])), "cheap\t1\n");
    assert_eq!(stdout(&run(&["--machine", t, "--direction", "max", "transduce", "a"])), "dear\t7\n");
}

#[test]
fn align_examples() {
    assert_eq!(stdout(&run(&["align", "gemacht", "machen"])), "gemacht--\t--mach-en\tDDKKKKDII\t5\n");
    assert_eq!(stdout(&run(&["align", "a", "a"])), "a\ta\tK\t0\n");
    assert_eq!(stdout(&run(&["align", "--marker", "_", "swum", "swim"])), "swu_m\tsw_im\tKKDIK\t2\n");
    assert_eq!(stdout(&run(&["align", "--forbid-id", "swum", "swim"])), "swu-m\tsw-im\tKKDIK\t2\n");
    assert_eq!(run(&["align", "a-b", "ab"]).status.code(), Some(2));
    assert_eq!(run(&["align", "onlyone"]).status.code(), Some(2));
}

#[test]
fn align_batch_from_file_and_stdin() {
    let pairs = "swum\tswim\ngemacht\tmachen\n";
    let file = temp_file("pairs.tsv", pairs);
    let o = run(&["align", "--batch", file.to_str().unwrap()]);
    let weights: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.rsplit('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(weights, ["2", "5"]);

    let mut child = bin()
        .args(["align", "--batch", "-", "--format", "csv"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(pairs.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "swu-m,sw-im,KKDIK,2\ngemacht--,--mach-en,DDKKKKDII,5\n");
}

#[test]
fn validate_aligner() {
    let machine = data("aligner.ntwfsm");
    let o = run(&["--machine", machine.to_str().unwrap(), "--input-tapes", "1,2", "validate"]);
    assert_eq!(stdout(&o), "ok\tsemiring=tropical-min\tn=5\tstates=1\ttransitions=3\n");
    // every tape an input tape: the insert and delete transitions still read something
    assert_eq!(run(&["--machine", machine.to_str().unwrap(), "validate"]).status.code(), Some(0));
}

#[test]
fn bench_output() {
    let o = run(&["bench", "--rmax", "2", "--trials", "1", "--min-trial-ms", "0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,len_a,len_b,seconds,B,A,C");
    assert!(lines[1].starts_with("1,7,6,"));
    assert!(lines[1].ends_with(",1.0000,1,1.0000"), "{}", lines[1]);
    assert!(lines[2].starts_with("2,14,12,"));
    assert!(lines[2].ends_with(",4,5.4836"), "{}", lines[2]);
    assert_eq!(run(&["bench", "--rmax", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "--pair", "nocolon"]).status.code(), Some(2));
}

#[test]
fn oracle_check_is_deterministic() {
    let a = run(&["oracle-check", "--seed", "4", "--cases", "40"]);
    let b = run(&["oracle-check", "--seed", "4", "--cases", "40"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("40 cases, "));
    assert!(stdout(&a).ends_with(", 0 mismatches\n"));
}

#[test]
fn injected_fault_is_caught() {
    fn off_by_one(case: &ntwfsm::random::Case) -> Result<Option<i64>, ntwfsm::SearchError> {
        oracle_check::trellis_solver(case).map(|w| w.map(|w| w + 1))
    }
    let cfg = OracleCheckConfig {
        seed: 1,
        cases: 60,
        ..OracleCheckConfig::default()
    };
    let report = run_oracle_check(&cfg, off_by_one);
    assert!(!report.passed());
    let first = report.first_mismatch.as_ref().unwrap();
    let mut text = Vec::new();
    oracle_check::write_report(&report, &mut text).unwrap();
    let text = String::from_utf8(text).unwrap();
    assert!(text.contains(&format!("first mismatch: seed 1 case {}", first.index)), "{text}");
    assert!(text.contains("ntwfsm n="), "{text}");
    // the reported case regenerates from seed and index alone
    let again = oracle_check::generate_case(1, first.index, &cfg.params);
    assert_eq!(again.machine, first.case.machine);
}
