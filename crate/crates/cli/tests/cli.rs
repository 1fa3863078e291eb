use std::io::Write;
use std::process::{Command, Output, Stdio};

fn machine(name: &str) -> String {
    format!("{}/../../machines/{name}.tm", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circlefree")).args(args).output().unwrap()
}

fn cli_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_circlefree"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_reports_loops() {
    let o = cli(&["run", &machine("M_SPIN"), "--max-steps", "100"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("loops"));
}

#[test]
fn run_reports_halting_and_budget() {
    assert_eq!(code(&cli(&["run", &machine("BB2")])), 0);
    assert_eq!(code(&cli(&["run", &machine("M_RUN"), "--max-steps", "50"])), 2);
    let o = cli(&["run", &machine("UNARY_SUCC"), "--input", "1 1 1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["verdict"], "halted");
}

#[test]
fn reduced_machine_parses_back() {
    let o = cli(&["reduce", "halting-to-printing", &machine("M_HALT"), "--input", ""]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let m = circlefree::parse_text(&text).unwrap();
    let again = cli_stdin(&["encode", "-"], text.as_bytes());
    assert_eq!(stdout(&again).trim(), circlefree::encode(&m).0.to_string());
}

#[test]
fn refutation_revalidates_through_check() {
    let o = cli(&["refute", "halting", "builtin:always-yes", "--json"]);
    assert_eq!(code(&o), 4);
    let checked = cli_stdin(&["check", "-"], &o.stdout);
    assert_eq!(code(&checked), 0);
    assert_eq!(stdout(&checked).trim(), "valid");
}

#[test]
fn tampered_certificate_fails_check() {
    let o = cli(&["certify", &machine("BB2"), "--goal", "halts"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o).replacen("\"t\":6", "\"t\":5", 1);
    assert_ne!(code(&cli_stdin(&["check", "-"], text.as_bytes())), 0);
}

#[test]
fn decode_and_encode_round_trip() {
    let o = cli(&["decode", "90"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&cli_stdin(&["encode", "-"], &o.stdout)).trim(), "90");
}

#[test]
fn enumerate_is_deterministic() {
    let a = cli(&["enumerate", "--count", "40", "--sweep"]);
    let b = cli(&["enumerate", "--count", "40", "--sweep"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 40);
}

#[test]
fn carry_sum_is_undetermined() {
    let o = cli(&["real", "add(const(2,10), const(7,10))", "--digits", "1", "--tie-budget", "64"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("undetermined at position 1"));
}

#[test]
fn beta_outputs_and_refutes() {
    let o = cli(&["beta", "--n", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).split_whitespace().count(), 5);
    assert_eq!(code(&cli(&["beta", "--classifier", "accept-all"])), 4);
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(code(&cli(&["frobnicate"])), 64);
    assert_eq!(code(&cli(&["refute", "halting", "nonsense"])), 64);
    assert_eq!(code(&cli_stdin(&["run", "-"], b"machine x\nrule q0 _: goto nowhere\n")), 65);
    assert_eq!(code(&cli(&["decode", "abc"])), 65);
}

#[test]
fn json_outputs_follow_their_schemas() {
    let o = cli(&["classify", &machine("M_SPIN"), "--json"]);
    let c: circlefree::exec::Classification = serde_json::from_slice(&o.stdout).unwrap();
    assert!(matches!(c, circlefree::exec::Classification::ProvablyLooping { .. }));
    let o = cli(&["refute", "printing", "builtin:within-100", "--json"]);
    let r: circlefree::diag::Refutation = serde_json::from_slice(&o.stdout).unwrap();
    assert!(circlefree::diag::check_refutation(&r).is_valid());
}
