mod expr;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use circlefree::codec::{Enumerator, ParseError};
use circlefree::diag::{self, Classifier, Decider, DeciderKind, ExternalDecider, Refutation};
use circlefree::exec::{
    self, check_certificate, make_certificate, trace_json, CheckResult, Classification, Goal, TraceCertificate,
};
use circlefree::reals::{modulus_to_digits, DigitExtraction};
use circlefree::reduce::Reduction;
use circlefree::{decode, encode, parse_text, render, Budget, DescriptionNumber, Machine, Verdict};

const OK: u8 = 0;
const FAILURE: u8 = 1;
const UNKNOWN: u8 = 2;
const LOOPING: u8 = 3;
const REFUTED: u8 = 4;
const USAGE: u8 = 64;
const DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "circlefree", version, about = "Turing machines, reductions, diagonal arguments and computable reals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    #[arg(long, default_value_t = 10_000)]
    max_steps: u64,
    #[arg(long)]
    max_configs: Option<usize>,
    #[arg(long)]
    budget_cells: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::steps(self.max_steps);
        if let Some(c) = self.max_configs {
            b = b.with_configs(c);
        }
        if let Some(c) = self.budget_cells {
            b = b.with_cells(c);
        }
        b
    }
}

#[derive(Args, Clone)]
struct MachineArgs {
    /// Machine file in the text format, or `-` for standard input.
    file: String,
    /// Input tape as space-separated symbol names.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine and report its verdict.
    Run {
        #[command(flatten)]
        m: MachineArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
        /// Include the configuration trace in JSON output.
        #[arg(long)]
        trace: bool,
    },
    /// Print the configuration trace as JSON.
    Trace {
        #[command(flatten)]
        m: MachineArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Print the description number of a machine.
    Encode {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the machine with the given description number.
    Decode {
        number: String,
        #[arg(long)]
        json: bool,
    },
    /// List valid description numbers in increasing order.
    Enumerate {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value = "0")]
        start: String,
        /// Also classify each machine on blank tape.
        #[arg(long)]
        sweep: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Halted / provably looping / unknown within the budget.
    Classify {
        #[command(flatten)]
        m: MachineArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Apply a reduction and print the constructed machine.
    Reduce {
        reduction: ReductionName,
        #[command(flatten)]
        m: MachineArgs,
        /// Digit for printing-to-halting.
        #[arg(long, default_value_t = 0)]
        symbol: u8,
        /// Digit count for ndigits-to-halting.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Threshold for omd-to-halting.
        #[arg(long, default_value_t = 1)]
        t: u64,
        #[arg(long)]
        json: bool,
    },
    /// Find a counterexample to a candidate decider.
    Refute {
        kind: KindName,
        /// `builtin:<name>` or `cmd:<program> [args...]`.
        decider: String,
        #[arg(long, default_value_t = 0)]
        symbol: u8,
        #[arg(long, default_value_t = diag::DEFAULT_FUEL)]
        fuel: u64,
        /// Wall-clock seconds per query for external deciders.
        #[arg(long, default_value_t = 10)]
        timeout: u64,
        #[arg(long)]
        json: bool,
    },
    /// Digits of the flipped diagonal.
    Beta {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ClassifierName::Truthful)]
        classifier: ClassifierName,
        #[arg(long, default_value_t = 100)]
        scan_cap: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a real-number expression.
    Real {
        expr: String,
        /// Print approx(n): a rational within 2^-n.
        #[arg(long)]
        approx: Option<u32>,
        /// Extract this many digits.
        #[arg(long)]
        digits: Option<usize>,
        #[arg(long, default_value_t = 10)]
        base: u32,
        #[arg(long, default_value_t = 64)]
        tie_budget: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// Produce a trace certificate for a claim.
    Certify {
        #[command(flatten)]
        m: MachineArgs,
        /// halts | repeats | prints:D | nth:N | halts-without:D
        #[arg(long)]
        goal: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Validate a certificate or refutation (JSON file or `-`).
    Check {
        file: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionName {
    HaltingToPrinting,
    PrintingToHalting,
    NdigitsToHalting,
    HaltingToNdigits,
    OmdToHalting,
    HaltingToOmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindName {
    Halting,
    Printing,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierName {
    Truthful,
    AcceptAll,
    AcceptNone,
}

/// Failure with an exit code and a message for standard error.
struct Fail(u8, String);

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Fail {
        Fail(DATA, e.to_string())
    }
}

type Out = Result<u8, Fail>;

fn read_source(path: &str) -> Result<String, Fail> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Fail(FAILURE, e.to_string()))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Fail(FAILURE, format!("{path}: {e}")))
    }
}

fn load(args: &MachineArgs) -> Result<(Machine, Vec<usize>), Fail> {
    let m = parse_text(&read_source(&args.file)?)?;
    let names: Vec<&str> = args.input.split_whitespace().collect();
    let input = m.tape_from_names(&names).map_err(|e| Fail(DATA, e.to_string()))?;
    Ok((m, input))
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn exec_fail(e: exec::ExecError) -> Fail {
    Fail(FAILURE, e.to_string())
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Halted { .. } => OK,
        Verdict::ProvablyLooping { .. } => LOOPING,
        Verdict::BudgetExhausted => UNKNOWN,
    }
}

fn describe(v: &Verdict) -> String {
    match v {
        Verdict::Halted { steps } => format!("halted after {steps} steps"),
        Verdict::ProvablyLooping { first_repeat_step, period } => {
            format!("loops: configuration at step {first_repeat_step} recurs with period {period}")
        }
        Verdict::BudgetExhausted => "budget exhausted".into(),
    }
}

fn digits_string(ds: &[u8]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_run(m: &MachineArgs, budget: &BudgetArgs, json: bool, trace: bool) -> Out {
    let (machine, input) = load(m)?;
    let b = budget.budget();
    let out = if trace { exec::run_traced(&machine, &input, &b) } else { exec::run(&machine, &input, &b) }
        .map_err(exec_fail)?;
    if json {
        let mut v = json!({ "machine": machine.name(), "verdict": out.verdict, "emitted": out.emitted });
        if let Some(t) = &out.trace {
            v["trace"] = trace_json(&machine, t);
        }
        print_json(&v);
    } else {
        println!("{}", describe(&out.verdict));
        println!("emitted: {}", digits_string(&out.emitted));
    }
    Ok(verdict_code(&out.verdict))
}

fn cmd_trace(m: &MachineArgs, budget: &BudgetArgs) -> Out {
    let (machine, input) = load(m)?;
    let out = exec::run_traced(&machine, &input, &budget.budget()).map_err(exec_fail)?;
    print_json(&trace_json(&machine, out.trace.as_deref().unwrap_or(&[])));
    Ok(verdict_code(&out.verdict))
}

fn parse_number(s: &str) -> Result<DescriptionNumber, Fail> {
    s.trim()
        .parse()
        .map(DescriptionNumber)
        .map_err(|_| Fail(DATA, format!("not a natural number: {s}")))
}

fn cmd_enumerate(count: usize, start: &str, sweep: bool, budget: &BudgetArgs, json: bool) -> Out {
    let start = parse_number(start)?;
    let machines: Vec<(DescriptionNumber, Machine)> = Enumerator::starting_at(start.0).take(count).collect();
    let b = budget.budget();
    let classes: Vec<Option<String>> = machines
        .par_iter()
        .map(|(_, m)| {
            sweep.then(|| match exec::classify(m, &[], &b) {
                Ok(Classification::Halted { .. }) => "halted".to_string(),
                Ok(Classification::ProvablyLooping { .. }) => "looping".to_string(),
                Ok(Classification::Unknown) => "unknown".to_string(),
                Err(_) => "stuck".to_string(),
            })
        })
        .collect();
    if json {
        let rows: Vec<_> = machines
            .iter()
            .zip(&classes)
            .map(|((n, m), c)| {
                json!({ "number": n, "states": m.num_states(), "symbols": m.num_symbols(),
                        "base": m.base(), "convention": m.convention(), "class": c })
            })
            .collect();
        print_json(&rows);
    } else {
        for ((n, m), c) in machines.iter().zip(&classes) {
            let conv = match m.convention() {
                circlefree::Convention::HaltState => "halt-state",
                circlefree::Convention::HaltSymbol => "halt-symbol",
            };
            let mut line = format!("{} states={} symbols={} base={} {conv}", n.0, m.num_states(), m.num_symbols(), m.base());
            if let Some(c) = c {
                line.push(' ');
                line.push_str(c);
            }
            println!("{line}");
        }
    }
    Ok(OK)
}

fn cmd_classify(m: &MachineArgs, budget: &BudgetArgs, json: bool) -> Out {
    let (machine, input) = load(m)?;
    let c = exec::classify(&machine, &input, &budget.budget()).map_err(exec_fail)?;
    if json {
        print_json(&c);
    } else {
        match c {
            Classification::Halted { steps } => println!("halted after {steps} steps"),
            Classification::ProvablyLooping { first_repeat_step, period } => {
                println!("provably looping: step {first_repeat_step} recurs with period {period}")
            },
            Classification::Unknown => println!("unknown within budget"),
        }
    }
    Ok(match c {
        Classification::Halted { .. } => OK,
        Classification::ProvablyLooping { .. } => LOOPING,
        Classification::Unknown => UNKNOWN,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_reduce(name: ReductionName, m: &MachineArgs, symbol: u8, n: usize, t: u64, json: bool) -> Out {
    let (machine, input) = load(m)?;
    let r = match name {
        ReductionName::HaltingToPrinting => Reduction::HaltingToPrinting,
        ReductionName::PrintingToHalting => Reduction::PrintingToHalting { symbol },
        ReductionName::NdigitsToHalting => Reduction::NDigitsToHalting { n },
        ReductionName::HaltingToNdigits => Reduction::HaltingToNDigits { n },
        ReductionName::OmdToHalting => Reduction::OmdToHalting { t },
        ReductionName::HaltingToOmd => Reduction::HaltingToOmd,
    };
    let (q, qx) = r.apply(&machine, &input);
    let names: Vec<&str> = qx.iter().map(|&s| q.symbols()[s].as_str()).collect();
    if json {
        print_json(&json!({ "reduction": r, "machine": render(&q), "number": encode(&q), "input": names }));
    } else {
        print!("{}", render(&q));
        if !names.is_empty() {
            println!("# input: {}", names.join(" "));
        }
    }
    Ok(OK)
}

fn find_decider(kind: DeciderKind, spec: &str, timeout: u64) -> Result<Box<dyn Decider>, Fail> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let all = match kind {
            DeciderKind::Halting => diag::builtin_halting_deciders(),
            DeciderKind::Printing { symbol } => diag::builtin_printing_deciders(symbol),
        };
        let names: Vec<String> = all.iter().map(|d| d.name()).collect();
        return all
            .into_iter()
            .find(|d| d.name() == name || d.name().split_once('-').is_some_and(|(_, rest)| rest == name))
            .ok_or_else(|| Fail(USAGE, format!("unknown builtin `{name}`; available: {}", names.join(", "))));
    }
    if let Some(cmd) = spec.strip_prefix("cmd:") {
        let mut parts = cmd.split_whitespace();
        let program = parts.next().ok_or_else(|| Fail(USAGE, "empty command".into()))?;
        let args: Vec<String> = parts.map(String::from).collect();
        let d = ExternalDecider::spawn(program, &args, kind, std::time::Duration::from_secs(timeout))
            .map_err(|e| Fail(FAILURE, format!("{program}: {e}")))?;
        return Ok(Box::new(d));
    }
    Err(Fail(USAGE, format!("decider must be builtin:<name> or cmd:<program>, got `{spec}`")))
}

fn cmd_refute(kind: KindName, spec: &str, symbol: u8, fuel: u64, timeout: u64, json: bool) -> Out {
    let kind = match kind {
        KindName::Halting => DeciderKind::Halting,
        KindName::Printing => DeciderKind::Printing { symbol },
    };
    let d = find_decider(kind, spec, timeout)?;
    let r = match kind {
        DeciderKind::Halting => diag::refute_halting_decider(d.as_ref(), fuel),
        DeciderKind::Printing { symbol } => diag::refute_printing_decider(d.as_ref(), symbol, fuel),
    }
    .map_err(|e| Fail(FAILURE, e.to_string()))?;
    if json {
        print_json(&r);
    } else {
        println!("decider: {}", r.decider);
        println!("counterexample: n = {} (delay width {})", r.counterexample.0, r.width);
        println!("predicted: {:?}", r.predicted);
        println!("{}", r.narrative);
        println!("certificate: {:?}, {} steps", r.certificate.claim, r.certificate.steps.len());
    }
    Ok(REFUTED)
}

fn cmd_beta(n: usize, classifier: ClassifierName, scan_cap: usize, budget: &BudgetArgs, json: bool) -> Out {
    let b = budget.budget();
    let c: Box<dyn Classifier> = match classifier {
        ClassifierName::Truthful => Box::new(diag::Truthful { digits: n, steps: budget.max_steps }),
        ClassifierName::AcceptAll => Box::new(diag::AcceptAll),
        ClassifierName::AcceptNone => Box::new(diag::AcceptNone),
    };
    match diag::diagonal_digits(c.as_ref(), n, &b, scan_cap) {
        Ok(d) => {
            if json {
                print_json(&d);
            } else {
                println!("{}", digits_string(&d.digits));
            }
            Ok(OK)
        }
        Err(e @ diag::DiagonalError::ClassifierCounterexample { .. }) => {
            println!("{e}");
            Ok(REFUTED)
        }
        Err(e @ diag::DiagonalError::EmptyListExhausted { .. }) => {
            println!("{e}");
            Ok(UNKNOWN)
        }
        Err(e) => Err(Fail(FAILURE, e.to_string())),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_real(src: &str, approx: Option<u32>, digits: Option<usize>, base: u32, tie: usize, budget: &BudgetArgs, json: bool) -> Out {
    let x = expr::Parser::parse(src, budget.budget()).map_err(|e| Fail(DATA, e.0))?;
    let mut code = OK;
    let mut report = serde_json::Map::new();
    if let Some(n) = approx.or(if digits.is_none() { Some(32) } else { None }) {
        let q = x.approx(n).map_err(|e| Fail(FAILURE, e.to_string()))?;
        if !json {
            println!("approx({n}) = {q} ~ {}", q.to_decimal(12));
        }
        report.insert("n".into(), json!(n));
        report.insert("approx".into(), json!(q));
    }
    if let Some(count) = digits {
        if base < 2 {
            return Err(Fail(USAGE, "base must be at least 2".into()));
        }
        let d = modulus_to_digits(&x, count, base, tie).map_err(|e| Fail(FAILURE, e.to_string()))?;
        if !json {
            match &d {
                DigitExtraction::Digits { integer_part, digits } => {
                    println!("digits: {integer_part} . {}", digits_string(digits))
                }
                DigitExtraction::Undetermined { position, digits, low, high } => println!(
                    "undetermined at position {position} after {} digits; interval [{low}, {high}]",
                    digits.len()
                ),
            }
        }
        if matches!(d, DigitExtraction::Undetermined { .. }) {
            code = UNKNOWN;
        }
        report.insert("digits".into(), json!(d));
    }
    if json {
        print_json(&report);
    }
    Ok(code)
}

fn parse_goal(s: &str) -> Result<Goal, Fail> {
    let bad = || Fail(USAGE, format!("bad goal `{s}`"));
    let (head, arg) = s.split_once(':').map_or((s, None), |(h, a)| (h, Some(a)));
    let num = |a: Option<&str>| a.and_then(|a| a.parse::<usize>().ok()).ok_or_else(bad);
    Ok(match head {
        "halts" => Goal::Halts,
        "repeats" => Goal::Repeats,
        "prints" => Goal::PrintsSymbol(num(arg)?.try_into().map_err(|_| bad())?),
        "nth" => Goal::EmitsNthDigit(num(arg)?),
        "halts-without" => Goal::HaltsWithoutPrinting(num(arg)?.try_into().map_err(|_| bad())?),
        _ => return Err(bad()),
    })
}

fn cmd_certify(m: &MachineArgs, goal: &str, budget: &BudgetArgs) -> Out {
    let goal = parse_goal(goal)?;
    let (machine, input) = load(m)?;
    match make_certificate(&machine, &input, goal, &budget.budget()) {
        Ok(c) => {
            println!("{}", c.to_json());
            Ok(OK)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(UNKNOWN)
        }
    }
}

fn cmd_check(file: &str, json: bool) -> Out {
    let src = read_source(file)?;
    let result = if let Ok(c) = TraceCertificate::from_json(&src) {
        check_certificate(&c)
    } else if let Ok(r) = serde_json::from_str::<Refutation>(&src) {
        diag::check_refutation(&r)
    } else {
        return Err(Fail(DATA, "neither a certificate nor a refutation".into()));
    };
    if json {
        print_json(&result);
    } else {
        match &result {
            CheckResult::Valid => println!("valid"),
            CheckResult::Invalid { step, reason } => println!("invalid at step {step}: {reason}"),
            CheckResult::InvalidClaim { reason } => println!("invalid claim: {reason}"),
        }
    }
    Ok(if result.is_valid() { OK } else { FAILURE })
}

fn dispatch(cli: Cli) -> Out {
    match cli.command {
        Command::Run { m, budget, json, trace } => cmd_run(&m, &budget, json, trace),
        Command::Trace { m, budget } => cmd_trace(&m, &budget),
        Command::Encode { file, json } => {
            let n = encode(&parse_text(&read_source(&file)?)?);
            if json {
                print_json(&json!({ "number": n }));
            } else {
                println!("{}", n.0);
            }
            Ok(OK)
        }
        Command::Decode { number, json } => {
            let m = decode(&parse_number(&number)?).map_err(|e| Fail(DATA, e.to_string()))?;
            if json {
                print_json(&json!({ "number": encode(&m), "machine": render(&m) }));
            } else {
                print!("{}", render(&m));
            }
            Ok(OK)
        }
        Command::Enumerate { count, start, sweep, budget, json } => cmd_enumerate(count, &start, sweep, &budget, json),
        Command::Classify { m, budget, json } => cmd_classify(&m, &budget, json),
        Command::Reduce { reduction, m, symbol, n, t, json } => cmd_reduce(reduction, &m, symbol, n, t, json),
        Command::Refute { kind, decider, symbol, fuel, timeout, json } => {
            cmd_refute(kind, &decider, symbol, fuel, timeout, json)
        }
        Command::Beta { n, classifier, scan_cap, budget, json } => cmd_beta(n, classifier, scan_cap, &budget, json),
        Command::Real { expr, approx, digits, base, tie_budget, budget, json } => {
            cmd_real(&expr, approx, digits, base, tie_budget, &budget, json)
        }
        Command::Certify { m, goal, budget } => cmd_certify(&m, &goal, &budget),
        Command::Check { file, json } => cmd_check(&file, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
