//! Candidate halting/printing deciders and the refuter that defeats them
//! with a delay machine built to do the opposite of what was predicted.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CandidateError, Fuel};
use crate::codec::{encode, render, DescriptionNumber};
use crate::exec::{
    check_certificate, event_step, make_certificate, run, Budget, CheckResult, Claim, Event, Goal,
    TraceCertificate, Verdict,
};
use crate::machine::{Builder, Convention, Machine, Move, Rule, Sym};
use crate::reduce::OracleAnswer;

/// Which question a decider claims to answer about (machine, input).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DeciderKind {
    Halting,
    /// Does the machine ever emit this digit?
    Printing { symbol: u8 },
}

impl fmt::Display for DeciderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeciderKind::Halting => write!(f, "halting"),
            DeciderKind::Printing { symbol } => write!(f, "printing({symbol})"),
        }
    }
}

pub trait Decider: Send + Sync {
    fn name(&self) -> String;
    fn kind(&self) -> DeciderKind;
    fn decide(&self, m: &Machine, input: &[Sym], fuel: &mut Fuel) -> Result<OracleAnswer, CandidateError>;
}

/// Fallback answer for heuristics that cannot tell.
#[derive(Clone, Copy, Debug)]
enum Rule0 {
    Always(bool),
    /// Yes iff the event is seen within the step budget.
    Bounded(u64),
    /// Loop detection within the budget; `default` when inconclusive.
    Looping { budget: u64, default: bool },
    /// Yes iff the description number is even.
    EvenNumber,
    /// Yes iff the machine has at most this many states.
    FewStates(usize),
    /// Yes iff the input has even length.
    EvenInput,
}

struct Builtin {
    kind: DeciderKind,
    rule: Rule0,
}

fn event_of(kind: DeciderKind) -> Event {
    match kind {
        DeciderKind::Halting => Event::Halt,
        DeciderKind::Printing { symbol } => Event::Emit(symbol),
    }
}

impl Decider for Builtin {
    fn name(&self) -> String {
        let tag = match self.kind {
            DeciderKind::Halting => "halts".to_string(),
            DeciderKind::Printing { symbol } => format!("prints{symbol}"),
        };
        match self.rule {
            Rule0::Always(true) => format!("{tag}-always-yes"),
            Rule0::Always(false) => format!("{tag}-always-no"),
            Rule0::Bounded(b) => format!("{tag}-within-{b}"),
            Rule0::Looping { budget, default } => {
                format!("{tag}-loopcheck-{budget}-{}", if default { "yes" } else { "no" })
            }
            Rule0::EvenNumber => format!("{tag}-even-number"),
            Rule0::FewStates(k) => format!("{tag}-at-most-{k}-states"),
            Rule0::EvenInput => format!("{tag}-even-input"),
        }
    }

    fn kind(&self) -> DeciderKind {
        self.kind
    }

    fn decide(&self, m: &Machine, input: &[Sym], fuel: &mut Fuel) -> Result<OracleAnswer, CandidateError> {
        let yes = match self.rule {
            Rule0::Always(b) => b,
            Rule0::Bounded(budget) => {
                fuel.spend(budget)?;
                event_step(m, input, event_of(self.kind), budget).is_some()
            }
            Rule0::Looping { budget, default } => {
                fuel.spend(budget)?;
                match run(m, input, &Budget::steps(budget)) {
                    Err(_) => false,
                    Ok(out) => {
                        let seen = match self.kind {
                            DeciderKind::Halting => matches!(out.verdict, Verdict::Halted { .. }),
                            DeciderKind::Printing { symbol } => out.emitted.contains(&symbol),
                        };
                        match out.verdict {
                            _ if seen => true,
                            Verdict::Halted { .. } | Verdict::ProvablyLooping { .. } => false,
                            _ => default,
                        }
                    }
                }
            }
            Rule0::EvenNumber => {
                let n = encode(m);
                fuel.spend(n.0.bits().max(1))?;
                !n.0.bit(0)
            }
            Rule0::FewStates(k) => m.num_states() <= k,
            Rule0::EvenInput => input.len().is_multiple_of(2),
        };
        Ok(OracleAnswer::from_bool(yes))
    }
}

fn builtins(kind: DeciderKind) -> Vec<Box<dyn Decider>> {
    let rules = [
        Rule0::Always(true),
        Rule0::Always(false),
        Rule0::Bounded(10),
        Rule0::Bounded(100),
        Rule0::Bounded(1000),
        Rule0::Bounded(10_000),
        Rule0::Looping { budget: 100, default: true },
        Rule0::Looping { budget: 100, default: false },
        Rule0::Looping { budget: 5000, default: true },
        Rule0::Looping { budget: 5000, default: false },
        Rule0::EvenNumber,
        Rule0::FewStates(2),
        Rule0::FewStates(6),
        Rule0::EvenInput,
    ];
    rules
        .into_iter()
        .map(|rule| Box::new(Builtin { kind, rule }) as Box<dyn Decider>)
        .collect()
}

pub fn builtin_halting_deciders() -> Vec<Box<dyn Decider>> {
    builtins(DeciderKind::Halting)
}

pub fn builtin_printing_deciders(symbol: u8) -> Vec<Box<dyn Decider>> {
    builtins(DeciderKind::Printing { symbol })
}

/// Decider backed by a child process. Each query writes the machine text,
/// a line `input: <symbols>` and a line `.`; the process answers with a
/// line `yes` or `no`.
pub struct ExternalDecider {
    name: String,
    kind: DeciderKind,
    timeout: Duration,
    io: Mutex<(Child, ChildStdin, Receiver<String>)>,
}

impl ExternalDecider {
    pub fn spawn(command: &str, args: &[String], kind: DeciderKind, timeout: Duration) -> std::io::Result<Self> {
        let mut child = Command::new(command)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(ExternalDecider {
            name: format!("external:{command}"),
            kind,
            timeout,
            io: Mutex::new((child, stdin, rx)),
        })
    }
}

impl Drop for ExternalDecider {
    fn drop(&mut self) {
        if let Ok(io) = self.io.get_mut() {
            let _ = io.0.kill();
            let _ = io.0.wait();
        }
    }
}

impl Decider for ExternalDecider {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn kind(&self) -> DeciderKind {
        self.kind
    }

    fn decide(&self, m: &Machine, input: &[Sym], _fuel: &mut Fuel) -> Result<OracleAnswer, CandidateError> {
        let mut io = self.io.lock().map_err(|_| CandidateError::Failed("poisoned".into()))?;
        let names: Vec<&str> = input.iter().map(|&s| m.symbols()[s].as_str()).collect();
        let request = format!("{}input: {}\n.\n", render(m), names.join(" "));
        io.1
            .write_all(request.as_bytes())
            .and_then(|_| io.1.flush())
            .map_err(|e| CandidateError::Failed(e.to_string()))?;
        let line = io.2.recv_timeout(self.timeout).map_err(|e| match e {
            mpsc::RecvTimeoutError::Timeout => CandidateError::Timeout,
            mpsc::RecvTimeoutError::Disconnected => CandidateError::Failed("decider exited".into()),
        })?;
        match line.trim().to_ascii_lowercase().as_str() {
            "yes" => Ok(OracleAnswer::Yes),
            "no" => Ok(OracleAnswer::No),
            other => Err(CandidateError::Failed(format!("unexpected answer {other:?}"))),
        }
    }
}

/// Largest counter width tried by the refuters.
pub const MAX_DELAY_WIDTH: usize = 14;

/// Step budget for certifying the counterexample's behaviour.
pub const CERTIFY_STEPS: u64 = 1 << 20;

/// What the counterexample does once its delay has run out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ending {
    /// Spin in place forever.
    Loop,
    Halt,
    /// Emit the digit, then halt.
    Emit(u8),
}

/// Delay machine: writes a wall left of the input, fills `width` counter
/// cells with ones further left, counts the binary counter down to zero
/// and then performs `ending`. Its input is ignored.
pub fn delay_machine(width: usize, ending: Ending) -> Machine {
    let mut b = Builder::new(format!("delay{width}-{ending:?}").to_lowercase(), Convention::HaltState);
    b.base(2);
    let zero = b.symbol("0");
    let one = b.symbol("1");
    let wall = b.symbol("|");
    let c0 = b.symbol("c0");
    let c1 = b.symbol("c1");
    let start = b.state("start");
    let put_wall = b.state("wall");
    let fills: Vec<_> = (1..=width).map(|i| b.state(&format!("fill{i}"))).collect();
    let ret = b.state("ret");
    let dec = b.state("dec");
    let done = b.state("done");
    b.set_start(start);
    b.rule_all(start, Rule { write: None, emit: None, mv: Move::Left, next: put_wall });
    let after_wall = fills.first().copied().unwrap_or(done);
    b.rule_all(put_wall, Rule { write: Some(wall), emit: None, mv: Move::Left, next: after_wall });
    for (i, &f) in fills.iter().enumerate() {
        let (mv, next) = match fills.get(i + 1) {
            Some(&n) => (Move::Left, n),
            None => (Move::Right, ret),
        };
        b.rule_all(f, Rule { write: Some(c1), emit: None, mv, next });
    }
    for s in [c0, c1] {
        b.rule(ret, s, Rule { write: None, emit: None, mv: Move::Right, next: ret });
    }
    b.rule(ret, wall, Rule { write: None, emit: None, mv: Move::Left, next: dec });
    b.rule(dec, c1, Rule { write: Some(c0), emit: None, mv: Move::Right, next: ret });
    b.rule(dec, c0, Rule { write: Some(c1), emit: None, mv: Move::Left, next: dec });
    for s in [0, zero, one, wall] {
        b.rule(dec, s, Rule::goto(done));
    }
    match ending {
        Ending::Loop => {
            b.rule_all(done, Rule::goto(done));
        }
        Ending::Halt => {}
        Ending::Emit(d) => {
            b.base(2.max(d as u32 + 1));
            let stop = b.state("stop");
            b.rule_all(done, Rule { write: None, emit: Some(d), mv: Move::Stay, next: stop });
        }
    }
    b.build().expect("delay machine is well formed")
}

/// The machine's own description number as a tape of `0`/`1` symbols.
pub fn self_input(m: &Machine) -> Vec<Sym> {
    let zero = m.symbol_index("0").expect("alphabet has 0");
    let one = m.symbol_index("1").expect("alphabet has 1");
    encode(m)
        .binary_digits()
        .into_iter()
        .map(|d| if d == 0 { zero } else { one })
        .collect()
}

/// A counterexample: the decider's answer on (q, description of q) and a
/// certificate that q does the opposite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Refutation {
    pub decider: String,
    pub kind: DeciderKind,
    pub width: usize,
    pub counterexample: DescriptionNumber,
    pub predicted: OracleAnswer,
    pub certificate: TraceCertificate,
    pub narrative: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RefuteError {
    #[error("decider {decider} failed on width {width}: {error}")]
    Candidate { decider: String, width: usize, error: CandidateError },
    #[error("decider {0} agreed with every delay machine tried")]
    Escaped(String),
    #[error("certificate could not be produced: {0}")]
    Certify(String),
}

/// Ending that contradicts `answer`, and the goal certifying it.
fn contradiction(kind: DeciderKind, answer: OracleAnswer) -> (Ending, Goal) {
    match (kind, answer) {
        (DeciderKind::Halting, OracleAnswer::Yes) => (Ending::Loop, Goal::Repeats),
        (DeciderKind::Halting, OracleAnswer::No) => (Ending::Halt, Goal::Halts),
        (DeciderKind::Printing { symbol }, OracleAnswer::Yes) => (Ending::Halt, Goal::HaltsWithoutPrinting(symbol)),
        (DeciderKind::Printing { symbol }, OracleAnswer::No) => (Ending::Emit(symbol), Goal::PrintsSymbol(symbol)),
    }
}

fn refute(d: &dyn Decider, kind: DeciderKind, fuel: u64) -> Result<Refutation, RefuteError> {
    for width in 0..=MAX_DELAY_WIDTH {
        for baked in [OracleAnswer::Yes, OracleAnswer::No] {
            let (ending, goal) = contradiction(kind, baked);
            let q = delay_machine(width, ending);
            let input = self_input(&q);
            let answer = d
                .decide(&q, &input, &mut Fuel::new(fuel))
                .map_err(|error| RefuteError::Candidate { decider: d.name(), width, error })?;
            if answer != baked {
                continue;
            }
            let certificate = make_certificate(&q, &input, goal, &Budget::steps(CERTIFY_STEPS))
                .map_err(|e| RefuteError::Certify(e.reason))?;
            let narrative = match (kind, answer) {
                (DeciderKind::Halting, OracleAnswer::Yes) => "predicted halting, but the machine repeats a configuration",
                (DeciderKind::Halting, OracleAnswer::No) => "predicted running forever, but the machine halts",
                (DeciderKind::Printing { .. }, OracleAnswer::Yes) => "predicted printing, but the machine halts without it",
                (DeciderKind::Printing { .. }, OracleAnswer::No) => "predicted never printing, but the machine prints",
            };
            return Ok(Refutation {
                decider: d.name(),
                kind,
                width,
                counterexample: encode(&q),
                predicted: answer,
                certificate,
                narrative: narrative.to_string(),
            });
        }
    }
    Err(RefuteError::Escaped(d.name()))
}

/// Searches the delay-machine family for a machine q on which `d`'s
/// answer about (q, description of q) is wrong.
pub fn refute_halting_decider(d: &dyn Decider, fuel: u64) -> Result<Refutation, RefuteError> {
    refute(d, DeciderKind::Halting, fuel)
}

pub fn refute_printing_decider(d: &dyn Decider, symbol: u8, fuel: u64) -> Result<Refutation, RefuteError> {
    refute(d, DeciderKind::Printing { symbol }, fuel)
}

/// Independent check: the certificate replays and its claim contradicts
/// the recorded prediction.
pub fn check_refutation(r: &Refutation) -> CheckResult {
    if r.certificate.machine != r.counterexample {
        return CheckResult::InvalidClaim { reason: "certificate is about a different machine".into() };
    }
    let contradicts = match (r.kind, r.predicted, r.certificate.claim) {
        (DeciderKind::Halting, OracleAnswer::Yes, Claim::RepeatsAt { .. }) => true,
        (DeciderKind::Halting, OracleAnswer::No, Claim::HaltsAt { .. }) => true,
        (DeciderKind::Printing { symbol }, OracleAnswer::Yes, Claim::HaltsWithoutPrinting { symbol: s, .. }) => s == symbol,
        (DeciderKind::Printing { symbol }, OracleAnswer::No, Claim::PrintsSymbolAt { symbol: s, .. }) => s == symbol,
        _ => false,
    };
    if !contradicts {
        return CheckResult::InvalidClaim { reason: "claim does not contradict the prediction".into() };
    }
    check_certificate(&r.certificate)
}
