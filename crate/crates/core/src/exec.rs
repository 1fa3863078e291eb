//! Bounded execution: the runner with exact-repetition loop detection, the
//! universal interpreter, the halted/looping/unknown trichotomy, digit
//! prefixes and computation-history certificates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::codec::{canonicalize, decode, encode, DescriptionNumber, InvalidEncoding};
use crate::machine::{Configuration, Machine, StateId, StepError, Stepped, Sym};

pub const DEFAULT_MAX_SEEN_CONFIGS: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_steps: u64,
    /// Largest span of visited cells; `None` is unlimited.
    pub max_cells: Option<u64>,
    /// Capacity of the loop detector's set of seen configurations.
    pub max_seen_configs: usize,
}

impl Budget {
    pub fn steps(max_steps: u64) -> Budget {
        Budget { max_steps, max_cells: None, max_seen_configs: DEFAULT_MAX_SEEN_CONFIGS }
    }

    pub fn with_cells(mut self, cells: u64) -> Budget {
        self.max_cells = Some(cells);
        self
    }

    pub fn with_configs(mut self, configs: usize) -> Budget {
        self.max_seen_configs = configs;
        self
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::steps(10_000)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Halted { steps: u64 },
    /// The configuration at `first_repeat_step` recurs `period` steps later.
    ProvablyLooping { first_repeat_step: u64, period: u64 },
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub emitted: Vec<u8>,
    pub trace: Option<Vec<Configuration>>,
    pub last: Configuration,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExecError {
    #[error("stuck: no rule for state `{state}` on `{symbol}` at step {step} (halt-symbol convention)")]
    Stuck { state: String, symbol: String, step: u64 },
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("invalid description number: {0}")]
    Invalid(#[from] InvalidEncoding),
}

/// Resumable bounded execution of one machine.
#[derive(Clone, Debug)]
pub struct Runner {
    machine: Machine,
    config: Configuration,
    budget: Budget,
    seen: Option<HashMap<Vec<u8>, u64>>,
    trace: Option<Vec<Configuration>>,
    lo: i64,
    hi: i64,
    done: Option<Verdict>,
}

impl Runner {
    pub fn new(m: &Machine, input: &[Sym], budget: &Budget) -> Runner {
        Runner {
            machine: m.clone(),
            config: m.initial_config(input),
            budget: *budget,
            seen: Some(HashMap::new()),
            trace: None,
            lo: 0,
            hi: input.len().max(1) as i64 - 1,
            done: None,
        }
    }

    /// Keeps every visited configuration.
    pub fn traced(mut self) -> Runner {
        self.trace = Some(vec![self.config.clone()]);
        self
    }

    /// Turns the loop detector off; loops then end in budget exhaustion.
    pub fn without_loop_detection(mut self) -> Runner {
        self.seen = None;
        self
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn verdict(&self) -> Option<Verdict> {
        self.done
    }

    /// One iteration; `Some` once the run is over.
    pub fn advance(&mut self) -> Result<Option<Verdict>, ExecError> {
        if let Some(v) = self.done {
            return Ok(Some(v));
        }
        let c = &mut self.config;
        if self.machine.terminal_status(c).is_terminal() {
            let steps = c.steps;
            return Ok(self.finish(Verdict::Halted { steps }));
        }
        if let Some(seen) = &mut self.seen {
            let key = c.situation_key();
            if let Some(&t1) = seen.get(&key) {
                let v = Verdict::ProvablyLooping { first_repeat_step: t1, period: c.steps - t1 };
                return Ok(self.finish(v));
            }
            if seen.len() < self.budget.max_seen_configs {
                seen.insert(key, c.steps);
            }
        }
        if c.steps >= self.budget.max_steps {
            return Ok(self.finish(Verdict::BudgetExhausted));
        }
        match self.machine.step_in_place(c)? {
            Stepped::Moved(_) => {}
            Stepped::Halted => {
                let steps = c.steps;
                return Ok(self.finish(Verdict::Halted { steps }));
            }
            Stepped::Stuck => {
                let sym = c.tape.get(c.head);
                return Err(ExecError::Stuck {
                    state: self.machine.states()[c.state].clone(),
                    symbol: self.machine.symbols()[sym].clone(),
                    step: c.steps,
                });
            }
        }
        self.lo = self.lo.min(c.head);
        self.hi = self.hi.max(c.head);
        if let Some(t) = &mut self.trace {
            t.push(c.clone());
        }
        if let Some(cells) = self.budget.max_cells {
            if (self.hi - self.lo + 1) as u64 > cells {
                return Ok(self.finish(Verdict::BudgetExhausted));
            }
        }
        Ok(None)
    }

    fn finish(&mut self, v: Verdict) -> Option<Verdict> {
        self.done = Some(v);
        Some(v)
    }

    /// Advances until the run ends or `stop` holds for the current
    /// configuration; `None` means `stop` fired first.
    pub fn run_until<F>(&mut self, mut stop: F) -> Result<Option<Verdict>, ExecError>
    where
        F: FnMut(&Configuration) -> bool,
    {
        loop {
            if stop(&self.config) {
                return Ok(None);
            }
            if let Some(v) = self.advance()? {
                return Ok(Some(v));
            }
        }
    }

    pub fn run_to_end(&mut self) -> Result<Verdict, ExecError> {
        loop {
            if let Some(v) = self.advance()? {
                return Ok(v);
            }
        }
    }

    /// Outcome so far; a run that has not ended reads as exhausted.
    pub fn outcome(self) -> RunOutcome {
        RunOutcome {
            verdict: self.done.unwrap_or(Verdict::BudgetExhausted),
            emitted: self.config.emitted.clone(),
            trace: self.trace,
            last: self.config,
        }
    }
}

pub fn run(m: &Machine, input: &[Sym], b: &Budget) -> Result<RunOutcome, ExecError> {
    let mut r = Runner::new(m, input, b);
    r.run_to_end()?;
    Ok(r.outcome())
}

pub fn run_traced(m: &Machine, input: &[Sym], b: &Budget) -> Result<RunOutcome, ExecError> {
    let mut r = Runner::new(m, input, b).traced();
    r.run_to_end()?;
    Ok(r.outcome())
}

/// Interprets a description number. The input is over the decoded
/// machine's alphabet.
pub fn universal(
    e: &DescriptionNumber,
    input: &[Sym],
    b: &Budget,
    traced: bool,
) -> Result<RunOutcome, ExecError> {
    let m = decode(e)?;
    if traced {
        run_traced(&m, input, b)
    } else {
        run(&m, input, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    Halted { steps: u64 },
    ProvablyLooping { first_repeat_step: u64, period: u64 },
    Unknown,
}

impl Classification {
    /// The certificate goal backing a definite answer.
    pub fn goal(self) -> Option<Goal> {
        match self {
            Classification::Halted { .. } => Some(Goal::Halts),
            Classification::ProvablyLooping { .. } => Some(Goal::Repeats),
            Classification::Unknown => None,
        }
    }
}

pub fn classify(m: &Machine, input: &[Sym], b: &Budget) -> Result<Classification, ExecError> {
    Ok(match run(m, input, b)?.verdict {
        Verdict::Halted { steps } => Classification::Halted { steps },
        Verdict::ProvablyLooping { first_repeat_step, period } => {
            Classification::ProvablyLooping { first_repeat_step, period }
        }
        Verdict::BudgetExhausted => Classification::Unknown,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitPrefix {
    Digits(Vec<u8>),
    Insufficient(Vec<u8>, RunOutcome),
}

impl DigitPrefix {
    pub fn digits(&self) -> Option<&[u8]> {
        match self {
            DigitPrefix::Digits(d) => Some(d),
            DigitPrefix::Insufficient(..) => None,
        }
    }
}

/// First `n` emitted digits on a blank tape.
pub fn emit_digits(m: &Machine, n: usize, b: &Budget) -> Result<DigitPrefix, ExecError> {
    let mut r = Runner::new(m, &[], b);
    match r.run_until(|c| c.emitted.len() >= n)? {
        None => Ok(DigitPrefix::Digits(r.config().emitted[..n].to_vec())),
        Some(_) => {
            let out = r.outcome();
            Ok(DigitPrefix::Insufficient(out.emitted.clone(), out))
        }
    }
}

/// Observable events for fast bounded-truth queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    Halt,
    /// First emission of this digit.
    Emit(u8),
    /// The `n`-th emission (1-based).
    NthDigit(usize),
    /// Any emission by a step numbered greater than `t`.
    EmitAfter(u64),
}

/// Step count at which `event` happens, if within `max_steps`. No loop
/// detection. Getting stuck counts as never.
pub fn event_step(m: &Machine, input: &[Sym], event: Event, max_steps: u64) -> Option<u64> {
    let mut c = m.initial_config(input);
    loop {
        let before = c.emitted.len();
        let stepped = match m.step_in_place(&mut c) {
            Ok(s) => s,
            Err(_) => return None,
        };
        match stepped {
            Stepped::Halted => return (event == Event::Halt).then_some(c.steps),
            Stepped::Stuck => return None,
            Stepped::Moved(_) => {}
        }
        if c.emitted.len() > before {
            let d = *c.emitted.last().expect("just emitted");
            let hit = match event {
                Event::Halt => false,
                Event::Emit(x) => d == x,
                Event::NthDigit(n) => c.emitted.len() == n,
                Event::EmitAfter(t) => c.steps > t,
            };
            if hit {
                return Some(c.steps);
            }
        }
        if c.steps >= max_steps {
            // A halt right at the budget still counts.
            if event == Event::Halt && m.terminal_status(&c).is_terminal() {
                return Some(c.steps);
            }
            return None;
        }
    }
}

/// Every event step of one run up to `max_steps`, so several budgets can
/// be evaluated from a single simulation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventLog {
    pub halted_at: Option<u64>,
    /// Step of each emission, in order.
    pub emissions: Vec<(u64, u8)>,
}

impl EventLog {
    pub fn record(m: &Machine, input: &[Sym], max_steps: u64, max_emissions: usize) -> EventLog {
        let mut log = EventLog::default();
        let mut c = m.initial_config(input);
        while c.steps <= max_steps {
            let before = c.emitted.len();
            match m.step_in_place(&mut c) {
                Ok(Stepped::Moved(_)) => {}
                Ok(Stepped::Halted) => {
                    log.halted_at = Some(c.steps);
                    break;
                }
                _ => break,
            }
            if c.emitted.len() > before {
                log.emissions.push((c.steps, c.emitted[before]));
                if log.emissions.len() >= max_emissions {
                    break;
                }
            }
            if c.steps == max_steps {
                if m.terminal_status(&c).is_terminal() {
                    log.halted_at = Some(c.steps);
                }
                break;
            }
        }
        log
    }

    pub fn step_of(&self, event: Event) -> Option<u64> {
        match event {
            Event::Halt => self.halted_at,
            Event::Emit(x) => self.emissions.iter().find(|e| e.1 == x).map(|e| e.0),
            Event::NthDigit(n) => (n >= 1).then(|| self.emissions.get(n - 1).map(|e| e.0)).flatten(),
            Event::EmitAfter(t) => self.emissions.iter().find(|e| e.0 > t).map(|e| e.0),
        }
    }

    pub fn within(&self, event: Event, budget: u64) -> bool {
        self.step_of(event).is_some_and(|s| s <= budget)
    }
}

/// JSON trace export: one object per configuration with a ±8 cell window.
pub fn trace_json(m: &Machine, trace: &[Configuration]) -> Value {
    let items: Vec<Value> = trace
        .iter()
        .map(|c| {
            let window: Vec<&str> = (c.head - 8..=c.head + 8)
                .map(|p| m.symbols()[c.tape.get(p)].as_str())
                .collect();
            let sym = c.tape.get(c.head);
            let action = match m.action(c.state, sym) {
                crate::machine::Action::Apply(r) => json!({
                    "write": r.write.map(|w| m.symbols()[w].clone()),
                    "emit": r.emit,
                    "move": r.mv.letter().to_string(),
                    "next": m.states()[r.next],
                }),
                crate::machine::Action::Halt => json!("halt"),
                crate::machine::Action::Stuck => json!("stuck"),
            };
            json!({
                "step": c.steps,
                "state": m.states()[c.state],
                "head": c.head,
                "window": window,
                "action": action,
                "emitted_len": c.emitted.len(),
            })
        })
        .collect();
    Value::Array(items)
}

// ---------------------------------------------------------------------------
// Certificates

/// Claims witnessed by a finite computation history.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Claim {
    HaltsAt { t: u64 },
    /// First emission of `symbol` happens at step `t`.
    PrintsSymbolAt { symbol: u8, t: u64 },
    EmitsNthDigitAt { n: usize, t: u64 },
    /// Configuration `t1` recurs at `t2`; the machine never halts.
    RepeatsAt { t1: u64, t2: u64 },
    /// Halts at `t` with no emission of `symbol` at any point.
    HaltsWithoutPrinting { symbol: u8, t: u64 },
}

impl Claim {
    pub fn length(&self) -> u64 {
        match *self {
            Claim::HaltsAt { t }
            | Claim::PrintsSymbolAt { t, .. }
            | Claim::EmitsNthDigitAt { t, .. }
            | Claim::HaltsWithoutPrinting { t, .. } => t,
            Claim::RepeatsAt { t2, .. } => t2,
        }
    }
}

/// A claim with its time left open, as requested from [`make_certificate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goal {
    Halts,
    PrintsSymbol(u8),
    EmitsNthDigit(usize),
    Repeats,
    HaltsWithoutPrinting(u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    /// The rule applied is the one for (state, scanned).
    pub state: StateId,
    pub scanned: Sym,
    /// Hex chain digest after this step.
    pub digest: String,
}

/// A replayable computation history. States, symbols and the input are in
/// the canonical numbering of `machine`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceCertificate {
    pub machine: DescriptionNumber,
    pub input: Vec<Sym>,
    pub claim: Claim,
    pub initial_digest: String,
    pub steps: Vec<StepRecord>,
    /// Digest of the final chain value followed by the claim, so the claim
    /// cannot be swapped for another one the same history also supports.
    pub seal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("cannot certify: {reason}")]
pub struct CannotCertify {
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum CheckResult {
    Valid,
    /// Replay diverged from the record at this step index (0 is the
    /// initial configuration).
    Invalid { step: u64, reason: String },
    InvalidClaim { reason: String },
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        *self == CheckResult::Valid
    }
}

fn initial_digest(machine: &DescriptionNumber, c: &Configuration) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(machine.0.to_bytes_le());
    h.update([0xff]);
    h.update(c.canonical_bytes());
    h.finalize().into()
}

fn chain(prev: &[u8; 32], c: &Configuration) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(prev);
    h.update(c.canonical_bytes());
    h.finalize().into()
}

fn seal(last: &[u8; 32], claim: &Claim) -> String {
    let mut h = Sha256::new();
    h.update(last);
    h.update(serde_json::to_vec(claim).expect("claim serializes"));
    hex::encode(h.finalize())
}

fn goal_claim(goal: Goal, before: &Configuration, after: &Configuration) -> Option<Claim> {
    let emitted_now = after.emitted.len() > before.emitted.len();
    let last = after.emitted.last().copied();
    match goal {
        Goal::PrintsSymbol(s) if emitted_now && last == Some(s) => {
            Some(Claim::PrintsSymbolAt { symbol: s, t: after.steps })
        }
        Goal::EmitsNthDigit(n) if emitted_now && after.emitted.len() == n => {
            Some(Claim::EmitsNthDigitAt { n, t: after.steps })
        }
        _ => None,
    }
}

/// Runs `m` on `input` until the goal is witnessed and records the history.
pub fn make_certificate(
    m: &Machine,
    input: &[Sym],
    goal: Goal,
    b: &Budget,
) -> Result<TraceCertificate, CannotCertify> {
    let (canon, renaming) = canonicalize(m);
    let number = encode(&canon);
    let input = renaming.tape(input);
    let mut runner = Runner::new(&canon, &input, b);
    if goal != Goal::Repeats {
        runner = runner.without_loop_detection();
    }
    let mut digest = initial_digest(&number, runner.config());
    let initial = hex::encode(digest);
    let mut records = Vec::new();
    let claim = loop {
        let before = runner.config().clone();
        let verdict = runner
            .advance()
            .map_err(|e| CannotCertify { reason: e.to_string() })?;
        match verdict {
            None => {
                let after = runner.config();
                digest = chain(&digest, after);
                let scanned = before.tape.get(before.head);
                records.push(StepRecord { state: before.state, scanned, digest: hex::encode(digest) });
                if let Some(c) = goal_claim(goal, &before, after) {
                    break c;
                }
            }
            Some(Verdict::Halted { steps }) => match goal {
                Goal::Halts => break Claim::HaltsAt { t: steps },
                Goal::HaltsWithoutPrinting(s) if !before.emitted.contains(&s) => {
                    break Claim::HaltsWithoutPrinting { symbol: s, t: steps }
                }
                _ => {
                    return Err(CannotCertify { reason: format!("halted at step {steps} first") })
                }
            },
            Some(Verdict::ProvablyLooping { first_repeat_step, period }) => {
                if goal == Goal::Repeats {
                    break Claim::RepeatsAt {
                        t1: first_repeat_step,
                        t2: first_repeat_step + period,
                    };
                }
                return Err(CannotCertify { reason: "machine loops first".into() });
            }
            Some(Verdict::BudgetExhausted) => {
                return Err(CannotCertify {
                    reason: format!("not witnessed within {} steps", b.max_steps),
                })
            }
        }
    };
    let seal = seal(&digest, &claim);
    Ok(TraceCertificate { machine: number, input, claim, initial_digest: initial, steps: records, seal })
}

/// Independent replay of a certificate.
pub fn check_certificate(cert: &TraceCertificate) -> CheckResult {
    let invalid = |step: u64, reason: String| CheckResult::Invalid { step, reason };
    let m = match decode(&cert.machine) {
        Ok(m) => m,
        Err(e) => return invalid(0, format!("machine does not decode: {e}")),
    };
    if cert.input.iter().any(|&s| s >= m.num_symbols()) {
        return invalid(0, "input symbol outside the alphabet".into());
    }
    if cert.claim.length() != cert.steps.len() as u64 {
        return CheckResult::InvalidClaim {
            reason: format!(
                "claim is about step {} but the history has {} steps",
                cert.claim.length(),
                cert.steps.len()
            ),
        };
    }
    let mut c = m.initial_config(&cert.input);
    let mut digest = initial_digest(&cert.machine, &c);
    if hex::encode(digest) != cert.initial_digest {
        return invalid(0, "initial digest mismatch".into());
    }
    let mut history: Vec<Configuration> = Vec::new();
    let keep = matches!(cert.claim, Claim::RepeatsAt { .. });
    let mut before = c.clone();
    for (i, rec) in cert.steps.iter().enumerate() {
        let step = i as u64 + 1;
        let scanned = c.tape.get(c.head);
        if rec.state != c.state || rec.scanned != scanned {
            return invalid(step, "recorded rule does not match the configuration".into());
        }
        if keep {
            history.push(c.clone());
        }
        before = c.clone();
        match m.step_in_place(&mut c) {
            Ok(Stepped::Moved(_)) => {}
            Ok(_) => return invalid(step, "no applicable rule".into()),
            Err(e) => return invalid(step, e.to_string()),
        }
        digest = chain(&digest, &c);
        if hex::encode(digest) != rec.digest {
            return invalid(step, "digest mismatch".into());
        }
    }
    if seal(&digest, &cert.claim) != cert.seal {
        return CheckResult::InvalidClaim { reason: "seal does not match the claim".into() };
    }
    let bad = |reason: &str| CheckResult::InvalidClaim { reason: reason.to_string() };
    let emitted_last = c.emitted.len() > before.emitted.len() && !cert.steps.is_empty();
    match cert.claim {
        Claim::HaltsAt { .. } => {
            if !m.terminal_status(&c).is_terminal() {
                return bad("final configuration is not terminal");
            }
        }
        Claim::HaltsWithoutPrinting { symbol, .. } => {
            if !m.terminal_status(&c).is_terminal() {
                return bad("final configuration is not terminal");
            }
            if c.emitted.contains(&symbol) {
                return bad("the symbol was emitted");
            }
        }
        Claim::PrintsSymbolAt { symbol, .. } => {
            if !emitted_last || c.emitted.last() != Some(&symbol) {
                return bad("the last step does not emit the symbol");
            }
            if before.emitted.contains(&symbol) {
                return bad("the symbol was emitted earlier");
            }
        }
        Claim::EmitsNthDigitAt { n, .. } => {
            if !emitted_last || c.emitted.len() != n {
                return bad("the last step is not the n-th emission");
            }
        }
        Claim::RepeatsAt { t1, t2 } => {
            if t1 >= t2 {
                return bad("repeat times out of order");
            }
            if !history[t1 as usize].same_situation(&c) {
                return bad("configurations differ");
            }
        }
    }
    CheckResult::Valid
}

impl TraceCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<TraceCertificate, serde_json::Error> {
        serde_json::from_str(s)
    }
}
