//! Machine model: transition tables, instantaneous descriptions and the
//! single-step transition relation under both halting conventions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type StateId = usize;
pub type Sym = usize;

/// The blank symbol always has index 0.
pub const BLANK: Sym = 0;
/// Under [`Convention::HaltSymbol`] the halt mark always has index 1.
pub const HALTMARK: Sym = 1;

pub const BLANK_NAME: &str = "_";
pub const HALTMARK_NAME: &str = "!";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Halt when no rule is defined for the scanned pair.
    HaltState,
    /// Halt when the rule about to fire writes the halt mark.
    HaltSymbol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
    #[serde(rename = "N")]
    Stay,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Stay => 'N',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub write: Option<Sym>,
    pub emit: Option<u8>,
    pub mv: Move,
    pub next: StateId,
}

impl Rule {
    pub fn goto(next: StateId) -> Rule {
        Rule { write: None, emit: None, mv: Move::Stay, next }
    }
}

/// What a machine does in a given (state, scanned symbol) situation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Apply(Rule),
    /// The convention's termination condition fires here.
    Halt,
    /// No rule under the halt-symbol convention.
    Stuck,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("machine has no states")]
    NoStates,
    #[error("start state {0} out of range")]
    BadStart(StateId),
    #[error("digit base {0} must be between 2 and 255")]
    BadBase(u32),
    #[error("symbol 0 must be the blank `_`")]
    BlankMissing,
    #[error("halt-symbol machines must have `!` as symbol 1")]
    HaltmarkMissing,
    #[error("`!` is only allowed under the halt-symbol convention")]
    UnexpectedHaltmark,
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("invalid {kind} name `{name}`")]
    BadName { kind: &'static str, name: String },
    #[error("rule for ({state}, {symbol}) {problem}")]
    BadRule { state: String, symbol: String, problem: String },
    #[error("transition table has {got} cells, expected {expected}")]
    TableShape { got: usize, expected: usize },
}

/// A finite transition table over a tape alphabet with emit/write/move rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    name: String,
    states: Vec<String>,
    start: StateId,
    symbols: Vec<String>,
    base: u8,
    convention: Convention,
    table: Vec<Option<Rule>>,
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('#')
        && !name.contains(':')
        && !name.chars().any(char::is_whitespace)
}

impl Machine {
    /// Builds a machine from a dense table indexed `state * symbols.len() + symbol`.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        start: StateId,
        symbols: Vec<String>,
        base: u32,
        convention: Convention,
        table: Vec<Option<Rule>>,
    ) -> Result<Machine, MachineError> {
        if states.is_empty() {
            return Err(MachineError::NoStates);
        }
        if start >= states.len() {
            return Err(MachineError::BadStart(start));
        }
        if !(2..=255).contains(&base) {
            return Err(MachineError::BadBase(base));
        }
        if symbols.first().map(String::as_str) != Some(BLANK_NAME) {
            return Err(MachineError::BlankMissing);
        }
        let has_mark = symbols.iter().position(|s| s == HALTMARK_NAME);
        match (convention, has_mark) {
            (Convention::HaltSymbol, Some(HALTMARK)) => {}
            (Convention::HaltSymbol, _) => return Err(MachineError::HaltmarkMissing),
            (Convention::HaltState, Some(_)) => return Err(MachineError::UnexpectedHaltmark),
            (Convention::HaltState, None) => {}
        }
        check_names("state", &states)?;
        check_names("symbol", &symbols)?;
        let expected = states.len() * symbols.len();
        if table.len() != expected {
            return Err(MachineError::TableShape { got: table.len(), expected });
        }
        let m = Machine {
            name: name.into(),
            states,
            start,
            symbols,
            base: base as u8,
            convention,
            table,
        };
        for s in 0..m.states.len() {
            for a in 0..m.symbols.len() {
                let Some(rule) = m.rule(s, a) else { continue };
                let bad = |problem: String| MachineError::BadRule {
                    state: m.states[s].clone(),
                    symbol: m.symbols[a].clone(),
                    problem,
                };
                if rule.next >= m.states.len() {
                    return Err(bad(format!("targets unknown state {}", rule.next)));
                }
                if let Some(w) = rule.write {
                    if w >= m.symbols.len() {
                        return Err(bad(format!("writes unknown symbol {w}")));
                    }
                }
                if let Some(d) = rule.emit {
                    if d >= m.base {
                        return Err(bad(format!("emits {d}, outside base {}", m.base)));
                    }
                }
                if m.convention == Convention::HaltSymbol && a == HALTMARK {
                    return Err(bad("scans the halt mark".into()));
                }
            }
        }
        Ok(m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Machine {
        self.name = name.into();
        self
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn haltmark(&self) -> Option<Sym> {
        (self.convention == Convention::HaltSymbol).then_some(HALTMARK)
    }

    pub fn table(&self) -> &[Option<Rule>] {
        &self.table
    }

    pub fn rule(&self, state: StateId, sym: Sym) -> Option<&Rule> {
        self.table[state * self.symbols.len() + sym].as_ref()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<Sym> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Translates symbol names to indices, failing on the first unknown one.
    pub fn tape_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Sym>, StepError> {
        names
            .iter()
            .map(|n| {
                self.symbol_index(n.as_ref())
                    .ok_or_else(|| StepError::UnknownSymbolName(n.as_ref().to_string()))
            })
            .collect()
    }

    /// Resolves the behaviour for a (state, scanned symbol) pair.
    pub fn action(&self, state: StateId, sym: Sym) -> Action {
        match (self.rule(state, sym), self.convention) {
            (None, Convention::HaltState) => Action::Halt,
            (None, Convention::HaltSymbol) => Action::Stuck,
            (Some(r), Convention::HaltSymbol) if r.write == Some(HALTMARK) => Action::Halt,
            (Some(r), _) => Action::Apply(*r),
        }
    }

    /// Same transition table, ignoring names.
    pub fn same_table(&self, other: &Machine) -> bool {
        self.start == other.start
            && self.base == other.base
            && self.convention == other.convention
            && self.states.len() == other.states.len()
            && self.symbols.len() == other.symbols.len()
            && self.table == other.table
    }

    pub fn initial_config(&self, input: &[Sym]) -> Configuration {
        Configuration::new(self.start, input)
    }

    /// One step under the machine's convention.
    pub fn step(&self, c: &Configuration) -> Result<StepResult, StepError> {
        let mut next = c.clone();
        Ok(match self.step_in_place(&mut next)? {
            Stepped::Moved(_) => StepResult::Next(next),
            Stepped::Halted => StepResult::HaltedHere,
            Stepped::Stuck => StepResult::StuckUndefined,
        })
    }

    pub fn terminal_status(&self, c: &Configuration) -> TerminalStatus {
        if c.state >= self.states.len() {
            return TerminalStatus::NotTerminal;
        }
        let sym = c.tape.get(c.head);
        if sym >= self.symbols.len() {
            return TerminalStatus::NotTerminal;
        }
        match self.action(c.state, sym) {
            Action::Halt if self.convention == Convention::HaltState => {
                TerminalStatus::Terminal(TerminalReason::NoRule)
            }
            Action::Halt => TerminalStatus::Terminal(TerminalReason::HaltSymbol),
            _ => TerminalStatus::NotTerminal,
        }
    }

    /// Mutating step used by the runners. Emits at most one digit.
    pub(crate) fn step_in_place(&self, c: &mut Configuration) -> Result<Stepped, StepError> {
        if c.state >= self.states.len() {
            return Err(StepError::UnknownState(c.state));
        }
        let sym = c.tape.get(c.head);
        if sym >= self.symbols.len() {
            return Err(StepError::UnknownSymbol { symbol: sym, cell: c.head });
        }
        match self.action(c.state, sym) {
            Action::Halt => Ok(Stepped::Halted),
            Action::Stuck => Ok(Stepped::Stuck),
            Action::Apply(rule) => {
                if let Some(w) = rule.write {
                    c.tape.set(c.head, w);
                }
                if let Some(d) = rule.emit {
                    c.emitted.push(d);
                }
                c.head += rule.mv.delta();
                c.state = rule.next;
                c.steps += 1;
                Ok(Stepped::Moved(rule))
            }
        }
    }
}

fn check_names(kind: &'static str, names: &[String]) -> Result<(), MachineError> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !valid_name(n) {
            return Err(MachineError::BadName { kind, name: n.clone() });
        }
        if !seen.insert(n.as_str()) {
            return Err(MachineError::DuplicateName { kind, name: n.clone() });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Stepped {
    Moved(Rule),
    Halted,
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Next(Configuration),
    HaltedHere,
    StuckUndefined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalReason {
    NoRule,
    HaltSymbol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalStatus {
    NotTerminal,
    Terminal(TerminalReason),
}

impl TerminalStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, TerminalStatus::Terminal(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StepError {
    #[error("malformed configuration: state {0} not in machine")]
    UnknownState(StateId),
    #[error("malformed configuration: symbol {symbol} at cell {cell} not in alphabet")]
    UnknownSymbol { symbol: Sym, cell: i64 },
    #[error("unknown symbol `{0}`")]
    UnknownSymbolName(String),
}

/// Two-way infinite tape. Cells outside the stored window are blank.
#[derive(Clone, Debug, Default)]
pub struct Tape {
    origin: i64,
    cells: Vec<Sym>,
}

impl Tape {
    pub fn from_input(input: &[Sym]) -> Tape {
        Tape { origin: 0, cells: input.to_vec() }
    }

    pub fn get(&self, pos: i64) -> Sym {
        let i = pos - self.origin;
        if i < 0 || i >= self.cells.len() as i64 {
            BLANK
        } else {
            self.cells[i as usize]
        }
    }

    pub fn set(&mut self, pos: i64, sym: Sym) {
        if self.cells.is_empty() {
            if sym == BLANK {
                return;
            }
            self.origin = pos;
        }
        if pos < self.origin {
            if sym == BLANK {
                return;
            }
            let grow = (self.origin - pos) as usize;
            self.cells.splice(0..0, std::iter::repeat_n(BLANK, grow));
            self.origin = pos;
        }
        let i = (pos - self.origin) as usize;
        if i >= self.cells.len() {
            if sym == BLANK {
                return;
            }
            self.cells.resize(i + 1, BLANK);
        }
        self.cells[i] = sym;
    }

    /// The non-blank span as (first cell, contents); empty tape gives (0, []).
    pub fn trimmed(&self) -> (i64, &[Sym]) {
        let first = self.cells.iter().position(|&s| s != BLANK);
        match first {
            None => (0, &[]),
            Some(f) => {
                let last = self.cells.iter().rposition(|&s| s != BLANK).unwrap_or(f);
                (self.origin + f as i64, &self.cells[f..=last])
            }
        }
    }

    /// Non-blank cells in increasing position order.
    pub fn non_blank(&self) -> impl Iterator<Item = (i64, Sym)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != BLANK)
            .map(move |(i, &s)| (self.origin + i as i64, s))
    }
}

impl PartialEq for Tape {
    fn eq(&self, other: &Tape) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for Tape {}

/// Full instantaneous description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub state: StateId,
    pub tape: Tape,
    pub head: i64,
    pub emitted: Vec<u8>,
    pub steps: u64,
}

impl Configuration {
    pub fn new(state: StateId, input: &[Sym]) -> Configuration {
        Configuration {
            state,
            tape: Tape::from_input(input),
            head: 0,
            emitted: Vec::new(),
            steps: 0,
        }
    }

    /// Equal as machine situations: everything but the step counter.
    pub fn same_situation(&self, other: &Configuration) -> bool {
        self.state == other.state
            && self.head == other.head
            && self.tape == other.tape
            && self.emitted == other.emitted
    }

    /// Canonical byte serialization of everything except the step counter
    /// and the emitted digits themselves (only their count). Within a single
    /// run the emitted ledger is prefix-monotone, so equal counts imply equal
    /// ledgers.
    pub fn situation_key(&self) -> Vec<u8> {
        let (first, cells) = self.tape.trimmed();
        let mut out = Vec::with_capacity(32 + cells.len() * 2);
        out.extend_from_slice(&(self.state as u64).to_le_bytes());
        out.extend_from_slice(&self.head.to_le_bytes());
        out.extend_from_slice(&(self.emitted.len() as u64).to_le_bytes());
        out.extend_from_slice(&first.to_le_bytes());
        for &c in cells {
            out.extend_from_slice(&(c as u16).to_le_bytes());
        }
        out
    }

    /// Canonical serialization including the full emitted ledger and step
    /// counter; input to certificate digests.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = self.situation_key();
        out.extend_from_slice(&self.steps.to_le_bytes());
        out.extend_from_slice(&self.emitted);
        out
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::codec::render(self))
    }
}

/// Incremental construction by name. States and symbols are interned on
/// first mention; unspecified cells stay undefined.
#[derive(Clone, Debug)]
pub struct Builder {
    name: String,
    base: u32,
    convention: Convention,
    states: Vec<String>,
    symbols: Vec<String>,
    rules: Vec<Vec<Option<Rule>>>,
    start: Option<StateId>,
}

impl Builder {
    pub fn new(name: impl Into<String>, convention: Convention) -> Builder {
        let mut symbols = vec![BLANK_NAME.to_string()];
        if convention == Convention::HaltSymbol {
            symbols.push(HALTMARK_NAME.to_string());
        }
        Builder {
            name: name.into(),
            base: 2,
            convention,
            states: Vec::new(),
            symbols,
            rules: Vec::new(),
            start: None,
        }
    }

    pub fn base(&mut self, base: u32) -> &mut Self {
        self.base = base;
        self
    }

    pub fn current_base(&self) -> u32 {
        self.base
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(i) = self.states.iter().position(|s| s == name) {
            return i;
        }
        self.states.push(name.to_string());
        self.rules.push(Vec::new());
        self.states.len() - 1
    }

    /// Adds a state with a name not yet in use, derived from `hint`.
    pub fn fresh_state(&mut self, hint: &str) -> StateId {
        let mut name = hint.to_string();
        let mut n = 1;
        while self.states.iter().any(|s| s == &name) {
            name = format!("{hint}.{n}");
            n += 1;
        }
        self.state(&name)
    }

    pub fn symbol(&mut self, name: &str) -> Sym {
        if let Some(i) = self.symbols.iter().position(|s| s == name) {
            return i;
        }
        self.symbols.push(name.to_string());
        self.symbols.len() - 1
    }

    /// Adds a symbol with a name not yet in use, derived from `hint`.
    pub fn fresh_symbol(&mut self, hint: &str) -> Sym {
        let mut name = hint.to_string();
        let mut n = 1;
        while self.symbols.iter().any(|s| s == &name) {
            name = format!("{hint}{n}");
            n += 1;
        }
        self.symbol(&name)
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.symbols
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    pub fn set_start(&mut self, s: StateId) -> &mut Self {
        self.start = Some(s);
        self
    }

    pub fn rule(&mut self, state: StateId, sym: Sym, rule: Rule) -> &mut Self {
        let row = &mut self.rules[state];
        if row.len() <= sym {
            row.resize(sym + 1, None);
        }
        row[sym] = Some(rule);
        self
    }

    /// Same rule for every symbol currently in the alphabet.
    pub fn rule_all(&mut self, state: StateId, rule: Rule) -> &mut Self {
        for a in 0..self.symbols.len() {
            if self.convention == Convention::HaltSymbol && a == HALTMARK {
                continue;
            }
            self.rule(state, a, rule);
        }
        self
    }

    pub fn has_rule(&self, state: StateId, sym: Sym) -> bool {
        self.rules[state].get(sym).is_some_and(Option::is_some)
    }

    pub fn build(&self) -> Result<Machine, MachineError> {
        let k = self.symbols.len();
        let mut table = vec![None; self.states.len() * k];
        for (s, row) in self.rules.iter().enumerate() {
            for (a, r) in row.iter().enumerate() {
                table[s * k + a] = *r;
            }
        }
        Machine::new(
            self.name.clone(),
            self.states.clone(),
            self.start.unwrap_or(0),
            self.symbols.clone(),
            self.base,
            self.convention,
            table,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn halt_machine_halts_at_step_zero() {
        let m = corpus::m_halt();
        let c = m.initial_config(&[]);
        assert_eq!(m.step(&c).unwrap(), StepResult::HaltedHere);
        assert_eq!(m.terminal_status(&c), TerminalStatus::Terminal(TerminalReason::NoRule));
    }

    #[test]
    fn spin_step_is_identity_but_for_steps() {
        let m = corpus::m_spin();
        let c = m.initial_config(&[]);
        let StepResult::Next(n) = m.step(&c).unwrap() else { panic!() };
        assert!(n.same_situation(&c));
        assert_eq!(n.steps, c.steps + 1);
        assert_eq!(m.terminal_status(&n), TerminalStatus::NotTerminal);
    }

    #[test]
    fn emit01_first_step_emits_zero() {
        let m = corpus::m_emit01();
        let StepResult::Next(n) = m.step(&m.initial_config(&[])).unwrap() else { panic!() };
        assert_eq!(n.emitted, vec![0]);
        assert_eq!(n.head, 1);
    }

    #[test]
    fn halt_symbol_lookahead_is_terminal() {
        let mut b = Builder::new("mark", Convention::HaltSymbol);
        let q = b.state("q");
        b.rule(q, BLANK, Rule { write: Some(HALTMARK), emit: None, mv: Move::Stay, next: q });
        let m = b.build().unwrap();
        let c = m.initial_config(&[]);
        assert_eq!(m.terminal_status(&c), TerminalStatus::Terminal(TerminalReason::HaltSymbol));
        assert_eq!(m.step(&c).unwrap(), StepResult::HaltedHere);
    }

    #[test]
    fn halt_symbol_without_rule_is_stuck() {
        let mut b = Builder::new("stuck", Convention::HaltSymbol);
        b.state("q");
        let m = b.build().unwrap();
        let c = m.initial_config(&[]);
        assert_eq!(m.step(&c).unwrap(), StepResult::StuckUndefined);
        assert_eq!(m.terminal_status(&c), TerminalStatus::NotTerminal);
    }

    #[test]
    fn foreign_symbol_is_malformed() {
        let m = corpus::m_spin();
        let c = m.initial_config(&[7]);
        assert!(matches!(m.step(&c), Err(StepError::UnknownSymbol { symbol: 7, cell: 0 })));
    }

    #[test]
    fn tape_trims_and_compares_by_content() {
        let mut a = Tape::default();
        a.set(-3, 2);
        a.set(4, 1);
        a.set(4, BLANK);
        let mut b = Tape::default();
        b.set(-3, 2);
        assert_eq!(a, b);
        assert_eq!(a.trimmed(), (-3, &[2][..]));
        assert_eq!(a.get(100), BLANK);
    }

    #[test]
    fn rejects_rule_targeting_missing_state() {
        let states = vec!["q".to_string()];
        let symbols = vec!["_".to_string()];
        let table = vec![Some(Rule::goto(3))];
        let err = Machine::new("bad", states, 0, symbols, 2, Convention::HaltState, table);
        assert!(matches!(err, Err(MachineError::BadRule { .. })));
    }
}
