//! Description numbers, enumeration, the text format and specialization.
//!
//! # Numbering scheme
//!
//! A machine is first put in canonical form (states and ordinary symbols
//! renumbered in first-use order, see [`canonicalize`]). Its description
//! number is then `pair(header, table)` where `pair` is the Cantor pairing
//! `pair(a, b) = (a + b)(a + b + 1)/2 + b` and
//!
//! * `header = pair(pair(convention, base - 2), pair(states - 1, ordinary_symbols))`,
//!   with convention `0` for halt-state and `1` for halt-symbol;
//! * `table` is the mixed-radix number whose little-endian digits are the
//!   cells `(state, scanned)` in row-major order, scanned symbols ranging
//!   over blank and the ordinary symbols. A cell digit is `0` for "no rule"
//!   and `1 + ((write * E + emit) * 3 + move) * S + next` otherwise, where
//!   `write` is `0` for no write or `symbol + 1`, `emit` is `0` for no emit
//!   or `digit + 1`, `E = base + 1`, moves are `L = 0, R = 1, N = 2`, and `S`
//!   is the state count.
//!
//! A number is valid when the table digits fit (`table < R^cells`) and the
//! decoded machine is already canonical. Decoded machines name their states
//! `q0, q1, ...` and ordinary symbols `s1, s2, ...`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::embed::embed_verbatim;
use crate::machine::{
    Builder, Convention, Machine, MachineError, Move, Rule, StateId, Sym, BLANK, BLANK_NAME,
    HALTMARK_NAME,
};

/// Largest table (states x symbols) a description number may decode to.
pub const MAX_DECODED_CELLS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DescriptionNumber(pub BigUint);

impl DescriptionNumber {
    pub fn from_u64(n: u64) -> DescriptionNumber {
        DescriptionNumber(BigUint::from(n))
    }

    /// Most significant binary digit first.
    pub fn binary_digits(&self) -> Vec<u8> {
        if self.0.is_zero() {
            return vec![0];
        }
        let mut bits = self.0.to_radix_le(2);
        bits.reverse();
        bits
    }
}

impl fmt::Display for DescriptionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for DescriptionNumber {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s.trim())
            .map(DescriptionNumber)
            .map_err(|e| format!("not a description number: {e}"))
    }
}

impl Serialize for DescriptionNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for DescriptionNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvalidEncoding {
    #[error("header field out of range: {0}")]
    Header(&'static str),
    #[error("table too large: {0} cells")]
    TooLarge(u64),
    #[error("table number exceeds the table's radix range")]
    Overflow,
    #[error("decoded table is not in canonical form")]
    NotCanonical,
    #[error("decoded table is malformed: {0}")]
    Malformed(#[from] MachineError),
}

pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - &t;
    let a = &w - &b;
    (a, b)
}

/// Old-to-new index maps produced by [`canonicalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    pub states: Vec<StateId>,
    pub symbols: Vec<Sym>,
}

impl Renaming {
    pub fn is_identity(&self) -> bool {
        self.states.iter().enumerate().all(|(i, &s)| i == s)
            && self.symbols.iter().enumerate().all(|(i, &s)| i == s)
    }

    pub fn tape(&self, input: &[Sym]) -> Vec<Sym> {
        input.iter().map(|&s| self.symbols[s]).collect()
    }
}

fn reserved_symbols(m: &Machine) -> usize {
    match m.convention() {
        Convention::HaltState => 1,
        Convention::HaltSymbol => 2,
    }
}

/// Renumbers states and ordinary symbols in first-use order.
///
/// States are visited breadth-first from the start state. Within a state,
/// rules are taken in order of their scanned symbol's new number, and when
/// every numbered symbol is exhausted, the unnumbered scanned symbol with the
/// lowest old index comes next. Each processed rule numbers its scanned
/// symbol, its written symbol and its target state in that order.
/// Unreachable states and unused symbols follow in their old order. Names
/// travel with their states and symbols.
pub fn canonicalize(m: &Machine) -> (Machine, Renaming) {
    let ns = m.num_states();
    let nk = m.num_symbols();
    let reserved = reserved_symbols(m);
    let mut state_new: Vec<Option<usize>> = vec![None; ns];
    let mut state_order: Vec<StateId> = Vec::with_capacity(ns);
    let mut sym_new: Vec<Option<usize>> = vec![None; nk];
    let mut sym_order: Vec<Sym> = (0..reserved).collect();
    for (a, slot) in sym_new.iter_mut().enumerate().take(reserved) {
        *slot = Some(a);
    }

    let number_state = |s: StateId, state_new: &mut Vec<Option<usize>>, order: &mut Vec<StateId>| {
        if state_new[s].is_none() {
            state_new[s] = Some(order.len());
            order.push(s);
        }
    };
    let number_sym = |a: Sym, sym_new: &mut Vec<Option<usize>>, order: &mut Vec<Sym>| {
        if sym_new[a].is_none() {
            sym_new[a] = Some(order.len());
            order.push(a);
        }
    };

    number_state(m.start(), &mut state_new, &mut state_order);
    let mut idx = 0;
    loop {
        while idx < state_order.len() {
            let s = state_order[idx];
            idx += 1;
            let mut done = vec![false; nk];
            loop {
                let numbered = (0..nk)
                    .filter(|&a| !done[a] && sym_new[a].is_some() && m.rule(s, a).is_some())
                    .min_by_key(|&a| sym_new[a]);
                let pick = numbered
                    .or_else(|| (0..nk).find(|&a| !done[a] && m.rule(s, a).is_some()));
                let Some(a) = pick else { break };
                done[a] = true;
                number_sym(a, &mut sym_new, &mut sym_order);
                let r = m.rule(s, a).expect("picked a defined cell");
                if let Some(w) = r.write {
                    number_sym(w, &mut sym_new, &mut sym_order);
                }
                number_state(r.next, &mut state_new, &mut state_order);
            }
        }
        match (0..ns).find(|&s| state_new[s].is_none()) {
            Some(s) => number_state(s, &mut state_new, &mut state_order),
            None => break,
        }
    }
    for a in 0..nk {
        number_sym(a, &mut sym_new, &mut sym_order);
    }

    let states: Vec<String> = state_order.iter().map(|&s| m.states()[s].clone()).collect();
    let symbols: Vec<String> = sym_order.iter().map(|&a| m.symbols()[a].clone()).collect();
    let state_map: Vec<usize> = state_new.into_iter().map(|s| s.expect("numbered")).collect();
    let sym_map: Vec<usize> = sym_new.into_iter().map(|s| s.expect("numbered")).collect();
    let mut table = vec![None; ns * nk];
    for s in 0..ns {
        for a in 0..nk {
            if let Some(r) = m.rule(s, a) {
                table[state_map[s] * nk + sym_map[a]] = Some(Rule {
                    write: r.write.map(|w| sym_map[w]),
                    emit: r.emit,
                    mv: r.mv,
                    next: state_map[r.next],
                });
            }
        }
    }
    let canon = Machine::new(
        m.name(),
        states,
        0,
        symbols,
        m.base() as u32,
        m.convention(),
        table,
    )
    .expect("renaming preserves well-formedness");
    (canon, Renaming { states: state_map, symbols: sym_map })
}

struct Radix {
    states: usize,
    symbols: usize,
    emit_opts: u64,
    radix: u64,
}

impl Radix {
    fn of(convention: Convention, base: u32, states: usize, ordinary: usize) -> Radix {
        let reserved = match convention {
            Convention::HaltState => 1,
            Convention::HaltSymbol => 2,
        };
        let symbols = reserved + ordinary;
        let write_opts = 1 + symbols as u64;
        let emit_opts = 1 + base as u64;
        let radix = 1 + write_opts * emit_opts * 3 * states as u64;
        Radix { states, symbols, emit_opts, radix }
    }

    /// Scanned symbols in cell order: blank, then ordinary symbols.
    fn scanned(&self, convention: Convention) -> Vec<Sym> {
        let first_ordinary = if convention == Convention::HaltSymbol { 2 } else { 1 };
        std::iter::once(BLANK).chain(first_ordinary..self.symbols).collect()
    }
}

fn move_code(mv: Move) -> u64 {
    match mv {
        Move::Left => 0,
        Move::Right => 1,
        Move::Stay => 2,
    }
}

pub fn encode(m: &Machine) -> DescriptionNumber {
    let (c, _) = canonicalize(m);
    let ordinary = c.num_symbols() - reserved_symbols(&c);
    let conv = match c.convention() {
        Convention::HaltState => 0u32,
        Convention::HaltSymbol => 1u32,
    };
    let header = pair(
        &pair(&BigUint::from(conv), &BigUint::from(c.base() as u32 - 2)),
        &pair(&BigUint::from(c.num_states() - 1), &BigUint::from(ordinary)),
    );
    let rx = Radix::of(c.convention(), c.base() as u32, c.num_states(), ordinary);
    let scanned = rx.scanned(c.convention());
    let mut digits = Vec::with_capacity(c.num_states() * scanned.len());
    for s in 0..c.num_states() {
        for &a in &scanned {
            let d = match c.rule(s, a) {
                None => 0,
                Some(r) => {
                    let w = r.write.map_or(0, |w| w as u64 + 1);
                    let e = r.emit.map_or(0, |d| d as u64 + 1);
                    1 + ((w * rx.emit_opts + e) * 3 + move_code(r.mv)) * rx.states as u64
                        + r.next as u64
                }
            };
            digits.push(d);
        }
    }
    let mut table = BigUint::zero();
    for &d in digits.iter().rev() {
        table = table * rx.radix + d;
    }
    DescriptionNumber(pair(&header, &table))
}

fn small(x: &BigUint, limit: u64, what: &'static str) -> Result<u64, InvalidEncoding> {
    x.to_u64()
        .filter(|&v| v <= limit)
        .ok_or(InvalidEncoding::Header(what))
}

pub fn decode(n: &DescriptionNumber) -> Result<Machine, InvalidEncoding> {
    let (header, mut table) = unpair(&n.0);
    let (cb, sk) = unpair(&header);
    let (conv, base) = unpair(&cb);
    let (states, ordinary) = unpair(&sk);
    let convention = match small(&conv, 1, "convention")? {
        0 => Convention::HaltState,
        _ => Convention::HaltSymbol,
    };
    let base = small(&base, 253, "base")? as u32 + 2;
    let states = small(&states, MAX_DECODED_CELLS, "states")? as usize + 1;
    let ordinary = small(&ordinary, MAX_DECODED_CELLS, "symbols")? as usize;
    let rx = Radix::of(convention, base, states, ordinary);
    let cells = states as u64 * rx.symbols as u64;
    if cells > MAX_DECODED_CELLS {
        return Err(InvalidEncoding::TooLarge(cells));
    }
    let scanned = rx.scanned(convention);
    let radix = BigUint::from(rx.radix);
    let mut rules = vec![None; states * rx.symbols];
    for s in 0..states {
        for &a in &scanned {
            let (q, d) = table.div_rem(&radix);
            table = q;
            let d = d.to_u64().expect("digit below radix");
            if d == 0 {
                continue;
            }
            let mut v = d - 1;
            let next = (v % rx.states as u64) as usize;
            v /= rx.states as u64;
            let mv = match v % 3 {
                0 => Move::Left,
                1 => Move::Right,
                _ => Move::Stay,
            };
            v /= 3;
            let e = v % rx.emit_opts;
            let w = v / rx.emit_opts;
            rules[s * rx.symbols + a] = Some(Rule {
                write: (w > 0).then(|| w as usize - 1),
                emit: (e > 0).then(|| e as u8 - 1),
                mv,
                next,
            });
        }
    }
    if !table.is_zero() {
        return Err(InvalidEncoding::Overflow);
    }
    let mut symbols = vec![BLANK_NAME.to_string()];
    if convention == Convention::HaltSymbol {
        symbols.push(HALTMARK_NAME.to_string());
    }
    symbols.extend((1..=ordinary).map(|i| format!("s{i}")));
    let names = (0..states).map(|i| format!("q{i}")).collect();
    let m = Machine::new(format!("m{}", n.0), names, 0, symbols, base, convention, rules)?;
    if !canonicalize(&m).1.is_identity() {
        return Err(InvalidEncoding::NotCanonical);
    }
    Ok(m)
}

/// Valid description numbers in increasing order, with their machines.
#[derive(Clone, Debug, Default)]
pub struct Enumerator {
    next: BigUint,
}

impl Enumerator {
    pub fn new() -> Enumerator {
        Enumerator::default()
    }

    pub fn starting_at(n: BigUint) -> Enumerator {
        Enumerator { next: n }
    }
}

impl Iterator for Enumerator {
    type Item = (DescriptionNumber, Machine);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let n = DescriptionNumber(self.next.clone());
            self.next += 1u32;
            if let Ok(m) = decode(&n) {
                return Some((n, m));
            }
        }
    }
}

/// The machine with the `i`-th valid description number (0-based).
pub fn enumerate_machines(i: usize) -> Machine {
    Enumerator::new().nth(i).expect("enumeration is infinite").1
}

/// First `count` enumerated machines.
pub fn first_machines(count: usize) -> Vec<(DescriptionNumber, Machine)> {
    Enumerator::new().take(count).collect()
}

// ---------------------------------------------------------------------------
// Text format

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("undefined state `{name}` (line {line})")]
    UndefinedState { name: String, line: usize },
    #[error("{0}")]
    Invalid(#[from] MachineError),
}

struct Tok<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok { text: &line[s..i], column: s + 1 });
            }
        } else if start.is_none() {
            if ch == '#' {
                break;
            }
            start = Some(i);
        }
    }
    out
}

struct RawRule {
    line: usize,
    state: String,
    symbol: String,
    emit: Option<u8>,
    write: Option<String>,
    mv: Move,
    next: String,
}

/// Parses the line-oriented machine format.
pub fn parse_text(src: &str) -> Result<Machine, ParseError> {
    let mut name = None;
    let mut base: u32 = 2;
    let mut convention = None;
    let mut start: Option<(String, usize)> = None;
    let mut declared_states: Vec<String> = Vec::new();
    let mut declared_symbols: Vec<String> = Vec::new();
    let mut rules: Vec<RawRule> = Vec::new();

    for (ln, line) in src.lines().enumerate() {
        let line_no = ln + 1;
        let toks = tokenize(line);
        let Some(head) = toks.first() else { continue };
        let err = |t: &Tok, message: String| ParseError::Syntax {
            line: line_no,
            column: t.column,
            message,
        };
        let end_err = |message: &str| ParseError::Syntax {
            line: line_no,
            column: line.len() + 1,
            message: message.to_string(),
        };
        let one_arg = |what: &str| -> Result<&str, ParseError> {
            match toks.len() {
                2 => Ok(toks[1].text),
                1 => Err(end_err(&format!("`{what}` needs an argument"))),
                _ => Err(err(&toks[2], format!("unexpected token after `{what}`"))),
            }
        };
        match head.text {
            "machine" => name = Some(one_arg("machine")?.to_string()),
            "base" => {
                let t = one_arg("base")?;
                base = t
                    .parse()
                    .ok()
                    .filter(|b| (2..=255).contains(b))
                    .ok_or_else(|| err(&toks[1], format!("bad base `{t}`")))?;
            }
            "convention" => {
                convention = Some(match one_arg("convention")? {
                    "halt-state" => Convention::HaltState,
                    "halt-symbol" => Convention::HaltSymbol,
                    other => return Err(err(&toks[1], format!("unknown convention `{other}`"))),
                })
            }
            "start" => start = Some((one_arg("start")?.to_string(), line_no)),
            "states" => declared_states.extend(toks[1..].iter().map(|t| t.text.to_string())),
            "symbols" => declared_symbols.extend(toks[1..].iter().map(|t| t.text.to_string())),
            "rule" => rules.push(parse_rule(&toks, line_no, line.len())?),
            other => return Err(err(head, format!("unknown directive `{other}`"))),
        }
    }

    let convention = convention.ok_or(ParseError::Syntax {
        line: 1,
        column: 1,
        message: "missing `convention` line".into(),
    })?;
    let (start, start_line) = start.ok_or(ParseError::Syntax {
        line: 1,
        column: 1,
        message: "missing `start` line".into(),
    })?;
    let mut b = Builder::new(name.unwrap_or_else(|| "unnamed".into()), convention);
    b.base(base);
    for s in &declared_states {
        b.state(s);
    }
    for s in &declared_symbols {
        if s == BLANK_NAME || s == HALTMARK_NAME {
            continue;
        }
        b.symbol(s);
    }
    let mut defined: HashSet<String> = declared_states.iter().cloned().collect();
    defined.insert(start.clone());
    defined.extend(rules.iter().map(|r| r.state.clone()));
    let st = b.state(&start);
    b.set_start(st);
    for r in &rules {
        if !defined.contains(&r.next) {
            return Err(ParseError::UndefinedState { name: r.next.clone(), line: r.line });
        }
        let s = b.state(&r.state);
        let n = b.state(&r.next);
        let a = symbol_ref(&mut b, &r.symbol, convention, r.line)?;
        let w = match &r.write {
            None => None,
            Some(w) => Some(symbol_ref(&mut b, w, convention, r.line)?),
        };
        if b.has_rule(s, a) {
            return Err(ParseError::Syntax {
                line: r.line,
                column: 1,
                message: format!("duplicate rule for ({}, {})", r.state, r.symbol),
            });
        }
        b.rule(s, a, Rule { write: w, emit: r.emit, mv: r.mv, next: n });
    }
    let _ = start_line;
    Ok(b.build()?)
}

fn symbol_ref(
    b: &mut Builder,
    name: &str,
    convention: Convention,
    line: usize,
) -> Result<Sym, ParseError> {
    if name == HALTMARK_NAME && convention != Convention::HaltSymbol {
        return Err(ParseError::Syntax {
            line,
            column: 1,
            message: "`!` is only meaningful under `convention halt-symbol`".into(),
        });
    }
    Ok(b.symbol(name))
}

fn parse_rule(toks: &[Tok], line: usize, len: usize) -> Result<RawRule, ParseError> {
    let err = |t: &Tok, message: String| ParseError::Syntax { line, column: t.column, message };
    let end = |message: &str| ParseError::Syntax { line, column: len + 1, message: message.into() };
    if toks.len() < 3 {
        return Err(end("expected `rule <STATE> <SYMBOL>: ...`"));
    }
    let state = toks[1].text.to_string();
    let (symbol, mut i) = match toks[2].text.strip_suffix(':') {
        Some(sym) if !sym.is_empty() => (sym.to_string(), 3),
        _ => match toks.get(3) {
            Some(t) if t.text == ":" => (toks[2].text.to_string(), 4),
            _ => return Err(err(&toks[2], "expected `:` after the scanned symbol".into())),
        },
    };
    let mut emit = None;
    let mut write = None;
    let mut mv = Move::Stay;
    let mut next = None;
    let mut stage = 0;
    while i < toks.len() {
        let t = &toks[i];
        let arg = toks.get(i + 1);
        let need = |what: &str| arg.ok_or_else(|| end(&format!("`{what}` needs an argument")));
        match t.text {
            "emit" if stage < 1 => {
                let a = need("emit")?;
                emit = Some(
                    a.text
                        .parse::<u8>()
                        .map_err(|_| err(a, format!("bad digit `{}`", a.text)))?,
                );
                stage = 1;
                i += 2;
            }
            "write" if stage < 2 => {
                write = Some(need("write")?.text.to_string());
                stage = 2;
                i += 2;
            }
            "erase" if stage < 2 => {
                write = Some(BLANK_NAME.to_string());
                stage = 2;
                i += 1;
            }
            "move" if stage < 3 => {
                let a = need("move")?;
                mv = match a.text {
                    "L" => Move::Left,
                    "R" => Move::Right,
                    "N" => Move::Stay,
                    other => return Err(err(a, format!("bad move `{other}`"))),
                };
                stage = 3;
                i += 2;
            }
            "goto" => {
                next = Some(need("goto")?.text.to_string());
                i += 2;
                if let Some(extra) = toks.get(i) {
                    return Err(err(extra, "unexpected token after goto target".into()));
                }
            }
            other => return Err(err(t, format!("unexpected `{other}` in rule"))),
        }
    }
    let next = next.ok_or_else(|| end("rule is missing `goto <STATE>`"))?;
    Ok(RawRule { line, state, symbol, emit, write, mv, next })
}

/// Prints a machine in the text format; `parse_text(render(m))` is `m`.
pub fn render(m: &Machine) -> String {
    let mut out = String::new();
    out.push_str(&format!("machine {}\n", sanitize_name(m.name())));
    out.push_str(&format!("base {}\n", m.base()));
    let conv = match m.convention() {
        Convention::HaltState => "halt-state",
        Convention::HaltSymbol => "halt-symbol",
    };
    out.push_str(&format!("convention {conv}\n"));
    out.push_str(&format!("start {}\n", m.states()[m.start()]));
    out.push_str("states");
    for s in m.states() {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    let ordinary = &m.symbols()[reserved_symbols(m)..];
    if !ordinary.is_empty() {
        out.push_str("symbols");
        for s in ordinary {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
    }
    for s in 0..m.num_states() {
        for a in 0..m.num_symbols() {
            let Some(r) = m.rule(s, a) else { continue };
            out.push_str(&format!("rule {} {}:", m.states()[s], m.symbols()[a]));
            if let Some(d) = r.emit {
                out.push_str(&format!(" emit {d}"));
            }
            match r.write {
                Some(BLANK) => out.push_str(" erase"),
                Some(w) => out.push_str(&format!(" write {}", m.symbols()[w])),
                None => {}
            }
            out.push_str(&format!(" move {} goto {}\n", r.mv.letter(), m.states()[r.next]));
        }
    }
    out
}

fn sanitize_name(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect();
    if s.is_empty() || s.starts_with('#') {
        format!("m{s}")
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// Specialization

/// Step overhead bound of [`specialize`] for an input of length `len`.
pub fn specialize_overhead(len: usize) -> u64 {
    4 * len as u64 + 8
}

/// Bakes `input` into `m`: the result, started on a blank tape, writes the
/// input left to right, walks back to cell 0 and continues as `m`. The
/// prefix takes exactly `2 * input.len()` steps.
pub fn specialize(m: &Machine, input: &[Sym]) -> Machine {
    if input.is_empty() {
        return m.clone().with_name(format!("{}@spec", m.name()));
    }
    let mut b = Builder::new(format!("{}@spec", m.name()), m.convention());
    let emb = embed_verbatim(&mut b, m, "");
    let n = input.len();
    let writers: Vec<StateId> = (0..n).map(|i| b.fresh_state(&format!("w{i}"))).collect();
    let returners: Vec<StateId> = (0..n).map(|i| b.fresh_state(&format!("r{i}"))).collect();
    for i in 0..n {
        let next = if i + 1 < n { writers[i + 1] } else { returners[0] };
        let sym = emb.symbol(input[i]);
        b.rule_all(writers[i], Rule { write: Some(sym), emit: None, mv: Move::Right, next });
        let back = if i + 1 < n { returners[i + 1] } else { emb.start };
        b.rule_all(returners[i], Rule { write: None, emit: None, mv: Move::Left, next: back });
    }
    b.set_start(writers[0]);
    b.build().expect("specialization of a well-formed machine")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn pairing_inverts() {
        for z in 0u32..2000 {
            let z = BigUint::from(z);
            let (a, b) = unpair(&z);
            assert_eq!(pair(&a, &b), z);
        }
    }

    #[test]
    fn round_trip_named_machines() {
        for (m, _) in corpus::corpus() {
            let n = encode(&m);
            let d = decode(&n).unwrap();
            assert!(d.same_table(&canonicalize(&m).0), "{}", m.name());
            assert_eq!(encode(&d), n);
        }
    }

    #[test]
    fn distinct_tables_get_distinct_numbers() {
        assert_ne!(encode(&corpus::m_spin()), encode(&corpus::m_emit01()));
        assert_ne!(encode(&corpus::m_halt()), encode(&corpus::m_spin()));
    }

    #[test]
    fn zero_decodes_to_the_empty_halt_state_machine() {
        let m = decode(&DescriptionNumber::from_u64(0)).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.convention(), Convention::HaltState);
        assert_eq!(m.base(), 2);
        assert!(m.table().iter().all(Option::is_none));
        assert_eq!(encode(&corpus::m_halt()), DescriptionNumber::from_u64(0));
    }

    #[test]
    fn non_canonical_numbers_are_rejected() {
        // Two states where the start state never reaches the other but the
        // other is listed first would be reordered by canonicalization.
        let mut b = Builder::new("x", Convention::HaltState);
        let q0 = b.state("q0");
        let q1 = b.state("q1");
        b.rule(q1, BLANK, Rule::goto(q0));
        b.set_start(q1);
        let m = b.build().unwrap();
        let (c, r) = canonicalize(&m);
        assert!(!r.is_identity());
        assert_eq!(c.states()[0], "q1");
    }

    #[test]
    fn parse_spin_source() {
        let src = "machine M_SPIN\nbase 2\nconvention halt-state\nstart q0\nrule q0 _: write _ move N goto q0\n";
        let m = parse_text(src).unwrap();
        assert!(m.same_table(&corpus::m_spin()));
        assert_eq!(m.name(), "M_SPIN");
    }

    #[test]
    fn undefined_state_is_named() {
        let src = "machine x\nconvention halt-state\nstart q0\nrule q0 _: goto q9\n";
        match parse_text(src) {
            Err(ParseError::UndefinedState { name, line }) => {
                assert_eq!(name, "q9");
                assert_eq!(line, 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let src = "machine x\nconvention halt-state\nstart q0\nrule q0 _: move Q goto q0\n";
        match parse_text(src) {
            Err(ParseError::Syntax { line, column, .. }) => {
                assert_eq!((line, column), (4, 17));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_text("machine x\nbogus\n"),
            Err(ParseError::Syntax { line: 2, column: 1, .. })
        ));
    }

    #[test]
    fn comments_and_spacing() {
        let src = "# leading comment\nmachine e # trailing\nconvention halt-state\nstart a\n\
                   rule a _ : emit 0 move R goto b\nrule b _: emit 1 move R goto a # loop\n";
        let m = parse_text(src).unwrap();
        assert!(m.same_table(&corpus::m_emit01()));
    }

    #[test]
    fn halt_mark_outside_halt_symbol_is_rejected() {
        let src = "machine x\nconvention halt-state\nstart q\nrule q _: write ! goto q\n";
        assert!(parse_text(src).is_err());
    }

    #[test]
    fn render_parses_back() {
        for (m, _) in corpus::corpus() {
            let back = parse_text(&render(&m)).unwrap();
            assert_eq!(back, m, "{}", m.name());
        }
    }

    #[test]
    fn specialize_empty_is_identity_table() {
        let m = corpus::bb2();
        assert!(specialize(&m, &[]).same_table(&m));
    }

    #[test]
    fn specialized_halt_machine_halts() {
        let mut b = Builder::new("H", Convention::HaltState);
        b.state("q0");
        b.symbol("0");
        b.symbol("1");
        let m = b.build().unwrap();
        let s = specialize(&m, &[1, 2]);
        let out = crate::exec::run(&s, &[], &crate::exec::Budget::steps(100)).unwrap();
        assert_eq!(out.verdict, crate::exec::Verdict::Halted { steps: 4 });
    }
}
