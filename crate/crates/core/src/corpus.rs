//! Small named machines used throughout the tests, the CLI demos and the
//! adversary constructions.

use crate::machine::{Builder, Convention, Machine, Move, Rule, Sym, BLANK};

fn rule(write: Option<Sym>, emit: Option<u8>, mv: Move, next: usize) -> Rule {
    Rule { write, emit, mv, next }
}

/// No rules at all: halts before the first step.
pub fn m_halt() -> Machine {
    let mut b = Builder::new("M_HALT", Convention::HaltState);
    b.state("q0");
    b.build().expect("valid")
}

/// Stays put on a blank forever.
pub fn m_spin() -> Machine {
    let mut b = Builder::new("M_SPIN", Convention::HaltState);
    let q = b.state("q0");
    b.rule(q, BLANK, rule(Some(BLANK), None, Move::Stay, q));
    b.build().expect("valid")
}

/// Emits 0, 1, 0, 1, ... moving right.
pub fn m_emit01() -> Machine {
    let mut b = Builder::new("M_EMIT01", Convention::HaltState);
    let a = b.state("a");
    let c = b.state("b");
    b.rule(a, BLANK, rule(None, Some(0), Move::Right, c));
    b.rule(c, BLANK, rule(None, Some(1), Move::Right, a));
    b.build().expect("valid")
}

/// Walks right over blanks forever; never repeats a configuration.
pub fn m_run() -> Machine {
    let mut b = Builder::new("M_RUN", Convention::HaltState);
    let q = b.state("q0");
    b.rule(q, BLANK, rule(None, None, Move::Right, q));
    b.build().expect("valid")
}

/// Emits a single `digit`, then spins.
pub fn m_emit_one_digit(digit: u8) -> Machine {
    let mut b = Builder::new(format!("M_EMIT_ONE_{digit}"), Convention::HaltState);
    let s0 = b.state("s0");
    let s1 = b.state("s1");
    let s2 = b.state("s2");
    b.base((digit as u32 + 1).max(2));
    b.rule(s0, BLANK, rule(None, Some(digit), Move::Right, s1));
    b.rule(s1, BLANK, rule(None, None, Move::Left, s2));
    b.rule(s2, BLANK, rule(None, None, Move::Stay, s2));
    b.build().expect("valid")
}

/// Emits a single 1, then spins.
pub fn m_emit_one() -> Machine {
    m_emit_one_digit(1).with_name("M_EMIT_ONE")
}

/// Emits 1, 1, 0 and halts; its first 0 appears at step 3.
pub fn m_print0_at_3() -> Machine {
    let mut b = Builder::new("M_PRINT0_AT_3", Convention::HaltState);
    let s: Vec<_> = (0..4).map(|i| b.state(&format!("s{i}"))).collect();
    b.rule(s[0], BLANK, rule(None, Some(1), Move::Right, s[1]));
    b.rule(s[1], BLANK, rule(None, Some(1), Move::Right, s[2]));
    b.rule(s[2], BLANK, rule(None, Some(0), Move::Right, s[3]));
    b.build().expect("valid")
}

/// Emits `digit` forever in the given base.
pub fn constant_emitter(digit: u8, base: u32) -> Machine {
    let mut b = Builder::new(format!("CONST_{digit}_B{base}"), Convention::HaltState);
    b.base(base);
    let q = b.state("q0");
    b.rule(q, BLANK, rule(None, Some(digit), Move::Right, q));
    b.build().expect("valid")
}

/// The two-state busy beaver: halts after 6 steps leaving four 1s.
pub fn bb2() -> Machine {
    let mut b = Builder::new("BB2", Convention::HaltState);
    let a = b.state("A");
    let bb = b.state("B");
    let h = b.state("H");
    let one = b.symbol("1");
    b.rule(a, BLANK, rule(Some(one), None, Move::Right, bb));
    b.rule(a, one, rule(Some(one), None, Move::Left, bb));
    b.rule(bb, BLANK, rule(Some(one), None, Move::Left, a));
    b.rule(bb, one, rule(Some(one), Some(1), Move::Right, h));
    b.build().expect("valid")
}

/// A three-state, two-symbol champion table, emitting a 0 whenever it moves
/// left in state C.
pub fn bb3() -> Machine {
    let mut b = Builder::new("BB3", Convention::HaltState);
    let a = b.state("A");
    let bs = b.state("B");
    let c = b.state("C");
    let h = b.state("H");
    let one = b.symbol("1");
    b.rule(a, BLANK, rule(Some(one), None, Move::Right, bs));
    b.rule(a, one, rule(Some(one), None, Move::Right, h));
    b.rule(bs, BLANK, rule(Some(BLANK), None, Move::Right, c));
    b.rule(bs, one, rule(Some(one), None, Move::Right, bs));
    b.rule(c, BLANK, rule(Some(one), Some(0), Move::Left, c));
    b.rule(c, one, rule(Some(one), None, Move::Left, a));
    b.build().expect("valid")
}

/// Unary successor: walks right over 1s, appends one, emits 1 and halts.
pub fn unary_succ() -> Machine {
    let mut b = Builder::new("UNARY_SUCC", Convention::HaltState);
    let q = b.state("scan");
    let h = b.state("done");
    let one = b.symbol("1");
    b.rule(q, one, rule(None, None, Move::Right, q));
    b.rule(q, BLANK, rule(Some(one), Some(1), Move::Stay, h));
    b.build().expect("valid")
}

/// Binary counter that increments forever, emitting 1 on every carry-free
/// increment and 0 whenever it grows the counter by a digit.
pub fn binary_counter() -> Machine {
    let mut b = Builder::new("COUNTER", Convention::HaltState);
    let inc = b.state("inc");
    let back = b.state("back");
    let zero = b.symbol("0");
    let one = b.symbol("1");
    b.rule(inc, one, rule(Some(zero), None, Move::Left, inc));
    b.rule(inc, zero, rule(Some(one), Some(1), Move::Right, back));
    b.rule(inc, BLANK, rule(Some(one), Some(0), Move::Right, back));
    b.rule(back, zero, rule(None, None, Move::Right, back));
    b.rule(back, one, rule(None, None, Move::Right, back));
    b.rule(back, BLANK, rule(None, None, Move::Left, inc));
    b.build().expect("valid")
}

/// Erases its input left to right, then halts under the halt-symbol convention.
pub fn eraser_halt_symbol() -> Machine {
    let mut b = Builder::new("ERASE_HS", Convention::HaltSymbol);
    let q = b.state("q");
    let one = b.symbol("1");
    let h = b.state("h");
    b.rule(q, one, rule(Some(BLANK), Some(1), Move::Right, q));
    b.rule(q, BLANK, rule(Some(crate::machine::HALTMARK), None, Move::Stay, h));
    b.build().expect("valid")
}

/// Machines paired with input tapes (by symbol name).
pub fn corpus() -> Vec<(Machine, Vec<String>)> {
    let ones = |n: usize| vec!["1".to_string(); n];
    vec![
        (m_halt(), vec![]),
        (m_spin(), vec![]),
        (m_emit01(), vec![]),
        (m_run(), vec![]),
        (m_emit_one(), vec![]),
        (m_emit_one_digit(0), vec![]),
        (m_print0_at_3(), vec![]),
        (constant_emitter(0, 2), vec![]),
        (constant_emitter(2, 10), vec![]),
        (constant_emitter(7, 10), vec![]),
        (bb2(), vec![]),
        (bb3(), vec![]),
        (unary_succ(), ones(0)),
        (unary_succ(), ones(3)),
        (binary_counter(), vec![]),
        (binary_counter(), vec!["1".into(), "0".into(), "1".into()]),
        (eraser_halt_symbol(), ones(4)),
        (eraser_halt_symbol(), vec![]),
    ]
}
