//! Many-one reductions between the halting, printing, n-digit,
//! one-more-digit, infinite-symbol and circle-free problems, each with a
//! declared step overhead, plus the oracle-to-oracle constructions.
//!
//! Every constructed machine uses the halt-state convention. A source
//! machine's halting events are its undefined cells (halt-state) or its
//! rules that write `!` (halt-symbol); cells that would get a halt-symbol
//! machine stuck become stay-put self-loops, so they never halt.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{specialize, specialize_overhead};
use crate::embed::{embed_with, Embedded};
use crate::exec::{Event, EventLog};
use crate::machine::{
    Action, Builder, Convention, Machine, Move, Rule, StateId, Sym, BLANK, HALTMARK,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleAnswer {
    Yes,
    No,
}

impl OracleAnswer {
    pub fn from_bool(b: bool) -> OracleAnswer {
        if b {
            OracleAnswer::Yes
        } else {
            OracleAnswer::No
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("no answer after {cap} variants")]
    Inconclusive { cap: usize },
    #[error("digit base {0} leaves no room for a substitute digit")]
    BaseFull(u8),
}

/// Re-expresses a tape over `from`'s alphabet in `to`'s, by symbol name.
pub fn remap_tape(from: &Machine, to: &Machine, x: &[Sym]) -> Vec<Sym> {
    x.iter()
        .map(|&s| {
            to.symbol_index(&from.symbols()[s])
                .expect("target alphabet contains the source alphabet")
        })
        .collect()
}

fn spin(emb: &Embedded, s: StateId) -> Rule {
    Rule::goto(emb.state(s))
}

fn quiet(emb: &Embedded, r: &Rule) -> Rule {
    Rule { emit: None, ..emb.rule(r) }
}

/// Translates a halt-state machine into a halt-symbol one: each undefined
/// cell writes `!`. Halting step counts are unchanged.
pub fn to_halt_symbol(m: &Machine) -> Machine {
    if m.convention() == Convention::HaltSymbol {
        return m.clone();
    }
    let mut b = Builder::new(format!("{}@hs", m.name()), Convention::HaltSymbol);
    b.base(m.base() as u32);
    let emb = embed_with(&mut b, m, "", |_, emb, s, _, act| match act {
        Action::Apply(r) => Some(emb.rule(&r)),
        _ => Some(Rule { write: Some(HALTMARK), emit: None, mv: Move::Stay, next: emb.state(s) }),
    });
    b.set_start(emb.start);
    b.build().expect("translation is well-formed")
}

/// Translates a halt-symbol machine into a halt-state one: `!`-writing
/// rules are dropped and stuck cells spin.
pub fn to_halt_state(m: &Machine) -> Machine {
    if m.convention() == Convention::HaltState {
        return m.clone();
    }
    let mut b = Builder::new(format!("{}@hst", m.name()), Convention::HaltState);
    let emb = embed_with(&mut b, m, "", |_, emb, s, _, act| match act {
        Action::Apply(r) => Some(emb.rule(&r)),
        Action::Halt => None,
        Action::Stuck => Some(spin(emb, s)),
    });
    b.set_start(emb.start);
    b.build().expect("translation is well-formed")
}

fn finish(b: &mut Builder, start: StateId) -> Machine {
    b.set_start(start);
    b.build().expect("reduction output is well-formed")
}

/// q emits 0 iff p halts on x. q's only emission is that 0.
pub fn halting_to_printing(p: &Machine, x: &[Sym]) -> Machine {
    let mut b = Builder::new(format!("{}@h2p", p.name()), Convention::HaltState);
    let halt = b.state("halted");
    let emb = embed_with(&mut b, p, "p.", |_, emb, s, _, act| match act {
        Action::Apply(r) => Some(quiet(emb, &r)),
        Action::Halt => Some(Rule { write: None, emit: Some(0), mv: Move::Stay, next: halt }),
        Action::Stuck => Some(spin(emb, s)),
    });
    let inner = finish(&mut b, emb.start);
    specialize(&inner, &remap_tape(p, &inner, x))
}

pub fn halting_to_printing_overhead(b: u64, input_len: usize) -> u64 {
    specialize_overhead(input_len) + b + 4
}

/// p' halts iff p emits `symbol`, right at that emission.
pub fn printing_to_halting(p: &Machine, symbol: u8) -> Machine {
    let mut b = Builder::new(format!("{}@p2h", p.name()), Convention::HaltState);
    let halt = b.state("halted");
    let emb = embed_with(&mut b, p, "p.", |_, emb, s, _, act| match act {
        Action::Apply(r) if r.emit == Some(symbol) => Some(Rule { next: halt, ..emb.rule(&r) }),
        Action::Apply(r) => Some(emb.rule(&r)),
        _ => Some(spin(emb, s)),
    });
    finish(&mut b, emb.start)
}

pub fn printing_to_halting_overhead(b: u64) -> u64 {
    b + 2
}

/// Product of `m` with `copies` counter values. `route(copy, rule, emb)`
/// gives the rule for an applicable cell of a copy; halting and stuck
/// cells spin.
fn counted<F>(b: &mut Builder, m: &Machine, copies: usize, mut route: F) -> Vec<Embedded>
where
    F: FnMut(usize, &Rule, &[Embedded]) -> Rule,
{
    let embs: Vec<Embedded> = (0..copies)
        .map(|c| crate::embed::embed_states(b, m, &format!("c{c}.")))
        .collect();
    for (c, emb) in embs.iter().enumerate() {
        for s in 0..m.num_states() {
            for a in 0..m.num_symbols() {
                if m.convention() == Convention::HaltSymbol && a == HALTMARK {
                    continue;
                }
                let Some(na) = emb.symbols[a] else { continue };
                let rule = match m.action(s, a) {
                    Action::Apply(r) => route(c, &r, &embs),
                    _ => spin(emb, s),
                };
                b.rule(emb.state(s), na, rule);
            }
        }
    }
    embs
}

/// p halts iff e emits at least `n` digits; it halts at the n-th emission.
pub fn ndigits_to_halting(e: &Machine, n: usize) -> Machine {
    let mut b = Builder::new(format!("{}@nd2h{n}", e.name()), Convention::HaltState);
    let halt = b.state("halted");
    if n == 0 {
        // Zero digits are always there.
        return finish(&mut b, halt);
    }
    let embs = counted(&mut b, e, n, |c, r, embs| match r.emit {
        Some(_) if c + 1 == n => Rule { next: halt, ..embs[c].rule(r) },
        Some(_) => Rule { next: embs[c + 1].state(r.next), ..embs[c].rule(r) },
        None => embs[c].rule(r),
    });
    finish(&mut b, embs[0].start)
}

pub fn ndigits_to_halting_overhead(b: u64, n: usize) -> u64 {
    b + 2 * n as u64 + 2
}

/// q emits 1, 1, 1, ... forever once e halts on x, and nothing otherwise.
pub fn halting_to_ndigits(e: &Machine, x: &[Sym]) -> Machine {
    let mut b = Builder::new(format!("{}@h2nd", e.name()), Convention::HaltState);
    let ones = b.state("ones");
    let emb = embed_with(&mut b, e, "e.", |_, emb, s, _, act| match act {
        Action::Apply(r) => Some(quiet(emb, &r)),
        Action::Halt => Some(Rule { write: None, emit: Some(1), mv: Move::Stay, next: ones }),
        Action::Stuck => Some(spin(emb, s)),
    });
    b.rule_all(ones, Rule { write: None, emit: Some(1), mv: Move::Stay, next: ones });
    let inner = finish(&mut b, emb.start);
    specialize(&inner, &remap_tape(e, &inner, x))
}

pub fn halting_to_ndigits_overhead(b: u64, input_len: usize, n: usize) -> u64 {
    specialize_overhead(input_len) + b + 2 * n as u64 + 4
}

/// p halts iff e emits a digit at some step numbered greater than `t`.
pub fn omd_to_halting(e: &Machine, t: u64) -> Machine {
    let mut b = Builder::new(format!("{}@omd2h{t}", e.name()), Convention::HaltState);
    let halt = b.state("halted");
    let cap = t as usize;
    let embs = counted(&mut b, e, cap + 1, |c, r, embs| {
        if r.emit.is_some() && c == cap {
            Rule { next: halt, ..embs[c].rule(r) }
        } else {
            Rule { next: embs[(c + 1).min(cap)].state(r.next), ..embs[c].rule(r) }
        }
    });
    finish(&mut b, embs[0].start)
}

pub fn omd_to_halting_overhead(b: u64, t: u64) -> u64 {
    b + t + 4
}

/// Same machine as [`halting_to_ndigits`], asked about time 0.
pub fn halting_to_omd(e: &Machine, x: &[Sym]) -> (Machine, u64) {
    (halting_to_ndigits(e, x), 0)
}

pub fn halting_to_omd_overhead(b: u64, input_len: usize) -> u64 {
    halting_to_ndigits_overhead(b, input_len, 1)
}

/// p with its first `k` emissions of 0 replaced by the substitute digit,
/// which is p's old base (the base grows by one).
pub fn variant_pk(p: &Machine, k: usize) -> Result<Machine, ReduceError> {
    if k == 0 {
        return Ok(p.clone());
    }
    if p.base() == 255 {
        return Err(ReduceError::BaseFull(p.base()));
    }
    let bar = p.base();
    let src = to_halt_state(p);
    let mut b = Builder::new(format!("{}@v{k}", p.name()), Convention::HaltState);
    let embs = (0..=k)
        .map(|c| crate::embed::embed_states(&mut b, &src, &format!("c{c}.")))
        .collect::<Vec<_>>();
    for (c, emb) in embs.iter().enumerate() {
        for s in 0..src.num_states() {
            for a in 0..src.num_symbols() {
                let Some(r) = src.rule(s, a) else { continue };
                let rule = if c < k && r.emit == Some(0) {
                    Rule { emit: Some(bar), next: embs[c + 1].state(r.next), ..emb.rule(r) }
                } else {
                    emb.rule(r)
                };
                b.rule(emb.state(s), emb.symbol(a), rule);
            }
        }
    }
    b.base(bar as u32 + 1);
    Ok(finish(&mut b, embs[0].start))
}

pub fn variant_pk_overhead(b: u64, k: usize) -> u64 {
    b + 2 * k as u64
}

/// Result of the infinite-symbol procedure: the first variant that no
/// longer prints 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InfiniteAnswer {
    pub answer: OracleAnswer,
    pub k: usize,
}

/// Asks the printing oracle about `variant_pk(p, k)` for k = 1, 2, ... up to
/// `cap`. A No at k means p emits at most k zeros.
pub fn infinite_from_printing<F>(
    p: &Machine,
    mut printing_oracle: F,
    cap: usize,
) -> Result<InfiniteAnswer, ReduceError>
where
    F: FnMut(&Machine) -> OracleAnswer,
{
    for k in 1..=cap {
        let pk = variant_pk(p, k)?;
        if printing_oracle(&pk) == OracleAnswer::No {
            return Ok(InfiniteAnswer { answer: OracleAnswer::No, k });
        }
    }
    Err(ReduceError::Inconclusive { cap })
}

/// Circle-free in base 2 iff infinitely many 0s or infinitely many 1s.
pub fn circlefree_from_infinite<F>(e: &Machine, mut infinite_oracle: F) -> OracleAnswer
where
    F: FnMut(&Machine, u8) -> OracleAnswer,
{
    if infinite_oracle(e, 0) == OracleAnswer::Yes {
        return OracleAnswer::Yes;
    }
    infinite_oracle(e, 1)
}

/// The machine-to-machine reductions with their source and target
/// questions, for uniform bounded checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "reduction")]
pub enum Reduction {
    HaltingToPrinting,
    PrintingToHalting { symbol: u8 },
    NDigitsToHalting { n: usize },
    /// `n` is the digit count used when checking.
    HaltingToNDigits { n: usize },
    OmdToHalting { t: u64 },
    HaltingToOmd,
}

impl Reduction {
    pub fn name(&self) -> &'static str {
        match self {
            Reduction::HaltingToPrinting => "halting-to-printing",
            Reduction::PrintingToHalting { .. } => "printing-to-halting",
            Reduction::NDigitsToHalting { .. } => "ndigits-to-halting",
            Reduction::HaltingToNDigits { .. } => "halting-to-ndigits",
            Reduction::OmdToHalting { .. } => "omd-to-halting",
            Reduction::HaltingToOmd => "halting-to-omd",
        }
    }

    /// Target machine and its input.
    pub fn apply(&self, p: &Machine, x: &[Sym]) -> (Machine, Vec<Sym>) {
        match *self {
            Reduction::HaltingToPrinting => (halting_to_printing(p, x), vec![]),
            Reduction::HaltingToNDigits { .. } => (halting_to_ndigits(p, x), vec![]),
            Reduction::HaltingToOmd => (halting_to_omd(p, x).0, vec![]),
            Reduction::PrintingToHalting { symbol } => {
                let q = printing_to_halting(p, symbol);
                let y = remap_tape(p, &q, x);
                (q, y)
            }
            Reduction::NDigitsToHalting { n } => {
                let q = ndigits_to_halting(p, n);
                let y = if n == 0 { vec![] } else { remap_tape(p, &q, x) };
                (q, y)
            }
            Reduction::OmdToHalting { t } => {
                let q = omd_to_halting(p, t);
                let y = remap_tape(p, &q, x);
                (q, y)
            }
        }
    }

    pub fn source_event(&self) -> Event {
        match *self {
            Reduction::HaltingToPrinting
            | Reduction::HaltingToNDigits { .. }
            | Reduction::HaltingToOmd => Event::Halt,
            Reduction::PrintingToHalting { symbol } => Event::Emit(symbol),
            Reduction::NDigitsToHalting { n } => Event::NthDigit(n),
            Reduction::OmdToHalting { t } => Event::EmitAfter(t),
        }
    }

    pub fn target_event(&self) -> Event {
        match *self {
            Reduction::HaltingToPrinting => Event::Emit(0),
            Reduction::HaltingToNDigits { n } => Event::NthDigit(n),
            Reduction::HaltingToOmd => Event::EmitAfter(0),
            _ => Event::Halt,
        }
    }

    pub fn overhead(&self, b: u64, input_len: usize) -> u64 {
        match *self {
            Reduction::HaltingToPrinting => halting_to_printing_overhead(b, input_len),
            Reduction::PrintingToHalting { .. } => printing_to_halting_overhead(b),
            Reduction::NDigitsToHalting { n } => ndigits_to_halting_overhead(b, n),
            Reduction::HaltingToNDigits { n } => halting_to_ndigits_overhead(b, input_len, n),
            Reduction::OmdToHalting { t } => omd_to_halting_overhead(b, t),
            Reduction::HaltingToOmd => halting_to_omd_overhead(b, input_len),
        }
    }
}

fn event_holds(log: &EventLog, event: Event, b: u64) -> bool {
    match event {
        Event::NthDigit(0) => true,
        _ => log.within(event, b),
    }
}

/// A disagreement between the source question at budget `budget` and the
/// target question at the inflated budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub reduction: Reduction,
    pub budget: u64,
    pub source: bool,
    pub target_at_overhead: bool,
    pub target_at_budget: bool,
}

/// Bounded agreement at each budget: the source event within B implies the
/// target event within ov(B), and the target event within B implies the
/// source event within B. One simulation per side at the largest budget.
pub fn bounded_agreement(r: Reduction, p: &Machine, x: &[Sym], budgets: &[u64]) -> Vec<Mismatch> {
    let max_b = budgets.iter().copied().max().unwrap_or(0);
    let max_ov = budgets.iter().map(|&b| r.overhead(b, x.len())).max().unwrap_or(0);
    let src = EventLog::record(p, x, max_b, usize::MAX);
    let (q, y) = r.apply(p, x);
    let cap = match r.target_event() {
        Event::NthDigit(n) => n,
        _ => usize::MAX,
    };
    let tgt = EventLog::record(&q, &y, max_ov.max(max_b), cap.max(1));
    budgets
        .iter()
        .filter_map(|&b| {
            let s = event_holds(&src, r.source_event(), b);
            let t_ov = event_holds(&tgt, r.target_event(), r.overhead(b, x.len()));
            let t_b = event_holds(&tgt, r.target_event(), b);
            let ok = (!s || t_ov) && (!t_b || s);
            (!ok).then_some(Mismatch {
                reduction: r,
                budget: b,
                source: s,
                target_at_overhead: t_ov,
                target_at_budget: t_b,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Pi-0-2 construction

/// Symbols a predicate machine reads: its input is
/// `x ++ "$" ++ "1"^n ++ "," ++ "1"^k` starting at cell 0.
pub const PRED_DOLLAR: &str = "$";
pub const PRED_COMMA: &str = ",";
pub const PRED_ONE: &str = "1";

/// The predicate's input tape for (n, k), over the predicate's alphabet.
pub fn pred_input(pred: &Machine, x: &[Sym], n: usize, k: usize) -> Vec<Sym> {
    let d = pred.symbol_index(PRED_DOLLAR).expect("predicate alphabet has `$`");
    let c = pred.symbol_index(PRED_COMMA).expect("predicate alphabet has `,`");
    let o = pred.symbol_index(PRED_ONE).expect("predicate alphabet has `1`");
    let mut t = x.to_vec();
    t.push(d);
    t.extend(std::iter::repeat_n(o, n));
    t.push(c);
    t.extend(std::iter::repeat_n(o, k));
    t
}

/// e emits one digit per n for which a k with pred(x, n, k) accepting is
/// found, searching k = 0, 1, 2, ... for n = 0, 1, 2, ... in turn.
///
/// The predicate must start at cell 0, never move left of it, never write
/// blank and only overwrite non-blank cells. Its first emission is its
/// answer (1 accepts, anything else rejects); halting without an emission
/// rejects.
///
/// Tape layout of e: the predicate's workspace from cell 0, a wall at cell
/// -1, and to its left one mark per unit of n and of k (reset k units turn
/// into filler).
pub fn pi02_to_circlefree(pred: &Machine, x: &[Sym]) -> Machine {
    let mut b = Builder::new(format!("{}@pi02", pred.name()), Convention::HaltState);
    let x_names: Vec<String> = x.iter().map(|&s| pred.symbols()[s].clone()).collect();

    let acc = b.state("acc.left");
    let rej = b.state("rej.left");
    let pe = crate::embed::embed_states(&mut b, pred, "pred.");
    // The predicate's answers are intercepted.
    for s in 0..pred.num_states() {
        for a in 0..pred.num_symbols() {
            if pred.convention() == Convention::HaltSymbol && a == HALTMARK {
                continue;
            }
            let Some(na) = pe.symbols[a] else { continue };
            let rule = match pred.action(s, a) {
                Action::Apply(r) => match r.emit {
                    Some(1) => Rule { emit: None, next: acc, ..pe.rule(&r) },
                    Some(_) => Rule { emit: None, next: rej, ..pe.rule(&r) },
                    None => pe.rule(&r),
                },
                _ => Rule::goto(rej),
            };
            b.rule(pe.state(s), na, rule);
        }
    }

    let dollar = b.symbol(PRED_DOLLAR);
    let comma = b.symbol(PRED_COMMA);
    let one = b.symbol(PRED_ONE);
    let xs: Vec<Sym> = x_names.iter().map(|n| b.symbol(n)).collect();
    let wall = b.fresh_symbol("@|");
    let mark_n = b.fresh_symbol("@n");
    let mark_k = b.fresh_symbol("@k");
    let filler = b.fresh_symbol("@x");
    let seen_n = b.fresh_symbol("@N");
    let seen_k = b.fresh_symbol("@K");

    let st = |b: &mut Builder, name: &str| b.fresh_state(name);
    let init = st(&mut b, "init");
    let put_wall = st(&mut b, "init.wall");
    let erase = st(&mut b, "erase");
    let to_wall = st(&mut b, "erase.back");
    let writers: Vec<StateId> = (0..=xs.len()).map(|i| st(&mut b, &format!("x{i}"))).collect();
    let n_start = st(&mut b, "n.start");
    let n_left = st(&mut b, "n.left");
    let n_right = st(&mut b, "n.right");
    let n_restore = st(&mut b, "n.restore");
    let n_end = st(&mut b, "n.end");
    let k_start = st(&mut b, "k.start");
    let k_left = st(&mut b, "k.left");
    let k_right = st(&mut b, "k.right");
    let k_restore = st(&mut b, "k.restore");
    let acc_reset = st(&mut b, "acc.reset");
    let rej_add = st(&mut b, "rej.add");
    let back = st(&mut b, "back");

    let mv = |mv: Move, next: StateId| Rule { write: None, emit: None, mv, next };
    let put = |w: Sym, mv: Move, next: StateId| Rule { write: Some(w), emit: None, mv, next };

    // Every symbol is now known, so blanket rules cover the full alphabet.
    b.rule_all(init, mv(Move::Left, put_wall));
    b.rule_all(put_wall, put(wall, Move::Right, erase));

    b.rule_all(erase, put(BLANK, Move::Right, erase));
    b.rule(erase, BLANK, mv(Move::Left, to_wall));
    b.rule_all(to_wall, mv(Move::Left, to_wall));
    b.rule(to_wall, wall, mv(Move::Right, writers[0]));

    for (i, &s) in xs.iter().enumerate() {
        b.rule_all(writers[i], put(s, Move::Right, writers[i + 1]));
    }
    b.rule_all(writers[xs.len()], put(dollar, Move::Right, n_start));

    // Copy n: visit each n mark, append a 1 to the workspace per visit.
    let copy = |b: &mut Builder,
                start: StateId,
                left: StateId,
                right: StateId,
                restore: StateId,
                mark: Sym,
                seen: Sym| {
        b.rule_all(start, mv(Move::Left, left));
        b.rule_all(left, mv(Move::Left, left));
        b.rule(left, mark, put(seen, Move::Right, right));
        b.rule(left, BLANK, mv(Move::Right, restore));
        b.rule_all(right, mv(Move::Right, right));
        b.rule(right, BLANK, put(one, Move::Left, left));
        b.rule_all(restore, mv(Move::Right, restore));
        b.rule(restore, seen, put(mark, Move::Right, restore));
    };
    copy(&mut b, n_start, n_left, n_right, n_restore, mark_n, seen_n);
    b.rule(n_restore, wall, mv(Move::Right, n_end));
    b.rule_all(n_end, mv(Move::Right, n_end));
    b.rule(n_end, BLANK, put(comma, Move::Right, k_start));
    copy(&mut b, k_start, k_left, k_right, k_restore, mark_k, seen_k);
    b.rule(k_restore, wall, mv(Move::Right, pe.start));

    // Accept: emit at the wall, retire the k marks, add an n mark.
    b.rule_all(acc, mv(Move::Left, acc));
    b.rule(acc, wall, Rule { write: None, emit: Some(1), mv: Move::Left, next: acc_reset });
    b.rule_all(acc_reset, mv(Move::Left, acc_reset));
    b.rule(acc_reset, mark_k, put(filler, Move::Left, acc_reset));
    b.rule(acc_reset, BLANK, put(mark_n, Move::Right, back));
    // Reject: add a k mark.
    b.rule_all(rej, mv(Move::Left, rej));
    b.rule(rej, wall, mv(Move::Left, rej_add));
    b.rule_all(rej_add, mv(Move::Left, rej_add));
    b.rule(rej_add, BLANK, put(mark_k, Move::Right, back));
    b.rule_all(back, mv(Move::Right, back));
    b.rule(back, wall, mv(Move::Right, erase));

    finish(&mut b, init)
}

fn pred_builder(name: &str) -> (Builder, Sym, Sym, Sym) {
    let mut b = Builder::new(name, Convention::HaltState);
    let d = b.symbol(PRED_DOLLAR);
    let c = b.symbol(PRED_COMMA);
    let o = b.symbol(PRED_ONE);
    (b, d, c, o)
}

fn answer(d: u8, next: StateId) -> Rule {
    Rule { write: None, emit: Some(d), mv: Move::Stay, next }
}

/// Accepts iff k = n, matching units of n and k with marks.
pub fn pred_k_equals_n() -> Machine {
    let (mut b, dollar, comma, one) = pred_builder("PRED_K_EQ_N");
    let seek = b.state("seek");
    let scan_n = b.state("scan.n");
    let find_k = b.state("find.k");
    let in_k = b.state("in.k");
    let ret = b.state("return");
    let check = b.state("check");
    let halt = b.state("done");
    let xn = b.symbol("X");
    let yk = b.symbol("Y");
    let r = |w: Option<Sym>, mv: Move, next: StateId| Rule { write: w, emit: None, mv, next };
    b.rule_all(seek, r(None, Move::Right, seek));
    b.rule(seek, dollar, r(None, Move::Right, scan_n));
    b.rule(scan_n, xn, r(None, Move::Right, scan_n));
    b.rule(scan_n, one, r(Some(xn), Move::Right, find_k));
    b.rule(scan_n, comma, r(None, Move::Right, check));
    b.rule_all(find_k, r(None, Move::Right, find_k));
    b.rule(find_k, comma, r(None, Move::Right, in_k));
    b.rule(in_k, yk, r(None, Move::Right, in_k));
    b.rule(in_k, one, r(Some(yk), Move::Left, ret));
    b.rule(in_k, BLANK, answer(0, halt));
    b.rule_all(ret, r(None, Move::Left, ret));
    b.rule(ret, dollar, r(None, Move::Right, scan_n));
    b.rule(check, yk, r(None, Move::Right, check));
    b.rule(check, one, answer(0, halt));
    b.rule(check, BLANK, answer(1, halt));
    finish(&mut b, seek)
}

/// Accepts iff n < 3, whatever k is.
pub fn pred_n_below_3() -> Machine {
    let (mut b, dollar, comma, one) = pred_builder("PRED_N_LT_3");
    let seek = b.state("seek");
    let c: Vec<StateId> = (0..3).map(|i| b.state(&format!("n{i}"))).collect();
    let halt = b.state("done");
    b.rule_all(seek, Rule { write: None, emit: None, mv: Move::Right, next: seek });
    b.rule(seek, dollar, Rule { write: None, emit: None, mv: Move::Right, next: c[0] });
    for i in 0..3 {
        b.rule(c[i], comma, answer(1, halt));
        let more = match c.get(i + 1) {
            Some(&n) => Rule { write: None, emit: None, mv: Move::Right, next: n },
            None => answer(0, halt),
        };
        b.rule(c[i], one, more);
    }
    finish(&mut b, seek)
}

/// Rejects everything.
pub fn pred_reject_all() -> Machine {
    let (mut b, ..) = pred_builder("PRED_REJECT");
    let q = b.state("q0");
    let halt = b.state("done");
    b.rule_all(q, answer(0, halt));
    finish(&mut b, q)
}
