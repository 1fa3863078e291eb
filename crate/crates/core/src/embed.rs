//! Copying one machine's table into a [`Builder`] under fresh state names.
//! Every program-to-program construction goes through here.

use crate::machine::{Action, Builder, Convention, Machine, Rule, StateId, Sym, HALTMARK};

/// Index maps from an embedded machine into the builder.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub states: Vec<StateId>,
    /// `None` only for the halt mark when embedding into a halt-state builder.
    pub symbols: Vec<Option<Sym>>,
    pub start: StateId,
}

impl Embedded {
    pub fn state(&self, old: StateId) -> StateId {
        self.states[old]
    }

    pub fn symbol(&self, old: Sym) -> Sym {
        self.symbols[old].expect("halt mark has no image in this builder")
    }

    /// Re-indexes a rule of the embedded machine.
    pub fn rule(&self, r: &Rule) -> Rule {
        Rule {
            write: r.write.map(|w| self.symbol(w)),
            emit: r.emit,
            mv: r.mv,
            next: self.state(r.next),
        }
    }
}

/// Adds `m`'s states (named `prefix` + name) and symbols (merged by name) to
/// the builder without installing any rules.
pub fn embed_states(b: &mut Builder, m: &Machine, prefix: &str) -> Embedded {
    let symbols = m
        .symbols()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            if m.convention() == Convention::HaltSymbol
                && i == HALTMARK
                && b.symbol_names().get(HALTMARK).map(String::as_str) != Some(crate::machine::HALTMARK_NAME)
            {
                None
            } else {
                Some(b.symbol(name))
            }
        })
        .collect();
    let states: Vec<StateId> = m
        .states()
        .iter()
        .map(|s| b.fresh_state(&format!("{prefix}{s}")))
        .collect();
    let start = states[m.start()];
    if b.current_base() < m.base() as u32 {
        b.base(m.base() as u32);
    }
    Embedded { states, symbols, start }
}

/// Embeds `m` and installs one rule per (state, scanned symbol) cell as
/// decided by `handle`, which sees the original action and returns the rule
/// to install (already in builder indices) or `None` to leave the cell empty.
pub fn embed_with<F>(b: &mut Builder, m: &Machine, prefix: &str, mut handle: F) -> Embedded
where
    F: FnMut(&mut Builder, &Embedded, StateId, Sym, Action) -> Option<Rule>,
{
    let emb = embed_states(b, m, prefix);
    for s in 0..m.num_states() {
        for a in 0..m.num_symbols() {
            if m.convention() == Convention::HaltSymbol && a == HALTMARK {
                continue;
            }
            let Some(new_a) = emb.symbols[a] else { continue };
            if let Some(r) = handle(b, &emb, s, a, m.action(s, a)) {
                b.rule(emb.state(s), new_a, r);
            }
        }
    }
    emb
}

/// Verbatim copy: rules are re-indexed, halting/stuck cells stay empty.
pub fn embed_verbatim(b: &mut Builder, m: &Machine, prefix: &str) -> Embedded {
    embed_with(b, m, prefix, |_, emb, s, a, _| m.rule(s, a).map(|r| emb.rule(r)))
}
