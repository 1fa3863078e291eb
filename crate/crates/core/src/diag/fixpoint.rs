//! Fixed points of machine transformations.
//!
//! A [`Transform`] is built from a small combinator language. Each term is
//! evaluated symbolically to an open machine: a table in which some states
//! are holes standing for "continue as the argument machine, from the
//! current tape and head, with its emissions passed through a digit map".
//! Applying the transform plugs a concrete machine into the holes; the
//! fixed point instead points every hole back at the open machine's own
//! start, tracking the accumulated digit map in the state.

use std::collections::HashMap;
use std::fmt;

use crate::codec::{decode, encode, DescriptionNumber, InvalidEncoding};
use crate::corpus;
use crate::machine::{Builder, Convention, Machine, Move, Rule, StateId};
use crate::reduce::to_halt_state;

/// Image of each digit under an emission map; `None` deletes the emission.
type DigitMap = Vec<Option<u8>>;

const DIGITS: usize = 256;

fn identity_map() -> DigitMap {
    (0..DIGITS).map(|d| Some(d as u8)).collect()
}

/// `outer` after `inner`.
fn compose_maps(outer: &DigitMap, inner: &DigitMap) -> DigitMap {
    inner.iter().map(|d| d.and_then(|d| outer[d as usize])).collect()
}

#[derive(Clone, Debug)]
pub enum Transform {
    Identity,
    /// Ignores its argument.
    Constant(Machine),
    /// Runs `context`; entering state `hole` hands control to the argument.
    /// Tape symbols are shared with the argument by name.
    Context { context: Machine, hole: String },
    /// Passes every emission of the inner result through the map.
    MapEmits { map: Vec<(u8, Option<u8>)>, inner: Box<Transform> },
    /// `outer` applied to the result of `inner`.
    Compose(Box<Transform>, Box<Transform>),
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Identity => write!(f, "id"),
            Transform::Constant(m) => write!(f, "const({})", m.name()),
            Transform::Context { context, hole } => write!(f, "ctx({}@{hole})", context.name()),
            Transform::MapEmits { map, inner } => {
                let pairs: Vec<String> = map
                    .iter()
                    .map(|(a, b)| match b {
                        Some(b) => format!("{a}>{b}"),
                        None => format!("{a}>-"),
                    })
                    .collect();
                write!(f, "map[{}]({inner})", pairs.join(","))
            }
            Transform::Compose(a, b) => write!(f, "{a}.{b}"),
        }
    }
}

#[derive(Clone, Debug)]
struct ORule {
    write: Option<String>,
    emit: Option<u8>,
    mv: Move,
    next: usize,
}

#[derive(Clone, Debug)]
enum Node {
    Concrete { name: String, rules: Vec<(String, ORule)> },
    Hole(DigitMap),
    /// Same as the target node; used when splicing.
    Jump(usize),
}

#[derive(Clone, Debug)]
struct Open {
    nodes: Vec<Node>,
    start: usize,
    base: u32,
}

impl Open {
    fn hole() -> Open {
        Open { nodes: vec![Node::Hole(identity_map())], start: 0, base: 2 }
    }

    fn from_machine(m: &Machine, hole: Option<&str>) -> Open {
        let m = to_halt_state(m);
        let nodes = (0..m.num_states())
            .map(|s| {
                if Some(m.states()[s].as_str()) == hole {
                    return Node::Hole(identity_map());
                }
                let rules = (0..m.num_symbols())
                    .filter_map(|a| {
                        m.rule(s, a).map(|r| {
                            let rule = ORule {
                                write: r.write.map(|w| m.symbols()[w].clone()),
                                emit: r.emit,
                                mv: r.mv,
                                next: r.next,
                            };
                            (m.symbols()[a].clone(), rule)
                        })
                    })
                    .collect();
                Node::Concrete { name: m.states()[s].clone(), rules }
            })
            .collect();
        Open { nodes, start: m.start(), base: m.base() as u32 }
    }

    /// Every emission, including those of whatever fills the holes, goes
    /// through `map` afterwards.
    fn mapped(mut self, map: &DigitMap) -> Open {
        for node in &mut self.nodes {
            match node {
                Node::Concrete { rules, .. } => {
                    for (_, r) in rules {
                        r.emit = r.emit.and_then(|d| map[d as usize]);
                    }
                }
                Node::Hole(h) => *h = compose_maps(map, h),
                Node::Jump(_) => {}
            }
        }
        self
    }

    /// Appends `other`, returning the offset of its nodes.
    fn append(&mut self, other: Open) -> usize {
        let offset = self.nodes.len();
        for node in other.nodes {
            self.nodes.push(match node {
                Node::Concrete { name, rules } => Node::Concrete {
                    name,
                    rules: rules
                        .into_iter()
                        .map(|(a, r)| (a, ORule { next: r.next + offset, ..r }))
                        .collect(),
                },
                Node::Jump(t) => Node::Jump(t + offset),
                hole => hole,
            });
        }
        self.base = self.base.max(other.base);
        offset
    }

    /// Fills each hole of `self` with a copy of `inner` under the hole's map.
    fn substitute(mut self, inner: &Open) -> Open {
        let mut copies: HashMap<DigitMap, usize> = HashMap::new();
        for i in 0..self.nodes.len() {
            let Node::Hole(h) = &self.nodes[i] else { continue };
            let h = h.clone();
            let target = match copies.get(&h) {
                Some(&t) => t,
                None => {
                    let copy = inner.clone().mapped(&h);
                    let start = copy.start;
                    let t = self.append(copy) + start;
                    copies.insert(h, t);
                    t
                }
            };
            self.nodes[i] = Node::Jump(target);
        }
        self
    }
}

impl Transform {
    pub fn prepend(digits: &[u8]) -> Transform {
        let mut b = Builder::new("prepend", Convention::HaltState);
        let base = digits.iter().map(|&d| d as u32 + 1).max().unwrap_or(2).max(2);
        b.base(base);
        let states: Vec<StateId> = (0..=digits.len()).map(|i| b.state(&format!("p{i}"))).collect();
        b.set_start(states[0]);
        for (i, &d) in digits.iter().enumerate() {
            b.rule_all(states[i], Rule { write: None, emit: Some(d), mv: Move::Stay, next: states[i + 1] });
        }
        let context = b.build().expect("prefix machine is well formed");
        Transform::Context { context, hole: format!("p{}", digits.len()) }
    }

    pub fn map(pairs: &[(u8, Option<u8>)], inner: Transform) -> Transform {
        Transform::MapEmits { map: pairs.to_vec(), inner: Box::new(inner) }
    }

    pub fn then(self, outer: Transform) -> Transform {
        Transform::Compose(Box::new(outer), Box::new(self))
    }

    fn eval(&self) -> Open {
        match self {
            Transform::Identity => Open::hole(),
            Transform::Constant(m) => Open::from_machine(m, None),
            Transform::Context { context, hole } => Open::from_machine(context, Some(hole)),
            Transform::MapEmits { map, inner } => {
                let mut dm = identity_map();
                let mut base = 2;
                for &(a, b) in map {
                    dm[a as usize] = b;
                    if let Some(b) = b {
                        base = base.max(b as u32 + 1);
                    }
                }
                let mut open = inner.eval().mapped(&dm);
                open.base = open.base.max(base);
                open
            }
            Transform::Compose(outer, inner) => outer.eval().substitute(&inner.eval()),
        }
    }

    /// The transformed machine.
    pub fn apply(&self, m: &Machine) -> Machine {
        let closed = self.eval().substitute(&Open::from_machine(m, None));
        build(&closed, &format!("{self}"))
    }

    pub fn apply_number(&self, n: &DescriptionNumber) -> Result<DescriptionNumber, InvalidEncoding> {
        Ok(encode(&self.apply(&decode(n)?)))
    }
}

/// Builds a concrete machine from an open one, sending every hole back to
/// the start with its map accumulated. Hole chains that return to a
/// visited (node, map) pair without executing a rule become a halt.
fn build(open: &Open, name: &str) -> Machine {
    let mut b = Builder::new(name, Convention::HaltState);
    b.symbol("_");
    let halt = b.state("halt");
    let mut ids: HashMap<(usize, DigitMap), StateId> = HashMap::new();
    let mut queue: Vec<(usize, DigitMap, StateId)> = Vec::new();
    let mut base = open.base.max(2);

    let mut resolve = |node: usize, map: DigitMap, b: &mut Builder, queue: &mut Vec<(usize, DigitMap, StateId)>| {
        let (mut node, mut map) = (node, map);
        let mut seen: Vec<(usize, DigitMap)> = Vec::new();
        loop {
            match &open.nodes[node] {
                Node::Jump(t) => node = *t,
                Node::Hole(h) => {
                    if seen.iter().any(|(n, m)| *n == node && *m == map) {
                        return halt;
                    }
                    seen.push((node, map.clone()));
                    map = compose_maps(&map, h);
                    node = open.start;
                }
                Node::Concrete { name, .. } => {
                    if let Some(&id) = ids.get(&(node, map.clone())) {
                        return id;
                    }
                    let id = b.fresh_state(&format!("{name}.{}", ids.len()));
                    ids.insert((node, map.clone()), id);
                    queue.push((node, map, id));
                    return id;
                }
            }
        }
    };

    let start = resolve(open.start, identity_map(), &mut b, &mut queue);
    b.set_start(start);
    while let Some((node, map, id)) = queue.pop() {
        let Node::Concrete { rules, .. } = &open.nodes[node] else { unreachable!() };
        for (scanned, r) in rules {
            let next = resolve(r.next, map.clone(), &mut b, &mut queue);
            let emit = r.emit.and_then(|d| map[d as usize]);
            if let Some(d) = emit {
                base = base.max(d as u32 + 1);
            }
            let a = b.symbol(scanned);
            let write = r.write.as_ref().map(|w| b.symbol(w));
            b.rule(id, a, Rule { write, emit, mv: r.mv, next });
        }
    }
    b.base(base);
    b.build().expect("fixed point is well formed")
}

/// A machine `e` whose behaviour coincides with that of `f` applied to `e`.
pub fn fixed_point(f: &Transform) -> DescriptionNumber {
    encode(&fixed_point_machine(f))
}

pub fn fixed_point_machine(f: &Transform) -> Machine {
    build(&f.eval(), &format!("fix {f}"))
}

// Contexts name their symbols the way decoded machines do (`s1`, `s2`, ...
// in first-use order), since the hand-over to the argument matches symbols
// by name.

/// Context that writes a mark over blanks and emits 1, then enters the
/// hole: the fixed point extends a block of marks forever.
fn extend_ones() -> Machine {
    let mut b = Builder::new("extend", Convention::HaltState);
    b.base(2);
    let one = b.symbol("s1");
    let walk = b.state("walk");
    let hole = b.state("hole");
    b.set_start(walk);
    b.rule(walk, one, Rule { write: None, emit: None, mv: Move::Right, next: walk });
    b.rule(walk, 0, Rule { write: Some(one), emit: Some(1), mv: Move::Left, next: hole });
    b.build().expect("well formed")
}

/// Context that steps left, marks the cell, emits 0, then enters the hole.
fn march_left() -> Machine {
    let mut b = Builder::new("march", Convention::HaltState);
    b.base(2);
    let x = b.symbol("s1");
    let go = b.state("go");
    let hole = b.state("hole");
    b.set_start(go);
    b.rule_all(go, Rule { write: Some(x), emit: Some(0), mv: Move::Left, next: hole });
    b.build().expect("well formed")
}

/// Context that emits 1 and halts on blank, enters the hole otherwise.
fn guard() -> Machine {
    let mut b = Builder::new("guard", Convention::HaltState);
    b.base(2);
    let x = b.symbol("s1");
    let s = b.state("s");
    let stop = b.state("stop");
    let hole = b.state("hole");
    b.set_start(s);
    b.rule(s, 0, Rule { write: Some(x), emit: Some(1), mv: Move::Stay, next: hole });
    b.rule(s, x, Rule { write: None, emit: Some(0), mv: Move::Stay, next: stop });
    b.build().expect("well formed")
}

/// A fixed list of transforms exercising every combinator.
pub fn builtin_transforms() -> Vec<Transform> {
    use Transform as T;
    let swap = || T::map(&[(0, Some(1)), (1, Some(0))], T::Identity);
    vec![
        T::Identity,
        T::Constant(corpus::m_emit01()),
        T::Constant(corpus::m_halt()),
        T::Constant(corpus::bb2()),
        T::Constant(corpus::m_spin()),
        T::prepend(&[1]),
        T::prepend(&[0, 1]),
        T::prepend(&[1, 1, 0]),
        swap(),
        T::map(&[(0, None)], T::Identity),
        T::map(&[(0, Some(1))], T::prepend(&[0])),
        swap().then(T::prepend(&[1])),
        T::prepend(&[1]).then(swap()),
        T::Context { context: extend_ones(), hole: "hole".into() },
        T::Context { context: march_left(), hole: "hole".into() },
        T::Context { context: guard(), hole: "hole".into() },
        T::prepend(&[1]).then(T::Constant(corpus::m_emit01())),
        T::prepend(&[1]).then(swap()).then(T::prepend(&[0])),
        T::Identity.then(T::Identity),
        T::map(&[(1, Some(2))], T::prepend(&[0, 1])),
        T::prepend(&[0, 0, 1]).then(T::map(&[(0, None)], T::Identity)),
        T::Context { context: corpus::binary_counter(), hole: "nowhere".into() },
        T::Context { context: extend_ones(), hole: "hole".into() }.then(swap()),
    ]
}
