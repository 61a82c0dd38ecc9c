//! Two-counter machines and their encoding into 3-dimensional PTA.
//!
//! A PTA cannot decrement, so a machine configuration `(k_1, k_2)` is
//! represented by counters `(s_1, s_2, l)` with `k_i = s_i - l`; every
//! `(j, j, j)` stands for `(0, 0)`. Decrements and zero tests branch off a
//! gadget child that can only finish when `l ≤ s_i` (`lt_i`) or `l = s_i`
//! (`eq_i`) respectively.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::ptar::{CounterAction, Ptar, PtarTransition};
use crate::semilinear::{LinearSet, SemilinearSet, Vector};
use crate::terms::{RankedAlphabet, Symbol};

/// Breadth-first predecessor links: node ↦ (parent, transition).
type Parents = HashMap<(usize, Vector), Option<((usize, Vector), usize)>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("counter index {0} is not 1 or 2")]
    InvalidCounter(usize),
}

/// Counter indices are 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmOp {
    Inc(usize),
    Dec(usize),
    Zero(usize),
}

impl CmOp {
    pub fn counter(self) -> usize {
        match self {
            CmOp::Inc(i) | CmOp::Dec(i) | CmOp::Zero(i) => i,
        }
    }
}

impl fmt::Display for CmOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmOp::Inc(i) => write!(f, "inc{i}"),
            CmOp::Dec(i) => write!(f, "dec{i}"),
            CmOp::Zero(i) => write!(f, "zero{i}"),
        }
    }
}

/// The other counter.
pub fn flip(i: usize) -> usize {
    3 - i
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmTransition {
    pub from: usize,
    pub op: CmOp,
    pub to: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CmConfig {
    pub state: usize,
    pub counters: [u64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCM {
    states: Vec<String>,
    initial: usize,
    finals: Vec<usize>,
    transitions: Vec<CmTransition>,
}

impl TwoCM {
    pub fn new(
        states: Vec<String>,
        initial: usize,
        finals: Vec<usize>,
        transitions: Vec<CmTransition>,
    ) -> Result<Self, CmError> {
        let n = states.len();
        let state = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(CmError::InvalidState(q))
            }
        };
        state(initial)?;
        finals.iter().try_for_each(|&q| state(q))?;
        for t in &transitions {
            state(t.from)?;
            state(t.to)?;
            if !(1..=2).contains(&t.op.counter()) {
                return Err(CmError::InvalidCounter(t.op.counter()));
            }
        }
        Ok(TwoCM {
            states,
            initial,
            finals,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn transitions(&self) -> &[CmTransition] {
        &self.transitions
    }

    pub fn start(&self) -> CmConfig {
        CmConfig {
            state: self.initial,
            counters: [0, 0],
        }
    }

    pub fn is_accepting(&self, c: &CmConfig) -> bool {
        c.counters == [0, 0] && self.finals.contains(&c.state)
    }

    /// Successors of `c`, with the transition used, in declaration order.
    pub fn cm_step(&self, c: &CmConfig) -> Vec<(usize, CmConfig)> {
        let mut out = Vec::new();
        for (index, t) in self.transitions.iter().enumerate() {
            if t.from != c.state {
                continue;
            }
            let mut k = c.counters;
            let i = t.op.counter() - 1;
            match t.op {
                CmOp::Inc(_) => k[i] += 1,
                CmOp::Dec(_) if k[i] > 0 => k[i] -= 1,
                CmOp::Zero(_) if k[i] == 0 => {}
                _ => continue,
            }
            out.push((
                index,
                CmConfig {
                    state: t.to,
                    counters: k,
                },
            ));
        }
        out
    }

    /// A shortest accepting transition sequence of at most `max_steps`
    /// steps, by breadth-first search.
    pub fn cm_bounded_accepts(&self, max_steps: usize) -> Option<Vec<usize>> {
        let start = self.start();
        let mut parent: HashMap<CmConfig, Option<(CmConfig, usize)>> = HashMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((c, depth)) = queue.pop_front() {
            if self.is_accepting(&c) {
                let mut seq = Vec::new();
                let mut at = c;
                while let Some(Some((prev, t))) = parent.get(&at) {
                    seq.push(*t);
                    at = *prev;
                }
                seq.reverse();
                return Some(seq);
            }
            if depth == max_steps {
                continue;
            }
            for (t, next) in self.cm_step(&c) {
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((c, t)));
                    queue.push_back((next, depth + 1));
                }
            }
        }
        None
    }

    /// Replays `seq` from the start configuration.
    pub fn run(&self, seq: &[usize]) -> Option<CmConfig> {
        let mut c = self.start();
        for &t in seq {
            c = self
                .cm_step(&c)
                .into_iter()
                .find(|(u, _)| *u == t)
                .map(|(_, next)| next)?;
        }
        Some(c)
    }
}

/// The 3-PTA simulating a machine, with `φ`: machine transition `i` became
/// transition `phi[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPta {
    pub ptar: Ptar,
    pub phi: Vec<usize>,
    /// State indices of `lt1`, `lt2`, `eq1`, `eq2`.
    pub lt: [usize; 2],
    pub eq: [usize; 2],
}

impl EncodedPta {
    /// `lt_i` for `i` ∈ {1, 2}.
    pub fn lt(&self, i: usize) -> usize {
        self.lt[i - 1]
    }

    pub fn eq(&self, i: usize) -> usize {
        self.eq[i - 1]
    }

    pub fn is_gadget_state(&self, q: usize) -> bool {
        self.lt.contains(&q) || self.eq.contains(&q)
    }
}

/// The machine counters `(s_1 - l, s_2 - l)` represented by `(s_1, s_2, l)`,
/// if both are nonnegative.
pub fn machine_counters(v: &Vector) -> Option<[u64; 2]> {
    let e = v.entries();
    assert_eq!(e.len(), 3, "encoded counters have dimension 3");
    Some([e[0].checked_sub(e[2])?, e[1].checked_sub(e[2])?])
}

fn v3(a: u64, b: u64, c: u64) -> Vector {
    Vector::from([a, b, c])
}

fn gadget_vectors(lt: bool, i: usize) -> Vec<Vector> {
    match (lt, i) {
        (true, 1) => vec![v3(0, 1, 0), v3(0, 0, 1), v3(1, 0, 1)],
        (true, _) => vec![v3(1, 0, 0), v3(0, 0, 1), v3(0, 1, 1)],
        (false, 1) => vec![v3(1, 0, 1), v3(0, 1, 0)],
        (false, _) => vec![v3(0, 1, 1), v3(1, 0, 0)],
    }
}

fn fresh(states: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while states.contains(&name) {
        name.push('_');
    }
    name
}

pub fn encode(m: &TwoCM) -> EncodedPta {
    let alphabet =
        RankedAlphabet::from_pairs([("σ", 2), ("γ", 1), ("α", 0)]).expect("distinct symbols");
    let (sigma, gamma, alpha) = (Symbol::new("σ"), Symbol::new("γ"), Symbol::new("α"));
    let mut states = m.states().to_vec();
    let mut gadget = |base: &str| {
        let name = fresh(&states, base);
        states.push(name);
        states.len() - 1
    };
    let lt = [gadget("lt1"), gadget("lt2")];
    let eq = [gadget("eq1"), gadget("eq2")];

    let add = CounterAction::Add;
    let mut transitions = Vec::new();
    let mut phi = Vec::with_capacity(m.transitions().len());
    for t in m.transitions() {
        phi.push(transitions.len());
        transitions.push(match t.op {
            CmOp::Inc(i) => PtarTransition {
                from: t.from,
                symbol: gamma.clone(),
                children: vec![(t.to, add(if i == 1 { v3(2, 1, 1) } else { v3(1, 2, 1) }))],
            },
            CmOp::Dec(i) => {
                let d = if i == 1 { v3(0, 1, 1) } else { v3(1, 0, 1) };
                PtarTransition {
                    from: t.from,
                    symbol: sigma.clone(),
                    children: vec![(lt[i - 1], add(d.clone())), (t.to, add(d))],
                }
            }
            CmOp::Zero(i) => PtarTransition {
                from: t.from,
                symbol: sigma.clone(),
                children: vec![(eq[i - 1], add(v3(0, 0, 0))), (t.to, add(v3(0, 0, 0)))],
            },
        });
    }
    let leaf = |from| PtarTransition {
        from,
        symbol: alpha.clone(),
        children: vec![],
    };
    for &f in m.finals() {
        transitions.push(leaf(f));
    }
    for (is_lt, states) in [(true, lt), (false, eq)] {
        for (k, &q) in states.iter().enumerate() {
            for d in gadget_vectors(is_lt, k + 1) {
                transitions.push(PtarTransition {
                    from: q,
                    symbol: gamma.clone(),
                    children: vec![(q, add(d))],
                });
            }
            transitions.push(leaf(q));
        }
    }
    let diagonal = SemilinearSet::new(
        3,
        vec![LinearSet::new(v3(0, 0, 0), vec![v3(1, 1, 1)]).expect("dimension 3")],
    )
    .expect("dimension 3");
    let ptar = Ptar::new(states, alphabet, m.initial(), diagonal, transitions)
        .expect("the construction is well-formed");
    EncodedPta { ptar, phi, lt, eq }
}

/// A monadic computation `(q, w) ⇒* γ^n α` of at most `max_steps` γ-steps,
/// as the transitions used, shortest first. Meant for the gadget states,
/// whose only transitions are `γ` loops and one leaf rule.
pub fn gadget_search(a: &Ptar, q: usize, w: &Vector, max_steps: usize) -> Option<Vec<usize>> {
    let mut parent: Parents = HashMap::new();
    let start = (q, w.clone());
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((node, depth)) = queue.pop_front() {
        let (p, v) = &node;
        let leaf = a
            .transitions()
            .iter()
            .position(|t| t.from == *p && t.children.is_empty());
        if let Some(l) = leaf.filter(|_| a.constraint().contains(v)) {
            let mut seq = vec![l];
            let mut at = node.clone();
            while let Some(Some((prev, t))) = parent.get(&at) {
                seq.push(*t);
                at = prev.clone();
            }
            seq.reverse();
            return Some(seq);
        }
        if depth == max_steps {
            continue;
        }
        for (i, t) in a.transitions().iter().enumerate() {
            if t.from != *p || t.children.len() != 1 {
                continue;
            }
            let (next, act) = &t.children[0];
            let key = (*next, act.apply(v));
            if !parent.contains_key(&key) {
                parent.insert(key.clone(), Some((node.clone(), i)));
                queue.push_back((key, depth + 1));
            }
        }
    }
    None
}
