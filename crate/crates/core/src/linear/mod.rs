//! Linear PTAR: spinal-computation-tree semantics and a non-emptiness
//! decider through Parikh string automata.
//!
//! A linear automaton hands its counters to at most one child per step, so
//! a computation splits into *spines*: maximal runs that follow the counters
//! from a fresh `(q, 0)` down to a leaf (or to a step that resets every
//! child). Every residual child starts again from zero and is the root of
//! another spine. A *spinal computation tree* arranges these spines into a
//! tree; its height counts edges, so a single spine has height 0.

mod decider;

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::parikh_string::PaError;
use crate::ptar::{CounterAction, Node, PartialTree, Ptar, PtarError, PtarTransition};
use crate::semilinear::Vector;
use crate::terms::{Context, Position, Slot, Symbol, Term, Tree};

pub use decider::{
    is_empty_linear, is_empty_linear_with, linearization_pa, EmptinessResult, Linearization,
    LinearizationOrigin,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("the automaton is not linear: transition {0} keeps counters in more than one child")]
    NotLinear(usize),
    #[error(transparent)]
    Ptar(#[from] PtarError),
    #[error(transparent)]
    Pa(#[from] PaError),
    #[error("not a spine computation: {0}")]
    InvalidSpine(String),
}

fn require_linear(a: &Ptar) -> Result<(), LinearError> {
    match a
        .transitions()
        .iter()
        .position(|t| t.add_children().count() > 1)
    {
        Some(i) => Err(LinearError::NotLinear(i)),
        None => Ok(()),
    }
}

/// The automaton over `Q ∪ Q̂` that may only rewrite the configuration which
/// received the counters from its parent. State `q̂` has index `|Q| + q`;
/// transition `i` is the image of transition `i` of the source automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatAutomaton {
    ptar: Ptar,
    base: usize,
}

impl HatAutomaton {
    pub fn new(a: &Ptar) -> Result<Self, LinearError> {
        require_linear(a)?;
        let n = a.states().len();
        let mut states = a.states().to_vec();
        states.extend(a.states().iter().map(|s| format!("{s}^")));
        let transitions = a
            .transitions()
            .iter()
            .map(|t| {
                let mut children = t.children.clone();
                if let Some(i) = t.add_children().next() {
                    children[i].0 += n;
                }
                PtarTransition {
                    from: t.from + n,
                    symbol: t.symbol.clone(),
                    children,
                }
            })
            .collect();
        let ptar = Ptar::new(
            states,
            a.alphabet().clone(),
            a.initial() + n,
            a.constraint().clone(),
            transitions,
        )?;
        Ok(HatAutomaton { ptar, base: n })
    }

    pub fn ptar(&self) -> &Ptar {
        &self.ptar
    }

    pub fn hat(&self, q: usize) -> usize {
        q + self.base
    }

    pub fn is_hatted(&self, q: usize) -> bool {
        q >= self.base
    }
}

pub fn hat_automaton(a: &Ptar) -> Result<HatAutomaton, LinearError> {
    HatAutomaton::new(a)
}

/// A computation of the hat automaton from `(q̂, 0)` until no hatted state
/// is left. Residual configurations are `(q_i, 0)` with `q_i` a state of the
/// source automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpineComputation {
    pub start: usize,
    pub transitions: Vec<usize>,
    pub positions: Vec<Position>,
    pub tree: PartialTree,
}

impl SpineComputation {
    /// Replays `transitions` through the hat automaton from `start`.
    pub fn replay(
        hat: &HatAutomaton,
        start: usize,
        transitions: &[usize],
    ) -> Result<Self, LinearError> {
        let a = hat.ptar();
        if start >= hat.base {
            return Err(PtarError::InvalidState(start).into());
        }
        if transitions.is_empty() {
            return Err(LinearError::InvalidSpine("no steps".into()));
        }
        let mut tree: PartialTree = Term::leaf(Node::Config(crate::ptar::Configuration {
            state: hat.hat(start),
            counters: Vector::zeros(a.dim()),
        }));
        let mut at = Some(Position::root());
        let mut positions = Vec::with_capacity(transitions.len());
        for &t in transitions {
            let Some(p) = at.take() else {
                return Err(LinearError::InvalidSpine(
                    "steps left after the spine ended".into(),
                ));
            };
            tree = a.step(&tree, &p, t)?;
            let next = a.transitions()[t]
                .children
                .iter()
                .position(|(q, _)| hat.is_hatted(*q));
            at = next.map(|i| p.child(i as u32 + 1));
            positions.push(p);
        }
        if at.is_some() {
            return Err(LinearError::InvalidSpine("the spine has not ended".into()));
        }
        Ok(SpineComputation {
            start,
            transitions: transitions.to_vec(),
            positions,
            tree,
        })
    }

    /// Positions of the residual configurations, left to right.
    pub fn statepos(&self) -> Vec<Position> {
        self.residuals().into_iter().map(|(p, _)| p).collect()
    }

    pub fn stateseq(&self) -> Vec<usize> {
        self.residuals().into_iter().map(|(_, q)| q).collect()
    }

    fn residuals(&self) -> Vec<(Position, usize)> {
        let mut out = Vec::new();
        self.tree.visit(&mut Position::root(), &mut |p, t| {
            if let Node::Config(c) = t.label() {
                debug_assert!(c.counters.is_zero());
                out.push((p.clone(), c.state));
            }
        });
        out
    }

    /// `tree(s)` with the residual configurations as variables `x_1..x_ℓ`.
    pub fn context(&self) -> Context<Symbol> {
        let mut k = 0;
        let body = to_slots(&self.tree, &mut k);
        Context::new(body).expect("pre-order numbering yields a context")
    }
}

fn to_slots(t: &PartialTree, k: &mut usize) -> Term<Slot<Symbol>> {
    match t.label() {
        Node::Config(_) => {
            *k += 1;
            Term::leaf(Slot::Var(*k))
        }
        Node::Sym(s) => Term::node(
            Slot::Label(s.clone()),
            t.children().iter().map(|c| to_slots(c, k)).collect(),
        ),
    }
}

impl fmt::Display for SpineComputation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =>", self.start)?;
        for t in &self.transitions {
            write!(f, " t{t}")?;
        }
        write!(f, " {}", self.tree)
    }
}

/// `s(d_1, …, d_ℓ)`: child `i` starts in the `i`-th state of `stateseq(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinalComputationTree {
    pub node: SpineComputation,
    pub children: Vec<SpinalComputationTree>,
}

impl SpinalComputationTree {
    pub fn new(
        node: SpineComputation,
        children: Vec<SpinalComputationTree>,
    ) -> Result<Self, LinearError> {
        let seq = node.stateseq();
        if seq.len() != children.len() || seq.iter().zip(&children).any(|(q, d)| *q != d.node.start)
        {
            return Err(LinearError::InvalidSpine(format!(
                "children start in {:?}, stateseq is {seq:?}",
                children.iter().map(|d| d.node.start).collect::<Vec<_>>()
            )));
        }
        Ok(SpinalComputationTree { node, children })
    }

    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Self::size).sum::<usize>()
    }

    /// The computed tree.
    pub fn value(&self) -> Tree {
        let fillers: Vec<Tree> = self.children.iter().map(Self::value).collect();
        self.node
            .context()
            .compose(&fillers)
            .expect("one child per residual state")
    }

    /// Writes one spine per line, indented by depth.
    pub fn render(&self, states: &[String], out: &mut String) {
        self.render_at(states, 0, out);
    }

    fn render_at(&self, states: &[String], depth: usize, out: &mut String) {
        use std::fmt::Write;
        let s = &self.node;
        let _ = write!(
            out,
            "{:indent$}({}, 0) =>",
            "",
            states[s.start],
            indent = 2 * depth
        );
        for t in &s.transitions {
            let _ = write!(out, " t{t}");
        }
        let shown = s.tree.map(&|n| match n {
            Node::Sym(x) => x.to_string(),
            Node::Config(c) => format!("({}, 0)", states[c.state]),
        });
        let _ = writeln!(out, " {shown}");
        for c in &self.children {
            c.render_at(states, depth + 1, out);
        }
    }
}

pub fn spinal_tree_value(d: &SpinalComputationTree) -> Tree {
    d.value()
}

/// Transition sequences of spine computations from `q`, at most `max_len`
/// steps each, in depth-first order over declaration order.
pub fn for_each_spine<B>(
    a: &Ptar,
    q: usize,
    max_len: usize,
    mut f: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let by_state = transitions_by_state(a);
    let mut stack = Vec::new();
    spines_from(
        a,
        &by_state,
        q,
        &Vector::zeros(a.dim()),
        max_len,
        &mut stack,
        &mut f,
    )
}

fn transitions_by_state(a: &Ptar) -> Vec<Vec<usize>> {
    let mut by_state = vec![Vec::new(); a.states().len()];
    for (i, t) in a.transitions().iter().enumerate() {
        by_state[t.from].push(i);
    }
    by_state
}

fn spines_from<B>(
    a: &Ptar,
    by_state: &[Vec<usize>],
    q: usize,
    w: &Vector,
    budget: usize,
    stack: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if budget == 0 {
        return ControlFlow::Continue(());
    }
    for &ti in &by_state[q] {
        let t = &a.transitions()[ti];
        stack.push(ti);
        let r = match t.add_children().next() {
            None if t.children.is_empty() && !a.constraint().contains(w) => {
                ControlFlow::Continue(())
            }
            None => f(stack),
            Some(i) => {
                let (next, act) = &t.children[i];
                spines_from(a, by_state, *next, &act.apply(w), budget - 1, stack, f)
            }
        };
        stack.pop();
        r?;
    }
    ControlFlow::Continue(())
}

/// Some spinal computation tree from `q` of height at most `max_height`
/// whose spines have at most `max_spine_len` steps. Exhaustive; meant as a
/// test oracle.
pub fn spinal_search(
    a: &Ptar,
    q: usize,
    max_height: usize,
    max_spine_len: usize,
) -> Result<Option<SpinalComputationTree>, LinearError> {
    let hat = HatAutomaton::new(a)?;
    let mut memo = HashMap::new();
    search(a, &hat, q, max_height, max_spine_len, &mut memo)
}

type SearchMemo = HashMap<(usize, usize), Option<SpinalComputationTree>>;

fn search(
    a: &Ptar,
    hat: &HatAutomaton,
    q: usize,
    height: usize,
    max_len: usize,
    memo: &mut SearchMemo,
) -> Result<Option<SpinalComputationTree>, LinearError> {
    if let Some(r) = memo.get(&(q, height)) {
        return Ok(r.clone());
    }
    let mut spines = Vec::new();
    let _ = for_each_spine::<()>(a, q, max_len, |s| {
        spines.push(s.to_vec());
        ControlFlow::Continue(())
    });
    let mut found = None;
    'spines: for s in spines {
        let spine = SpineComputation::replay(hat, q, &s)?;
        let seq = spine.stateseq();
        if !seq.is_empty() && height == 0 {
            continue;
        }
        let mut children = Vec::with_capacity(seq.len());
        for &p in &seq {
            match search(a, hat, p, height - 1, max_len, memo)? {
                Some(d) => children.push(d),
                None => continue 'spines,
            }
        }
        found = Some(SpinalComputationTree::new(spine, children)?);
        break;
    }
    memo.insert((q, height), found.clone());
    Ok(found)
}

/// A spinal computation tree from the initial state whose value is `tree`,
/// found by splitting `tree` into spines directly.
pub fn spinal_search_for(
    a: &Ptar,
    tree: &Tree,
) -> Result<Option<SpinalComputationTree>, LinearError> {
    a.alphabet().check(tree).map_err(PtarError::from)?;
    let hat = HatAutomaton::new(a)?;
    let mut memo = HashMap::new();
    derive(a, &hat, a.initial(), tree, &mut memo)
}

type DeriveMemo = HashMap<(*const Tree, usize), Option<SpinalComputationTree>>;

fn derive(
    a: &Ptar,
    hat: &HatAutomaton,
    q: usize,
    tree: &Tree,
    memo: &mut DeriveMemo,
) -> Result<Option<SpinalComputationTree>, LinearError> {
    let key = (tree as *const Tree, q);
    if let Some(r) = memo.get(&key) {
        return Ok(r.clone());
    }
    let found = match walk(a, hat, q, &Vector::zeros(a.dim()), tree, memo)? {
        Some((steps, children)) => {
            let spine = SpineComputation::replay(hat, q, &steps)?;
            Some(SpinalComputationTree::new(spine, children)?)
        }
        None => None,
    };
    memo.insert(key, found.clone());
    Ok(found)
}

/// Follows the counters from `(q, w)` through `tree`: the spine's steps and
/// the spinal trees of its residual children, left to right.
#[allow(clippy::type_complexity)]
fn walk(
    a: &Ptar,
    hat: &HatAutomaton,
    q: usize,
    w: &Vector,
    tree: &Tree,
    memo: &mut DeriveMemo,
) -> Result<Option<(Vec<usize>, Vec<SpinalComputationTree>)>, LinearError> {
    'transitions: for &ti in a.transitions_for(q, tree.label()) {
        let t = &a.transitions()[ti];
        if t.children.is_empty() {
            if a.constraint().contains(w) {
                return Ok(Some((vec![ti], Vec::new())));
            }
            continue;
        }
        let mut steps = vec![ti];
        let mut children = Vec::new();
        for ((p, act), sub) in t.children.iter().zip(tree.children()) {
            match act {
                CounterAction::Reset => match derive(a, hat, *p, sub, memo)? {
                    Some(d) => children.push(d),
                    None => continue 'transitions,
                },
                CounterAction::Add(_) => match walk(a, hat, *p, &act.apply(w), sub, memo)? {
                    Some((s, c)) => {
                        steps.extend(s);
                        children.extend(c);
                    }
                    None => continue 'transitions,
                },
            }
        }
        return Ok(Some((steps, children)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilinear::SemilinearSet;
    use crate::terms::{parse_tree, RankedAlphabet};

    pub(crate) fn spinal_example() -> Ptar {
        let add = |k| CounterAction::Add(Vector::from([k]));
        let tr = |from, s: &str, children| PtarTransition {
            from,
            symbol: Symbol::new(s),
            children,
        };
        Ptar::new(
            vec!["q".into(), "p".into()],
            RankedAlphabet::from_pairs([("σ", 2), ("α", 0)]).unwrap(),
            0,
            SemilinearSet::universe(1),
            vec![
                tr(0, "σ", vec![(0, CounterAction::Reset), (0, add(1))]),
                tr(0, "σ", vec![(0, add(2)), (1, CounterAction::Reset)]),
                tr(0, "α", vec![]),
                tr(1, "σ", vec![(0, CounterAction::Reset), (0, add(4))]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hat_construction() {
        let a = spinal_example();
        let h = HatAutomaton::new(&a).unwrap();
        assert_eq!(h.ptar().transitions().len(), a.transitions().len());
        assert_eq!(h.ptar().states()[2], "q^");
        assert_eq!(h.ptar().initial(), 2);
        assert_eq!(h.ptar().transitions()[0].children[1].0, 2);
        assert_eq!(
            h.ptar().transitions()[1].children,
            vec![
                (2, CounterAction::Add(Vector::from([2]))),
                (1, CounterAction::Reset)
            ]
        );
        assert!(h.ptar().transitions().iter().all(|t| h.is_hatted(t.from)));
    }

    #[test]
    fn example_spines() {
        let a = spinal_example();
        let h = HatAutomaton::new(&a).unwrap();
        let red = SpineComputation::replay(&h, 0, &[0, 1, 2]).unwrap();
        assert_eq!(
            red.statepos(),
            vec!["1".parse().unwrap(), "22".parse().unwrap()]
        );
        assert_eq!(red.stateseq(), vec![0, 1]);
        assert_eq!(red.context().to_string(), "σ(x1,σ(α,x2))");
        assert!(SpineComputation::replay(&h, 0, &[0, 1]).is_err());
        assert!(SpineComputation::replay(&h, 0, &[2, 2]).is_err());

        // children must start in the states of stateseq
        let leaf =
            SpinalComputationTree::new(SpineComputation::replay(&h, 0, &[2]).unwrap(), vec![])
                .unwrap();
        assert!(matches!(
            SpinalComputationTree::new(red, vec![leaf.clone(), leaf]),
            Err(LinearError::InvalidSpine(_))
        ));
    }

    #[test]
    fn example_value() {
        let a = spinal_example();
        let h = HatAutomaton::new(&a).unwrap();
        let spine = |q, ts: &[usize]| SpineComputation::replay(&h, q, ts).unwrap();
        let d = |s, c| SpinalComputationTree::new(s, c).unwrap();
        let leaf = || d(spine(0, &[2]), vec![]);
        let blue = d(spine(0, &[0, 0, 2]), vec![leaf(), leaf()]);
        let yellow = d(spine(1, &[3, 2]), vec![leaf()]);
        let red = d(spine(0, &[0, 1, 2]), vec![blue, yellow]);
        assert_eq!(red.height(), 2);
        assert_eq!(red.size(), 6);
        assert_eq!(red.value().to_string(), "σ(σ(α,σ(α,α)),σ(α,σ(α,α)))");
        assert_eq!(spinal_tree_value(&leaf()).to_string(), "α");
    }

    #[test]
    fn search_finds_the_example_tree() {
        let a = spinal_example();
        let d = spinal_search(&a, 0, 2, 4).unwrap().unwrap();
        assert!(d.height() <= 2);
        assert!(a.member(&d.value()).unwrap().is_some());
        let t = parse_tree("σ(σ(α,σ(α,α)),σ(α,σ(α,α)))", a.alphabet()).unwrap();
        let e = spinal_search_for(&a, &t).unwrap().unwrap();
        assert_eq!(e.value(), t);
        assert_eq!(e.height(), 2);
        assert_eq!(e.size(), 6);
    }

    #[test]
    fn empty_constraint_blocks_leaves() {
        let a = Ptar::new(
            vec!["q".into()],
            RankedAlphabet::from_pairs([("α", 0)]).unwrap(),
            0,
            SemilinearSet::empty(1),
            vec![PtarTransition {
                from: 0,
                symbol: Symbol::new("α"),
                children: vec![],
            }],
        )
        .unwrap();
        assert!(spinal_search(&a, 0, 3, 3).unwrap().is_none());
        let leaf = a.with_constraint(SemilinearSet::universe(1)).unwrap();
        let d = spinal_search(&leaf, 0, 0, 1).unwrap().unwrap();
        assert_eq!(d.value().to_string(), "α");
        assert_eq!(d.height(), 0);
    }
}
