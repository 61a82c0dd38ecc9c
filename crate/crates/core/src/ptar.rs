//! Non-global Parikh tree automata with reset (PTAR).
//!
//! Counters travel along paths: every child either receives the parent's
//! counters plus a vector, or starts again from zero (reset). A leaf can be
//! produced only when the counters reaching it lie in `C`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::semilinear::{SemilinearSet, Vector};
use crate::terms::{Position, RankedAlphabet, Symbol, Term, TermError, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtarError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("transition {index} has {found} successors but `{symbol}` has rank {expected}")]
    TransitionArity {
        index: usize,
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("no configuration at position {0}")]
    NotAConfiguration(Position),
    #[error("transition {transition} does not apply at {position}: state mismatch")]
    InapplicableTransition {
        transition: usize,
        position: Position,
    },
    #[error("leaf transition {transition} at {position} needs counters in C, got ({counters})")]
    LeafConstraintViolated {
        transition: usize,
        position: Position,
        counters: Vector,
    },
    #[error("the automaton is not linear")]
    NotLinear,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CounterAction {
    Add(Vector),
    Reset,
}

impl CounterAction {
    pub fn apply(&self, w: &Vector) -> Vector {
        match self {
            CounterAction::Add(d) => w.add(d),
            CounterAction::Reset => Vector::zeros(w.dim()),
        }
    }

    pub fn is_reset(&self) -> bool {
        matches!(self, CounterAction::Reset)
    }
}

impl fmt::Display for CounterAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterAction::Add(d) => write!(f, "[{d}]"),
            CounterAction::Reset => f.write_str("[reset]"),
        }
    }
}

/// `q -> σ(q_1 a_1, …, q_n a_n)`; for rank 0 simply `q -> α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PtarTransition {
    pub from: usize,
    pub symbol: Symbol,
    pub children: Vec<(usize, CounterAction)>,
}

impl PtarTransition {
    pub fn add_children(&self) -> impl Iterator<Item = usize> + '_ {
        self.children
            .iter()
            .enumerate()
            .filter(|(_, (_, a))| !a.is_reset())
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub counters: Vector,
}

/// A node of a partially computed tree: a finished symbol or a pending
/// configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Sym(Symbol),
    Config(Configuration),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Sym(s) => write!(f, "{s}"),
            Node::Config(c) => write!(f, "<{} {}>", c.state, c.counters),
        }
    }
}

pub type PartialTree = Term<Node>;

/// Transitions applied, each with the position it rewrote, in order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ComputationTrace {
    pub steps: Vec<(usize, Position)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AutomatonClass {
    Pta,
    Ptar,
    LinearPtar,
}

impl fmt::Display for AutomatonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutomatonClass::Pta => "PTA",
            AutomatonClass::Ptar => "PTAR",
            AutomatonClass::LinearPtar => "LINEAR-PTAR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ptar {
    states: Vec<String>,
    alphabet: RankedAlphabet,
    initial: usize,
    constraint: SemilinearSet,
    transitions: Vec<PtarTransition>,
    by_state_symbol: HashMap<(usize, Symbol), Vec<usize>>,
}

impl Ptar {
    pub fn new(
        states: Vec<String>,
        alphabet: RankedAlphabet,
        initial: usize,
        constraint: SemilinearSet,
        transitions: Vec<PtarTransition>,
    ) -> Result<Self, PtarError> {
        let n = states.len();
        let state = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(PtarError::InvalidState(q))
            }
        };
        state(initial)?;
        let mut by_state_symbol: HashMap<(usize, Symbol), Vec<usize>> = HashMap::new();
        for (index, t) in transitions.iter().enumerate() {
            state(t.from)?;
            let rank = alphabet
                .rank(t.symbol.as_str())
                .ok_or_else(|| TermError::UnknownSymbol(t.symbol.to_string()))?;
            if rank != t.children.len() {
                return Err(PtarError::TransitionArity {
                    index,
                    symbol: t.symbol.to_string(),
                    expected: rank,
                    found: t.children.len(),
                });
            }
            for (q, a) in &t.children {
                state(*q)?;
                if let CounterAction::Add(d) = a {
                    if d.dim() != constraint.dim() {
                        return Err(PtarError::DimensionMismatch {
                            expected: constraint.dim(),
                            found: d.dim(),
                        });
                    }
                }
            }
            by_state_symbol
                .entry((t.from, t.symbol.clone()))
                .or_default()
                .push(index);
        }
        Ok(Ptar {
            states,
            alphabet,
            initial,
            constraint,
            transitions,
            by_state_symbol,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn constraint(&self) -> &SemilinearSet {
        &self.constraint
    }

    pub fn transitions(&self) -> &[PtarTransition] {
        &self.transitions
    }

    pub fn dim(&self) -> usize {
        self.constraint.dim()
    }

    /// The same automaton with another constraint of the same dimension.
    pub fn with_constraint(&self, constraint: SemilinearSet) -> Result<Ptar, PtarError> {
        Ptar::new(
            self.states.clone(),
            self.alphabet.clone(),
            self.initial,
            constraint,
            self.transitions.clone(),
        )
    }

    /// Transitions for `(state, symbol)` in declaration order.
    pub fn transitions_for(&self, state: usize, symbol: &Symbol) -> &[usize] {
        self.by_state_symbol
            .get(&(state, symbol.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_reset_free(&self) -> bool {
        self.transitions
            .iter()
            .all(|t| t.children.iter().all(|(_, a)| !a.is_reset()))
    }

    /// At most one child per transition keeps (and extends) the counters.
    pub fn is_linear(&self) -> bool {
        self.transitions
            .iter()
            .all(|t| t.add_children().count() <= 1)
    }

    /// `PTA` when no reset occurs, otherwise `LINEAR-PTAR` when linear,
    /// otherwise `PTAR`. A reset-free automaton may be linear as well; see
    /// [`is_linear`](Self::is_linear).
    pub fn classify(&self) -> AutomatonClass {
        if self.is_reset_free() {
            AutomatonClass::Pta
        } else if self.is_linear() {
            AutomatonClass::LinearPtar
        } else {
            AutomatonClass::Ptar
        }
    }

    /// The initial partial tree `(q0, 0)`.
    pub fn start(&self) -> PartialTree {
        Term::leaf(Node::Config(Configuration {
            state: self.initial,
            counters: Vector::zeros(self.dim()),
        }))
    }

    /// One rewrite step at `at` with transition `index`.
    pub fn step(
        &self,
        partial: &PartialTree,
        at: &Position,
        index: usize,
    ) -> Result<PartialTree, PtarError> {
        let Node::Config(c) = partial.label_at(at)? else {
            return Err(PtarError::NotAConfiguration(at.clone()));
        };
        let t = self
            .transitions
            .get(index)
            .ok_or(PtarError::InapplicableTransition {
                transition: index,
                position: at.clone(),
            })?;
        if t.from != c.state {
            return Err(PtarError::InapplicableTransition {
                transition: index,
                position: at.clone(),
            });
        }
        let replacement = if t.children.is_empty() {
            if !self.constraint.contains(&c.counters) {
                return Err(PtarError::LeafConstraintViolated {
                    transition: index,
                    position: at.clone(),
                    counters: c.counters.clone(),
                });
            }
            Term::leaf(Node::Sym(t.symbol.clone()))
        } else {
            Term::node(
                Node::Sym(t.symbol.clone()),
                t.children
                    .iter()
                    .map(|(q, a)| {
                        Term::leaf(Node::Config(Configuration {
                            state: *q,
                            counters: a.apply(&c.counters),
                        }))
                    })
                    .collect(),
            )
        };
        Ok(partial.replace_at(at, replacement)?)
    }

    pub fn member(&self, tree: &Tree) -> Result<Option<ComputationTrace>, PtarError> {
        self.derives(self.initial, &Vector::zeros(self.dim()), tree)
    }

    /// A computation `(state, counters) ⇒* tree`, positions relative to the
    /// root of `tree`, in pre-order.
    ///
    /// Top-down backtracking, transitions tried in declaration order, with
    /// outcomes memoised on (node, state, counters).
    pub fn derives(
        &self,
        state: usize,
        counters: &Vector,
        tree: &Tree,
    ) -> Result<Option<ComputationTrace>, PtarError> {
        self.alphabet.check(tree)?;
        if state >= self.states.len() {
            return Err(PtarError::InvalidState(state));
        }
        if counters.dim() != self.dim() {
            return Err(PtarError::DimensionMismatch {
                expected: self.dim(),
                found: counters.dim(),
            });
        }
        let mut nodes = Vec::new();
        flatten(tree, &mut Position::root(), &mut nodes);
        let mut search = Search {
            a: self,
            nodes: &nodes,
            memo: HashMap::new(),
        };
        if search.accepts(0, state, counters).is_none() {
            return Ok(None);
        }
        let mut steps = Vec::with_capacity(nodes.len());
        search.replay(0, state, counters.clone(), &mut steps);
        Ok(Some(ComputationTrace { steps }))
    }

    /// Replays `trace` from `(q0, 0)` and compares the result with `tree`.
    pub fn trace_valid(&self, tree: &Tree, trace: &ComputationTrace) -> bool {
        let mut partial = self.start();
        for (t, at) in &trace.steps {
            match self.step(&partial, at, *t) {
                Ok(next) => partial = next,
                Err(_) => return false,
            }
        }
        finished(&partial).is_some_and(|done| done == *tree)
    }
}

/// The tree of symbols if no configuration is left.
pub fn finished(partial: &PartialTree) -> Option<Tree> {
    let label = match partial.label() {
        Node::Sym(s) => s.clone(),
        Node::Config(_) => return None,
    };
    let kids = partial
        .children()
        .iter()
        .map(finished)
        .collect::<Option<Vec<_>>>()?;
    Some(Term::node(label, kids))
}

struct FlatNode<'a> {
    tree: &'a Tree,
    position: Position,
    children: Vec<usize>,
}

fn flatten<'a>(t: &'a Tree, at: &mut Position, out: &mut Vec<FlatNode<'a>>) -> usize {
    let me = out.len();
    out.push(FlatNode {
        tree: t,
        position: at.clone(),
        children: Vec::new(),
    });
    let mut kids = Vec::with_capacity(t.rank());
    for (i, c) in t.children().iter().enumerate() {
        *at = at.child(i as u32 + 1);
        kids.push(flatten(c, at, out));
        *at = at.parent().expect("child of a node");
    }
    out[me].children = kids;
    me
}

struct Search<'a> {
    a: &'a Ptar,
    nodes: &'a [FlatNode<'a>],
    memo: HashMap<(usize, usize, Vector), Option<usize>>,
}

impl Search<'_> {
    /// The first transition in declaration order leading to success.
    fn accepts(&mut self, node: usize, state: usize, w: &Vector) -> Option<usize> {
        let key = (node, state, w.clone());
        if let Some(r) = self.memo.get(&key) {
            return *r;
        }
        let n = &self.nodes[node];
        let mut found = None;
        for &ti in self.a.transitions_for(state, n.tree.label()) {
            let t = &self.a.transitions[ti];
            let ok = if t.children.is_empty() {
                self.a.constraint.contains(w)
            } else {
                let kids = n.children.clone();
                kids.iter()
                    .zip(&t.children)
                    .all(|(&c, (q, act))| self.accepts(c, *q, &act.apply(w)).is_some())
            };
            if ok {
                found = Some(ti);
                break;
            }
        }
        self.memo.insert(key, found);
        found
    }

    fn replay(&mut self, node: usize, state: usize, w: Vector, steps: &mut Vec<(usize, Position)>) {
        let ti = self.accepts(node, state, &w).expect("replaying a success");
        steps.push((ti, self.nodes[node].position.clone()));
        let kids = self.nodes[node].children.clone();
        let t = &self.a.transitions[ti];
        for (c, (q, act)) in kids.into_iter().zip(t.children.clone()) {
            self.replay(c, q, act.apply(&w), steps);
        }
    }
}
