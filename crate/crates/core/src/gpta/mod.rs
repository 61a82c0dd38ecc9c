//! Global Parikh tree automata.
//!
//! A GPTA guesses a `D`-labelling of the input tree and runs over the
//! labelled tree; it accepts when the run starts in `q0` and the sum of all
//! labels (the extended Parikh image) lies in `C`. Membership does not
//! enumerate labellings: a bottom-up table maps each subtree to the
//! reachable `(state, partial sum)` pairs.

mod exchange;

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::semilinear::{SemilinearSet, Vector};
use crate::terms::{RankedAlphabet, Symbol, Term, TermError, Tree};

pub use exchange::{count_simple_cycles, ExchangeDecomposition, Reorder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GptaError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("label index {0} out of range")]
    InvalidLabel(usize),
    #[error("label vector {0} listed twice")]
    DuplicateLabel(Vector),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("transition {index} has {found} successors but `{symbol}` has rank {expected}")]
    TransitionArity {
        index: usize,
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("labelled tree and run have different shapes")]
    ShapeMismatch,
    #[error("no exchange decomposition found (thresholds l = {l}, p = {p})")]
    NoDecomposition { l: u128, p: usize },
}

/// `q -> ⟨σ, D[label]⟩(children)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GptaTransition {
    pub from: usize,
    pub symbol: Symbol,
    pub label: usize,
    pub children: Vec<usize>,
}

/// A node of a tree over `Σ × D`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledSymbol {
    pub symbol: Symbol,
    pub d: Vector,
}

impl fmt::Display for LabeledSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.symbol, self.d)
    }
}

pub type LabeledTree = Term<LabeledSymbol>;

/// A run: the state at every position, as a tree of the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GptaRun {
    pub states: Term<usize>,
}

/// `(labelled tree, run)` witnessing membership.
pub type GptaWitness = (LabeledTree, GptaRun);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gpta {
    states: Vec<String>,
    alphabet: RankedAlphabet,
    dvectors: Vec<Vector>,
    initial: usize,
    constraint: SemilinearSet,
    transitions: Vec<GptaTransition>,
    by_symbol: HashMap<Symbol, Vec<usize>>,
}

/// Sizes of the membership tables, one per node in pre-order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DpStats {
    pub entries: Vec<usize>,
}

/// Extended Parikh map: the sum of all `D`-components.
pub fn parikh(labeled: &LabeledTree) -> Vector {
    let mut sum = Vector::zeros(labeled.label().d.dim());
    labeled.visit(&mut crate::terms::Position::root(), &mut |_, t| {
        sum.add_assign(&t.label().d)
    });
    sum
}

/// The `Σ`-projection of a labelled tree.
pub fn project(labeled: &LabeledTree) -> Tree {
    labeled.map(&|l: &LabeledSymbol| l.symbol.clone())
}

/// For a `(state, vector)` pair: the transition used and the children's pairs.
type Derivation = (usize, Vec<(usize, Vector)>);

struct DpNode {
    table: IndexMap<(usize, Vector), Derivation>,
    children: Vec<DpNode>,
}

impl Gpta {
    pub fn new(
        states: Vec<String>,
        alphabet: RankedAlphabet,
        dvectors: Vec<Vector>,
        initial: usize,
        constraint: SemilinearSet,
        transitions: Vec<GptaTransition>,
    ) -> Result<Self, GptaError> {
        let n = states.len();
        let state = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(GptaError::InvalidState(q))
            }
        };
        state(initial)?;
        for (i, d) in dvectors.iter().enumerate() {
            if dvectors[..i].contains(d) {
                return Err(GptaError::DuplicateLabel(d.clone()));
            }
            if d.dim() != constraint.dim() {
                return Err(GptaError::DimensionMismatch {
                    expected: constraint.dim(),
                    found: d.dim(),
                });
            }
        }
        let mut by_symbol: HashMap<Symbol, Vec<usize>> = HashMap::new();
        for (index, t) in transitions.iter().enumerate() {
            state(t.from)?;
            t.children.iter().try_for_each(|&q| state(q))?;
            if t.label >= dvectors.len() {
                return Err(GptaError::InvalidLabel(t.label));
            }
            let rank = alphabet
                .rank(t.symbol.as_str())
                .ok_or_else(|| TermError::UnknownSymbol(t.symbol.to_string()))?;
            if rank != t.children.len() {
                return Err(GptaError::TransitionArity {
                    index,
                    symbol: t.symbol.to_string(),
                    expected: rank,
                    found: t.children.len(),
                });
            }
            by_symbol.entry(t.symbol.clone()).or_default().push(index);
        }
        Ok(Gpta {
            states,
            alphabet,
            dvectors,
            initial,
            constraint,
            transitions,
            by_symbol,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn dvectors(&self) -> &[Vector] {
        &self.dvectors
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn constraint(&self) -> &SemilinearSet {
        &self.constraint
    }

    pub fn transitions(&self) -> &[GptaTransition] {
        &self.transitions
    }

    pub fn dim(&self) -> usize {
        self.constraint.dim()
    }

    /// The first transition that justifies the run at this node.
    pub(crate) fn transition_at(&self, labeled: &LabeledTree, run: &Term<usize>) -> Option<usize> {
        let kids: Vec<usize> = run.children().iter().map(|c| *c.label()).collect();
        self.by_symbol
            .get(&labeled.label().symbol)?
            .iter()
            .copied()
            .find(|&i| {
                let t = &self.transitions[i];
                t.from == *run.label()
                    && self.dvectors[t.label] == labeled.label().d
                    && t.children == kids
            })
    }

    /// Every node is justified by a transition, the root state is `q0`, and
    /// the Parikh image lies in `C`.
    pub fn run_valid(&self, labeled: &LabeledTree, run: &GptaRun) -> Result<bool, GptaError> {
        fn same_shape<A, B>(a: &Term<A>, b: &Term<B>) -> bool {
            a.rank() == b.rank()
                && a.children()
                    .iter()
                    .zip(b.children())
                    .all(|(x, y)| same_shape(x, y))
        }
        if !same_shape(labeled, &run.states) {
            return Err(GptaError::ShapeMismatch);
        }
        fn justified(g: &Gpta, l: &LabeledTree, r: &Term<usize>) -> bool {
            g.transition_at(l, r).is_some()
                && l.children()
                    .iter()
                    .zip(r.children())
                    .all(|(a, b)| justified(g, a, b))
        }
        let sum = parikh(labeled);
        if sum.dim() != self.dim() {
            return Ok(false);
        }
        Ok(*run.states.label() == self.initial
            && justified(self, labeled, &run.states)
            && self.constraint.contains(&sum))
    }

    pub fn member(&self, tree: &Tree) -> Result<Option<GptaWitness>, GptaError> {
        self.member_with_stats(tree).map(|(w, _)| w)
    }

    /// Membership plus the size of every node's table.
    pub fn member_with_stats(
        &self,
        tree: &Tree,
    ) -> Result<(Option<GptaWitness>, DpStats), GptaError> {
        self.alphabet.check(tree)?;
        let root = self.tables(tree);
        let mut stats = DpStats::default();
        fn collect(n: &DpNode, out: &mut Vec<usize>) {
            out.push(n.table.len());
            n.children.iter().for_each(|c| collect(c, out));
        }
        collect(&root, &mut stats.entries);
        let key = root
            .table
            .keys()
            .find(|(q, v)| *q == self.initial && self.constraint.contains(v))
            .cloned();
        let witness = key.map(|k| self.rebuild(&root, &k));
        Ok((witness, stats))
    }

    fn tables(&self, tree: &Tree) -> DpNode {
        let children: Vec<DpNode> = tree.children().iter().map(|c| self.tables(c)).collect();
        let mut table = IndexMap::new();
        for &ti in self
            .by_symbol
            .get(tree.label())
            .map(Vec::as_slice)
            .unwrap_or(&[])
        {
            let t = &self.transitions[ti];
            let mut partial: IndexMap<Vector, Vec<(usize, Vector)>> = IndexMap::new();
            partial.insert(self.dvectors[t.label].clone(), Vec::new());
            for (child, &want) in children.iter().zip(&t.children) {
                let mut next = IndexMap::new();
                for (sum, keys) in &partial {
                    for key in child.table.keys().filter(|(q, _)| *q == want) {
                        next.entry(sum.add(&key.1)).or_insert_with(|| {
                            let mut k = keys.clone();
                            k.push(key.clone());
                            k
                        });
                    }
                }
                partial = next;
            }
            for (sum, keys) in partial {
                table.entry((t.from, sum)).or_insert((ti, keys));
            }
        }
        DpNode { table, children }
    }

    fn rebuild(&self, node: &DpNode, key: &(usize, Vector)) -> GptaWitness {
        let (ti, keys) = &node.table[key];
        let t = &self.transitions[*ti];
        let (labels, states): (Vec<_>, Vec<_>) = node
            .children
            .iter()
            .zip(keys)
            .map(|(c, k)| {
                let (l, r) = self.rebuild(c, k);
                (l, r.states)
            })
            .unzip();
        let labeled = Term::node(
            LabeledSymbol {
                symbol: t.symbol.clone(),
                d: self.dvectors[t.label].clone(),
            },
            labels,
        );
        (
            labeled,
            GptaRun {
                states: Term::node(key.0, states),
            },
        )
    }

    /// The bound `|Q| · Π_i (size·max_i + 1)` on the table of a subtree of
    /// the given size, with `max_i` the largest `i`-th entry in `D`.
    pub fn table_bound(&self, size: usize) -> u128 {
        (0..self.dim()).fold(self.states.len() as u128, |acc, i| {
            let m = self.dvectors.iter().map(|d| d[i]).max().unwrap_or(0) as u128;
            acc.saturating_mul(size as u128 * m + 1)
        })
    }
}
