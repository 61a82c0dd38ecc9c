//! Ranked alphabets, trees, positions, contexts and spines.
//!
//! Trees are immutable and cheap to clone: children live behind an `Arc`, so
//! [`Term::replace_at`] only rebuilds the nodes on the path to the replaced
//! position and shares every other subtree with the original.

mod context;
mod parse;

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

pub use context::{spine, Context, Slot, Spine};
pub(crate) use parse::is_symbol_char;
pub use parse::{parse_context, parse_tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {0} is not a position of the tree")]
    PositionOutOfRange(Position),
    #[error("expected {expected} fillers, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has rank {expected} but is applied to {found} arguments")]
    IllRanked {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// An interned-ish symbol name. Cloning is a reference-count bump.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite map from symbols to ranks, kept in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankedAlphabet {
    ranks: IndexMap<Symbol, usize>,
}

impl RankedAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, rank)` pairs; duplicates are an error.
    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, TermError> {
        let mut alphabet = Self::new();
        for (name, rank) in pairs {
            alphabet.insert(Symbol::new(name), rank)?;
        }
        Ok(alphabet)
    }

    pub fn insert(&mut self, symbol: Symbol, rank: usize) -> Result<(), TermError> {
        if self.ranks.contains_key(&symbol) {
            return Err(TermError::DuplicateSymbol(symbol.to_string()));
        }
        self.ranks.insert(symbol, rank);
        Ok(())
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.ranks.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.ranks.contains_key(name)
    }

    /// The canonical `Symbol` handle for `name`, if declared.
    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.ranks.get_key_value(name).map(|(s, _)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, usize)> + '_ {
        self.ranks.iter().map(|(s, r)| (s, *r))
    }

    pub fn symbols_of_rank(&self, rank: usize) -> impl Iterator<Item = &Symbol> + '_ {
        self.ranks
            .iter()
            .filter(move |(_, r)| **r == rank)
            .map(|(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Without a nullary symbol no finite tree exists over this alphabet.
    pub fn has_leaf_symbol(&self) -> bool {
        self.ranks.values().any(|r| *r == 0)
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.values().copied().max().unwrap_or(0)
    }

    /// Checks that every node of `tree` uses a declared symbol with the right
    /// number of children.
    pub fn check(&self, tree: &Tree) -> Result<(), TermError> {
        let rank = self
            .rank(tree.label().as_str())
            .ok_or_else(|| TermError::UnknownSymbol(tree.label().to_string()))?;
        if rank != tree.rank() {
            return Err(TermError::IllRanked {
                symbol: tree.label().to_string(),
                expected: rank,
                found: tree.rank(),
            });
        }
        tree.children().iter().try_for_each(|c| self.check(c))
    }
}

/// A tree position: a sequence of 1-based child indices; empty is the root.
///
/// The derived ordering is the lexicographic order on positions: a proper
/// prefix sorts first, otherwise the first differing index decides.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<u32>);

#[allow(clippy::len_without_is_empty)] // `is_root` is the emptiness test
impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    /// Panics if any index is zero.
    pub fn new(indices: Vec<u32>) -> Self {
        assert!(indices.iter().all(|&i| i >= 1), "positions are 1-based");
        Position(indices)
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: u32) -> Self {
        assert!(index >= 1, "positions are 1-based");
        let mut v = self.0.clone();
        v.push(index);
        Position(v)
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, init) = self.0.split_last()?;
        Some(Position(init.to_vec()))
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `other` with `self` stripped from the front, if `self` is a prefix.
    pub fn relative(&self, other: &Position) -> Option<Position> {
        other
            .0
            .strip_prefix(self.0.as_slice())
            .map(|rest| Position(rest.to_vec()))
    }

    pub fn concat(&self, suffix: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&suffix.0);
        Position(v)
    }

    /// Longest common prefix.
    pub fn common_prefix(&self, other: &Position) -> Position {
        let n = self
            .0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count();
        Position(self.0[..n].to_vec())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Position {
    type Err = TermError;

    /// Accepts `ε` (or the empty string) for the root, dot-separated indices
    /// such as `2.1.1`, or undotted single digits such as `211`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" {
            return Ok(Position::root());
        }
        let bad = || TermError::Parse {
            offset: 0,
            message: format!("malformed position `{s}`"),
        };
        let parts: Vec<u32> = if s.contains('.') {
            s.split('.')
                .map(|p| p.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        if parts.contains(&0) {
            return Err(bad());
        }
        Ok(Position(parts))
    }
}

/// `u ≤_lex v` as an [`Ordering`].
pub fn lex_compare(u: &Position, v: &Position) -> Ordering {
    u.cmp(v)
}

/// Neither position is a prefix of the other.
pub fn independent(a: &Position, b: &Position) -> bool {
    !a.is_prefix_of(b) && !b.is_prefix_of(a)
}

/// A ranked term with labels of type `L`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term<L> {
    label: L,
    children: Arc<[Term<L>]>,
}

/// Trees over a ranked alphabet.
pub type Tree = Term<Symbol>;

/// A complete (root-to-leaf) path and its label word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletePath<L> {
    pub positions: Vec<Position>,
    pub word: Vec<L>,
}

impl<L> Term<L> {
    pub fn leaf(label: L) -> Self {
        Term {
            label,
            children: Arc::from(Vec::new()),
        }
    }

    pub fn node(label: L, children: Vec<Term<L>>) -> Self {
        Term {
            label,
            children: Arc::from(children),
        }
    }

    pub fn label(&self) -> &L {
        &self.label
    }

    pub fn children(&self) -> &[Term<L>] {
        &self.children
    }

    pub fn rank(&self) -> usize {
        self.children.len()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Term::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(|c| 1 + c.height())
            .max()
            .unwrap_or(0)
    }

    /// All positions in pre-order, which coincides with lexicographic order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.size());
        self.visit(&mut Position::root(), &mut |p, _| out.push(p.clone()));
        out
    }

    /// Pre-order traversal handing each node together with its position.
    pub fn visit<'a>(&'a self, at: &mut Position, f: &mut impl FnMut(&Position, &'a Term<L>)) {
        f(at, self);
        for (i, c) in self.children.iter().enumerate() {
            at.0.push(i as u32 + 1);
            c.visit(at, f);
            at.0.pop();
        }
    }

    pub fn subtree_at(&self, pos: &Position) -> Result<&Term<L>, TermError> {
        let mut node = self;
        for &i in pos.indices() {
            node = node
                .children
                .get(i as usize - 1)
                .ok_or_else(|| TermError::PositionOutOfRange(pos.clone()))?;
        }
        Ok(node)
    }

    pub fn label_at(&self, pos: &Position) -> Result<&L, TermError> {
        self.subtree_at(pos).map(Term::label)
    }

    pub fn contains_position(&self, pos: &Position) -> bool {
        self.subtree_at(pos).is_ok()
    }

    pub fn map<M>(&self, f: &impl Fn(&L) -> M) -> Term<M> {
        Term::node(
            f(&self.label),
            self.children.iter().map(|c| c.map(f)).collect(),
        )
    }

    pub fn map_with_position<M>(&self, f: &impl Fn(&Position, &L) -> M) -> Term<M> {
        fn go<L, M>(t: &Term<L>, at: &mut Position, f: &impl Fn(&Position, &L) -> M) -> Term<M> {
            let label = f(at, &t.label);
            let mut kids = Vec::with_capacity(t.rank());
            for (i, c) in t.children.iter().enumerate() {
                at.0.push(i as u32 + 1);
                kids.push(go(c, at, f));
                at.0.pop();
            }
            Term::node(label, kids)
        }
        go(self, &mut Position::root(), f)
    }
}

impl<L: Clone> Term<L> {
    /// `self[z]_pos`: the tree with the subtree at `pos` replaced by `z`.
    pub fn replace_at(&self, pos: &Position, z: Term<L>) -> Result<Term<L>, TermError> {
        fn go<L: Clone>(t: &Term<L>, rest: &[u32], z: Term<L>) -> Option<Term<L>> {
            let Some((&i, tail)) = rest.split_first() else {
                return Some(z);
            };
            let idx = (i as usize).checked_sub(1)?;
            let child = t.children.get(idx)?;
            let replaced = go(child, tail, z)?;
            let mut kids = t.children.to_vec();
            kids[idx] = replaced;
            Some(Term::node(t.label.clone(), kids))
        }
        go(self, pos.indices(), z).ok_or_else(|| TermError::PositionOutOfRange(pos.clone()))
    }

    /// Complete paths in left-to-right order of their leaves.
    pub fn complete_paths(&self) -> Vec<CompletePath<L>> {
        fn go<L: Clone>(
            t: &Term<L>,
            at: &mut Position,
            stack: &mut Vec<(Position, L)>,
            out: &mut Vec<CompletePath<L>>,
        ) {
            stack.push((at.clone(), t.label.clone()));
            if t.is_leaf() {
                out.push(CompletePath {
                    positions: stack.iter().map(|(p, _)| p.clone()).collect(),
                    word: stack.iter().map(|(_, l)| l.clone()).collect(),
                });
            }
            for (i, c) in t.children.iter().enumerate() {
                at.0.push(i as u32 + 1);
                go(c, at, stack, out);
                at.0.pop();
            }
            stack.pop();
        }
        let mut out = Vec::new();
        go(self, &mut Position::root(), &mut Vec::new(), &mut out);
        out
    }

    /// Subtrees in pre-order of their roots (with repetitions).
    pub fn subtrees(&self) -> Vec<Term<L>> {
        let mut out = Vec::new();
        self.visit(&mut Position::root(), &mut |_, t| out.push(t.clone()));
        out
    }
}

impl<L: fmt::Display> fmt::Display for Term<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl<L: fmt::Debug> fmt::Debug for Term<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.label)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c:?}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
