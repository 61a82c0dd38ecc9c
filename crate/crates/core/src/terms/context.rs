use std::collections::BTreeSet;

use super::{Position, Term, TermError};

/// A context label: an ordinary label or the variable `x_i` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot<L> {
    Label(L),
    Var(usize),
}

/// A tree with variables `x_1..x_k`, each occurring exactly once, at
/// positions in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context<L> {
    body: Term<Slot<L>>,
    arity: usize,
}

impl<L: Clone> Context<L> {
    pub fn new(body: Term<Slot<L>>) -> Result<Self, TermError> {
        let mut vars = Vec::new();
        let mut inner_var = None;
        body.visit(&mut Position::root(), &mut |p, t| {
            if let Slot::Var(i) = t.label() {
                if !t.is_leaf() {
                    inner_var = Some(*i);
                }
                vars.push((p.clone(), *i));
            }
        });
        if let Some(i) = inner_var {
            return Err(TermError::InvalidContext(format!(
                "variable x{i} has children"
            )));
        }
        // pre-order visits positions in lexicographic order, so the k-th
        // variable met must be x_k
        for (k, (_, i)) in vars.iter().enumerate() {
            if *i != k + 1 {
                return Err(TermError::InvalidContext(format!(
                    "variables must be x1..x{} in left-to-right order, found x{i} in slot {}",
                    vars.len(),
                    k + 1
                )));
            }
        }
        Ok(Context {
            arity: vars.len(),
            body,
        })
    }

    /// The context `x_1`.
    pub fn identity() -> Self {
        Context {
            body: Term::leaf(Slot::Var(1)),
            arity: 1,
        }
    }

    /// Replaces the subtrees at `holes` (pairwise independent, any order) by
    /// variables numbered in lexicographic order of the holes.
    pub fn from_holes(tree: &Term<L>, holes: &[Position]) -> Result<Self, TermError> {
        let set: BTreeSet<&Position> = holes.iter().collect();
        if set.len() != holes.len() {
            return Err(TermError::InvalidContext("duplicate hole".into()));
        }
        for h in holes {
            tree.subtree_at(h)?;
            if holes.iter().any(|o| o != h && h.is_prefix_of(o)) {
                return Err(TermError::InvalidContext(format!(
                    "hole {h} contains another hole"
                )));
            }
        }
        let order: Vec<&Position> = set.into_iter().collect();
        fn go<L: Clone>(t: &Term<L>, at: &mut Position, order: &[&Position]) -> Term<Slot<L>> {
            if let Some(k) = order.iter().position(|h| **h == *at) {
                return Term::leaf(Slot::Var(k + 1));
            }
            let mut kids = Vec::with_capacity(t.rank());
            for (i, c) in t.children().iter().enumerate() {
                at.0.push(i as u32 + 1);
                kids.push(go(c, at, order));
                at.0.pop();
            }
            Term::node(Slot::Label(t.label().clone()), kids)
        }
        let body = go(tree, &mut Position::root(), &order);
        Ok(Context {
            arity: holes.len(),
            body,
        })
    }

    pub fn body(&self) -> &Term<Slot<L>> {
        &self.body
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn height(&self) -> usize {
        self.body.height()
    }

    /// Positions of `x_1..x_k`, in variable order.
    pub fn variable_positions(&self) -> Vec<Position> {
        let mut out = Vec::with_capacity(self.arity);
        self.body.visit(&mut Position::root(), &mut |p, t| {
            if matches!(t.label(), Slot::Var(_)) {
                out.push(p.clone());
            }
        });
        out
    }

    /// `self[fillers]`.
    pub fn compose(&self, fillers: &[Term<L>]) -> Result<Term<L>, TermError> {
        if fillers.len() != self.arity {
            return Err(TermError::ArityMismatch {
                expected: self.arity,
                found: fillers.len(),
            });
        }
        fn go<L: Clone>(t: &Term<Slot<L>>, fillers: &[Term<L>]) -> Term<L> {
            match t.label() {
                Slot::Var(i) => fillers[*i - 1].clone(),
                Slot::Label(l) => Term::node(
                    l.clone(),
                    t.children().iter().map(|c| go(c, fillers)).collect(),
                ),
            }
        }
        Ok(go(&self.body, fillers))
    }

    /// `self[s_1, .., s_{j-1}, x_1, s_j, .., s_k]` for `hole = j`: fills every
    /// variable except the `j`-th, which becomes the single variable of the
    /// result.
    pub fn fill_except(&self, fillers: &[Term<L>], hole: usize) -> Result<Context<L>, TermError> {
        if self.arity == 0 || fillers.len() + 1 != self.arity {
            return Err(TermError::ArityMismatch {
                expected: self.arity.saturating_sub(1),
                found: fillers.len(),
            });
        }
        if hole == 0 || hole > self.arity {
            return Err(TermError::InvalidContext(format!(
                "hole index {hole} outside 1..={}",
                self.arity
            )));
        }
        fn go<L: Clone>(t: &Term<Slot<L>>, fillers: &[Term<L>], hole: usize) -> Term<Slot<L>> {
            match t.label() {
                Slot::Var(i) if *i == hole => Term::leaf(Slot::Var(1)),
                Slot::Var(i) => {
                    let k = if *i < hole { *i - 1 } else { *i - 2 };
                    fillers[k].map(&|l: &L| Slot::Label(l.clone()))
                }
                Slot::Label(l) => Term::node(
                    Slot::Label(l.clone()),
                    t.children().iter().map(|c| go(c, fillers, hole)).collect(),
                ),
            }
        }
        Ok(Context {
            body: go(&self.body, fillers, hole),
            arity: 1,
        })
    }

    /// `self · inner` for a unary `self`: `x_1` is replaced by the body of
    /// `inner`, whose variables carry over.
    pub fn then(&self, inner: &Context<L>) -> Result<Context<L>, TermError> {
        if self.arity != 1 {
            return Err(TermError::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        fn go<L: Clone>(t: &Term<Slot<L>>, inner: &Term<Slot<L>>) -> Term<Slot<L>> {
            match t.label() {
                Slot::Var(_) => inner.clone(),
                Slot::Label(l) => Term::node(
                    Slot::Label(l.clone()),
                    t.children().iter().map(|c| go(c, inner)).collect(),
                ),
            }
        }
        Ok(Context {
            body: go(&self.body, &inner.body),
            arity: inner.arity,
        })
    }

    pub fn map<M: Clone>(&self, f: &impl Fn(&L) -> M) -> Context<M> {
        Context {
            body: self.body.map(&|s: &Slot<L>| match s {
                Slot::Label(l) => Slot::Label(f(l)),
                Slot::Var(i) => Slot::Var(*i),
            }),
            arity: self.arity,
        }
    }
}

impl<L: std::fmt::Display> std::fmt::Display for Slot<L> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slot::Label(l) => write!(f, "{l}"),
            Slot::Var(i) => write!(f, "x{i}"),
        }
    }
}

impl<L: std::fmt::Display> std::fmt::Display for Context<L> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.body)
    }
}

/// The decomposition `t = outer · (context[fillers])` along a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spine<L> {
    /// Unary context with `x_1` at the first position of the path.
    pub outer: Context<L>,
    /// Non-variable positions are exactly the path positions (relative to its
    /// first element).
    pub context: Context<L>,
    pub fillers: Vec<Term<L>>,
    /// Index of the variable sitting at the first child of the path's last
    /// position, when that position is not a leaf.
    pub hole_index: Option<usize>,
    /// Absolute positions of the variables of `context`, in order.
    pub variable_positions: Vec<Position>,
}

impl<L: Clone> Spine<L> {
    /// The variable index whose filler sits at absolute position `at`.
    pub fn variable_at(&self, at: &Position) -> Option<usize> {
        self.variable_positions
            .iter()
            .position(|p| p == at)
            .map(|k| k + 1)
    }

    pub fn recompose(&self) -> Result<Term<L>, TermError> {
        self.outer.compose(&[self.context.compose(&self.fillers)?])
    }
}

/// The spine of `t` along `path`, a sequence of positions in which each
/// element is a child of the previous one.
pub fn spine<L: Clone>(t: &Term<L>, path: &[Position]) -> Result<Spine<L>, TermError> {
    let first = path
        .first()
        .ok_or_else(|| TermError::InvalidPath("empty path".into()))?;
    for p in path {
        if !t.contains_position(p) {
            return Err(TermError::InvalidPath(format!("{p} is not a position")));
        }
    }
    for w in path.windows(2) {
        if w[1].parent().as_ref() != Some(&w[0]) {
            return Err(TermError::InvalidPath(format!(
                "{} is not a child of {}",
                w[1], w[0]
            )));
        }
    }
    let outer = Context::from_holes(t, std::slice::from_ref(first))?;
    let sub = t.subtree_at(first)?;
    let on_path: BTreeSet<Position> = path
        .iter()
        .map(|p| {
            first
                .relative(p)
                .expect("path is rooted at its first element")
        })
        .collect();

    let mut holes = Vec::new();
    sub.visit(&mut Position::root(), &mut |p, _| {
        if !on_path.contains(p) && p.parent().is_some_and(|q| on_path.contains(&q)) {
            holes.push(p.clone());
        }
    });
    let context = Context::from_holes(sub, &holes)?;
    let fillers = holes
        .iter()
        .map(|h| sub.subtree_at(h).cloned())
        .collect::<Result<Vec<_>, _>>()?;
    let variable_positions: Vec<Position> = holes.iter().map(|h| first.concat(h)).collect();
    let last = path.last().expect("nonempty");
    let hole_index = variable_positions
        .iter()
        .position(|p| *p == last.child(1))
        .map(|k| k + 1);
    Ok(Spine {
        outer,
        context,
        fillers,
        hole_index,
        variable_positions,
    })
}
