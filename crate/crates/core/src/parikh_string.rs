//! Parikh string automata: runs, emptiness with witnesses, and a bounded
//! search used as a test oracle.
//!
//! Emptiness is decided via flow equations. For a linear component
//! `(b, P)` of `C`, a final state `f` and a transition support `S`, the
//! system
//!
//! ```text
//! out(v) - in(v) = [v = q0] - [v = f]        for every state v
//! Σ_{τ∈S} x_τ·d_τ - Σ_j m_j·p_j = b
//! x_τ ≥ 1 on S
//! ```
//!
//! has a solution over ℕ iff some run from `q0` to `f` uses exactly the
//! transitions of `S` and has its sum in `b + ℕP`, provided `S` is weakly
//! connected and touches `q0` and `f` (Euler). Supports are enumerated by
//! size, so the cost is exponential in the number of transitions.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::semilinear::{solve_nonneg, LinearSystem, SemilinearSet, Vector};
use crate::strategy::Strategy;
use crate::terms::Symbol;

/// Breadth-first predecessor links: node ↦ (parent, transition).
type Parents = HashMap<(usize, Vector), Option<((usize, Vector), usize)>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaError {
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("more than 63 transitions are not supported by the support enumeration")]
    TooManyTransitions,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PaTransition {
    pub from: usize,
    pub letter: Symbol,
    pub vector: Vector,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pa {
    states: Vec<String>,
    initial: usize,
    finals: Vec<usize>,
    transitions: Vec<PaTransition>,
    constraint: SemilinearSet,
}

/// A run as the sequence of transition indices it fires.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PaRun {
    pub transitions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PaEmptiness {
    Empty,
    NonEmpty(PaRun),
}

impl PaEmptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, PaEmptiness::Empty)
    }

    pub fn witness(&self) -> Option<&PaRun> {
        match self {
            PaEmptiness::Empty => None,
            PaEmptiness::NonEmpty(r) => Some(r),
        }
    }
}

impl Pa {
    pub fn new(
        states: Vec<String>,
        initial: usize,
        finals: Vec<usize>,
        transitions: Vec<PaTransition>,
        constraint: SemilinearSet,
    ) -> Result<Self, PaError> {
        let n = states.len();
        let check = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(PaError::InvalidState(q))
            }
        };
        check(initial)?;
        finals.iter().try_for_each(|&f| check(f))?;
        for t in &transitions {
            check(t.from)?;
            check(t.to)?;
            if t.vector.dim() != constraint.dim() {
                return Err(PaError::DimensionMismatch {
                    expected: constraint.dim(),
                    found: t.vector.dim(),
                });
            }
        }
        Ok(Pa {
            states,
            initial,
            finals,
            transitions,
            constraint,
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

    pub fn transitions(&self) -> &[PaTransition] {
        &self.transitions
    }

    pub fn constraint(&self) -> &SemilinearSet {
        &self.constraint
    }

    pub fn dim(&self) -> usize {
        self.constraint.dim()
    }

    /// Letters in order of first use.
    pub fn alphabet(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        for t in &self.transitions {
            if !out.contains(&t.letter) {
                out.push(t.letter.clone());
            }
        }
        out
    }

    pub fn run_word(&self, run: &PaRun) -> Vec<Symbol> {
        run.transitions
            .iter()
            .map(|&i| self.transitions[i].letter.clone())
            .collect()
    }

    pub fn run_sum(&self, run: &PaRun) -> Vector {
        let mut sum = Vector::zeros(self.dim());
        for &i in &run.transitions {
            sum.add_assign(&self.transitions[i].vector);
        }
        sum
    }

    /// Starts in `q0`, chains, ends in a final state, and sums into `C`.
    pub fn run_valid(&self, run: &PaRun) -> bool {
        let mut at = self.initial;
        for &i in &run.transitions {
            let Some(t) = self.transitions.get(i) else {
                return false;
            };
            if t.from != at {
                return false;
            }
            at = t.to;
        }
        self.finals.contains(&at) && self.constraint.contains(&self.run_sum(run))
    }

    pub fn is_empty(&self) -> PaEmptiness {
        self.is_empty_with(Strategy::default())
    }

    /// Complete emptiness check. Supports are tried by size and then by
    /// index mask; for each support, components of `C` and final states in
    /// declaration order. Each feasible triple yields a shortest run on its
    /// support, and the shortest of these (first on ties) is the witness, so
    /// the witness is a shortest accepting run. The search stops once the
    /// support size reaches the best length found.
    pub fn is_empty_with(&self, strategy: Strategy) -> PaEmptiness {
        if self.finals.contains(&self.initial)
            && self.constraint.contains(&Vector::zeros(self.dim()))
        {
            return PaEmptiness::NonEmpty(PaRun::default());
        }
        let t = self.transitions.len();
        assert!(t <= 63, "{}", PaError::TooManyTransitions);
        if t == 0 || self.finals.is_empty() || self.constraint.is_empty_set() {
            return PaEmptiness::Empty;
        }
        let mut targets = Vec::new();
        for (ci, _) in self.constraint.components().iter().enumerate() {
            for &f in &self.finals {
                targets.push((ci, f));
            }
        }
        const BLOCK: usize = 4096;
        let mut best: Option<PaRun> = None;
        let mut block = Vec::with_capacity(BLOCK);
        for mask in supports(t) {
            let size = mask.count_ones() as usize;
            if best.as_ref().is_some_and(|r| r.transitions.len() <= size) {
                break;
            }
            if !self.plausible_support(mask) {
                continue;
            }
            block.push(mask);
            if block.len() == BLOCK {
                self.try_block(&block, &targets, strategy, &mut best);
                block.clear();
            }
        }
        self.try_block(&block, &targets, strategy, &mut best);
        match best {
            Some(run) => PaEmptiness::NonEmpty(run),
            None => PaEmptiness::Empty,
        }
    }

    fn try_block(
        &self,
        block: &[u64],
        targets: &[(usize, usize)],
        strategy: Strategy,
        best: &mut Option<PaRun>,
    ) {
        let tasks: Vec<(u64, usize, usize)> = block
            .iter()
            .flat_map(|&m| targets.iter().map(move |&(c, f)| (m, c, f)))
            .collect();
        let found = strategy.map(&tasks, |&(mask, ci, f)| self.solve_support(mask, ci, f));
        for run in found.into_iter().flatten() {
            if best
                .as_ref()
                .is_none_or(|b| run.transitions.len() < b.transitions.len())
            {
                *best = Some(run);
            }
        }
    }

    /// Cheap necessary condition: q0 has an outgoing edge in the support.
    fn plausible_support(&self, mask: u64) -> bool {
        (0..self.transitions.len())
            .any(|i| mask >> i & 1 == 1 && self.transitions[i].from == self.initial)
    }

    /// A shortest run using exactly the transitions in `mask`, ending in
    /// `f` with its sum in component `ci`: after a first solution of length
    /// `L`, the system is re-solved under `Σ x ≤ L − 1` until infeasible.
    fn solve_support(&self, mask: u64, ci: usize, f: usize) -> Option<PaRun> {
        let used: Vec<usize> = (0..self.transitions.len())
            .filter(|&i| mask >> i & 1 == 1)
            .collect();
        if !self.weakly_connected(&used, f) {
            return None;
        }
        let nx = used.len();
        let mut x = solve_nonneg(&self.support_system(&used, ci, f, None))?;
        loop {
            let len: u64 = x[..nx].iter().sum();
            if len == nx as u64 {
                break;
            }
            match solve_nonneg(&self.support_system(&used, ci, f, Some(len - 1))) {
                Some(y) => x = y,
                None => break,
            }
        }
        let run = self.euler_path(&used, &x[..nx], f);
        debug_assert!(self.run_valid(&run));
        Some(run)
    }

    /// Flow conservation, `x_τ ≥ 1` on the support, `Σ x_τ·d_τ = base +
    /// Σ m_j·period_j`, and optionally `Σ x_τ ≤ max_len` through a slack
    /// variable. Variables: `x` for `used`, then `m`, then the slack.
    fn support_system(
        &self,
        used: &[usize],
        ci: usize,
        f: usize,
        max_len: Option<u64>,
    ) -> LinearSystem {
        let comp = self.constraint.components()[ci].normalized();
        let periods = comp.periods();
        let nx = used.len();
        let nvars = nx + periods.len() + usize::from(max_len.is_some());
        let mut sys = LinearSystem::new(nvars);
        for v in 0..self.states.len() {
            let mut row = vec![0i64; nvars];
            let mut touched = false;
            for (k, &i) in used.iter().enumerate() {
                let t = &self.transitions[i];
                if t.from == v {
                    row[k] += 1;
                    touched = true;
                }
                if t.to == v {
                    row[k] -= 1;
                    touched = true;
                }
            }
            let rhs = i64::from(v == self.initial) - i64::from(v == f);
            if touched || rhs != 0 {
                sys.add_equation(row, rhs);
            }
        }
        for j in 0..self.dim() {
            let mut row = vec![0i64; nvars];
            for (k, &i) in used.iter().enumerate() {
                row[k] = to_i64(self.transitions[i].vector[j]);
            }
            for (k, p) in periods.iter().enumerate() {
                row[nx + k] = -to_i64(p[j]);
            }
            sys.add_equation(row, to_i64(comp.base()[j]));
        }
        if let Some(max) = max_len {
            let mut row = vec![0i64; nvars];
            row[..nx].fill(1);
            row[nvars - 1] = 1;
            sys.add_equation(row, to_i64(max));
        }
        for k in 0..nx {
            sys.set_lower_bound(k, 1);
        }
        sys
    }

    fn weakly_connected(&self, used: &[usize], f: usize) -> bool {
        let n = self.states.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut touched = vec![false; n];
        for &i in used {
            let t = &self.transitions[i];
            touched[t.from] = true;
            touched[t.to] = true;
            let (a, b) = (find(&mut parent, t.from), find(&mut parent, t.to));
            parent[a] = b;
        }
        if !touched[self.initial] || !touched[f] {
            return false;
        }
        let root = find(&mut parent, self.initial);
        (0..n).all(|v| !touched[v] || find(&mut parent, v) == root)
    }

    /// Hierholzer's algorithm on the multigraph with `counts[k]` copies of
    /// transition `used[k]`; edges leave each state in index order.
    fn euler_path(&self, used: &[usize], counts: &[u64], f: usize) -> PaRun {
        let mut remaining: Vec<u64> = counts.to_vec();
        let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, &i) in used.iter().enumerate() {
            out.entry(self.transitions[i].from).or_default().push(k);
        }
        let mut cursor: HashMap<usize, usize> = HashMap::new();
        let mut stack: Vec<(usize, Option<usize>)> = vec![(self.initial, None)];
        let mut path = Vec::new();
        while let Some(&(v, via)) = stack.last() {
            let edges = out.get(&v).map(Vec::as_slice).unwrap_or(&[]);
            let c = cursor.entry(v).or_insert(0);
            while *c < edges.len() && remaining[edges[*c]] == 0 {
                *c += 1;
            }
            if *c < edges.len() {
                let k = edges[*c];
                remaining[k] -= 1;
                stack.push((self.transitions[used[k]].to, Some(used[k])));
            } else {
                stack.pop();
                if let Some(i) = via {
                    path.push(i);
                }
            }
        }
        path.reverse();
        debug_assert_eq!(path.len() as u64, counts.iter().sum::<u64>());
        debug_assert!(
            path.last()
                .map_or(self.initial, |&i| self.transitions[i].to)
                == f
        );
        PaRun { transitions: path }
    }

    /// Breadth-first search over (state, sum) pairs for a valid run with at
    /// most `max_len` transitions; returns a shortest one.
    pub fn brute_force_nonempty(&self, max_len: usize) -> Option<PaRun> {
        let start = (self.initial, Vector::zeros(self.dim()));
        let mut parent: Parents = HashMap::new();
        parent.insert(start.clone(), None);
        let mut frontier = VecDeque::from([start]);
        for depth in 0..=max_len {
            let mut next = VecDeque::new();
            for node in &frontier {
                if self.finals.contains(&node.0) && self.constraint.contains(&node.1) {
                    let mut run = Vec::new();
                    let mut at = node.clone();
                    while let Some(Some((prev, i))) = parent.get(&at) {
                        run.push(*i);
                        at = prev.clone();
                    }
                    run.reverse();
                    return Some(PaRun { transitions: run });
                }
            }
            if depth == max_len {
                break;
            }
            for node in frontier {
                for (i, t) in self.transitions.iter().enumerate() {
                    if t.from != node.0 {
                        continue;
                    }
                    let succ = (t.to, node.1.add(&t.vector));
                    if !parent.contains_key(&succ) {
                        parent.insert(succ.clone(), Some((node.clone(), i)));
                        next.push_back(succ);
                    }
                }
            }
            frontier = next;
        }
        None
    }
}

fn to_i64(x: u64) -> i64 {
    i64::try_from(x).expect("vector entry fits i64")
}

/// Nonempty subsets of `0..t` as bit masks, by size and then numerically.
fn supports(t: usize) -> impl Iterator<Item = u64> {
    let full: u64 = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    (1..=t).flat_map(move |k| {
        let mut cur = Some((1u64 << k) - 1);
        std::iter::from_fn(move || {
            let m = cur?;
            // Gosper's hack: next larger integer with the same popcount
            let c = m & m.wrapping_neg();
            let r = m + c;
            let next = (((r ^ m) >> 2) / c) | r;
            cur = (next & !full == 0 && r != 0).then_some(next);
            Some(m)
        })
    })
}
