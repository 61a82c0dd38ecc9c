//! The exchange decomposition: two equal transition cycles on independent
//! paths make it possible to move one cycle's spine onto the other path
//! without changing the Parikh image.
//!
//! With `p = |Q| + 1`, a cycle is a downward path `ρ_1 … ρ_h`, `2 ≤ h ≤ p`,
//! with `r(ρ_1) = r(ρ_h)`; its word records, for each step, the state, the
//! transition applied, and the child index taken. No table of all cycles of
//! the transition graph is built; pairs are searched directly.

use std::collections::HashMap;

use super::{Gpta, GptaError, GptaRun, LabeledSymbol, LabeledTree};
use crate::terms::{independent, spine, Context, Position, Term};

/// Which hole receives both copies of `ζ2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reorder {
    /// `ζ1[u1, ζ2[s]·ζ2[t]·u2]`.
    IntoSecond,
    /// `ζ1[ζ2[s]·ζ2[t]·u1, u2]`.
    IntoFirst,
}

/// `ξ = ζ1[ζ2[s; x at j]·u1, ζ2[t; x at j]·u2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeDecomposition<L> {
    pub zeta1: Context<L>,
    pub zeta2: Context<L>,
    pub s: Vec<Term<L>>,
    pub t: Vec<Term<L>>,
    pub u1: Term<L>,
    pub u2: Term<L>,
    /// 1-based index of the variable of `ζ2` continuing the path.
    pub j: usize,
    /// The two cycle paths `ρ^1_1 … ρ^1_h` and `ρ^2_1 … ρ^2_h`.
    pub paths: [Vec<Position>; 2],
}

impl<L: Clone> ExchangeDecomposition<L> {
    fn unary(&self, fillers: &[Term<L>]) -> Context<L> {
        self.zeta2
            .fill_except(fillers, self.j)
            .expect("decomposition arities agree")
    }

    /// Item (1.): recomposes the original tree.
    pub fn recompose(&self) -> Term<L> {
        let left = self.unary(&self.s).compose(std::slice::from_ref(&self.u1));
        let right = self.unary(&self.t).compose(std::slice::from_ref(&self.u2));
        self.zeta1
            .compose(&[left.expect("unary"), right.expect("unary")])
            .expect("binary outer context")
    }

    pub fn reorder(&self, variant: Reorder) -> Term<L> {
        let both = self
            .unary(&self.s)
            .then(&self.unary(&self.t))
            .expect("unary contexts compose");
        let fillers = match variant {
            Reorder::IntoSecond => [
                self.u1.clone(),
                both.compose(std::slice::from_ref(&self.u2)).expect("unary"),
            ],
            Reorder::IntoFirst => [
                both.compose(std::slice::from_ref(&self.u1)).expect("unary"),
                self.u2.clone(),
            ],
        };
        self.zeta1.compose(&fillers).expect("binary outer context")
    }

    pub fn map<M: Clone>(&self, f: &impl Fn(&L) -> M) -> ExchangeDecomposition<M> {
        ExchangeDecomposition {
            zeta1: self.zeta1.map(f),
            zeta2: self.zeta2.map(f),
            s: self.s.iter().map(|x| x.map(f)).collect(),
            t: self.t.iter().map(|x| x.map(f)).collect(),
            u1: self.u1.map(f),
            u2: self.u2.map(f),
            j: self.j,
            paths: self.paths.clone(),
        }
    }
}

/// `l'` of the lemma: closed walks `f_0 → … → f_k = f_0` of length
/// `1 ≤ k ≤ max_len` in the transition graph with `f_1 … f_k` distinct,
/// edges labelled by (transition, child index). Saturates at `u128::MAX`.
pub fn count_simple_cycles(g: &Gpta, max_len: usize) -> u128 {
    let n = g.states().len();
    let mut mult = vec![vec![0u128; n]; n];
    for t in g.transitions() {
        for &c in &t.children {
            mult[t.from][c] += 1;
        }
    }
    fn walk(
        mult: &[Vec<u128>],
        start: usize,
        at: usize,
        len: usize,
        max_len: usize,
        used: &mut [bool],
    ) -> u128 {
        let mut total = 0u128;
        for next in 0..mult.len() {
            let m = mult[at][next];
            if m == 0 {
                continue;
            }
            if next == start {
                total = total.saturating_add(m);
            } else if !used[next] && len < max_len {
                used[next] = true;
                let rest = walk(mult, start, next, len + 1, max_len, used);
                used[next] = false;
                total = total.saturating_add(m.saturating_mul(rest));
            }
        }
        total
    }
    let mut used = vec![false; n];
    (0..n).fold(0u128, |acc, s| {
        acc.saturating_add(walk(&mult, s, s, 1, max_len, &mut used))
    })
}

struct Cycle {
    path: Vec<Position>,
}

impl Gpta {
    /// Searches the accepting run for two cycles with equal words on
    /// independent paths lying in independent subtrees of height `≥ p`, and
    /// returns the decomposition of the labelled tree. Candidates are
    /// ordered by start position, length and path; the first pair (by the
    /// later cycle, then the earlier) wins.
    pub fn exchange_find(
        &self,
        labeled: &LabeledTree,
        run: &GptaRun,
    ) -> Result<ExchangeDecomposition<LabeledSymbol>, GptaError> {
        if !self.run_valid(labeled, run)? {
            return Err(GptaError::NoDecomposition {
                l: count_simple_cycles(self, self.states().len() + 1).saturating_add(1),
                p: self.states().len() + 1,
            });
        }
        let p = self.states().len() + 1;
        let mut nodes: Vec<(Position, &LabeledTree, &Term<usize>)> = Vec::new();
        collect(labeled, &run.states, &mut Position::root(), &mut nodes);
        let index: HashMap<&Position, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, (pos, _, _))| (pos, i))
            .collect();
        let trans: Vec<usize> = nodes
            .iter()
            .map(|(_, l, r)| self.transition_at(l, r).expect("valid run"))
            .collect();

        let mut seen: HashMap<Vec<(usize, usize, u32)>, Vec<usize>> = HashMap::new();
        let mut cycles: Vec<Cycle> = Vec::new();
        for (start, _, _) in &nodes {
            for h in 2..=p {
                let mut paths = Vec::new();
                extend(labeled, start, h, &mut vec![start.clone()], &mut paths);
                for path in paths {
                    let state = |q: &Position| *nodes[index[q]].2.label();
                    if state(&path[0]) != state(&path[h - 1]) {
                        continue;
                    }
                    let word: Vec<(usize, usize, u32)> = path
                        .windows(2)
                        .map(|w| {
                            let k = index[&w[0]];
                            (
                                state(&w[0]),
                                trans[k],
                                *w[1].indices().last().expect("child"),
                            )
                        })
                        .collect();
                    let me = cycles.len();
                    if let Some(earlier) = seen.get(&word) {
                        for &a in earlier {
                            let (x, y) = (&cycles[a].path[0], &path[0]);
                            if independent(x, y) && tall_apart(labeled, x, y, p) {
                                return Ok(decompose(labeled, &cycles[a].path, &path));
                            }
                        }
                    }
                    seen.entry(word).or_default().push(me);
                    cycles.push(Cycle { path });
                }
            }
        }
        Err(GptaError::NoDecomposition {
            l: count_simple_cycles(self, p).saturating_add(1),
            p,
        })
    }
}

fn collect<'a>(
    l: &'a LabeledTree,
    r: &'a Term<usize>,
    at: &mut Position,
    out: &mut Vec<(Position, &'a LabeledTree, &'a Term<usize>)>,
) {
    out.push((at.clone(), l, r));
    for (i, (a, b)) in l.children().iter().zip(r.children()).enumerate() {
        *at = at.child(i as u32 + 1);
        collect(a, b, at, out);
        *at = at.parent().expect("just pushed");
    }
}

/// All downward paths of `h` nodes extending `prefix`.
fn extend<L>(
    t: &Term<L>,
    last: &Position,
    h: usize,
    prefix: &mut Vec<Position>,
    out: &mut Vec<Vec<Position>>,
) {
    if prefix.len() == h {
        out.push(prefix.clone());
        return;
    }
    let node = t.subtree_at(last).expect("position of t");
    for i in 1..=node.rank() as u32 {
        let next = last.child(i);
        prefix.push(next.clone());
        extend(t, &next, h, prefix, out);
        prefix.pop();
    }
}

/// The children of the common ancestor of `x` and `y` towards each of them
/// root subtrees of height at least `p`.
fn tall_apart<L>(t: &Term<L>, x: &Position, y: &Position, p: usize) -> bool {
    let lca = x.common_prefix(y);
    let side = |z: &Position| {
        let c = lca.child(z.indices()[lca.len()]);
        t.subtree_at(&c).expect("prefix of a position").height() >= p
    };
    side(x) && side(y)
}

fn decompose<L: Clone + PartialEq + std::fmt::Debug>(
    t: &Term<L>,
    first: &[Position],
    second: &[Position],
) -> ExchangeDecomposition<L> {
    let h = first.len();
    let zeta1 =
        Context::from_holes(t, &[first[0].clone(), second[0].clone()]).expect("independent starts");
    let sp1 = spine(t, &first[..h - 1]).expect("downward path");
    let sp2 = spine(t, &second[..h - 1]).expect("downward path");
    debug_assert_eq!(
        sp1.context, sp2.context,
        "equal cycle words give equal spines"
    );
    let j = sp1
        .variable_at(&first[h - 1])
        .expect("path continues into a hole");
    debug_assert_eq!(sp2.variable_at(&second[h - 1]), Some(j));
    let split = |fillers: &[Term<L>]| {
        let mut rest = fillers.to_vec();
        let u = rest.remove(j - 1);
        (rest, u)
    };
    let (s, u1) = split(&sp1.fillers);
    let (tt, u2) = split(&sp2.fillers);
    ExchangeDecomposition {
        zeta1,
        zeta2: sp1.context,
        s,
        t: tt,
        u1,
        u2,
        j,
        paths: [first.to_vec(), second.to_vec()],
    }
}
