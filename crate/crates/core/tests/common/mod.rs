//! Brute-force oracles shared by the integration tests. Each one is written
//! straight from a definition and deliberately avoids the library's own
//! algorithms.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use parikh_core::gpta::{Gpta, GptaTransition};
use parikh_core::parikh_string::Pa;
use parikh_core::ptar::{Node, PartialTree, Ptar};
use parikh_core::semilinear::{LinearSet, LinearSystem, SemilinearSet, Vector};
use parikh_core::terms::{Position, RankedAlphabet, Symbol, Term, Tree};
use rand::Rng;

/// Exhaustive search for a solution of `sys` over ℕ.
///
/// After shifting by the lower bounds, a solution exists iff one exists
/// with `‖y‖₁ ≤ m·m!·Δ^(m-1)·β + m·(2mΔ+1)^m`: an optimal vertex of the LP
/// relaxation of `min Σy` has at most `m` nonzero entries, each at most
/// `m!·Δ^(m-1)·β` by Cramer's rule and Hadamard-style expansion, and
/// Eisenbrand–Weismantel proximity puts an integer optimum within
/// `m·(2mΔ+1)^m` of it in ℓ1. One variable with a nonzero coefficient is
/// solved for; the rest are enumerated.
pub fn ilp_oracle(sys: &LinearSystem) -> Option<Vec<u64>> {
    let n = sys.num_vars();
    let lo: Vec<i64> = sys.lower_bounds().iter().map(|&b| b as i64).collect();
    let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
    for e in sys.equations() {
        let shift: i64 = e.coeffs.iter().zip(&lo).map(|(a, l)| a * l).sum();
        let rhs = e.rhs - shift;
        if e.coeffs.iter().all(|&a| a == 0) {
            if rhs != 0 {
                return None;
            }
            continue;
        }
        rows.push((e.coeffs.clone(), rhs));
    }
    let finish =
        |y: &[i64]| -> Vec<u64> { y.iter().zip(&lo).map(|(a, b)| (a + b) as u64).collect() };
    if rows.is_empty() {
        return Some(finish(&vec![0; n]));
    }
    let m = rows.len() as i64;
    let delta = rows
        .iter()
        .flat_map(|(r, _)| r.iter())
        .map(|a| a.abs())
        .max()
        .unwrap();
    let beta = rows.iter().map(|(_, b)| b.abs()).max().unwrap();
    let fact: i64 = (1..=m).product();
    let bound = m * fact * delta.pow((m - 1) as u32) * beta + m * (2 * m * delta + 1).pow(m as u32);

    let pivot = rows[0].0.iter().position(|&a| a != 0).unwrap();
    let others: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
    let mut y = vec![0i64; n];
    fn rec(
        k: usize,
        budget: i64,
        others: &[usize],
        pivot: usize,
        rows: &[(Vec<i64>, i64)],
        y: &mut Vec<i64>,
    ) -> bool {
        if k == others.len() {
            let (r0, b0) = &rows[0];
            let rest: i64 = (0..y.len())
                .filter(|&j| j != pivot)
                .map(|j| r0[j] * y[j])
                .sum();
            let num = b0 - rest;
            if num % r0[pivot] != 0 {
                return false;
            }
            let v = num / r0[pivot];
            if v < 0 || v > budget {
                return false;
            }
            y[pivot] = v;
            return rows
                .iter()
                .all(|(r, b)| r.iter().zip(y.iter()).map(|(a, x)| a * x).sum::<i64>() == *b);
        }
        for v in 0..=budget {
            y[others[k]] = v;
            if rec(k + 1, budget - v, others, pivot, rows, y) {
                return true;
            }
        }
        y[others[k]] = 0;
        false
    }
    rec(0, bound, &others, pivot, &rows, &mut y).then(|| finish(&y))
}

/// Membership in a linear set with nonzero periods by trying every
/// coefficient tuple with entries up to `max(d)`.
pub fn linear_member_oracle(l: &LinearSet, d: &Vector) -> bool {
    let bound = d.max_entry();
    let k = l.periods().len();
    let mut m = vec![0u64; k];
    loop {
        if l.evaluate(&m) == *d {
            return true;
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            if m[i] < bound {
                m[i] += 1;
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// Membership by trying every transition sequence of length `size(tree)`,
/// always rewriting the leftmost configuration, using nothing but `step`.
pub fn ptar_exhaustive_member(a: &Ptar, tree: &Tree) -> bool {
    fn leftmost(p: &PartialTree) -> Option<Position> {
        let mut found = None;
        p.visit(&mut Position::root(), &mut |at, t| {
            if found.is_none() && matches!(t.label(), Node::Config(_)) {
                found = Some(at.clone());
            }
        });
        found
    }
    fn go(a: &Ptar, tree: &Tree, p: &PartialTree, left: usize) -> bool {
        let Some(at) = leftmost(p) else {
            return left == 0 && parikh_core::ptar::finished(p).as_ref() == Some(tree);
        };
        if left == 0 {
            return false;
        }
        let Ok(target) = tree.label_at(&at) else {
            return false;
        };
        (0..a.transitions().len()).any(|t| {
            a.transitions()[t].symbol == *target
                && a.step(p, &at, t)
                    .is_ok_and(|next| go(a, tree, &next, left - 1))
        })
    }
    go(a, tree, &a.start(), tree.size())
}

/// GPTA membership by listing every run and labelling (one transition per
/// node), without merging equal partial sums.
pub fn gpta_enumeration_member(g: &Gpta, tree: &Tree) -> bool {
    fn sums(g: &Gpta, q: usize, t: &Tree) -> Vec<Vector> {
        let mut out = Vec::new();
        for tr in g.transitions() {
            if tr.from != q || tr.symbol != *t.label() || tr.children.len() != t.rank() {
                continue;
            }
            let mut partial = vec![g.dvectors()[tr.label].clone()];
            for (c, sub) in tr.children.iter().zip(t.children()) {
                let below = sums(g, *c, sub);
                partial = partial
                    .iter()
                    .flat_map(|p| below.iter().map(move |b| p.add(b)))
                    .collect();
            }
            out.extend(partial);
        }
        out
    }
    sums(g, g.initial(), tree)
        .iter()
        .any(|v| g.constraint().contains(v))
}

/// Whether some tree of height at most `h` is accepted, by a recursion on
/// `(state, counters, height)` straight from the rewrite semantics.
pub fn accepts_some_tree_of_height(a: &Ptar, h: usize) -> bool {
    fn acc(
        a: &Ptar,
        q: usize,
        w: &Vector,
        h: usize,
        memo: &mut HashMap<(usize, Vector, usize), bool>,
    ) -> bool {
        let key = (q, w.clone(), h);
        if let Some(&r) = memo.get(&key) {
            return r;
        }
        let r = a.transitions().iter().any(|t| {
            t.from == q
                && if t.children.is_empty() {
                    a.constraint().contains(w)
                } else {
                    h > 0
                        && t.children
                            .iter()
                            .all(|(p, act)| acc(a, *p, &act.apply(w), h - 1, memo))
                }
        });
        memo.insert(key, r);
        r
    }
    acc(
        a,
        a.initial(),
        &Vector::zeros(a.dim()),
        h,
        &mut HashMap::new(),
    )
}

/// Every c-path of `t` reads `a^n b^n #` for some `n ≥ 1`.
pub fn l_ab_oracle(t: &Tree) -> bool {
    t.complete_paths().iter().all(|p| {
        let w: Vec<&str> = p.word.iter().map(|s| s.as_str()).collect();
        let n = w.iter().take_while(|s| **s == "a").count();
        n >= 1 && w.len() == 2 * n + 1 && w[n..2 * n].iter().all(|s| *s == "b") && w[2 * n] == "#"
    })
}

/// A tree all of whose c-paths read `a^n b^n #`, each path choosing its own
/// `n` and all of height at most `max_height`.
pub fn l_ab_valid_tree(rng: &mut impl Rng, max_height: usize) -> Tree {
    let max_n = max_height / 2;
    assert!(max_n >= 1);
    fn b_part(left: usize) -> Tree {
        if left == 0 {
            Term::leaf(Symbol::new("#"))
        } else {
            let c = b_part(left - 1);
            Term::node(Symbol::new("b"), vec![c.clone(), c])
        }
    }
    fn go(rng: &mut impl Rng, n: usize, max_n: usize) -> Tree {
        // below n a-nodes: another a, or exactly n b-levels and #
        let more_a = n < max_n && rng.gen_bool(0.5);
        if more_a {
            Term::node(
                Symbol::new("a"),
                vec![go(rng, n + 1, max_n), go(rng, n + 1, max_n)],
            )
        } else {
            b_part(n)
        }
    }
    Term::node(Symbol::new("a"), vec![go(rng, 1, max_n), go(rng, 1, max_n)])
}

/// `t` with the label at a random inner position swapped between `a` and
/// `b`.
pub fn l_ab_mutant(rng: &mut impl Rng, t: &Tree) -> Tree {
    let inner: Vec<Position> = t
        .positions()
        .into_iter()
        .filter(|p| !t.subtree_at(p).unwrap().is_leaf())
        .collect();
    let at = &inner[rng.gen_range(0..inner.len())];
    let sub = t.subtree_at(at).unwrap();
    let flipped = if sub.label().as_str() == "a" {
        "b"
    } else {
        "a"
    };
    t.replace_at(
        at,
        Term::node(Symbol::new(flipped), sub.children().to_vec()),
    )
    .unwrap()
}

/// Whether some run of at most `max_len` transitions ends in a final state
/// with its sum in `C`, by breadth-first search over `(state, sum)`.
pub fn pa_bfs_oracle(a: &Pa, max_len: usize) -> bool {
    let mut layer: HashSet<(usize, Vector)> =
        HashSet::from([(a.initial(), Vector::zeros(a.dim()))]);
    for depth in 0..=max_len {
        if layer
            .iter()
            .any(|(q, w)| a.finals().contains(q) && a.constraint().contains(w))
        {
            return true;
        }
        if depth == max_len {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|(q, w)| {
                a.transitions()
                    .iter()
                    .filter(move |t| t.from == *q)
                    .map(move |t| (t.to, w.add(&t.vector)))
            })
            .collect();
    }
    false
}

/// One state, C = ℕ, every symbol of {σ:2, γ:1, #:0} labelled 1: accepts
/// every tree.
pub fn trivial_gpta() -> Gpta {
    let alphabet = RankedAlphabet::from_pairs([("σ", 2), ("γ", 1), ("#", 0)]).unwrap();
    let tr = |s: &str, n: usize| GptaTransition {
        from: 0,
        symbol: Symbol::new(s),
        label: 0,
        children: vec![0; n],
    };
    Gpta::new(
        vec!["q".into()],
        alphabet,
        vec![Vector::from([1])],
        0,
        SemilinearSet::universe(1),
        vec![tr("σ", 2), tr("γ", 1), tr("#", 0)],
    )
    .unwrap()
}
