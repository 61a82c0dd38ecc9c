//! Random instances and exhaustive tree enumeration, for testing and
//! benchmarking.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gpta::{Gpta, GptaTransition};
use crate::parikh_string::{Pa, PaTransition};
use crate::ptar::{CounterAction, Ptar, PtarTransition};
use crate::semilinear::{LinearSet, SemilinearSet, Vector};
use crate::terms::{RankedAlphabet, Symbol, Term, Tree};
use crate::twocm::{CmOp, CmTransition, TwoCM};

/// Size bounds for random instances; every `max_*` is inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_states: usize,
    pub max_transitions: usize,
    pub max_dim: usize,
    pub max_entry: u64,
    pub max_components: usize,
    pub max_constraint_entry: u64,
}

impl Bounds {
    /// PA instances: ≤ 3 states, ≤ 5 transitions, dim ≤ 2, entries ≤ 2, at
    /// most 2 components with entries ≤ 3.
    pub const PA: Bounds = Bounds {
        max_states: 3,
        max_transitions: 5,
        max_dim: 2,
        max_entry: 2,
        max_components: 2,
        max_constraint_entry: 3,
    };

    /// Linear PTAR instances: as for PA but with up to 6 transitions.
    pub const LINEAR: Bounds = Bounds {
        max_transitions: 6,
        ..Bounds::PA
    };

    /// GPTA instances: ≤ 2 states and ≤ 2 label vectors.
    pub const GPTA: Bounds = Bounds {
        max_states: 2,
        max_transitions: 6,
        max_dim: 2,
        max_entry: 1,
        max_components: 2,
        max_constraint_entry: 2,
    };
}

fn random_vector(rng: &mut impl Rng, dim: usize, max: u64) -> Vector {
    (0..dim).map(|_| rng.gen_range(0..=max)).collect()
}

/// Up to `bounds.max_components` linear sets with up to two periods each.
pub fn random_semilinear(rng: &mut impl Rng, dim: usize, bounds: &Bounds) -> SemilinearSet {
    let k = rng.gen_range(0..=bounds.max_components);
    let components = (0..k)
        .map(|_| {
            let base = random_vector(rng, dim, bounds.max_constraint_entry);
            let periods = (0..rng.gen_range(0..=2))
                .map(|_| random_vector(rng, dim, bounds.max_constraint_entry))
                .collect();
            LinearSet::new(base, periods).expect("same dimension")
        })
        .collect();
    SemilinearSet::new(dim, components).expect("same dimension")
}

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

pub fn random_pa(rng: &mut impl Rng, bounds: &Bounds) -> Pa {
    let n = rng.gen_range(1..=bounds.max_states);
    let dim = rng.gen_range(1..=bounds.max_dim);
    let letters = [Symbol::new("a"), Symbol::new("b")];
    let transitions = (0..rng.gen_range(0..=bounds.max_transitions))
        .map(|_| PaTransition {
            from: rng.gen_range(0..n),
            letter: letters.choose(rng).expect("nonempty").clone(),
            vector: random_vector(rng, dim, bounds.max_entry),
            to: rng.gen_range(0..n),
        })
        .collect();
    let finals = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let c = random_semilinear(rng, dim, bounds);
    Pa::new(state_names(n), 0, finals, transitions, c).expect("indices in range")
}

/// `σ:2 γ:1 α:0`.
pub fn small_alphabet() -> RankedAlphabet {
    RankedAlphabet::from_pairs([("σ", 2), ("γ", 1), ("α", 0)]).expect("distinct")
}

pub fn random_gpta(rng: &mut impl Rng, bounds: &Bounds) -> Gpta {
    let alphabet = small_alphabet();
    let symbols: Vec<(Symbol, usize)> = alphabet.iter().map(|(s, r)| (s.clone(), r)).collect();
    let n = rng.gen_range(1..=bounds.max_states);
    let dim = rng.gen_range(1..=bounds.max_dim);
    let mut dvectors: Vec<Vector> = (0..rng.gen_range(1..=2))
        .map(|_| random_vector(rng, dim, bounds.max_entry))
        .collect();
    dvectors.dedup();
    let mut transitions: Vec<GptaTransition> = (0..rng.gen_range(1..=bounds.max_transitions))
        .map(|_| {
            let (symbol, rank) = symbols.choose(rng).expect("nonempty").clone();
            GptaTransition {
                from: rng.gen_range(0..n),
                symbol,
                label: rng.gen_range(0..dvectors.len()),
                children: (0..rank).map(|_| rng.gen_range(0..n)).collect(),
            }
        })
        .collect();
    // a leaf rule keeps most instances from being trivially empty
    if !transitions.iter().any(|t| t.children.is_empty()) {
        let last = transitions.len() - 1;
        transitions[last] = GptaTransition {
            from: rng.gen_range(0..n),
            symbol: Symbol::new("α"),
            label: 0,
            children: vec![],
        };
    }
    let c = random_semilinear(rng, dim, bounds);
    Gpta::new(state_names(n), alphabet, dvectors, 0, c, transitions).expect("well-formed")
}

/// A linear PTAR over [`small_alphabet`]: every transition keeps the
/// counters in at most one child.
pub fn random_linear_ptar(rng: &mut impl Rng, bounds: &Bounds) -> Ptar {
    let alphabet = small_alphabet();
    let symbols: Vec<(Symbol, usize)> = alphabet.iter().map(|(s, r)| (s.clone(), r)).collect();
    let n = rng.gen_range(1..=bounds.max_states);
    let dim = rng.gen_range(1..=bounds.max_dim);
    let mut transitions: Vec<PtarTransition> = (0..rng.gen_range(1..=bounds.max_transitions))
        .map(|_| {
            let (symbol, rank) = symbols.choose(rng).expect("nonempty").clone();
            let keep = if rank > 0 && rng.gen_bool(0.8) {
                Some(rng.gen_range(0..rank))
            } else {
                None
            };
            let children = (0..rank)
                .map(|i| {
                    let q = rng.gen_range(0..n);
                    if Some(i) == keep {
                        (
                            q,
                            CounterAction::Add(random_vector(rng, dim, bounds.max_entry)),
                        )
                    } else {
                        (q, CounterAction::Reset)
                    }
                })
                .collect();
            PtarTransition {
                from: rng.gen_range(0..n),
                symbol,
                children,
            }
        })
        .collect();
    if !transitions.iter().any(|t| t.children.is_empty()) {
        let last = transitions.len() - 1;
        transitions[last] = PtarTransition {
            from: rng.gen_range(0..n),
            symbol: Symbol::new("α"),
            children: vec![],
        };
    }
    let c = random_semilinear(rng, dim, bounds);
    Ptar::new(state_names(n), alphabet, 0, c, transitions).expect("well-formed")
}

pub fn random_two_cm(rng: &mut impl Rng, max_states: usize, max_transitions: usize) -> TwoCM {
    let n = rng.gen_range(1..=max_states);
    let transitions = (0..rng.gen_range(0..=max_transitions))
        .map(|_| {
            let i = rng.gen_range(1..=2);
            let op = match rng.gen_range(0..3) {
                0 => CmOp::Inc(i),
                1 => CmOp::Dec(i),
                _ => CmOp::Zero(i),
            };
            CmTransition {
                from: rng.gen_range(0..n),
                op,
                to: rng.gen_range(0..n),
            }
        })
        .collect();
    let finals = vec![rng.gen_range(0..n)];
    TwoCM::new(state_names(n), 0, finals, transitions).expect("indices in range")
}

/// A random tree of height at most `max_height`; leaves become likelier with
/// depth.
pub fn random_tree(rng: &mut impl Rng, alphabet: &RankedAlphabet, max_height: usize) -> Tree {
    let leaves: Vec<&Symbol> = alphabet.symbols_of_rank(0).collect();
    let inner: Vec<(&Symbol, usize)> = alphabet.iter().filter(|(_, r)| *r > 0).collect();
    assert!(!leaves.is_empty(), "the alphabet needs a leaf symbol");
    fn go(
        rng: &mut impl Rng,
        leaves: &[&Symbol],
        inner: &[(&Symbol, usize)],
        budget: usize,
        max: usize,
    ) -> Tree {
        let stop = budget == 0
            || inner.is_empty()
            || rng.gen_ratio((max - budget) as u32 + 1, max as u32 + 2);
        if stop {
            return Term::leaf((*leaves.choose(rng).expect("nonempty")).clone());
        }
        let (s, r) = *inner.choose(rng).expect("nonempty");
        Term::node(
            s.clone(),
            (0..r)
                .map(|_| go(rng, leaves, inner, budget - 1, max))
                .collect(),
        )
    }
    go(rng, &leaves, &inner, max_height, max_height)
}

/// All trees with at most `max_size` nodes, by increasing size.
pub fn trees_up_to_size(alphabet: &RankedAlphabet, max_size: usize) -> Vec<Tree> {
    // by_size[k] = all trees of size exactly k
    let mut by_size: Vec<Vec<Tree>> = vec![Vec::new(); max_size + 1];
    for k in 1..=max_size {
        let mut out = Vec::new();
        for (s, r) in alphabet.iter() {
            if r == 0 {
                if k == 1 {
                    out.push(Term::leaf(s.clone()));
                }
                continue;
            }
            for kids in forests(&by_size, r, k - 1) {
                out.push(Term::node(s.clone(), kids));
            }
        }
        by_size[k] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// Sequences of `n` trees whose sizes add up to `total`.
fn forests(by_size: &[Vec<Tree>], n: usize, total: usize) -> Vec<Vec<Tree>> {
    if n == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(n - 1) {
        for t in &by_size[first] {
            for mut rest in forests(by_size, n - 1, total - first) {
                rest.insert(0, t.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// All trees of height at most `max_height` (edges). Grows doubly
/// exponentially; only for tiny alphabets and heights.
pub fn trees_up_to_height(alphabet: &RankedAlphabet, max_height: usize) -> Vec<Tree> {
    let mut all: Vec<Tree> = alphabet
        .symbols_of_rank(0)
        .map(|s| Term::leaf(s.clone()))
        .collect();
    for _ in 0..max_height {
        let mut next: Vec<Tree> = alphabet
            .symbols_of_rank(0)
            .map(|s| Term::leaf(s.clone()))
            .collect();
        for (s, r) in alphabet.iter().filter(|(_, r)| *r > 0) {
            let mut combos: Vec<Vec<Tree>> = vec![Vec::new()];
            for _ in 0..r {
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        all.iter().map(move |t| {
                            let mut c = c.clone();
                            c.push(t.clone());
                            c
                        })
                    })
                    .collect();
            }
            next.extend(combos.into_iter().map(|kids| Term::node(s.clone(), kids)));
        }
        all = next;
    }
    all
}
