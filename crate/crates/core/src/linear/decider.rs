use std::collections::BTreeSet;

use super::{require_linear, HatAutomaton, LinearError, SpinalComputationTree, SpineComputation};
use crate::parikh_string::{Pa, PaRun, PaTransition};
use crate::ptar::{CounterAction, Ptar};
use crate::semilinear::{LinearSet, SemilinearSet, Vector};
use crate::strategy::Strategy;
use crate::terms::Tree;

/// Where a transition of the linearization automaton comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearizationOrigin {
    /// Follows the counter-keeping child of this transition.
    Add { transition: usize, child: usize },
    /// Closes the spine with this transition, which resets every child.
    Close { transition: usize },
}

/// The `(U, q)`-linearization: a Parikh automaton whose runs are the spines
/// from `q` whose residual states all lie in `U`.
///
/// Dimension `m + 1`. Spines ending in a leaf keep the extra coordinate at 0
/// and must land in `C × {0}`; spines closed by an all-reset step fire one
/// transition into a fresh sink that adds `e_{m+1}`, and `ℕ^m × {1}` leaves
/// their counters unconstrained, as no leaf check happens on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linearization {
    pub pa: Pa,
    pub origins: Vec<LinearizationOrigin>,
    pub sink: usize,
}

pub fn linearization_pa(
    a: &Ptar,
    u: &BTreeSet<usize>,
    q: usize,
) -> Result<Linearization, LinearError> {
    require_linear(a)?;
    let m = a.dim();
    let n = a.states().len();
    let mut states = a.states().to_vec();
    let mut sink_name = String::from("sink");
    while states.contains(&sink_name) {
        sink_name.push('_');
    }
    states.push(sink_name);
    let sink = n;

    let mut transitions = Vec::new();
    let mut origins = Vec::new();
    for (index, t) in a.transitions().iter().enumerate() {
        if t.children.is_empty() {
            continue;
        }
        match t.add_children().next() {
            Some(i) => {
                let siblings_in_u = t
                    .children
                    .iter()
                    .enumerate()
                    .all(|(j, (p, _))| j == i || u.contains(p));
                if siblings_in_u {
                    let CounterAction::Add(d) = &t.children[i].1 else {
                        unreachable!("add child")
                    };
                    transitions.push(PaTransition {
                        from: t.from,
                        letter: t.symbol.clone(),
                        vector: d.extended(0),
                        to: t.children[i].0,
                    });
                    origins.push(LinearizationOrigin::Add {
                        transition: index,
                        child: i,
                    });
                }
            }
            None => {
                if t.children.iter().all(|(p, _)| u.contains(p)) {
                    transitions.push(PaTransition {
                        from: t.from,
                        letter: t.symbol.clone(),
                        vector: Vector::unit(m + 1, m),
                        to: sink,
                    });
                    origins.push(LinearizationOrigin::Close { transition: index });
                }
            }
        }
    }

    let mut finals: Vec<usize> = (0..n)
        .filter(|&p| leaf_transition(a, p).is_some())
        .collect();
    finals.push(sink);

    let mut components: Vec<LinearSet> = a
        .constraint()
        .components()
        .iter()
        .map(|l| {
            LinearSet::new(
                l.base().extended(0),
                l.periods().iter().map(|p| p.extended(0)).collect(),
            )
            .expect("same dimension")
        })
        .collect();
    components.push(
        LinearSet::new(
            Vector::unit(m + 1, m),
            (0..m).map(|i| Vector::unit(m + 1, i)).collect(),
        )
        .expect("same dimension"),
    );
    let constraint = SemilinearSet::new(m + 1, components).expect("same dimension");
    let pa = Pa::new(states, q, finals, transitions, constraint)?;
    Ok(Linearization { pa, origins, sink })
}

fn leaf_transition(a: &Ptar, p: usize) -> Option<usize> {
    a.transitions()
        .iter()
        .position(|t| t.from == p && t.children.is_empty())
}

impl Linearization {
    /// The spine transitions of `run`, a run accepted by the PA.
    pub fn spine_of(&self, a: &Ptar, run: &PaRun) -> Vec<usize> {
        let mut steps = Vec::with_capacity(run.transitions.len() + 1);
        let mut end = self.pa.initial();
        for &t in &run.transitions {
            end = self.pa.transitions()[t].to;
            steps.push(match self.origins[t] {
                LinearizationOrigin::Add { transition, .. } => transition,
                LinearizationOrigin::Close { transition } => transition,
            });
        }
        if end != self.sink {
            steps.push(leaf_transition(a, end).expect("accepting runs end in a leaf state"));
        }
        steps
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmptinessResult {
    Empty {
        chain: Vec<BTreeSet<usize>>,
    },
    NonEmpty {
        witness: Tree,
        spinal: SpinalComputationTree,
        chain: Vec<BTreeSet<usize>>,
    },
}

impl EmptinessResult {
    pub fn is_empty(&self) -> bool {
        matches!(self, EmptinessResult::Empty { .. })
    }

    /// `U_0 ⊆ U_1 ⊆ … ⊆ U_k`, ending with the fixpoint.
    pub fn chain(&self) -> &[BTreeSet<usize>] {
        match self {
            EmptinessResult::Empty { chain } | EmptinessResult::NonEmpty { chain, .. } => chain,
        }
    }

    pub fn witness(&self) -> Option<&Tree> {
        match self {
            EmptinessResult::Empty { .. } => None,
            EmptinessResult::NonEmpty { witness, .. } => Some(witness),
        }
    }

    pub fn spinal(&self) -> Option<&SpinalComputationTree> {
        match self {
            EmptinessResult::Empty { .. } => None,
            EmptinessResult::NonEmpty { spinal, .. } => Some(spinal),
        }
    }
}

pub fn is_empty_linear(a: &Ptar) -> Result<EmptinessResult, LinearError> {
    is_empty_linear_with(a, Strategy::default())
}

/// Fixpoint over `U_i`: `q` joins `U_{i+1}` once some spine from `q` has all
/// its residual states in `U_i`. A state entering at round `i` gets a
/// spinal computation tree of height `i - 1`, built from the PA witness and
/// the trees of the residual states.
pub fn is_empty_linear_with(a: &Ptar, strategy: Strategy) -> Result<EmptinessResult, LinearError> {
    let hat = HatAutomaton::new(a)?;
    let n = a.states().len();
    let mut trees: Vec<Option<SpinalComputationTree>> = vec![None; n];
    let mut chain = vec![BTreeSet::new()];
    loop {
        let u = chain.last().expect("nonempty chain").clone();
        let candidates: Vec<usize> = (0..n).filter(|q| !u.contains(q)).collect();
        let found = strategy.map(
            &candidates,
            |&q| -> Result<Option<Vec<usize>>, LinearError> {
                let lin = linearization_pa(a, &u, q)?;
                Ok(lin
                    .pa
                    .is_empty_with(strategy)
                    .witness()
                    .map(|run| lin.spine_of(a, run)))
            },
        );
        let mut next = u.clone();
        for (&q, spine) in candidates.iter().zip(found) {
            let Some(steps) = spine? else { continue };
            let s = SpineComputation::replay(&hat, q, &steps)?;
            let children = s
                .stateseq()
                .iter()
                .map(|&p| trees[p].clone().expect("residual states are in U"))
                .collect();
            trees[q] = Some(SpinalComputationTree::new(s, children)?);
            next.insert(q);
        }
        if next == u {
            break;
        }
        chain.push(next);
    }
    Ok(match trees[a.initial()].take() {
        None => EmptinessResult::Empty { chain },
        Some(spinal) => {
            let witness = spinal.value();
            assert!(
                a.member(&witness)?.is_some(),
                "composed witness {witness} is rejected"
            );
            EmptinessResult::NonEmpty {
                witness,
                spinal,
                chain,
            }
        }
    })
}
