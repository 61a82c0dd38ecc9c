mod common;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use parikh_core::fixtures;
use parikh_core::generate::{random_linear_ptar, trees_up_to_size, Bounds};
use parikh_core::linear::{
    for_each_spine, hat_automaton, is_empty_linear, is_empty_linear_with, linearization_pa,
    spinal_search, spinal_search_for, SpineComputation,
};
use parikh_core::ptar::Ptar;
use parikh_core::Strategy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn generated(seed: u64, count: usize) -> Vec<Ptar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_linear_ptar(&mut rng, &Bounds::LINEAR))
        .collect()
}

fn check_semantics(a: &Ptar, max_size: usize) {
    for t in trees_up_to_size(a.alphabet(), max_size) {
        let direct = a.member(&t).unwrap().is_some();
        let spinal = spinal_search_for(a, &t).unwrap();
        assert_eq!(direct, spinal.is_some(), "{t}");
        if let Some(d) = spinal {
            assert_eq!(d.value(), t);
        }
    }
}

#[test]
fn spinal_semantics_on_fixtures() {
    check_semantics(&fixtures::l_lin(), 7);
    check_semantics(&fixtures::spinal(), 7);
}

#[test]
fn spinal_semantics_on_generated() {
    for a in generated(21, 30) {
        check_semantics(&a, 6);
    }
}

#[test]
fn bounded_spinal_search_values_are_members() {
    for a in generated(22, 60) {
        for q in 0..a.states().len() {
            if let Some(d) = spinal_search(&a, q, a.states().len(), 6).unwrap() {
                assert!(a
                    .derives(
                        q,
                        &parikh_core::semilinear::Vector::zeros(a.dim()),
                        &d.value()
                    )
                    .unwrap()
                    .is_some());
            }
        }
    }
}

#[test]
fn fixtures_are_nonempty_with_short_spinal_trees() {
    for a in [fixtures::l_lin(), fixtures::spinal()] {
        let r = is_empty_linear(&a).unwrap();
        let w = r.witness().expect("nonempty");
        assert!(a.member(w).unwrap().is_some());
        assert!(r.spinal().unwrap().height() <= a.states().len());
        assert_eq!(&r.spinal().unwrap().value(), w);
    }
}

#[test]
fn emptiness_cross_validation() {
    for a in generated(23, 120) {
        let r = is_empty_linear(&a).unwrap();
        match r.witness() {
            Some(w) => {
                assert!(a.member(w).unwrap().is_some());
                assert!(r.spinal().unwrap().height() <= a.states().len());
            }
            None => assert!(!common::accepts_some_tree_of_height(&a, 6)),
        }
    }
}

#[test]
fn chain_is_monotone_and_short() {
    for a in generated(24, 120) {
        let r = is_empty_linear(&a).unwrap();
        let chain = r.chain();
        assert!(chain[0].is_empty());
        assert!(chain
            .windows(2)
            .all(|w| w[0].is_subset(&w[1]) && w[0] != w[1]));
        assert!(chain.len() <= a.states().len() + 1);
    }
}

#[test]
fn loop_invariant() {
    for a in generated(25, 80) {
        let chain = is_empty_linear(&a).unwrap().chain().to_vec();
        let last = chain.last().unwrap().clone();
        // one more round past the fixpoint changes nothing
        let rounds = chain.into_iter().chain(std::iter::once(last));
        for (j, u) in rounds.enumerate().skip(1) {
            for q in 0..a.states().len() {
                let found = spinal_search(&a, q, j - 1, 7).unwrap().is_some();
                assert_eq!(u.contains(&q), found, "q{q} in U{j}");
            }
        }
    }
}

fn residuals_within(a: &Ptar, q: usize, u: &BTreeSet<usize>, max_len: usize) -> bool {
    let hat = hat_automaton(a).unwrap();
    for_each_spine(a, q, max_len, |steps| {
        let s = SpineComputation::replay(&hat, q, steps).unwrap();
        if s.stateseq().iter().all(|p| u.contains(p)) {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .is_break()
}

#[test]
fn linearization_matches_spine_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for a in generated(27, 100) {
        let n = a.states().len();
        let u: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        for q in 0..n {
            let lin = linearization_pa(&a, &u, q).unwrap();
            let run = lin.pa.is_empty().witness().cloned();
            assert_eq!(
                run.is_some(),
                residuals_within(&a, q, &u, 7),
                "q{q}, U = {u:?}"
            );
            if let Some(run) = run {
                let steps = lin.spine_of(&a, &run);
                let s = SpineComputation::replay(&hat_automaton(&a).unwrap(), q, &steps).unwrap();
                assert!(s.stateseq().iter().all(|p| u.contains(p)));
            }
        }
    }
}

#[test]
fn strategies_agree() {
    for a in generated(28, 60) {
        assert_eq!(
            is_empty_linear_with(&a, Strategy::Sequential).unwrap(),
            is_empty_linear_with(&a, Strategy::Parallel).unwrap()
        );
    }
}
