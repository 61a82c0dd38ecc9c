mod common;

use parikh_core::fixtures;
use parikh_core::generate::{random_linear_ptar, small_alphabet, trees_up_to_size, Bounds};
use parikh_core::ptar::{ComputationTrace, CounterAction, Node, Ptar};
use parikh_core::semilinear::Vector;
use parikh_core::terms::{parse_tree, Position, Tree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_against_exhaustive(a: &Ptar, trees: &[Tree]) {
    for t in trees {
        let fast = a.member(t).unwrap();
        assert_eq!(fast.is_some(), common::ptar_exhaustive_member(a, t), "{t}");
        if let Some(trace) = fast {
            assert_eq!(trace.steps.len(), t.size());
            assert!(a.trace_valid(t, &trace), "{t}");
        }
    }
}

#[test]
fn member_agrees_with_exhaustive_rewriting_on_fixtures() {
    for a in [
        fixtures::l_ab(),
        fixtures::l_lin(),
        fixtures::l_3(),
        fixtures::spinal(),
    ] {
        let trees = trees_up_to_size(a.alphabet(), 7);
        check_against_exhaustive(&a, &trees);
    }
}

#[test]
fn member_agrees_with_exhaustive_rewriting_on_generated() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trees = trees_up_to_size(&small_alphabet(), 6);
    for _ in 0..40 {
        let a = random_linear_ptar(&mut rng, &Bounds::LINEAR);
        check_against_exhaustive(&a, &trees);
    }
}

#[test]
fn worked_examples() {
    let l_ab = fixtures::l_ab();
    let yes = parse_tree("a(b(#,#),b(#,#))", l_ab.alphabet()).unwrap();
    assert!(l_ab.member(&yes).unwrap().is_some());
    let l_3 = fixtures::l_3();
    let t = parse_tree("γ(σ(γ#,γ#))", l_3.alphabet()).unwrap();
    assert!(l_3.member(&t).unwrap().is_some());
    let unbalanced = parse_tree("γ(σ(γ#,γγ#))", l_3.alphabet()).unwrap();
    assert!(l_3.member(&unbalanced).unwrap().is_none());
    let l_lin = fixtures::l_lin();
    let t = parse_tree("a(cd#,a(ccdd#,b(cd#,b(cd#,#))))", l_lin.alphabet()).unwrap();
    assert!(l_lin.member(&t).unwrap().is_some());
    let t = parse_tree("a(cd#,a(ccd#,b(cd#,b(cd#,#))))", l_lin.alphabet()).unwrap();
    assert!(l_lin.member(&t).unwrap().is_none());
}

/// Replays a trace and checks at every configuration that its counters are
/// the sum of the Add vectors since the last reset on its path.
fn assert_counters_follow_paths(a: &Ptar, tree: &Tree, trace: &ComputationTrace) {
    let mut partial = a.start();
    // expected[p] = sum of vectors on the path to p since the last reset
    let mut expected =
        std::collections::HashMap::from([(Position::root(), Vector::zeros(a.dim()))]);
    for (t, at) in &trace.steps {
        let Node::Config(c) = partial.label_at(at).unwrap() else {
            panic!()
        };
        assert_eq!(&c.counters, &expected[at]);
        for (i, (_, act)) in a.transitions()[*t].children.iter().enumerate() {
            let v = match act {
                CounterAction::Reset => Vector::zeros(a.dim()),
                CounterAction::Add(d) => expected[at].add(d),
            };
            expected.insert(at.child(i as u32 + 1), v);
        }
        partial = a.step(&partial, at, *t).unwrap();
    }
    assert_eq!(parikh_core::ptar::finished(&partial).as_ref(), Some(tree));
}

#[test]
fn counters_are_path_sums() {
    for a in [fixtures::l_ab(), fixtures::l_lin(), fixtures::spinal()] {
        for t in trees_up_to_size(a.alphabet(), 9) {
            if let Some(trace) = a.member(&t).unwrap() {
                assert_counters_follow_paths(&a, &t, &trace);
            }
        }
    }
}

fn l_ab_tree() -> impl Strategy<Value = Tree> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::l_ab_valid_tree(&mut rng, 8)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn l_ab_accepts_valid_trees(t in l_ab_tree()) {
        prop_assert!(common::l_ab_oracle(&t));
        prop_assert!(fixtures::l_ab().member(&t).unwrap().is_some());
    }

    #[test]
    fn l_ab_rejects_broken_paths(t in l_ab_tree(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::l_ab_mutant(&mut rng, &t);
        prop_assert_eq!(
            fixtures::l_ab().member(&m).unwrap().is_some(),
            common::l_ab_oracle(&m)
        );
    }

    /// Rewriting at independent positions commutes: any replay order that
    /// keeps parents before children reproduces the tree.
    #[test]
    fn replay_order_is_irrelevant(t in l_ab_tree(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let a = fixtures::l_ab();
        let trace = a.member(&t).unwrap().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pending = trace.steps.clone();
        let mut order = Vec::new();
        while !pending.is_empty() {
            let ready: Vec<usize> = (0..pending.len())
                .filter(|&i| {
                    let p = &pending[i].1;
                    p.parent().is_none_or(|q| order.iter().any(|(_, r): &(usize, Position)| *r == q))
                })
                .collect();
            let pick = *ready.choose(&mut rng).unwrap();
            order.push(pending.remove(pick));
        }
        let reordered = ComputationTrace { steps: order };
        prop_assert!(a.trace_valid(&t, &reordered));
    }
}
