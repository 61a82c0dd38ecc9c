mod common;

use std::collections::{HashSet, VecDeque};

use parikh_core::fixtures;
use parikh_core::generate::random_two_cm;
use parikh_core::ptar::{Configuration, Node, PartialTree};
use parikh_core::semilinear::Vector;
use parikh_core::terms::{parse_tree, Position, Term};
use parikh_core::twocm::{encode, gadget_search, machine_counters, CmOp, EncodedPta, TwoCM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v3(a: u64, b: u64, c: u64) -> Vector {
    Vector::from([a, b, c])
}

fn gadget_accepts(e: &EncodedPta, q: usize, w: &Vector) -> bool {
    match gadget_search(&e.ptar, q, w, 40) {
        Some(seq) => {
            // replay: a monadic tree γ^n α from (q, w)
            let mut t = Term::leaf(parikh_core::terms::Symbol::new("α"));
            for _ in 1..seq.len() {
                t = Term::node(parikh_core::terms::Symbol::new("γ"), vec![t]);
            }
            assert!(e.ptar.derives(q, w, &t).unwrap().is_some());
            true
        }
        None => false,
    }
}

#[test]
fn observations_one_and_two() {
    let e = encode(&fixtures::inc_dec());
    for s1 in 0..=5 {
        for s2 in 0..=5 {
            for l in 0..=5 {
                let w = v3(s1, s2, l);
                assert_eq!(gadget_accepts(&e, e.lt(1), &w), l <= s1, "lt1 {w}");
                assert_eq!(gadget_accepts(&e, e.lt(2), &w), l <= s2, "lt2 {w}");
                assert_eq!(gadget_accepts(&e, e.eq(1), &w), s1 == l, "eq1 {w}");
                assert_eq!(gadget_accepts(&e, e.eq(2), &w), s2 == l, "eq2 {w}");
            }
        }
    }
}

fn config(state: usize, counters: Vector) -> PartialTree {
    Term::leaf(Node::Config(Configuration { state, counters }))
}

/// Follows machine transitions from `(q, w)` along the machine-state child,
/// leaving gadget children unexpanded.
fn run_segment(e: &EncodedPta, q: usize, w: &Vector, machine: &[usize]) -> Option<PartialTree> {
    let mut t = config(q, w.clone());
    let mut at = Position::root();
    for &k in machine {
        let ti = e.phi[k];
        t = e.ptar.step(&t, &at, ti).ok()?;
        at = at.child(e.ptar.transitions()[ti].children.len() as u32);
    }
    Some(t)
}

#[test]
fn observation_three_shift_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let shift = v3(1, 1, 1);
    for _ in 0..200 {
        let m = random_two_cm(&mut rng, 3, 4);
        if m.transitions().is_empty() {
            continue;
        }
        let e = encode(&m);
        let w = v3(
            rng.gen_range(0..4),
            rng.gen_range(0..4),
            rng.gen_range(0..4),
        );
        // a random chain of machine transitions
        let mut q = m.initial();
        let mut seq = Vec::new();
        for _ in 0..6 {
            let out: Vec<usize> = (0..m.transitions().len())
                .filter(|&k| m.transitions()[k].from == q)
                .collect();
            let Some(&k) = out.get(rng.gen_range(0..out.len().max(1))) else {
                break;
            };
            seq.push(k);
            q = m.transitions()[k].to;
        }
        let base = run_segment(&e, m.initial(), &w, &seq).unwrap();
        let moved = run_segment(&e, m.initial(), &w.add(&shift), &seq).unwrap();
        let expect = base.map(&|n: &Node| match n {
            Node::Config(c) => Node::Config(Configuration {
                state: c.state,
                counters: c.counters.add(&shift),
            }),
            other => other.clone(),
        });
        assert_eq!(moved, expect);
    }
}

/// Every configuration reachable from the start, if there are at most
/// `limit`.
fn reachable(m: &TwoCM, limit: usize) -> Option<HashSet<parikh_core::twocm::CmConfig>> {
    let mut seen = HashSet::from([m.start()]);
    let mut queue = VecDeque::from([m.start()]);
    while let Some(c) = queue.pop_front() {
        for (_, next) in m.cm_step(&c) {
            if seen.insert(next) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(seen)
}

#[test]
fn correspondence_with_bounded_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let (mut accepting, mut refuted) = (0, 0);
    for _ in 0..300 {
        let m = random_two_cm(&mut rng, 3, 4);
        let e = encode(&m);
        if let Some(run) = m.cm_bounded_accepts(8) {
            assert!(m.is_accepting(&m.run(&run).unwrap()));
            assert!(common::accepts_some_tree_of_height(&e.ptar, 18));
            accepting += 1;
        } else if let Some(all) = reachable(&m, 200) {
            if all.iter().all(|c| !m.is_accepting(c)) {
                assert!(!common::accepts_some_tree_of_height(&e.ptar, 12));
                refuted += 1;
            }
        }
    }
    assert!(accepting > 10 && refuted > 10, "{accepting} {refuted}");
}

#[test]
fn sample_machines() {
    let m = fixtures::inc_dec();
    assert_eq!(m.cm_bounded_accepts(2).map(|r| r.len()), Some(2));
    let e = encode(&m);
    let t = parse_tree("γ(σ(α,α))", e.ptar.alphabet()).unwrap();
    let trace = e.ptar.member(&t).unwrap().unwrap();
    // the machine-state configuration after each step stands for the
    // machine's counters
    let mut p = e.ptar.start();
    let mut seen = Vec::new();
    for (ti, at) in &trace.steps {
        if let Node::Config(c) = p.label_at(at).unwrap() {
            if !e.is_gadget_state(c.state) {
                seen.push((c.state, machine_counters(&c.counters).unwrap()));
            }
        }
        p = e.ptar.step(&p, at, *ti).unwrap();
    }
    assert_eq!(seen, vec![(0, [0, 0]), (1, [1, 0]), (2, [0, 0])]);

    let inc_only = encode(&fixtures::inc_only());
    assert_eq!(fixtures::inc_only().cm_bounded_accepts(50), None);
    assert!(!common::accepts_some_tree_of_height(&inc_only.ptar, 6));
    assert!(inc_only.ptar.is_reset_free());
    assert!(matches!(
        fixtures::inc_only().transitions()[0].op,
        CmOp::Inc(1)
    ));
}
