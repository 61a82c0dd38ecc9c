mod common;

use parikh_core::fixtures;
use parikh_core::generate::{random_gpta, random_tree, trees_up_to_size, Bounds};
use parikh_core::gpta::{parikh, project, Gpta, Reorder};
use parikh_core::terms::{parse_tree, Term, Tree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gammas(n: usize) -> String {
    "γ".repeat(n) + "#"
}

#[test]
fn l_gamma_gamma_counts() {
    let g = fixtures::l_gamma_gamma();
    for n1 in 0..=20 {
        for n2 in 0..=20 {
            let t = parse_tree(&format!("σ({},{})", gammas(n1), gammas(n2)), g.alphabet()).unwrap();
            let got = g.member(&t).unwrap();
            assert_eq!(got.is_some(), n1 == n2, "{t}");
            if let Some((l, r)) = got {
                assert!(g.run_valid(&l, &r).unwrap());
                assert_eq!(project(&l), t);
            }
        }
    }
}

#[test]
fn dp_agrees_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = random_gpta(&mut rng, &Bounds::GPTA);
        for t in trees_up_to_size(g.alphabet(), 6) {
            let got = g.member(&t).unwrap();
            assert_eq!(
                got.is_some(),
                common::gpta_enumeration_member(&g, &t),
                "{t}"
            );
            if let Some((l, r)) = got {
                assert!(g.run_valid(&l, &r).unwrap());
                assert!(g.constraint().contains(&parikh(&l)));
            }
        }
    }
}

#[test]
fn tables_respect_the_size_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..30 {
        let g = random_gpta(&mut rng, &Bounds::GPTA);
        for _ in 0..20 {
            let t = random_tree(&mut rng, g.alphabet(), 5);
            let (_, stats) = g.member_with_stats(&t).unwrap();
            let sizes: Vec<usize> = t
                .positions()
                .iter()
                .map(|p| t.subtree_at(p).unwrap().size())
                .collect();
            for (entries, size) in stats.entries.iter().zip(sizes) {
                assert!(*entries as u128 <= g.table_bound(size));
            }
        }
    }
}

/// Accepted trees with room for exchanges: symmetric trees built from random
/// halves, plus random trees.
fn corpus(g: &Gpta, rng: &mut ChaCha8Rng) -> Vec<Tree> {
    let mut out = Vec::new();
    for _ in 0..60 {
        let half = random_tree(rng, g.alphabet(), 5);
        let other = random_tree(rng, g.alphabet(), 5);
        if g.alphabet().contains("σ") {
            let sigma = g.alphabet().symbol("σ").unwrap().clone();
            out.push(Term::node(sigma.clone(), vec![half.clone(), half.clone()]));
            out.push(Term::node(sigma, vec![half, other]));
        }
    }
    out.extend((0..60).map(|_| random_tree(rng, g.alphabet(), 7)));
    out
}

fn check_exchange(g: &Gpta, trees: &[Tree]) -> usize {
    let mut found = 0;
    for t in trees {
        let Some((l, r)) = g.member(t).unwrap() else {
            continue;
        };
        let Ok(d) = g.exchange_find(&l, &r) else {
            continue;
        };
        found += 1;
        assert_eq!(d.recompose(), l);
        let p = g.states().len() + 1;
        let h = d.zeta2.height();
        assert!(0 < h && h < p, "ζ2 height {h}");
        for v in [Reorder::IntoSecond, Reorder::IntoFirst] {
            let moved = d.reorder(v);
            assert_eq!(parikh(&moved), parikh(&l));
            assert!(
                g.member(&project(&moved)).unwrap().is_some(),
                "{v:?} of {t}"
            );
        }
    }
    found
}

#[test]
fn exchange_keeps_membership_on_trivial_gpta() {
    let g = common::trivial_gpta();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trees = corpus(&g, &mut rng);
    assert!(check_exchange(&g, &trees) > 50);
}

#[test]
fn exchange_on_l_gamma_gamma() {
    // The two branches run in different states, so their cycles never match.
    let g = fixtures::l_gamma_gamma();
    let trees: Vec<Tree> = (0..=20)
        .map(|n| parse_tree(&format!("σ({0},{0})", gammas(n)), g.alphabet()).unwrap())
        .collect();
    assert_eq!(check_exchange(&g, &trees), 0);
}

#[test]
fn exchange_on_generated_gptas() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut found = 0;
    for _ in 0..40 {
        let g = random_gpta(&mut rng, &Bounds::GPTA);
        let trees = corpus(&g, &mut rng);
        found += check_exchange(&g, &trees);
    }
    assert!(found > 0);
}
