use parikh_core::generate::{random_tree, small_alphabet};
use parikh_core::terms::{lex_compare, parse_tree, spine, Position, Term, Tree};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tree() -> impl Strategy<Value = Tree> {
    (any::<u64>(), 0usize..=5).prop_map(|(seed, h)| {
        random_tree(&mut ChaCha8Rng::seed_from_u64(seed), &small_alphabet(), h)
    })
}

/// A root-to-leaf path of `t` chosen by `choices`, cut to a random segment.
fn segment(t: &Tree, choices: &[u8], cut: usize) -> Vec<Position> {
    let mut at = Position::root();
    let mut path = vec![at.clone()];
    let mut sub = t;
    for &c in choices {
        if sub.is_leaf() {
            break;
        }
        let i = c as usize % sub.rank();
        at = at.child(i as u32 + 1);
        sub = &sub.children()[i];
        path.push(at.clone());
    }
    let start = cut % path.len();
    path.split_off(start)
}

proptest! {
    #[test]
    fn display_parses_back(t in tree()) {
        prop_assert_eq!(parse_tree(&t.to_string(), &small_alphabet()).unwrap(), t);
    }

    #[test]
    fn replacing_a_subtree_by_itself_is_identity(t in tree()) {
        for p in t.positions() {
            let s = t.subtree_at(&p).unwrap().clone();
            prop_assert_eq!(&t.replace_at(&p, s).unwrap(), &t);
        }
    }

    #[test]
    fn lex_order_is_preorder(t in tree()) {
        let pre = t.positions();
        let mut sorted = pre.clone();
        sorted.sort_by(lex_compare);
        prop_assert_eq!(sorted, pre);
    }

    #[test]
    fn size_and_height_are_structural(t in tree()) {
        fn check(t: &Tree) -> bool {
            let kids = t.children();
            t.size() == 1 + kids.iter().map(Term::size).sum::<usize>()
                && t.height() == kids.iter().map(|c| c.height() + 1).max().unwrap_or(0)
                && kids.iter().all(check)
        }
        prop_assert!(check(&t));
    }

    #[test]
    fn spine_recomposes(t in tree(), choices in prop::collection::vec(any::<u8>(), 0..6), cut in any::<usize>()) {
        let path = segment(&t, &choices, cut);
        let s = spine(&t, &path).unwrap();
        prop_assert_eq!(s.recompose().unwrap(), t.clone());
        // the context's own positions are the path, relative to its start
        let body = s.context.body();
        let own: Vec<Position> = body
            .positions()
            .into_iter()
            .filter(|p| matches!(body.label_at(p).unwrap(), parikh_core::terms::Slot::Label(_)))
            .map(|p| path[0].concat(&p))
            .collect();
        prop_assert_eq!(own, path);
    }

    #[test]
    fn compose_keeps_context_positions(t in tree(), choices in prop::collection::vec(any::<u8>(), 0..6), cut in any::<usize>()) {
        let path = segment(&t, &choices, cut);
        let s = spine(&t, &path).unwrap();
        let composed = s.context.compose(&s.fillers).unwrap();
        let body = s.context.body();
        for p in body.positions() {
            if let parikh_core::terms::Slot::Label(l) = body.label_at(&p).unwrap() {
                prop_assert_eq!(composed.label_at(&p).unwrap(), l);
            }
        }
    }
}
