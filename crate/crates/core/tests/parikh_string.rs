mod common;

use parikh_core::generate::{random_pa, Bounds};
use parikh_core::parikh_string::{Pa, PaEmptiness, PaTransition};
use parikh_core::terms::Symbol;
use parikh_core::Strategy as Eval;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pa() -> impl Strategy<Value = Pa> {
    any::<u64>().prop_map(|seed| random_pa(&mut ChaCha8Rng::seed_from_u64(seed), &Bounds::PA))
}

fn renamed(a: &Pa) -> Pa {
    let ts = a
        .transitions()
        .iter()
        .map(|t| PaTransition {
            letter: Symbol::new(&format!("z{}", t.letter)),
            ..t.clone()
        })
        .collect();
    Pa::new(
        a.states().to_vec(),
        a.initial(),
        a.finals().to_vec(),
        ts,
        a.constraint().clone(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn decision_matches_bounded_search(a in pa()) {
        let result = a.is_empty();
        prop_assert_eq!(!result.is_empty(), common::pa_bfs_oracle(&a, 12));
        if let Some(run) = result.witness() {
            prop_assert!(a.run_valid(run));
            prop_assert!(run.transitions.len() <= 12);
        }
    }

    #[test]
    fn strategies_agree(a in pa()) {
        prop_assert_eq!(a.is_empty_with(Eval::Sequential), a.is_empty_with(Eval::Parallel));
    }

    #[test]
    fn renaming_letters_keeps_the_decision(a in pa()) {
        prop_assert_eq!(a.is_empty().is_empty(), renamed(&a).is_empty().is_empty());
    }

    #[test]
    fn library_bfs_finds_the_witness_length(a in pa()) {
        if let PaEmptiness::NonEmpty(run) = a.is_empty() {
            let found = a.brute_force_nonempty(run.transitions.len()).unwrap();
            prop_assert!(a.run_valid(&found));
        }
    }
}
