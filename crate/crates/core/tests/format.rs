use parikh_core::fixtures;
use parikh_core::format::{parse, AutomatonFile};
use parikh_core::generate::{random_gpta, random_linear_ptar, random_pa, random_two_cm, Bounds};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn round_trips(f: AutomatonFile) -> Result<(), TestCaseError> {
    let text = f.to_text();
    let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, &f);
    prop_assert_eq!(back.to_text(), text);
    Ok(())
}

proptest! {
    #[test]
    fn generated_automata_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        round_trips(AutomatonFile::Pa(random_pa(&mut rng, &Bounds::PA)))?;
        round_trips(AutomatonFile::Gpta(random_gpta(&mut rng, &Bounds::GPTA)))?;
        round_trips(AutomatonFile::Ptar(random_linear_ptar(&mut rng, &Bounds::LINEAR)))?;
        round_trips(AutomatonFile::TwoCm(random_two_cm(&mut rng, 3, 4)))?;
    }
}

#[test]
fn fixtures_round_trip() {
    for (name, text) in fixtures::ALL {
        let f = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse(&f.to_text()).unwrap(), f, "{name}");
    }
}

fn error_line(text: &str) -> Option<usize> {
    parse(text).expect_err("malformed").line
}

#[test]
fn malformed_files() {
    let base = fixtures::L_LIN;
    // transitions are on lines 8..=15
    let arity = base.replace(
        "trans q_c -> c ( q_c [1 0] )",
        "trans q_c -> c ( q_c [1 0] , q_c [1 0] )",
    );
    assert_eq!(error_line(&arity), Some(12));
    let dim = base.replace(
        "trans q_d -> d ( q_d [0 1] )",
        "trans q_d -> d ( q_d [0 1 1] )",
    );
    assert_eq!(error_line(&dim), Some(14));
    let state = base.replace("trans q_d -> #", "trans q_e -> #");
    assert_eq!(error_line(&state), Some(15));
    let reset_in_pta = base.replace("kind ptar", "kind pta");
    assert_eq!(error_line(&reset_in_pta), Some(8));
    let no_init = base.replace("init q_a\n", "");
    assert!(parse(&no_init).is_err());
    let final_in_ptar = base.replace("init q_a", "init q_a\nfinal q_a");
    assert_eq!(error_line(&final_in_ptar), Some(7));
    assert!(parse("kind nope\n").is_err());
    let machine = fixtures::INC_DEC.replace("trans q0 inc1 q1", "trans q0 inc3 q1");
    assert_eq!(error_line(&machine), Some(6));
}
