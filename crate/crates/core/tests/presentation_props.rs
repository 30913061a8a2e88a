mod common;

use pcentral::presentation::{minimality_check, parse};
use pcentral::series::Weight;
use proptest::prelude::*;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_after_serialize_is_identity(seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut pr = common::random_presentation(&mut rng);
        pr.assert_minimal = seed % 2 == 0;
        prop_assert_eq!(parse(&pr.to_json()).unwrap(), pr);
    }

    #[test]
    fn minimal_presentations_have_deep_relators(seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pr = common::random_presentation(&mut rng);
        let rep = minimality_check(&pr).unwrap();
        if rep.passes() {
            for g in pr.relator_elements().unwrap() {
                prop_assert!(g.weight() >= Weight::Finite(2));
            }
        }
    }
}

#[test]
fn rendering_reparses() {
    let names = common::names(3);
    let mut rng = common::rng(20);
    for _ in 0..200 {
        let w = common::random_word(&mut rng, 3, 3);
        let text = w.render(&names);
        assert_eq!(pcentral::parse_word(&text, &names).unwrap(), w, "{text}");
    }
}
