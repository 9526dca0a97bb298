mod common;

use plsol::dynamics::{nice_derived_length, validate_nice_set, NiceSet};
use plsol::fixtures::x0;
use plsol::mdp::{evaluate_word, is_member};
use plsol::pl::BreakSet;
use plsol::ssrp::{decide, Engine, Verdict};
use plsol::{PLMap, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn key(v: &Verdict) -> (bool, Option<usize>) {
    (v.is_soluble(), v.derived_length())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nested_sets_reach_their_height(seed in any::<u64>()) {
        let fx = common::nested_nice_set(&mut rng(seed), 3);
        let v = decide(&fx.generators);
        prop_assert_eq!(v.derived_length(), Some(fx.height));
        prop_assert!(fx.height <= BreakSet::of_all(&fx.generators).len());
    }

    #[test]
    fn soluble_certificates_are_nice(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fx = common::nested_nice_set(&mut r, 3);
        let mut x = fx.generators.clone();
        x.push(common::ball2_product(&mut r, &fx.generators));
        if let Verdict::Soluble { derived_length, certificate } = decide(&x) {
            let maps: Vec<PLMap> = certificate.iter().map(|c| c.controller.clone()).collect();
            let ws: Vec<Option<Rational>> = certificate.iter().map(|c| Some(c.witness.clone())).collect();
            let z = validate_nice_set(&maps, &ws);
            prop_assert!(z.is_ok());
            prop_assert_eq!(nice_derived_length(&z.unwrap()), derived_length);
        } else {
            prop_assert!(false, "augmented nice set judged not soluble");
        }
    }

    #[test]
    fn witnesses_revalidate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = [common::random_element(&mut r, 4), common::random_element(&mut r, 4)];
        let v = decide(&x);
        if let Some(w) = v.witness() {
            prop_assert!(w.revalidate(&x));
        }
    }

    #[test]
    fn verdict_ignores_order_and_duplicates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = [common::random_element(&mut r, 3), common::random_element(&mut r, 3)];
        let base = decide(&x);
        prop_assert_eq!(key(&decide(&[x[1].clone(), x[0].clone()])), key(&base));
        prop_assert_eq!(key(&decide(&[x[0].clone(), x[1].clone(), x[0].inverse()])), key(&base));
    }

    #[test]
    fn conjugation_preserves_verdict(seed in any::<u64>()) {
        let fx = common::nested_nice_set(&mut rng(seed), 3);
        let conj: Vec<PLMap> = fx.generators.iter().map(|f| f.conjugate(&x0())).collect();
        prop_assert_eq!(key(&decide(&conj)), key(&decide(&fx.generators)));
    }

    #[test]
    fn provenance_evaluates_to_signatures(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fx = common::nested_nice_set(&mut r, 3);
        let mut x = fx.generators.clone();
        x.push(common::ball2_product(&mut r, &fx.generators));
        let mut e = Engine::new(&x);
        e.run();
        prop_assert!(e.audit_provenance());
    }

    #[test]
    fn members_of_nested_sets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fx = common::nested_nice_set(&mut r, 2);
        let w = common::ball2_product(&mut r, &fx.generators);
        let m = is_member(&w, &fx.generators).unwrap();
        prop_assert!(m.member);
        let word = m.witness_word.unwrap();
        prop_assert_eq!(evaluate_word(&fx.generators, &word), w);
        prop_assert!(NiceSet::new(&fx.generators).is_ok());
    }
}
