//! Randomized searches for encoding unsoundness: any disagreement between
//! a brute-force instance answer and the detection on its gadget text is a
//! construction bug, so these fail loudly with the offending instance.

mod common;

use absq_core::absquare::detect_odd_absquare;
use absq_core::arith::{is_odd_half_instance, midsum3_bruteforce};
use absq_core::gadget::{
    build_marked_text, build_shuffled_instance, detect_marked_center, params_for_instance,
    GadgetAlphabet, GadgetVariant,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn marked_text_answers_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut tested = 0u32;
    for _ in 0..20_000 {
        if tested == 800 {
            break;
        }
        let n = rng.gen_range(3..=6usize);
        let x = random_seq(&mut rng, n, 0, 12);
        if !is_odd_half_instance(&x) {
            continue;
        }
        tested += 1;
        let params = params_for_instance(&x, 2, GadgetVariant::Plain);
        let ga = GadgetAlphabet::new(params.k);
        let marked = build_marked_text(&x, &params, &ga).unwrap();
        let answer = midsum3_bruteforce(&x).is_some();
        assert_eq!(
            detect_marked_center(&marked).is_some(),
            answer,
            "marked-text detection disagrees on {:?}",
            x.values()
        );
    }
    assert!(tested >= 500);
}

#[test]
fn shuffled_text_answers_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tested = 0u32;
    while tested < 24 {
        let x = random_seq(&mut rng, 3, 0, 9);
        if !is_odd_half_instance(&x) {
            continue;
        }
        tested += 1;
        let params = params_for_instance(&x, 2, GadgetVariant::Extended);
        let ga = GadgetAlphabet::new(params.k);
        let w = build_shuffled_instance(&x, &params, &ga, false).unwrap();
        let answer = midsum3_bruteforce(&x).is_some();
        assert_eq!(
            detect_odd_absquare(&w.text).is_some(),
            answer,
            "odd-square detection disagrees on {:?}",
            x.values()
        );
    }
}
