//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use absq_core::arith::{is_odd_half_instance, IntSeq};
use absq_core::text::{Alphabet, Text};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// The 42-letter worked example string with exactly two length-12
/// Ab-square factors.
pub const EXAMPLE_TEXT: &str = "061056516101111065657861650510566506030652";

/// The 16-digit worked example with eight additive-square factors.
pub const EXAMPLE_DIGITS: [i64; 16] = [1, 2, 0, 3, 2, 1, 2, 0, 2, 3, 2, 1, 0, 1, 2, 3];

pub fn text_of(s: &str) -> Text {
    Text::from_chars(s, None).unwrap()
}

pub fn seq(v: &[i64]) -> IntSeq {
    IntSeq::new(v.to_vec()).unwrap()
}

pub fn random_text(rng: &mut ChaCha8Rng, n: usize, sigma: usize) -> Text {
    let alphabet = Arc::new(Alphabet::of_digits(sigma));
    Text::new(
        (0..n).map(|_| rng.gen_range(0..sigma as u32)).collect(),
        alphabet,
    )
    .unwrap()
}

pub fn random_seq(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> IntSeq {
    seq(&(0..n).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>())
}

/// A random odd-half instance with non-negative values up to `max_value`.
/// With `plant` set, a witness with an odd half-gap is planted so the
/// instance is likely a YES one; callers classify by brute force either
/// way. Rejection-samples until the odd-half property holds.
pub fn random_odd_half(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_value: i64,
    plant: bool,
) -> IntSeq {
    assert!(n >= 3 && max_value >= 2);
    loop {
        let mut vals: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_value)).collect();
        if plant {
            // positions (i, i+1, i+2) form a value progression; the
            // half-gap is 1, which is odd
            let i = rng.gen_range(0..n - 2);
            let base = rng.gen_range(0..=max_value / 2);
            let delta = rng.gen_range(0..=max_value / 4);
            vals[i] = base;
            vals[i + 1] = base + delta;
            vals[i + 2] = base + 2 * delta;
        }
        let candidate = seq(&vals);
        if is_odd_half_instance(&candidate) {
            return candidate;
        }
    }
}
