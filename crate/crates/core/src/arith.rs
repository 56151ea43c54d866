//! Integer sequences: double 3-term progression predicates, brute-force
//! solvers, additive-square detection, and the difference sequence.
//!
//! All solvers use exact 64-bit arithmetic; inputs are capped at
//! [`VALUE_BOUND`] so that no sum of three elements can overflow.

use crate::text::Occurrence;
use rayon::prelude::*;
use std::fmt;

/// Magnitude cap for sequence elements. Sums of two elements and doubled
/// elements stay well inside `i64` under this bound.
pub const VALUE_BOUND: i64 = i64::MAX / 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    IndexOutOfRange { index: usize, n: usize },
    ValueOutOfRange { value: i64 },
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range for sequence of length {n}")
            }
            ArithError::ValueOutOfRange { value } => {
                write!(f, "element {value} exceeds the supported magnitude bound")
            }
        }
    }
}

impl std::error::Error for ArithError {}

/// An integer sequence, 1-indexed in the public API.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeq {
    values: Vec<i64>,
}

impl IntSeq {
    pub fn new(values: Vec<i64>) -> Result<Self, ArithError> {
        for &v in &values {
            if v.abs() > VALUE_BOUND {
                return Err(ArithError::ValueOutOfRange { value: v });
            }
        }
        Ok(IntSeq { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Element at 1-based position `i`.
    pub fn get(&self, i: usize) -> i64 {
        self.values[i - 1]
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn min(&self) -> Option<i64> {
        self.values.iter().copied().min()
    }
}

impl From<IntSeq> for Vec<i64> {
    fn from(s: IntSeq) -> Vec<i64> {
        s.values
    }
}

/// A pair of positions `i < j` witnessing a solver hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexPairWitness {
    pub i: usize,
    pub j: usize,
}

impl IndexPairWitness {
    pub fn new(i: usize, j: usize) -> Self {
        debug_assert!(i < j);
        IndexPairWitness { i, j }
    }

    pub fn mid(&self) -> usize {
        (self.i + self.j) / 2
    }
}

/// `MidCond(i, j)`: `i != j`, `j - i` even, and the middle element equals
/// the average of the endpoints.
pub fn midcond(x: &IntSeq, i: usize, j: usize) -> Result<bool, ArithError> {
    let n = x.len();
    for idx in [i, j] {
        if idx < 1 || idx > n {
            return Err(ArithError::IndexOutOfRange { index: idx, n });
        }
    }
    if i == j || (j as i64 - i as i64).rem_euclid(2) != 0 {
        return Ok(false);
    }
    let mid = (i + j) / 2;
    // endpoints have the same parity, so their sum is checked against the
    // doubled middle; no rational arithmetic needed
    Ok(x.get(i) + x.get(j) == 2 * x.get(mid))
}

#[inline]
fn midcond_unchecked(v: &[i64], i: usize, j: usize) -> bool {
    // caller guarantees i < j, j - i even
    v[i - 1] + v[j - 1] == 2 * v[(i + j) / 2 - 1]
}

/// Smallest (lexicographically) MidCond witness, scanning all same-parity
/// pairs. Parallel over start indices; order of the result is fixed.
pub fn midsum3_bruteforce(x: &IntSeq) -> Option<IndexPairWitness> {
    let n = x.len();
    let v = x.values();
    (1..n.saturating_sub(1))
        .into_par_iter()
        .find_map_first(|i| {
            ((i + 2)..=n)
                .step_by(2)
                .find(|&j| midcond_unchecked(v, i, j))
                .map(|j| IndexPairWitness::new(i, j))
        })
}

/// MidCond witness whose positions form a good progression: odd endpoints
/// and an even middle.
pub fn midsum1_bruteforce(x: &IntSeq) -> Option<IndexPairWitness> {
    let n = x.len();
    let v = x.values();
    for i in (1..=n).step_by(2) {
        let mut j = i + 2;
        while j <= n {
            // middle (i+j)/2 must be even
            if ((i + j) / 2) % 2 == 0 && midcond_unchecked(v, i, j) {
                return Some(IndexPairWitness::new(i, j));
            }
            j += 2;
        }
    }
    None
}

/// Smallest witness for the convolution 3SUM form: `i < j`, `i + j <= n`,
/// `x_i + x_j = x_{i+j}`.
pub fn conv3sum_bruteforce(x: &IntSeq) -> Option<IndexPairWitness> {
    let n = x.len();
    let v = x.values();
    for i in 1..=n {
        for j in (i + 1)..=(n.saturating_sub(i)) {
            if v[i - 1] + v[j - 1] == v[i + j - 1] {
                return Some(IndexPairWitness::new(i, j));
            }
        }
    }
    None
}

/// True iff no MidCond witness has `(j - i) / 2` even.
pub fn is_odd_half_instance(x: &IntSeq) -> bool {
    let n = x.len();
    let v = x.values();
    for i in 1..n {
        // gaps divisible by 4 give even (j-i)/2
        let mut j = i + 4;
        while j <= n {
            if midcond_unchecked(v, i, j) {
                return false;
            }
            j += 4;
        }
    }
    true
}

/// Leftmost-then-shortest even-length factor with equal half sums, found
/// through prefix sums.
pub fn additive_square_detect(x: &IntSeq) -> Option<Occurrence> {
    let ps = prefix_sums(x);
    let n = x.len();
    for s in 1..=n {
        for half in 1..=(n + 1 - s) / 2 {
            if ps[s + half - 1] - ps[s - 1] == ps[s + 2 * half - 1] - ps[s + half - 1] {
                return Some(Occurrence::additive(s, 2 * half));
            }
        }
    }
    None
}

/// All additive-square occurrences, ordered by (start, length).
pub fn enumerate_additive_squares(x: &IntSeq) -> Vec<Occurrence> {
    let ps = prefix_sums(x);
    let n = x.len();
    let mut out = Vec::new();
    for s in 1..=n {
        for half in 1..=(n + 1 - s) / 2 {
            if ps[s + half - 1] - ps[s - 1] == ps[s + 2 * half - 1] - ps[s + half - 1] {
                out.push(Occurrence::additive(s, 2 * half));
            }
        }
    }
    out
}

fn prefix_sums(x: &IntSeq) -> Vec<i64> {
    let mut ps = Vec::with_capacity(x.len() + 1);
    ps.push(0i64);
    for &v in x.values() {
        ps.push(ps.last().unwrap() + v);
    }
    ps
}

/// The sequence of consecutive differences `x_2 - x_1, ..., x_n - x_{n-1}`.
pub fn diff_sequence(x: &IntSeq) -> IntSeq {
    let diffs: Vec<i64> = x.values().windows(2).map(|w| w[1] - w[0]).collect();
    IntSeq::new(diffs).expect("differences stay within bound")
}

/// View a text over an integer alphabet as a sequence (symbols parsed as
/// signed decimals); `None` when some symbol is not an integer.
pub fn int_seq_of_text(text: &crate::text::Text) -> Option<IntSeq> {
    let values: Option<Vec<i64>> = text
        .letters()
        .iter()
        .map(|&l| text.alphabet().symbol(l).parse::<i64>().ok())
        .collect();
    IntSeq::new(values?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> IntSeq {
        IntSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn midcond_examples() {
        let x = seq(&[1, 2, 3]);
        assert!(midcond(&x, 1, 3).unwrap());
        assert!(midcond(&seq(&[1, 2, 4]), 1, 3).unwrap() == false);
        assert!(!midcond(&x, 1, 2).unwrap()); // odd gap
        assert!(!midcond(&x, 2, 2).unwrap()); // i == j
        assert!(midcond(&x, 3, 1).unwrap()); // symmetric in i, j
        assert!(midcond(&x, 0, 3).is_err());
        assert!(midcond(&x, 1, 4).is_err());
    }

    #[test]
    fn midcond_symmetric_difference_form() {
        // x_j - x_mid = x_mid - x_i is the same condition
        let x = seq(&[5, -1, -7, 0, 4]);
        for i in 1..=5 {
            for j in 1..=5 {
                if i != j && (j as i64 - i as i64) % 2 == 0 {
                    let mid = (i + j) / 2;
                    let alt = x.get(j) - x.get(mid) == x.get(mid) - x.get(i);
                    assert_eq!(midcond(&x, i, j).unwrap(), alt);
                }
            }
        }
    }

    #[test]
    fn midsum3_examples() {
        assert_eq!(
            midsum3_bruteforce(&seq(&[1, 2, 3])),
            Some(IndexPairWitness::new(1, 3))
        );
        assert_eq!(midsum3_bruteforce(&seq(&[1, 1, 2])), None);
        assert_eq!(
            midsum3_bruteforce(&seq(&[0, 0, 0])),
            Some(IndexPairWitness::new(1, 3))
        );
    }

    #[test]
    fn midsum1_examples() {
        assert_eq!(
            midsum1_bruteforce(&seq(&[1, 2, 3])),
            Some(IndexPairWitness::new(1, 3))
        );
        assert_eq!(midsum1_bruteforce(&seq(&[0, 9, 1, 9, 2])), None);
        assert_eq!(
            midsum1_bruteforce(&seq(&[5, 5, 5])),
            Some(IndexPairWitness::new(1, 3))
        );
    }

    #[test]
    fn midsum1_witnesses_are_good_progressions() {
        // a MidSUM1 witness is also a MidSUM3 witness with odd (j-i)/2
        let x = seq(&[3, 9, 4, 9, 5, 2, 6]);
        if let Some(w) = midsum1_bruteforce(&x) {
            assert!(w.i % 2 == 1 && w.j % 2 == 1 && w.mid() % 2 == 0);
            assert!(midcond(&x, w.i, w.j).unwrap());
        }
    }

    #[test]
    fn conv3sum_examples() {
        assert_eq!(
            conv3sum_bruteforce(&seq(&[1, 2, 3])),
            Some(IndexPairWitness::new(1, 2))
        );
        assert_eq!(conv3sum_bruteforce(&seq(&[1, 1, 1])), None);
        assert_eq!(conv3sum_bruteforce(&seq(&[1, 1])), None);
        assert_eq!(conv3sum_bruteforce(&seq(&[])), None);
    }

    #[test]
    fn odd_half_examples() {
        assert!(is_odd_half_instance(&seq(&[1, 2, 3])));
        assert!(!is_odd_half_instance(&seq(&[1, 9, 2, 9, 3])));
        assert!(is_odd_half_instance(&seq(&[])));
    }

    #[test]
    fn additive_detect_examples() {
        assert_eq!(
            additive_square_detect(&seq(&[0, 0])),
            Some(Occurrence::additive(1, 2))
        );
        assert_eq!(additive_square_detect(&seq(&[1, 2, 1])), None);
        assert_eq!(additive_square_detect(&seq(&[])), None);
    }

    #[test]
    fn additive_enumeration_against_naive_triple_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(0..40);
            let x = seq(&(0..n).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>());
            let naive: Vec<Occurrence> = {
                let mut out = Vec::new();
                for s in 1..=x.len() {
                    for e in s..=x.len() {
                        let len = e - s + 1;
                        if len % 2 == 0 {
                            let half = len / 2;
                            let a: i64 = (s..s + half).map(|p| x.get(p)).sum();
                            let b: i64 = (s + half..=e).map(|p| x.get(p)).sum();
                            if a == b {
                                out.push(Occurrence::additive(s, len));
                            }
                        }
                    }
                }
                out.sort();
                out
            };
            assert_eq!(enumerate_additive_squares(&x), naive);
            assert_eq!(additive_square_detect(&x), naive.first().copied());
        }
    }

    #[test]
    fn diff_sequence_examples() {
        assert_eq!(diff_sequence(&seq(&[1, 2, 3])).values(), &[1, 1]);
        assert_eq!(diff_sequence(&seq(&[5])).values(), &[] as &[i64]);
    }

    #[test]
    fn midsum3_iff_diff_has_additive_square() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for round in 0..500 {
            let n = rng.gen_range(1..36);
            let span = if round % 3 == 0 { 3 } else { 30 };
            let x = seq(&(0..n).map(|_| rng.gen_range(-span..=span)).collect::<Vec<_>>());
            let lhs = midsum3_bruteforce(&x).is_some();
            let rhs = additive_square_detect(&diff_sequence(&x)).is_some();
            assert_eq!(lhs, rhs, "on {:?}", x.values());
        }
    }

    #[test]
    fn value_bound_enforced() {
        assert!(IntSeq::new(vec![i64::MAX]).is_err());
        assert!(IntSeq::new(vec![VALUE_BOUND]).is_ok());
    }
}
