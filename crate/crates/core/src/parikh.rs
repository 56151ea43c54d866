//! Parikh vectors, prefix tables and linear fingerprints.
//!
//! The fingerprint of a Parikh vector is `sum_c counts[c] * w_c mod q` for
//! per-letter weights `w_c` and the Mersenne prime `q = 2^61 - 1`. It is
//! linear in the counts, so prefix fingerprints subtract like prefix sums.
//! Fingerprints only ever *suggest* equality; every detector re-verifies
//! candidate hits with exact counts, so module outputs never depend on the
//! weight choice.

use crate::text::{Text, TextError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Modulus for fingerprints: the Mersenne prime `2^61 - 1`.
pub const FP_MOD: u64 = (1 << 61) - 1;

/// Default seed for the per-process fingerprint weights. Override through
/// [`FingerprintBasis::from_seed`] (the CLI exposes `--seed` / `ABSQ_SEED`).
pub const DEFAULT_SEED: u64 = 0x5eed_ab5e_c0de_0001;

#[inline]
pub(crate) fn fp_add(a: u64, b: u64) -> u64 {
    let s = a + b; // both < 2^61, no overflow
    if s >= FP_MOD {
        s - FP_MOD
    } else {
        s
    }
}

#[inline]
pub(crate) fn fp_mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % FP_MOD as u128) as u64
}

/// Per-letter random weights; two independent weight sets are kept so the
/// sumset intersection can use a wider combined fingerprint.
#[derive(Debug, Clone)]
pub struct FingerprintBasis {
    seed: u64,
    w: Vec<u64>,
    w2: Vec<u64>,
}

impl FingerprintBasis {
    pub fn from_seed(sigma: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |n: usize| -> Vec<u64> {
            (0..n).map(|_| rng.gen_range(1..FP_MOD)).collect()
        };
        let w = draw(sigma);
        let w2 = draw(sigma);
        FingerprintBasis { seed, w, w2 }
    }

    pub fn new(sigma: usize) -> Self {
        Self::from_seed(sigma, DEFAULT_SEED)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sigma(&self) -> usize {
        self.w.len()
    }

    #[inline]
    pub fn weight(&self, letter: u32) -> u64 {
        self.w[letter as usize]
    }

    #[inline]
    pub(crate) fn weight2(&self, letter: u32) -> u64 {
        self.w2[letter as usize]
    }
}

/// Per-letter occurrence counts of a factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParikhVector {
    counts: Vec<u32>,
}

impl ParikhVector {
    pub fn zero(sigma: usize) -> Self {
        ParikhVector {
            counts: vec![0; sigma],
        }
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        ParikhVector { counts }
    }

    pub fn sigma(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, letter: u32) -> u32 {
        self.counts[letter as usize]
    }

    /// Length of any factor with this Parikh vector (the coordinate sum).
    pub fn length(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn add(&self, other: &ParikhVector) -> ParikhVector {
        debug_assert_eq!(self.sigma(), other.sigma());
        ParikhVector {
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn fingerprint(&self, basis: &FingerprintBasis) -> u64 {
        let mut h = 0u64;
        for (c, &n) in self.counts.iter().enumerate() {
            h = fp_add(h, fp_mul(n as u64, basis.weight(c as u32)));
        }
        h
    }
}

/// Parikh vector of the factor `T[i..j]` (`i = j+1` yields the zero vector).
pub fn parikh(text: &Text, i: usize, j: usize) -> Result<ParikhVector, TextError> {
    text.check_factor(i, j)?;
    let mut counts = vec![0u32; text.alphabet().len()];
    for &l in &text.letters()[i - 1..j] {
        counts[l as usize] += 1;
    }
    Ok(ParikhVector { counts })
}

/// Ab-equivalence: coordinate-wise equality over the same alphabet.
pub fn ab_equivalent(u: &ParikhVector, v: &ParikhVector) -> Result<bool, TextError> {
    if u.sigma() != v.sigma() {
        return Err(TextError::AlphabetMismatch {
            left: u.sigma(),
            right: v.sigma(),
        });
    }
    Ok(u.counts == v.counts)
}

/// Prefix Parikh vectors of a text with their fingerprints.
///
/// Stores the full `(n+1) x sigma` count matrix, so exact vector lookups are
/// O(sigma). Memory is O(n * sigma); the big gadget texts go through
/// [`PrefixFingerprints`] instead, which keeps only the fingerprint arrays.
#[derive(Debug)]
pub struct PrefixParikhTable<'a> {
    text: &'a Text,
    sigma: usize,
    counts: Vec<u32>, // (n+1) * sigma, row-major
    fp: Vec<u64>,
    fp2: Vec<u64>,
}

impl<'a> PrefixParikhTable<'a> {
    pub fn build(text: &'a Text, basis: &FingerprintBasis) -> Self {
        let n = text.len();
        let sigma = text.alphabet().len();
        assert_eq!(basis.sigma(), sigma, "basis drawn for a different alphabet");
        let mut counts = vec![0u32; (n + 1) * sigma];
        let mut fp = Vec::with_capacity(n + 1);
        let mut fp2 = Vec::with_capacity(n + 1);
        fp.push(0);
        fp2.push(0);
        for (i, &l) in text.letters().iter().enumerate() {
            let (prev, cur) = counts[i * sigma..(i + 2) * sigma].split_at_mut(sigma);
            cur.copy_from_slice(prev);
            cur[l as usize] += 1;
            fp.push(fp_add(fp[i], basis.weight(l)));
            fp2.push(fp_add(fp2[i], basis.weight2(l)));
        }
        PrefixParikhTable {
            text,
            sigma,
            counts,
            fp,
            fp2,
        }
    }

    pub fn text(&self) -> &Text {
        self.text
    }

    pub fn len(&self) -> usize {
        self.fp.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Counts of the length-`k` prefix.
    #[inline]
    pub fn row(&self, k: usize) -> &[u32] {
        &self.counts[k * self.sigma..(k + 1) * self.sigma]
    }

    pub fn vector(&self, k: usize) -> ParikhVector {
        ParikhVector {
            counts: self.row(k).to_vec(),
        }
    }

    #[inline]
    pub fn fingerprint(&self, k: usize) -> u64 {
        self.fp[k]
    }

    #[inline]
    pub(crate) fn fingerprint2(&self, k: usize) -> u64 {
        self.fp2[k]
    }

    /// Exact check that prefix vectors satisfy `P(a) + P(b) = 2 P(c)`.
    pub fn is_sum_double(&self, a: usize, b: usize, c: usize) -> bool {
        let (ra, rb, rc) = (self.row(a), self.row(b), self.row(c));
        ra.iter()
            .zip(rb)
            .zip(rc)
            .all(|((&x, &y), &z)| x + y == 2 * z)
    }

    /// Exact check that `T[i..j]` and `T[k..l]` are Ab-equivalent, via rows.
    pub fn factors_equivalent(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        debug_assert!(j + 1 - i == l + 1 - k);
        let (a, b) = (self.row(i - 1), self.row(j));
        let (c, d) = (self.row(k - 1), self.row(l));
        (0..self.sigma).all(|t| b[t] - a[t] == d[t] - c[t])
    }
}

/// Prefix fingerprints only — O(n) memory, for long texts where the full
/// count matrix would not fit.
#[derive(Debug)]
pub struct PrefixFingerprints {
    fp: Vec<u64>,
}

impl PrefixFingerprints {
    pub fn build(text: &Text, basis: &FingerprintBasis) -> Self {
        assert_eq!(basis.sigma(), text.alphabet().len());
        let mut fp = Vec::with_capacity(text.len() + 1);
        fp.push(0u64);
        for (i, &l) in text.letters().iter().enumerate() {
            fp.push(fp_add(fp[i], basis.weight(l)));
        }
        PrefixFingerprints { fp }
    }

    pub fn len(&self) -> usize {
        self.fp.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn at(&self, k: usize) -> u64 {
        self.fp[k]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.fp
    }

    /// Fingerprint test for an Ab-square of half-length `half` centred at
    /// the gap `(r, r+1)`: `P(r-half) + P(r+half) = 2 P(r)`.
    #[inline]
    pub fn center_probe(&self, r: usize, half: usize) -> bool {
        fp_add(self.fp[r - half], self.fp[r + half]) == fp_add(self.fp[r], self.fp[r])
    }
}

/// Exact Ab-square test for `T[s..s+len-1]` by direct counting.
pub(crate) fn confirm_absquare(text: &Text, s: usize, len: usize) -> bool {
    if len == 0 || len % 2 != 0 {
        return false;
    }
    let half = len / 2;
    let sigma = text.alphabet().len();
    let mut diff = vec![0i64; sigma];
    let letters = text.letters();
    for &l in &letters[s - 1..s - 1 + half] {
        diff[l as usize] += 1;
    }
    for &l in &letters[s - 1 + half..s - 1 + len] {
        diff[l as usize] -= 1;
    }
    diff.iter().all(|&d| d == 0)
}
