//! Ab-square detection and enumeration.
//!
//! Three tiers of machinery live here:
//! * quadratic scans over `(start, length)` driven by prefix fingerprints
//!   with exact confirmation of every hit (the workhorse oracles);
//! * a fully naive cubic enumerator used as an independent cross-check;
//! * the divide-and-conquer all-centers algorithm, which reduces center
//!   computation to sumset intersections `(A + B) ∩ 2·C` over monotone sets
//!   of prefix Parikh vectors. The intersection backend is pluggable; both
//!   shipped backends are quadratic in the worst case.

use crate::parikh::{
    confirm_absquare, fp_add, parikh, FingerprintBasis, PrefixFingerprints, PrefixParikhTable,
};
use crate::text::{Center, Occurrence, Text};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap};

/// True iff the text is a nonempty even-length string whose halves are
/// Ab-equivalent.
pub fn is_absquare(text: &Text) -> bool {
    let n = text.len();
    n > 0 && n % 2 == 0 && confirm_absquare(text, 1, n)
}

/// Exact test for an Ab-square of half-length `half` centred at gap `r`.
pub fn absquare_at(text: &Text, r: usize, half: usize) -> bool {
    half >= 1 && r >= half && r + half <= text.len() && confirm_absquare(text, r - half + 1, 2 * half)
}

/// All Ab-square occurrences ordered by `(start, length)`.
///
/// Fingerprint probes with exact confirmation; parallel over starts.
pub fn enumerate_absquares(text: &Text) -> Vec<Occurrence> {
    let n = text.len();
    if n < 2 {
        return Vec::new();
    }
    let basis = FingerprintBasis::new(text.alphabet().len());
    let fps = PrefixFingerprints::build(text, &basis);
    let fp = fps.as_slice();
    let per_start: Vec<Vec<Occurrence>> = (1..n)
        .into_par_iter()
        .map(|s| {
            let base = s - 1;
            let mut out = Vec::new();
            let max_half = (n - base) / 2;
            for half in 1..=max_half {
                let lhs = fp_add(fp[base], fp[base + 2 * half]);
                let rhs = fp_add(fp[base + half], fp[base + half]);
                if lhs == rhs && confirm_absquare(text, s, 2 * half) {
                    out.push(Occurrence::absquare(s, 2 * half));
                }
            }
            out
        })
        .collect();
    per_start.into_iter().flatten().collect()
}

/// Independent naive enumerator: double loop over factors, recomputing
/// Parikh vectors from scratch. Cubic; only for cross-checks on small texts.
pub fn naive_enumerate_absquares(text: &Text) -> Vec<Occurrence> {
    let n = text.len();
    let mut out = Vec::new();
    for s in 1..=n {
        for e in s..=n {
            let len = e - s + 1;
            if len % 2 == 0 {
                let mid = s + len / 2 - 1;
                let u = parikh(text, s, mid).unwrap();
                let v = parikh(text, mid + 1, e).unwrap();
                if u == v {
                    out.push(Occurrence::absquare(s, len));
                }
            }
        }
    }
    out
}

/// Leftmost-start, then shortest, Ab-square occurrence, or `None`.
pub fn detect_absquare(text: &Text) -> Option<Occurrence> {
    let n = text.len();
    if n < 2 {
        return None;
    }
    let basis = FingerprintBasis::new(text.alphabet().len());
    let fps = PrefixFingerprints::build(text, &basis);
    let fp = fps.as_slice();
    (1..n).into_par_iter().find_map_first(|s| {
        let base = s - 1;
        for half in 1..=(n - base) / 2 {
            let lhs = fp_add(fp[base], fp[base + 2 * half]);
            let rhs = fp_add(fp[base + half], fp[base + half]);
            if lhs == rhs && confirm_absquare(text, s, 2 * half) {
                return Some(Occurrence::absquare(s, 2 * half));
            }
        }
        None
    })
}

/// Leftmost-start, then shortest, Ab-square of odd half-length (total
/// length 2 mod 4), or `None`.
pub fn detect_odd_absquare(text: &Text) -> Option<Occurrence> {
    let n = text.len();
    if n < 2 {
        return None;
    }
    let basis = FingerprintBasis::new(text.alphabet().len());
    let fps = PrefixFingerprints::build(text, &basis);
    let fp = fps.as_slice();
    (1..n).into_par_iter().find_map_first(|s| {
        let base = s - 1;
        let max_half = (n - base) / 2;
        let mut half = 1;
        while half <= max_half {
            let lhs = fp_add(fp[base], fp[base + 2 * half]);
            let rhs = fp_add(fp[base + half], fp[base + half]);
            if lhs == rhs && confirm_absquare(text, s, 2 * half) {
                return Some(Occurrence::absquare(s, 2 * half));
            }
            half += 2;
        }
        None
    })
}

// ---------------------------------------------------------------------------
// Brute-force center scans (fingerprint-driven, exactly confirmed)
// ---------------------------------------------------------------------------

fn centers_scan(text: &Text, odd_only: bool, attest_max: bool) -> Vec<Center> {
    let n = text.len();
    if n < 2 {
        return Vec::new();
    }
    let basis = FingerprintBasis::new(text.alphabet().len());
    let fps = PrefixFingerprints::build(text, &basis);
    let fp = fps.as_slice();
    let per_center: Vec<Option<Center>> = (1..n)
        .into_par_iter()
        .map(|r| {
            let max_half = r.min(n - r);
            let mut found: Option<usize> = None;
            let start_half = 1;
            let step = if odd_only { 2 } else { 1 };
            let mut half = start_half;
            while half <= max_half {
                let lhs = fp_add(fp[r - half], fp[r + half]);
                let rhs = fp_add(fp[r], fp[r]);
                if lhs == rhs && confirm_absquare(text, r - half + 1, 2 * half) {
                    found = Some(half);
                    if !attest_max {
                        break;
                    }
                }
                half += step;
            }
            found.map(|h| Center::attested(r, h))
        })
        .collect();
    per_center.into_iter().flatten().collect()
}

/// All Ab-square centers by direct per-center scanning. Attests the first
/// (smallest) half-length found per center.
pub fn centers_bruteforce(text: &Text) -> Vec<Center> {
    centers_scan(text, false, false)
}

/// Like [`centers_bruteforce`] but attests the maximal half-length.
pub fn centers_bruteforce_max(text: &Text) -> Vec<Center> {
    centers_scan(text, false, true)
}

/// Centers of odd-half-length Ab-squares by direct scanning.
pub fn odd_centers_bruteforce(text: &Text) -> Vec<Center> {
    centers_scan(text, true, false)
}

/// Fully naive center set (no fingerprints at all): for every gap and
/// half-length, compare factor Parikh vectors recomputed from a prefix
/// table. Quadratic with exact arithmetic; the independent oracle.
pub fn centers_naive(text: &Text) -> BTreeSet<usize> {
    naive_center_set(text, false)
}

/// Naive odd-half-length center set.
pub fn odd_centers_naive(text: &Text) -> BTreeSet<usize> {
    naive_center_set(text, true)
}

fn naive_center_set(text: &Text, odd_only: bool) -> BTreeSet<usize> {
    let n = text.len();
    let mut out = BTreeSet::new();
    if n < 2 {
        return out;
    }
    let basis = FingerprintBasis::new(text.alphabet().len());
    let table = PrefixParikhTable::build(text, &basis);
    for r in 1..n {
        let step = if odd_only { 2 } else { 1 };
        let mut half = 1;
        while half <= r.min(n - r) {
            if table.factors_equivalent(r - half + 1, r, r + 1, r + half) {
                out.insert(r);
                break;
            }
            half += step;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Monotone prefix-Parikh sets and sumset intersection
// ---------------------------------------------------------------------------

/// Strategy for computing `{ |C| : 2C ∈ A + B }` over monotone sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionBackend {
    /// Hash join: doubled C fingerprints are indexed, the A×B sums stream
    /// past them. (Keeps memory at O(|C|) instead of O(|A|·|B|).)
    PairHash,
    /// Per-B-row sorted A sums probed by binary search.
    SortMerge,
}

/// The prefix Parikh vectors `P_{lo..hi}` of a factor of the underlying
/// text, optionally restricted to prefix lengths of parity `parity`.
///
/// Lengths are local to the factor: local length `k` corresponds to the
/// global prefix `base + k`. Because a shared base vector cancels on both
/// sides of `A + B = 2C`, the divide-and-conquer can probe global prefix
/// fingerprints directly.
#[derive(Debug, Clone, Copy)]
pub struct MonotoneParikhSet<'a, 'b> {
    table: &'a PrefixParikhTable<'b>,
    base: usize,
    lo: usize,
    hi: usize, // inclusive; empty when hi < lo
    parity: Option<u8>,
}

impl<'a, 'b> MonotoneParikhSet<'a, 'b> {
    pub fn new(table: &'a PrefixParikhTable<'b>, lo: usize, hi: usize) -> Self {
        Self::with_base(table, 0, lo, hi, None)
    }

    pub fn with_base(
        table: &'a PrefixParikhTable<'b>,
        base: usize,
        lo: usize,
        hi: usize,
        parity: Option<u8>,
    ) -> Self {
        debug_assert!(base + hi <= table.len());
        MonotoneParikhSet {
            table,
            base,
            lo,
            hi,
            parity,
        }
    }

    /// Local prefix lengths in the set, in increasing order.
    fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        let parity = self.parity;
        let range = if self.hi < self.lo {
            None
        } else {
            Some(self.lo..=self.hi)
        };
        range.into_iter().flatten().filter(move |&k| match parity {
            Some(p) => (k % 2) as u8 == p,
            None => true,
        })
    }

    fn is_empty_range(&self) -> bool {
        self.hi < self.lo
    }

    #[inline]
    fn fp(&self, k: usize) -> (u64, u64) {
        let g = self.base + k;
        (self.table.fingerprint(g), self.table.fingerprint2(g))
    }

    fn same_source(&self, other: &Self) -> bool {
        std::ptr::eq(self.table, other.table) && self.base == other.base
    }
}

/// `{ |C_k| : 2·C_k ∈ A + B }` for monotone prefix sets over one text.
///
/// Fingerprint hits are always confirmed exactly against the prefix count
/// table, so the result is deterministic for any weight choice.
pub fn intersect_sumset(
    a: &MonotoneParikhSet,
    b: &MonotoneParikhSet,
    c: &MonotoneParikhSet,
    backend: IntersectionBackend,
) -> BTreeSet<usize> {
    assert!(
        a.same_source(b) && a.same_source(c),
        "monotone sets must come from one text"
    );
    if a.is_empty_range() || b.is_empty_range() || c.is_empty_range() {
        return BTreeSet::new();
    }
    match backend {
        IntersectionBackend::PairHash => intersect_pair_hash(a, b, c),
        IntersectionBackend::SortMerge => intersect_sort_merge(a, b, c),
    }
}

#[inline]
fn confirm_hit(
    table: &PrefixParikhTable,
    base: usize,
    ka: usize,
    kb: usize,
    kc: usize,
) -> bool {
    if table.is_sum_double(base + ka, base + kb, base + kc) {
        // lengths are coordinate sums, so they must agree too
        debug_assert_eq!(ka + kb, 2 * kc);
        true
    } else {
        false
    }
}

fn intersect_pair_hash(
    a: &MonotoneParikhSet,
    b: &MonotoneParikhSet,
    c: &MonotoneParikhSet,
) -> BTreeSet<usize> {
    // index the doubled C fingerprints
    let mut index: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    let mut remaining = 0usize;
    for k in c.lengths() {
        let (f1, f2) = c.fp(k);
        index
            .entry((fp_add(f1, f1), fp_add(f2, f2)))
            .or_default()
            .push(k);
        remaining += 1;
    }
    let mut found: BTreeSet<usize> = BTreeSet::new();
    let b_fps: Vec<(usize, u64, u64)> = b.lengths().map(|k| (k, b.fp(k).0, b.fp(k).1)).collect();
    'outer: for ka in a.lengths() {
        let (fa1, fa2) = a.fp(ka);
        for &(kb, fb1, fb2) in &b_fps {
            let key = (fp_add(fa1, fb1), fp_add(fa2, fb2));
            if let Some(ks) = index.get(&key) {
                for &kc in ks {
                    if !found.contains(&kc) && confirm_hit(a.table, a.base, ka, kb, kc) {
                        found.insert(kc);
                        if found.len() == remaining {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    found
}

fn intersect_sort_merge(
    a: &MonotoneParikhSet,
    b: &MonotoneParikhSet,
    c: &MonotoneParikhSet,
) -> BTreeSet<usize> {
    let a_fps: Vec<(usize, u64)> = a.lengths().map(|k| (k, a.fp(k).0)).collect();
    let c_fps: Vec<(usize, u64)> = c
        .lengths()
        .map(|k| {
            let f = c.fp(k).0;
            (k, fp_add(f, f))
        })
        .collect();
    let mut found: BTreeSet<usize> = BTreeSet::new();
    let mut row: Vec<(u64, usize)> = Vec::with_capacity(a_fps.len());
    for kb in b.lengths() {
        let (fb, _) = b.fp(kb);
        row.clear();
        row.extend(a_fps.iter().map(|&(ka, fa)| (fp_add(fa, fb), ka)));
        row.sort_unstable();
        for &(kc, target) in &c_fps {
            if found.contains(&kc) {
                continue;
            }
            let lo = row.partition_point(|&(s, _)| s < target);
            let mut idx = lo;
            while idx < row.len() && row[idx].0 == target {
                let ka = row[idx].1;
                if confirm_hit(a.table, a.base, ka, kb, kc) {
                    found.insert(kc);
                    break;
                }
                idx += 1;
            }
        }
    }
    found
}

// ---------------------------------------------------------------------------
// Divide-and-conquer all-centers
// ---------------------------------------------------------------------------

/// Centers of all Ab-square factors, by divide and conquer over sumset
/// intersections of monotone prefix sets.
pub fn centers(text: &Text, backend: IntersectionBackend) -> BTreeSet<usize> {
    let basis = FingerprintBasis::new(text.alphabet().len());
    centers_with(text, backend, &basis)
}

pub fn centers_with(
    text: &Text,
    backend: IntersectionBackend,
    basis: &FingerprintBasis,
) -> BTreeSet<usize> {
    let table = PrefixParikhTable::build(text, basis);
    let mut out = BTreeSet::new();
    centers_rec(&table, 1, text.len(), backend, false, &mut out);
    out
}

/// Centers of all odd-half-length Ab-squares.
pub fn odd_centers(text: &Text, backend: IntersectionBackend) -> BTreeSet<usize> {
    let basis = FingerprintBasis::new(text.alphabet().len());
    odd_centers_with(text, backend, &basis)
}

pub fn odd_centers_with(
    text: &Text,
    backend: IntersectionBackend,
    basis: &FingerprintBasis,
) -> BTreeSet<usize> {
    let table = PrefixParikhTable::build(text, basis);
    let mut out = BTreeSet::new();
    centers_rec(&table, 1, text.len(), backend, true, &mut out);
    out
}

fn centers_rec(
    table: &PrefixParikhTable,
    lo: usize,
    hi: usize,
    backend: IntersectionBackend,
    odd_only: bool,
    out: &mut BTreeSet<usize>,
) {
    if hi < lo {
        return;
    }
    let len = hi - lo + 1;
    if len < 2 {
        return;
    }
    let m = len.div_ceil(2);
    let base = lo - 1;
    if odd_only {
        // endpoints share parity c, the center has the opposite parity;
        // run the intersection for both parities
        for parity in 0..2u8 {
            let a = MonotoneParikhSet::with_base(table, base, 0, m - 1, Some(parity));
            let b = MonotoneParikhSet::with_base(table, base, m, len, Some(parity));
            let c = MonotoneParikhSet::with_base(table, base, 0, len, Some(1 - parity));
            for k in intersect_sumset(&a, &b, &c, backend) {
                out.insert(base + k);
            }
        }
    } else {
        let a = MonotoneParikhSet::with_base(table, base, 0, m - 1, None);
        let b = MonotoneParikhSet::with_base(table, base, m, len, None);
        let c = MonotoneParikhSet::with_base(table, base, 0, len, None);
        for k in intersect_sumset(&a, &b, &c, backend) {
            out.insert(base + k);
        }
    }
    // left part excludes local position m, right part starts after it;
    // factors containing position m were captured by the intersection above
    centers_rec(table, lo, lo + m - 2, backend, odd_only, out);
    centers_rec(table, lo + m, hi, backend, odd_only, out);
}
