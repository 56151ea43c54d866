//! Progression-free sets: a Behrend-style digit-sphere construction, greedy
//! partition of `[1, n]` into 3AP-free classes, the three color classes, and
//! the covering family used by the MidSUM1 → MidSUM3 reduction.

use std::collections::HashSet;

/// A sorted set of distinct positions within `[1, n]`.
pub type IndexSet = Vec<usize>;

/// A list of index sets, tagged with how it was produced.
#[derive(Debug, Clone)]
pub struct Family {
    pub sets: Vec<IndexSet>,
    pub provenance: FamilyKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Pairwise disjoint 3AP-free classes covering `[1, n]`.
    Partition,
    /// Cross-product unions of per-color refined partitions; members may
    /// overlap but every good progression lies inside some member.
    ColorUnions,
}

/// True iff `s` contains no non-constant 3-term arithmetic progression.
/// `s` must be sorted and duplicate-free.
pub fn is_progression_free(s: &IndexSet) -> bool {
    let members: HashSet<usize> = s.iter().copied().collect();
    for (ai, &a) in s.iter().enumerate() {
        for &b in &s[ai + 1..] {
            // a < b; c = 2b - a completes the progression
            if members.contains(&(2 * b - a)) {
                return false;
            }
        }
    }
    true
}

/// Greedily extend `core` (already 3AP-free) with elements of `universe`
/// that do not complete a progression with two chosen elements.
///
/// `forbidden` tracks, for every chosen pair, the value that would complete
/// a progression in each of the three roles (largest, middle, smallest), so
/// candidates are rejected with one lookup.
fn greedy_extend(core: Vec<usize>, universe: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut chosen = core;
    chosen.sort_unstable();
    let mut in_chosen: HashSet<usize> = chosen.iter().copied().collect();
    let mut forbidden: HashSet<usize> = HashSet::new();
    for (i, &a) in chosen.iter().enumerate() {
        for &b in &chosen[i + 1..] {
            forbid_completions(a, b, &mut forbidden);
        }
    }
    for x in universe {
        if in_chosen.contains(&x) || forbidden.contains(&x) {
            continue;
        }
        for &s in &chosen {
            let (lo, hi) = if s < x { (s, x) } else { (x, s) };
            forbid_completions(lo, hi, &mut forbidden);
        }
        chosen.push(x);
        in_chosen.insert(x);
    }
    chosen.sort_unstable();
    chosen
}

/// Values completing a 3-term progression with the pair `lo < hi`.
fn forbid_completions(lo: usize, hi: usize, forbidden: &mut HashSet<usize>) {
    debug_assert!(lo < hi);
    forbidden.insert(2 * hi - lo);
    if (lo + hi) % 2 == 0 {
        forbidden.insert((lo + hi) / 2);
    }
    if 2 * lo > hi {
        forbidden.insert(2 * lo - hi);
    }
}

/// A progression-free subset of `[1, m]`.
///
/// Digit-sphere core: integers whose base-`(2d-1)` digits are all below `d`
/// and whose squared digit norm hits a fixed radius; the `(d, radius)` pair
/// is chosen by counting. The core is then densified by a greedy ascending
/// pass over `[1, m]`, which keeps 3AP-freeness and fixes the small-`m`
/// regime where spheres are thin.
pub fn behrend_set(m: usize) -> IndexSet {
    if m == 0 {
        return Vec::new();
    }
    if m <= 3 {
        // {1,2}, {1,2} are 3AP-free; {1,2,3} is not
        return (1..=m.min(2)).collect();
    }
    let core = best_sphere(m);
    greedy_extend(core, 1..=m)
}

/// Best digit-sphere subset of `[1, m]` over digit bases `2d-1`, `d >= 2`.
fn best_sphere(m: usize) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for d in 2..=12usize {
        let theta = 2 * d - 1;
        // number of digits so that all values fit below m (values are
        // shifted by +1 into [1, theta^digits] ⊆ [1, m])
        let mut digits = 0usize;
        let mut pow = 1usize;
        while pow.saturating_mul(theta) <= m {
            pow *= theta;
            digits += 1;
        }
        if digits == 0 {
            continue;
        }
        // count[r] = number of digit vectors with squared norm r
        let maxr = digits * (d - 1) * (d - 1);
        let mut count = vec![0u64; maxr + 1];
        count[0] = 1;
        for _ in 0..digits {
            let mut next = vec![0u64; maxr + 1];
            for (r, &c) in count.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for a in 0..d {
                    let nr = r + a * a;
                    if nr <= maxr {
                        next[nr] += c;
                    }
                }
            }
            count = next;
        }
        // radius 0 gives only the zero vector; require a spread
        let (radius, size) = count
            .iter()
            .enumerate()
            .skip(1)
            .max_by_key(|&(_, &c)| c)
            .map(|(r, &c)| (r, c))
            .unwrap_or((0, 0));
        if size as usize <= best.len() {
            continue;
        }
        let mut sphere = Vec::with_capacity(size as usize);
        enumerate_sphere(digits, d, theta, radius, 0, 0, &mut sphere);
        // shift into [1, m]
        let set: Vec<usize> = sphere.into_iter().map(|v| v + 1).collect();
        debug_assert!(set.iter().all(|&v| v >= 1 && v <= m));
        if set.len() > best.len() {
            best = set;
        }
    }
    best.sort_unstable();
    best
}

fn enumerate_sphere(
    digits_left: usize,
    d: usize,
    theta: usize,
    radius: usize,
    value: usize,
    place: u32,
    out: &mut Vec<usize>,
) {
    if digits_left == 0 {
        if radius == 0 {
            out.push(value);
        }
        return;
    }
    for a in 0..d {
        let sq = a * a;
        if sq > radius {
            break;
        }
        enumerate_sphere(
            digits_left - 1,
            d,
            theta,
            radius - sq,
            value + a * theta.pow(place),
            place + 1,
            out,
        );
    }
}

/// Partition `[1, n]` into pairwise disjoint progression-free sets by
/// repeatedly extracting a greedy 3AP-free subset from what remains.
pub fn partition_progression_free(n: usize) -> Family {
    let mut remaining: Vec<usize> = (1..=n).collect();
    let mut sets = Vec::new();
    while !remaining.is_empty() {
        let class = greedy_extend(Vec::new(), remaining.iter().copied());
        let in_class: HashSet<usize> = class.iter().copied().collect();
        remaining.retain(|x| !in_class.contains(x));
        sets.push(class);
    }
    Family {
        sets,
        provenance: FamilyKind::Partition,
    }
}

/// The three residue classes of `[1, n]`: evens, `1 mod 4`, and `3 mod 4`.
/// A 3-term progression is *good* (odd endpoints, even middle) exactly when
/// it meets all three classes — see [`family`] for how this is used.
pub fn color_classes(n: usize) -> (IndexSet, IndexSet, IndexSet) {
    let blue = (1..=n).filter(|i| i % 2 == 0).collect();
    let red = (1..=n).filter(|i| i % 4 == 1).collect();
    let green = (1..=n).filter(|i| i % 4 == 3).collect();
    (blue, red, green)
}

/// The covering family over `[1, n]`:
/// 1. split `[1, n]` into the three color classes;
/// 2. partition each class (through its rank indexing, each class being an
///    arithmetic progression) into 3AP-free sets;
/// 3. refine every set by the odd/even ranks of its class;
/// 4. return all unions `X ∪ Y ∪ Z` across the three refined partitions.
///
/// Every good 3-term progression is inside some member, and every 3-term
/// progression inside a member is good.
pub fn family(n: usize) -> Family {
    let (blue, red, green) = color_classes(n);
    let fams: Vec<Vec<IndexSet>> = [blue, red, green]
        .into_iter()
        .map(|class| refined_partition(&class))
        .collect();
    let mut sets = Vec::new();
    for x in fams[0].iter() {
        for y in fams[1].iter() {
            for z in fams[2].iter() {
                let mut s: IndexSet = x.iter().chain(y).chain(z).copied().collect();
                s.sort_unstable();
                sets.push(s);
            }
        }
    }
    if sets.is_empty() {
        // n = 0: keep a single empty member so callers can iterate
        sets.push(Vec::new());
    }
    Family {
        sets,
        provenance: FamilyKind::ColorUnions,
    }
}

/// Partition one color class into 3AP-free sets and refine each by
/// odd/even rank within the class. Classes are arithmetic progressions, so
/// a progression in ranks is one in values and vice versa.
fn refined_partition(class: &IndexSet) -> Vec<IndexSet> {
    if class.is_empty() {
        return vec![Vec::new()];
    }
    let ranks = partition_progression_free(class.len());
    let mut out = Vec::new();
    for rank_set in ranks.sets {
        let mut odd_ranks = Vec::new();
        let mut even_ranks = Vec::new();
        for r in rank_set {
            // rank r within the class: odd ranks are c_1, c_3, ...
            if r % 2 == 1 {
                odd_ranks.push(class[r - 1]);
            } else {
                even_ranks.push(class[r - 1]);
            }
        }
        for part in [odd_ranks, even_ranks] {
            if !part.is_empty() {
                out.push(part);
            }
        }
    }
    out
}

/// True iff the 3-term progression `(i, mid, j)` is good: odd endpoints and
/// an even middle.
pub fn is_good_progression(i: usize, mid: usize, j: usize) -> bool {
    debug_assert!(i < mid && mid < j && mid - i == j - mid);
    i % 2 == 1 && j % 2 == 1 && mid % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn progression_free_examples() {
        assert!(!is_progression_free(&vec![1, 2, 3]));
        assert!(is_progression_free(&vec![1, 2, 4, 5]));
        assert!(is_progression_free(&vec![]));
        assert!(is_progression_free(&vec![7]));
        assert!(!is_progression_free(&vec![2, 6, 10]));
    }

    #[test]
    fn behrend_tiny() {
        assert_eq!(behrend_set(1), vec![1]);
        assert_eq!(behrend_set(0), Vec::<usize>::new());
        let b10 = behrend_set(10);
        assert!(is_progression_free(&b10));
        assert!(b10.len() >= 4, "got {:?}", b10);
        assert!(b10.iter().all(|&v| (1..=10).contains(&v)));
    }

    #[test]
    fn behrend_larger_sets_pass_verifier() {
        for m in [37, 100, 1024, 10_000] {
            let s = behrend_set(m);
            assert!(is_progression_free(&s), "m = {m}");
            assert!(s.iter().all(|&v| (1..=m).contains(&v)));
            // strictly sorted
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn behrend_size_monotone_on_sampled_grid() {
        let sizes: Vec<usize> = [16, 64, 256, 1024, 4096, 10_000]
            .iter()
            .map(|&m| behrend_set(m).len())
            .collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
    }

    #[test]
    fn partition_covers_disjointly() {
        for n in [0, 1, 3, 100, 531] {
            let fam = partition_progression_free(n);
            let mut all: Vec<usize> = fam.sets.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (1..=n).collect::<Vec<_>>(), "n = {n}");
            for s in &fam.sets {
                assert!(is_progression_free(s));
            }
        }
        // {1,2,3} is itself a progression, so at least two classes
        assert!(partition_progression_free(3).sets.len() >= 2);
    }

    #[test]
    fn color_classes_examples() {
        let (b, r, g) = color_classes(8);
        assert_eq!(b, vec![2, 4, 6, 8]);
        assert_eq!(r, vec![1, 5]);
        assert_eq!(g, vec![3, 7]);
        let (b, r, g) = color_classes(1);
        assert_eq!(b, Vec::<usize>::new());
        assert_eq!(r, vec![1]);
        assert_eq!(g, Vec::<usize>::new());
    }

    #[test]
    fn good_iff_multichromatic() {
        // a 3-term progression is good iff its elements take all three
        // colors (even, 1 mod 4, 3 mod 4)
        let color = |i: usize| -> u8 {
            if i % 2 == 0 {
                0
            } else if i % 4 == 1 {
                1
            } else {
                2
            }
        };
        for n in 1..=200usize {
            for i in 1..=n {
                for step in 1..=(n - i) / 2 {
                    let (mid, j) = (i + step, i + 2 * step);
                    let multi = {
                        let mut c = [color(i), color(mid), color(j)];
                        c.sort_unstable();
                        c == [0, 1, 2]
                    };
                    assert_eq!(is_good_progression(i, mid, j), multi);
                }
            }
        }
    }

    #[test]
    fn family_n3_contains_the_good_progression() {
        let fam = family(3);
        // (1, 2, 3) is the only progression and it is good
        assert!(fam
            .sets
            .iter()
            .any(|s| [1, 2, 3].iter().all(|x| s.contains(x))));
    }

    #[test]
    fn family_properties_small_n() {
        for n in 0..=40usize {
            let fam = family(n);
            // (a) every good progression is contained in some member
            for i in 1..=n {
                for step in 1..=(n.saturating_sub(i)) / 2 {
                    let (mid, j) = (i + step, i + 2 * step);
                    if is_good_progression(i, mid, j) {
                        assert!(
                            fam.sets.iter().any(|s| {
                                s.binary_search(&i).is_ok()
                                    && s.binary_search(&mid).is_ok()
                                    && s.binary_search(&j).is_ok()
                            }),
                            "n={n}, progression ({i},{mid},{j}) uncovered"
                        );
                    }
                }
            }
            // (b) every progression inside a member is good
            for s in &fam.sets {
                let members: HashSet<usize> = s.iter().copied().collect();
                for (ai, &a) in s.iter().enumerate() {
                    for &b in &s[ai + 1..] {
                        let c = 2 * b - a;
                        if members.contains(&c) {
                            assert!(
                                is_good_progression(a, b, c),
                                "n={n}, bad progression ({a},{b},{c}) inside member"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_respects_rank_parity() {
        // every refined per-color set sits inside the odd ranks or the even
        // ranks of its class
        for n in [17usize, 40, 64] {
            let (blue, red, green) = color_classes(n);
            for class in [blue, red, green] {
                if class.is_empty() {
                    continue;
                }
                let rank_of: HashMap<usize, usize> = class
                    .iter()
                    .enumerate()
                    .map(|(idx, &v)| (v, idx + 1))
                    .collect();
                for part in refined_partition(&class) {
                    let parities: HashSet<usize> =
                        part.iter().map(|v| rank_of[v] % 2).collect();
                    assert!(parities.len() <= 1);
                }
            }
        }
    }
}
