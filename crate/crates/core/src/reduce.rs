//! The reduction pipeline from convolution 3SUM to a single odd-half
//! double-progression instance, and on to additive squares.
//!
//! Stages:
//! 1. split the full index range into arithmetic progressions whose
//!    odd-rank-sum pairs carry all witnesses ([`conv_to_oddconv`]);
//! 2. lay each progression out as a sequence whose good-progression
//!    witnesses match the odd pairs ([`oddconv_to_midsum1`]);
//! 3. deactivate positions outside each covering-family member
//!    ([`restr`], [`midsum1_to_midsum3`]), leaving odd-half instances;
//! 4. glue everything into one instance with a progression-free offset set
//!    ([`glue`]).
//!
//! Every stage records enough metadata in a [`StageTrace`] to pull a final
//! witness back to a convolution witness on the original input.

use crate::arith::{diff_sequence, midcond, IndexPairWitness, IntSeq, VALUE_BOUND};
use crate::progfree::{behrend_set, family, IndexSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    /// Input element outside the allowed `[-N^2, N^2]` range.
    MagnitudeViolation { value: i64, bound: i64 },
    /// Glue requires at least one instance.
    EmptyGlue,
    /// Glue inputs must be non-negative.
    NegativeGlueInput { value: i64 },
    /// An intermediate value left the supported 64-bit range.
    Overflow,
    /// A claimed witness failed to validate; names the first failing stage.
    InvalidWitness { stage: &'static str, detail: String },
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::MagnitudeViolation { value, bound } => {
                write!(f, "element {value} outside [-{bound}, {bound}]")
            }
            ReduceError::EmptyGlue => write!(f, "glue needs at least one instance"),
            ReduceError::NegativeGlueInput { value } => {
                write!(f, "glue input contains negative element {value}")
            }
            ReduceError::Overflow => write!(f, "value overflow in reduction"),
            ReduceError::InvalidWitness { stage, detail } => {
                write!(f, "witness invalid at stage {stage}: {detail}")
            }
        }
    }
}

impl std::error::Error for ReduceError {}

/// An arithmetic progression of positions `first, first+step, ...` within
/// `[1, N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArithProgression {
    pub first: usize,
    pub step: usize,
    pub count: usize,
}

impl ArithProgression {
    pub fn full_range(n: usize) -> Self {
        ArithProgression {
            first: 1,
            step: 1,
            count: n,
        }
    }

    /// The position of 1-based rank `r`.
    pub fn index(&self, r: usize) -> usize {
        debug_assert!(r >= 1 && r <= self.count);
        self.first + (r - 1) * self.step
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.count).map(|r| self.index(r))
    }

    /// Subsequence at odd ranks `1, 3, 5, ...`.
    pub fn odd_ranks(&self) -> Self {
        ArithProgression {
            first: self.first,
            step: self.step * 2,
            count: self.count.div_ceil(2),
        }
    }

    /// Subsequence at even ranks `2, 4, ...`.
    pub fn even_ranks(&self) -> Self {
        ArithProgression {
            first: self.first + self.step,
            step: self.step * 2,
            count: self.count / 2,
        }
    }
}

/// Emit the progressions visited by the recursion: the current range, then
/// its odd-rank and even-rank halves.
///
/// Every progression of at least two elements is emitted. A witness pair
/// keeps its rank gap halving as it descends into the common-parity child,
/// and is caught by the odd-rank-sum check exactly when the gap turns odd;
/// that can happen in a two-element node, so those are emitted too. The
/// counts stay within `N - 1` progressions of total size `O(N log N)`.
pub fn conv_to_oddconv(x: &IntSeq) -> Vec<ArithProgression> {
    let mut out = Vec::new();
    fn rec(prog: ArithProgression, out: &mut Vec<ArithProgression>) {
        if prog.count < 2 {
            return;
        }
        out.push(prog);
        if prog.count > 2 {
            rec(prog.odd_ranks(), out);
            rec(prog.even_ranks(), out);
        }
    }
    rec(ArithProgression::full_range(x.len()), &mut out);
    out
}

/// Brute-force odd-rank-sum convolution witness within a progression:
/// ranks `a < b` with `a + b` odd and `x[i_a] + x[i_b] = x[i_a + i_b]`
/// (false whenever the sum index leaves the sequence).
pub fn oddconv_bruteforce(x: &IntSeq, prog: &ArithProgression) -> Option<(usize, usize)> {
    let n = x.len();
    for a in 1..=prog.count {
        for b in (a + 1)..=prog.count {
            if (a + b) % 2 == 1 {
                let (ia, ib) = (prog.index(a), prog.index(b));
                if ia + ib <= n && x.get(ia) + x.get(ib) == x.get(ia + ib) {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

/// Sentinel for out-of-range sum positions: strictly above any reachable
/// endpoint sum.
pub fn sum_sentinel(n: usize) -> i64 {
    2 * (n as i64) * (n as i64) + 1
}

/// Lay a progression out as a MidSUM1 input of length `2|I| - 1`.
///
/// Position values: odd position `2j-1` holds the doubled element
/// `2 x[i_j]`; even position `2j` holds `x[i_j + i_{j+1}]`, or the sentinel
/// when the sum index exceeds the sequence. Doubling the endpoints makes
/// the averaged middle of a good progression equal the endpoint sum, so
/// good-progression witnesses coincide with odd-rank-sum convolution
/// witnesses. (A progression guarantees `i_a + i_b` depends on `a + b`
/// only, which is what even positions encode.)
pub fn oddconv_to_midsum1(x: &IntSeq, prog: &ArithProgression) -> IntSeq {
    let n = x.len();
    let alpha = sum_sentinel(n);
    let m = prog.count;
    let mut y = Vec::with_capacity(2 * m - 1);
    for j in 1..=m {
        y.push(2 * x.get(prog.index(j)));
        if j < m {
            let s = prog.index(j) + prog.index(j + 1);
            y.push(if s <= n { x.get(s) } else { alpha });
        }
    }
    IntSeq::new(y).expect("midsum1 values stay within bound")
}

/// Deactivate positions outside `E`: every `x_i` with `i ∉ E` becomes
/// `5 * max(MAX, n^2) + i^2` where `MAX = max |x_k|`.
pub fn restr(x: &IntSeq, e: &IndexSet) -> IntSeq {
    let n = x.len();
    let max_abs = x.max_abs();
    let base = 5 * max_abs.max((n as i64) * (n as i64));
    let in_e: std::collections::HashSet<usize> = e.iter().copied().collect();
    let values = (1..=n)
        .map(|i| {
            if in_e.contains(&i) {
                x.get(i)
            } else {
                base + (i as i64) * (i as i64)
            }
        })
        .collect();
    IntSeq::new(values).expect("restr values stay within bound")
}

/// One deactivated instance together with the family member and the shift
/// that made it non-negative.
#[derive(Debug, Clone)]
pub struct RestrictedInstance {
    pub family_set: IndexSet,
    pub shift: i64,
    pub seq: IntSeq,
}

/// All family-restricted instances of a MidSUM1 input, shifted to be
/// non-negative. Every output is an odd-half instance.
pub fn midsum1_to_midsum3_traced(y: &IntSeq) -> Vec<RestrictedInstance> {
    let fam = family(y.len());
    fam.sets
        .into_iter()
        .map(|family_set| {
            let restricted = restr(y, &family_set);
            let min = restricted.min().unwrap_or(0);
            // smallest even shift that makes the minimum zero
            let shift = if min < 0 { ((-min) + 1) / 2 * 2 } else { 0 };
            let seq = IntSeq::new(restricted.values().iter().map(|v| v + shift).collect())
                .expect("shifted values stay within bound");
            RestrictedInstance {
                family_set,
                shift,
                seq,
            }
        })
        .collect()
}

/// The plain list-of-instances view of [`midsum1_to_midsum3_traced`].
pub fn midsum1_to_midsum3(y: &IntSeq) -> Vec<IntSeq> {
    midsum1_to_midsum3_traced(y)
        .into_iter()
        .map(|r| r.seq)
        .collect()
}

/// Where one glued part landed and how its values were transformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlueRecord {
    /// Positions `offset+1 ..= offset+len` of the glued sequence.
    pub offset: usize,
    pub len: usize,
    pub multiplier: i64,
    pub addend: i64,
}

#[derive(Debug, Clone)]
pub struct GlueOutput {
    pub seq: IntSeq,
    /// The `m` with offsets drawn progression-free from `[1, m]`.
    pub m: usize,
    pub parts: Vec<GlueRecord>,
}

/// Concatenate non-negative instances after the affine maps
/// `x -> 2m*x + a_i`, with `{a_i}` progression-free. The result is a YES
/// instance iff some input is: a cross-part witness would force a
/// progression among the `a_i` offsets.
pub fn glue(instances: &[IntSeq]) -> Result<GlueOutput, ReduceError> {
    if instances.is_empty() {
        return Err(ReduceError::EmptyGlue);
    }
    let t = instances.len();
    let mut max_value = 0i64;
    for inst in instances {
        for &v in inst.values() {
            if v < 0 {
                return Err(ReduceError::NegativeGlueInput { value: v });
            }
            max_value = max_value.max(v);
        }
    }
    // grow m until the progression-free set is large enough, then trim
    let mut m = (2 * t).max(8);
    let offsets = loop {
        let set = behrend_set(m);
        if set.len() >= t {
            break set[..t].to_vec();
        }
        m *= 2;
    };
    let mult = 2 * (m as i64);
    if max_value > (VALUE_BOUND - m as i64) / mult {
        return Err(ReduceError::Overflow);
    }
    let mut seq = Vec::new();
    let mut parts = Vec::with_capacity(t);
    for (inst, &a) in instances.iter().zip(&offsets) {
        parts.push(GlueRecord {
            offset: seq.len(),
            len: inst.len(),
            multiplier: mult,
            addend: a as i64,
        });
        seq.extend(inst.values().iter().map(|&v| v * mult + a as i64));
    }
    Ok(GlueOutput {
        seq: IntSeq::new(seq).expect("checked against bound"),
        m,
        parts,
    })
}

/// Everything needed to pull a final-stage witness back to the input.
#[derive(Debug, Clone)]
pub struct StageTrace {
    pub input: Vec<i64>,
    pub alpha: i64,
    pub progressions: Vec<ArithProgression>,
    pub segments: Vec<SegmentTrace>,
    pub glue_m: usize,
    /// Set when the input was too short to emit any instance; the output
    /// is then a canonical NO instance with no pull-back.
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct SegmentTrace {
    pub progression: usize,
    pub family_set: IndexSet,
    pub shift: i64,
    pub multiplier: i64,
    pub addend: i64,
    pub offset: usize,
    pub len: usize,
}

/// Intermediate products of the full reduction, kept for stage-by-stage
/// verification.
#[derive(Debug, Clone)]
pub struct PipelineArtifacts {
    pub progressions: Vec<ArithProgression>,
    /// One MidSUM1 sequence per progression.
    pub midsum1: Vec<IntSeq>,
    /// All pre-glue odd-half instances, in segment order.
    pub instances: Vec<IntSeq>,
    pub glued: IntSeq,
    pub trace: StageTrace,
}

/// Full composition: progressions, MidSUM1 layouts, family restriction,
/// and glue. Input elements must lie within `[-N^2, N^2]`.
pub fn conv3sum_pipeline(x: &IntSeq) -> Result<PipelineArtifacts, ReduceError> {
    let n = x.len() as i64;
    let bound = n * n;
    for &v in x.values() {
        if v.abs() > bound {
            return Err(ReduceError::MagnitudeViolation { value: v, bound });
        }
    }
    let progressions = conv_to_oddconv(x);
    let mut midsum1 = Vec::with_capacity(progressions.len());
    let mut instances = Vec::new();
    let mut seg_meta = Vec::new();
    for (pi, prog) in progressions.iter().enumerate() {
        let y = oddconv_to_midsum1(x, prog);
        for r in midsum1_to_midsum3_traced(&y) {
            seg_meta.push((pi, r.family_set, r.shift));
            instances.push(r.seq);
        }
        midsum1.push(y);
    }
    if instances.is_empty() {
        // too short for any progression: the answer is NO by construction,
        // emit a canonical NO instance
        let glued = IntSeq::new(vec![0, 0, 1]).unwrap();
        let trace = StageTrace {
            input: x.values().to_vec(),
            alpha: sum_sentinel(x.len()),
            progressions,
            segments: Vec::new(),
            glue_m: 0,
            degenerate: true,
        };
        return Ok(PipelineArtifacts {
            progressions: Vec::new(),
            midsum1,
            instances,
            glued: glued.clone(),
            trace,
        });
    }
    let glued = glue(&instances)?;
    let segments = seg_meta
        .into_iter()
        .zip(&glued.parts)
        .map(|((progression, family_set, shift), rec)| SegmentTrace {
            progression,
            family_set,
            shift,
            multiplier: rec.multiplier,
            addend: rec.addend,
            offset: rec.offset,
            len: rec.len,
        })
        .collect();
    let trace = StageTrace {
        input: x.values().to_vec(),
        alpha: sum_sentinel(x.len()),
        progressions: progressions.clone(),
        segments,
        glue_m: glued.m,
        degenerate: false,
    };
    Ok(PipelineArtifacts {
        progressions,
        midsum1,
        instances,
        glued: glued.seq,
        trace,
    })
}

/// The single-instance face of the pipeline.
pub fn conv3sum_to_midsum3(x: &IntSeq) -> Result<(IntSeq, StageTrace), ReduceError> {
    let artifacts = conv3sum_pipeline(x)?;
    Ok((artifacts.glued, artifacts.trace))
}

/// MidSUM3 to additive squares: the difference sequence carries an additive
/// square exactly when the instance has a double progression.
pub fn midsum3_to_additive(x: &IntSeq) -> IntSeq {
    diff_sequence(x)
}

/// Map a witness on the glued instance back to a convolution witness on
/// the original input, validating every stage on the way.
pub fn pull_back_witness(
    trace: &StageTrace,
    w: IndexPairWitness,
) -> Result<IndexPairWitness, ReduceError> {
    if trace.degenerate {
        return Err(ReduceError::InvalidWitness {
            stage: "glue",
            detail: "degenerate NO reduction has no witnesses".to_string(),
        });
    }
    let x = IntSeq::new(trace.input.clone()).expect("validated at build time");
    // 1. locate the segment; a valid witness never straddles segments
    let seg = trace
        .segments
        .iter()
        .find(|s| w.i > s.offset && w.j <= s.offset + s.len)
        .ok_or_else(|| ReduceError::InvalidWitness {
            stage: "glue",
            detail: format!("positions ({}, {}) straddle glued segments", w.i, w.j),
        })?;
    let (li, lj) = (w.i - seg.offset, w.j - seg.offset);
    let lmid = (li + lj) / 2;

    // 2. replay the segment and check MidCond locally
    let prog = trace.progressions[seg.progression];
    let y = oddconv_to_midsum1(&x, &prog);
    let restricted = restr(&y, &seg.family_set);
    if !midcond(&restricted, li, lj).map_err(|e| ReduceError::InvalidWitness {
        stage: "midsum3",
        detail: e.to_string(),
    })? {
        return Err(ReduceError::InvalidWitness {
            stage: "midsum3",
            detail: format!("MidCond fails at local positions ({li}, {lj})"),
        });
    }

    // 3. deactivated positions cannot take part in a witness
    for p in [li, lmid, lj] {
        if seg.family_set.binary_search(&p).is_err() {
            return Err(ReduceError::InvalidWitness {
                stage: "restr",
                detail: format!("position {p} lies outside the active set"),
            });
        }
    }

    // 4. good progression: odd endpoints carry progression ranks
    if li % 2 == 0 || lj % 2 == 0 || lmid % 2 == 1 {
        return Err(ReduceError::InvalidWitness {
            stage: "midsum1",
            detail: format!("({li}, {lmid}, {lj}) is not a good progression"),
        });
    }
    let (a, b) = ((li + 1) / 2, (lj + 1) / 2);

    // 5. back to convolution positions
    let (ia, ib) = (prog.index(a), prog.index(b));
    if ia + ib > x.len() || x.get(ia) + x.get(ib) != x.get(ia + ib) {
        return Err(ReduceError::InvalidWitness {
            stage: "oddconv",
            detail: format!("x[{ia}] + x[{ib}] != x[{}]", ia + ib),
        });
    }
    Ok(IndexPairWitness::new(ia, ib))
}
