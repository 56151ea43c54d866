//! Flat-file formats: integer sequences, texts in char or token mode,
//! alphabet sidecar maps, gadget parameters, families, and reduction
//! traces. Everything is line-oriented UTF-8.

use crate::arith::{ArithError, IntSeq};
use crate::gadget::{GadgetParams, GadgetVariant};
use crate::progfree::{Family, FamilyKind, IndexSet};
use crate::reduce::{ArithProgression, SegmentTrace, StageTrace};
use crate::text::{Alphabet, Text, TextError};
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
pub enum IoError {
    Parse(String),
    Text(TextError),
    Arith(ArithError),
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Parse(s) => write!(f, "parse error: {s}"),
            IoError::Text(e) => write!(f, "{e}"),
            IoError::Arith(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IoError {}

impl From<TextError> for IoError {
    fn from(e: TextError) -> Self {
        IoError::Text(e)
    }
}

impl From<ArithError> for IoError {
    fn from(e: ArithError) -> Self {
        IoError::Arith(e)
    }
}

fn parse_err(e: impl fmt::Display) -> IoError {
    IoError::Parse(e.to_string())
}

// ---------------------------------------------------------------------------
// Integer sequences
// ---------------------------------------------------------------------------

/// Whitespace/newline-separated signed decimals, with an optional first
/// line header `# n=<len> K=<bound>`.
pub fn parse_int_seq(content: &str) -> Result<IntSeq, IoError> {
    let mut declared_n: Option<usize> = None;
    let mut declared_k: Option<i64> = None;
    let mut values = Vec::new();
    for (ln, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if ln == 0 {
                for field in line.trim_start_matches('#').split_whitespace() {
                    if let Some(v) = field.strip_prefix("n=") {
                        declared_n = Some(v.parse().map_err(parse_err)?);
                    } else if let Some(v) = field.strip_prefix("K=") {
                        declared_k = Some(v.parse().map_err(parse_err)?);
                    }
                }
            }
            continue;
        }
        for tok in line.split_whitespace() {
            values.push(tok.parse::<i64>().map_err(parse_err)?);
        }
    }
    if let Some(n) = declared_n {
        if n != values.len() {
            return Err(IoError::Parse(format!(
                "header declares n={n} but {} values follow",
                values.len()
            )));
        }
    }
    if let Some(k) = declared_k {
        if let Some(&bad) = values.iter().find(|v| v.abs() > k) {
            return Err(IoError::Parse(format!(
                "value {bad} exceeds declared bound K={k}"
            )));
        }
    }
    Ok(IntSeq::new(values)?)
}

pub fn format_int_seq(seq: &IntSeq, header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(&format!("# n={} K={}\n", seq.len(), seq.max_abs()));
    }
    let body: Vec<String> = seq.values().iter().map(|v| v.to_string()).collect();
    out.push_str(&body.join(" "));
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// Texts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextMode {
    /// One symbol per character.
    Char,
    /// Whitespace-separated integer tokens.
    Token,
}

/// Parse a text file. In char mode every non-newline character is a
/// symbol; in token mode symbols are whitespace-separated tokens (the
/// tokens themselves, not ids — see [`parse_text_ids`] for id files with a
/// sidecar map). Without an explicit alphabet the symbols seen define one
/// in first-occurrence order.
pub fn parse_text(
    content: &str,
    mode: TextMode,
    alphabet: Option<Arc<Alphabet>>,
) -> Result<Text, IoError> {
    let symbols: Vec<String> = match mode {
        TextMode::Char => content
            .lines()
            .flat_map(|l| l.chars())
            .map(|c| c.to_string())
            .collect(),
        TextMode::Token => content
            .split_whitespace()
            .map(|t| t.to_string())
            .collect(),
    };
    let alphabet = match alphabet {
        Some(a) => a,
        None => {
            let mut seen: Vec<String> = Vec::new();
            for s in &symbols {
                if !seen.contains(s) {
                    seen.push(s.clone());
                }
            }
            if seen.is_empty() {
                seen.push("0".into());
            }
            Arc::new(Alphabet::new(seen)?)
        }
    };
    let mut letters = Vec::with_capacity(symbols.len());
    for s in &symbols {
        letters.push(alphabet.id_of(s)?);
    }
    Ok(Text::new(letters, alphabet)?)
}

/// Parse a token file whose tokens are dense letter ids into `alphabet`
/// (the sidecar-map flow; [`format_text`] in token mode writes ids).
pub fn parse_text_ids(content: &str, alphabet: Arc<Alphabet>) -> Result<Text, IoError> {
    let mut letters = Vec::new();
    for tok in content.split_whitespace() {
        letters.push(tok.parse::<u32>().map_err(parse_err)?);
    }
    Ok(Text::new(letters, alphabet)?)
}

pub fn format_text(text: &Text, mode: TextMode) -> String {
    match mode {
        TextMode::Char => {
            let mut s = text.render();
            s.push('\n');
            s
        }
        TextMode::Token => {
            let toks: Vec<String> = text
                .letters()
                .iter()
                .map(|&l| l.to_string())
                .collect();
            let mut s = toks.join(" ");
            s.push('\n');
            s
        }
    }
}

/// Sidecar map `id<TAB>glyph`, one line per letter.
pub fn format_alphabet_map(alphabet: &Alphabet) -> String {
    let mut out = String::new();
    for (id, sym) in alphabet.symbols().iter().enumerate() {
        out.push_str(&format!("{id}\t{sym}\n"));
    }
    out
}

pub fn parse_alphabet_map(content: &str) -> Result<Arc<Alphabet>, IoError> {
    let mut rows: Vec<(usize, String)> = Vec::new();
    for line in content.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, sym) = line
            .split_once('\t')
            .ok_or_else(|| IoError::Parse(format!("bad alphabet row {line:?}")))?;
        rows.push((id.trim().parse().map_err(parse_err)?, sym.to_string()));
    }
    rows.sort_by_key(|r| r.0);
    for (want, row) in rows.iter().enumerate() {
        if row.0 != want {
            return Err(IoError::Parse(format!("non-dense alphabet id {}", row.0)));
        }
    }
    Ok(Arc::new(Alphabet::new(rows.into_iter().map(|r| r.1))?))
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// One set per line, space-separated ascending integers.
pub fn format_family(family: &Family) -> String {
    let mut out = String::new();
    for set in &family.sets {
        let toks: Vec<String> = set.iter().map(|v| v.to_string()).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_family(content: &str, kind: FamilyKind) -> Result<Family, IoError> {
    let mut sets: Vec<IndexSet> = Vec::new();
    for line in content.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let mut set = Vec::new();
        for tok in line.split_whitespace() {
            set.push(tok.parse::<usize>().map_err(parse_err)?);
        }
        sets.push(set);
    }
    Ok(Family {
        sets,
        provenance: kind,
    })
}

// ---------------------------------------------------------------------------
// Gadget parameters
// ---------------------------------------------------------------------------

pub fn format_gadget_params(p: &GadgetParams) -> String {
    let primes: Vec<String> = p.primes.iter().map(|v| v.to_string()).collect();
    format!(
        "k={}\nprimes={}\nd={}\nvariant={}\nproduct={}\npair_count={}\nunit_len={}\ngadget_len={}\nblock_len={}\n",
        p.k,
        primes.join(","),
        p.d,
        match p.variant {
            GadgetVariant::Plain => "plain",
            GadgetVariant::Extended => "extended",
        },
        p.product,
        p.pair_count,
        p.unit_len,
        p.gadget_len,
        p.block_len,
    )
}

// ---------------------------------------------------------------------------
// Reduction traces
// ---------------------------------------------------------------------------

fn kv_lines(content: &str) -> impl Iterator<Item = (&str, &str)> {
    content.lines().filter_map(|l| {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            None
        } else {
            l.split_once(' ').or(Some((l, "")))
        }
    })
}

/// Line-oriented trace: `input`, `alpha`, `glue_m`, one `prog` line per
/// progression and one `seg` line per glued segment, each holding
/// `key=value` fields.
pub fn format_trace(t: &StageTrace) -> String {
    let mut out = String::new();
    out.push_str("trace version=1\n");
    let vals: Vec<String> = t.input.iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("input {}\n", vals.join(",")));
    out.push_str(&format!("alpha {}\n", t.alpha));
    out.push_str(&format!("glue_m {}\n", t.glue_m));
    out.push_str(&format!("degenerate {}\n", t.degenerate));
    for p in &t.progressions {
        out.push_str(&format!(
            "prog first={} step={} count={}\n",
            p.first, p.step, p.count
        ));
    }
    for s in &t.segments {
        let set: Vec<String> = s.family_set.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "seg prog={} shift={} mult={} add={} offset={} len={} set={}\n",
            s.progression,
            s.shift,
            s.multiplier,
            s.addend,
            s.offset,
            s.len,
            set.join(",")
        ));
    }
    out
}

pub fn parse_trace(content: &str) -> Result<StageTrace, IoError> {
    let mut input: Option<Vec<i64>> = None;
    let mut alpha: Option<i64> = None;
    let mut glue_m: Option<usize> = None;
    let mut degenerate = false;
    let mut progressions = Vec::new();
    let mut segments = Vec::new();
    let mut saw_header = false;
    for (key, rest) in kv_lines(content) {
        match key {
            "trace" => saw_header = true,
            "input" => {
                let vals = if rest.trim().is_empty() {
                    Vec::new()
                } else {
                    rest.split(',')
                        .map(|v| v.trim().parse::<i64>().map_err(parse_err))
                        .collect::<Result<_, _>>()?
                };
                input = Some(vals);
            }
            "alpha" => alpha = Some(rest.trim().parse().map_err(parse_err)?),
            "glue_m" => glue_m = Some(rest.trim().parse().map_err(parse_err)?),
            "degenerate" => degenerate = rest.trim() == "true",
            "prog" => {
                let f = parse_fields(rest)?;
                progressions.push(ArithProgression {
                    first: field(&f, "first")?,
                    step: field(&f, "step")?,
                    count: field(&f, "count")?,
                });
            }
            "seg" => {
                let f = parse_fields(rest)?;
                let set_str: String = field_str(&f, "set")?;
                let family_set = if set_str.is_empty() {
                    Vec::new()
                } else {
                    set_str
                        .split(',')
                        .map(|v| v.parse::<usize>().map_err(parse_err))
                        .collect::<Result<_, _>>()?
                };
                segments.push(SegmentTrace {
                    progression: field(&f, "prog")?,
                    family_set,
                    shift: field(&f, "shift")?,
                    multiplier: field(&f, "mult")?,
                    addend: field(&f, "add")?,
                    offset: field(&f, "offset")?,
                    len: field(&f, "len")?,
                });
            }
            other => return Err(IoError::Parse(format!("unknown trace record {other:?}"))),
        }
    }
    if !saw_header {
        return Err(IoError::Parse("missing trace header".into()));
    }
    Ok(StageTrace {
        input: input.ok_or_else(|| IoError::Parse("missing input record".into()))?,
        alpha: alpha.ok_or_else(|| IoError::Parse("missing alpha record".into()))?,
        progressions,
        segments,
        glue_m: glue_m.ok_or_else(|| IoError::Parse("missing glue_m record".into()))?,
        degenerate,
    })
}

fn parse_fields(rest: &str) -> Result<Vec<(String, String)>, IoError> {
    rest.split_whitespace()
        .map(|f| {
            f.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| IoError::Parse(format!("bad field {f:?}")))
        })
        .collect()
}

fn field_str(fields: &[(String, String)], key: &str) -> Result<String, IoError> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| IoError::Parse(format!("missing field {key}")))
}

fn field<T: std::str::FromStr>(fields: &[(String, String)], key: &str) -> Result<T, IoError>
where
    T::Err: fmt::Display,
{
    field_str(fields, key)?.parse::<T>().map_err(parse_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::conv3sum_to_midsum3;

    #[test]
    fn int_seq_round_trip() {
        let seq = IntSeq::new(vec![3, -1, 0, 42]).unwrap();
        let s = format_int_seq(&seq, true);
        assert_eq!(parse_int_seq(&s).unwrap(), seq);
        let s = format_int_seq(&seq, false);
        assert_eq!(parse_int_seq(&s).unwrap(), seq);
    }

    #[test]
    fn int_seq_header_validation() {
        assert!(parse_int_seq("# n=3 K=10\n1 2").is_err());
        assert!(parse_int_seq("# n=2 K=1\n1 2").is_err());
        assert!(parse_int_seq("# n=2 K=5\n1 2").is_ok());
        assert_eq!(parse_int_seq("").unwrap().len(), 0);
    }

    #[test]
    fn text_modes_round_trip() {
        let t = parse_text("abca\n", TextMode::Char, None).unwrap();
        assert_eq!(t.render(), "abca");
        let formatted = format_text(&t, TextMode::Token);
        let t2 = parse_text(&formatted, TextMode::Token, None).unwrap();
        assert_eq!(t2.len(), 4);
        // id files round-trip through the sidecar alphabet map
        let map = format_alphabet_map(t.alphabet());
        let alphabet = parse_alphabet_map(&map).unwrap();
        let t3 = parse_text_ids(&formatted, alphabet).unwrap();
        assert_eq!(t3.letters(), t.letters());
        assert_eq!(t3.render(), "abca");
    }

    #[test]
    fn token_mode_tokens_are_symbols() {
        let t = parse_text("17 42 17\n", TextMode::Token, None).unwrap();
        assert_eq!(t.letters(), &[0, 1, 0]);
        assert_eq!(t.alphabet().symbol(1), "42");
    }

    #[test]
    fn family_round_trip() {
        let fam = crate::progfree::partition_progression_free(20);
        let s = format_family(&fam);
        let back = parse_family(&s, FamilyKind::Partition).unwrap();
        assert_eq!(back.sets, fam.sets);
    }

    #[test]
    fn trace_round_trip() {
        let x = IntSeq::new(vec![1, 2, 3, 0, 5, 1]).unwrap();
        let (_, trace) = conv3sum_to_midsum3(&x).unwrap();
        let s = format_trace(&trace);
        let back = parse_trace(&s).unwrap();
        assert_eq!(back.input, trace.input);
        assert_eq!(back.alpha, trace.alpha);
        assert_eq!(back.glue_m, trace.glue_m);
        assert_eq!(back.progressions.len(), trace.progressions.len());
        assert_eq!(back.segments.len(), trace.segments.len());
        for (a, b) in back.segments.iter().zip(&trace.segments) {
            assert_eq!(a.family_set, b.family_set);
            assert_eq!(a.offset, b.offset);
        }
    }

    #[test]
    fn trace_rejects_garbage() {
        assert!(parse_trace("").is_err());
        assert!(parse_trace("bogus line").is_err());
    }
}
