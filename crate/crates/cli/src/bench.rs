//! Timing harness: runs detectors and center computations over generated
//! inputs across an `n` grid and a `sigma` sweep, writing one CSV row per
//! measurement for external plotting.

use crate::CommonOpts;
use absq_core::absquare::{
    centers, centers_bruteforce, detect_absquare, detect_odd_absquare, IntersectionBackend,
};
use absq_core::gadget::{
    absquare_free_quaternary, build_marked_text, params_for_instance, AbsfBackend, GadgetAlphabet,
    GadgetVariant,
};
use absq_core::arith::IntSeq;
use absq_core::text::{Alphabet, Text};
use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

fn random_text(rng: &mut ChaCha8Rng, n: usize, sigma: usize) -> Text {
    let alphabet = Arc::new(Alphabet::of_digits(sigma));
    Text::new(
        (0..n).map(|_| rng.gen_range(0..sigma as u32)).collect(),
        alphabet,
    )
    .expect("letters in range")
}

struct Csv {
    body: String,
}

impl Csv {
    fn new() -> Self {
        Csv {
            body: "op,input,n,sigma,millis,outcome\n".to_string(),
        }
    }

    fn row(&mut self, op: &str, input: &str, n: usize, sigma: usize, ms: f64, outcome: &str) {
        writeln!(self.body, "{op},{input},{n},{sigma},{ms:.3},{outcome}").unwrap();
        println!("{op:<18} {input:<10} n={n:<7} sigma={sigma:<3} {ms:>10.3} ms  {outcome}");
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

pub fn run(quick: bool, out: &Path, common: &CommonOpts) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed());
    let mut csv = Csv::new();

    let n_grid: &[usize] = if quick {
        &[1 << 10, 1 << 11, 1 << 12]
    } else {
        &[1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14]
    };
    let sigma_grid: &[usize] = if quick { &[2, 4] } else { &[2, 3, 4, 6] };

    // detectors and the center scans over random texts
    for &n in n_grid {
        let t = random_text(&mut rng, n, 4);
        let (hit, ms) = timed(|| detect_absquare(&t));
        csv.row("detect-absquare", "random", n, 4, ms, outcome(hit.is_some()));
        let (hit, ms) = timed(|| detect_odd_absquare(&t));
        csv.row("detect-odd", "random", n, 4, ms, outcome(hit.is_some()));
        let (set, ms) = timed(|| centers_bruteforce(&t));
        csv.row("centers-brute", "random", n, 4, ms, &set.len().to_string());
        if n <= 1 << 12 {
            let (set, ms) = timed(|| centers(&t, IntersectionBackend::PairHash));
            csv.row("centers-dc-hash", "random", n, 4, ms, &set.len().to_string());
            let (set, ms) = timed(|| centers(&t, IntersectionBackend::SortMerge));
            csv.row("centers-dc-merge", "random", n, 4, ms, &set.len().to_string());
        }
    }

    // sigma sweep at fixed n
    let fixed_n = if quick { 1 << 11 } else { 1 << 13 };
    for &sigma in sigma_grid {
        let t = random_text(&mut rng, fixed_n, sigma);
        let (set, ms) = timed(|| centers_bruteforce(&t));
        csv.row(
            "centers-brute",
            "random",
            fixed_n,
            sigma,
            ms,
            &set.len().to_string(),
        );
    }

    // an Ab-square-free text: the worst case for first-hit detectors
    let absf_n = if quick { 1 << 10 } else { 1 << 12 };
    let absf = absquare_free_quaternary(
        absf_n,
        &AbsfBackend::Backtracking {
            seed: common.seed(),
            max_steps: 500_000_000,
        },
    )?;
    let (hit, ms) = timed(|| detect_absquare(&absf));
    csv.row("detect-absquare", "absf", absf_n, 4, ms, outcome(hit.is_some()));

    // a small gadget text
    let seq = IntSeq::new(vec![1, 2, 3, 7, 2])?;
    let params = params_for_instance(&seq, 2, GadgetVariant::Plain);
    let ga = GadgetAlphabet::new(params.k);
    let marked = build_marked_text(&seq, &params, &ga)?;
    let n = marked.text.len();
    let sigma = marked.text.alphabet().len();
    let (set, ms) = timed(|| centers_bruteforce(&marked.text));
    csv.row("centers-brute", "gadget", n, sigma, ms, &set.len().to_string());
    let (set, ms) = timed(|| centers(&marked.text, IntersectionBackend::PairHash));
    csv.row("centers-dc-hash", "gadget", n, sigma, ms, &set.len().to_string());

    std::fs::write(out, &csv.body).with_context(|| format!("writing {}", out.display()))?;
    println!("csv written to {}", out.display());
    Ok(0)
}

fn outcome(found: bool) -> &'static str {
    if found {
        "found"
    } else {
        "none"
    }
}
