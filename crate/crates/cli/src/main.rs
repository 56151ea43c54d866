//! `absq`: detectors, center computation, reductions, verification,
//! generators, and a benchmark harness over the Ab-square toolkit.
//!
//! Exit codes follow one contract across detect-style commands:
//! 0 = found / ok, 1 = none found (or a verification FAIL), 2 = error.

mod bench;
mod cmds;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "absq", version, about = "Abelian/additive square toolkit")]
struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// One symbol per character.
    Char,
    /// Whitespace-separated integer tokens.
    Token,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    PairHash,
    SortMerge,
}

impl Backend {
    pub fn to_core(self) -> absq_core::IntersectionBackend {
        match self {
            Backend::PairHash => absq_core::IntersectionBackend::PairHash,
            Backend::SortMerge => absq_core::IntersectionBackend::SortMerge,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectKind {
    /// Any Ab-square factor.
    Absquare,
    /// An Ab-square factor of odd half-length.
    OddAbsquare,
    /// An additive square factor of an integer sequence.
    Additive,
    /// A double 3-term progression witness.
    Midsum3,
    /// A convolution 3SUM witness.
    Conv3sum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceTarget {
    Midsum3,
    Additive,
    StringT,
    StringW,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenBackend {
    Backtracking,
    Morphism,
}

#[derive(Args)]
pub struct CommonOpts {
    /// Text file mode.
    #[arg(long, value_enum, default_value = "char")]
    pub mode: Mode,
    /// RNG seed (falls back to ABSQ_SEED, then a fixed default).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Detect a square-like factor; prints a witness or NONE.
    Detect {
        #[arg(value_enum)]
        kind: DetectKind,
        input: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Compute all Ab-square centers of a text.
    Centers {
        input: PathBuf,
        /// Only centers of odd-half-length Ab-squares.
        #[arg(long)]
        odd: bool,
        #[arg(long, value_enum, default_value = "pair-hash")]
        backend: Backend,
        /// Attach a brute-force attested maximal half-length per center.
        #[arg(long)]
        attest: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: OutputFormat,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a reduction and write the instance plus its trace.
    Reduce {
        #[arg(long, value_enum)]
        target: ReduceTarget,
        input: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, short)]
        out: PathBuf,
        /// Lower bound on the number of primes for string targets.
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Replay a reduction stage by stage against brute-force oracles.
    Verify {
        /// Directory produced by `reduce`.
        dir: PathBuf,
        /// Skip brute-force replays above this instance size.
        #[arg(long, default_value_t = 4096)]
        cap: usize,
    },
    /// Time detectors and center computations over generated inputs.
    Bench {
        /// Smaller grid, finishes within a minute.
        #[arg(long)]
        quick: bool,
        /// CSV output path.
        #[arg(long, short, default_value = "bench.csv")]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit generated texts.
    #[command(subcommand)]
    Generate(GenerateCmd),
}

#[derive(Subcommand)]
pub enum GenerateCmd {
    /// An Ab-square-free quaternary string.
    AbsquareFree {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "backtracking")]
        backend: GenBackend,
        /// Morphism table file (four lines over the symbols 3 4 5 6).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Repetitions of the center-locking period unit.
    U2t {
        #[arg(long)]
        t: usize,
        /// Number of repetitions.
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Interleave two equal-length texts with a fresh separator.
    Shuffle {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

impl CommonOpts {
    pub fn seed(&self) -> u64 {
        self.seed
            .or_else(|| {
                std::env::var("ABSQ_SEED")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(absq_core::parikh::DEFAULT_SEED)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Detect {
            kind,
            input,
            common,
        } => cmds::detect(kind, &input, &common),
        Command::Centers {
            input,
            odd,
            backend,
            attest,
            format,
            common,
        } => cmds::centers(&input, odd, backend, attest, format, &common),
        Command::Reduce {
            target,
            input,
            out,
            k_min,
            common,
        } => cmds::reduce(target, &input, &out, k_min, &common),
        Command::Verify { dir, cap } => cmds::verify(&dir, cap),
        Command::Bench { quick, out, common } => bench::run(quick, &out, &common),
        Command::Generate(gen) => cmds::generate(gen),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
