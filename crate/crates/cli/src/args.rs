use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use structured_spectra::{DiagonalPolicy, EnsembleKind, EntryDistribution, Structure};

#[derive(Debug, Parser)]
#[command(
    name = "structured-spectra",
    version,
    about = "Spectra and moments of palindromic Toeplitz and related random-matrix ensembles"
)]
pub struct Cli {
    /// Worker threads: a positive count or `auto`.
    #[arg(long, global = true, env = crate::THREADS_ENV)]
    pub threads: Option<Threads>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Count(usize),
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Count(n)),
            _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Interlacing,
    Rank,
    Hankel,
    Submatrix,
    B0,
    Clt,
}

fn parse_structure(s: &str) -> Result<Structure, String> {
    s.parse().map_err(|e: structured_spectra::Error| {
        let names: Vec<&str> = Structure::ALL.iter().map(|k| k.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn parse_dist(s: &str) -> Result<EntryDistribution, String> {
    s.parse().map_err(|e: structured_spectra::Error| {
        let names: Vec<&str> = EntryDistribution::ALL.iter().map(|d| d.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Diagonal {
    Keep,
    ZeroMain,
    ZeroMainAndCorners,
}

impl From<Diagonal> for DiagonalPolicy {
    fn from(d: Diagonal) -> Self {
        match d {
            Diagonal::Keep => DiagonalPolicy::Keep,
            Diagonal::ZeroMain => DiagonalPolicy::ZeroMain,
            Diagonal::ZeroMainAndCorners => DiagonalPolicy::ZeroMainAndCorners,
        }
    }
}

/// Ensemble selection shared by several subcommands.
#[derive(Debug, Clone, Args)]
pub struct KindArgs {
    /// palindromic-toeplitz, circulant-symmetric-toeplitz, palindromic-hankel,
    /// plain-symmetric-toeplitz or diagonal.
    #[arg(long, value_parser = parse_structure)]
    pub kind: Structure,

    /// Positions forced to zero on top of the structure.
    #[arg(long, value_enum, default_value = "keep")]
    pub diagonal: Diagonal,
}

impl KindArgs {
    pub fn ensemble(&self) -> EnsembleKind {
        EnsembleKind::new(self.kind).with_diagonal(self.diagonal.into())
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalized eigenvalues of one sampled matrix.
    Spectrum {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, value_parser = parse_dist)]
        dist: EntryDistribution,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte Carlo estimate of averaged spectral moments.
    Moments {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, value_parser = parse_dist)]
        dist: EntryDistribution,
        #[arg(long)]
        n: usize,
        /// Moment order; repeat or separate with commas for several.
        #[arg(long, required = true, value_delimiter = ',')]
        m: Vec<u32>,
        #[arg(long)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact expected moment at finite N by enumerating all index tuples.
    ExactMoments {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_dist)]
        dist: EntryDistribution,
        /// Largest number of tuples to enumerate.
        #[arg(long, default_value_t = structured_spectra::moments::DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Per-matching tuple counts for the 2k-th moment.
    Matchings {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = structured_spectra::moments::DEFAULT_BUDGET)]
        budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Histogram of mean-normalized eigenvalue spacings.
    Spacings {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, value_parser = parse_dist)]
        dist: EntryDistribution,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        draws: usize,
        /// First eigenvalue of the window (1-based, ascending order).
        #[arg(long)]
        lo: usize,
        /// Last eigenvalue of the window (inclusive).
        #[arg(long)]
        hi: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Drop normalized spacings below this value before binning.
        #[arg(long)]
        min_spacing: Option<f64>,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        /// Right edge of the last bin; bins start at 0.
        #[arg(long, default_value_t = 4.0)]
        max: f64,
        /// Also write every normalized spacing, one per line, to this file.
        #[arg(long)]
        raw_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Kolmogorov-Smirnov distance of the cosine sums to the normal law.
    Clt {
        #[arg(long, value_parser = parse_dist)]
        dist: EntryDistribution,
        /// Number of summands; with --trend, the smallest of four sizes.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run n, 2n, 4n, 8n on nested data over several seeds.
        #[arg(long)]
        trend: bool,
        /// Seeds for --trend: seed, seed+1, ...
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Structural checks; exits with 5 if any fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Matrix sizes for the sweeps.
        #[arg(long, value_delimiter = ',', default_values_t = [10, 50, 100, 200])]
        ns: Vec<usize>,
        /// Random repetitions per size.
        #[arg(long, default_value_t = 50)]
        seeds: usize,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
        #[arg(long, value_parser = parse_dist, default_value = "std-normal")]
        dist: EntryDistribution,
        #[command(flatten)]
        out: OutArgs,
    },
}

impl Command {
    pub fn out_args(&self) -> &OutArgs {
        match self {
            Command::Spectrum { out, .. }
            | Command::Moments { out, .. }
            | Command::ExactMoments { out, .. }
            | Command::Matchings { out, .. }
            | Command::Spacings { out, .. }
            | Command::Clt { out, .. }
            | Command::Verify { out, .. } => out,
        }
    }

    pub fn out(&self) -> Option<&PathBuf> {
        self.out_args().out.as_ref()
    }
}
