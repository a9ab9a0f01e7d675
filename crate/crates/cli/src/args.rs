use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gossipfp",
    version,
    about = "Gossip fingerprinting codes: build, simulate, trace, watermark"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Ceiling on coalitions examined by brute-force tracing.
    #[arg(long, global = true, default_value_t = gossip_core::tracing::DEFAULT_BUDGET)]
    pub budget: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct and check t-designs.
    #[command(subcommand)]
    Design(DesignCmd),
    /// Construct Gossip codes and query their parameters.
    #[command(subcommand)]
    Gossip(GossipCmd),
    /// Traceability schemes and their conversion to codes.
    #[command(subcommand)]
    Ts(TsCmd),
    /// Produce a pirate word from a coalition.
    Simulate(SimulateArgs),
    /// Trace a pirate word back to users.
    Trace(TraceArgs),
    /// Concatenated codes.
    #[command(subcommand)]
    Concat(ConcatCmd),
    /// Wavelet watermarking of PGM images.
    #[command(subcommand)]
    Wm(WmCmd),
    /// Regenerate a published table and compare with its fixture.
    Repro {
        /// example211, table1, table2, table3, appendix-matrix, sec511,
        /// example431, example411, example511, or `all`.
        target: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum DesignCmd {
    /// 2-(p²+p+1, p+1, 1) projective plane, p prime.
    Projective { p: u64 },
    /// 2-(v, 3, 1) Steiner triple system, v ≡ 1 or 3 (mod 6).
    Steiner { v: u64 },
    /// 3-(p²+1, p+1, 1) inversive plane, p prime.
    Inversive { p: u64 },
    /// Cyclic development of a base block.
    Cyclic {
        #[arg(long, value_delimiter = ',', required = true)]
        base: Vec<u32>,
        #[arg(long)]
        v: u64,
        /// Claimed strength (defaults to min(k, 2)).
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
    /// Extend a 2-(v,3,1) design to a 2-(2v+1,3,1) design containing it.
    EmbedSts { file: PathBuf },
    /// Exhaustively check the design property.
    Verify { file: PathBuf },
    /// λ_s and λ̄_s from the formulas.
    Lambda { file: PathBuf, s: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Ascending,
    Development,
}

#[derive(Debug, Subcommand)]
pub enum GossipCmd {
    /// The code of a λ = 1 design.
    FromDesign {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Ascending)]
        order: Order,
    },
    /// The square code on q symbols.
    Square { q: usize },
    /// All (q−1)-subsets of M rows as column keys.
    Full { m: usize, q: usize },
    /// Length, weight and distance of the shortest code.
    Params { m: u64, q: u64, c: u64 },
    /// Accusation groups of one column (1-based).
    Groups { code: PathBuf, column: usize },
    /// Whether every row of `inner` is a row of `outer` up to column order.
    Embedded { inner: PathBuf, outer: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TsCmd {
    /// Develop a base key cyclically.
    FromCyclic {
        #[arg(long, value_delimiter = ',', required = true)]
        base: Vec<u64>,
        #[arg(long)]
        v: u64,
    },
    /// Turn a scheme into the shortest c-Gossip code.
    ToGossip {
        scheme: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long, value_enum, default_value_t = Order::Development)]
        order: Order,
    },
    /// Read a shortest code's keys as a scheme.
    FromGossip { code: PathBuf },
    /// Expose the users overlapping a decoder most.
    Trace {
        scheme: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        decoder: Vec<u32>,
    },
    /// Whether all pairwise key intersections are below c.
    Check {
        scheme: PathBuf,
        #[arg(long)]
        c: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[allow(clippy::enum_variant_names)]
pub enum StrategyArg {
    NoErasures,
    SelectiveErasures,
    OnlyErasures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Random,
    FirstMember,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub code: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub coalition: Vec<u32>,
    #[arg(long, value_enum, default_value_t = StrategyArg::OnlyErasures)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = PolicyArg::Random)]
    pub policy: PolicyArg,
    /// Accept coalitions larger than c; the result is flagged.
    #[arg(long)]
    pub allow_oversize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Nonzero,
    Zeros,
    Brute,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    pub code: PathBuf,
    pub word: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Nonzero)]
    pub method: Method,
    /// Coalition bound for brute force (defaults to the code's c).
    #[arg(long)]
    pub c: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ConcatCmd {
    /// Concatenate a builtin inner code with an outer code file.
    Build {
        #[arg(long)]
        inner: String,
        #[arg(long)]
        outer: PathBuf,
    },
    /// Two-stage trace of a word over the inner alphabet.
    Trace { ccode: PathBuf, word: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum WmCmd {
    /// Embed row `--row` of a code into an image.
    Embed {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        mark: MarkArgs,
        #[arg(long, default_value_t = gossip_core::watermark::DEFAULT_ALPHA)]
        alpha: f64,
        /// Write P2 (ASCII) instead of P5.
        #[arg(long)]
        ascii: bool,
    },
    /// Blind detection of row `--row` in an image.
    Detect {
        input: PathBuf,
        #[command(flatten)]
        mark: MarkArgs,
        #[arg(long, default_value_t = gossip_core::watermark::DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Write a seeded Gaussian-noise test image.
    Noise {
        output: PathBuf,
        #[arg(long, default_value_t = 64)]
        width: usize,
        #[arg(long, default_value_t = 64)]
        height: usize,
        #[arg(long)]
        ascii: bool,
    },
}

#[derive(Debug, Args)]
pub struct MarkArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Codeword (user) number, from 1.
    #[arg(long)]
    pub row: u32,
}
