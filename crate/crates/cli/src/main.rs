//! `lsa`: build a term-document matrix, search it at reduced rank, render
//! heatmaps, compress grayscale images and sweep retrieval quality over ranks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lsa_core::Palette;

#[derive(Parser)]
#[command(
    name = "lsa",
    version,
    about = "Latent semantic analysis on small corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the term-document count matrix from a corpus.
    Build(BuildArgs),
    /// Rank documents for a keyword at full or reduced rank.
    Query(QueryArgs),
    /// Render a matrix (raw counts or a rank-k reconstruction) as PPM or SVG.
    Heatmap(HeatmapArgs),
    /// Rank-k compression of a grayscale PGM.
    Compress(CompressArgs),
    /// Average precision of keyword searches across several ranks.
    Sweep(SweepArgs),
}

#[derive(Args)]
pub struct BuildArgs {
    /// Corpus file, one `id<TAB>title` per line.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Tokenizer config with `stopword` and `alias` lines.
    #[arg(long)]
    pub config: PathBuf,
    /// Output matrix file.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("rank").required(true).args(["k", "full"])))]
pub struct QueryArgs {
    /// Matrix file written by `build`.
    #[arg(long)]
    pub matrix: PathBuf,
    pub keyword: String,
    /// Number of factors to keep.
    #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    /// Score against the raw counts.
    #[arg(long)]
    pub full: bool,
    /// Return only documents scoring strictly above this value.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub threshold: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub limit: Option<u32>,
    /// Tokenizer config used to alias-normalize the keyword.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("rank").required(true).args(["k", "raw"])))]
pub struct HeatmapArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Render the rank-k reconstruction.
    #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    /// Render the raw counts.
    #[arg(long)]
    pub raw: bool,
    /// `discrete3` (default with --raw) or `continuous` (default with -k).
    #[arg(long)]
    pub palette: Option<Palette>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub floor: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub ceiling: f64,
    /// Pixels per matrix cell.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub cell_px: u32,
    /// Omit row and column labels from SVG output.
    #[arg(long)]
    pub no_labels: bool,
    /// Output path; `.svg` writes SVG, anything else binary PPM.
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct CompressArgs {
    /// Input PGM (P2 or P5).
    pub input: PathBuf,
    #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Output PGM (P5).
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Relevance judgments, `keyword<TAB>doc_id[,doc_id...]` per line.
    #[arg(long)]
    pub judgments: PathBuf,
    /// Ranks to evaluate, e.g. `2,6` or `1..9`.
    #[arg(long)]
    pub ks: String,
    /// Drop documents scoring at or below this value before scoring the
    /// ranking (default: rank every document).
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => commands::build(&args),
        Command::Query(args) => commands::query(&args),
        Command::Heatmap(args) => commands::heatmap(&args),
        Command::Compress(args) => commands::compress(&args),
        Command::Sweep(args) => commands::sweep(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
