use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use lsa_core::lsa::{parse_judgments, results_to_tsv};
use lsa_core::{
    build_matrix, compress_image, read_pgm, render_heatmap, select_vocabulary, write_pgm,
    CompressionReport, Corpus, HeatmapSpec, ImageFormat, LsaModel, Palette, Rank, SearchOptions,
    TermDocMatrix, TokenizerConfig,
};

use crate::{BuildArgs, CompressArgs, HeatmapArgs, QueryArgs, SweepArgs};

fn require_file(path: &Path, what: &str) -> Result<()> {
    if !path.is_file() {
        bail!("{what} not found: {}", path.display());
    }
    Ok(())
}

fn read_text(path: &Path, what: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {what} {}", path.display()))
}

fn load_matrix(path: &Path) -> Result<TermDocMatrix> {
    require_file(path, "matrix")?;
    TermDocMatrix::parse_tsv(&read_text(path, "matrix")?)
        .with_context(|| format!("parsing matrix {}", path.display()))
}

fn stdout_write(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn build(args: &BuildArgs) -> Result<()> {
    require_file(&args.corpus, "corpus")?;
    require_file(&args.config, "config")?;
    let corpus = Corpus::parse(&read_text(&args.corpus, "corpus")?)
        .with_context(|| format!("parsing corpus {}", args.corpus.display()))?;
    let config = TokenizerConfig::parse(&read_text(&args.config, "config")?)
        .with_context(|| format!("parsing config {}", args.config.display()))?;
    let vocab = select_vocabulary(&corpus, &config);
    let matrix = build_matrix(&corpus, &vocab, &config);
    fs::write(&args.out, matrix.to_tsv())
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!("{} terms, {} documents", matrix.n_terms(), matrix.n_docs());
    Ok(())
}

pub fn query(args: &QueryArgs) -> Result<()> {
    if let Some(config) = &args.config {
        require_file(config, "config")?;
    }
    let matrix = load_matrix(&args.matrix)?;
    let keyword = match &args.config {
        Some(path) => TokenizerConfig::parse(&read_text(path, "config")?)?.canonical(&args.keyword),
        None => args.keyword.clone(),
    };
    let rank = match args.k {
        Some(k) => Rank::Factors(k as usize),
        None => Rank::Full,
    };
    let model = LsaModel::fit(&matrix)?;
    let opts = SearchOptions {
        threshold: args.threshold,
        limit: args.limit.map(|l| l as usize),
    };
    let results = model.keyword_search(&keyword, rank, &opts)?;
    stdout_write(&results_to_tsv(&results))
}

pub fn heatmap(args: &HeatmapArgs) -> Result<()> {
    let matrix = load_matrix(&args.matrix)?;
    let model = LsaModel::fit(&matrix)?;
    let labeled = match args.k {
        Some(k) => model.reconstruct_at_rank(k as usize)?,
        None => model.original(),
    };
    let palette = args.palette.unwrap_or(if args.raw {
        Palette::Discrete3
    } else {
        Palette::Continuous
    });
    let spec = HeatmapSpec {
        palette,
        value_floor: args.floor,
        value_ceiling: args.ceiling,
        cell_px: args.cell_px as usize,
        show_labels: !args.no_labels,
    };
    let format = match args.out.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("svg") => ImageFormat::Svg,
        _ => ImageFormat::Ppm,
    };
    let bytes = render_heatmap(&labeled, &spec, format)?;
    fs::write(&args.out, bytes).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

pub fn compress(args: &CompressArgs) -> Result<()> {
    require_file(&args.input, "image")?;
    let bytes =
        fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let img = read_pgm(&bytes).with_context(|| format!("parsing {}", args.input.display()))?;
    let (out, report) = compress_image(&img, args.k as usize)?;
    fs::write(&args.out, write_pgm(&out))
        .with_context(|| format!("writing {}", args.out.display()))?;
    stdout_write(&format!("{}\n{report}\n", CompressionReport::TSV_HEADER))
}

/// Parses `2,6`, `1..9`, `1-9` or mixtures such as `1,3..5`.
fn parse_ks(spec: &str) -> Result<Vec<usize>> {
    let mut ks = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let range = part.split_once("..").or_else(|| part.split_once('-'));
        let parse = |s: &str| -> Result<usize> {
            let k: usize = s
                .trim()
                .parse()
                .with_context(|| format!("invalid rank {s:?}"))?;
            if k == 0 {
                bail!("ranks must be positive");
            }
            Ok(k)
        };
        match range {
            Some((lo, hi)) => {
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo > hi {
                    bail!("empty rank range {part:?}");
                }
                ks.extend(lo..=hi);
            }
            None => ks.push(parse(part)?),
        }
    }
    if ks.is_empty() {
        bail!("empty rank list");
    }
    Ok(ks)
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    require_file(&args.judgments, "judgments")?;
    let ks = parse_ks(&args.ks)?;
    let matrix = load_matrix(&args.matrix)?;
    let judgments = parse_judgments(&read_text(&args.judgments, "judgments")?)?;
    let keywords: Vec<&str> = judgments.iter().map(|(k, _)| k.as_str()).collect();
    let relevant: BTreeMap<_, _> = judgments.iter().cloned().collect();
    let opts = match args.threshold {
        Some(threshold) => SearchOptions {
            threshold,
            limit: None,
        },
        None => SearchOptions::unfiltered(),
    };
    let model = LsaModel::fit(&matrix)?;
    let report = model.sweep_ranks(&keywords, &relevant, &ks, &opts)?;
    stdout_write(&report.to_tsv())
}
