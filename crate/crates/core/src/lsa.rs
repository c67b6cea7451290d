//! LSA model: the full SVD of a count matrix, rank-k reconstructions and
//! keyword search over them.
//!
//! A keyword's relevance to a document is the reconstructed cell value at
//! (keyword, document). At full rank that is the raw count, so a document is
//! found only if it contains the keyword; at lower ranks related words leak
//! into each other's rows.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::corpus::TermDocMatrix;
use crate::error::{Error, Result};
use crate::linalg::{reconstruct, svd, truncate, DenseMatrix, SvdFactors};

/// A real-valued matrix with row (term) and column (document) labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: DenseMatrix,
}

impl LabeledMatrix {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        values: DenseMatrix,
    ) -> Result<Self> {
        if values.shape() != (row_labels.len(), col_labels.len()) {
            return Err(Error::InvalidDimensions {
                rows: row_labels.len(),
                cols: col_labels.len(),
                len: values.values().len(),
            });
        }
        Ok(Self {
            row_labels,
            col_labels,
            values,
        })
    }

    pub fn from_counts(matrix: &TermDocMatrix) -> Result<Self> {
        Self::new(
            matrix.terms().terms().to_vec(),
            matrix.doc_ids().to_vec(),
            matrix.to_dense()?,
        )
    }
}

/// Which matrix a search reads scores from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    /// The raw count matrix.
    Full,
    /// The reconstruction from the leading `k` factors.
    Factors(usize),
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Full => f.write_str("full"),
            Rank::Factors(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for Rank {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(Rank::Full);
        }
        s.parse::<usize>()
            .map(Rank::Factors)
            .map_err(|_| format!("expected `full` or a positive rank, got {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    pub doc_id: String,
    pub score: f64,
}

/// Keeps results scoring strictly above `threshold`, then the first `limit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub threshold: f64,
    pub limit: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            threshold: 0.0,
            limit: None,
        }
    }
}

impl SearchOptions {
    /// Every document, in ranked order.
    pub fn unfiltered() -> Self {
        Self {
            threshold: f64::NEG_INFINITY,
            limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsaModel {
    matrix: TermDocMatrix,
    factors: SvdFactors,
}

impl LsaModel {
    /// Decomposes the count matrix. All `min(terms, docs)` factors are kept.
    pub fn fit(matrix: &TermDocMatrix) -> Result<Self> {
        let factors = svd(&matrix.to_dense()?)?;
        Ok(Self {
            matrix: matrix.clone(),
            factors,
        })
    }

    pub fn matrix(&self) -> &TermDocMatrix {
        &self.matrix
    }

    pub fn factors(&self) -> &SvdFactors {
        &self.factors
    }

    pub fn n_factors(&self) -> usize {
        self.factors.rank()
    }

    pub fn original(&self) -> LabeledMatrix {
        LabeledMatrix::from_counts(&self.matrix).expect("fitted matrix is non-empty")
    }

    pub fn reconstruct_at_rank(&self, k: usize) -> Result<LabeledMatrix> {
        let values = reconstruct(&truncate(&self.factors, k)?);
        LabeledMatrix::new(
            self.matrix.terms().terms().to_vec(),
            self.matrix.doc_ids().to_vec(),
            values,
        )
    }

    /// Vocabulary row of `keyword` (lowercased), or an error naming the
    /// vocabulary terms that share the longest prefix with it.
    pub fn term_index(&self, keyword: &str) -> Result<usize> {
        let keyword = keyword.to_lowercase();
        let terms = self.matrix.terms();
        terms.position(&keyword).ok_or_else(|| {
            let common = |t: &str| {
                t.chars()
                    .zip(keyword.chars())
                    .take_while(|(a, b)| a == b)
                    .count()
            };
            let best = terms.terms().iter().map(|t| common(t)).max().unwrap_or(0);
            let candidates = if best == 0 {
                Vec::new()
            } else {
                terms
                    .terms()
                    .iter()
                    .filter(|t| common(t) == best)
                    .cloned()
                    .collect()
            };
            Error::UnknownTerm {
                term: keyword.clone(),
                candidates,
            }
        })
    }

    /// Scores of every document for `keyword`, in corpus order.
    pub fn scores(&self, keyword: &str, rank: Rank) -> Result<Vec<f64>> {
        let t = self.term_index(keyword)?;
        match rank {
            Rank::Full => Ok(self.matrix.row(t).iter().map(|&c| f64::from(c)).collect()),
            Rank::Factors(k) => {
                let r = self.n_factors();
                if k == 0 || k > r {
                    return Err(Error::RankOutOfRange { k, max: r });
                }
                // Same accumulation order as `reconstruct`.
                let (u, sigma, v) = (self.factors.u(), self.factors.sigma(), self.factors.v());
                let ut = u.row(t);
                Ok((0..v.rows())
                    .map(|j| {
                        let vj = v.row(j);
                        let mut acc = 0.0;
                        for l in 0..k {
                            acc += ut[l] * sigma[l] * vj[l];
                        }
                        acc
                    })
                    .collect())
            }
        }
    }

    /// Documents ranked by descending score, ties by corpus position.
    pub fn keyword_search(
        &self,
        keyword: &str,
        rank: Rank,
        options: &SearchOptions,
    ) -> Result<Vec<RankedResult>> {
        let scores = self.scores(keyword, rank)?;
        let mut order: Vec<usize> = (0..scores.len())
            .filter(|&j| scores[j] > options.threshold)
            .collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        if let Some(limit) = options.limit {
            order.truncate(limit);
        }
        Ok(order
            .into_iter()
            .map(|j| RankedResult {
                doc_id: self.matrix.doc_ids()[j].clone(),
                score: scores[j],
            })
            .collect())
    }

    /// Runs every keyword at every rank in `ks` and scores each ranking by
    /// average precision against `relevant`. Ranks are sorted and
    /// deduplicated; keywords without judgments get an empty relevant set.
    pub fn sweep_ranks<S: AsRef<str>>(
        &self,
        keywords: &[S],
        relevant: &BTreeMap<String, BTreeSet<String>>,
        ks: &[usize],
        options: &SearchOptions,
    ) -> Result<SweepReport> {
        if ks.is_empty() {
            return Err(Error::EmptyRanks);
        }
        let mut ks = ks.to_vec();
        ks.sort_unstable();
        ks.dedup();
        for ids in relevant.values() {
            for id in ids {
                if self.matrix.doc_position(id).is_none() {
                    return Err(Error::UnknownDocument(id.clone()));
                }
            }
        }
        let keywords: Vec<String> = keywords.iter().map(|k| k.as_ref().to_lowercase()).collect();
        for k in &keywords {
            self.term_index(k)?;
        }
        let empty = BTreeSet::new();
        let mut ranks = Vec::with_capacity(ks.len());
        for &k in &ks {
            let mut entries = Vec::with_capacity(keywords.len());
            for keyword in &keywords {
                let results = self.keyword_search(keyword, Rank::Factors(k), options)?;
                let ids: Vec<&str> = results.iter().map(|r| r.doc_id.as_str()).collect();
                let rel = relevant.get(keyword).unwrap_or(&empty);
                entries.push(KeywordReport {
                    keyword: keyword.clone(),
                    average_precision: average_precision(&ids, rel),
                    results,
                });
            }
            ranks.push(RankReport {
                k,
                keywords: entries,
            });
        }
        Ok(SweepReport { ranks })
    }
}

/// Mean of precision@i over the positions `i` holding a relevant document,
/// divided by the size of the relevant set. 0 when nothing is relevant.
pub fn average_precision<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, id) in ranked.iter().enumerate() {
        if relevant.contains(id.as_ref()) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / relevant.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeywordReport {
    pub keyword: String,
    pub results: Vec<RankedResult>,
    pub average_precision: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub k: usize,
    pub keywords: Vec<KeywordReport>,
}

/// Per-rank retrieval quality. Ranks are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub ranks: Vec<RankReport>,
}

impl SweepReport {
    pub fn average_precision(&self, keyword: &str, k: usize) -> Option<f64> {
        self.ranks
            .iter()
            .find(|r| r.k == k)?
            .keywords
            .iter()
            .find(|e| e.keyword == keyword)
            .map(|e| e.average_precision)
    }

    /// Header plus one `k<TAB>keyword<TAB>average_precision<TAB>ranking` row
    /// per (rank, keyword); the ranking is comma-joined document ids.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("k\tkeyword\taverage_precision\tranking\n");
        for rank in &self.ranks {
            for e in &rank.keywords {
                let ids: Vec<&str> = e.results.iter().map(|r| r.doc_id.as_str()).collect();
                writeln!(
                    out,
                    "{}\t{}\t{:.6}\t{}",
                    rank.k,
                    e.keyword,
                    e.average_precision,
                    ids.join(",")
                )
                .unwrap();
            }
        }
        out
    }
}

/// `rank<TAB>doc_id<TAB>score` lines, ranks from 1, scores to 6 decimals.
pub fn results_to_tsv(results: &[RankedResult]) -> String {
    let mut out = String::new();
    for (i, r) in results.iter().enumerate() {
        writeln!(out, "{}\t{}\t{:.6}", i + 1, r.doc_id, r.score).unwrap();
    }
    out
}

/// Parses relevance judgments, one `keyword<TAB>doc_id[,doc_id...]` per line.
/// Keywords are lowercased and returned in file order.
pub fn parse_judgments(text: &str) -> Result<Vec<(String, BTreeSet<String>)>> {
    let mut out: Vec<(String, BTreeSet<String>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, ids) = line.split_once('\t').ok_or_else(|| Error::Parse {
            source_name: "judgments",
            line: i + 1,
            message: "expected `keyword<TAB>doc_id[,doc_id...]`".into(),
        })?;
        let keyword = keyword.trim().to_lowercase();
        let ids: BTreeSet<String> = ids
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        match out.iter_mut().find(|(k, _)| *k == keyword) {
            Some((_, existing)) => existing.extend(ids),
            None => out.push((keyword, ids)),
        }
    }
    Ok(out)
}
