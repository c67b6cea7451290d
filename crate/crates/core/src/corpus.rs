//! Documents, tokenization, vocabulary selection and the term-document
//! count matrix.
//!
//! Three text formats live here:
//!
//! * corpus files: one document per line, `id<TAB>title`;
//! * tokenizer configs: `stopword <token>`, `alias <from> <to>` and
//!   `min_doc_count <n>` lines, `#` comments;
//! * matrix files: tab-separated document ids on line 1, then one
//!   `term<TAB>count...` line per vocabulary term.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

/// Documents in ingestion order. The order fixes the matrix column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    /// Fails on an empty id or a repeated id.
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, doc) in documents.iter().enumerate() {
            if doc.id.is_empty() {
                return Err(Error::Parse {
                    source_name: "corpus",
                    line: i + 1,
                    message: "empty document id".into(),
                });
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateDocumentId(doc.id.clone()));
            }
        }
        Ok(Self { documents })
    }

    /// Parses `id<TAB>title` lines. Blank lines are skipped; a file with no
    /// documents is rejected as [`Error::EmptyCorpus`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut documents = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let (id, title) = line.split_once('\t').ok_or_else(|| Error::Parse {
                source_name: "corpus",
                line: i + 1,
                message: "expected `id<TAB>title`".into(),
            })?;
            let id = id.trim();
            if id.is_empty() {
                return Err(Error::Parse {
                    source_name: "corpus",
                    line: i + 1,
                    message: "empty document id".into(),
                });
            }
            documents.push(Document {
                id: id.to_string(),
                text: title.to_string(),
            });
        }
        if documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Self::new(documents)
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.documents.iter().map(|d| d.id.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerConfig {
    stopwords: BTreeSet<String>,
    aliases: BTreeMap<String, String>,
    min_doc_count: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            stopwords: BTreeSet::new(),
            aliases: BTreeMap::new(),
            min_doc_count: 2,
        }
    }
}

impl TokenizerConfig {
    /// Stopwords and aliases are lowercased. Alias targets may not be alias
    /// keys themselves, so normalization is always a single lookup.
    pub fn new<S, A, K, V>(stopwords: S, aliases: A, min_doc_count: usize) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: AsRef<str>,
        A: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        if min_doc_count == 0 {
            return Err(Error::InvalidMinDocCount);
        }
        let stopwords = stopwords
            .into_iter()
            .map(|s| s.as_ref().to_lowercase())
            .collect();
        let aliases: BTreeMap<String, String> = aliases
            .into_iter()
            .map(|(k, v)| (k.as_ref().to_lowercase(), v.as_ref().to_lowercase()))
            .collect();
        for (from, target) in &aliases {
            if aliases.contains_key(target) {
                return Err(Error::AliasChain {
                    from: from.clone(),
                    target: target.clone(),
                });
            }
        }
        Ok(Self {
            stopwords,
            aliases,
            min_doc_count,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut stopwords = Vec::new();
        let mut aliases = Vec::new();
        let mut min_doc_count = 2;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: &str| Error::Parse {
                source_name: "tokenizer config",
                line: i + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["stopword", token] => stopwords.push(token.to_string()),
                ["alias", from, to] => aliases.push((from.to_string(), to.to_string())),
                ["min_doc_count", n] => {
                    min_doc_count = n
                        .parse()
                        .map_err(|_| bad("min_doc_count expects a positive integer"))?;
                }
                _ => {
                    return Err(bad(
                        "expected `stopword <token>`, `alias <from> <to>` or `min_doc_count <n>`",
                    ))
                }
            }
        }
        Self::new(stopwords, aliases, min_doc_count)
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn aliases(&self) -> &BTreeMap<String, String> {
        &self.aliases
    }

    pub fn min_doc_count(&self) -> usize {
        self.min_doc_count
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    /// Lowercases and applies the alias map.
    pub fn canonical(&self, token: &str) -> String {
        let lower = token.to_lowercase();
        match self.aliases.get(&lower) {
            Some(target) => target.clone(),
            None => lower,
        }
    }
}

/// Splits `text` into lowercase runs of ASCII letters and digits and
/// alias-normalizes each one. Stopwords are kept.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    text.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(|s| config.canonical(s))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
}

impl Vocabulary {
    /// Fails on duplicate terms.
    pub fn new(terms: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, t) in terms.iter().enumerate() {
            if !seen.insert(t.as_str()) {
                return Err(Error::Parse {
                    source_name: "vocabulary",
                    line: i + 1,
                    message: format!("duplicate term {t:?}"),
                });
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn position(&self, term: &str) -> Option<usize> {
        self.terms.iter().position(|t| t == term)
    }
}

/// Keeps non-stopword canonical tokens that occur in at least
/// `min_doc_count` distinct documents, ordered by first appearance.
pub fn select_vocabulary(corpus: &Corpus, config: &TokenizerConfig) -> Vocabulary {
    let mut order: Vec<String> = Vec::new();
    let mut doc_freq: BTreeMap<String, usize> = BTreeMap::new();
    for doc in corpus.documents() {
        let mut in_doc = HashSet::new();
        for token in tokenize(&doc.text, config) {
            if config.is_stopword(&token) || !in_doc.insert(token.clone()) {
                continue;
            }
            let n = doc_freq.entry(token.clone()).or_insert(0);
            if *n == 0 {
                order.push(token);
            }
            *n += 1;
        }
    }
    let terms = order
        .into_iter()
        .filter(|t| doc_freq[t] >= config.min_doc_count())
        .collect();
    Vocabulary { terms }
}

/// Labeled count matrix: rows are vocabulary terms, columns are documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDocMatrix {
    terms: Vocabulary,
    doc_ids: Vec<String>,
    counts: Vec<u32>,
}

/// Cell `(t, d)` is the number of occurrences of term `t` in document `d`.
pub fn build_matrix(
    corpus: &Corpus,
    vocab: &Vocabulary,
    config: &TokenizerConfig,
) -> TermDocMatrix {
    let n_docs = corpus.len();
    let mut counts = vec![0u32; vocab.len() * n_docs];
    let index: BTreeMap<&str, usize> = vocab
        .terms()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    for (d, doc) in corpus.documents().iter().enumerate() {
        for token in tokenize(&doc.text, config) {
            if let Some(&t) = index.get(token.as_str()) {
                counts[t * n_docs + d] += 1;
            }
        }
    }
    TermDocMatrix {
        terms: vocab.clone(),
        doc_ids: corpus.ids(),
        counts,
    }
}

impl TermDocMatrix {
    pub fn new(terms: Vocabulary, doc_ids: Vec<String>, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != terms.len() * doc_ids.len() {
            return Err(Error::InvalidDimensions {
                rows: terms.len(),
                cols: doc_ids.len(),
                len: counts.len(),
            });
        }
        let mut seen = HashSet::new();
        for id in &doc_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateDocumentId(id.clone()));
            }
        }
        Ok(Self {
            terms,
            doc_ids,
            counts,
        })
    }

    pub fn terms(&self) -> &Vocabulary {
        &self.terms
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn count(&self, term: usize, doc: usize) -> u32 {
        self.counts[term * self.n_docs() + doc]
    }

    pub fn row(&self, term: usize) -> &[u32] {
        let n = self.n_docs();
        &self.counts[term * n..(term + 1) * n]
    }

    pub fn doc_position(&self, id: &str) -> Option<usize> {
        self.doc_ids.iter().position(|d| d == id)
    }

    /// Multiplies every count by `factor`.
    pub fn scaled(&self, factor: u32) -> Self {
        Self {
            counts: self.counts.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    /// Fails with [`Error::EmptyMatrix`] when there are no terms or documents.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        if self.n_terms() == 0 || self.n_docs() == 0 {
            return Err(Error::EmptyMatrix);
        }
        DenseMatrix::new(
            self.n_terms(),
            self.n_docs(),
            self.counts.iter().map(|&c| f64::from(c)).collect(),
        )
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.doc_ids.join("\t");
        out.push('\n');
        for (t, term) in self.terms.terms().iter().enumerate() {
            out.push_str(term);
            for c in self.row(t) {
                write!(out, "\t{c}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self> {
        let bad = |line: usize, message: String| Error::Parse {
            source_name: "matrix",
            line,
            message,
        };
        let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
        let header = lines
            .next()
            .ok_or_else(|| bad(1, "missing header".into()))?;
        let doc_ids: Vec<String> = header.split('\t').map(str::to_string).collect();
        if doc_ids.iter().any(|d| d.is_empty()) {
            return Err(bad(1, "empty document id in header".into()));
        }
        let mut terms = Vec::new();
        let mut counts = Vec::new();
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let term = fields.next().unwrap_or_default();
            if term.is_empty() {
                return Err(bad(lineno, "empty term".into()));
            }
            let row: Vec<u32> = fields
                .map(|f| {
                    f.parse()
                        .map_err(|_| bad(lineno, format!("invalid count {f:?}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != doc_ids.len() {
                return Err(bad(
                    lineno,
                    format!("expected {} counts, found {}", doc_ids.len(), row.len()),
                ));
            }
            terms.push(term.to_string());
            counts.extend(row);
        }
        Self::new(Vocabulary::new(terms)?, doc_ids, counts)
    }
}
