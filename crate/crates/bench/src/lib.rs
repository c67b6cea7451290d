//! Fixtures for the criterion benchmarks.

use std::path::PathBuf;

use lsa_core::{
    build_matrix, select_vocabulary, Corpus, GrayImage, TermDocMatrix, TokenizerConfig,
};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// The nine-title example matrix built from the shipped corpus and config.
pub fn example_matrix() -> TermDocMatrix {
    let dir = data_dir();
    let corpus =
        Corpus::parse(&std::fs::read_to_string(dir.join("landauer_corpus.tsv")).unwrap()).unwrap();
    let config =
        TokenizerConfig::parse(&std::fs::read_to_string(dir.join("tokenizer.conf")).unwrap())
            .unwrap();
    let vocab = select_vocabulary(&corpus, &config);
    build_matrix(&corpus, &vocab, &config)
}

pub fn synthetic_scene() -> GrayImage {
    lsa_core::read_pgm(&std::fs::read(data_dir().join("synthetic_scene.pgm")).unwrap()).unwrap()
}
