//! Latent semantic analysis on small corpora.
//!
//! The pipeline runs corpus → term-document count matrix → SVD → rank-k
//! reconstruction → keyword retrieval. The same truncated SVD drives the
//! heatmap renderer in [`viz`] and the grayscale compression demo in
//! [`imaging`].
//!
//! Terminology: "factors" are singular triplets `(u_i, sigma_i, v_i)`; some
//! LSA literature calls them eigenvalues and eigenvectors, which they are for
//! the symmetric products `A·Aᵀ` and `Aᵀ·A`.

pub mod corpus;
pub mod error;
pub mod imaging;
pub mod linalg;
pub mod lsa;
mod netpbm;
pub mod viz;

pub use corpus::{
    build_matrix, select_vocabulary, tokenize, Corpus, Document, TermDocMatrix, TokenizerConfig,
    Vocabulary,
};
pub use error::{Error, Result};
pub use imaging::{compress_image, read_pgm, write_pgm, CompressionReport, GrayImage};
pub use linalg::{frobenius_distance, reconstruct, svd, truncate, DenseMatrix, SvdFactors};
pub use lsa::{
    average_precision, LabeledMatrix, LsaModel, Rank, RankedResult, SearchOptions, SweepReport,
};
pub use viz::{distinct_colors, render_heatmap, HeatmapSpec, ImageFormat, Palette};
