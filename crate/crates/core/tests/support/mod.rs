//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use lsa_core::{
    build_matrix, select_vocabulary, Corpus, DenseMatrix, TermDocMatrix, TokenizerConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DOCS: [&str; 9] = ["c1", "c2", "c3", "c4", "c5", "m1", "m2", "m3", "m4"];

/// The nine-title count matrix, typed in by hand from the published table
/// (rows in the published order).
pub const PUBLISHED_ROWS: [(&str, [u32; 9]); 12] = [
    ("human", [1, 0, 0, 1, 0, 0, 0, 0, 0]),
    ("interface", [1, 0, 1, 0, 0, 0, 0, 0, 0]),
    ("computer", [1, 1, 0, 0, 0, 0, 0, 0, 0]),
    ("user", [0, 1, 1, 0, 1, 0, 0, 0, 0]),
    ("system", [0, 1, 1, 2, 0, 0, 0, 0, 0]),
    ("response", [0, 1, 0, 0, 1, 0, 0, 0, 0]),
    ("time", [0, 1, 0, 0, 1, 0, 0, 0, 0]),
    ("eps", [0, 0, 1, 1, 0, 0, 0, 0, 0]),
    ("survey", [0, 1, 0, 0, 0, 0, 0, 0, 1]),
    ("trees", [0, 0, 0, 0, 0, 1, 1, 1, 0]),
    ("graph", [0, 0, 0, 0, 0, 0, 1, 1, 1]),
    ("minors", [0, 0, 0, 0, 0, 0, 0, 1, 1]),
];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_dir().join(name)).unwrap()
}

pub fn shipped_config() -> TokenizerConfig {
    TokenizerConfig::parse(&read_data("tokenizer.conf")).unwrap()
}

pub fn example_corpus() -> Corpus {
    Corpus::parse(&read_data("landauer_corpus.tsv")).unwrap()
}

pub fn example_matrix() -> TermDocMatrix {
    let corpus = example_corpus();
    let config = shipped_config();
    let vocab = select_vocabulary(&corpus, &config);
    build_matrix(&corpus, &vocab, &config)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let values = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DenseMatrix::new(rows, cols, values).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_abs_identity_error(q: &DenseMatrix) -> f64 {
    let qtq = q.transpose().matmul(q).unwrap();
    let n = qtq.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((qtq.get(i, j) - target).abs());
        }
    }
    worst
}

/// Eigenvalues of a symmetric matrix by the classical two-sided Jacobi
/// method (largest off-diagonal pivot first), sorted descending.
pub fn symmetric_eigenvalues(s: &DenseMatrix) -> Vec<f64> {
    let n = s.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| s.row(i).to_vec()).collect();
    for _ in 0..100 * n * n {
        let (mut p, mut q, mut big) = (0, 0, 0.0f64);
        for i in 0..n {
            for j in i + 1..n {
                if a[i][j].abs() > big {
                    big = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        let scale: f64 = (0..n)
            .map(|i| a[i][i].abs())
            .fold(0.0, f64::max)
            .max(1e-300);
        if big <= 1e-16 * scale {
            break;
        }
        let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        let sn = t * c;
        for k in 0..n {
            let (akp, akq) = (a[k][p], a[k][q]);
            a[k][p] = c * akp - sn * akq;
            a[k][q] = sn * akp + c * akq;
        }
        for k in 0..n {
            let (apk, aqk) = (a[p][k], a[q][k]);
            a[p][k] = c * apk - sn * aqk;
            a[q][k] = sn * apk + c * aqk;
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig
}

/// Singular values as square roots of the eigenvalues of the smaller Gram
/// matrix (`aᵀa` or `a·aᵀ`).
pub fn oracle_singular_values(a: &DenseMatrix) -> Vec<f64> {
    let gram = if a.rows() >= a.cols() {
        a.transpose().matmul(a).unwrap()
    } else {
        a.matmul(&a.transpose()).unwrap()
    };
    symmetric_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}
