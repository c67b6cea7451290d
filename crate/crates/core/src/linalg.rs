//! Dense `f64` matrices and a one-sided Jacobi SVD.
//!
//! The SVD works on columns (Hestenes' method): plane rotations are applied
//! to pairs of columns until every pair is numerically orthogonal, the
//! column norms are the singular values and the accumulated rotations are
//! the right singular vectors. Sweeps visit pairs in a fixed cyclic order
//! and no work is spread across threads, so results are bit-reproducible.

use std::fmt::Write as _;
use std::ops::Index;

use crate::error::{Error, Result, Shape};

/// Convergence threshold on `|w_p·w_q| / (‖w_p‖·‖w_q‖)` for every column pair.
pub const CONVERGENCE_TOL: f64 = 1e-12;

/// Upper bound on cyclic sweeps before [`svd`] gives up.
pub const MAX_SWEEPS: usize = 60;

/// Row-major matrix with at least one row and one column and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::InvalidDimensions {
                rows,
                cols,
                len: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: i / cols,
                col: i % cols,
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::InvalidDimensions {
                    rows: rows.len(),
                    cols,
                    len: values.len() + r.len(),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, values)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity of size 0");
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            values,
        }
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut values = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            values[i * n + i] = *d;
        }
        Self::new(n, n, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                values.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            values,
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: Shape(self.rows, self.cols),
                right: Shape(other.rows, other.cols),
            });
        }
        let mut values = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                for j in 0..other.cols {
                    values[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: other.cols,
            values,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let cols = columns.len();
        let mut values = vec![0.0; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                values[i * cols + j] = *x;
            }
        }
        Self { rows, cols, values }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (row, col): (usize, usize)) -> &f64 {
        &self.values[row * self.cols + col]
    }
}

/// Thin SVD `a = u·diag(sigma)·vᵀ`.
///
/// `u` is `m×r` and `v` is `n×r`, both with orthonormal columns; `sigma` is
/// sorted in descending order. A full decomposition has `r = min(m, n)`,
/// zero singular values included; [`truncate`] keeps the leading `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    u: DenseMatrix,
    sigma: Vec<f64>,
    v: DenseMatrix,
}

impl SvdFactors {
    /// Assembles factors after checking that the shapes agree and that
    /// `sigma` is nonnegative and descending. Orthonormality is not checked.
    pub fn from_parts(u: DenseMatrix, sigma: Vec<f64>, v: DenseMatrix) -> Result<Self> {
        if u.cols() != sigma.len() || v.cols() != sigma.len() {
            return Err(Error::ShapeMismatch {
                left: Shape(u.rows(), u.cols()),
                right: Shape(v.rows(), v.cols()),
            });
        }
        if sigma.iter().any(|s| *s < 0.0) || sigma.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse {
                source_name: "factors",
                line: 0,
                message: "singular values must be nonnegative and descending".into(),
            });
        }
        Ok(Self { u, sigma, v })
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn v(&self) -> &DenseMatrix {
        &self.v
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Shape of the decomposed matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }

    /// Writes `U`, `sigma` and `V` blocks in the tab-separated text layout
    /// used for count matrices. Values use the shortest representation that
    /// parses back to the same `f64`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let block = |out: &mut String, name: &str, m: &DenseMatrix| {
            writeln!(out, "{name}\t{}\t{}", m.rows(), m.cols()).unwrap();
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:?}")).collect();
                writeln!(out, "{}", row.join("\t")).unwrap();
            }
        };
        block(&mut out, "U", &self.u);
        let sigma: Vec<String> = self.sigma.iter().map(|x| format!("{x:?}")).collect();
        writeln!(out, "sigma\t{}", self.sigma.len()).unwrap();
        writeln!(out, "{}", sigma.join("\t")).unwrap();
        block(&mut out, "V", &self.v);
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().peekable();
        let bad = |line: usize, message: &str| Error::Parse {
            source_name: "factors",
            line: line + 1,
            message: message.to_string(),
        };
        let mut next = |expect: &str| -> Result<(usize, Vec<String>)> {
            let (i, l) = lines
                .next()
                .ok_or_else(|| bad(0, &format!("missing {expect}")))?;
            Ok((i, l.split('\t').map(str::to_string).collect()))
        };
        let floats = |i: usize, fields: &[String]| -> Result<Vec<f64>> {
            fields
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| bad(i, "invalid number")))
                .collect()
        };
        let dims = |i: usize, fields: &[String], name: &str| -> Result<(usize, usize)> {
            match fields {
                [n, r, c] if n == name => Ok((
                    r.parse().map_err(|_| bad(i, "invalid row count"))?,
                    c.parse().map_err(|_| bad(i, "invalid column count"))?,
                )),
                _ => Err(bad(i, &format!("expected `{name}<TAB>rows<TAB>cols`"))),
            }
        };

        let mut blocks = Vec::new();
        let mut sigma = Vec::new();
        for name in ["U", "sigma", "V"] {
            let (i, header) = next(name)?;
            if name == "sigma" {
                if header.first().map(String::as_str) != Some("sigma") {
                    return Err(bad(i, "expected `sigma<TAB>count`"));
                }
                let (i, row) = next("sigma values")?;
                sigma = if row.len() == 1 && row[0].is_empty() {
                    Vec::new()
                } else {
                    floats(i, &row)?
                };
                continue;
            }
            let (rows, cols) = dims(i, &header, name)?;
            let mut values = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let (i, row) = next("matrix row")?;
                if row.len() != cols {
                    return Err(bad(i, "wrong number of columns"));
                }
                values.extend(floats(i, &row)?);
            }
            blocks.push(DenseMatrix::new(rows, cols, values)?);
        }
        let v = blocks.pop().unwrap();
        let u = blocks.pop().unwrap();
        Self::from_parts(u, sigma, v)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn rotate(columns: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = columns.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Orthonormalizes against `basis` the first standard basis vector that is
/// not already (numerically) in its span.
fn complete_basis(dim: usize, basis: &[Vec<f64>]) -> Vec<f64> {
    for e in 0..dim {
        let mut x = vec![0.0; dim];
        x[e] = 1.0;
        // Two Gram-Schmidt passes.
        for _ in 0..2 {
            for b in basis {
                let proj = dot(&x, b);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= proj * bi;
                }
            }
        }
        let n = norm(&x);
        if n > 0.5 {
            return x.into_iter().map(|xi| xi / n).collect();
        }
    }
    unreachable!("basis of dimension {dim} is already complete")
}

/// Thin SVD of `a` by cyclic one-sided Jacobi rotations.
///
/// Sign convention: the largest-magnitude entry of every left singular
/// vector (lowest index on ties) is nonnegative; the paired right vector is
/// flipped with it.
pub fn svd(a: &DenseMatrix) -> Result<SvdFactors> {
    let transposed = a.rows() < a.cols();
    let work = if transposed { a.transpose() } else { a.clone() };
    let (m, n) = work.shape();

    let mut w: Vec<Vec<f64>> = (0..n).map(|j| work.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    // Columns below this squared norm are roundoff; their direction is noise
    // and no rotation can make them orthogonal to the rest.
    let negligible = (f64::EPSILON * a.frobenius_norm()).powi(2);
    let mut residual = 0.0;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        residual = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                let off = gamma.abs() / (alpha.sqrt() * beta.sqrt());
                residual = residual.max(off);
                if off <= CONVERGENCE_TOL {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        converged = residual <= CONVERGENCE_TOL;
    }
    if !converged {
        return Err(Error::NoConvergence {
            shape: Shape(a.rows(), a.cols()),
            sweeps: MAX_SWEEPS,
            residual,
        });
    }

    let norms: Vec<f64> = w.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    // Left vectors of columns this small are rebuilt from the standard basis.
    // The floor is at least `negligible.sqrt()`, so skipped columns land here.
    let floor = norms[order[0]] * f64::EPSILON * m.max(n) as f64;
    let mut left: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut deferred = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        right.push(v[j].clone());
        if norms[j] > floor && norms[j] > 0.0 {
            left.push(w[j].iter().map(|x| x / norms[j]).collect());
        } else {
            left.push(Vec::new());
            deferred.push(slot);
        }
    }
    for slot in deferred {
        let basis: Vec<Vec<f64>> = left.iter().filter(|c| !c.is_empty()).cloned().collect();
        left[slot] = complete_basis(m, &basis);
    }

    let (mut left, mut right) = if transposed {
        (right, left)
    } else {
        (left, right)
    };
    for (lu, rv) in left.iter_mut().zip(right.iter_mut()) {
        let mut pivot = 0;
        for (i, x) in lu.iter().enumerate() {
            if x.abs() > lu[pivot].abs() {
                pivot = i;
            }
        }
        if lu[pivot] < 0.0 {
            lu.iter_mut().for_each(|x| *x = -*x);
            rv.iter_mut().for_each(|x| *x = -*x);
        }
    }

    Ok(SvdFactors {
        u: DenseMatrix::from_columns(a.rows(), &left),
        sigma,
        v: DenseMatrix::from_columns(a.cols(), &right),
    })
}

/// Keeps the leading `k` singular triplets.
pub fn truncate(factors: &SvdFactors, k: usize) -> Result<SvdFactors> {
    let r = factors.rank();
    if k == 0 || k > r {
        return Err(Error::RankOutOfRange { k, max: r });
    }
    let take = |m: &DenseMatrix| {
        let columns: Vec<Vec<f64>> = (0..k).map(|j| m.column(j)).collect();
        DenseMatrix::from_columns(m.rows(), &columns)
    };
    Ok(SvdFactors {
        u: take(&factors.u),
        sigma: factors.sigma[..k].to_vec(),
        v: take(&factors.v),
    })
}

/// `u·diag(sigma)·vᵀ`.
pub fn reconstruct(factors: &SvdFactors) -> DenseMatrix {
    let (m, n) = factors.shape();
    let mut values = vec![0.0; m * n];
    for i in 0..m {
        let ui = factors.u.row(i);
        for j in 0..n {
            let vj = factors.v.row(j);
            let mut acc = 0.0;
            for l in 0..factors.rank() {
                acc += ui[l] * factors.sigma[l] * vj[l];
            }
            values[i * n + j] = acc;
        }
    }
    DenseMatrix {
        rows: m,
        cols: n,
        values,
    }
}

pub fn frobenius_distance(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: Shape(a.rows, a.cols),
            right: Shape(b.rows, b.cols),
        });
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_singular_values() {
        let f = svd(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(f.sigma(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_singular_values() {
        let a = DenseMatrix::from_rows(&[[3.0, 0.0], [0.0, 1.0]]).unwrap();
        let f = svd(&a).unwrap();
        assert_eq!(f.sigma(), &[3.0, 1.0]);
    }

    #[test]
    fn unsorted_diagonal_is_sorted() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, -4.0]]).unwrap();
        let f = svd(&a).unwrap();
        assert_eq!(f.sigma(), &[4.0, 1.0]);
        assert!(max_abs_diff(&reconstruct(&f), &a) < 1e-15);
        // u column of the -4 entry is e2 (positive pivot), so v carries the sign.
        assert_eq!(f.u().get(1, 0), 1.0);
        assert_eq!(f.v().get(1, 0), -1.0);
    }

    #[test]
    fn truncate_then_reconstruct_diagonal() {
        let a = DenseMatrix::from_rows(&[[3.0, 0.0], [0.0, 1.0]]).unwrap();
        let f = svd(&a).unwrap();
        let t = truncate(&f, 1).unwrap();
        assert_eq!(t.sigma(), &[3.0]);
        let expected = DenseMatrix::from_rows(&[[3.0, 0.0], [0.0, 0.0]]).unwrap();
        assert_eq!(reconstruct(&t), expected);
        assert_eq!(truncate(&f, 2).unwrap(), f);
    }

    #[test]
    fn truncate_out_of_range() {
        let f = svd(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(
            truncate(&f, 0).unwrap_err(),
            Error::RankOutOfRange { k: 0, max: 2 }
        );
        assert_eq!(
            truncate(&f, 3).unwrap_err(),
            Error::RankOutOfRange { k: 3, max: 2 }
        );
    }

    #[test]
    fn zero_matrix_keeps_full_rank() {
        let a = DenseMatrix::new(3, 2, vec![0.0; 6]).unwrap();
        let f = svd(&a).unwrap();
        assert_eq!(f.sigma(), &[0.0, 0.0]);
        let utu = f.u().transpose().matmul(f.u()).unwrap();
        assert!(max_abs_diff(&utu, &DenseMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn rank_deficient_wide_matrix() {
        // Rank 1, wider than tall.
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]).unwrap();
        let f = svd(&a).unwrap();
        assert_eq!(f.rank(), 2);
        assert!(f.sigma()[1] < 1e-14);
        assert!((f.sigma()[0] - 70f64.sqrt()).abs() < 1e-13);
        let utu = f.u().transpose().matmul(f.u()).unwrap();
        let vtv = f.v().transpose().matmul(f.v()).unwrap();
        assert!(max_abs_diff(&utu, &DenseMatrix::identity(2)) < 1e-12);
        assert!(max_abs_diff(&vtv, &DenseMatrix::identity(2)) < 1e-12);
        assert!(frobenius_distance(&reconstruct(&f), &a).unwrap() < 1e-13);
    }

    #[test]
    fn frobenius_basics() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap();
        let z = DenseMatrix::new(2, 2, vec![0.0; 4]).unwrap();
        assert_eq!(frobenius_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(frobenius_distance(&a, &z).unwrap(), 1.0);
        let b = DenseMatrix::new(1, 4, vec![0.0; 4]).unwrap();
        assert!(matches!(
            frobenius_distance(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(DenseMatrix::new(0, 3, vec![]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
        assert_eq!(
            DenseMatrix::new(1, 2, vec![1.0, f64::NAN]).unwrap_err(),
            Error::NonFinite { row: 0, col: 1 }
        );
    }

    #[test]
    fn factors_text_roundtrip() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.5]]).unwrap();
        let f = svd(&a).unwrap();
        let back = SvdFactors::parse_tsv(&f.to_tsv()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn one_by_one() {
        let a = DenseMatrix::from_rows(&[[-5.0]]).unwrap();
        let f = svd(&a).unwrap();
        assert_eq!(f.sigma(), &[5.0]);
        assert_eq!(f.u().get(0, 0), 1.0);
        assert_eq!(f.v().get(0, 0), -1.0);
    }
}
