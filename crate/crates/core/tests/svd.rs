mod support;

use lsa_core::{frobenius_distance, reconstruct, svd, truncate, DenseMatrix, SvdFactors};
use proptest::prelude::*;
use rand::Rng;
use support::*;

fn rel_error(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    frobenius_distance(a, b).unwrap() / a.frobenius_norm()
}

#[test]
fn example_matrix_full_rank_reconstruction() {
    let a = example_matrix().to_dense().unwrap();
    let f = svd(&a).unwrap();
    assert_eq!(f.rank(), 9);
    assert!(rel_error(&a, &reconstruct(&f)) <= 1e-10);
    assert!(max_abs_identity_error(f.u()) <= 1e-10);
    assert!(max_abs_identity_error(f.v()) <= 1e-10);
}

#[test]
fn example_singular_values_match_oracle() {
    let a = example_matrix().to_dense().unwrap();
    let f = svd(&a).unwrap();
    for (s, o) in f.sigma().iter().zip(oracle_singular_values(&a)) {
        assert!((s - o).abs() <= 1e-8, "{s} vs {o}");
    }
}

#[test]
fn random_12x9_singular_values_match_oracle() {
    let mut rng = rng(7);
    for _ in 0..20 {
        let a = random_matrix(&mut rng, 12, 9);
        let f = svd(&a).unwrap();
        let oracle = oracle_singular_values(&a);
        assert_eq!(f.rank(), oracle.len());
        for (s, o) in f.sigma().iter().zip(&oracle) {
            assert!((s - o).abs() <= 1e-8, "{s} vs {o}");
        }
    }
}

#[test]
fn eckart_young_and_monotone_error() {
    let mut rng = rng(11);
    for _ in 0..20 {
        let a = random_matrix(&mut rng, 12, 9);
        let f = svd(&a).unwrap();
        let norm2 = a.frobenius_norm().powi(2);
        let mut last = f64::INFINITY;
        for k in 1..=f.rank() {
            let d = frobenius_distance(&a, &reconstruct(&truncate(&f, k).unwrap())).unwrap();
            let tail: f64 = f.sigma()[k..].iter().map(|s| s * s).sum();
            assert!(
                (d * d - tail).abs() <= 1e-9 * norm2,
                "k={k}: {} vs {tail}",
                d * d
            );
            assert!(d <= last + 1e-12);
            last = d;
        }
    }
}

#[test]
fn deterministic_bit_identical() {
    let mut rng = rng(3);
    let a = random_matrix(&mut rng, 17, 23);
    let f1 = svd(&a).unwrap();
    let f2 = svd(&a.clone()).unwrap();
    let bits = |f: &SvdFactors| -> Vec<u64> {
        f.u()
            .values()
            .iter()
            .chain(f.sigma())
            .chain(f.v().values())
            .map(|x| x.to_bits())
            .collect()
    };
    assert_eq!(bits(&f1), bits(&f2));
}

#[test]
fn sign_convention_holds() {
    let mut rng = rng(5);
    for (m, n) in [(12, 9), (4, 10), (7, 7)] {
        let f = svd(&random_matrix(&mut rng, m, n)).unwrap();
        for j in 0..f.rank() {
            let col = f.u().column(j);
            let mut pivot = 0;
            for i in 0..col.len() {
                if col[i].abs() > col[pivot].abs() {
                    pivot = i;
                }
            }
            assert!(col[pivot] >= 0.0);
        }
    }
}

#[test]
fn sign_flip_leaves_reconstruction_unchanged() {
    let a = example_matrix().to_dense().unwrap();
    let f = svd(&a).unwrap();
    let (m, n, r) = (f.u().rows(), f.v().rows(), f.rank());
    for flip in [0, 3, 8] {
        let negate = |mat: &DenseMatrix, rows: usize| {
            let mut v = mat.values().to_vec();
            for i in 0..rows {
                v[i * r + flip] = -v[i * r + flip];
            }
            DenseMatrix::new(rows, r, v).unwrap()
        };
        let flipped =
            SvdFactors::from_parts(negate(f.u(), m), f.sigma().to_vec(), negate(f.v(), n)).unwrap();
        assert_eq!(reconstruct(&flipped), reconstruct(&f));
    }
}

#[test]
fn rank_deficient_inputs_keep_trailing_zeros() {
    let mut rng = rng(19);
    for _ in 0..10 {
        // Rank 3 product of a 10x3 and 3x8 matrix.
        let left = random_matrix(&mut rng, 10, 3);
        let right = random_matrix(&mut rng, 3, 8);
        let a = left.matmul(&right).unwrap();
        let f = svd(&a).unwrap();
        assert_eq!(f.rank(), 8);
        assert!(f.sigma()[3..].iter().all(|s| *s <= 1e-12 * f.sigma()[0]));
        assert!(max_abs_identity_error(f.u()) <= 1e-10);
        assert!(max_abs_identity_error(f.v()) <= 1e-10);
        assert!(rel_error(&a, &reconstruct(&f)) <= 1e-10);
        // Compare squared values: the Gram oracle cannot resolve tiny sigmas.
        let oracle = oracle_singular_values(&a);
        for (s, o) in f.sigma().iter().zip(&oracle) {
            assert!((s * s - o * o).abs() <= 1e-10 * f.sigma()[0].powi(2));
        }
    }
}

#[test]
fn integer_count_like_matrices() {
    let mut rng = rng(23);
    for _ in 0..20 {
        let (m, n) = (rng.gen_range(1..15), rng.gen_range(1..15));
        let values = (0..m * n)
            .map(|_| f64::from(rng.gen_range(0..3u8) * rng.gen_range(0..2u8)))
            .collect();
        let a = DenseMatrix::new(m, n, values).unwrap();
        let f = svd(&a).unwrap();
        assert!(max_abs_identity_error(f.u()) <= 1e-10);
        assert!(max_abs_identity_error(f.v()) <= 1e-10);
        assert!(
            frobenius_distance(&a, &reconstruct(&f)).unwrap()
                <= 1e-10 * a.frobenius_norm().max(1.0)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn svd_invariants(m in 1usize..16, n in 1usize..16, seed in any::<u64>()) {
        let a = random_matrix(&mut support::rng(seed), m, n);
        let f = svd(&a).unwrap();
        prop_assert_eq!(f.rank(), m.min(n));
        prop_assert!(f.sigma().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(f.sigma().iter().all(|s| *s >= 0.0));
        prop_assert!(max_abs_identity_error(f.u()) <= 1e-10);
        prop_assert!(max_abs_identity_error(f.v()) <= 1e-10);
        prop_assert!(rel_error(&a, &reconstruct(&f)) <= 1e-10);
        let k = 1 + (seed as usize) % f.rank();
        let t = truncate(&f, k).unwrap();
        prop_assert_eq!(t.sigma(), &f.sigma()[..k]);
        prop_assert_eq!(reconstruct(&t).shape(), (m, n));
    }
}
