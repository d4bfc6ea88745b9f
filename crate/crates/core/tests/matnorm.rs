use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultracone::matnorm::*;

/// Plain Gaussian elimination over the rationals, kept separate from the
/// library's fraction-free routine.
fn oracle_rank(m: &RationalMatrix) -> usize {
    let n = m.dim();
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(p, rank);
        let pivot = a[rank][col].clone();
        for r in rank + 1..n {
            let f = &a[r][col] / &pivot;
            if f.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[rank][col..]) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

#[test]
fn unipotent_example_matches_oracle() {
    // 5×5 unipotent with two superdiagonal entries in column 4
    let mut g = RationalMatrix::identity(5);
    g.set(1, 3, q(2, 3));
    g.set(2, 3, q(-5, 1));
    let value = rank_norm_exact(&g).unwrap().value;
    assert_eq!(value, oracle_rank(&g.minus_identity()));
    assert_eq!(value, 1);
}

#[test]
fn exact_rank_agrees_with_oracle_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
    for n in 1..=8 {
        for _ in 0..60 {
            let (g, h) = random_triangular_pair(n, &mut rng);
            let d = g.sub(&h).unwrap();
            assert_eq!(d.rank(), oracle_rank(&d));
            let (a, b) = random_spd_pair(n, &mut rng);
            let d = a.sub(&b).unwrap();
            assert_eq!(d.rank(), oracle_rank(&d));
        }
    }
}

#[test]
fn triangular_projection_full_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0);
    for n in 2..=10 {
        let report = verify_triangular(n, 1000, &mut rng).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.homomorphism.sample_size, 1000);
        // both bounds are attained somewhere
        assert_eq!(report.rank_drop.max_observed, Some(1.0));
        assert_eq!(report.non_expansive.max_observed, Some(0.0));
    }
}

#[test]
fn spd_projection_full_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5bd);
    for n in 2..=8 {
        let report = verify_spd(n, 1000, &mut rng).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.rank_drop.max_observed, Some(2.0));
    }
}

#[test]
fn so_projection_full_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x50);
    for n in 4..=12 {
        let report = verify_so(n, 1000, DEFAULT_TAU, &mut rng).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.borderline, 0);
        assert!(report.min_retained.unwrap() > 10.0 * DEFAULT_TAU);
        assert!(report.max_dropped.unwrap() < DEFAULT_TAU / 10.0);
    }
}

#[test]
fn random_so9_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let g = random_special_orthogonal(9, &mut rng);
        assert!(verify_rank_parity(&g, DEFAULT_TAU).unwrap());
        // a generic odd-dimensional rotation moves all but one direction
        assert_eq!(rank_norm_numeric(&g, DEFAULT_TAU).value, 8);
    }
}

#[test]
fn permutation_matrix_cross_check_s6() {
    let report = verify_permutation_matrices(6).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.rank_below_support.sample_size, 720);
    // a transposition has rank norm 1 and support 2
    assert_eq!(report.support_below_triple_rank.max_observed, Some(0.0));
}

#[test]
fn spd_rank_inequality_examples() {
    let a = RationalMatrix::from_integers(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]).unwrap();
    let b = RationalMatrix::from_integers(&[vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 5]]).unwrap();
    let (pa, pb) = (spd_project(&a).unwrap(), spd_project(&b).unwrap());
    assert_eq!(pa, pb);
    assert_eq!(a.sub(&b).unwrap().rank(), 2);
    assert_eq!(pa.pad_identity(3).sub(&a).unwrap().rank(), 2);
}

#[test]
fn report_serialises() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let report = verify_so(4, 5, DEFAULT_TAU, &mut rng).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("\"tau\":1e-8"));
    let back: SoReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    let v = rank_norm_numeric(&FloatMatrix::identity(2), DEFAULT_TAU);
    assert!(serde_json::to_string(&v).unwrap().contains("singular-threshold"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_invariant(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = random_triangular_pair(n, &mut rng);
        let (c, _) = random_spd_pair(n, &mut rng);
        let conj = c.mul(&g).unwrap().mul(&c.inverse().unwrap()).unwrap();
        prop_assert_eq!(rank_norm_exact(&conj).unwrap().value, rank_norm_exact(&g).unwrap().value);
    }

    #[test]
    fn rank_norm_bounded_and_zero_only_at_identity(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = random_triangular_pair(n, &mut rng);
        let v = rank_norm_exact(&g).unwrap().value;
        prop_assert!(v <= n);
        prop_assert_eq!(v == 0, g.is_identity());
    }

    #[test]
    fn triangular_inverse_is_exact(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = random_triangular_pair(n, &mut rng);
        prop_assert!(g.mul(&g.inverse().unwrap()).unwrap().is_identity());
    }

    #[test]
    fn rotation_sends_unit_vector_to_last_axis(v in proptest::collection::vec(-1.0f64..1.0, 2..8)) {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let x: Vec<f64> = v.iter().map(|t| t / norm).collect();
        let n = x.len();
        let r = elementary_rotation(&x, n).unwrap();
        r.check_special_orthogonal().unwrap();
        let image = r.as_dmatrix() * nalgebra::DVector::from_column_slice(&x);
        prop_assert!((image[n - 1] - 1.0).abs() < 1e-10);
        prop_assert!(rank_norm_numeric(&r, DEFAULT_TAU).value <= 2);
    }
}

#[test]
fn last_diagonal_shape() {
    let d = last_diagonal(3, BigRational::one() + BigRational::one());
    assert_eq!(d.get(2, 2), &q(2, 1));
    assert_eq!(d.get(0, 0), &q(1, 1));
}
