use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultracone::contractions::{
    cut, displaced_set, sample_pairs, split, verify_cut_lemmas, verify_cut_lemmas_exhaustive,
};
use ultracone::permgroup::{dense, Permutation};

fn all_perms(n: usize) -> impl Iterator<Item = Permutation> {
    dense::all(n).map(|t| Permutation::from_dense(&t))
}

#[test]
fn cut_bounds_hold_on_all_of_s5_and_s6() {
    let r5 = verify_cut_lemmas_exhaustive(5, 6);
    assert!(r5.passed(), "{r5:?}");
    let r6 = verify_cut_lemmas_exhaustive(6, 8);
    assert!(r6.passed(), "{r6:?}");
    assert!(r6.equal_support.sample_size > 0);
}

#[test]
fn cut_bounds_hold_on_random_pairs_in_s30() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let pairs = sample_pairs(&mut rng, 30, 100_000);
    let report = verify_cut_lemmas(&pairs, 31);
    assert!(report.passed(), "{}", serde_json::to_string_pretty(&report).unwrap());
}

#[test]
fn split_bounds_on_s7() {
    for s in all_perms(7) {
        let n = s.supp_norm();
        for k in 1..=n {
            let pair = split(&s, k).unwrap();
            assert!(pair.left.supp_norm() <= k, "{s} k={k}");
            assert!(pair.right.supp_norm() <= n - k + 1, "{s} k={k}");
            assert_eq!(pair.left.compose(&pair.right), s);
        }
    }
}

#[test]
fn displaced_sets_on_s8() {
    for s in all_perms(8).filter(|s| !s.is_identity()) {
        let d = displaced_set(&s).unwrap();
        assert!(3 * d.len() >= s.supp_norm(), "{s}");
        assert!(d.iter().all(|&x| !d.contains(&s.apply(x))), "{s}");
    }
}

#[test]
fn cut_norm_within_distance_of_k_on_s6() {
    for s in all_perms(6) {
        let n = s.supp_norm() as i64;
        for k in 0..=8 {
            assert!(cut(&s, k).image.supp_norm() as i64 <= (n - k as i64).abs());
        }
    }
}

fn arb_perm() -> impl Strategy<Value = Permutation> {
    (1usize..=40)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_images(&images).unwrap())
}

proptest! {
    #[test]
    fn cut_image_avoids_erased_points(s in arb_perm(), k in 0usize..45) {
        let r = cut(&s, k);
        let support: Vec<u32> = s.support().collect();
        let expected: Vec<u32> = support.iter().rev().take(k).copied().collect();
        prop_assert_eq!(&r.erased_points, &expected);
        for x in r.image.support() {
            prop_assert!(support.contains(&x) && !expected.contains(&x));
        }
    }

    #[test]
    fn cut_bounds_on_random_pairs(s in arb_perm(), t in arb_perm()) {
        let report = verify_cut_lemmas(&[(s, t)], 42);
        prop_assert!(report.passed());
    }
}
