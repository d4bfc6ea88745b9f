use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ultracone::covering::{
    brenner_check, commutator_witness, express_as_conjugates, orbit_count, ConjugacyClass, CoveringError,
};
use ultracone::permgroup::{dense, Permutation};

fn alternating(n: usize) -> impl Iterator<Item = Permutation> {
    dense::all_even(n).map(|t| Permutation::from_dense(&t))
}

fn meets_hypotheses(s: &Permutation, n: usize) -> bool {
    s.cycle_type().contains(&2) && n as i64 - 2 * orbit_count(s, n).unwrap() as i64 >= -1
}

#[test]
fn fourth_power_of_admissible_classes_is_everything() {
    for n in 5..=7 {
        let mut by_type: BTreeMap<Vec<usize>, ConjugacyClass> = BTreeMap::new();
        let mut checked = 0;
        for s in alternating(n).filter(|s| meets_hypotheses(s, n)) {
            let class = by_type.entry(s.cycle_type()).or_insert_with(|| {
                let report = brenner_check(&s, n).unwrap();
                assert!(report.covered, "{report:?}");
                assert!(report.covering_exponent.unwrap() <= 4);
                ConjugacyClass::materialize(&s, n).unwrap()
            });
            assert!(class.contains(&s));
            checked += 1;
        }
        assert!(checked > 0 && !by_type.is_empty());
    }
}

#[test]
fn inadmissible_elements_are_reported() {
    for n in 5..=7 {
        for s in alternating(n).filter(|s| !meets_hypotheses(s, n)) {
            assert!(matches!(brenner_check(&s, n), Err(CoveringError::HypothesisUnmet(_))), "{s}");
        }
    }
}

#[test]
fn every_element_of_a5_and_a6_is_a_commutator() {
    for n in [5, 6] {
        for g in alternating(n) {
            let (b, c) = commutator_witness(&g, n).unwrap();
            assert_eq!(b.commutator(&c), g);
            assert!(b.is_even() && c.is_even());
            assert!(b.max_point() as usize <= n && c.max_point() as usize <= n);
        }
    }
}

#[test]
fn commutators_in_a7_by_cycle_type() {
    let mut seen = std::collections::BTreeSet::new();
    for g in alternating(7) {
        if seen.insert(g.cycle_type()) {
            let (b, c) = commutator_witness(&g, 7).unwrap();
            assert_eq!(b.commutator(&c), g);
        }
    }
}

#[test]
fn classes_are_closed_under_conjugation() {
    for n in 3..=7 {
        let gens: Vec<Permutation> = (1..n as u32).map(|i| Permutation::transposition(i, i + 1).unwrap()).collect();
        for rep in ["(1 2)", "(1 2 3)", "(1 2)(3 4)"] {
            let rep: Permutation = rep.parse().unwrap();
            if rep.max_point() as usize > n {
                continue;
            }
            let class = ConjugacyClass::materialize(&rep, n).unwrap();
            for m in &class.members {
                assert_eq!(m.cycle_type(), rep.cycle_type());
                for t in &gens {
                    assert!(class.contains(&m.conjugate(t)));
                }
            }
        }
    }
}

#[test]
fn worked_certificate_in_a7() {
    let h: Permutation = "(1 2 3 4 5 6)".parse().unwrap();
    let h = h.compose(&"(6 7)".parse().unwrap());
    assert!(h.is_even());
    let g: Permutation = "(1 2)(3 4)".parse().unwrap();
    let cert = express_as_conjugates(&h, &g).unwrap();
    assert!(cert.verify());
    assert!(cert.factors.len() as f64 <= 8.0 * h.supp_norm() as f64 / 4.0 + 4.0);
}

#[test]
fn random_certificates_in_a7() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let elements: Vec<Permutation> = alternating(7).collect();
    let admissible: Vec<&Permutation> = elements.iter().filter(|g| g.cycle_type().contains(&2)).collect();
    for _ in 0..100 {
        let h = elements.choose(&mut rng).unwrap();
        let g = admissible.choose(&mut rng).unwrap();
        let cert = express_as_conjugates(h, g).unwrap();
        assert!(cert.modification.is_identity());
        assert!(cert.verify(), "{cert:?}");
    }
}

fn arb_even(max_degree: u32) -> impl Strategy<Value = Permutation> {
    (2..=max_degree)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<u32>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_images(&images).unwrap())
        .prop_filter("even", |p| p.is_even())
}

/// Non-trivial, and still within eight points after adding transpositions.
fn fits_window(g: &Permutation) -> bool {
    let extra = if g.cycle_type().contains(&2) { 0 } else { 4 };
    !g.is_identity() && g.supp_norm() + extra <= 8
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn certificates_grow_linearly(h in arb_even(24), g in arb_even(8).prop_filter("window fits", fits_window)) {
        let cert = express_as_conjugates(&h, &g).unwrap();
        prop_assert!(cert.verify());
    }
}
