use num_rational::Ratio;
use ultracone::permgroup::{supp_norm, three_cycle_norm, tr_norm, Permutation};
use ultracone::wordnorm::{
    audit_domination, bfs_norm, check_norm_axioms, conjugacy_closure, FamilyElement, FiniteGroupOracle, GroupFamily,
    NormTable,
};

fn perm_of(e: &FamilyElement) -> &Permutation {
    match e {
        FamilyElement::Perm(p) => p,
        _ => unreachable!(),
    }
}

#[test]
fn transposition_bfs_matches_closed_form() {
    for n in 1..=7 {
        let g = GroupFamily::Symmetric(n);
        let table = bfs_norm(&g, &g.default_generators()).unwrap();
        for (e, v) in table.iter() {
            assert_eq!(v as usize, tr_norm(perm_of(e)), "{e}");
        }
    }
}

#[test]
fn three_cycle_bfs_matches_permgroup() {
    for n in [5, 6] {
        let g = GroupFamily::Alternating(n);
        let table = bfs_norm(&g, &g.default_generators()).unwrap();
        for (e, v) in table.iter() {
            assert_eq!(v as usize, three_cycle_norm(perm_of(e)).unwrap(), "{e}");
        }
    }
}

#[test]
fn tables_are_conjugation_invariant_norms() {
    for family in ["S4", "A5", "Z6", "S3 x Z4", "A4 x Z2"] {
        let g: GroupFamily = family.parse().unwrap();
        let table = bfs_norm(&g, &g.default_generators()).unwrap();
        let report = check_norm_axioms(&g, &table);
        assert!(report.passed(), "{family}: {report:?}");
    }
}

#[test]
fn sandwich_on_s7_and_a6() {
    let s7 = GroupFamily::Symmetric(7);
    for e in s7.elements() {
        let p = perm_of(&e);
        let (t, s) = (tr_norm(p), supp_norm(p));
        assert!(t <= s && s <= 2 * t, "{p}");
    }
    let a6 = GroupFamily::Alternating(6);
    for e in a6.elements() {
        let p = perm_of(&e);
        let (t, n3) = (tr_norm(p), three_cycle_norm(p).unwrap());
        assert!(t <= 2 * n3 && 2 * n3 <= 3 * t, "{p}");
    }
}

#[test]
fn domination_constants_on_s5_and_a5() {
    let s5 = GroupFamily::Symmetric(5);
    let tr = bfs_norm(&s5, &s5.default_generators()).unwrap();
    let supp = NormTable::from_fn(s5.elements(), vec![], |e| supp_norm(perm_of(e)) as u32);
    assert_eq!(audit_domination(&tr, &supp).unwrap().constant, Ratio::from_integer(2));
    assert_eq!(audit_domination(&supp, &tr).unwrap().constant, Ratio::from_integer(1) - Ratio::new(1, 5));

    let a5 = GroupFamily::Alternating(5);
    let n3 = bfs_norm(&a5, &a5.default_generators()).unwrap();
    let tr_a5 = NormTable::from_fn(a5.elements(), vec![], |e| tr_norm(perm_of(e)) as u32);
    let up = audit_domination(&n3, &tr_a5).unwrap();
    let down = audit_domination(&tr_a5, &n3).unwrap();
    assert!(up.constant <= Ratio::from_integer(2));
    assert!(down.constant <= Ratio::new(3, 2));
    assert!(up.witness.is_some() && down.witness.is_some());
}

#[test]
fn any_two_conjugation_closed_generating_sets_are_equivalent() {
    let s5 = GroupFamily::Symmetric(5);
    let seeds = ["(1 2)", "(1 2 3 4 5)", "(1 2 3 4)", "(1 2)(3 4 5)"];
    let tables: Vec<_> = seeds
        .iter()
        .filter_map(|s| {
            let closure = conjugacy_closure(&s5, &[FamilyElement::Perm(s.parse().unwrap())]);
            bfs_norm(&s5, &closure).ok()
        })
        .collect();
    // 5-cycles only generate A_5
    assert_eq!(tables.len(), 3);
    for a in &tables {
        for b in &tables {
            let c = audit_domination(a, b).unwrap().constant;
            assert!(c > Ratio::from_integer(0) && c <= Ratio::from_integer(b.diameter() as u64));
        }
    }
}
