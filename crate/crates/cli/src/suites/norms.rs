use serde_json::json;
use ultracone::audit::LemmaAudit;
use ultracone::permgroup::{dense, supp_norm, three_cycle_norm, tr_norm, Permutation};
use ultracone::wordnorm::{bfs_norm, check_norm_axioms, FamilyElement, GroupFamily};

use crate::config::RunConfig;
use crate::report::Check;

fn symmetric(n: usize) -> impl Iterator<Item = Permutation> {
    dense::all(n).map(|t| Permutation::from_dense(&t))
}

fn alternating(n: usize) -> impl Iterator<Item = Permutation> {
    dense::all_even(n).map(|t| Permutation::from_dense(&t))
}

pub fn run(config: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();

    let n = config.max_degree.min(7);
    let mut lower = LemmaAudit::new("tr_le_supp", "‖σ‖_tr - ‖σ‖_supp <= 0", 0.0);
    let mut upper = LemmaAudit::new("supp_le_2tr", "‖σ‖_supp - 2‖σ‖_tr <= 0", 0.0);
    for p in symmetric(n) {
        let (t, s) = (tr_norm(&p) as f64, supp_norm(&p) as f64);
        lower.observe(t - s, || p.to_string());
        upper.observe(s - 2.0 * t, || p.to_string());
    }
    let scope = json!({ "group": format!("S{n}") });
    checks.push(Check::from_audit("norms.sandwich", &lower, scope.clone()));
    checks.push(Check::from_audit("norms.sandwich", &upper, scope));

    let n = config.max_degree.min(6);
    let mut lower = LemmaAudit::new("tr_le_2n3", "‖σ‖_tr - 2‖σ‖_3 <= 0", 0.0);
    let mut upper = LemmaAudit::new("n3_le_1.5tr", "‖σ‖_3 - 1.5‖σ‖_tr <= 0", 0.0);
    for p in alternating(n) {
        let t = tr_norm(&p) as f64;
        match three_cycle_norm(&p) {
            Ok(n3) => {
                let n3 = n3 as f64;
                lower.observe(t - 2.0 * n3, || p.to_string());
                upper.observe(n3 - 1.5 * t, || p.to_string());
            }
            Err(e) => lower.observe_holds(false, || format!("{p}: {e}")),
        }
    }
    let scope = json!({ "group": format!("A{n}") });
    checks.push(Check::from_audit("norms.sandwich", &lower, scope.clone()));
    checks.push(Check::from_audit("norms.sandwich", &upper, scope));

    // Breadth-first word norms against the closed forms, and the norm axioms
    // on the resulting tables.
    let cases = [
        (GroupFamily::Symmetric(config.max_degree.min(6)), "transposition", tr_norm as fn(&Permutation) -> usize),
        (GroupFamily::Alternating(5), "3-cycle", |p: &Permutation| three_cycle_norm(p).unwrap_or(usize::MAX)),
    ];
    for (group, generators, closed_form) in cases {
        let id = format!("norms.word_table.{group}");
        let table = match bfs_norm(&group, &group.default_generators()) {
            Ok(t) => t,
            Err(e) => {
                checks.push(Check::errored(id, e));
                continue;
            }
        };
        let mut agree = LemmaAudit::new("closed_form", format!("BFS {generators} norm equals the closed form"), 0.0);
        for (e, v) in table.iter() {
            let FamilyElement::Perm(p) = e else { continue };
            agree.observe_holds(v as usize == closed_form(p), || format!("{p}: bfs {v}"));
        }
        checks.push(Check::from_audit(&id, &agree, json!({ "generators": generators })));
        let axioms = check_norm_axioms(&group, &table);
        checks.push(
            Check::new(format!("{id}.axioms"), "word norm is a conjugation-invariant norm", axioms.passed())
                .observed(serde_json::to_value(&axioms).expect("serialisable"))
                .witness((!axioms.passed()).then(|| format!("{axioms:?}"))),
        );
    }
    checks
}
