use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use ultracone::audit::LemmaAudit;
use ultracone::covering::{brenner_check, commutator_witness, express_as_conjugates, CoveringError};
use ultracone::permgroup::{dense, Permutation};

use crate::config::RunConfig;
use crate::report::Check;

const COVERING_EXPONENT: usize = 4;

fn alternating(n: usize) -> Vec<Permutation> {
    dense::all_even(n).map(|t| Permutation::from_dense(&t)).collect()
}

fn brenner(n: usize) -> Check {
    // A 2-cycle rules out split classes, so one representative per cycle
    // type stands for its whole class.
    let mut classes: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut reps = BTreeMap::new();
    for s in alternating(n) {
        let ty = s.cycle_type();
        *classes.entry(ty.clone()).or_default() += 1;
        reps.entry(ty).or_insert(s);
    }
    let mut audit = LemmaAudit::new("fourth_power", "C_σ^4 = A_n for every admissible σ", 0.0);
    let (mut admissible, mut inadmissible, mut max_exponent) = (0usize, 0usize, 0usize);
    for (ty, rep) in &reps {
        match brenner_check(rep, n) {
            Ok(r) => {
                admissible += classes[ty];
                let ok = r.covered && r.covering_exponent.is_some_and(|j| j <= COVERING_EXPONENT);
                max_exponent = max_exponent.max(r.covering_exponent.unwrap_or(usize::MAX));
                audit.observe_holds(ok, || format!("σ={rep} products={:?}", r.product_sizes));
            }
            Err(CoveringError::HypothesisUnmet(_)) => inadmissible += classes[ty],
            Err(e) => audit.observe_holds(false, || format!("σ={rep}: {e}")),
        }
    }
    let mut check = Check::from_audit(
        &format!("covering.brenner.A{n}"),
        &audit,
        json!({ "degree": n, "exponent": COVERING_EXPONENT }),
    );
    check.observed["admissible_elements"] = json!(admissible);
    check.observed["inadmissible_elements"] = json!(inadmissible);
    check.observed["largest_exponent"] = json!(max_exponent);
    if admissible == 0 {
        check = Check::new(check.id, check.statement, false).witness(Some(format!("no admissible σ in A{n}")));
    }
    check
}

fn ore(n: usize) -> Check {
    let mut audit = LemmaAudit::new("commutator", "g = [b, c] with b, c in A_n", 0.0);
    for g in alternating(n) {
        match commutator_witness(&g, n) {
            Ok((b, c)) => {
                let inside = |p: &Permutation| p.is_even() && p.max_point() as usize <= n;
                let ok = b.commutator(&c) == g && inside(&b) && inside(&c);
                audit.observe_holds(ok, || format!("g={g} b={b} c={c}"));
            }
            Err(e) => audit.observe_holds(false, || format!("g={g}: {e}")),
        }
    }
    Check::from_audit(&format!("covering.ore.A{n}"), &audit, json!({ "degree": n }))
}

fn certificates(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let elements = alternating(n);
    let admissible: Vec<&Permutation> = elements.iter().filter(|g| g.cycle_type().contains(&2)).collect();
    let mut verified = LemmaAudit::new("recomposes", "product of conjugates of g equals h", 0.0);
    let mut factors = LemmaAudit::new("factor_bound", "#factors - (8‖h‖/‖g‖ + 4) <= 0", 0.0);
    for _ in 0..count {
        let (Some(h), Some(g)) = (elements.choose(rng), admissible.choose(rng)) else { break };
        match express_as_conjugates(h, g) {
            Ok(cert) => {
                let witness = || format!("h={h} g={g}");
                verified.observe_holds(cert.verify(), witness);
                factors.observe(cert.factors.len() as f64 - cert.factor_bound(), witness);
            }
            Err(e) => verified.observe_holds(false, || format!("h={h} g={g}: {e}")),
        }
    }
    let scope = json!({ "degree": n, "pairs": count });
    vec![
        Check::from_audit("covering.certificates", &verified, scope.clone()),
        Check::from_audit("covering.certificates", &factors, scope),
    ]
}

pub fn run(config: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let top = config.max_degree.min(7);
    let mut checks: Vec<Check> = (5..=top).map(brenner).collect();
    checks.extend([5, 6].into_iter().filter(|&n| n <= config.max_degree).map(ore));
    if config.certificates > 0 {
        checks.extend(certificates(top, config.certificates, rng));
    }
    checks
}
