use rand_chacha::ChaCha8Rng;
use serde_json::json;
use ultracone::audit::LemmaAudit;
use ultracone::contractions::{
    displaced_set, sample_pairs, split, verify_cut_lemmas, verify_cut_lemmas_exhaustive, CutLemmaReport,
};
use ultracone::permgroup::{dense, Permutation};

use crate::config::RunConfig;
use crate::report::Check;

/// Cut depth for the exhaustive check.
const EXHAUSTIVE_MAX_K: usize = 8;
const RANDOM_DEGREE: usize = 30;

fn symmetric(n: usize) -> impl Iterator<Item = Permutation> {
    dense::all(n).map(|t| Permutation::from_dense(&t))
}

fn cut_checks(prefix: &str, report: &CutLemmaReport, scope: serde_json::Value) -> Vec<Check> {
    report.audits().iter().map(|a| Check::from_audit(prefix, a, scope.clone())).collect()
}

pub fn run(config: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut checks = Vec::new();

    let n = config.max_degree.min(6);
    let report = verify_cut_lemmas_exhaustive(n, EXHAUSTIVE_MAX_K);
    checks.extend(cut_checks(
        "cutting.exhaustive",
        &report,
        json!({ "group": format!("S{n}"), "max_k": EXHAUSTIVE_MAX_K }),
    ));

    if config.permutation_pairs > 0 {
        let pairs = sample_pairs(rng, RANDOM_DEGREE, config.permutation_pairs);
        let max_k = RANDOM_DEGREE + 1;
        let report = verify_cut_lemmas(&pairs, max_k);
        checks.extend(cut_checks(
            "cutting.random",
            &report,
            json!({ "group": format!("S{RANDOM_DEGREE}"), "max_k": max_k, "pairs": config.permutation_pairs }),
        ));
    }

    let n = config.max_degree.min(7);
    let mut left = LemmaAudit::new("left_support", "‖σ_1‖_supp - k <= 0", 0.0);
    let mut right = LemmaAudit::new("right_support", "‖σ_2‖_supp - (‖σ‖_supp - k + 1) <= 0", 0.0);
    let mut recompose = LemmaAudit::new("recomposes", "σ_1 σ_2 = σ", 0.0);
    for s in symmetric(n) {
        let norm = s.supp_norm();
        for k in 1..=norm {
            match split(&s, k) {
                Ok(pair) => {
                    let witness = || format!("σ={s} k={k} σ_1={} σ_2={}", pair.left, pair.right);
                    left.observe(pair.left.supp_norm() as f64 - k as f64, witness);
                    right.observe(pair.right.supp_norm() as f64 - (norm - k + 1) as f64, witness);
                    recompose.observe_holds(pair.left.compose(&pair.right) == s, witness);
                }
                Err(e) => recompose.observe_holds(false, || format!("σ={s} k={k}: {e}")),
            }
        }
    }
    let scope = json!({ "group": format!("S{n}"), "k": "1..=‖σ‖_supp" });
    for audit in [&left, &right, &recompose] {
        checks.push(Check::from_audit("cutting.split", audit, scope.clone()));
    }

    let n = config.max_degree.min(8);
    let mut disjoint = LemmaAudit::new("disjoint", "σ(D) ∩ D = ∅", 0.0);
    let mut size = LemmaAudit::new("size", "‖σ‖_supp - 3|D| <= 0", 0.0);
    for s in symmetric(n).filter(|s| !s.is_identity()) {
        match displaced_set(&s) {
            Ok(d) => {
                let witness = || format!("σ={s} D={d:?}");
                disjoint.observe_holds(d.iter().all(|&x| !d.contains(&s.apply(x))), witness);
                size.observe(s.supp_norm() as f64 - 3.0 * d.len() as f64, witness);
            }
            Err(e) => disjoint.observe_holds(false, || format!("σ={s}: {e}")),
        }
    }
    let scope = json!({ "group": format!("S{n}") });
    checks.push(Check::from_audit("cutting.displacement", &disjoint, scope.clone()));
    checks.push(Check::from_audit("cutting.displacement", &size, scope));
    checks
}
