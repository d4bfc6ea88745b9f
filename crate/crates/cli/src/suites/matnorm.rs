use rand_chacha::ChaCha8Rng;
use serde_json::json;
use ultracone::matnorm::{verify_permutation_matrices, verify_so, verify_spd, verify_triangular};

use crate::config::RunConfig;
use crate::report::Check;

const TRIANGULAR_DIMS: std::ops::RangeInclusive<usize> = 2..=10;
const SPD_DIMS: std::ops::RangeInclusive<usize> = 2..=8;
const ORTHOGONAL_DIMS: std::ops::RangeInclusive<usize> = 4..=12;

pub fn run(config: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let pairs = config.samples;
    let mut checks = Vec::new();

    for n in TRIANGULAR_DIMS {
        let id = format!("matnorm.triangular.{n}");
        match verify_triangular(n, pairs, rng) {
            Ok(r) => {
                let scope = json!({ "dimension": n, "pairs": pairs, "arithmetic": "exact rational" });
                checks.extend(r.audits().iter().map(|a| Check::from_audit(&id, a, scope.clone())));
            }
            Err(e) => checks.push(Check::errored(id, e)),
        }
    }

    for n in SPD_DIMS {
        let id = format!("matnorm.spd.{n}");
        match verify_spd(n, pairs, rng) {
            Ok(r) => {
                let scope = json!({ "dimension": n, "pairs": pairs, "arithmetic": "exact rational" });
                checks.extend(r.audits().iter().map(|a| Check::from_audit(&id, a, scope.clone())));
            }
            Err(e) => checks.push(Check::errored(id, e)),
        }
    }

    for n in ORTHOGONAL_DIMS {
        let id = format!("matnorm.so.{n}");
        match verify_so(n, pairs, config.tau, rng) {
            Ok(r) => {
                let scope = json!({ "dimension": n, "pairs": pairs, "tau": r.tau });
                checks.extend(r.audits().iter().map(|a| Check::from_audit(&id, a, scope.clone())));
                checks.push(
                    Check::new(
                        format!("{id}.borderline"),
                        "no singular value of g - I within a factor 10 of the threshold",
                        r.borderline == 0,
                    )
                    .constants(json!({ "tau": r.tau, "band": [r.tau / 10.0, r.tau * 10.0] }))
                    .observed(json!({
                        "borderline": r.borderline,
                        "min_retained": r.min_retained,
                        "max_dropped": r.max_dropped,
                    }))
                    .witness((r.borderline > 0).then(|| format!("{} borderline ranks in SO({n})", r.borderline))),
                );
            }
            Err(e) => checks.push(Check::errored(id, e)),
        }
    }

    let n = config.max_degree.min(6);
    let id = format!("matnorm.permutation_matrices.S{n}");
    match verify_permutation_matrices(n) {
        Ok(r) => {
            let scope = json!({ "group": format!("S{n}") });
            for a in [&r.rank_below_support, &r.support_below_triple_rank] {
                checks.push(Check::from_audit(&id, a, scope.clone()));
            }
        }
        Err(e) => checks.push(Check::errored(id, e)),
    }
    checks
}
