use serde_json::json;
use ultracone::audit::LemmaAudit;
use ultracone::intnorm::{
    lower_bound_xn, norm_exact, norm_upper, torsion_probe, x_n, FactorialGenerators, EXACT_PROBE_LIMIT,
};

use crate::config::RunConfig;
use crate::report::Check;

const BASE: u32 = 2;

pub fn run(config: &RunConfig) -> Vec<Check> {
    let depth = config.depth;
    let gens = match FactorialGenerators::new(BASE, depth + 4) {
        Ok(g) => g,
        Err(e) => return vec![Check::errored("intnorm.generators", e)],
    };
    let mut checks = Vec::new();

    let exact_top = depth.min(EXACT_PROBE_LIMIT);
    let mut exact = LemmaAudit::new("exact", "exhaustive ‖x_n‖ = n with a recomposing certificate", 0.0);
    for n in 1..=exact_top {
        let r = norm_exact(&x_n(n, BASE), &gens, n + 1);
        let ok = r.value == Some(n as u64) && r.recomposes() && r.certificate.len() == n;
        exact.observe_holds(ok, || format!("n={n} value={:?} certificate={:?}", r.value, r.certificate));
    }
    checks.push(Check::from_audit("intnorm", &exact, json!({ "base": BASE, "n": format!("1..={exact_top}") })));

    let mut sandwich = LemmaAudit::new("sandwich", "greedy upper bound = lower argument = n", 0.0);
    for n in 1..=depth {
        let x = x_n(n, BASE);
        let upper = norm_upper(&x, &gens).map(|r| (r.upper_bound, r.recomposes()));
        let lower = lower_bound_xn(n, BASE);
        let ok = matches!((&upper, &lower), (Ok((Some(u), true)), Ok(l)) if *u == n as u64 && *l == n as u64);
        sandwich.observe_holds(ok, || format!("n={n} upper={upper:?} lower={lower:?}"));
    }
    checks.push(Check::from_audit("intnorm", &sandwich, json!({ "base": BASE, "n": format!("1..={depth}") })));

    match torsion_probe(1..=depth, BASE) {
        Ok(report) => {
            let mut rows = LemmaAudit::new("torsion", "(‖x_n‖, ‖t x_n‖) = (n, 1)", 0.0);
            for row in &report.rows {
                rows.observe_holds((row.norm_x, row.norm_t_x) == (row.n as u64, 1), || {
                    format!("n={} x={} got ({}, {})", row.n, row.x, row.norm_x, row.norm_t_x)
                });
            }
            let mut check = Check::from_audit("intnorm", &rows, json!({ "base": BASE, "t": BASE }));
            check.observed["rows"] = serde_json::to_value(&report.rows).expect("serialisable");
            checks.push(check);
        }
        Err(e) => checks.push(Check::errored("intnorm.torsion", e)),
    }
    checks
}
