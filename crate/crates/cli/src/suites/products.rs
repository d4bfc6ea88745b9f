use serde_json::{json, Value};
use ultracone::products::{
    check_declared, truncated_cyclic_sum, verify_collapse_patterns, verify_integer_shrink, BuiltinFactor,
    BuiltinProjection, ConditionReport, CyclicNorm, DeclaredProperties, FactorProjectionFamily, FreeProduct,
};

use crate::config::RunConfig;
use crate::report::Check;

const WORD_BUDGET: u64 = 6;
const SUM_INDEX: u32 = 20;
const SUM_TERMS: usize = 4;
const SMALL_SUM_INDEX: u32 = 5;
const SHRINK_RADIUS: i64 = 50;

fn condition_checks(prefix: &str, report: &ConditionReport, scope: Value) -> Vec<Check> {
    report
        .audits()
        .iter()
        .map(|a| {
            let mut c = Check::from_audit(prefix, a, scope.clone());
            c.observed["elements"] = json!(report.elements);
            c
        })
        .collect()
}

fn z2_z3() -> FreeProduct<BuiltinFactor> {
    FreeProduct::new([
        (1, BuiltinFactor::cyclic(2, CyclicNorm::Discrete)),
        (2, BuiltinFactor::cyclic(3, CyclicNorm::Discrete)),
    ])
}

pub fn run(config: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let fp = z2_z3();

    let collapse = FactorProjectionFamily::builtin(fp.factors(), BuiltinProjection::Collapse);
    let report = fp.verify_prefix_projection(&collapse, WORD_BUDGET);
    checks.extend(condition_checks(
        "products.z2_z3.collapse",
        &report,
        json!({ "group": "Z/2 * Z/3", "l1_budget": WORD_BUDGET, "L": 1 }),
    ));

    let (report, patterns) = verify_collapse_patterns(SUM_INDEX, SUM_TERMS);
    let mut sum_checks = condition_checks(
        "products.sum20.collapse",
        &report,
        json!({ "group": format!("⊕_{{i<={SUM_INDEX}}} Z/i"), "max_terms": SUM_TERMS, "L": 1 }),
    );
    for c in &mut sum_checks {
        c.observed["support_patterns"] = json!(patterns);
    }
    checks.extend(sum_checks);

    let sum = truncated_cyclic_sum(SMALL_SUM_INDEX);
    let family = FactorProjectionFamily::builtin(sum.factors(), BuiltinProjection::Collapse);
    let carrier = sum.elements_within(SMALL_SUM_INDEX as usize, 1);
    let report = sum.verify_sum_projection(&family, &carrier);
    checks.extend(condition_checks(
        "products.sum5.collapse",
        &report,
        json!({ "group": format!("⊕_{{i<={SMALL_SUM_INDEX}}} Z/i"), "elements": "all", "L": 1 }),
    ));

    let report = verify_integer_shrink(SHRINK_RADIUS);
    checks.extend(condition_checks(
        "products.integers.shrink",
        &report,
        json!({ "window": [-SHRINK_RADIUS, SHRINK_RADIUS], "L": 1 }),
    ));

    // The identity map is non-expansive and moves nothing, so norm decrease
    // must be among the reported failures while (i) and (ii) hold.
    let identity = FactorProjectionFamily::builtin(fp.factors(), BuiltinProjection::Identity);
    let report = fp.verify_prefix_projection(&identity, WORD_BUDGET);
    let failed = report.failed_conditions();
    let detected = failed.iter().any(|c| c == "(iii)") && report.non_expansive.passed() && report.displacement.passed();
    checks.push(
        Check::new(
            "products.negative_control.identity",
            "the identity projection is reported as failing (iii) while meeting (i) and (ii)",
            detected,
        )
        .constants(json!({ "must_fail": "(iii)", "must_hold": ["(i)", "(ii)"], "l1_budget": WORD_BUDGET }))
        .observed(json!({
            "failed_conditions": failed,
            "caught_witness": report.norm_decrease.witness,
        }))
        .witness((!detected).then(|| format!("failed conditions {failed:?}"))),
    );

    if config.broken_projection {
        let mut family = FactorProjectionFamily::new("identity-declared-decreasing");
        for &i in fp.factors().keys() {
            family = family.with(
                i,
                |x: &i64| *x,
                DeclaredProperties {
                    non_expansive: true,
                    displacement_at_most_one: true,
                    norm_decreasing: true,
                    collapses_small: true,
                },
            );
        }
        for (index, report) in check_declared(fp.factors(), &family, WORD_BUDGET) {
            checks.extend(condition_checks(
                &format!("products.registered.factor{index}"),
                &report,
                json!({ "projection": "identity", "declared": "norm-decreasing" }),
            ));
        }
        let report = fp.verify_prefix_projection(&family, WORD_BUDGET);
        checks.extend(condition_checks(
            "products.registered.z2_z3",
            &report,
            json!({ "projection": "identity", "declared": "norm-decreasing", "l1_budget": WORD_BUDGET }),
        ));
    }
    checks
}
