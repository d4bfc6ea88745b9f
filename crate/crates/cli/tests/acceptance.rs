//! Full acceptance run: every criterion from the default configuration,
//! one PASS/FAIL line each. Runs without the libtest harness so the lines
//! are always shown.

use std::process::ExitCode;
use std::time::Instant;

use serde_json::Value;
use ultracone_cli::{run_suite, Check, Report, RunConfig};

fn sample_size(c: &Check) -> u64 {
    c.observed["sample_size"].as_u64().unwrap_or(0)
}

fn with_prefix<'a>(report: &'a Report, prefix: &str) -> Vec<&'a Check> {
    report.checks().filter(|c| c.id.starts_with(prefix)).collect()
}

/// All checks under `prefix` pass, there are `count` of them and each saw
/// `samples` samples (when given).
fn group(report: &Report, prefix: &str, count: usize, samples: Option<u64>) -> Result<(), String> {
    let checks = with_prefix(report, prefix);
    if checks.len() != count {
        return Err(format!("{prefix}: expected {count} checks, found {}", checks.len()));
    }
    for c in checks {
        if !c.passed() {
            return Err(format!("{} failed: {}", c.id, c.witness.as_deref().unwrap_or("-")));
        }
        if let Some(n) = samples {
            if sample_size(c) != n {
                return Err(format!("{}: {} samples, expected {n}", c.id, sample_size(c)));
            }
        }
    }
    Ok(())
}

fn constant(report: &Report, id: &str, key: &str, expected: Value) -> Result<(), String> {
    let c = report.check(id).ok_or_else(|| format!("missing {id}"))?;
    if c.constants[key] != expected {
        return Err(format!("{id}: {key} = {}, expected {expected}", c.constants[key]));
    }
    Ok(())
}

fn all(results: impl IntoIterator<Item = Result<(), String>>) -> Result<(), String> {
    results.into_iter().collect::<Result<Vec<()>, String>>().map(|_| ())
}

fn criteria(report: &Report, rerun_identical: Result<(), String>) -> Vec<(&'static str, Result<(), String>)> {
    let s7 = "norms.sandwich.tr_le_supp";
    vec![
        (
            "norm sandwich on S7 and A6",
            all([
                group(report, "norms.sandwich.tr_le_supp", 1, Some(5040)),
                group(report, "norms.sandwich.supp_le_2tr", 1, Some(5040)),
                group(report, "norms.sandwich.tr_le_2n3", 1, Some(360)),
                group(report, "norms.sandwich.n3_le_1.5tr", 1, Some(360)),
                constant(report, s7, "group", "S7".into()),
            ]),
        ),
        (
            "cutting bounds, exhaustive S6 with k <= 8 and 1e5 random S30 pairs",
            all([
                group(report, "cutting.exhaustive.", 4, None),
                constant(report, "cutting.exhaustive.cutting.lipschitz", "group", "S6".into()),
                constant(report, "cutting.exhaustive.cutting.lipschitz", "max_k", 8.into()),
                group(report, "cutting.random.", 4, None),
                constant(report, "cutting.random.cutting.lipschitz", "pairs", 100_000.into()),
            ]),
        ),
        (
            "splitting on S7",
            all([
                group(report, "cutting.split.", 3, None),
                constant(report, "cutting.split.recomposes", "group", "S7".into()),
            ]),
        ),
        ("displaced sets on S8", group(report, "cutting.displacement.", 2, Some(40_319))),
        (
            "fourth power of admissible classes covers A5, A6, A7",
            all(["covering.brenner.A5", "covering.brenner.A6", "covering.brenner.A7"]
                .map(|p| group(report, p, 1, None))),
        ),
        (
            "commutator witnesses on A5 and A6",
            all([group(report, "covering.ore.A5", 1, Some(60)), group(report, "covering.ore.A6", 1, Some(360))]),
        ),
        (
            "100 conjugate-product certificates in A7",
            all([
                group(report, "covering.certificates.", 2, Some(100)),
                constant(report, "covering.certificates.factor_bound", "degree", 7.into()),
            ]),
        ),
        (
            "factorial-generator norms for n <= 8",
            all([
                group(report, "intnorm.exact", 1, Some(5)),
                group(report, "intnorm.sandwich", 1, Some(8)),
                group(report, "intnorm.torsion", 1, Some(8)),
            ]),
        ),
        (
            "matrix projections: B_n n<=10, SPD n<=8, SO(n) 4..12, 1e3 pairs each",
            all([
                group(report, "matnorm.triangular.", 27, Some(1000)),
                group(report, "matnorm.spd.", 21, Some(1000)),
                group(report, "matnorm.so.", 36, None),
                all(with_prefix(report, "matnorm.so.").into_iter().filter(|c| !c.id.ends_with("borderline")).map(
                    |c| match c.constants["pairs"].as_u64() {
                        Some(1000) if sample_size(c) >= 1000 => Ok(()),
                        n => Err(format!("{}: {n:?} pairs, {} samples", c.id, sample_size(c))),
                    },
                )),
            ]),
        ),
        (
            "circle correspondence",
            all([
                group(report, "coneprobe.circle.", 4, None),
                constant(report, "coneprobe.circle.circle-round-trip", "round_trip_moduli", "1..=1024".into()),
                constant(report, "coneprobe.circle.circle-lipschitz", "grid_moduli", "1..=256".into()),
                constant(report, "coneprobe.circle.circle-lipschitz", "grid_points", 10_000.into()),
                constant(report, "coneprobe.circle.circle-lipschitz", "additive", 2.into()),
            ]),
        ),
        (
            "projection conditions on Z/2 * Z/3 and the truncated sum, identity control fails (iii)",
            all([
                group(report, "products.z2_z3.collapse.", 4, None),
                group(report, "products.sum20.collapse.", 4, None),
                group(report, "products.negative_control.identity", 1, None),
            ]),
        ),
        ("permutation matrices on S6", group(report, "matnorm.permutation_matrices.S6.", 2, Some(720))),
        ("byte-identical reports across runs", rerun_identical),
    ]
}

fn main() -> ExitCode {
    let dir = tempfile::TempDir::new().expect("temporary directory");
    let mut config = RunConfig { out: dir.path().join("first.json"), ..RunConfig::default() };
    let start = Instant::now();
    let first = run_suite(&config).expect("default configuration runs");
    config.out = dir.path().join("second.json");
    let second = run_suite(&config).expect("default configuration runs");
    let elapsed = start.elapsed();

    let bytes = |p: &std::path::Path| std::fs::read(p).expect("report written");
    let identical = if bytes(&dir.path().join("first.json")) == bytes(&config.out) {
        Ok(())
    } else {
        Err("reports differ".to_string())
    };

    let mut failures = 0;
    for (i, (name, result)) in criteria(&first.report, identical).into_iter().enumerate() {
        match result {
            Ok(()) => println!("[{:>2}] PASS  {name}", i + 1),
            Err(why) => {
                failures += 1;
                println!("[{:>2}] FAIL  {name}: {why}", i + 1);
            }
        }
    }
    let overall = first.exit_code() == 0 && second.exit_code() == 0;
    println!(
        "run status {}, {} checks per run, two runs in {:.1}s",
        if overall { "exit 0" } else { "exit 1" },
        first.report.summary.checks,
        elapsed.as_secs_f64()
    );
    if failures == 0 && overall {
        ExitCode::SUCCESS
    } else {
        for id in &first.report.summary.failed_ids {
            println!("failed check: {id}");
        }
        ExitCode::FAILURE
    }
}
