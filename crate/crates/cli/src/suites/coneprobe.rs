use rand_chacha::ChaCha8Rng;
use serde_json::json;
use ultracone::coneprobe::{
    check_sequence_contraction, verify_circle_correspondence, OrthogonalStages, PermNorm, Scaling, Schedule,
    SequenceContractionReport, SequenceFamily, SequenceSpec, SpdStages, TriangularStages, DEFAULT_TAIL_FRACTION,
    DEFAULT_TOLERANCE,
};

use crate::config::RunConfig;
use crate::report::{Check, Series};

const ROUND_TRIP_MODULUS: u64 = 1024;
const GRID_MODULUS: u64 = 256;
const GRID_POINTS: u64 = 10_000;

fn contraction_check(
    name: &str,
    stages: std::ops::RangeInclusive<usize>,
    result: Result<SequenceContractionReport, impl std::fmt::Display>,
) -> Check {
    let id = format!("coneprobe.contraction.{name}");
    let r = match result {
        Ok(r) => r,
        Err(e) => return Check::errored(id, e),
    };
    let witness = r
        .stages
        .iter()
        .flat_map(|s| [&s.displacement, &s.non_expansive, &s.inclusion_isometry].map(|a| (s.n, a)))
        .find_map(|(n, a)| a.witness.as_ref().map(|w| format!("n={n} {}: {w}", a.lemma)))
        .or_else(|| (r.observed_k > r.declared_k).then(|| format!("displacement {} > K", r.observed_k)))
        .or_else(|| (r.borderline > 0).then(|| format!("{} borderline ranks", r.borderline)));
    let pairs: u64 = r.stages.iter().map(|s| s.non_expansive.sample_size).sum();
    Check::new(id, "d_n(p_n x, x) <= K and p_n is non-expansive at every stage", r.passed())
        .constants(json!({ "K": r.declared_k, "stages": format!("{}..={}", stages.start(), stages.end()) }))
        .observed(json!({ "observed_k": r.observed_k, "borderline": r.borderline, "pairs": pairs }))
        .witness(witness)
}

struct Probe {
    name: &'static str,
    spec: SequenceSpec,
    expected: f64,
}

fn probes() -> Vec<Probe> {
    let spec = |family, norm, end, scaling| SequenceSpec {
        family,
        norm,
        stages: Schedule { start: 2, end, step: 1 },
        scaling,
        tail_fraction: DEFAULT_TAIL_FRACTION,
        tolerance: DEFAULT_TOLERANCE,
        bound: Some(1.0),
    };
    vec![
        Probe {
            name: "long_cycle_supp",
            spec: spec(SequenceFamily::LongCycle, PermNorm::Supp, 2000, Scaling::Linear),
            expected: 1.0,
        },
        Probe {
            name: "long_cycle_tr",
            spec: spec(SequenceFamily::LongCycle, PermNorm::Tr, 2000, Scaling::Linear),
            expected: 1.0,
        },
        Probe {
            name: "involutions_tr",
            spec: spec(SequenceFamily::Involutions, PermNorm::Tr, 2000, Scaling::Linear),
            expected: 0.5,
        },
        Probe {
            name: "square_cycle_supp",
            spec: spec(SequenceFamily::SquareCycle, PermNorm::Supp, 40, Scaling::Power { alpha: 2.0 }),
            expected: 1.0,
        },
    ]
}

pub fn run(config: &RunConfig, rng: &mut ChaCha8Rng) -> (Vec<Check>, Vec<Series>) {
    let mut checks = Vec::new();
    let mut series = Vec::new();

    let circle = verify_circle_correspondence(ROUND_TRIP_MODULUS, GRID_MODULUS, GRID_POINTS);
    let scope = json!({
        "round_trip_moduli": format!("1..={ROUND_TRIP_MODULUS}"),
        "grid_moduli": format!("1..={GRID_MODULUS}"),
        "grid_points": GRID_POINTS,
    });
    for audit in [&circle.round_trip, &circle.arc_identity, &circle.float_agrees_with_exact] {
        checks.push(Check::from_audit("coneprobe.circle", audit, scope.clone()));
    }
    let mut lipschitz = Check::from_audit("coneprobe.circle", &circle.lipschitz, scope);
    lipschitz.constants["additive"] = json!(2);
    lipschitz.observed["pairs_bounded_outright"] = json!(circle.pairs_bounded_outright);
    checks.push(lipschitz);

    let pairs = (config.samples / 5).max(1);
    checks.push(contraction_check(
        "triangular",
        2..=8,
        check_sequence_contraction(&TriangularStages, 2..=8, pairs, 1, rng),
    ));
    checks.push(contraction_check("spd", 2..=8, check_sequence_contraction(&SpdStages, 2..=8, pairs, 2, rng)));
    checks.push(contraction_check(
        "orthogonal",
        2..=10,
        check_sequence_contraction(&OrthogonalStages { tau: config.tau }, 2..=10, pairs, 2, rng),
    ));

    for probe in probes() {
        let id = format!("coneprobe.sequence.{}", probe.name);
        let summary = match probe.spec.evaluate() {
            Ok(s) => s,
            Err(e) => {
                checks.push(Check::errored(id, e));
                continue;
            }
        };
        let est = &summary.estimate;
        let admissible = summary.admissibility.as_ref().is_none_or(|a| a.admissible);
        let ok = est.converged && (est.tail_mean - probe.expected).abs() <= est.tolerance && admissible;
        checks.push(
            Check::new(id, "normalised norms settle at the expected limit and stay bounded", ok)
                .constants(json!({
                    "expected": probe.expected,
                    "tolerance": est.tolerance,
                    "tail_fraction": probe.spec.tail_fraction,
                    "bound": probe.spec.bound,
                }))
                .observed(json!({ "estimate": est, "admissibility": summary.admissibility }))
                .witness((!ok).then(|| format!("tail [{}, {}] mean {}", est.tail_min, est.tail_max, est.tail_mean))),
        );
        let mut csv = Vec::new();
        if summary.sequence.write_csv(&mut csv).is_ok() {
            series.push(Series { name: probe.name.to_string(), csv });
        }
    }
    (checks, series)
}
