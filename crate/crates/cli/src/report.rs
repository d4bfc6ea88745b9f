//! JSON report types.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use ultracone::audit::LemmaAudit;

use crate::config::{RunConfig, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
}

/// One verified statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub statement: String,
    pub status: Status,
    /// The constants the statement was checked against, verbatim.
    pub constants: Value,
    /// What was measured: sample sizes, extremes, counts.
    pub observed: Value,
    /// A small counterexample when the check failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, statement: impl Into<String>, passed: bool) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            constants: json!({}),
            observed: json!({}),
            witness: None,
        }
    }

    pub fn constants(mut self, constants: Value) -> Self {
        self.constants = constants;
        self
    }

    pub fn observed(mut self, observed: Value) -> Self {
        self.observed = observed;
        self
    }

    pub fn witness(mut self, witness: Option<String>) -> Self {
        self.witness = witness;
        self
    }

    /// `id` followed by the audit's lemma name, with the audited bound as
    /// the constant and `scope` merged into the constants.
    pub fn from_audit(prefix: &str, audit: &LemmaAudit, scope: Value) -> Self {
        let mut constants = json!({ "bound": audit.bound });
        if let (Some(c), Value::Object(extra)) = (constants.as_object_mut(), scope) {
            c.extend(extra);
        }
        Check::new(format!("{prefix}.{}", audit.lemma), audit.statement.clone(), audit.passed())
            .constants(constants)
            .observed(json!({
                "sample_size": audit.sample_size,
                "max_observed": audit.max_observed,
                "violations": audit.violations,
            }))
            .witness(audit.witness.clone())
    }

    /// A check that could not run because a verifier returned an error.
    pub fn errored(id: impl Into<String>, error: impl std::fmt::Display) -> Self {
        Check::new(id, "verifier completed without error", false).witness(Some(error.to_string()))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A CSV series produced by a suite, written next to the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub csv: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub status: Status,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub series: Vec<Series>,
}

impl SuiteReport {
    pub fn new(suite: Suite, checks: Vec<Check>, series: Vec<Series>) -> Self {
        let status = if checks.iter().all(Check::passed) { Status::Pass } else { Status::Fail };
        Self { suite, status, checks, series }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub failed: usize,
    pub failed_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config: ReportedConfig,
    pub status: Status,
    pub summary: Summary,
    pub suites: Vec<SuiteReport>,
}

/// The parts of a [`RunConfig`] that can change results. The output path
/// and worker count are left out so they cannot perturb the bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportedConfig {
    pub suites: Vec<Suite>,
    pub max_degree: usize,
    pub samples: usize,
    pub permutation_pairs: usize,
    pub certificates: usize,
    pub depth: usize,
    pub tau: f64,
    pub seed: u64,
    pub broken_projection: bool,
}

impl From<&RunConfig> for ReportedConfig {
    fn from(c: &RunConfig) -> Self {
        Self {
            suites: c.resolved_suites(),
            max_degree: c.max_degree,
            samples: c.samples,
            permutation_pairs: c.permutation_pairs,
            certificates: c.certificates,
            depth: c.depth,
            tau: c.tau,
            seed: c.seed,
            broken_projection: c.broken_projection,
        }
    }
}

impl Report {
    pub fn assemble(config: &RunConfig, suites: Vec<SuiteReport>) -> Self {
        let failed_ids: Vec<String> =
            suites.iter().flat_map(|s| &s.checks).filter(|c| !c.passed()).map(|c| c.id.clone()).collect();
        let summary =
            Summary { checks: suites.iter().map(|s| s.checks.len()).sum(), failed: failed_ids.len(), failed_ids };
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.into(),
            status: if summary.failed == 0 { Status::Pass } else { Status::Fail },
            summary,
            suites,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.suites.iter().flat_map(|s| &s.checks).find(|c| c.id == id)
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.suites.iter().flat_map(|s| &s.checks)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("report serialises");
        bytes.push(b'\n');
        bytes
    }
}
