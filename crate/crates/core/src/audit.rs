//! Counters for bound checks over samples, shared by all verifiers.

use serde::{Deserialize, Serialize};

/// Absolute slack allowed when comparing an observed statistic to its bound.
const SLACK: f64 = 1e-12;

/// Result of checking one inequality `statistic <= bound` over a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaAudit {
    pub lemma: String,
    pub statement: String,
    pub sample_size: u64,
    pub bound: f64,
    pub max_observed: Option<f64>,
    pub violations: u64,
    /// First violating sample, or `None` when the bound held everywhere.
    pub witness: Option<String>,
}

impl LemmaAudit {
    pub fn new(lemma: impl Into<String>, statement: impl Into<String>, bound: f64) -> Self {
        Self {
            lemma: lemma.into(),
            statement: statement.into(),
            sample_size: 0,
            bound,
            max_observed: None,
            violations: 0,
            witness: None,
        }
    }

    /// Records one sample; `witness` is only evaluated on the first violation.
    pub fn observe(&mut self, value: f64, witness: impl FnOnce() -> String) {
        self.sample_size += 1;
        if self.max_observed.is_none_or(|m| value > m) {
            self.max_observed = Some(value);
        }
        if value > self.bound + SLACK {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Records a boolean sample: `false` counts as a violation.
    pub fn observe_holds(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.observe(if holds { 0.0 } else { 1.0 }, witness);
    }

    /// Combines two audits of the same lemma, keeping `self`'s witness first.
    pub fn merge(&mut self, other: LemmaAudit) {
        self.sample_size += other.sample_size;
        self.max_observed = match (self.max_observed, other.max_observed) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.violations += other.violations;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}
