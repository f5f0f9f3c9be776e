use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Algorithm, ExperimentConfig};
use crate::circphase::{circ_diff, Angle};
use crate::ledger::ResourceLedger;
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub estimate: f64,
    pub abs_error: f64,
    pub max_depth: u64,
    pub total_queries: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    /// Fraction of trials with `abs_error <= epsilon`.
    pub empirical_success: f64,
    /// Mean signed error (circular for phases).
    pub empirical_bias: f64,
    /// Sample variance of the signed errors.
    pub empirical_variance: f64,
}

/// Per-trial records, their summary, the combined ledger (deepest circuit,
/// summed queries) and the settings that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub settings: BTreeMap<String, String>,
    pub trials: Vec<TrialRecord>,
    pub summary: ReportSummary,
    pub ledger: ResourceLedger,
}

impl TrialReport {
    pub fn from_records(config: &ExperimentConfig, trials: Vec<TrialRecord>) -> Self {
        let signed: Vec<f64> = trials
            .iter()
            .map(|t| match config.algorithm {
                Algorithm::Phase => circ_diff(Angle::new(t.estimate), Angle::new(config.truth)),
                _ => t.estimate - config.truth,
            })
            .collect();
        let hits = trials.iter().filter(|t| t.abs_error <= config.target.epsilon).count();
        let summary = ReportSummary {
            empirical_success: hits as f64 / trials.len().max(1) as f64,
            empirical_bias: if signed.is_empty() { 0.0 } else { stats::mean(&signed) },
            empirical_variance: stats::variance(&signed),
        };
        let ledger = trials
            .iter()
            .map(|t| {
                let mut l = ResourceLedger::new();
                l.charge(t.max_depth, t.total_queries);
                l
            })
            .sum();
        Self {
            settings: config.provenance(),
            trials,
            summary,
            ledger,
        }
    }

    pub fn failure_rate(&self) -> f64 {
        1.0 - self.summary.empirical_success
    }
}
