//! Experiment orchestration: seeded trials, reports, scaling studies and
//! exports.
//!
//! Trial `i` of a run draws all of its randomness from child seed `i` of
//! the master seed, so a report is a pure function of its config no matter
//! how trials are scheduled.

mod config;
mod export;
mod report;
mod scaling;
pub mod selfcheck;

pub use config::{parse_config, Algorithm, ExperimentConfig, Format, KEYS};
pub use export::{render_report, render_scaling, write_report, write_scaling, SCALING_CSV_HEADER, TRIAL_CSV_HEADER};
pub use report::{ReportSummary, TrialRecord, TrialReport};
pub use scaling::{scaling_study, ScalingFit, ScalingRow, ScalingTable};

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::aggregate::{aggregate_type1, aggregate_type2};
use crate::blackbox::{Monkey, SyntheticUqae1, SyntheticUqae2, SyntheticUqpe2, TailSetting};
use crate::circphase::{circ_diff, lowdepth_phase_estimate, Angle};
use crate::ledger::ResourceLedger;
use crate::rallfuller::rall_fuller_estimate;
use crate::seed::SeedSpec;
use crate::types::Amplitude;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("trial {trial}: {source}")]
    Algorithm {
        trial: u64,
        #[source]
        source: crate::Error,
    },

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Seed of trial `trial` under `master_seed`.
pub fn trial_seed(master_seed: u64, trial: u64) -> SeedSpec {
    SeedSpec::new(master_seed, 0).derive(trial)
}

/// A report plus how long it took. Timing lives outside the report so that
/// report files stay byte-identical across runs.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub report: TrialReport,
    pub wall_time: Duration,
}

/// One trial: the estimate (an angle's value for `phase`), its error
/// against the truth, and the trial's ledger.
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<TrialRecord, HarnessError> {
    let seed = trial_seed(config.master_seed, trial);
    let mut ledger = ResourceLedger::new();
    let wrap = |source| HarnessError::Algorithm { trial, source };
    let amp = || Amplitude::new(config.truth).map_err(wrap);
    let target = &config.target;
    let (estimate, abs_error) = match config.algorithm {
        Algorithm::Type1 => {
            let sampler = SyntheticUqae1 {
                truth: amp()?,
                bias_fraction: config.bias_fraction,
                cost: config.cost,
            };
            let est = aggregate_type1(&sampler, target, config.r, config.s, seed, &mut ledger).map_err(wrap)?;
            (est, (est - config.truth).abs())
        }
        Algorithm::Type2 => {
            let sampler = SyntheticUqae2 {
                truth: amp()?,
                bias_fraction: config.bias_fraction,
                tail: TailSetting::Max,
                cost: config.cost,
            };
            let est =
                aggregate_type2(&sampler, target, config.r, config.s, config.cap_c, seed, &mut ledger).map_err(wrap)?;
            (est, (est - config.truth).abs())
        }
        Algorithm::Phase => {
            let truth = Angle::new(config.truth);
            let sampler = SyntheticUqpe2 {
                truth,
                bias_fraction: config.bias_fraction,
                tail_magnitude: FRAC_PI_2,
                cost: config.cost,
            };
            let out = lowdepth_phase_estimate(&sampler, target, config.r, config.s, seed, &mut ledger).map_err(wrap)?;
            (out.estimate.value(), circ_diff(out.estimate, truth).abs())
        }
        Algorithm::RallFuller => {
            let run = rall_fuller_estimate(amp()?, target, seed, &mut ledger).map_err(wrap)?;
            (run.estimate, (run.estimate - config.truth).abs())
        }
        Algorithm::MonkeyDemo => {
            let monkey = Monkey {
                truth: amp()?,
                epsilon: target.epsilon,
            };
            let est = aggregate_type1(&monkey, target, config.r, config.s, seed, &mut ledger).map_err(wrap)?;
            (est, (est - config.truth).abs())
        }
    };
    Ok(TrialRecord {
        trial_index: trial,
        estimate,
        abs_error,
        max_depth: ledger.max_depth(),
        total_queries: ledger.total_queries(),
    })
}

/// Runs every trial of `config` and summarises them. Does not write files.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let records: Vec<TrialRecord> = if config.parallel {
        (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, i))
            .collect::<Result<_, _>>()?
    } else {
        (0..config.trials)
            .map(|i| run_trial(config, i))
            .collect::<Result<_, _>>()?
    };
    Ok(ExperimentRun {
        report: TrialReport::from_records(config, records),
        wall_time: start.elapsed(),
    })
}
