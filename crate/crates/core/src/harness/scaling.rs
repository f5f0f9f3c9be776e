use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{run_trial, ExperimentConfig, HarnessError};
use crate::stats::log_log_slope;
use crate::types::TargetSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub epsilon: f64,
    pub beta: f64,
    pub max_depth: u64,
    pub total_queries: u64,
    pub depth_query_product: f64,
    /// Set when the cell's run failed; its resource fields are then zero.
    pub error: Option<String>,
}

/// Log-log slopes of depth, queries and their product against epsilon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub beta: f64,
    pub slope_depth: f64,
    pub slope_queries: f64,
    pub slope_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub settings: BTreeMap<String, String>,
    pub rows: Vec<ScalingRow>,
    /// One per beta with at least two successful cells.
    pub fits: Vec<ScalingFit>,
    /// Some cell failed.
    pub partial: bool,
}

/// Runs trial 0 of `base` at every `(epsilon, beta)` grid point and fits
/// resource exponents per beta.
pub fn scaling_study(
    base: &ExperimentConfig,
    epsilon_grid: &[f64],
    beta_grid: &[f64],
) -> Result<ScalingTable, HarnessError> {
    if epsilon_grid.is_empty() || beta_grid.is_empty() {
        return Err(HarnessError::Config("scaling grids must be nonempty".into()));
    }
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &beta in beta_grid {
        let mut pts: Vec<(f64, f64, f64, f64)> = Vec::new();
        for &epsilon in epsilon_grid {
            let mut config = base.clone();
            config.target = TargetSpec {
                epsilon,
                beta,
                ..base.target
            };
            config.trials = 1;
            config.validate()?;
            let row = match run_trial(&config, 0) {
                Ok(t) => {
                    let product = t.max_depth as f64 * t.total_queries as f64;
                    pts.push((epsilon, t.max_depth as f64, t.total_queries as f64, product));
                    ScalingRow {
                        epsilon,
                        beta,
                        max_depth: t.max_depth,
                        total_queries: t.total_queries,
                        depth_query_product: product,
                        error: None,
                    }
                }
                Err(e) => ScalingRow {
                    epsilon,
                    beta,
                    max_depth: 0,
                    total_queries: 0,
                    depth_query_product: 0.0,
                    error: Some(e.to_string()),
                },
            };
            rows.push(row);
        }
        let eps: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let col = |f: fn(&(f64, f64, f64, f64)) -> f64| pts.iter().map(f).collect::<Vec<f64>>();
        if let (Some(d), Some(n), Some(dn)) = (
            log_log_slope(&eps, &col(|p| p.1)),
            log_log_slope(&eps, &col(|p| p.2)),
            log_log_slope(&eps, &col(|p| p.3)),
        ) {
            fits.push(ScalingFit {
                beta,
                slope_depth: d,
                slope_queries: n,
                slope_product: dn,
            });
        }
    }
    let partial = rows.iter().any(|r| r.error.is_some());
    let mut settings = base.provenance();
    settings.remove("epsilon");
    settings.remove("beta");
    settings.insert("trials".into(), "1".into());
    Ok(ScalingTable {
        settings,
        rows,
        fits,
        partial,
    })
}
