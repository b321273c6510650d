//! Parallel drivers for the core simulations.
//!
//! Cells and replications are spread over the rayon pool, but every
//! replication seeds its own stream from `(seed, cell, replication)` and
//! outcomes are collected in index order before summarizing, so results
//! are bit-identical to the serial runners in `margweight_core`.

use margweight_core::simulation::{
    CellPlan, ExperimentConfig, ExperimentGrid, GridCell, WeightedStudy, WeightedStudyResult,
};
use margweight_core::Result;
use rayon::prelude::*;

/// Replications handed to one rayon task at a time.
const MIN_CHUNK: usize = 512;

fn run_cell(plan: &CellPlan) -> GridCell {
    let outcomes: Result<Vec<_>> = (0..plan.replications)
        .into_par_iter()
        .with_min_len(MIN_CHUNK)
        .map(|r| plan.replicate(r))
        .collect();
    GridCell::from_result(plan.n, plan.log_cpr, outcomes.and_then(|o| plan.summarize(&o)))
}

/// Parallel [`margweight_core::run_experiment`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentGrid> {
    let cells = cfg.plan()?.par_iter().map(run_cell).collect();
    Ok(ExperimentGrid { config: cfg.clone(), cells })
}

/// Parallel [`WeightedStudy::run`].
pub fn run_weighted_study(study: &WeightedStudy) -> Result<WeightedStudyResult> {
    let outcomes: Vec<Vec<f64>> = (0..study.replications)
        .into_par_iter()
        .with_min_len(64)
        .map(|r| study.replicate(r))
        .collect::<Result<_>>()?;
    Ok(study.summarize(&outcomes))
}
