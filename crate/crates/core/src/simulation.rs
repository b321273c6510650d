//! Monte Carlo comparison of the plain and the adjusted row-marginal
//! estimator on 2x2 tables with fixed marginals, and the case-study
//! pipeline for a single observed table.
//!
//! A run is a grid over sample sizes `n` and log cross-product ratios. Each
//! grid cell gets a stable index `n_index * log_cpr_grid.len() + cpr_index`,
//! and replication `r` of cell `c` draws from
//! [`rng::replication_rng(seed, c, r)`](crate::rng::replication_rng). The
//! per-cell summary only looks at the replication outcomes in index order,
//! so any schedule that produces the same outcome vector produces the same
//! bits.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::asymptotics::{effective_sample_factor, gamma_adjusted, sigma_marginal, sigma_univariate};
use crate::error::{Axis, Error, Result};
use crate::estimators::{adjust_to_known_marginal, weighted_univariate, WeightVector};
use crate::rng::{self, StreamRng};
use crate::sum::NeumaierSum;
use crate::table::{
    sample_categories, sample_with, CountTable, JointDistribution, MarginalDistribution,
};

/// Number of points in the default log cross-product-ratio grid.
pub const DEFAULT_LOG_CPR_POINTS: usize = 25;
pub const DEFAULT_REPLICATIONS: u32 = 20_000;
/// Sample sizes used by the bundled configurations.
pub const DEFAULT_N_GRID: [u64; 4] = [20, 100, 1_000, 10_000];

/// `DEFAULT_LOG_CPR_POINTS` equispaced points on `[-5, 5]`.
pub fn default_log_cpr_grid() -> Vec<f64> {
    let last = (DEFAULT_LOG_CPR_POINTS - 1) as f64;
    (0..DEFAULT_LOG_CPR_POINTS)
        .map(|k| -5.0 + 10.0 * k as f64 / last)
        .collect()
}

#[cfg(feature = "serde")]
fn default_replications() -> u32 {
    DEFAULT_REPLICATIONS
}

fn default_n_grid() -> Vec<u64> {
    DEFAULT_N_GRID.to_vec()
}

/// One simulation study: fixed 2x2 marginals, a grid of sample sizes and
/// log cross-product ratios.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentConfig {
    /// `(a, 1 - a)`; the estimated margin.
    pub row_marginal: [f64; 2],
    /// `(b, 1 - b)`; the known margin.
    pub col_marginal: [f64; 2],
    #[cfg_attr(feature = "serde", serde(default = "default_log_cpr_grid"))]
    pub log_cpr_grid: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(default = "default_n_grid"))]
    pub n_grid: Vec<u64>,
    #[cfg_attr(feature = "serde", serde(default = "default_replications"))]
    pub replications: u32,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(row_marginal: [f64; 2], col_marginal: [f64; 2]) -> Self {
        Self {
            row_marginal,
            col_marginal,
            log_cpr_grid: default_log_cpr_grid(),
            n_grid: default_n_grid(),
            replications: DEFAULT_REPLICATIONS,
            seed: 0,
        }
    }

    /// Rows (0.5, 0.5), columns (0.5, 0.5).
    pub fn case_i() -> Self {
        Self::new([0.5, 0.5], [0.5, 0.5])
    }

    /// Rows (0.9, 0.1), columns (0.7, 0.3).
    pub fn case_ii() -> Self {
        Self::new([0.9, 0.1], [0.7, 0.3])
    }

    /// Rows (0.2, 0.8), columns (0.7, 0.3).
    pub fn case_iii() -> Self {
        Self::new([0.2, 0.8], [0.7, 0.3])
    }

    pub fn validate(&self) -> Result<()> {
        if self.log_cpr_grid.is_empty() {
            return Err(Error::InvalidConfig("log_cpr_grid is empty"));
        }
        if self.n_grid.is_empty() {
            return Err(Error::InvalidConfig("n_grid is empty"));
        }
        if self.n_grid.contains(&0) {
            return Err(Error::InvalidConfig("sample sizes must be positive"));
        }
        if self.replications < 2 {
            return Err(Error::InvalidConfig("at least two replications are needed"));
        }
        if u32::try_from(self.n_grid.len() * self.log_cpr_grid.len()).is_err() {
            return Err(Error::InvalidConfig("grid has more than 2^32 cells"));
        }
        MarginalDistribution::new(Axis::Row, self.row_marginal.to_vec())?;
        MarginalDistribution::new(Axis::Column, self.col_marginal.to_vec())?;
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.n_grid.len() * self.log_cpr_grid.len()
    }

    /// The work units of this run, in grid order.
    pub fn plan(&self) -> Result<Vec<CellPlan>> {
        self.validate()?;
        let row = MarginalDistribution::new(Axis::Row, self.row_marginal.to_vec())?;
        let col = MarginalDistribution::new(Axis::Column, self.col_marginal.to_vec())?;
        let mut cells = Vec::with_capacity(self.cell_count());
        for (ni, &n) in self.n_grid.iter().enumerate() {
            for (ci, &log_cpr) in self.log_cpr_grid.iter().enumerate() {
                let index = (ni * self.log_cpr_grid.len() + ci) as u32;
                let table = JointDistribution::from_2x2_marginals_cpr(&row, &col, libm::exp(log_cpr));
                cells.push(CellPlan {
                    index,
                    n,
                    log_cpr,
                    seed: self.seed,
                    replications: self.replications,
                    table,
                    known_col: col.clone(),
                });
            }
        }
        Ok(cells)
    }
}

/// One grid cell ready to be simulated.
#[derive(Debug, Clone)]
pub struct CellPlan {
    pub index: u32,
    pub n: u64,
    pub log_cpr: f64,
    pub seed: u64,
    pub replications: u32,
    /// The population table, or why it could not be built.
    pub table: Result<JointDistribution>,
    pub known_col: MarginalDistribution,
}

impl CellPlan {
    /// Draws replication `replication` of this cell.
    pub fn replicate(&self, replication: u32) -> Result<ReplicationOutcome> {
        let table = self.table.as_ref().map_err(Clone::clone)?;
        let mut rng = rng::replication_rng(self.seed, self.index, replication);
        replicate_row_estimates(table, &self.known_col, self.n, 0, &mut rng)
    }

    /// All replications, in order.
    pub fn replicate_all(&self) -> Result<Vec<ReplicationOutcome>> {
        (0..self.replications).map(|r| self.replicate(r)).collect()
    }

    /// Summarizes outcomes produced by [`CellPlan::replicate`] for
    /// replications `0..replications` in that order.
    pub fn summarize(&self, outcomes: &[ReplicationOutcome]) -> Result<CellStats> {
        let table = self.table.as_ref().map_err(Clone::clone)?;
        summarize_row_estimates(table, 0, outcomes)
    }

    pub fn run(&self) -> GridCell {
        let result = self.replicate_all().and_then(|o| self.summarize(&o));
        GridCell::from_result(self.n, self.log_cpr, result)
    }
}

/// Both estimates of one row probability from a single simulated sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationOutcome {
    pub phat: f64,
    /// `None` when some column of the sample was empty.
    pub ptilde: Option<f64>,
}

/// Samples `n` pairs from `table` and returns the plain and adjusted
/// estimates of row `row`'s probability.
pub fn replicate_row_estimates(
    table: &JointDistribution,
    known_col: &MarginalDistribution,
    n: u64,
    row: usize,
    rng: &mut StreamRng,
) -> Result<ReplicationOutcome> {
    let counts = sample_with(table, n, rng)?;
    let phat_table = counts.empirical_joint()?;
    let phat = crate::sum::sum(phat_table.row(row).iter().copied());
    let adjusted = adjust_to_known_marginal(&phat_table, known_col)?;
    let ptilde = if adjusted.has_zero_columns() {
        None
    } else {
        Some(adjusted.adjusted_row_marginal()[row])
    };
    Ok(ReplicationOutcome { phat, ptilde })
}

/// Mean and unbiased sample variance, both compensated.
pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mut acc = NeumaierSum::new();
    acc.extend(xs.iter().copied());
    let mean = acc.value() / m;
    let mut sq = NeumaierSum::new();
    sq.extend(xs.iter().map(|x| (x - mean) * (x - mean)));
    (mean, sq.value() / (m - 1.0))
}

/// Per-cell summary of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellStats {
    /// `100 (1 - Var(p~) / Var(p^))` over the included replications.
    pub reduction_pct: f64,
    /// `100 (Sigma_11 - Gamma_11) / Sigma_11`.
    pub asymptotic_reduction_pct: f64,
    pub bias_hat: f64,
    pub bias_tilde: f64,
    pub var_hat: f64,
    pub var_tilde: f64,
    /// Replications dropped because a column of the sample was empty.
    pub zero_column_events: u64,
    pub included: u64,
}

/// Reduces replication outcomes to [`CellStats`]. Replications with an
/// empty column are excluded from every statistic and counted.
pub fn summarize_row_estimates(
    table: &JointDistribution,
    row: usize,
    outcomes: &[ReplicationOutcome],
) -> Result<CellStats> {
    let target = crate::sum::sum(table.row(row).iter().copied());
    let (hats, tildes): (Vec<f64>, Vec<f64>) = outcomes
        .iter()
        .filter_map(|o| o.ptilde.map(|t| (o.phat, t)))
        .unzip();
    let zero_column_events = (outcomes.len() - hats.len()) as u64;
    if hats.len() < 2 {
        return Err(Error::InvalidConfig("fewer than two usable replications"));
    }
    let (mean_hat, var_hat) = mean_and_variance(&hats);
    let (mean_tilde, var_tilde) = mean_and_variance(&tildes);
    if var_hat <= 0.0 {
        return Err(Error::DegenerateVariance { row });
    }
    Ok(CellStats {
        reduction_pct: 100.0 * (1.0 - var_tilde / var_hat),
        asymptotic_reduction_pct: 100.0 * asymptotic_reduction(table, row)?,
        bias_hat: mean_hat - target,
        bias_tilde: mean_tilde - target,
        var_hat,
        var_tilde,
        zero_column_events,
        included: hats.len() as u64,
    })
}

/// One row of an [`ExperimentGrid`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridCell {
    pub n: u64,
    pub log_cpr: f64,
    pub stats: Option<CellStats>,
    /// Why the cell could not be computed.
    pub error: Option<String>,
}

impl GridCell {
    pub fn from_result(n: u64, log_cpr: f64, result: Result<CellStats>) -> Self {
        match result {
            Ok(stats) => Self { n, log_cpr, stats: Some(stats), error: None },
            Err(e) => Self { n, log_cpr, stats: None, error: Some(format!("{e}")) },
        }
    }
}

/// Results of [`run_experiment`], in grid order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentGrid {
    pub config: ExperimentConfig,
    pub cells: Vec<GridCell>,
}

impl ExperimentGrid {
    pub fn get(&self, n: u64, log_cpr: f64) -> Option<&GridCell> {
        self.cells.iter().find(|c| c.n == n && c.log_cpr == log_cpr)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.error.is_some()).count()
    }
}

/// Runs every grid cell serially. Cells that cannot be built or summarized
/// carry an error entry; the rest of the grid still runs.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentGrid> {
    let cells = cfg.plan()?.iter().map(CellPlan::run).collect();
    Ok(ExperimentGrid { config: cfg.clone(), cells })
}

/// `(Sigma_ii - Gamma_ii) / Sigma_ii`, the asymptotic share of the plain
/// estimator's variance removed by the adjustment.
pub fn asymptotic_reduction(p: &JointDistribution, row: usize) -> Result<f64> {
    if row >= p.rows() {
        return Err(Error::Dimension { expected: p.rows(), found: row + 1 });
    }
    let sigma = sigma_marginal(p).get(row, row);
    if sigma <= 0.0 {
        return Err(Error::DegenerateVariance { row });
    }
    let gamma = gamma_adjusted(p)?.get(row, row);
    Ok(((sigma - gamma) / sigma).clamp(0.0, 1.0))
}

/// Monte Carlo check of the weighted univariate estimator: i.i.d. draws
/// from `probs`, weighted by fixed `weights`, repeated `replications` times.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStudy {
    pub probs: Vec<f64>,
    pub weights: WeightVector,
    pub replications: u32,
    pub seed: u64,
}

/// Output of [`WeightedStudy::summarize`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WeightedStudyResult {
    /// Empirical `Var(p~_i) / sum_t w_t^2` per category.
    pub scaled_variance: Vec<f64>,
    /// The limit `Sigma_ii = p_i (1 - p_i)`.
    pub sigma_diagonal: Vec<f64>,
    pub effective_sample_factor: f64,
}

impl WeightedStudy {
    pub fn new(probs: Vec<f64>, weights: WeightVector, replications: u32, seed: u64) -> Result<Self> {
        MarginalDistribution::new(Axis::Row, probs.clone())?;
        if replications < 2 {
            return Err(Error::InvalidConfig("at least two replications are needed"));
        }
        Ok(Self { probs, weights, replications, seed })
    }

    /// Weighted frequencies of one simulated sample.
    pub fn replicate(&self, replication: u32) -> Result<Vec<f64>> {
        let mut rng = rng::replication_rng(self.seed, 0, replication);
        let xs = sample_categories(&self.probs, self.weights.len(), &mut rng);
        weighted_univariate(&xs, &self.weights, self.probs.len())
    }

    /// Reduces outcomes of replications `0..replications`, in order.
    pub fn summarize(&self, outcomes: &[Vec<f64>]) -> WeightedStudyResult {
        let factor = effective_sample_factor(&self.weights);
        let scaled_variance = (0..self.probs.len())
            .map(|i| {
                let xs: Vec<f64> = outcomes.iter().map(|o| o[i]).collect();
                mean_and_variance(&xs).1 / factor
            })
            .collect();
        WeightedStudyResult {
            scaled_variance,
            sigma_diagonal: sigma_univariate(&self.probs).diagonal(),
            effective_sample_factor: factor,
        }
    }

    pub fn run(&self) -> Result<WeightedStudyResult> {
        let outcomes = (0..self.replications)
            .map(|r| self.replicate(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.summarize(&outcomes))
    }
}

/// One row of a [`CaseStudyResult`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseStudyRow {
    pub phat: f64,
    pub ptilde: f64,
    /// `100 (ptilde / phat - 1)`.
    pub relative_difference_pct: f64,
}

/// Plain and adjusted row marginals of an observed table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseStudyResult {
    pub rows: Vec<CaseStudyRow>,
    /// Columns with no observations; their known mass is missing from `ptilde`.
    pub zero_columns: Vec<usize>,
}

pub fn run_case_study(counts: &CountTable, known_col: &MarginalDistribution) -> Result<CaseStudyResult> {
    let phat_table = counts.empirical_joint()?;
    let adjusted = adjust_to_known_marginal(&phat_table, known_col)?;
    let phat = phat_table.row_sums();
    let ptilde = adjusted.adjusted_row_marginal();
    let rows = phat
        .iter()
        .zip(&ptilde)
        .map(|(&phat, &ptilde)| CaseStudyRow {
            phat,
            ptilde,
            relative_difference_pct: 100.0 * (ptilde / phat - 1.0),
        })
        .collect();
    Ok(CaseStudyResult { rows, zero_columns: adjusted.zero_columns().to_vec() })
}
