//! Estimation of discrete distributions from contingency tables when one
//! margin is known exactly.
//!
//! The plain estimator of the row marginal ignores the second variable. If
//! the column marginal `p_.j` is known, rescaling every column of the
//! empirical table to it gives an estimator whose asymptotic covariance
//! `Gamma` never exceeds the multinomial covariance `Sigma`, and is strictly
//! smaller whenever rows and columns are dependent.
//!
//! Modules:
//!
//! * [`table`]: distributions, count tables, sampling, 2x2 construction;
//! * [`estimators`]: weighted, cloned and adjusted estimators and IPF;
//! * [`asymptotics`]: `Sigma`, `Gamma` and the comparisons between them;
//! * [`simulation`]: the Monte Carlo grid and the case-study pipeline.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![warn(rust_2018_idioms)]

extern crate alloc;

pub mod asymptotics;
pub mod error;
pub mod estimators;
mod linalg;
pub mod rng;
pub mod simulation;
pub mod sum;
pub mod table;

pub use asymptotics::{
    chi2_reduction_bound, conditional_cov_oracle, effective_sample_factor, gamma_adjusted,
    sigma_marginal, sigma_univariate, variance_gap_quadratic, CovarianceMatrix, VarianceGap,
};
pub use error::{Axis, Error, Result};
pub use estimators::{
    adjust_to_known_marginal, adjusted_row_marginal, cloned_estimator, ipf_column_step, ipf_fit,
    weighted_univariate, AdjustedTable, CloneCounts, IpfFit, IpfOptions, WeightVector,
};
pub use simulation::{
    asymptotic_reduction, run_case_study, run_experiment, CaseStudyResult, CaseStudyRow,
    CellStats, ExperimentConfig, ExperimentGrid, GridCell, WeightedStudy, WeightedStudyResult,
};
pub use table::{
    sample, sample_pairs, CountTable, CrossProductRatio, JointDistribution,
    MarginalDistribution, SampleBatch,
};
