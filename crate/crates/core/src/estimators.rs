//! Point estimators: weighted and cloned univariate frequencies, the
//! known-marginal adjustment of a contingency table, and iterative
//! proportional fitting.

use alloc::vec::Vec;

use crate::error::{Axis, Error, Result};
use crate::sum;
use crate::table::{JointDistribution, MarginalDistribution, NORMALIZATION_TOL};

/// Observation weights `w_t >= 0` summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights);
        }
        if (sum::sum(weights.iter().copied()) - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidWeights);
        }
        Ok(Self { weights })
    }

    /// `w_t = 1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSampleSize);
        }
        Ok(Self { weights: alloc::vec![1.0 / n as f64; n] })
    }

    /// Rescales arbitrary nonnegative scores to sum to one.
    pub fn normalized(scores: &[f64]) -> Result<Self> {
        if scores.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights);
        }
        let total = sum::sum(scores.iter().copied());
        if total <= 0.0 {
            return Err(Error::InvalidWeights);
        }
        Self::new(scores.iter().map(|w| w / total).collect())
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// How many times each observation is copied into a cloned sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloneCounts {
    counts: Vec<u64>,
    total: u64,
}

impl CloneCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if let Some(index) = counts.iter().position(|&z| z == 0) {
            return Err(Error::InvalidCloneCount { index });
        }
        if counts.is_empty() {
            return Err(Error::ZeroSampleSize);
        }
        let total = counts.iter().sum();
        Ok(Self { counts, total })
    }

    #[inline]
    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    /// Size of the cloned sample, `N = sum Z_t`.
    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    /// The equivalent weights `Z_t / N`.
    pub fn weights(&self) -> WeightVector {
        let n = self.total as f64;
        WeightVector { weights: self.counts.iter().map(|&z| z as f64 / n).collect() }
    }
}

fn check_categories(xs: &[usize], categories: usize) -> Result<()> {
    match xs.iter().position(|&x| x >= categories) {
        Some(position) => Err(Error::CategoryOutOfRange {
            position,
            category: xs[position],
            len: categories,
        }),
        None => Ok(()),
    }
}

/// `p_i = sum_t w_t 1{x_t = i}` over zero-based categories `0..categories`.
pub fn weighted_univariate(xs: &[usize], w: &WeightVector, categories: usize) -> Result<Vec<f64>> {
    if xs.len() != w.len() {
        return Err(Error::Dimension { expected: xs.len(), found: w.len() });
    }
    check_categories(xs, categories)?;
    let mut acc = alloc::vec![sum::NeumaierSum::new(); categories];
    for (&x, &wt) in xs.iter().zip(w.as_slice()) {
        acc[x].add(wt);
    }
    Ok(acc.iter().map(sum::NeumaierSum::value).collect())
}

/// Relative frequencies of the sample in which observation `t` appears
/// `Z_t` times: `(1/N) sum_t Z_t 1{x_t = i}`.
pub fn cloned_estimator(xs: &[usize], z: &CloneCounts, categories: usize) -> Result<Vec<f64>> {
    if xs.len() != z.counts.len() {
        return Err(Error::Dimension { expected: xs.len(), found: z.counts.len() });
    }
    check_categories(xs, categories)?;
    let mut tallies = alloc::vec![0u64; categories];
    for (&x, &copies) in xs.iter().zip(&z.counts) {
        tallies[x] += copies;
    }
    let n = z.total as f64;
    Ok(tallies.into_iter().map(|c| c as f64 / n).collect())
}

/// Empirical table rescaled column by column to a known column marginal.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AdjustedTable {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
    known_col_marginal: MarginalDistribution,
    zero_columns: Vec<usize>,
}

impl AdjustedTable {
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols + j]
    }

    /// Row-major cells.
    #[inline]
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn known_col_marginal(&self) -> &MarginalDistribution {
        &self.known_col_marginal
    }

    /// Columns that were empty in the sample and therefore left at zero.
    pub fn zero_columns(&self) -> &[usize] {
        &self.zero_columns
    }

    pub fn has_zero_columns(&self) -> bool {
        !self.zero_columns.is_empty()
    }

    /// `sum_j p~_ij` for every row. Sums to one exactly when no column was
    /// empty, otherwise to one minus the known mass of the empty columns.
    pub fn adjusted_row_marginal(&self) -> Vec<f64> {
        self.cells
            .chunks(self.cols)
            .map(|r| sum::sum(r.iter().copied()))
            .collect()
    }

    /// The adjusted cells as a distribution; fails when a column was empty.
    pub fn to_joint(&self) -> Result<JointDistribution> {
        JointDistribution::new(self.rows, self.cols, self.cells.clone())
    }
}

/// Free-function form of [`AdjustedTable::adjusted_row_marginal`].
pub fn adjusted_row_marginal(t: &AdjustedTable) -> Vec<f64> {
    t.adjusted_row_marginal()
}

fn check_target(target: &MarginalDistribution, len: usize) -> Result<()> {
    if target.len() != len {
        return Err(Error::Dimension { expected: len, found: target.len() });
    }
    target.require_positive()
}

/// Scales column `j` of a row-major table by `target_j / current_j`.
/// Returns the columns whose current mass is zero, which are left untouched.
fn scale_columns(cells: &mut [f64], cols: usize, target: &[f64]) -> Vec<usize> {
    let rows = cells.len() / cols;
    let mut empty = Vec::new();
    for j in 0..cols {
        let mass = sum::sum((0..rows).map(|i| cells[i * cols + j]));
        if mass > 0.0 {
            let factor = target[j] / mass;
            for i in 0..rows {
                cells[i * cols + j] *= factor;
            }
        } else {
            empty.push(j);
        }
    }
    empty
}

fn scale_rows(cells: &mut [f64], cols: usize, target: &[f64]) {
    for (row, &t) in cells.chunks_mut(cols).zip(target) {
        let mass = sum::sum(row.iter().copied());
        if mass > 0.0 {
            let factor = t / mass;
            row.iter_mut().for_each(|c| *c *= factor);
        }
    }
}

/// `p~_ij = p^_ij * p_.j / p^_.j`.
///
/// Columns with no observations are set to zero and listed in
/// [`AdjustedTable::zero_columns`] rather than renormalized.
pub fn adjust_to_known_marginal(
    phat: &JointDistribution,
    col: &MarginalDistribution,
) -> Result<AdjustedTable> {
    check_target(col, phat.cols())?;
    let mut cells = phat.cells().to_vec();
    let zero_columns = scale_columns(&mut cells, phat.cols(), col.probs());
    let known_col_marginal = MarginalDistribution::new(Axis::Column, col.probs().to_vec())?;
    Ok(AdjustedTable {
        rows: phat.rows(),
        cols: phat.cols(),
        cells,
        known_col_marginal,
        zero_columns,
    })
}

/// Stopping rule for [`ipf_fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpfOptions {
    /// Largest allowed absolute deviation of any row or column sum.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IpfOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 1000 }
    }
}

/// Result of [`ipf_fit`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IpfFit {
    pub table: JointDistribution,
    /// Full (column then row) sweeps performed.
    pub iterations: usize,
    pub converged: bool,
    /// Final max absolute marginal deviation.
    pub max_deviation: f64,
}

/// Largest absolute deviation of the row and column sums from their targets.
pub fn marginal_deviation(cells: &[f64], cols: usize, row: &[f64], col: &[f64]) -> f64 {
    let rows = cells.len() / cols;
    let row_dev = (0..rows).map(|i| {
        (sum::sum(cells[i * cols..(i + 1) * cols].iter().copied()) - row[i]).abs()
    });
    let col_dev = (0..cols).map(|j| {
        (sum::sum((0..rows).map(|i| cells[i * cols + j])) - col[j]).abs()
    });
    row_dev.chain(col_dev).fold(0.0, f64::max)
}

/// One column half-step of IPF. Identical to [`adjust_to_known_marginal`].
pub fn ipf_column_step(table: &JointDistribution, col: &MarginalDistribution) -> Result<AdjustedTable> {
    adjust_to_known_marginal(table, col)
}

/// Iterative proportional fitting, columns first then rows, until both
/// marginals are within `opts.tol` of their targets.
///
/// A table that already satisfies both targets is returned after zero sweeps.
pub fn ipf_fit(
    init: &JointDistribution,
    row_target: &MarginalDistribution,
    col_target: &MarginalDistribution,
    opts: IpfOptions,
) -> Result<IpfFit> {
    check_target(row_target, init.rows())?;
    check_target(col_target, init.cols())?;
    if let Some(index) = init.row_sums().iter().position(|&m| m <= 0.0) {
        return Err(Error::InfeasibleSupport { axis: Axis::Row, index });
    }
    if let Some(index) = init.col_sums().iter().position(|&m| m <= 0.0) {
        return Err(Error::InfeasibleSupport { axis: Axis::Column, index });
    }

    let cols = init.cols();
    let (row_t, col_t) = (row_target.probs(), col_target.probs());
    let mut cells = init.cells().to_vec();
    let mut deviation = marginal_deviation(&cells, cols, row_t, col_t);
    let mut iterations = 0;
    while deviation >= opts.tol && iterations < opts.max_iter {
        scale_columns(&mut cells, cols, col_t);
        scale_rows(&mut cells, cols, row_t);
        iterations += 1;
        deviation = marginal_deviation(&cells, cols, row_t, col_t);
    }
    Ok(IpfFit {
        table: JointDistribution::from_parts(init.rows(), cols, cells),
        iterations,
        converged: deviation < opts.tol,
        max_deviation: deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn joint<const J: usize>(rows: &[[f64; J]]) -> JointDistribution {
        JointDistribution::from_rows(rows).unwrap()
    }

    fn col(p: &[f64]) -> MarginalDistribution {
        MarginalDistribution::column(p.to_vec()).unwrap()
    }

    #[test]
    fn weighted_examples() {
        let w = WeightVector::new(alloc::vec![0.9, 0.1]).unwrap();
        assert_eq!(weighted_univariate(&[0, 1], &w, 2).unwrap(), [0.9, 0.1]);
        let w = WeightVector::new(alloc::vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(weighted_univariate(&[0, 0, 1], &w, 2).unwrap(), [0.75, 0.25]);
        let xs = [0, 2, 2, 1, 2];
        let w = WeightVector::uniform(5).unwrap();
        let p = weighted_univariate(&xs, &w, 3).unwrap();
        for (got, want) in p.iter().zip([0.2, 0.2, 0.6]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn weighted_errors() {
        let w = WeightVector::uniform(2).unwrap();
        assert!(matches!(weighted_univariate(&[0], &w, 2), Err(Error::Dimension { .. })));
        assert!(matches!(
            weighted_univariate(&[0, 5], &w, 2),
            Err(Error::CategoryOutOfRange { position: 1, .. })
        ));
        assert_eq!(WeightVector::new(alloc::vec![0.5, 0.6]), Err(Error::InvalidWeights));
        assert_eq!(WeightVector::new(alloc::vec![1.5, -0.5]), Err(Error::InvalidWeights));
    }

    #[test]
    fn cloned_examples() {
        let z = CloneCounts::new(alloc::vec![3, 1]).unwrap();
        assert_eq!(cloned_estimator(&[0, 1], &z, 2).unwrap(), [0.75, 0.25]);
        let xs = [0, 1, 1, 2];
        let ones = CloneCounts::new(alloc::vec![1; 4]).unwrap();
        let fours = CloneCounts::new(alloc::vec![4; 4]).unwrap();
        assert_eq!(cloned_estimator(&xs, &ones, 3).unwrap(), [0.25, 0.5, 0.25]);
        assert_eq!(cloned_estimator(&xs, &fours, 3).unwrap(), [0.25, 0.5, 0.25]);
        assert_eq!(CloneCounts::new(alloc::vec![1, 0]), Err(Error::InvalidCloneCount { index: 1 }));
        assert!(cloned_estimator(&[0], &ones, 3).is_err());
    }

    #[test]
    fn adjustment_examples() {
        let phat = joint(&[[0.25, 0.25], [0.25, 0.25]]);
        let t = adjust_to_known_marginal(&phat, &col(&[0.8, 0.2])).unwrap();
        assert_eq!(t.cells(), &[0.4, 0.1, 0.4, 0.1]);
        assert_eq!(t.adjusted_row_marginal(), [0.5, 0.5]);
        assert!(!t.has_zero_columns());

        let same = adjust_to_known_marginal(&phat, &col(&[0.5, 0.5])).unwrap();
        assert_eq!(same.cells(), phat.cells());

        let diag = joint(&[[0.5, 0.0], [0.0, 0.5]]);
        let t = adjust_to_known_marginal(&diag, &col(&[0.3, 0.7])).unwrap();
        assert_eq!(t.adjusted_row_marginal(), [0.3, 0.7]);
    }

    #[test]
    fn adjustment_of_accident_table_first_row() {
        let counts = crate::table::CountTable::from_rows(&[
            [346u64, 24, 2],
            [935, 118, 1],
            [739, 192, 4],
            [335, 154, 7],
            [124, 92, 7],
            [41, 50, 6],
            [16, 25, 6],
            [2, 21, 7],
        ])
        .unwrap();
        let phat = counts.empirical_joint().unwrap();
        let t = adjust_to_known_marginal(&phat, &col(&[0.896, 0.100, 0.004])).unwrap();
        let want = 0.896 * (346.0 / 2538.0) + 0.100 * (24.0 / 676.0) + 0.004 * (2.0 / 40.0);
        assert_abs_diff_eq!(t.adjusted_row_marginal()[0], want, epsilon = 1e-15);
        assert_abs_diff_eq!(want, 0.125_900, epsilon = 1e-6);
    }

    #[test]
    fn empty_column_is_masked() {
        let phat = joint(&[[0.5, 0.0, 0.2], [0.3, 0.0, 0.0]]);
        let known = col(&[0.5, 0.3, 0.2]);
        let t = adjust_to_known_marginal(&phat, &known).unwrap();
        assert_eq!(t.zero_columns(), &[1]);
        assert_abs_diff_eq!(sum::sum(t.adjusted_row_marginal()), 0.7, epsilon = 1e-15);
        assert!(t.to_joint().is_err());
    }

    #[test]
    fn known_marginal_must_be_positive_and_sized() {
        let phat = joint(&[[0.25, 0.25], [0.25, 0.25]]);
        assert_eq!(
            adjust_to_known_marginal(&phat, &col(&[1.0, 0.0])),
            Err(Error::ZeroMarginal { index: 1 })
        );
        assert!(matches!(
            adjust_to_known_marginal(&phat, &col(&[0.2, 0.3, 0.5])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn ipf_fixed_point_takes_no_sweeps() {
        let p = joint(&[[0.25, 0.25], [0.25, 0.25]]);
        let half = MarginalDistribution::row(alloc::vec![0.5, 0.5]).unwrap();
        let fit = ipf_fit(&p, &half, &col(&[0.5, 0.5]), IpfOptions::default()).unwrap();
        assert_eq!(fit.iterations, 0);
        assert!(fit.converged);
        assert_eq!(fit.table, p);
    }

    #[test]
    fn ipf_converges_to_both_targets() {
        let p = joint(&[[0.1, 0.2, 0.05], [0.3, 0.05, 0.3]]);
        let rows = MarginalDistribution::row(alloc::vec![0.4, 0.6]).unwrap();
        let cols = col(&[0.5, 0.3, 0.2]);
        let fit = ipf_fit(&p, &rows, &cols, IpfOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.iterations > 0);
        for (g, w) in fit.table.row_marginal().probs().iter().zip(rows.probs()) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-10);
        }
        for (g, w) in fit.table.column_marginal().probs().iter().zip(cols.probs()) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-10);
        }
        for (a, b) in fit.table.cross_product_ratios().iter().zip(p.cross_product_ratios()) {
            assert_abs_diff_eq!(a.value.unwrap(), b.value.unwrap(), epsilon = 1e-9);
        }
    }

    #[test]
    fn ipf_rejects_empty_support() {
        let p = joint(&[[0.5, 0.0], [0.5, 0.0]]);
        let half = MarginalDistribution::row(alloc::vec![0.5, 0.5]).unwrap();
        assert_eq!(
            ipf_fit(&p, &half, &col(&[0.5, 0.5]), IpfOptions::default()),
            Err(Error::InfeasibleSupport { axis: Axis::Column, index: 1 })
        );
    }

    #[test]
    fn ipf_reports_non_convergence() {
        // Zero pattern forces p_12 = p_21 = 0, so rows must equal columns.
        let p = joint(&[[0.5, 0.0], [0.0, 0.5]]);
        let rows = MarginalDistribution::row(alloc::vec![0.4, 0.6]).unwrap();
        let fit = ipf_fit(&p, &rows, &col(&[0.6, 0.4]), IpfOptions { tol: 1e-10, max_iter: 25 })
            .unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.iterations, 25);
        assert_eq!(fit.table.get(0, 1), 0.0);
    }
}
