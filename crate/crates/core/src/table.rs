//! Joint and marginal distributions, count tables, sampling, and the 2x2
//! construction from marginals plus a cross-product ratio.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_distr::{Binomial, Distribution};

use crate::error::{Axis, Error, Result};
use crate::rng::StreamRng;
use crate::sum;

/// Absolute tolerance on the total mass of a probability vector or table.
pub const NORMALIZATION_TOL: f64 = 1e-12;

fn check_probabilities(values: &[f64]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let total = sum::sum(values.iter().copied());
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum: total });
    }
    Ok(())
}

/// An exact `I x J` probability table, stored row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, cells: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape);
        }
        if cells.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: cells.len() });
        }
        check_probabilities(&cells)?;
        Ok(Self { rows, cols, cells })
    }

    /// Builds a table from nested rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut cells = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension { expected: cols, found: row.len() });
            }
            cells.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, cells)
    }

    /// The product table `row_i * col_j`.
    pub fn independent(row: &MarginalDistribution, col: &MarginalDistribution) -> Self {
        let cells = row
            .probs()
            .iter()
            .flat_map(|&a| col.probs().iter().map(move |&b| a * b))
            .collect();
        Self { rows: row.len(), cols: col.len(), cells }
    }

    /// Skips validation; callers guarantee shape and normalization.
    pub(crate) fn from_parts(rows: usize, cols: usize, cells: Vec<f64>) -> Self {
        debug_assert_eq!(cells.len(), rows * cols);
        Self { rows, cols, cells }
    }

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

    /// Row-major cell slice.
    #[inline]
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| sum::sum(self.row(i).iter().copied())).collect()
    }

    pub(crate) fn col_sums(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| sum::sum((0..self.rows).map(|i| self.get(i, j))))
            .collect()
    }

    pub fn row_marginal(&self) -> MarginalDistribution {
        MarginalDistribution { axis: Axis::Row, probs: self.row_sums() }
    }

    pub fn column_marginal(&self) -> MarginalDistribution {
        MarginalDistribution { axis: Axis::Column, probs: self.col_sums() }
    }

    /// All cross-product ratios `p_ij p_rs / (p_rj p_is)` with `i < r`, `j < s`,
    /// ordered lexicographically by `(i, r, j, s)`.
    pub fn cross_product_ratios(&self) -> Vec<CrossProductRatio> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for r in i + 1..self.rows {
                for j in 0..self.cols {
                    for s in j + 1..self.cols {
                        let (a, d) = (self.get(i, j), self.get(r, s));
                        let (b, c) = (self.get(i, s), self.get(r, j));
                        let value = if a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0 {
                            Some(a * d / (b * c))
                        } else {
                            None
                        };
                        out.push(CrossProductRatio { rows: (i, r), cols: (j, s), value });
                    }
                }
            }
        }
        out
    }

    /// The single cross-product ratio of a 2x2 table, `None` if a cell is zero.
    pub fn cpr_2x2(&self) -> Result<Option<f64>> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::Dimension { expected: 4, found: self.cells.len() });
        }
        Ok(self.cross_product_ratios()[0].value)
    }

    /// The 2x2 table with marginals `row = (a, 1-a)`, `col = (b, 1-b)` and
    /// cross-product ratio `cpr`.
    ///
    /// The top-left cell `p` solves `(1-t)p^2 + (1-a-b+ta+tb)p - tab = 0`
    /// for `t = cpr`; the root inside `[max(0, a+b-1), min(a, b)]` is taken.
    pub fn from_2x2_marginals_cpr(
        row: &MarginalDistribution,
        col: &MarginalDistribution,
        cpr: f64,
    ) -> Result<Self> {
        if row.len() != 2 {
            return Err(Error::Dimension { expected: 2, found: row.len() });
        }
        if col.len() != 2 {
            return Err(Error::Dimension { expected: 2, found: col.len() });
        }
        if !cpr.is_finite() || cpr <= 0.0 {
            return Err(Error::InvalidCrossProductRatio(cpr));
        }
        let (a, b) = (row.probs()[0], col.probs()[0]);
        let inside = |x: f64| x > 0.0 && x < 1.0;
        if !inside(a) || !inside(b) || !inside(row.probs()[1]) || !inside(col.probs()[1]) {
            return Err(Error::DegenerateMarginal);
        }

        let p11 = if cpr == 1.0 {
            a * b
        } else {
            top_left_cell(a, b, cpr)
        };
        let cells = alloc::vec![p11, a - p11, b - p11, 1.0 - a - b + p11];
        Ok(Self { rows: 2, cols: 2, cells })
    }
}

fn reconstructed_cpr(p: f64, a: f64, b: f64) -> f64 {
    p * (1.0 - a - b + p) / ((a - p) * (b - p))
}

fn top_left_cell(a: f64, b: f64, theta: f64) -> f64 {
    let qa = 1.0 - theta;
    let qb = 1.0 - a - b + theta * (a + b);
    let qc = -theta * a * b;
    // Both roots from the cancellation-free pair q/qa and qc/q.
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    let q = -0.5 * (qb + libm::copysign(libm::sqrt(disc), qb));
    let mut roots = [f64::NAN; 2];
    if q != 0.0 {
        roots[0] = qc / q;
    }
    if qa != 0.0 {
        roots[1] = q / qa;
    }

    let lo = (a + b - 1.0).max(0.0);
    let hi = a.min(b);
    let feasible = |p: f64| p.is_finite() && p > lo && p < hi;
    let error = |p: f64| libm::fabs(libm::log(reconstructed_cpr(p, a, b) / theta));
    match (feasible(roots[0]), feasible(roots[1])) {
        (true, false) => roots[0],
        (false, true) => roots[1],
        (true, true) => {
            if error(roots[0]) <= error(roots[1]) {
                roots[0]
            } else {
                roots[1]
            }
        }
        // Rounding pushed the root onto the boundary; clamp to the interval.
        (false, false) => {
            let pick = if roots[0].is_finite() { roots[0] } else { roots[1] };
            pick.clamp(lo, hi)
        }
    }
}

/// One cross-product ratio entry; `value` is `None` when any of the four
/// cells involved is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrossProductRatio {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub value: Option<f64>,
}

/// A probability vector along one axis of a table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MarginalDistribution {
    axis: Axis,
    probs: Vec<f64>,
}

impl MarginalDistribution {
    pub fn new(axis: Axis, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyShape);
        }
        check_probabilities(&probs)?;
        Ok(Self { axis, probs })
    }

    pub fn row(probs: Vec<f64>) -> Result<Self> {
        Self::new(Axis::Row, probs)
    }

    pub fn column(probs: Vec<f64>) -> Result<Self> {
        Self::new(Axis::Column, probs)
    }

    /// `(p, 1 - p)` along `axis`.
    pub fn binary(axis: Axis, p: f64) -> Result<Self> {
        Self::new(axis, alloc::vec![p, 1.0 - p])
    }

    /// Normalizes nonnegative counts.
    pub fn from_counts(axis: Axis, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::NoObservations);
        }
        let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Self::new(axis, probs)
    }

    #[inline]
    pub fn axis(&self) -> Axis {
        self.axis
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Checks the standing assumption for a known marginal: every entry positive.
    pub fn require_positive(&self) -> Result<()> {
        match self.probs.iter().position(|&p| p <= 0.0) {
            Some(index) => Err(Error::ZeroMarginal { index }),
            None => Ok(()),
        }
    }
}

/// Nonnegative integer counts of an `I x J` table, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CountTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    total: u64,
}

impl CountTable {
    pub fn new(rows: usize, cols: usize, counts: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape);
        }
        if counts.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: counts.len() });
        }
        let total = counts.iter().sum();
        Ok(Self { rows, cols, counts, total })
    }

    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut counts = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension { expected: cols, found: row.len() });
            }
            counts.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, counts)
    }

    /// Tabulates a sample.
    pub fn from_sample(batch: &SampleBatch) -> Self {
        let mut counts = alloc::vec![0u64; batch.rows * batch.cols];
        for &(x, y) in &batch.pairs {
            counts[x * batch.cols + y] += 1;
        }
        Self { rows: batch.rows, cols: batch.cols, counts, total: batch.pairs.len() as u64 }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    #[inline]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    /// Relative frequencies `n_ij / n`.
    pub fn empirical_joint(&self) -> Result<JointDistribution> {
        if self.total == 0 {
            return Err(Error::NoObservations);
        }
        let n = self.total as f64;
        let cells = self.counts.iter().map(|&c| c as f64 / n).collect();
        Ok(JointDistribution { rows: self.rows, cols: self.cols, cells })
    }
}

/// An i.i.d. two-dimensional sample with zero-based categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBatch {
    rows: usize,
    cols: usize,
    pairs: Vec<(usize, usize)>,
}

impl SampleBatch {
    pub fn new(rows: usize, cols: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape);
        }
        for (position, &(x, y)) in pairs.iter().enumerate() {
            if x >= rows {
                return Err(Error::CategoryOutOfRange { position, category: x, len: rows });
            }
            if y >= cols {
                return Err(Error::CategoryOutOfRange { position, category: y, len: cols });
            }
        }
        Ok(Self { rows, cols, pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// First components.
    pub fn xs(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(x, _)| x).collect()
    }
}

/// Draws a multinomial `(n, p)` count table.
///
/// Cells are visited row-major; each takes a binomial share of what is left.
pub fn sample(p: &JointDistribution, n: u64, seed: u64) -> Result<CountTable> {
    let mut rng = StreamRng::seed_from_u64(seed);
    sample_with(p, n, &mut rng)
}

/// [`sample`] with a caller-owned generator.
pub fn sample_with<R: Rng + ?Sized>(
    p: &JointDistribution,
    n: u64,
    rng: &mut R,
) -> Result<CountTable> {
    if n == 0 {
        return Err(Error::ZeroSampleSize);
    }
    let counts = multinomial(p.cells(), n, rng);
    Ok(CountTable { rows: p.rows, cols: p.cols, counts, total: n })
}

pub(crate) fn multinomial<R: Rng + ?Sized>(probs: &[f64], n: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = alloc::vec![0u64; probs.len()];
    let mut remaining = n;
    let mut mass = 1.0;
    let last = probs.len() - 1;
    for (k, &pk) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if k == last {
            counts[k] = remaining;
            break;
        }
        if pk <= 0.0 {
            continue;
        }
        let share = if mass > 0.0 { (pk / mass).min(1.0) } else { 1.0 };
        let draw = if share >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, share).expect("share lies in [0, 1]").sample(rng)
        };
        counts[k] = draw;
        remaining -= draw;
        mass -= pk;
    }
    counts
}

/// Draws `n` individual pairs from `p` by inverse CDF over the row-major cells.
pub fn sample_pairs(p: &JointDistribution, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::ZeroSampleSize);
    }
    let mut rng = StreamRng::seed_from_u64(seed);
    let cdf = cumulative(p.cells());
    let pairs = (0..n)
        .map(|_| {
            let k = draw_index(&cdf, &mut rng);
            (k / p.cols, k % p.cols)
        })
        .collect();
    Ok(SampleBatch { rows: p.rows, cols: p.cols, pairs })
}

/// `n` i.i.d. zero-based categories from the probability vector `probs`.
pub fn sample_categories<R: Rng + ?Sized>(probs: &[f64], n: usize, rng: &mut R) -> Vec<usize> {
    let cdf = cumulative(probs);
    (0..n).map(|_| draw_index(&cdf, rng)).collect()
}

pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = sum::NeumaierSum::new();
    probs
        .iter()
        .map(|&p| {
            acc.add(p);
            acc.value()
        })
        .collect()
}

pub(crate) fn draw_index<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random::<f64>() * cdf[cdf.len() - 1];
    // First index whose cumulative mass exceeds u; zero-mass cells are never hit.
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sym() -> JointDistribution {
        JointDistribution::from_rows(&[[0.375, 0.125], [0.125, 0.375]]).unwrap()
    }

    #[test]
    fn marginals_of_symmetric_table() {
        assert_eq!(sym().row_marginal().probs(), &[0.5, 0.5]);
        assert_eq!(sym().column_marginal().probs(), &[0.5, 0.5]);
        assert_eq!(sym().row_marginal().axis(), Axis::Row);
    }

    #[test]
    fn single_row_and_single_cell() {
        let p = JointDistribution::from_rows(&[[0.2, 0.3, 0.5]]).unwrap();
        assert_eq!(p.row_marginal().probs(), &[1.0]);
        let p = JointDistribution::from_rows(&[[1.0]]).unwrap();
        assert_eq!(p.column_marginal().probs(), &[1.0]);
    }

    #[test]
    fn product_table_recovers_factors() {
        let a = MarginalDistribution::row(alloc::vec![0.2, 0.3, 0.5]).unwrap();
        let b = MarginalDistribution::column(alloc::vec![0.6, 0.4]).unwrap();
        let p = JointDistribution::independent(&a, &b);
        for (x, y) in p.column_marginal().probs().iter().zip(b.probs()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
        for r in p.cross_product_ratios() {
            assert_abs_diff_eq!(r.value.unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(JointDistribution::new(0, 2, alloc::vec![]), Err(Error::EmptyShape));
        assert!(matches!(
            JointDistribution::new(1, 2, alloc::vec![0.5, 0.6]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            JointDistribution::new(1, 2, alloc::vec![-0.5, 1.5]),
            Err(Error::InvalidProbability { index: 0, .. })
        ));
        assert!(matches!(
            JointDistribution::new(1, 2, alloc::vec![1.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn empirical_joint_cases() {
        let c = CountTable::from_rows(&[[2u64, 2], [2, 2]]).unwrap();
        assert!(c.empirical_joint().unwrap().cells().iter().all(|&x| x == 0.25));
        let c = CountTable::from_rows(&[[1u64, 0], [0, 0]]).unwrap();
        assert_eq!(c.empirical_joint().unwrap().cells(), &[1.0, 0.0, 0.0, 0.0]);
        let c = CountTable::from_rows(&[[0u64, 0]]).unwrap();
        assert_eq!(c.empirical_joint(), Err(Error::NoObservations));
    }

    #[test]
    fn cpr_of_symmetric_table_is_nine() {
        assert_abs_diff_eq!(sym().cpr_2x2().unwrap().unwrap(), 9.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_cell_flags_ratio() {
        let p = JointDistribution::from_rows(&[[0.5, 0.0, 0.1], [0.2, 0.1, 0.1]]).unwrap();
        let r = p.cross_product_ratios();
        // (0,1) x (0,1), (0,1) x (0,2), (0,1) x (1,2)
        assert_eq!(r.len(), 3);
        assert_eq!(r[0].value, None);
        assert_abs_diff_eq!(r[1].value.unwrap(), 0.5 * 0.1 / (0.1 * 0.2), epsilon = 1e-12);
        assert_eq!(r[2].value, None);
    }

    fn binary(axis: Axis, p: f64) -> MarginalDistribution {
        MarginalDistribution::binary(axis, p).unwrap()
    }

    #[test]
    fn build_2x2_examples() {
        let half_r = binary(Axis::Row, 0.5);
        let half_c = binary(Axis::Column, 0.5);
        let p = JointDistribution::from_2x2_marginals_cpr(&half_r, &half_c, 1.0).unwrap();
        assert_eq!(p.cells(), &[0.25; 4]);

        // 8p^2 - 9p + 2.25 = 0 has roots 0.75 and 0.375; only 0.375 is in [0, 0.5].
        let p = JointDistribution::from_2x2_marginals_cpr(&half_r, &half_c, 9.0).unwrap();
        assert_abs_diff_eq!(p.get(0, 0), 0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(p.cpr_2x2().unwrap().unwrap(), 9.0, epsilon = 1e-10);

        let p = JointDistribution::from_2x2_marginals_cpr(
            &binary(Axis::Row, 0.9),
            &binary(Axis::Column, 0.7),
            1.0,
        )
        .unwrap();
        assert_abs_diff_eq!(p.get(0, 0), 0.63, epsilon = 1e-15);
    }

    #[test]
    fn build_2x2_tracks_cpr_across_grid() {
        for &(a, b) in &[(0.5, 0.5), (0.9, 0.7), (0.2, 0.7), (0.01, 0.99)] {
            let row = binary(Axis::Row, a);
            let col = binary(Axis::Column, b);
            for k in -50..=50 {
                let cpr = libm::exp(k as f64 * 0.2);
                let p = JointDistribution::from_2x2_marginals_cpr(&row, &col, cpr).unwrap();
                assert!(p.cells().iter().all(|&c| c > 0.0), "a={a} b={b} cpr={cpr}");
                assert_abs_diff_eq!(p.row_marginal().probs()[0], a, epsilon = 1e-12);
                assert_abs_diff_eq!(p.column_marginal().probs()[0], b, epsilon = 1e-12);
                let got = p.cpr_2x2().unwrap().unwrap();
                assert!((got / cpr - 1.0).abs() < 1e-9, "cpr {cpr} -> {got}");
            }
        }
    }

    #[test]
    fn build_2x2_errors() {
        let r = binary(Axis::Row, 0.5);
        let c = binary(Axis::Column, 0.5);
        for bad in [0.0, -1.0, f64::INFINITY, f64::NAN] {
            assert!(matches!(
                JointDistribution::from_2x2_marginals_cpr(&r, &c, bad),
                Err(Error::InvalidCrossProductRatio(_))
            ));
        }
        let degenerate = binary(Axis::Row, 1.0);
        assert_eq!(
            JointDistribution::from_2x2_marginals_cpr(&degenerate, &c, 2.0),
            Err(Error::DegenerateMarginal)
        );
        let three = MarginalDistribution::row(alloc::vec![0.2, 0.3, 0.5]).unwrap();
        assert!(JointDistribution::from_2x2_marginals_cpr(&three, &c, 2.0).is_err());
    }

    #[test]
    fn point_mass_sampling() {
        let p = JointDistribution::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        for seed in 0..5 {
            let c = sample(&p, 17, seed).unwrap();
            assert_eq!(c.counts(), &[0, 0, 17, 0]);
            assert_eq!(c.total(), 17);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let p = sym();
        assert_eq!(sample(&p, 1000, 7).unwrap(), sample(&p, 1000, 7).unwrap());
        assert_ne!(sample(&p, 1000, 7).unwrap(), sample(&p, 1000, 8).unwrap());
        assert_eq!(sample(&p, 0, 7), Err(Error::ZeroSampleSize));
    }

    #[test]
    fn pairs_tabulate_to_sample_size() {
        let p = sym();
        let batch = sample_pairs(&p, 500, 3).unwrap();
        let c = CountTable::from_sample(&batch);
        assert_eq!(c.total(), 500);
        assert!(SampleBatch::new(2, 2, alloc::vec![(0, 2)]).is_err());
    }
}
