//! Asymptotic covariance of the unadjusted and adjusted marginal
//! estimators, and the quantities that compare them.
//!
//! For a joint table `p` with row marginal `p_i.` and column marginal `p_.j`:
//!
//! * `Sigma_rs = p_r. (1{r=s} - p_s.)` is the multinomial covariance of the
//!   plain row frequencies;
//! * `Gamma_kl = p_k. 1{k=l} - sum_j p_kj p_lj / p_.j` is the covariance of
//!   the row sums after rescaling columns to the known `p_.j`.
//!
//! `Gamma` is also the expected covariance of one observation's row
//! indicators given its column, which [`conditional_cov_oracle`] computes by
//! direct enumeration as an independent check.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimators::WeightVector;
use crate::linalg;
use crate::sum;
use crate::table::JointDistribution;

/// A symmetric `I x I` matrix on the `sqrt(n)` scale, row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CovarianceMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl CovarianceMatrix {
    pub(crate) fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for k in 0..dim {
            for l in 0..dim {
                entries.push(f(k, l));
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[k * self.dim + l]
    }

    #[inline]
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.get(k, k)).collect()
    }

    /// `self - other`, e.g. `Sigma - Gamma`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, found: other.dim });
        }
        Ok(Self::from_fn(self.dim, |k, l| self.get(k, l) - other.get(k, l)))
    }

    /// `c^T M c`.
    pub fn quadratic_form(&self, c: &[f64]) -> Result<f64> {
        if c.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: c.len() });
        }
        Ok(sum::sum((0..self.dim).flat_map(|k| {
            (0..self.dim).map(move |l| c[k] * self.get(k, l) * c[l])
        })))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        (0..self.dim)
            .flat_map(|k| (0..self.dim).map(move |l| (k, l)))
            .map(|(k, l)| (self.get(k, l) - self.get(l, k)).abs())
            .fold(0.0, f64::max)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.dim).map(|r| sum::sum(r.iter().copied())).collect()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::symmetric_eigenvalues(&self.entries, self.dim)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// Multinomial covariance `p_r (1{r=s} - p_s)` of a probability vector.
pub fn sigma_univariate(p: &[f64]) -> CovarianceMatrix {
    CovarianceMatrix::from_fn(p.len(), |r, s| {
        if r == s {
            p[r] * (1.0 - p[r])
        } else {
            -p[r] * p[s]
        }
    })
}

/// Asymptotic covariance of the unadjusted row-marginal estimator.
pub fn sigma_marginal(p: &JointDistribution) -> CovarianceMatrix {
    sigma_univariate(&p.row_sums())
}

fn positive_columns(p: &JointDistribution) -> Result<Vec<f64>> {
    let cols = p.col_sums();
    match cols.iter().position(|&m| m <= 0.0) {
        Some(index) => Err(Error::ZeroMarginal { index }),
        None => Ok(cols),
    }
}

/// Asymptotic covariance of the adjusted row-marginal estimator,
/// `Gamma_kl = p_k. 1{k=l} - sum_j p_kj p_lj / p_.j`.
pub fn gamma_adjusted(p: &JointDistribution) -> Result<CovarianceMatrix> {
    let col = positive_columns(p)?;
    let row = p.row_sums();
    Ok(CovarianceMatrix::from_fn(p.rows(), |k, l| {
        let shared = sum::sum((0..p.cols()).map(|j| p.get(k, j) * p.get(l, j) / col[j]));
        if k == l {
            row[k] - shared
        } else {
            -shared
        }
    }))
}

/// `E[Cov(1{X=k}, 1{X=l} | Y)]` for a single draw, by enumerating the
/// outcomes of `X` within each column and averaging over `Y`.
pub fn conditional_cov_oracle(p: &JointDistribution) -> Result<CovarianceMatrix> {
    let col = positive_columns(p)?;
    let (rows, cols) = (p.rows(), p.cols());
    let mut acc = alloc::vec![sum::NeumaierSum::new(); rows * rows];
    for (j, &py) in col.iter().enumerate().take(cols) {
        let conditional: Vec<f64> = (0..rows).map(|i| p.get(i, j) / py).collect();
        for k in 0..rows {
            for l in 0..rows {
                // E[1{X=k} 1{X=l} | Y=j] and the product of conditional means.
                let mut joint = 0.0;
                let mut mean_k = 0.0;
                let mut mean_l = 0.0;
                for (i, &q) in conditional.iter().enumerate() {
                    let ik = f64::from(u8::from(i == k));
                    let il = f64::from(u8::from(i == l));
                    joint += q * ik * il;
                    mean_k += q * ik;
                    mean_l += q * il;
                }
                acc[k * rows + l].add(py * (joint - mean_k * mean_l));
            }
        }
    }
    Ok(CovarianceMatrix::from_fn(rows, |k, l| acc[k * rows + l].value()))
}

/// Both sides of `c^T (Sigma - Gamma) c = Var(E[c_X | Y])`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VarianceGap {
    /// From the covariance matrices.
    pub gap: f64,
    /// Variance of the conditional mean, by enumeration over columns.
    pub direct: f64,
}

pub fn variance_gap_quadratic(p: &JointDistribution, c: &[f64]) -> Result<VarianceGap> {
    if c.len() != p.rows() {
        return Err(Error::Dimension { expected: p.rows(), found: c.len() });
    }
    let diff = sigma_marginal(p).difference(&gamma_adjusted(p)?)?;
    let gap = diff.quadratic_form(c)?;

    let col = positive_columns(p)?;
    let cond_mean: Vec<f64> = (0..p.cols())
        .map(|j| sum::sum((0..p.rows()).map(|i| c[i] * p.get(i, j))) / col[j])
        .collect();
    let mean = sum::sum(col.iter().zip(&cond_mean).map(|(w, m)| w * m));
    let direct = sum::sum(col.iter().zip(&cond_mean).map(|(w, m)| w * (m - mean) * (m - mean)));
    Ok(VarianceGap { gap, direct })
}

/// Population chi-square dependence `sum_ij (p_ij - p_i. p_.j)^2 / (p_i. p_.j)`,
/// a lower bound for `sum_i (Sigma_ii - Gamma_ii) / Sigma_ii`.
pub fn chi2_reduction_bound(p: &JointDistribution) -> Result<f64> {
    let row = p.row_sums();
    let col = p.col_sums();
    if let Some(index) = row.iter().position(|&m| m <= 0.0) {
        return Err(Error::ZeroMarginal { index });
    }
    if let Some(index) = col.iter().position(|&m| m <= 0.0) {
        return Err(Error::ZeroMarginal { index });
    }
    Ok(sum::sum((0..p.rows()).flat_map(|i| {
        let (row, col) = (&row, &col);
        (0..p.cols()).map(move |j| {
            let e = row[i] * col[j];
            let d = p.get(i, j) - e;
            d * d / e
        })
    })))
}

/// `sum_t w_t^2`; the weighted estimator's variance is `Sigma` times this.
/// At least `1/n`, with equality only for uniform weights.
pub fn effective_sample_factor(w: &WeightVector) -> f64 {
    sum::sum(w.as_slice().iter().map(|x| x * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::MarginalDistribution;
    use approx::assert_abs_diff_eq;

    fn sym() -> JointDistribution {
        JointDistribution::from_rows(&[[0.375, 0.125], [0.125, 0.375]]).unwrap()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_univariate(&[0.5, 0.5]).entries(), &[0.25, -0.25, -0.25, 0.25]);
        assert!(sigma_univariate(&[1.0, 0.0]).entries().iter().all(|&x| x == 0.0));
        let s = sigma_univariate(&[0.9, 0.1]);
        for (g, w) in s.entries().iter().zip([0.09, -0.09, -0.09, 0.09]) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-15);
        }
        assert_eq!(sigma_marginal(&sym()).entries(), &[0.25, -0.25, -0.25, 0.25]);
    }

    #[test]
    fn gamma_of_symmetric_table() {
        // 0.5 - (0.375^2 + 0.125^2) / 0.5
        let g = gamma_adjusted(&sym()).unwrap();
        assert_abs_diff_eq!(g.get(0, 0), 0.1875, epsilon = 1e-15);
        assert_abs_diff_eq!(g.get(0, 1), -0.1875, epsilon = 1e-15);
        let o = conditional_cov_oracle(&sym()).unwrap();
        assert_abs_diff_eq!(o.get(0, 0), 0.1875, epsilon = 1e-15);
    }

    #[test]
    fn gamma_equals_sigma_under_independence() {
        let a = MarginalDistribution::row(alloc::vec![0.2, 0.3, 0.5]).unwrap();
        let b = MarginalDistribution::column(alloc::vec![0.1, 0.6, 0.3]).unwrap();
        let p = JointDistribution::independent(&a, &b);
        let diff = sigma_marginal(&p).difference(&gamma_adjusted(&p).unwrap()).unwrap();
        assert!(diff.max_abs_entry() < 1e-15);
        let o = conditional_cov_oracle(&p).unwrap();
        for (x, y) in o.entries().iter().zip(sigma_marginal(&p).entries()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn deterministic_column_has_no_conditional_variance() {
        // Column 0 is all in row 1; column 1 is split.
        let p = JointDistribution::from_rows(&[[0.0, 0.2], [0.5, 0.3]]).unwrap();
        let g = gamma_adjusted(&p).unwrap();
        // Only column 1 contributes: 0.5 * (0.4 * 0.6)
        assert_abs_diff_eq!(g.get(0, 0), 0.5 * 0.4 * 0.6, epsilon = 1e-15);
    }

    #[test]
    fn zero_column_is_an_error() {
        let p = JointDistribution::from_rows(&[[0.5, 0.0], [0.5, 0.0]]).unwrap();
        assert_eq!(gamma_adjusted(&p), Err(Error::ZeroMarginal { index: 1 }));
        assert_eq!(conditional_cov_oracle(&p), Err(Error::ZeroMarginal { index: 1 }));
        assert!(chi2_reduction_bound(&p).is_err());
    }

    #[test]
    fn gap_examples() {
        let g = variance_gap_quadratic(&sym(), &[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(g.gap, 0.0625, epsilon = 1e-15);
        assert_abs_diff_eq!(g.direct, 0.0625, epsilon = 1e-15);
        let g = variance_gap_quadratic(&sym(), &[3.0, 3.0]).unwrap();
        assert_abs_diff_eq!(g.gap, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.direct, 0.0, epsilon = 1e-14);
        assert!(variance_gap_quadratic(&sym(), &[1.0]).is_err());
    }

    #[test]
    fn chi2_examples() {
        assert_abs_diff_eq!(chi2_reduction_bound(&sym()).unwrap(), 0.25, epsilon = 1e-15);
        let near = JointDistribution::from_rows(&[[0.49, 0.01], [0.01, 0.49]]).unwrap();
        assert_abs_diff_eq!(chi2_reduction_bound(&near).unwrap(), 0.9216, epsilon = 1e-14);
        let indep = JointDistribution::from_rows(&[[0.06, 0.14], [0.24, 0.56]]).unwrap();
        assert_abs_diff_eq!(chi2_reduction_bound(&indep).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn effective_sample_factor_examples() {
        let u = WeightVector::uniform(100).unwrap();
        assert_abs_diff_eq!(effective_sample_factor(&u), 0.01, epsilon = 1e-16);
        let mut point = alloc::vec![0.0; 10];
        point[0] = 1.0;
        assert_eq!(effective_sample_factor(&WeightVector::new(point).unwrap()), 1.0);
        let w = WeightVector::new(alloc::vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(effective_sample_factor(&w), 0.375);
    }

    #[test]
    fn matrix_invariants_on_symmetric_table() {
        let g = gamma_adjusted(&sym()).unwrap();
        assert_eq!(g.max_asymmetry(), 0.0);
        assert!(g.row_sums().iter().all(|s| s.abs() < 1e-15));
        assert!(g.min_eigenvalue() > -1e-12);
    }
}
