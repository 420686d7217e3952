//! Dense linear-algebra helpers built on `nalgebra`.
//!
//! All rank decisions in the crate go through [`RankTol`]: a singular value
//! counts as zero when it is at most `rel * sigma_max`, or at most `abs`.

use nalgebra::{DMatrix, DVector};

use crate::tolerances::RANK_TOL;

/// Threshold for deciding which singular values vanish.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankTol {
    pub rel: f64,
    pub abs: f64,
}

impl RankTol {
    pub fn relative(rel: f64) -> Self {
        Self { rel, abs: 0.0 }
    }

    pub fn with_abs(self, abs: f64) -> Self {
        Self { abs, ..self }
    }

    /// Cutoff below (or at) which singular values are treated as zero.
    pub fn cutoff(&self, sigma_max: f64) -> f64 {
        (self.rel * sigma_max).max(self.abs)
    }

    pub fn is_zero(&self, sigma: f64, sigma_max: f64) -> bool {
        sigma_max == 0.0 || sigma <= self.cutoff(sigma_max)
    }
}

impl Default for RankTol {
    fn default() -> Self {
        Self::relative(RANK_TOL)
    }
}

impl From<f64> for RankTol {
    fn from(rel: f64) -> Self {
        Self::relative(rel)
    }
}

/// Singular triplets sorted by decreasing singular value.
pub(crate) struct SortedSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

/// Full SVD with the right singular vectors spanning all of `R^ncols`.
pub(crate) fn sorted_svd(m: &DMatrix<f64>) -> SortedSvd {
    let (rows, cols) = m.shape();
    // Pad with zero rows so that V is square and the kernel is visible.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let u_sorted = u_sorted.rows(0, rows).into_owned();
    let v_sorted = DMatrix::from_fn(cols, order.len(), |r, c| vt[(order[c], r)]);
    SortedSvd {
        u: u_sorted,
        sigma,
        v: v_sorted,
    }
}

/// Numerical rank of `m`.
pub fn rank(m: &DMatrix<f64>, tol: RankTol) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = sorted_svd(m);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    svd.sigma.iter().filter(|&&s| !tol.is_zero(s, smax)).count()
}

/// Orthonormal basis (as columns) of the kernel of `m`.
pub fn kernel(m: &DMatrix<f64>, tol: RankTol) -> DMatrix<f64> {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    let svd = sorted_svd(m);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let r = svd.sigma.iter().filter(|&&s| !tol.is_zero(s, smax)).count();
    svd.v.columns(r, cols - r).into_owned()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn image(m: &DMatrix<f64>, tol: RankTol) -> DMatrix<f64> {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return DMatrix::zeros(rows, 0);
    }
    // Work with the transpose when it is wider so that U is complete.
    let svd = sorted_svd(&m.transpose());
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let r = svd.sigma.iter().filter(|&&s| !tol.is_zero(s, smax)).count();
    svd.v.columns(0, r).into_owned()
}

/// Least-squares solution of `m x = b` through the truncated pseudo-inverse.
pub fn pinv_solve(m: &DMatrix<f64>, b: &DVector<f64>, tol: RankTol) -> DVector<f64> {
    let svd = sorted_svd(m);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let mut x = DVector::zeros(m.ncols());
    for (i, &s) in svd.sigma.iter().enumerate() {
        if tol.is_zero(s, smax) {
            break;
        }
        if i >= svd.u.ncols() {
            break;
        }
        let coef = svd.u.column(i).dot(b) / s;
        x.axpy(coef, &svd.v.column(i), 1.0);
    }
    x
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
}

pub fn max_abs_vec(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let k = kernel(&m, RankTol::default());
        assert_eq!(k.ncols(), 1);
        assert!((k[(0, 0)] + k[(1, 0)]).abs() < 1e-14);
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[0.0, 0.0, 2.0]);
        let k = kernel(&m, RankTol::default());
        assert_eq!(k.ncols(), 2);
        assert!(k.row(2).iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn zero_matrix_has_full_kernel_and_empty_image() {
        let m = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(kernel(&m, RankTol::default()).ncols(), 3);
        assert_eq!(image(&m, RankTol::default()).ncols(), 0);
    }

    #[test]
    fn image_of_tall_matrix() {
        let m = DMatrix::from_row_slice(3, 1, &[1.0, 2.0, 2.0]);
        let im = image(&m, RankTol::default());
        assert_eq!(im.ncols(), 1);
        assert!((im.column(0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pinv_solves_consistent_system() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        let b = DVector::from_vec(vec![1.0, 4.0, 0.0]);
        let x = pinv_solve(&m, &b, RankTol::default());
        assert!((x - DVector::from_vec(vec![1.0, 2.0, 0.0])).norm() < 1e-14);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s = compensated_sum([1e16, 1.0, -1e16]);
        assert_eq!(s, 1.0);
    }
}
