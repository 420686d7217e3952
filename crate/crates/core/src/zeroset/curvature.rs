//! Second fundamental forms of implicitly defined submanifolds and the
//! umbilicity test.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;
use crate::forms::{MetricForm, Subspace};
use crate::linalg::{self, RankTol};
use crate::model::ZeroModel;
use crate::tolerances::UMBILICITY_TOL;

/// A set `{ x : F(x) = 0 }` with a Jacobian.
pub trait ImplicitSet: Sync {
    fn ambient_dim(&self) -> usize;
    fn residual(&self, x: &DVector<f64>) -> DVector<f64>;
    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64>;
}

impl ImplicitSet for ConformalFieldParams {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        self.evaluate(x)
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.gradient(x)
    }
}

impl ImplicitSet for ZeroModel {
    fn ambient_dim(&self) -> usize {
        ZeroModel::ambient_dim(self)
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        let y = x - self.base();
        let normal = self.carrier().euclidean_complement();
        let lin = normal.basis().transpose() * &y;
        match self {
            ZeroModel::Subspace { .. } => lin,
            ZeroModel::ConeInH { metric, .. } => {
                let mut out = DVector::zeros(lin.len() + 1);
                out.rows_mut(0, lin.len()).copy_from(&lin);
                out[lin.len()] = metric.norm_sq(&y);
                out
            }
        }
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.ambient_dim();
        let normal = self.carrier().euclidean_complement();
        let k = normal.dim();
        match self {
            ZeroModel::Subspace { .. } => normal.basis().transpose(),
            ZeroModel::ConeInH { metric, .. } => {
                let y = x - self.base();
                let mut j = DMatrix::zeros(k + 1, n);
                j.rows_mut(0, k).copy_from(&normal.basis().transpose());
                j.row_mut(k).copy_from(&(metric.lower(&y) * 2.0).transpose());
                j
            }
        }
    }
}

/// The graph `x_3 = x_1^2 + 2 x_2^2` in `R^3`, which is not umbilical at the
/// origin.
#[derive(Clone, Copy, Debug, Default)]
pub struct ControlQuadric;

impl ImplicitSet for ControlQuadric {
    fn ambient_dim(&self) -> usize {
        3
    }

    fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_element(1, x[2] - x[0] * x[0] - 2.0 * x[1] * x[1])
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_row_slice(1, 3, &[-2.0 * x[0], -4.0 * x[1], 1.0])
    }
}

/// `b(ξ, η) = π ∇_ξ η` at a point, in Euclidean tangent/normal frames. The
/// quotient `T_x M / T_x K` is represented by normal coordinates.
#[derive(Clone, Debug)]
pub struct SecondFundamentalForm {
    pub point: DVector<f64>,
    /// Orthonormal tangent frame (columns).
    pub tangent: DMatrix<f64>,
    /// Orthonormal normal frame (columns).
    pub normal: DMatrix<f64>,
    /// One symmetric `d x d` matrix per normal direction.
    pub b: Vec<DMatrix<f64>>,
    pub step: f64,
}

impl SecondFundamentalForm {
    pub fn dim(&self) -> usize {
        self.tangent.ncols()
    }

    /// `b(ξ, η)` for tangent coordinate vectors, in normal coordinates.
    pub fn apply(&self, xi: &DVector<f64>, eta: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.b.len(), self.b.iter().map(|m| (xi.transpose() * m * eta)[(0, 0)]))
    }

    /// Tangent coordinates of an ambient tangent vector.
    pub fn tangent_coords(&self, v: &DVector<f64>) -> DVector<f64> {
        self.tangent.transpose() * v
    }

    pub fn frobenius(&self) -> f64 {
        self.b.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }
}

/// Normal offset `f(s)` with `F(x0 + T s + N f) = 0`, by Gauss–Newton.
fn normal_offset(set: &dyn ImplicitSet, x0: &DVector<f64>, t: &DMatrix<f64>, nrm: &DMatrix<f64>, s: &DVector<f64>) -> Result<DVector<f64>> {
    let base = x0 + t * s;
    let mut f = DVector::zeros(nrm.ncols());
    for _ in 0..60 {
        let x = &base + nrm * &f;
        let r = set.residual(&x);
        let jn = set.jacobian(&x) * nrm;
        let step = linalg::pinv_solve(&jn, &r, RankTol::default());
        f -= &step;
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            return Ok(f);
        }
    }
    let x = &base + nrm * &f;
    if set.residual(&x).norm() <= 1e-12 * (1.0 + x.norm()) {
        Ok(f)
    } else {
        Err(Error::NonConvergent("normal offset did not converge".into()))
    }
}

/// Second fundamental form of `set` at `x0` by central second differences
/// of the graph over the tangent space. `dim` is the expected dimension of
/// the set; a different tangent rank means `x0` is singular.
pub fn second_fundamental_form(set: &dyn ImplicitSet, x0: &DVector<f64>, dim: usize, h: f64) -> Result<SecondFundamentalForm> {
    let n = set.ambient_dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            what: "point",
            expected: n,
            got: x0.len(),
        });
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let j = set.jacobian(x0);
    let tangent = linalg::kernel(&j, RankTol::default());
    if tangent.ncols() != dim || dim == 0 {
        return Err(Error::Precondition(format!(
            "singular point or rank-deficient tangent fit (tangent rank {}, expected {dim})",
            tangent.ncols()
        )));
    }
    let normal = Subspace::from_orthonormal(tangent.clone()).euclidean_complement().basis().clone();
    let d = dim;
    let off = |s: DVector<f64>| normal_offset(set, x0, &tangent, &normal, &s);
    let f0 = off(DVector::zeros(d))?;
    let mut second = vec![DMatrix::zeros(d, d); normal.ncols()];
    let unit = |a: usize| {
        let mut e = DVector::zeros(d);
        e[a] = h;
        e
    };
    for a in 0..d {
        let faa = (off(unit(a))? - &f0 * 2.0 + off(-unit(a))?) / (h * h);
        for (l, m) in second.iter_mut().enumerate() {
            m[(a, a)] = faa[l];
        }
        for bb in (a + 1)..d {
            let (ea, eb) = (unit(a), unit(bb));
            let fab = (off(&ea + &eb)? - off(&ea - &eb)? - off(-&ea + &eb)? + off(-&ea - &eb)?) / (4.0 * h * h);
            for (l, m) in second.iter_mut().enumerate() {
                m[(a, bb)] = fab[l];
                m[(bb, a)] = fab[l];
            }
        }
    }
    Ok(SecondFundamentalForm {
        point: x0.clone(),
        tangent,
        normal,
        b: second,
        step: h,
    })
}

/// Umbilicity residuals over a set of points.
#[derive(Clone, Debug, Serialize)]
pub struct UmbilicityReport {
    pub points: usize,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Points whose tangent space is null; tested for total geodesy.
    pub null_points: usize,
    pub max_null_curvature: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Curvature below this Frobenius norm is discretisation noise.
const FLAT_NOISE: f64 = 1e-7;

/// Fits `b = g_K ⊗ ν` at each point and reports the relative residual
/// `|b - g_K ⊗ ν| / |b|`. Points with a null tangent space are checked for
/// `b = 0` instead.
pub fn umbilicity_check(
    set: &dyn ImplicitSet,
    points: &[DVector<f64>],
    dim: usize,
    metric: &MetricForm,
    h: f64,
) -> Result<UmbilicityReport> {
    if points.is_empty() {
        return Err(Error::InsufficientSample("no points to test".into()));
    }
    let mut residuals = Vec::with_capacity(points.len());
    let mut null_points = 0;
    let mut max_null_curvature = 0.0_f64;
    for x in points {
        let sff = second_fundamental_form(set, x, dim, h)?;
        let gk = sff.tangent.transpose() * metric.gram() * &sff.tangent;
        let bnorm = sff.frobenius();
        if linalg::max_abs(&gk) <= 1e-10 * metric.scale() {
            null_points += 1;
            max_null_curvature = max_null_curvature.max(bnorm);
            residuals.push(if bnorm <= FLAT_NOISE { 0.0 } else { bnorm });
            continue;
        }
        if bnorm <= FLAT_NOISE {
            residuals.push(0.0);
            continue;
        }
        let gg = gk.norm_squared();
        let mut res2 = 0.0;
        for m in &sff.b {
            let nu = gk.component_mul(m).sum() / gg;
            res2 += (m - &gk * nu).norm_squared();
        }
        residuals.push(res2.sqrt() / bnorm);
    }
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(UmbilicityReport {
        points: points.len(),
        residuals,
        max_residual,
        null_points,
        max_null_curvature,
        tol: UMBILICITY_TOL,
        pass: max_residual <= UMBILICITY_TOL,
    })
}
