//! Classification of zeros and the kernel structure at a zero.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, RationalMatrix};
use crate::field::ConformalFieldParams;
use crate::forms::{self, Subspace};
use crate::linalg::{self, RankTol};
use crate::model::{ModelKind, ZeroModel};
use crate::tolerances::{IMAGE_RESIDUAL_TOL, PHI_ZERO_TOL, RANK_TOL};

/// Case tag of a zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ZeroCase {
    /// Not essential: the field is Killing after a conformal rescaling.
    #[serde(rename = "i")]
    I,
    /// Essential, metric indefinite on `H`.
    #[serde(rename = "ii")]
    II,
    /// Essential, metric semidefinite on `H`.
    #[serde(rename = "iii")]
    III,
}

impl std::fmt::Display for ZeroCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ZeroCase::I => "i",
            ZeroCase::II => "ii",
            ZeroCase::III => "iii",
        })
    }
}

/// Everything the classifier decides about a zero `z`.
#[derive(Clone, Debug)]
pub struct PointClassification {
    pub z: DVector<f64>,
    pub phi_z: f64,
    pub grad_phi_in_image: bool,
    pub essential: bool,
    pub case: ZeroCase,
    /// `Ker ∇v_z`.
    pub kernel: Subspace,
    /// `H = Ker ∇v_z ∩ Ker dphi_z`.
    pub h: Subspace,
    /// `V = H ∩ H^⊥`.
    pub v: Subspace,
    pub model: ZeroModel,
    /// Whether the decisions were made in exact rational arithmetic.
    pub exact: bool,
}

/// Serializable digest of a classification.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClassificationSummary {
    pub case: ZeroCase,
    pub essential: bool,
    pub phi_z: f64,
    pub grad_phi_in_image: bool,
    pub dim_kernel: usize,
    pub dim_h: usize,
    pub dim_v: usize,
    pub model_kind: ModelKind,
    pub model_dim: usize,
    pub exact: bool,
}

impl PointClassification {
    pub fn summary(&self) -> ClassificationSummary {
        ClassificationSummary {
            case: self.case,
            essential: self.essential,
            phi_z: self.phi_z,
            grad_phi_in_image: self.grad_phi_in_image,
            dim_kernel: self.kernel.dim(),
            dim_h: self.h.dim(),
            dim_v: self.v.dim(),
            model_kind: self.model.kind(),
            model_dim: self.model.analytic_dim(),
            exact: self.exact,
        }
    }
}

/// Rank tolerance used at a zero: relative cutoff plus an absolute floor
/// proportional to the parameter scale.
pub fn zero_rank_tol(p: &ConformalFieldParams, z: &DVector<f64>) -> RankTol {
    RankTol::relative(RANK_TOL).with_abs(1e-12 * p.param_scale() * (1.0 + z.norm()))
}

fn ensure_zero(p: &ConformalFieldParams, z: &DVector<f64>) -> Result<()> {
    if z.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            what: "zero",
            expected: p.dim(),
            got: z.len(),
        });
    }
    let residual = p.evaluate(z).norm();
    let tol = p.zero_tol(z);
    if residual > tol {
        return Err(Error::NotAZero { residual, tol });
    }
    Ok(())
}

fn exact_span(n: usize, basis: &[Vec<exact::Rational>]) -> Subspace {
    if basis.is_empty() {
        Subspace::zero(n)
    } else {
        Subspace::span_of_columns(&exact::basis_to_f64(n, basis), RankTol::default())
    }
}

/// Decides case, essentiality, `H`, `V` and the predicted model at a zero.
///
/// Integer-valued parameters and zero are classified in exact arithmetic.
pub fn classify_zero(p: &ConformalFieldParams, z: &DVector<f64>) -> Result<PointClassification> {
    ensure_zero(p, z)?;
    if let (Some(ex), Some(zq)) = (p.exact(), RationalMatrix::column_from_integral(z)) {
        if ex.is_zero_at(&zq) {
            return Ok(classify_exact(p, &ex, z, &zq));
        }
    }
    Ok(classify_float(p, z))
}

fn classify_float(p: &ConformalFieldParams, z: &DVector<f64>) -> PointClassification {
    let n = p.dim();
    let metric = p.metric();
    let tol = zero_rank_tol(p, z);
    let grad = p.gradient(z);
    let phi_z = p.conformal_factor(z);
    let gphi = p.phi_gradient();
    let grad_phi_in_image = if gphi.norm() == 0.0 {
        true
    } else {
        let y = linalg::pinv_solve(&grad, &gphi, tol);
        (&grad * y - &gphi).norm() <= IMAGE_RESIDUAL_TOL * gphi.norm()
    };
    let phi_nonzero = phi_z.abs() > PHI_ZERO_TOL * p.param_scale();
    let essential = phi_nonzero || !grad_phi_in_image;

    let kernel = Subspace::from_orthonormal(linalg::kernel(&grad, tol));
    let dphi = p.phi_differential();
    let mut stacked = DMatrix::zeros(n + 1, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&grad);
    stacked.row_mut(n).copy_from(&dphi.transpose());
    let h = Subspace::from_orthonormal(linalg::kernel(&stacked, tol));
    let v = forms::restricted_nullspace(metric, &h, RankTol::default()).expect("dimensions agree");
    let semidefinite = forms::is_semidefinite(metric, &h, RankTol::default()).expect("dimensions agree");
    finish(p, z, phi_z, grad_phi_in_image, essential, semidefinite, kernel, h, v, false)
}

fn classify_exact(
    p: &ConformalFieldParams,
    ex: &crate::field::ExactField,
    z: &DVector<f64>,
    zq: &RationalMatrix,
) -> PointClassification {
    let n = p.dim();
    let grad = ex.gradient(zq);
    let phi = ex.conformal_factor(zq);
    let gphi = ex.u.scale(&exact::rational_from_int(4));
    let grad_phi_in_image = grad.solvable(&gphi.column(0));
    let essential = !phi.is_zero() || !grad_phi_in_image;
    let kernel_q = grad.kernel();
    let h_q = grad.vstack(&ex.phi_differential()).kernel();
    let kernel = exact_span(n, &kernel_q);
    let h = exact_span(n, &h_q);
    let (v, semidefinite) = if h_q.is_empty() {
        (Subspace::zero(n), true)
    } else {
        let hb = RationalMatrix::from_columns(n, &h_q);
        let restricted = hb.transpose().mul(&ex.g).mul(&hb);
        let (pos, neg, _) = restricted.inertia();
        let null: Vec<Vec<exact::Rational>> = restricted
            .kernel()
            .into_iter()
            .map(|c| hb.mul(&RationalMatrix::from_columns(c.len(), &[c])).column(0))
            .collect();
        (exact_span(n, &null), pos == 0 || neg == 0)
    };
    let phi_z = exact::to_f64(&phi);
    finish(p, z, phi_z, grad_phi_in_image, essential, semidefinite, kernel, h, v, true)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    p: &ConformalFieldParams,
    z: &DVector<f64>,
    phi_z: f64,
    grad_phi_in_image: bool,
    essential: bool,
    semidefinite: bool,
    kernel: Subspace,
    h: Subspace,
    v: Subspace,
    exact: bool,
) -> PointClassification {
    let case = match (essential, semidefinite) {
        (false, _) => ZeroCase::I,
        (true, false) => ZeroCase::II,
        (true, true) => ZeroCase::III,
    };
    let model = match case {
        ZeroCase::I => ZeroModel::Subspace {
            base: z.clone(),
            space: kernel.clone(),
        },
        _ => ZeroModel::ConeInH {
            base: z.clone(),
            h: h.clone(),
            metric: p.metric().clone(),
        },
    };
    PointClassification {
        z: z.clone(),
        phi_z,
        grad_phi_in_image,
        essential,
        case,
        kernel,
        h,
        v,
        model,
        exact,
    }
}

/// The model predicted by a classification.
pub fn predicted_zero_model(cls: &PointClassification) -> ZeroModel {
    cls.model.clone()
}

/// Outcome of the kernel-structure check at a zero.
#[derive(Clone, Debug, Serialize)]
pub struct KernelStructureReport {
    pub phi_z: f64,
    pub phi_nonzero: bool,
    pub kernel_dim: usize,
    pub image_dim: usize,
    /// Largest `|<k_a, k_b>|` over a kernel basis (relevant when phi ≠ 0).
    pub kernel_gram_max: f64,
    /// Codimension of the kernel (relevant when phi = 0).
    pub codim: usize,
    pub codim_even: bool,
    /// `(Ker ∇v_z)^⊥ = image(∇v_z)` (relevant when phi = 0).
    pub complement_is_image: bool,
    pub tol: f64,
    pub pass: bool,
}

/// When `phi(z) ≠ 0` the kernel of `∇v_z` is null; when `phi(z) = 0` its
/// codimension is even and its orthogonal complement is the image.
pub fn kernel_structure_check(p: &ConformalFieldParams, z: &DVector<f64>) -> Result<KernelStructureReport> {
    ensure_zero(p, z)?;
    let n = p.dim();
    let metric = p.metric();
    let tol = zero_rank_tol(p, z);
    let grad = p.gradient(z);
    let phi_z = p.conformal_factor(z);
    let phi_nonzero = phi_z.abs() > PHI_ZERO_TOL * p.param_scale();
    let kernel = Subspace::from_orthonormal(linalg::kernel(&grad, tol));
    let image = Subspace::span_of_columns(&grad, tol);
    let kernel_gram_max = linalg::max_abs(&metric.restrict(&kernel));
    let codim = n - kernel.dim();
    let complement = forms::orthogonal_complement(metric, &kernel, tol)?;
    let complement_is_image = complement.same_as(&image, 1e-8);
    let gram_tol = 1e-10 * p.param_scale();
    let pass = if phi_nonzero {
        kernel_gram_max <= gram_tol
    } else {
        codim.is_multiple_of(2) && complement_is_image
    };
    Ok(KernelStructureReport {
        phi_z,
        phi_nonzero,
        kernel_dim: kernel.dim(),
        image_dim: image.dim(),
        kernel_gram_max,
        codim,
        codim_even: codim.is_multiple_of(2),
        complement_is_image,
        tol: gram_tol,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::MetricForm;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    fn skew(n: usize, i: usize, j: usize, a: f64) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(n, n);
        s[(i, j)] = a;
        s[(j, i)] = -a;
        s
    }

    #[test]
    fn dilation_is_case_iii_with_trivial_h() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, 1.0, 1.0]))
            .unwrap()
            .with_c(1.0)
            .unwrap();
        let cls = classify_zero(&p, &DVector::zeros(3)).unwrap();
        assert!(cls.exact);
        assert_eq!(cls.phi_z, 2.0);
        assert!(cls.essential);
        assert_eq!(cls.case, ZeroCase::III);
        assert_eq!(cls.h.dim(), 0);
        assert_eq!(cls.model.analytic_dim(), 0);
    }

    #[test]
    fn killing_block_is_case_i() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, 1.0, 1.0]))
            .unwrap()
            .with_s(skew(3, 1, 2, 1.0))
            .unwrap();
        let cls = classify_zero(&p, &DVector::zeros(3)).unwrap();
        assert_eq!(cls.case, ZeroCase::I);
        assert!(!cls.essential);
        assert!(cls.kernel.same_as(&Subspace::span(3, &[e(3, 0)]).unwrap(), 1e-14));
        let rep = kernel_structure_check(&p, &DVector::zeros(3)).unwrap();
        assert!(rep.pass && rep.codim == 2 && rep.complement_is_image);
    }

    #[test]
    fn s34_example_is_case_iii() {
        // Brute-force oracle: Ker B = span(e1,e2); dphi = 4Gu = -4 e1, so
        // H = span(e2), on which the metric is -1 (definite).
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]))
            .unwrap()
            .with_s(skew(4, 2, 3, 1.0))
            .unwrap()
            .with_u(e(4, 0))
            .unwrap();
        let cls = classify_zero(&p, &DVector::zeros(4)).unwrap();
        assert_eq!(cls.phi_z, 0.0);
        assert!(!cls.grad_phi_in_image);
        assert!(cls.essential);
        assert!(cls.h.same_as(&Subspace::span(4, &[e(4, 1)]).unwrap(), 1e-14));
        assert_eq!(cls.case, ZeroCase::III);
        assert_eq!(cls.v.dim(), 0);
    }

    #[test]
    fn float_and_exact_paths_agree() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]))
            .unwrap()
            .with_u(e(4, 0))
            .unwrap();
        let z = DVector::zeros(4);
        let exact = classify_zero(&p, &z).unwrap();
        let float = classify_float(&p, &z);
        assert!(exact.exact && !float.exact);
        assert_eq!(exact.summary().case, ZeroCase::II);
        let (a, b) = (exact.summary(), float.summary());
        assert_eq!((a.case, a.dim_h, a.dim_v, a.essential), (b.case, b.dim_h, b.dim_v, b.essential));
    }

    #[test]
    fn rejects_non_zero() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[1.0, 1.0, 1.0]))
            .unwrap()
            .with_c(1.0)
            .unwrap();
        assert!(matches!(classify_zero(&p, &e(3, 0)), Err(Error::NotAZero { .. })));
        assert!(kernel_structure_check(&p, &e(3, 0)).is_err());
    }

    #[test]
    fn kernel_is_null_when_phi_nonzero() {
        // Zero at z = e1 + e2 of the field with u = e1, c chosen so that
        // phi(z) ≠ 0: v(x) = w + c x + 2<u,x>x - <x,x>u vanishes at z when
        // w = -c z - 2<u,z>z (z null).
        let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
        let z = e(3, 0) + e(3, 1);
        let u = e(3, 2);
        let c = 1.0;
        let w = -(&z * c) - &z * (2.0 * g.inner(&u, &z));
        let p = ConformalFieldParams::new(g, w, DMatrix::zeros(3, 3), c, u).unwrap();
        let rep = kernel_structure_check(&p, &z).unwrap();
        assert!(rep.phi_nonzero);
        assert!(rep.pass, "{rep:?}");
    }
}
