//! Symmetric bilinear forms of arbitrary signature.
//!
//! A [`MetricForm`] is a symmetric (possibly degenerate, possibly indefinite)
//! bilinear form on `R^n`. Subspaces are stored with Euclidean-orthonormal
//! bases. When a form has integer entries, kernels and complements are computed
//! exactly and only converted to floating point at the end.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{self, RationalMatrix};
use crate::linalg::{self, compensated_sum, RankTol};
use crate::tolerances::CONE_SAMPLE_TOL;

/// Symmetric bilinear form on `R^n` given by its Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricForm {
    gram: DMatrix<f64>,
}

impl MetricForm {
    /// Rejects non-square, non-finite or not exactly symmetric input.
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        let (r, c) = gram.shape();
        if r != c {
            return Err(Error::DimensionMismatch {
                what: "gram must be square",
                expected: r,
                got: c,
            });
        }
        if r == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if gram.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("gram"));
        }
        for i in 0..r {
            for j in (i + 1)..r {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(Error::AsymmetricGram { row: i, col: j });
                }
            }
        }
        Ok(Self { gram })
    }

    pub fn from_rows(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                what: "gram entries",
                expected: n * n,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::new(DMatrix::from_diagonal(&DVector::from_row_slice(diag)))
            .expect("diagonal forms are symmetric")
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// `<x, y>` with compensated summation.
    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let n = self.dim();
        compensated_sum(
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| x[i] * self.gram[(i, j)] * y[j]),
        )
    }

    pub fn norm_sq(&self, x: &DVector<f64>) -> f64 {
        self.inner(x, x)
    }

    /// The covector `<x, .>` as a column vector, `G x`.
    pub fn lower(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.gram * x
    }

    /// Gram matrix of the restriction to `h` in its orthonormal basis.
    pub fn restrict(&self, h: &Subspace) -> DMatrix<f64> {
        h.basis.transpose() * &self.gram * &h.basis
    }

    /// Largest absolute Gram entry (at least one), used to scale tolerances.
    pub fn scale(&self) -> f64 {
        linalg::max_abs(&self.gram).max(1.0)
    }

    pub fn exact_gram(&self) -> Option<RationalMatrix> {
        RationalMatrix::from_integral(&self.gram)
    }

    /// Same form multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(&self.gram * lambda)
    }

    /// The congruent form `A^T G A`.
    pub fn congruent(&self, a: &DMatrix<f64>) -> Result<Self> {
        let g = a.transpose() * &self.gram * a;
        let sym = (&g + g.transpose()) * 0.5;
        Self::new(sym)
    }
}

/// Linear subspace of `R^n` with a Euclidean-orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: DMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: DMatrix::identity(n, n),
        }
    }

    /// Span of the columns of `m`, orthonormalised at the given rank tolerance.
    pub fn span_of_columns(m: &DMatrix<f64>, tol: RankTol) -> Self {
        Self {
            ambient_dim: m.nrows(),
            basis: linalg::image(m, tol),
        }
    }

    pub fn span(n: usize, vectors: &[DVector<f64>]) -> Result<Self> {
        for v in vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "spanning vector",
                    expected: n,
                    got: v.len(),
                });
            }
        }
        if vectors.is_empty() {
            return Ok(Self::zero(n));
        }
        Ok(Self::span_of_columns(&DMatrix::from_columns(vectors), RankTol::default()))
    }

    /// Assumes `basis` already has orthonormal columns.
    pub(crate) fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        Self {
            ambient_dim: basis.nrows(),
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<f64>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Orthogonal (Euclidean) projection onto the subspace.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.transpose() * x)
    }

    /// Euclidean distance from `x` to the subspace.
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        (x - self.project(x)).norm()
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.distance(x) <= tol * x.norm().max(1.0)
    }

    /// `self ⊆ other` up to `tol`.
    pub fn is_subspace_of(&self, other: &Subspace, tol: f64) -> bool {
        self.basis.column_iter().all(|c| other.distance(&c.into_owned()) <= tol)
    }

    /// Equality as subspaces (same dimension and mutual containment).
    pub fn same_as(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other, tol) && other.is_subspace_of(self, tol)
    }

    /// Euclidean orthogonal complement.
    pub fn euclidean_complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        Subspace::from_orthonormal(linalg::kernel(&self.basis.transpose(), RankTol::default()))
    }

    pub fn intersect(&self, other: &Subspace, tol: RankTol) -> Subspace {
        let n = self.ambient_dim;
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(n);
        }
        // x = A a = B b  <=>  [A, -B] (a, b) = 0
        let mut m = DMatrix::zeros(n, self.dim() + other.dim());
        m.view_mut((0, 0), (n, self.dim())).copy_from(&self.basis);
        m.view_mut((0, self.dim()), (n, other.dim())).copy_from(&(-&other.basis));
        let k = linalg::kernel(&m, tol);
        let vecs = self.basis.clone() * k.rows(0, self.dim());
        Subspace::span_of_columns(&vecs, tol)
    }

    pub fn sum(&self, other: &Subspace, tol: RankTol) -> Subspace {
        let mut cols = self.basis_vectors();
        cols.extend(other.basis_vectors());
        if cols.is_empty() {
            return Subspace::zero(self.ambient_dim);
        }
        Subspace::span_of_columns(&DMatrix::from_columns(&cols), tol)
    }
}

/// Signature `(p, q, r)`: counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.positive, self.negative, self.zero)
    }
}

fn inertia_of_symmetric(m: &DMatrix<f64>, tol: RankTol) -> Signature {
    if m.nrows() == 0 {
        return Signature {
            positive: 0,
            negative: 0,
            zero: 0,
        };
    }
    if let Some(q) = RationalMatrix::from_integral(m) {
        let (p, n, z) = q.inertia();
        return Signature {
            positive: p,
            negative: n,
            zero: z,
        };
    }
    let (vals, _) = linalg::sym_eigen(m);
    let lmax = vals.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for &l in &vals {
        if tol.is_zero(l.abs(), lmax) {
            sig.zero += 1;
        } else if l > 0.0 {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
    }
    sig
}

/// Signature of the form. Integer Gram matrices are handled exactly.
pub fn signature(form: &MetricForm, rank_tol: impl Into<RankTol>) -> Signature {
    inertia_of_symmetric(form.gram(), rank_tol.into())
}

fn check_dim(form: &MetricForm, v: &Subspace) -> Result<()> {
    if v.ambient_dim() != form.dim() {
        return Err(Error::DimensionMismatch {
            what: "subspace ambient dimension",
            expected: form.dim(),
            got: v.ambient_dim(),
        });
    }
    Ok(())
}

/// `V^⊥ = { x : <x, v> = 0 for all v in V }` with respect to the form.
pub fn orthogonal_complement(form: &MetricForm, v: &Subspace, rank_tol: impl Into<RankTol>) -> Result<Subspace> {
    check_dim(form, v)?;
    let n = form.dim();
    if v.dim() == 0 {
        return Ok(Subspace::full(n));
    }
    let constraints = v.basis().transpose() * form.gram();
    if let (Some(g), Some(b)) = (form.exact_gram(), RationalMatrix::from_integral(v.basis())) {
        let k = b.transpose().mul(&g).kernel();
        if k.is_empty() {
            return Ok(Subspace::zero(n));
        }
        return Ok(Subspace::span_of_columns(&exact::basis_to_f64(n, &k), RankTol::default()));
    }
    Ok(Subspace::from_orthonormal(linalg::kernel(&constraints, rank_tol.into())))
}

/// The nullspace `W^⊥` of the form.
pub fn nullspace(form: &MetricForm, rank_tol: impl Into<RankTol>) -> Subspace {
    let n = form.dim();
    if let Some(g) = form.exact_gram() {
        let k = g.kernel();
        if k.is_empty() {
            return Subspace::zero(n);
        }
        return Subspace::span_of_columns(&exact::basis_to_f64(n, &k), RankTol::default());
    }
    Subspace::from_orthonormal(linalg::kernel(form.gram(), rank_tol.into()))
}

/// Nullspace of the form restricted to `h`, i.e. `H ∩ H^⊥`.
pub fn restricted_nullspace(form: &MetricForm, h: &Subspace, rank_tol: impl Into<RankTol>) -> Result<Subspace> {
    check_dim(form, h)?;
    if h.dim() == 0 {
        return Ok(Subspace::zero(form.dim()));
    }
    let k = linalg::kernel(&form.restrict(h), rank_tol.into());
    Ok(Subspace::span_of_columns(&(h.basis() * k), RankTol::default()))
}

/// Signature of the form restricted to `h`.
pub fn restricted_signature(form: &MetricForm, h: &Subspace, rank_tol: impl Into<RankTol>) -> Result<Signature> {
    check_dim(form, h)?;
    Ok(inertia_of_symmetric(&form.restrict(h), rank_tol.into()))
}

/// True when the restriction of the form to `h` is positive or negative
/// semidefinite.
pub fn is_semidefinite(form: &MetricForm, h: &Subspace, rank_tol: impl Into<RankTol>) -> Result<bool> {
    let sig = restricted_signature(form, h, rank_tol)?;
    Ok(sig.positive == 0 || sig.negative == 0)
}

/// Form-orthogonal basis of `h` split by sign, as in the null-basis
/// construction: unit positive vectors, unit negative vectors and null
/// vectors of the restriction.
pub(crate) struct SplitBasis {
    pub positive: Vec<DVector<f64>>,
    pub negative: Vec<DVector<f64>>,
    pub null: Vec<DVector<f64>>,
}

pub(crate) fn split_basis(form: &MetricForm, h: &Subspace, tol: RankTol) -> SplitBasis {
    let restricted = form.restrict(h);
    let (vals, vecs) = linalg::sym_eigen(&restricted);
    let lmax = vals.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
    let mut out = SplitBasis {
        positive: Vec::new(),
        negative: Vec::new(),
        null: Vec::new(),
    };
    for (i, &l) in vals.iter().enumerate() {
        let e = h.basis() * vecs.column(i);
        if tol.is_zero(l.abs(), lmax) {
            out.null.push(e);
        } else if l > 0.0 {
            out.positive.push(e / l.sqrt());
        } else {
            out.negative.push(e / (-l).sqrt());
        }
    }
    out
}

/// Points of the null cone of the form restricted to `h`, inside the
/// Euclidean ball of the given radius. Deterministic in `seed`.
///
/// The first points are the null basis `w_1 - u_a`, `u_1 + w_j`, `v_mu` built
/// from a form-orthogonal basis; the rest are random null points obtained by
/// solving the quadratic `<p + t d, p + t d> = 0` along random lines. When the
/// restriction is semidefinite only nullspace points are returned.
pub fn sample_null_cone(
    form: &MetricForm,
    h: &Subspace,
    count: usize,
    radius: f64,
    seed: u64,
) -> Result<Vec<DVector<f64>>> {
    check_dim(form, h)?;
    if radius.is_nan() || radius <= 0.0 || radius.is_infinite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let n = form.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let split = split_basis(form, h, RankTol::default());
    let fit = |x: DVector<f64>, rng: &mut ChaCha8Rng| -> DVector<f64> {
        let norm = x.norm();
        if norm == 0.0 {
            return x;
        }
        let target = radius * rng.random_range(0.05..=1.0);
        x * (target / norm)
    };
    let random_null_combo = |rng: &mut ChaCha8Rng| -> DVector<f64> {
        let mut x = DVector::zeros(n);
        for v in &split.null {
            x.axpy(rng.random_range(-1.0..1.0), v, 1.0);
        }
        x
    };

    let semidefinite = split.positive.is_empty() || split.negative.is_empty();
    let mut out = Vec::with_capacity(count);
    if semidefinite {
        while out.len() < count {
            let x = random_null_combo(&mut rng);
            out.push(fit(x, &mut rng));
        }
        return Ok(out);
    }

    let (w, u, nulls) = (&split.positive, &split.negative, &split.null);
    let mut deterministic: Vec<DVector<f64>> = Vec::new();
    for ua in u {
        deterministic.push(&w[0] - ua);
    }
    for wj in w.iter().skip(1) {
        deterministic.push(&u[0] + wj);
    }
    deterministic.extend(nulls.iter().cloned());
    for x in deterministic {
        if out.len() == count {
            break;
        }
        out.push(fit(x, &mut rng));
    }

    let gauss = |rng: &mut ChaCha8Rng, vs: &[DVector<f64>]| -> DVector<f64> {
        let mut x = DVector::zeros(n);
        for v in vs {
            x.axpy(rng.random_range(-1.0..1.0), v, 1.0);
        }
        x
    };
    let mut attempt = 0usize;
    while out.len() < count {
        attempt += 1;
        let (p, d) = if attempt.is_multiple_of(2) {
            // Positive part plus a multiple of a negative direction always
            // meets the cone.
            (gauss(&mut rng, w), gauss(&mut rng, u))
        } else {
            let all: Vec<DVector<f64>> = w.iter().chain(u.iter()).chain(nulls.iter()).cloned().collect();
            (gauss(&mut rng, &all), gauss(&mut rng, &all))
        };
        let a = form.inner(&d, &d);
        let b = form.inner(&p, &d);
        let c = form.inner(&p, &p);
        let disc = b * b - a * c;
        if a == 0.0 || disc < 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        // Numerically stable root of a t^2 + 2 b t + c = 0.
        let q = -(b + b.signum() * sq);
        let t = if q != 0.0 { if rng.random_bool(0.5) { q / a } else { c / q } } else { 0.0 };
        let mut x = &p + &d * t;
        if x.norm() == 0.0 {
            continue;
        }
        x += random_null_combo(&mut rng) * 0.5;
        let x = fit(x, &mut rng);
        if form.norm_sq(&x).abs() <= CONE_SAMPLE_TOL * radius * radius {
            out.push(x);
        }
    }
    Ok(out)
}

/// Predicted set of radial limit directions of the null cone at a cone point.
#[derive(Clone, Debug, PartialEq)]
pub enum ConePrediction {
    /// Every null vector is a limit direction (the point lies in the nullspace
    /// of an indefinite form).
    WholeCone,
    /// The tangent hyperplane `y^⊥`.
    Hyperplane(Subspace),
    /// Semidefinite form: the cone is the nullspace itself.
    Nullspace(Subspace),
}

/// Radial limit directions of the null cone of `form` at the cone point `y`.
pub fn predicted_radial_directions(
    form: &MetricForm,
    y: &DVector<f64>,
    rank_tol: impl Into<RankTol>,
) -> Result<ConePrediction> {
    let n = form.dim();
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            what: "cone point",
            expected: n,
            got: y.len(),
        });
    }
    let tol = rank_tol.into();
    let value = form.norm_sq(y);
    let bound = 1e-10 * form.scale() * y.norm_squared().max(f64::MIN_POSITIVE);
    if value.abs() > bound {
        return Err(Error::NotNull { value, tol: bound });
    }
    let full = Subspace::full(n);
    let w_perp = nullspace(form, tol);
    if is_semidefinite(form, &full, tol)? {
        return Ok(ConePrediction::Nullspace(w_perp));
    }
    if y.norm() == 0.0 || w_perp.contains(y, 1e-10) {
        return Ok(ConePrediction::WholeCone);
    }
    let line = Subspace::span(n, std::slice::from_ref(y))?;
    Ok(ConePrediction::Hyperplane(orthogonal_complement(form, &line, tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::RANK_TOL;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn signature_examples() {
        let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
        assert_eq!(signature(&g, RANK_TOL).triple(), (2, 1, 0));
        let z = MetricForm::diagonal(&[0.0, 0.0]);
        assert_eq!(signature(&z, RANK_TOL).triple(), (0, 0, 2));
        let h = MetricForm::from_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(signature(&h, RANK_TOL).triple(), (1, 1, 0));
        // Non-integral entries take the floating-point route.
        let f = MetricForm::from_rows(2, &[0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(signature(&f, RANK_TOL).triple(), (1, 1, 0));
    }

    #[test]
    fn rejects_asymmetric_gram() {
        let err = MetricForm::from_rows(2, &[1.0, 2.0, 2.0 + 1e-15, 1.0]).unwrap_err();
        assert!(matches!(err, Error::AsymmetricGram { row: 0, col: 1 }));
    }

    #[test]
    fn complement_examples() {
        let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
        let v = Subspace::span(3, &[e(3, 0)]).unwrap();
        let c = orthogonal_complement(&g, &v, RANK_TOL).unwrap();
        assert!(c.same_as(&Subspace::span(3, &[e(3, 1), e(3, 2)]).unwrap(), 1e-12));

        let h = MetricForm::from_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = Subspace::span(2, &[e(2, 0)]).unwrap();
        let c = orthogonal_complement(&h, &v, RANK_TOL).unwrap();
        assert!(c.same_as(&v, 1e-12));

        let c = orthogonal_complement(&g, &Subspace::zero(3), RANK_TOL).unwrap();
        assert_eq!(c.dim(), 3);
    }

    #[test]
    fn complement_float_route_matches_exact() {
        let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
        let v = Subspace::span(3, &[DVector::from_vec(vec![0.3, 0.7, 0.1])]).unwrap();
        let c = orthogonal_complement(&g, &v, RANK_TOL).unwrap();
        assert_eq!(c.dim(), 2);
        for b in c.basis_vectors() {
            assert!(g.inner(&b, &v.basis_vectors()[0]).abs() < 1e-14);
        }
    }

    #[test]
    fn nullspace_examples() {
        let g = MetricForm::diagonal(&[-1.0, 0.0, 1.0]);
        assert!(nullspace(&g, RANK_TOL).same_as(&Subspace::span(3, &[e(3, 1)]).unwrap(), 1e-14));
        assert_eq!(nullspace(&MetricForm::diagonal(&[1.0, -2.0]), RANK_TOL).dim(), 0);
        let ones = MetricForm::from_rows(2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let k = nullspace(&ones, RANK_TOL);
        let expected = Subspace::span(2, &[DVector::from_vec(vec![1.0, -1.0])]).unwrap();
        assert!(k.same_as(&expected, 1e-14));
    }

    #[test]
    fn semidefinite_examples() {
        let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
        let plane = Subspace::span(3, &[e(3, 1), e(3, 2)]).unwrap();
        assert!(is_semidefinite(&g, &plane, RANK_TOL).unwrap());
        assert!(!is_semidefinite(&g, &Subspace::full(3), RANK_TOL).unwrap());
        let null_line = Subspace::span(3, &[e(3, 0) + e(3, 1)]).unwrap();
        assert!(is_semidefinite(&g, &null_line, RANK_TOL).unwrap());
    }

    #[test]
    fn cone_samples_2d_light_cone() {
        let g = MetricForm::diagonal(&[-1.0, 1.0]);
        let pts = sample_null_cone(&g, &Subspace::full(2), 2, 1.0, 7).unwrap();
        assert_eq!(pts.len(), 2);
        for p in pts {
            assert!((p[0].abs() - p[1].abs()).abs() < 1e-12);
            assert!(p.norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn cone_of_definite_form_is_origin() {
        let g = MetricForm::diagonal(&[1.0, 2.0, 3.0]);
        let pts = sample_null_cone(&g, &Subspace::full(3), 5, 1.0, 1).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|p| p.norm() == 0.0));
    }

    #[test]
    fn cone_samples_split_signature() {
        let g = MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]);
        let pts = sample_null_cone(&g, &Subspace::full(4), 100, 1.0, 3).unwrap();
        assert_eq!(pts.len(), 100);
        for p in &pts {
            assert!(g.norm_sq(p).abs() < 1e-12);
            assert!(p.norm() <= 1.0 + 1e-15);
        }
        // Determinism.
        let again = sample_null_cone(&g, &Subspace::full(4), 100, 1.0, 3).unwrap();
        assert_eq!(pts, again);
    }

    #[test]
    fn radial_direction_predictions() {
        let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
        let zero = DVector::zeros(3);
        assert_eq!(predicted_radial_directions(&g, &zero, RANK_TOL).unwrap(), ConePrediction::WholeCone);
        let y = e(3, 0) + e(3, 1);
        match predicted_radial_directions(&g, &y, RANK_TOL).unwrap() {
            ConePrediction::Hyperplane(s) => {
                let expected = Subspace::span(3, &[y.clone(), e(3, 2)]).unwrap();
                assert!(s.same_as(&expected, 1e-12));
            }
            other => panic!("unexpected {other:?}"),
        }
        let d = MetricForm::diagonal(&[1.0, 1.0]);
        match predicted_radial_directions(&d, &DVector::zeros(2), RANK_TOL).unwrap() {
            ConePrediction::Nullspace(s) => assert_eq!(s.dim(), 0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            predicted_radial_directions(&g, &e(3, 1), RANK_TOL),
            Err(Error::NotNull { .. })
        ));
    }
}
