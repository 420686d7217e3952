//! The closed-form conformal fields
//! `v(x) = w + Bx + cx + 2<u,x>x - <x,x>u` on a flat pseudo-Euclidean space.
//!
//! `B` is stored through its antisymmetric generator `S` with `B = G^{-1} S`,
//! which makes skew-adjointness structural.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{self, Rational, RationalMatrix};
use crate::forms::MetricForm;
use crate::linalg::{self, compensated_sum, RankTol};
use crate::tolerances::ZERO_TOL;

/// Parameters `(w, S, c, u)` of a conformal field together with the metric.
#[derive(Clone, Debug)]
pub struct ConformalFieldParams {
    metric: MetricForm,
    w: DVector<f64>,
    s: DMatrix<f64>,
    c: f64,
    u: DVector<f64>,
    b: DMatrix<f64>,
    ginv: DMatrix<f64>,
}

impl PartialEq for ConformalFieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.metric == other.metric && self.w == other.w && self.s == other.s && self.c == other.c && self.u == other.u
    }
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { what, expected, got });
    }
    Ok(())
}

impl ConformalFieldParams {
    /// Validates dimensions, exact antisymmetry of `S` and nondegeneracy of
    /// the metric.
    pub fn new(metric: MetricForm, w: DVector<f64>, s: DMatrix<f64>, c: f64, u: DVector<f64>) -> Result<Self> {
        let n = metric.dim();
        check_len("w", n, w.len())?;
        check_len("u", n, u.len())?;
        check_len("S rows", n, s.nrows())?;
        check_len("S columns", n, s.ncols())?;
        if w.iter().chain(u.iter()).chain(s.iter()).any(|x| !x.is_finite()) || !c.is_finite() {
            return Err(Error::NonFinite("field parameters"));
        }
        for i in 0..n {
            for j in i..n {
                if s[(i, j)] != -s[(j, i)] {
                    return Err(Error::NotAntisymmetric { row: i, col: j });
                }
            }
        }
        let ginv = match metric.exact_gram() {
            Some(g) => g.inverse().ok_or(Error::DegenerateMetric)?.to_f64(),
            None => {
                if linalg::rank(metric.gram(), RankTol::default()) < n {
                    return Err(Error::DegenerateMetric);
                }
                metric.gram().clone().try_inverse().ok_or(Error::DegenerateMetric)?
            }
        };
        let b = &ginv * &s;
        Ok(Self {
            metric,
            w,
            s,
            c,
            u,
            b,
            ginv,
        })
    }

    /// Field with every parameter zero.
    pub fn zero(metric: MetricForm) -> Result<Self> {
        let n = metric.dim();
        Self::new(metric, DVector::zeros(n), DMatrix::zeros(n, n), 0.0, DVector::zeros(n))
    }

    pub fn with_w(self, w: DVector<f64>) -> Result<Self> {
        Self::new(self.metric, w, self.s, self.c, self.u)
    }

    pub fn with_s(self, s: DMatrix<f64>) -> Result<Self> {
        Self::new(self.metric, self.w, s, self.c, self.u)
    }

    pub fn with_c(self, c: f64) -> Result<Self> {
        Self::new(self.metric, self.w, self.s, c, self.u)
    }

    pub fn with_u(self, u: DVector<f64>) -> Result<Self> {
        Self::new(self.metric, self.w, self.s, self.c, u)
    }

    /// Random parameters with entries in `[-1, 1]`.
    pub fn random(metric: MetricForm, rng: &mut impl Rng) -> Self {
        let n = metric.dim();
        let w = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let u = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let mut s = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let a = rng.random_range(-1.0..1.0);
                s[(i, j)] = a;
                s[(j, i)] = -a;
            }
        }
        let c = rng.random_range(-1.0..1.0);
        Self::new(metric, w, s, c, u).expect("random parameters are valid for a nondegenerate metric")
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn metric(&self) -> &MetricForm {
        &self.metric
    }

    pub fn w(&self) -> &DVector<f64> {
        &self.w
    }

    pub fn skew_generator(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn u(&self) -> &DVector<f64> {
        &self.u
    }

    /// The skew-adjoint part `B = G^{-1} S`.
    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn metric_inverse(&self) -> &DMatrix<f64> {
        &self.ginv
    }

    /// Largest parameter magnitude (at least one); all tolerances scale with it.
    pub fn param_scale(&self) -> f64 {
        [
            linalg::max_abs_vec(&self.w),
            linalg::max_abs(&self.s),
            linalg::max_abs(&self.b),
            self.c.abs(),
            linalg::max_abs_vec(&self.u),
            self.metric.scale(),
        ]
        .into_iter()
        .fold(1.0, f64::max)
    }

    /// Zero tolerance at `z`: `ZERO_TOL * (1 + |z|) * param_scale`.
    pub fn zero_tol(&self, z: &DVector<f64>) -> f64 {
        ZERO_TOL * (1.0 + z.norm()) * self.param_scale()
    }

    fn check_point(&self, x: &DVector<f64>) {
        assert_eq!(x.len(), self.dim(), "point dimension must match the field");
    }

    /// `v(x)`, each component summed with compensation.
    pub fn evaluate(&self, x: &DVector<f64>) -> DVector<f64> {
        self.check_point(x);
        let n = self.dim();
        let ux = self.metric.inner(&self.u, x);
        let xx = self.metric.norm_sq(x);
        DVector::from_fn(n, |i, _| {
            let bx = (0..n).map(|j| self.b[(i, j)] * x[j]);
            let rest = [self.w[i], self.c * x[i], 2.0 * ux * x[i], -xx * self.u[i]];
            compensated_sum(bx.chain(rest))
        })
    }

    /// `∇v_x` as a matrix acting on column vectors:
    /// `B + (c + 2<u,x>) I + 2 x (Gu)^T - 2 u (Gx)^T`.
    pub fn gradient(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.check_point(x);
        let n = self.dim();
        let ux = self.metric.inner(&self.u, x);
        let gu = self.metric.lower(&self.u);
        let gx = self.metric.lower(x);
        let mut m = self.b.clone();
        for i in 0..n {
            m[(i, i)] += self.c + 2.0 * ux;
        }
        m += 2.0 * x * gu.transpose();
        m -= 2.0 * &self.u * gx.transpose();
        m
    }

    /// `phi(x) = 2c + 4<u,x>`.
    pub fn conformal_factor(&self, x: &DVector<f64>) -> f64 {
        self.check_point(x);
        2.0 * self.c + 4.0 * self.metric.inner(&self.u, x)
    }

    /// Metric gradient `∇phi = 4u` (constant).
    pub fn phi_gradient(&self) -> DVector<f64> {
        &self.u * 4.0
    }

    /// The differential `dphi = 4 G u`, as a column of covector components.
    pub fn phi_differential(&self) -> DVector<f64> {
        self.metric.lower(&self.u) * 4.0
    }

    /// Max-norm of `∇v + (∇v)^* - phi Id`, with `*` the metric adjoint.
    pub fn lie_derivative_residual(&self, x: &DVector<f64>) -> f64 {
        let m = self.gradient(x);
        let adj = &self.ginv * m.transpose() * self.metric.gram();
        let mut r = &m + adj;
        let phi = self.conformal_factor(x);
        for i in 0..self.dim() {
            r[(i, i)] -= phi;
        }
        linalg::max_abs(&r)
    }

    /// Scale for the identity contracts at `x`: `(1 + |x|^2) * param_scale`
    /// times the conditioning of the metric.
    pub fn identity_scale(&self, x: &DVector<f64>) -> f64 {
        let cond = self.metric.scale() * linalg::max_abs(&self.ginv).max(1.0);
        (1.0 + x.norm_squared()) * self.param_scale() * cond
    }

    /// Residual of `2∇_d∇v = dphi ⊗ d - <d,.> ⊗ ∇phi + dphi(d) Id`.
    ///
    /// The left side is the central difference of the gradient, which is
    /// exact because the gradient is affine in `x`.
    pub fn second_derivative_residual(&self, x: &DVector<f64>, dir: &DVector<f64>) -> f64 {
        self.check_point(dir);
        let lhs = self.gradient(&(x + dir)) - self.gradient(&(x - dir));
        let dphi = self.phi_differential();
        let gd = self.metric.lower(dir);
        let mut rhs = dir * dphi.transpose() - self.phi_gradient() * gd.transpose();
        let dphi_d = dphi.dot(dir);
        for i in 0..self.dim() {
            rhs[(i, i)] += dphi_d;
        }
        linalg::max_abs(&(lhs - rhs))
    }

    /// Exact second derivative `D^2 v(h, k) = 2<u,h>k + 2<u,k>h - 2<h,k>u`.
    pub fn second_derivative(&self, h: &DVector<f64>, k: &DVector<f64>) -> DVector<f64> {
        let uh = self.metric.inner(&self.u, h);
        let uk = self.metric.inner(&self.u, k);
        let hk = self.metric.inner(h, k);
        k * (2.0 * uh) + h * (2.0 * uk) - &self.u * (2.0 * hk)
    }

    /// Integer-valued parameters as exact rationals.
    pub fn exact(&self) -> Option<ExactField> {
        let g = self.metric.exact_gram()?;
        let s = RationalMatrix::from_integral(&self.s)?;
        let w = RationalMatrix::column_from_integral(&self.w)?;
        let u = RationalMatrix::column_from_integral(&self.u)?;
        let c = exact::integral(self.c)?;
        let b = g.inverse()?.mul(&s);
        Some(ExactField { g, b, w, c, u })
    }

    /// `e^τ ℒ_v(e^{-τ} g) - (ℒ_v g - (dτ)(v) g)` at `x`, max-norm.
    ///
    /// `tau_coeffs = [a, b_1..b_n, q_11, q_12, .., q_1n, q_22, .., q_nn]` for
    /// `τ(x) = a + Σ b_i x_i + Σ_{i<=j} q_ij x_i x_j`.
    pub fn killing_gauge_residual(&self, tau_coeffs: &[f64], x: &DVector<f64>) -> Result<f64> {
        let n = self.dim();
        let tau = QuadraticPotential::from_coeffs(n, tau_coeffs)?;
        self.check_point(x);
        let v = self.evaluate(x);
        let m = self.gradient(x);
        let g = self.metric.gram();
        let t = tau.value(x);
        let dt = tau.gradient(x);
        let e_minus = (-t).exp();
        // Coordinate Lie derivative of h = e^{-τ} g:
        // (ℒ_v h)_jk = v^l ∂_l h_jk + h_lk ∂_j v^l + h_jl ∂_k v^l.
        let mut lie_h = DMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let transport = compensated_sum((0..n).map(|l| v[l] * (-dt[l] * e_minus * g[(j, k)])));
                let stretch = compensated_sum(
                    (0..n).flat_map(|l| [e_minus * g[(l, k)] * m[(l, j)], e_minus * g[(j, l)] * m[(l, k)]]),
                );
                lie_h[(j, k)] = transport + stretch;
            }
        }
        let lhs = lie_h * t.exp();
        let lie_g = m.transpose() * g + g * &m;
        let dtv = dt.dot(&v);
        let rhs = lie_g - g * dtv;
        Ok(linalg::max_abs(&(lhs - rhs)))
    }

    /// `F(s) = v(z + s d) / s^2`, with the exact limit `D^2 v(d,d) / 2` at
    /// `s = 0`.
    pub fn radial_factor(&self, z: &DVector<f64>, dir: &DVector<f64>, s: f64) -> Result<DVector<f64>> {
        check_len("radial direction", self.dim(), dir.len())?;
        check_len("base point", self.dim(), z.len())?;
        let tol = self.zero_tol(z);
        let vz = self.evaluate(z).norm();
        if vz > tol {
            return Err(Error::NotAZero { residual: vz, tol });
        }
        let slope = (self.gradient(z) * dir).norm();
        if slope > tol * dir.norm().max(1.0) {
            return Err(Error::Precondition(format!(
                "∇v_z d must vanish for the radial factorisation (|∇v_z d| = {slope:e})"
            )));
        }
        if s == 0.0 {
            return Ok(self.second_derivative(dir, dir) * 0.5);
        }
        Ok(self.evaluate(&(z + dir * s)) / (s * s))
    }

    /// Residual between the Hessian at `z` of `Q = 2<w, v>` on `z + Ker∇v_z`
    /// and `dphi ⊗ <w,.> + <w,.> ⊗ dphi - dphi(w) <,>` on the same subspace.
    ///
    /// The Hessian is obtained by polarised second differences of `Q`, which
    /// are exact for a quadratic.
    pub fn hessian_identity_check(&self, z: &DVector<f64>, w_dir: &DVector<f64>) -> Result<f64> {
        check_len("direction", self.dim(), w_dir.len())?;
        let tol = self.zero_tol(z);
        let vz = self.evaluate(z).norm();
        if vz > tol {
            return Err(Error::NotAZero { residual: vz, tol });
        }
        let phi = self.conformal_factor(z);
        if phi.abs() > crate::tolerances::PHI_ZERO_TOL * self.param_scale() {
            return Err(Error::Precondition(format!("phi(z) = {phi:e} must vanish")));
        }
        let grad = self.gradient(z);
        let kw = (&grad * w_dir).norm();
        if kw > tol * w_dir.norm().max(1.0) {
            return Err(Error::Precondition(format!("w is not in Ker ∇v_z (|∇v_z w| = {kw:e})")));
        }
        let rtol = RankTol::default().with_abs(1e-12 * self.param_scale() * (1.0 + z.norm()));
        let kernel = linalg::kernel(&grad, rtol);
        let q = |y: DVector<f64>| 2.0 * self.metric.inner(w_dir, &self.evaluate(&y));
        let dphi = self.phi_differential();
        let dphi_w = dphi.dot(w_dir);
        let mut worst = 0.0_f64;
        for a in 0..kernel.ncols() {
            for b in a..kernel.ncols() {
                let h = kernel.column(a).into_owned();
                let k = kernel.column(b).into_owned();
                let hess = (q(z + &h + &k) - q(z + &h - &k) - q(z - &h + &k) + q(z - &h - &k)) / 4.0;
                let closed = dphi.dot(&h) * self.metric.inner(w_dir, &k) + self.metric.inner(w_dir, &h) * dphi.dot(&k)
                    - dphi_w * self.metric.inner(&h, &k);
                worst = worst.max((hess - closed).abs());
            }
        }
        Ok(worst)
    }
}

/// Quadratic polynomial `a + b.x + Σ_{i<=j} q_ij x_i x_j`.
#[derive(Clone, Debug)]
pub struct QuadraticPotential {
    a: f64,
    b: DVector<f64>,
    q: DMatrix<f64>,
}

impl QuadraticPotential {
    pub fn coeff_len(n: usize) -> usize {
        1 + n + n * (n + 1) / 2
    }

    pub fn from_coeffs(n: usize, coeffs: &[f64]) -> Result<Self> {
        let expected = Self::coeff_len(n);
        if coeffs.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "potential needs {expected} coefficients for n = {n}, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("potential coefficients"));
        }
        let b = DVector::from_row_slice(&coeffs[1..=n]);
        let mut q = DMatrix::zeros(n, n);
        let mut idx = n + 1;
        for i in 0..n {
            for j in i..n {
                q[(i, j)] = coeffs[idx];
                idx += 1;
            }
        }
        Ok(Self { a: coeffs[0], b, q })
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        self.a + self.b.dot(x) + (x.transpose() * &self.q * x)[(0, 0)]
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.b + (&self.q + self.q.transpose()) * x
    }
}

/// Rank of `(w, S, c, u) ↦ (v(x_1), .., v(x_m))` on `(n+1)(n+2)/2 + n`
/// generic points. Requires `n >= 3`.
pub fn basis_dimension(metric: &MetricForm) -> Result<usize> {
    let n = metric.dim();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "the dimension bound is only claimed for n >= 3, got n = {n}"
        )));
    }
    let params = (n + 1) * (n + 2) / 2;
    let points = params + n;
    let zero = ConformalFieldParams::zero(metric.clone())?;
    // One field per basis parameter.
    let mut generators = Vec::with_capacity(params);
    for i in 0..n {
        let mut w = DVector::zeros(n);
        w[i] = 1.0;
        generators.push(zero.clone().with_w(w)?);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut s = DMatrix::zeros(n, n);
            s[(i, j)] = 1.0;
            s[(j, i)] = -1.0;
            generators.push(zero.clone().with_s(s)?);
        }
    }
    generators.push(zero.clone().with_c(1.0)?);
    for i in 0..n {
        let mut u = DVector::zeros(n);
        u[i] = 1.0;
        generators.push(zero.clone().with_u(u)?);
    }
    debug_assert_eq!(generators.len(), params);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0d1e);
    let xs: Vec<DVector<f64>> = (0..points)
        .map(|_| DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
        .collect();
    let mut m = DMatrix::zeros(n * points, params);
    for (col, f) in generators.iter().enumerate() {
        for (k, x) in xs.iter().enumerate() {
            let v = f.evaluate(x);
            m.view_mut((k * n, col), (n, 1)).copy_from(&v);
        }
    }
    Ok(linalg::rank(&m, RankTol::default()))
}

/// Exact rational copy of an integer-valued field.
#[derive(Clone, Debug)]
pub struct ExactField {
    pub g: RationalMatrix,
    pub b: RationalMatrix,
    pub w: RationalMatrix,
    pub c: Rational,
    pub u: RationalMatrix,
}

impl ExactField {
    fn inner(&self, x: &RationalMatrix, y: &RationalMatrix) -> Rational {
        x.transpose().mul(&self.g).mul(y)[(0, 0)].clone()
    }

    pub fn evaluate(&self, x: &RationalMatrix) -> RationalMatrix {
        let ux = self.inner(&self.u, x);
        let xx = self.inner(x, x);
        let two = exact::rational_from_int(2);
        self.w
            .add(&self.b.mul(x))
            .add(&x.scale(&self.c))
            .add(&x.scale(&(&two * &ux)))
            .sub(&self.u.scale(&xx))
    }

    pub fn gradient(&self, x: &RationalMatrix) -> RationalMatrix {
        let n = self.g.nrows();
        let two = exact::rational_from_int(2);
        let diag = &self.c + &two * self.inner(&self.u, x);
        let gu = self.g.mul(&self.u);
        let gx = self.g.mul(x);
        self.b
            .add(&RationalMatrix::identity(n).scale(&diag))
            .add(&x.mul(&gu.transpose()).scale(&two))
            .sub(&self.u.mul(&gx.transpose()).scale(&two))
    }

    pub fn conformal_factor(&self, x: &RationalMatrix) -> Rational {
        exact::rational_from_int(2) * &self.c + exact::rational_from_int(4) * self.inner(&self.u, x)
    }

    /// `dphi = 4 G u` as a row.
    pub fn phi_differential(&self) -> RationalMatrix {
        self.g.mul(&self.u).transpose().scale(&exact::rational_from_int(4))
    }

    /// `G ∇v + (G ∇v)^T - phi G`, which vanishes exactly for a conformal field.
    pub fn lie_derivative_residual(&self, x: &RationalMatrix) -> RationalMatrix {
        let l = self.g.mul(&self.gradient(x));
        l.add(&l.transpose()).sub(&self.g.scale(&self.conformal_factor(x)))
    }

    pub fn is_zero_at(&self, x: &RationalMatrix) -> bool {
        self.evaluate(x).is_zero()
    }

    pub fn phi_is_zero_at(&self, x: &RationalMatrix) -> bool {
        self.conformal_factor(x).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    fn minkowski3() -> MetricForm {
        MetricForm::diagonal(&[-1.0, 1.0, 1.0])
    }

    /// Term-by-term evaluation, written independently of `evaluate`.
    fn brute_force_eval(p: &ConformalFieldParams, x: &DVector<f64>) -> DVector<f64> {
        let n = p.dim();
        let g = p.metric().gram();
        let mut ux = 0.0;
        let mut xx = 0.0;
        for i in 0..n {
            for j in 0..n {
                ux += p.u()[i] * g[(i, j)] * x[j];
                xx += x[i] * g[(i, j)] * x[j];
            }
        }
        let mut out = p.w().clone();
        for i in 0..n {
            for j in 0..n {
                out[i] += p.b()[(i, j)] * x[j];
            }
            out[i] += p.c() * x[i] + 2.0 * ux * x[i] - xx * p.u()[i];
        }
        out
    }

    fn fd_gradient(p: &ConformalFieldParams, x: &DVector<f64>) -> DMatrix<f64> {
        let n = p.dim();
        let h = 1e-5 * (1.0 + x.norm());
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            let col = (p.evaluate(&(x + e(n, j) * h)) - p.evaluate(&(x - e(n, j) * h))) / (2.0 * h);
            m.set_column(j, &col);
        }
        m
    }

    #[test]
    fn dilation_is_identity() {
        let p = ConformalFieldParams::zero(minkowski3()).unwrap().with_c(1.0).unwrap();
        let x = DVector::from_vec(vec![0.3, -2.0, 5.0]);
        assert_eq!(p.evaluate(&x), x);
        assert_eq!(p.conformal_factor(&x), 2.0);
    }

    #[test]
    fn value_at_origin_is_w() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = ConformalFieldParams::random(minkowski3(), &mut rng);
        assert_eq!(p.evaluate(&DVector::zeros(3)), p.w().clone());
    }

    #[test]
    fn inversion_term_example() {
        let p = ConformalFieldParams::zero(minkowski3()).unwrap().with_u(e(3, 0)).unwrap();
        let v = p.evaluate(&e(3, 1));
        assert_eq!(v, -e(3, 0));
        assert_eq!(v, brute_force_eval(&p, &e(3, 1)));
        // gradient at e1 is -2 Id
        let grad = p.gradient(&e(3, 0));
        assert!((grad + DMatrix::identity(3, 3) * 2.0).abs().max() < 1e-15);
        assert_eq!(p.conformal_factor(&e(3, 0)), -4.0);
    }

    #[test]
    fn evaluate_matches_brute_force_and_gradient_matches_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let p = ConformalFieldParams::random(minkowski3(), &mut rng);
            let x = DVector::from_fn(3, |_, _| rng.random_range(-2.0..2.0));
            assert!((p.evaluate(&x) - brute_force_eval(&p, &x)).norm() < 1e-12);
            let g = p.gradient(&x);
            let fd = fd_gradient(&p, &x);
            assert!((&g - &fd).norm() <= 1e-6 * g.norm().max(1.0));
            let trace_phi = 2.0 * g.trace() / 3.0;
            assert!((trace_phi - p.conformal_factor(&x)).abs() < 1e-12 * (1.0 + x.norm_squared()));
        }
    }

    #[test]
    fn gradient_at_origin_is_b_plus_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = ConformalFieldParams::random(MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]), &mut rng);
        let expected = p.b() + DMatrix::identity(4, 4) * p.c();
        assert!((p.gradient(&DVector::zeros(4)) - expected).abs().max() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = minkowski3();
        let mut s = DMatrix::zeros(3, 3);
        s[(0, 1)] = 1.0;
        s[(1, 0)] = -0.5;
        let err = ConformalFieldParams::new(g.clone(), DVector::zeros(3), s, 0.0, DVector::zeros(3)).unwrap_err();
        assert!(matches!(err, Error::NotAntisymmetric { .. }));
        let degenerate = MetricForm::diagonal(&[1.0, 0.0, 1.0]);
        assert!(matches!(ConformalFieldParams::zero(degenerate), Err(Error::DegenerateMetric)));
        let short = ConformalFieldParams::new(g, DVector::zeros(2), DMatrix::zeros(3, 3), 0.0, DVector::zeros(3));
        assert!(matches!(short, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn corrupted_skew_part_breaks_conformality() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = ConformalFieldParams::random(minkowski3(), &mut rng);
        let x = DVector::from_vec(vec![0.2, 0.1, -0.4]);
        assert!(p.lie_derivative_residual(&x) < 1e-12 * p.identity_scale(&x));
        // Replace B by a non-skew operator behind the constructor's back.
        let mut bad = p.clone();
        bad.b[(0, 1)] += 0.01;
        assert!(bad.lie_derivative_residual(&x) > 1e-6);
    }

    #[test]
    fn killing_field_is_exactly_conformal() {
        let mut s = DMatrix::zeros(3, 3);
        s[(1, 2)] = 1.0;
        s[(2, 1)] = -1.0;
        let p = ConformalFieldParams::new(minkowski3(), DVector::zeros(3), s, 0.0, DVector::zeros(3)).unwrap();
        let ex = p.exact().unwrap();
        let x = RationalMatrix::column_from_integral(&DVector::from_vec(vec![3.0, -7.0, 2.0])).unwrap();
        assert!(ex.lie_derivative_residual(&x).is_zero());
        assert!(ex.conformal_factor(&x).is_zero());
    }

    #[test]
    fn exact_field_agrees_with_float() {
        let g = MetricForm::from_rows(3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let mut s = DMatrix::zeros(3, 3);
        s[(0, 2)] = 3.0;
        s[(2, 0)] = -3.0;
        let p = ConformalFieldParams::new(
            g,
            DVector::from_vec(vec![1.0, 0.0, -1.0]),
            s,
            2.0,
            DVector::from_vec(vec![1.0, 1.0, 0.0]),
        )
        .unwrap();
        let ex = p.exact().unwrap();
        let xf = DVector::from_vec(vec![2.0, -1.0, 3.0]);
        let x = RationalMatrix::column_from_integral(&xf).unwrap();
        assert!((ex.evaluate(&x).to_f64().column(0) - p.evaluate(&xf)).norm() < 1e-12);
        assert!((ex.gradient(&x).to_f64() - p.gradient(&xf)).norm() < 1e-12);
        assert!(ex.lie_derivative_residual(&x).is_zero());
    }

    #[test]
    fn second_derivative_identity_and_fd_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]);
        for _ in 0..100 {
            let p = ConformalFieldParams::random(g.clone(), &mut rng);
            let x = DVector::from_fn(4, |_, _| rng.random_range(-1.0..1.0));
            let d = DVector::from_fn(4, |_, _| rng.random_range(-1.0..1.0));
            assert!(p.second_derivative_residual(&x, &d) <= 1e-12 * p.identity_scale(&x) * (1.0 + d.norm()));
            // Directional derivative of ∇v by central differences of the
            // finite-difference gradient.
            let h = 1e-5 * (1.0 + x.norm());
            let fd = (fd_gradient(&p, &(&x + &d * h)) - fd_gradient(&p, &(&x - &d * h))) / (2.0 * h);
            let closed = (p.gradient(&(&x + &d)) - p.gradient(&(&x - &d))) / 2.0;
            assert!((fd - closed).abs().max() < 1e-5);
        }
    }

    #[test]
    fn basis_dimension_values() {
        assert_eq!(basis_dimension(&minkowski3()).unwrap(), 10);
        assert_eq!(basis_dimension(&MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0])).unwrap(), 15);
        assert!(basis_dimension(&MetricForm::diagonal(&[-1.0, 1.0])).is_err());
    }

    #[test]
    fn gauge_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = ConformalFieldParams::random(minkowski3(), &mut rng);
        let x = DVector::from_vec(vec![0.5, -0.25, 0.75]);
        let zero = vec![0.0; QuadraticPotential::coeff_len(3)];
        assert_eq!(p.killing_gauge_residual(&zero, &x).unwrap(), 0.0);
        let coeffs: Vec<f64> = (0..QuadraticPotential::coeff_len(3)).map(|_| rng.random_range(-1.0..1.0)).collect();
        assert!(p.killing_gauge_residual(&coeffs, &x).unwrap() < 1e-12 * p.identity_scale(&x));
        assert!(p.killing_gauge_residual(&coeffs[1..], &x).is_err());
    }

    #[test]
    fn radial_factor_reproduces_field() {
        let g = MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]);
        let p = ConformalFieldParams::zero(g).unwrap().with_u(e(4, 0)).unwrap();
        let z = DVector::zeros(4);
        let d = (e(4, 1) + e(4, 2)).normalize();
        let f0 = p.radial_factor(&z, &d, 0.0).unwrap();
        // Oracle: second finite difference of s ↦ v(s d) at 0.
        let s = 1e-3;
        let fd = (p.evaluate(&(&d * s)) + p.evaluate(&(&d * -s)) - p.evaluate(&z) * 2.0) / (2.0 * s * s);
        assert!((&f0 - fd).norm() < 1e-8);
        for s in [0.1, 0.01] {
            let fs = p.radial_factor(&z, &d, s).unwrap();
            let v = p.evaluate(&(&d * s));
            assert!((fs * (s * s) - &v).norm() <= 1e-12 * v.norm().max(1e-300) + 1e-300);
        }
        assert!(p.radial_factor(&z, &e(4, 0), 0.1).is_ok());
        // Not a zero.
        assert!(matches!(p.radial_factor(&e(4, 2), &d, 0.1), Err(Error::NotAZero { .. })));
    }

    #[test]
    fn hessian_identity_on_cone_example() {
        let g = MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]);
        let p = ConformalFieldParams::zero(g).unwrap().with_u(e(4, 0)).unwrap();
        let z = DVector::zeros(4);
        for w in [e(4, 1), e(4, 2) * 0.5 + e(4, 3)] {
            assert!(p.hessian_identity_check(&z, &w).unwrap() <= 1e-10 * p.param_scale());
        }
        let dil = ConformalFieldParams::zero(minkowski3()).unwrap().with_c(1.0).unwrap();
        assert!(matches!(
            dil.hessian_identity_check(&DVector::zeros(3), &e(3, 0)),
            Err(Error::Precondition(_))
        ));
    }
}
