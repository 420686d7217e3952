//! Field constructions with prescribed zeros, shared by the integration tests.
#![allow(dead_code)]

use conformal_zeros::{ConformalFieldParams, MetricForm};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub const SIGNATURES: &[(usize, usize)] = &[(3, 0), (2, 1), (1, 2), (2, 2), (3, 1)];
pub const INDEFINITE: &[(usize, usize)] = &[(2, 1), (1, 2), (2, 2), (3, 1)];

pub fn diagonal(sig: (usize, usize)) -> MetricForm {
    let mut d = vec![1.0; sig.0];
    d.extend(std::iter::repeat_n(-1.0, sig.1));
    MetricForm::diagonal(&d)
}

pub fn random_vec(rng: &mut impl Rng, n: usize, r: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-r..r))
}

/// `a ⊗ b♭ - b ⊗ a♭`, skew-adjoint for `g`.
pub fn wedge(g: &MetricForm, a: &DVector<f64>, b: &DVector<f64>) -> DMatrix<f64> {
    a * g.lower(b).transpose() - b * g.lower(a).transpose()
}

/// A random null pair `(l, m)`: `<l,l> = <m,m> = 0`, `<l,m> = 1`.
pub fn null_pair(g: &MetricForm, rng: &mut impl Rng) -> (DVector<f64>, DVector<f64>) {
    let n = g.dim();
    loop {
        // A null vector: rescale the negative-definite part onto the
        // positive-definite norm.
        let x = random_vec(rng, n, 1.0);
        let gram = g.gram();
        let (mut pos, mut neg) = (DVector::zeros(n), DVector::zeros(n));
        for i in 0..n {
            if gram[(i, i)] > 0.0 {
                pos[i] = x[i];
            } else {
                neg[i] = x[i];
            }
        }
        let (pp, nn) = (g.norm_sq(&pos), -g.norm_sq(&neg));
        if pp < 1e-3 || nn < 1e-3 {
            continue;
        }
        let l = pos + neg * (pp / nn).sqrt();
        let y = random_vec(rng, n, 1.0);
        let ly = g.inner(&l, &y);
        if ly.abs() < 0.1 {
            continue;
        }
        let m0 = y / ly;
        let m = &m0 - &l * (0.5 * g.norm_sq(&m0));
        return (l, m);
    }
}

/// The field with `∇v_z = a + (phi/2) I` for a skew-adjoint `a`, given `z`
/// and `u`.
pub fn field_with_jet(
    g: &MetricForm,
    a: &DMatrix<f64>,
    phi: f64,
    z: &DVector<f64>,
    u: &DVector<f64>,
) -> ConformalFieldParams {
    let b = a - wedge(g, z, u) * 2.0;
    let gb = g.gram() * &b;
    let s = (&gb - gb.transpose()) * 0.5;
    let c = 0.5 * phi - 2.0 * g.inner(u, z);
    let probe = ConformalFieldParams::new(g.clone(), DVector::zeros(g.dim()), s.clone(), c, u.clone()).unwrap();
    let w = -probe.evaluate(z);
    ConformalFieldParams::new(g.clone(), w, s, c, u.clone()).unwrap()
}

/// Random skew-adjoint operator of rank at most `2k`.
pub fn random_skew(g: &MetricForm, k: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let n = g.dim();
    let mut a = DMatrix::zeros(n, n);
    for _ in 0..k {
        a += wedge(g, &random_vec(rng, n, 1.0), &random_vec(rng, n, 1.0));
    }
    a
}

/// A zero `z` with `phi(z) != 0` whose kernel contains the null vector `l`.
pub fn zero_with_null_kernel(g: &MetricForm, rng: &mut impl Rng) -> (ConformalFieldParams, DVector<f64>, DVector<f64>) {
    let n = g.dim();
    let (l, m) = null_pair(g, rng);
    let phi = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    // Boost with eigenvalue -phi/2 on l, plus a rotation of span(l, m)^perp.
    let boost = wedge(g, &l, &m) * (-0.5 * phi);
    let proj = DMatrix::identity(n, n) - &l * g.lower(&m).transpose() - &m * g.lower(&l).transpose();
    let a = boost + &proj * random_skew(g, 1, rng) * &proj;
    let z = random_vec(rng, n, 1.0);
    let u = random_vec(rng, n, 1.0);
    (field_with_jet(g, &a, phi, &z, &u), z, l)
}

/// A zero with `phi(z) = 0` and `∇v_z` of rank at most `2k`.
pub fn zero_with_vanishing_phi(g: &MetricForm, k: usize, rng: &mut impl Rng) -> (ConformalFieldParams, DVector<f64>) {
    let n = g.dim();
    let a = random_skew(g, k, rng);
    let z = random_vec(rng, n, 1.0);
    let u = random_vec(rng, n, 1.0);
    (field_with_jet(g, &a, 0.0, &z, &u), z)
}

/// An admissible null geodesic: `x0` a zero, `l` a null eigenvector of
/// `∇v_{x0}` with `dphi(l) = 0`.
pub fn admissible_geodesic(g: &MetricForm, rng: &mut impl Rng) -> (ConformalFieldParams, DVector<f64>, DVector<f64>) {
    let n = g.dim();
    let (l, m) = null_pair(g, rng);
    let phi = rng.random_range(-2.0..2.0);
    let boost = wedge(g, &l, &m) * rng.random_range(-1.5..1.5);
    let proj = DMatrix::identity(n, n) - &l * g.lower(&m).transpose() - &m * g.lower(&l).transpose();
    let a = boost + &proj * random_skew(g, 1, rng) * &proj;
    let z = random_vec(rng, n, 1.0);
    let u0 = random_vec(rng, n, 1.0);
    let u = &u0 - &m * g.inner(&u0, &l);
    (field_with_jet(g, &a, phi, &z, &u), z, l)
}

/// Zeros `s1 u` and `s2 u` of `v = kappa u + c x + 2<u,x> x - <x,x> u`.
pub fn two_pole_field(g: &MetricForm, u: &DVector<f64>, s1: f64, s2: f64) -> ConformalFieldParams {
    let uu = g.norm_sq(u);
    let n = g.dim();
    ConformalFieldParams::new(g.clone(), u * (uu * s1 * s2), DMatrix::zeros(n, n), -uu * (s1 + s2), u.clone()).unwrap()
}
