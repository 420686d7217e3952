//! Damped Gauss–Newton (Levenberg–Marquardt) for zeros of a field.

use nalgebra::{DMatrix, DVector};

use crate::field::ConformalFieldParams;
use crate::linalg::{self, RankTol};

/// Outcome of a Newton run.
#[derive(Clone, Debug)]
pub struct NewtonResult {
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

const MAX_ITER: usize = 200;
const MAX_HALVINGS: usize = 20;

/// Levenberg–Marquardt on `|v|^2` with damping `λ = |v|`. The damping keeps
/// homogeneous fields from collapsing every start onto the vertex (a plain
/// Newton step there is `x/2`), and vanishes at regular zeros so convergence
/// stays quadratic. Iterates well past the acceptance threshold so that
/// linearly converging runs near singular zeros still land close to the zero
/// set; stops on stagnation.
pub fn newton_zero(p: &ConformalFieldParams, x0: &DVector<f64>) -> NewtonResult {
    let n = p.dim();
    let mut x = x0.clone();
    let mut v = p.evaluate(&x);
    let mut r = v.norm();
    let floor = 1e-15 * p.param_scale();
    let mut iterations = 0;
    while iterations < MAX_ITER && r > 0.0 {
        iterations += 1;
        let j = p.gradient(&x);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &v;
        let mut lambda = r;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let a = &jtj + DMatrix::identity(n, n) * lambda;
            let step = a
                .clone()
                .cholesky()
                .map(|c| c.solve(&g))
                .unwrap_or_else(|| linalg::pinv_solve(&a, &g, RankTol::default()));
            if step.norm() <= 1e-16 * (1.0 + x.norm()) {
                break;
            }
            let cand = &x - &step;
            let vc = p.evaluate(&cand);
            let rc = vc.norm();
            if rc < r {
                accepted = Some((cand, vc, rc));
                break;
            }
            lambda = if lambda > 0.0 { lambda * 4.0 } else { floor };
        }
        let Some((cand, vc, rc)) = accepted else { break };
        let progress = r - rc;
        x = cand;
        v = vc;
        r = rc;
        if r <= floor && progress <= 1e-3 * r {
            break;
        }
    }
    NewtonResult {
        x,
        residual: r,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::MetricForm;

    #[test]
    fn converges_to_isolated_zero() {
        let p = ConformalFieldParams::zero(MetricForm::diagonal(&[1.0, 1.0, 1.0]))
            .unwrap()
            .with_c(1.0)
            .unwrap();
        let r = newton_zero(&p, &DVector::from_vec(vec![0.3, -0.2, 0.9]));
        assert!(r.x.norm() < 1e-14);
    }

    #[test]
    fn lands_on_null_line_with_quadratic_degeneracy() {
        // v2 = 2 x2^2 converges only linearly; iterate until stagnation.
        let g = MetricForm::from_rows(
            4,
            &[0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        let mut s = nalgebra::DMatrix::zeros(4, 4);
        s[(2, 3)] = -1.0;
        s[(3, 2)] = 1.0;
        let mut u = DVector::zeros(4);
        u[0] = 1.0;
        let p = ConformalFieldParams::zero(g).unwrap().with_s(s).unwrap().with_u(u).unwrap();
        let r = newton_zero(&p, &DVector::from_vec(vec![0.5, 0.1, 0.05, -0.02]));
        assert!(r.x.rows(1, 3).norm() < 1e-7, "{:?}", r.x);
    }
}
