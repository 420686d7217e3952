//! Transport along a null line, zeros along null directions of H, constancy
//! of the characteristic polynomial and an interior zero of phi on a chord.

use conformal_zeros::builtin::builtin;
use conformal_zeros::geodesics::{self, GeodesicState};
use conformal_zeros::{classify_zero, forms, ConformalFieldParams, MetricForm};
use nalgebra::DVector;

fn main() -> conformal_zeros::Result<()> {
    let b = builtin("case-b-cone-22")?;
    let p = &b.params;
    let cls = classify_zero(p, &b.z)?;
    let dirs = forms::sample_null_cone(p.metric(), &cls.h, 8, 1.0, 1)?;
    for w in dirs.iter().filter(|w| w.norm() > 1e-6).take(3) {
        let l = geodesics::lemma_zeros_check(p, &b.z, w, 21)?;
        let c = geodesics::char_poly_constancy(p, &b.z, w, 11)?;
        println!("w = {:>7.3?}: max|v| {:.1e}, char poly drift {:.1e}", w.as_slice(), l.max_v, c.max_drift);
    }

    let xdot = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]);
    let x0 = DVector::from_vec(vec![0.3, -0.2, 0.1, 0.5]);
    let t = geodesics::propagate(p, &GeodesicState::from_field(p, &x0, &xdot, 0.0), 1.0, 1000)?;
    println!("propagation over {} steps: terminal error {:.1e}", t.steps, t.terminal_error);

    // Two zeros s1 u and s2 u with phi of opposite signs.
    let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0]);
    let u = DVector::from_vec(vec![0.0, 1.0, 0.0]);
    let (s1, s2) = (0.5, -1.0);
    let q = ConformalFieldParams::zero(g)?
        .with_u(u.clone())?
        .with_c(-(s1 + s2))?
        .with_w(&u * (s1 * s2))?;
    let scan = geodesics::interior_vanishing_scan(&q, &(&u * s1), &(&u * s2), 64)?;
    println!("chord between zeros: phi vanishes at t* = {:?} (phi = {:?})", scan.t_star, scan.phi_at_t_star);
    Ok(())
}
