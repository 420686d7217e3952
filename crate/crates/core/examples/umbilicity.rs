//! Second fundamental forms: cone components are umbilical, the control
//! quadric is not.

use conformal_zeros::builtin::builtin;
use conformal_zeros::forms::MetricForm;
use conformal_zeros::zeroset::{self, ControlQuadric};
use conformal_zeros::{classify_zero, ZeroModel};
use nalgebra::DVector;

fn main() -> conformal_zeros::Result<()> {
    let b = builtin("case-b-cone-22")?;
    let cls = classify_zero(&b.params, &b.z)?;
    let points: Vec<DVector<f64>> = cls
        .model
        .sample(40, 0.9, 5)?
        .into_iter()
        .filter(|y| y.norm() > 0.2)
        .take(12)
        .collect();
    let cone = zeroset::umbilicity_check(&b.params, &points, 2, b.params.metric(), 1e-3)?;
    println!("field cone:   max residual {:.2e} (tol {:.0e})", cone.max_residual, cone.tol);
    let model: &ZeroModel = &cls.model;
    let m = zeroset::umbilicity_check(model, &points, 2, b.params.metric(), 1e-3)?;
    println!("model cone:   max residual {:.2e}", m.max_residual);

    let euclid = MetricForm::diagonal(&[1.0, 1.0, 1.0]);
    let q: Vec<DVector<f64>> = [(0.3, 0.2), (-0.5, 0.1), (0.7, -0.4)]
        .iter()
        .map(|&(a, c): &(f64, f64)| DVector::from_vec(vec![a, c, a * a + 2.0 * c * c]))
        .collect();
    let ctrl = zeroset::umbilicity_check(&ControlQuadric, &q, 2, &euclid, 1e-3)?;
    println!("control:      max residual {:.2e}, pass {}", ctrl.max_residual, ctrl.pass);
    Ok(())
}
