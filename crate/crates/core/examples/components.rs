//! Two zero components with different constant values of phi.

use conformal_zeros::builtin::builtin;
use conformal_zeros::zeroset;
use nalgebra::DVector;

fn main() -> conformal_zeros::Result<()> {
    let b = builtin("bipolar")?;
    let sample = zeroset::find_zeros(&b.params, &DVector::zeros(3), 2.0, 300, 1)?;
    let d = zeroset::divergence_constancy(&b.params, &sample, None, 0)?;
    for c in &d.components {
        println!("component {}: {} points, phi = {:+.12}, spread {:.1e}",
            c.component_id, c.points.len(), c.phi_values[0], c.phi_spread);
    }
    println!("ambiguous split: {}, pass: {}", d.ambiguous, d.pass);
    Ok(())
}
