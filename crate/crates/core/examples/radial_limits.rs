//! Radial limit directions on the (2,2) cone.

use conformal_zeros::builtin::builtin;
use conformal_zeros::{classify_zero, zeroset};

fn main() -> conformal_zeros::Result<()> {
    let b = builtin("case-b-cone-22")?;
    let cls = classify_zero(&b.params, &b.z)?;
    let sample = zeroset::find_zeros(&b.params, &b.z, b.radius, 600, 1)?;
    let r = zeroset::radial_direction_audit(&b.params, &cls, &sample, 24, 9)?;
    println!("vertex: {} directions spanning {} (dim H = {}), max deviation {:.1e}",
        r.vertex_directions, r.vertex_span_dim, r.expected_span_dim, r.vertex_max_deviation);
    println!("off-vertex: {} directions, max deviation from y^perp ∩ H {:.1e} (tol {:.0e})",
        r.offvertex_directions, r.offvertex_max_deviation, r.tol);
    println!("pass: {}", r.pass);
    Ok(())
}
