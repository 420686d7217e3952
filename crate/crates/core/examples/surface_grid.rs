//! In dimension two every product grid is a zero set.

use conformal_zeros::builtin::{SURFACE_XI, SURFACE_XI_PRIME};
use conformal_zeros::zeroset::surface_counterexample;

fn main() -> conformal_zeros::Result<()> {
    let r = surface_counterexample(SURFACE_XI, SURFACE_XI_PRIME, 16)?;
    println!("found {} of {} grid zeros:", r.found.len(), r.expected);
    for z in &r.found {
        println!("  ({:+.6}, {:+.6})", z[0], z[1]);
    }
    println!("max conformality residual {:.1e}; pass {}", r.max_conformality_residual, r.pass);
    Ok(())
}
