//! Detects the singular vertex of the (2,2) cone and checks parity of the
//! codimension on cone and null-line examples.

use conformal_zeros::builtin::builtin;
use conformal_zeros::tolerances::MODEL_TOL;
use conformal_zeros::{classify_zero, zeroset};

fn main() -> conformal_zeros::Result<()> {
    for name in ["case-b-cone-22", "odd-codim-null"] {
        let b = builtin(name)?;
        let cls = classify_zero(&b.params, &b.z)?;
        let sample = zeroset::find_zeros(&b.params, &b.z, b.radius, 600, 1)?;
        let s = zeroset::singular_set_check(&b.params, &sample, &cls, MODEL_TOL, 3)?;
        println!(
            "{name}: regular dim {}, flagged {:?}, false positives {}, pass {}",
            s.regular_dim, s.flagged_points, s.false_positives, s.pass
        );
        let par = zeroset::codimension_parity_check(&b.params, &cls, &sample, 4)?;
        println!(
            "  codim {} (even {}), null exempt {}, totally geodesic {}, exact {}",
            par.estimated_codim, par.even, par.exempt, par.totally_geodesic, par.exact_geodesic
        );
    }
    Ok(())
}
