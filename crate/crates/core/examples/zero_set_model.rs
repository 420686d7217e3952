//! Samples the zero set of the (2,2) cone example and compares it with the
//! predicted model in both directions.

use conformal_zeros::builtin::builtin;
use conformal_zeros::tolerances::MODEL_TOL;
use conformal_zeros::{classify_zero, zeroset};

fn main() -> conformal_zeros::Result<()> {
    let b = builtin("case-b-cone-22")?;
    let cls = classify_zero(&b.params, &b.z)?;
    let sample = zeroset::find_zeros(&b.params, &b.z, b.radius, 1000, 1)?;
    println!("{} distinct zeros from 1000 starts", sample.len());
    let r = zeroset::compare_to_model(&b.params, &sample, &cls.model, MODEL_TOL, 1000, 2)?;
    println!("sample in model:  {} (max distance {:.1e})", r.subset, r.max_sample_distance);
    println!("model in zeros:   {} ({} probes, max distance {:.1e})", r.superset, r.probes, r.max_probe_distance);
    Ok(())
}
