//! Signature, orthogonal complements and null-cone samples of an indefinite form.

use conformal_zeros::forms::{self, MetricForm, Subspace};
use conformal_zeros::RankTol;
use nalgebra::DVector;

fn main() -> conformal_zeros::Result<()> {
    let g = MetricForm::diagonal(&[-1.0, -1.0, 1.0, 1.0]);
    println!("signature (p, q, r) = {:?}", forms::signature(&g, RankTol::default()).triple());

    let line = Subspace::span(4, &[DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0])])?;
    let perp = forms::orthogonal_complement(&g, &line, RankTol::default())?;
    println!("null line l: dim l^perp = {}, l inside l^perp: {}", perp.dim(), line.is_subspace_of(&perp, 1e-12));

    let h = Subspace::span(4, &[
        DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]),
        DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]),
        DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]),
    ])?;
    let cone = forms::sample_null_cone(&g, &h, 12, 1.0, 3)?;
    for y in cone.iter().take(5) {
        println!("  y = {:>8.4?}  <y,y> = {:+.1e}", y.as_slice(), g.norm_sq(y));
    }
    let spanned = Subspace::span(4, &cone)?;
    println!("cone samples span {} of dim H = {}", spanned.dim(), h.dim());
    Ok(())
}
