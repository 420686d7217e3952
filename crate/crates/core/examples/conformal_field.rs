//! A random conformal field: conformality residual, trace identity and the
//! dimension of the space of such fields.

use conformal_zeros::{basis_dimension, ConformalFieldParams, MetricForm};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> conformal_zeros::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = MetricForm::diagonal(&[-1.0, 1.0, 1.0, 1.0]);
    let p = ConformalFieldParams::random(g.clone(), &mut rng);
    let mut worst = (0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let x = DVector::from_fn(4, |_, _| rng.random_range(-2.0..2.0));
        let s = p.identity_scale(&x);
        let trace = (p.gradient(&x).trace() - 2.0 * p.conformal_factor(&x)).abs();
        worst = (worst.0.max(p.lie_derivative_residual(&x) / s), worst.1.max(trace / s));
    }
    println!("max relative Lie-derivative residual: {:.2e}", worst.0);
    println!("max relative trace residual:          {:.2e}", worst.1);
    for n in 3..=6 {
        let d = basis_dimension(&MetricForm::diagonal(&vec![1.0; n]))?;
        println!("n = {n}: dimension {d} = (n+1)(n+2)/2 = {}", (n + 1) * (n + 2) / 2);
    }
    Ok(())
}
