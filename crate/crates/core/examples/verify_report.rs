//! Runs the full verification suite on a built-in field and prints the report.

use conformal_zeros::commands::{builtin_config, cmd_verify};
use conformal_zeros::config::Overrides;

fn main() -> conformal_zeros::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "case-b-cone-22".into());
    let cfg = builtin_config(&name, &Overrides::default())?;
    let out = cmd_verify(&cfg)?;
    for c in &out.report.checks {
        println!("{:<28} {:<5} value {:>10.3e} tol {:>8.1e}", c.name, c.pass,
            c.value.unwrap_or(f64::NAN), c.tol.unwrap_or(f64::NAN));
    }
    println!("overall: {}", out.report.pass);
    Ok(())
}
