//! Classification of the distinguished zero of every built-in field.

use conformal_zeros::builtin::{builtin, BUILTIN_NAMES};
use conformal_zeros::classify_zero;

fn main() -> conformal_zeros::Result<()> {
    for name in BUILTIN_NAMES.iter().filter(|n| **n != "surface-2d") {
        let b = builtin(name)?;
        let s = classify_zero(&b.params, &b.z)?.summary();
        println!("{name:<18} {}", serde_json::to_string(&s)?);
    }
    Ok(())
}
