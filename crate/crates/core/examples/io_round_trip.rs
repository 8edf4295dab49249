//! Canonical JSON: write, read back, and compare bytes.

use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};
use weil_charge::io::{load_instance, save_instance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let inst = generate(&GeneratorSpec::new(GeneratorKind::FluxTorus, 8, 3))?;
    save_instance(&inst, &a)?;
    save_instance(&load_instance(&a)?, &b)?;
    let (x, y) = (std::fs::read(&a)?, std::fs::read(&b)?);
    println!("{} bytes, identical after round trip: {}", x.len(), x == y);
    Ok(())
}
