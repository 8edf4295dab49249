//! Flux quantization on the monopole sphere, and what a fractional flux
//! looks like.

use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};
use weil_charge::identity::check_closed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (k, scale) in [(1, 1.0), (-2, 1.0), (1, 1.5)] {
        let inst = generate(&GeneratorSpec::new(GeneratorKind::MonopoleSphere, 24, k).with_scale(scale))?;
        let r = check_closed(&inst.mesh, inst.twoform()?, inst.section()?, None)?;
        let c = r.closed.as_ref().expect("closed identity");
        println!(
            "k = {k:+} scale = {scale}: flux/2pi = {:.12}, g = {}, residual = {:+.3e}, {:?}",
            r.flux_over_h,
            r.charge(),
            c.residual,
            c.verdict
        );
    }
    Ok(())
}
