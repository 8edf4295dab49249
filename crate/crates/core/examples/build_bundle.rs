//! Transition function between the two monopole charts.

use weil_charge::bundle::{propagate_transition, verify_cocycle_relation, TransitionOutcome};
use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (k, scale) in [(1, 1.0), (3, 1.0), (1, 1.5)] {
        let inst = generate(&GeneratorSpec::new(GeneratorKind::MonopoleSphere, 16, k).with_scale(scale))?;
        let atlas = inst.atlas()?;
        atlas.validate(&inst.mesh, inst.twoform()?)?;
        match propagate_transition(&inst.mesh, atlas)? {
            TransitionOutcome::SingleValued(t) => println!(
                "k = {k} scale = {scale}: single-valued, {} overlap vertices, seam winding {}, cocycle residual {:.2e}",
                t.values.len(),
                t.seam_winding()?,
                verify_cocycle_relation(&inst.mesh, &t, atlas)?
            ),
            TransitionOutcome::Obstruction(o) => println!(
                "k = {k} scale = {scale}: obstruction, loop defect {:.6}, fractional part {:.6}",
                o.loop_defect, o.fractional_part
            ),
        }
    }
    Ok(())
}
