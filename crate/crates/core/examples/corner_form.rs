//! Boundary-tangent fields on polygons and on a spherical cap.

use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};
use weil_charge::identity::check_corner_form;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for sides in [3, 4, 6] {
        let inst = generate(&GeneratorSpec::new(GeneratorKind::PolygonTangent, 16, 1).with_sides(sides))?;
        let r = check_corner_form(&inst.mesh, inst.twoform()?, inst.section()?, None)?;
        println!("{sides}-gon: g = {}, residual {:+.3e}", r.charge(), r.corner.as_ref().unwrap().residual);
    }
    for n in [16, 32, 64] {
        let inst = generate(&GeneratorSpec::new(GeneratorKind::CapTangent, n, 1))?;
        let r = check_corner_form(&inst.mesh, inst.twoform()?, inst.section()?, None)?;
        let c = r.corner.as_ref().unwrap();
        println!("cap n = {n}: residual {:+.4e}, tolerance {:.4e}", c.residual, c.tolerance);
    }
    Ok(())
}
