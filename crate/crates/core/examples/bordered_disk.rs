//! Bordered identity on the disk and on a sphere with a cap removed, where
//! the boundary holonomy carries the missing flux.

use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};
use weil_charge::identity::check_bordered;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [GeneratorKind::DiskVortex, GeneratorKind::SphereMinusCap] {
        let inst = generate(&GeneratorSpec::new(kind, 24, 2))?;
        let r = check_bordered(&inst.mesh, inst.twoform()?, inst.section()?, inst.connection()?, None)?;
        let b = r.bordered.as_ref().expect("bordered identity");
        println!("{kind:?}: g = {}, l = {}, holonomy = {:.6}", r.charge(), r.total_winding(), r.total_holonomy());
        for t in &b.terms {
            println!("  {:<12} {:+.12}", t.name, t.value);
        }
        println!("  residual {:+.3e} ({:?})", b.residual, b.verdict);
    }
    Ok(())
}
