//! Vortex census of psi = (z - a)(z - b) conj(z - c) on a flat disk.

use num_complex::Complex64;
use weil_charge::census::run_census;
use weil_charge::fields::SectionField;
use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let disk = generate(&GeneratorSpec::new(GeneratorKind::DiskVortex, 24, 1))?;
    let (a, b, c) = (Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4), Complex64::new(0.05, -0.5));
    let section = SectionField::from_fn(&disk.mesh, |_, p| {
        let z = Complex64::new(p[0], p[1]);
        (z - a) * (z - b) * (z - c).conj()
    });
    let census = run_census(&disk.mesh, &section)?;
    println!("total charge g = {}", census.total_charge);
    for v in &census.vortices {
        println!(
            "face {:4}  winding {:+}  eta {:+}  beta {}  at ({:.3}, {:.3})",
            v.face, v.winding, v.brouwer_degree, v.hopf_index, v.position[0], v.position[1]
        );
    }
    Ok(())
}
