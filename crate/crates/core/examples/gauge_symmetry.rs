//! Gauge transforms, conjugation and orientation reversal.

use weil_charge::census::run_census;
use weil_charge::fields::gauge_transform;
use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};
use weil_charge::identity::check_bordered;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = generate(&GeneratorSpec::new(GeneratorKind::SphereMinusCap, 24, 1))?;
    let (s, c, w) = (inst.section()?, inst.connection()?, inst.twoform()?);
    let base = check_bordered(&inst.mesh, w, s, c, None)?;

    let lambda: Vec<f64> = inst.mesh.positions().iter().map(|p| 3.0 * p[0] * p[1] + (2.0 * p[2]).sin()).collect();
    let (s2, c2) = gauge_transform(s, c, &lambda);
    let gauged = check_bordered(&inst.mesh, w, &s2, &c2, None)?;
    println!(
        "gauge: residual {:+.3e} -> {:+.3e}, g {} -> {}",
        base.bordered.as_ref().unwrap().residual,
        gauged.bordered.as_ref().unwrap().residual,
        base.charge(),
        gauged.charge()
    );

    println!("conjugate: g = {}", run_census(&inst.mesh, &s.conjugated())?.total_charge);

    let rev = check_bordered(&inst.mesh.reversed(), &w.negated(), s, c, None)?;
    println!(
        "reversed: flux {:+.6} -> {:+.6}, l {} -> {}, passed {}",
        base.total_flux,
        rev.total_flux,
        base.total_winding(),
        rev.total_winding(),
        rev.passed()
    );
    Ok(())
}
