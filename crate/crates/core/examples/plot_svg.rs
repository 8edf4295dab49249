//! SVG overlay of the vortices on a disk; writes to the path given as the
//! first argument, or to disk_vortices.svg.

use weil_charge::generators::{generate, GeneratorKind, GeneratorSpec};
use weil_charge::io::{to_canonical_string, write_atomic};
use weil_charge::plot::render_svg;
use weil_charge::report::census_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "disk_vortices.svg".into());
    let inst = generate(&GeneratorSpec::new(GeneratorKind::DiskVortex, 24, 3))?;
    let report: serde_json::Value = serde_json::from_str(&to_canonical_string(&census_report(&inst)?)?)?;
    let svg = render_svg(&inst.mesh, &report)?;
    write_atomic(std::path::Path::new(&out), svg.as_bytes())?;
    println!("wrote {out}");
    Ok(())
}
