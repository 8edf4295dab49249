//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 identity failure or obstruction, 2 usage error,
//! 3 data error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::generators::{generate, GeneratorKind, GeneratorSpec};
use crate::io::{load_instance, load_value, save_instance, to_canonical_string, write_atomic};
use crate::plot::render_svg;
use crate::report::{bundle_report, census_report, check_report, display_number, IdentityKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

pub const THREADS_ENV: &str = "WEIL_CHARGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "weil-charge", version, about = "Integrality checks for line bundle data on triangulated surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated test instance.
    Generate {
        #[arg(value_enum)]
        kind: GeneratorKind,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Side count for polygon-tangent.
        #[arg(long, default_value_t = 4)]
        sides: usize,
        /// Cap polar radius in radians (cap-tangent, sphere-minus-cap).
        #[arg(long)]
        cap_angle: Option<f64>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Count vortices of the section.
    Census {
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Evaluate an integrality identity.
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        identity: IdentityKind,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Build the transition function of a two-chart atlas.
    BuildBundle {
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Render an SVG of the mesh with the vortices of a report.
    Plot {
        input: PathBuf,
        report: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV}={raw:?} is not a positive integer"))?;
    // a pool configured earlier in this process stays in effect
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Generate { kind, n, k, scale, sides, cap_angle, output } => {
            let mut spec = GeneratorSpec::new(kind, n, k).with_scale(scale).with_sides(sides);
            if let Some(a) = cap_angle {
                spec = spec.with_cap_angle(a);
            }
            let inst = generate(&spec)?;
            match &output {
                Some(p) => save_instance(&inst, p)?,
                None => emit(&crate::io::instance_to_string(&inst)?, None)?,
            }
            eprintln!(
                "generated {kind:?} n={n} k={k} scale={scale}: {} vertices, {} faces",
                inst.mesh.num_vertices(),
                inst.mesh.num_faces()
            );
            Ok(EXIT_PASS)
        }
        Command::Census { input, output } => {
            let inst = load_instance(&input)?;
            let r = census_report(&inst)?;
            emit(&to_canonical_string(&r)?, output.as_deref())?;
            eprintln!(
                "g = {}, {} vortices, max |phase step| = {:.6}",
                r.census.total_charge,
                r.census.vortices.len(),
                r.census.max_abs_step
            );
            Ok(EXIT_PASS)
        }
        Command::Check { input, identity, tol, output } => {
            if let Some(t) = tol {
                if !(t.is_finite() && t > 0.0) {
                    return Err(Error::UnsupportedParameter(format!("--tol {t}")));
                }
            }
            let inst = load_instance(&input)?;
            let r = check_report(&inst, identity, tol)?;
            emit(&to_canonical_string(&r)?, output.as_deref())?;
            eprintln!("flux = {:e}, flux/h = {}", r.report.total_flux, display_number(r.report.flux_over_h));
            for c in r.report.checks() {
                let terms: Vec<String> = c.terms.iter().map(|t| format!("{} = {:e}", t.name, t.value)).collect();
                eprintln!(
                    "{:?}: {}; residual = {:e}, tolerance = {:e}, {:?}",
                    r.identity,
                    terms.join(", "),
                    c.residual,
                    c.tolerance,
                    c.verdict
                );
                for d in &c.diagnostics {
                    eprintln!("  {d}");
                }
            }
            Ok(if r.passed { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::BuildBundle { input, output } => {
            let inst = load_instance(&input)?;
            let r = bundle_report(&inst)?;
            emit(&to_canonical_string(&r)?, output.as_deref())?;
            if let Some(t) = &r.transition {
                eprintln!(
                    "single-valued: seam winding = {}, cocycle residual = {:e}",
                    t.seam_winding, t.cocycle_residual
                );
            }
            if let Some(o) = &r.obstruction {
                eprintln!("obstruction: loop defect = {:e}, fractional part = {}", o.loop_defect, o.fractional_part);
            }
            Ok(if r.single_valued() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Plot { input, report, output } => {
            let inst = load_instance(&input)?;
            let svg = render_svg(&inst.mesh, &load_value(&report)?)?;
            write_atomic(&output, svg.as_bytes())?;
            Ok(EXIT_PASS)
        }
    }
}

/// Runs one command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
