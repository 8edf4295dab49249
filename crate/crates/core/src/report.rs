//! Machine-readable reports for the census, identity checks and bundle
//! construction.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bundle::{propagate_transition, verify_cocycle_relation, Obstruction, TransitionOutcome};
use crate::census::{run_census, VortexCensus};
use crate::error::{Error, Result};
use crate::identity::{
    boundary_traces, check_bordered, check_closed, check_corner_form, BoundaryTrace, IntegralityReport,
};
use crate::instance::{Instance, HBAR_CONVENTION};
use crate::io::complex_map_doc;
use crate::mesh::SurfaceMesh;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshSummary {
    pub vertices: usize,
    pub faces: usize,
    pub edges: usize,
    pub euler_characteristic: i64,
    pub boundary_loops: usize,
    pub corners: Vec<usize>,
    pub flipped_faces: Vec<usize>,
    pub max_face_diameter: f64,
}

impl MeshSummary {
    pub fn of(mesh: &SurfaceMesh) -> Self {
        Self {
            vertices: mesh.num_vertices(),
            faces: mesh.num_faces(),
            edges: mesh.num_edges(),
            euler_characteristic: mesh.euler_characteristic(),
            boundary_loops: mesh.boundary_loops().len(),
            corners: mesh.corner_vertices().iter().copied().collect(),
            flipped_faces: mesh.flipped_faces().collect(),
            max_face_diameter: mesh.max_face_diameter(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    /// Largest |phase step| over all face edges.
    pub max_abs_step: f64,
    /// pi minus that step.
    pub margin: f64,
}

impl Admissibility {
    fn of(census: &VortexCensus) -> Self {
        Self { max_abs_step: census.max_abs_step, margin: PI - census.max_abs_step }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub command: &'static str,
    pub hbar_convention: &'static str,
    pub mesh: MeshSummary,
    pub census: VortexCensus,
    pub loops: Vec<BoundaryTrace>,
    pub admissibility: Admissibility,
}

pub fn census_report(inst: &Instance) -> Result<CensusReport> {
    let section = inst.section()?;
    let census = run_census(&inst.mesh, section)?;
    let loops = boundary_traces(&inst.mesh, section, inst.connection.as_ref())?;
    Ok(CensusReport {
        command: "census",
        hbar_convention: HBAR_CONVENTION,
        mesh: MeshSummary::of(&inst.mesh),
        admissibility: Admissibility::of(&census),
        census,
        loops,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum IdentityKind {
    Auto,
    Closed,
    Bordered,
    Corner,
}

/// `Auto`: closed on a closed mesh, bordered when a connection is present,
/// otherwise the corner form.
pub fn resolve_identity(inst: &Instance, kind: IdentityKind) -> IdentityKind {
    match kind {
        IdentityKind::Auto if inst.mesh.is_closed() => IdentityKind::Closed,
        IdentityKind::Auto if inst.connection.is_some() => IdentityKind::Bordered,
        IdentityKind::Auto => IdentityKind::Corner,
        k => k,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub hbar_convention: &'static str,
    pub identity: IdentityKind,
    pub mesh: MeshSummary,
    #[serde(flatten)]
    pub report: IntegralityReport,
    pub admissibility: Admissibility,
    pub passed: bool,
}

pub fn check_report(inst: &Instance, kind: IdentityKind, tol: Option<f64>) -> Result<CheckReport> {
    let kind = resolve_identity(inst, kind);
    let (mesh, twoform, section) = (&inst.mesh, inst.twoform()?, inst.section()?);
    let report = match kind {
        IdentityKind::Closed => check_closed(mesh, twoform, section, tol)?,
        IdentityKind::Bordered => check_bordered(mesh, twoform, section, inst.connection()?, tol)?,
        IdentityKind::Corner => check_corner_form(mesh, twoform, section, tol)?,
        IdentityKind::Auto => unreachable!("resolved above"),
    };
    Ok(CheckReport {
        command: "check",
        hbar_convention: HBAR_CONVENTION,
        identity: kind,
        mesh: MeshSummary::of(mesh),
        admissibility: Admissibility::of(&report.census),
        passed: report.passed(),
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionDoc {
    pub reference_vertex: usize,
    pub reference_value: [f64; 2],
    /// (vertex, re, im) for every overlap vertex.
    pub values: Vec<(usize, f64, f64)>,
    pub seam_loop: Vec<usize>,
    pub loop_defect: f64,
    pub seam_winding: i64,
    pub cocycle_residual: f64,
    /// max | |c12| - 1 |.
    pub modulus_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BundleVerdict {
    SingleValued,
    Obstruction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BundleReport {
    pub command: &'static str,
    pub hbar_convention: &'static str,
    pub verdict: BundleVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transition: Option<TransitionDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
}

impl BundleReport {
    pub fn single_valued(&self) -> bool {
        self.verdict == BundleVerdict::SingleValued
    }
}

pub fn bundle_report(inst: &Instance) -> Result<BundleReport> {
    let atlas = inst.atlas()?;
    let twoform = inst.twoform()?;
    atlas.validate(&inst.mesh, twoform)?;
    let (verdict, transition, obstruction) = match propagate_transition(&inst.mesh, atlas)? {
        TransitionOutcome::SingleValued(t) => {
            let doc = TransitionDoc {
                reference_vertex: t.reference_vertex,
                reference_value: [t.reference_value.re, t.reference_value.im],
                values: complex_map_doc(&t.values),
                seam_loop: t.seam_loop.clone(),
                loop_defect: t.loop_defect,
                seam_winding: t.seam_winding()?,
                cocycle_residual: verify_cocycle_relation(&inst.mesh, &t, atlas)?,
                modulus_defect: t.values.values().map(|c| (c.norm() - 1.0).abs()).fold(0.0, f64::max),
            };
            (BundleVerdict::SingleValued, Some(doc), None)
        }
        TransitionOutcome::Obstruction(o) => (BundleVerdict::Obstruction, None, Some(o)),
    };
    Ok(BundleReport { command: "build-bundle", hbar_convention: HBAR_CONVENTION, verdict, transition, obstruction })
}

/// Integer-looking numbers print without decimals in summaries.
pub fn display_number(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.12}")
    }
}

/// Document-level errors for report inputs that lack a required part.
pub fn missing(what: &str) -> Error {
    Error::Document(format!("report has no {what}"))
}
