//! Terms and residuals of the integrality identities.
//!
//! With hbar = 1 the three checked forms are
//!
//! ```text
//! closed:    flux = 2 pi g
//! bordered:  flux = 2 pi (g - l) + holonomy
//! corner:    flux = 2 pi g - corner_deficit - geodesic_turning
//! ```
//!
//! where g is the census charge, l the total boundary winding of the phase,
//! holonomy the boundary sum of connection edge integrals, and the last two
//! terms the discrete boundary curvature split into declared corners and
//! smooth turning. Each report lists the right-hand terms in order; the
//! residual is `flux - (t1 + t2 + ...)` evaluated left to right, so it can be
//! recomputed from the printed values.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::census::{census_with_field, edge_angle_step, winding_from_steps, VortexCensus};
use crate::error::{Error, Result};
use crate::fields::{unit_field, ConnectionField, SectionField, TwoFormField, UnitField};
use crate::geom;
use crate::mesh::{BoundaryLoop, SurfaceMesh};

/// Default tolerance for identities whose terms are exact sums.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Tolerance of the boundary tangency test.
pub const TANGENCY_TOL: f64 = 1e-8;

pub fn total_flux(mesh: &SurfaceMesh, twoform: &TwoFormField) -> Result<f64> {
    if twoform.values().len() < mesh.num_faces() {
        return Err(Error::MissingFaceData(twoform.values().len()));
    }
    Ok(geom::compensated_sum(twoform.values()[..mesh.num_faces()].iter().copied()))
}

fn loop_face(mesh: &SurfaceMesh, lp: &BoundaryLoop, i: usize) -> usize {
    let e = lp.edges[i];
    mesh.edge_faces(e.tail, e.head)[0]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopWinding {
    pub winding: i64,
    pub max_abs_step: f64,
    /// Largest |phase step| on an edge touching a declared corner.
    pub max_corner_step: f64,
}

/// Total phase change of the section along a loop, in units of 2 pi.
pub fn boundary_winding(mesh: &SurfaceMesh, field: &UnitField, lp: &BoundaryLoop) -> Result<LoopWinding> {
    let corners = mesh.corner_vertices();
    let mut total = 0.0;
    let mut max_abs_step: f64 = 0.0;
    let mut max_corner_step: f64 = 0.0;
    for (i, &e) in lp.edges.iter().enumerate() {
        let s = edge_angle_step(field, Some(loop_face(mesh, lp, i)), e)?;
        total += s;
        max_abs_step = max_abs_step.max(s.abs());
        if corners.contains(&e.tail) || corners.contains(&e.head) {
            max_corner_step = max_corner_step.max(s.abs());
        }
    }
    Ok(LoopWinding { winding: winding_from_steps(total)?, max_abs_step, max_corner_step })
}

pub fn holonomy(connection: &ConnectionField, lp: &BoundaryLoop) -> Result<f64> {
    lp.edges.iter().map(|&e| connection.theta(e)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicTerms {
    /// Sum of exterior turning angles at smooth boundary vertices.
    pub geodesic_turning: f64,
    /// Sum of (pi - interior angle) over declared corners.
    pub corner_deficit: f64,
}

/// Exterior turning angles along a loop, measured in the tangent plane of
/// each vertex (orthogonal to its angle-weighted normal). Positive turning
/// bends toward the surface.
pub fn geodesic_terms(mesh: &SurfaceMesh, lp: &BoundaryLoop) -> Result<GeodesicTerms> {
    geodesic_terms_with_normals(mesh, lp, &mesh.vertex_normals())
}

fn geodesic_terms_with_normals(
    mesh: &SurfaceMesh,
    lp: &BoundaryLoop,
    normals: &[geom::Vec3],
) -> Result<GeodesicTerms> {
    let n = lp.edges.len();
    if n < 3 {
        return Err(Error::NotApplicable(format!("boundary loop with {n} edges")));
    }
    for e in &lp.edges {
        if geom::norm(geom::sub(mesh.position(e.head), mesh.position(e.tail))) == 0.0 {
            return Err(Error::DegenerateEdge(e.tail, e.head));
        }
    }
    let corners = mesh.corner_vertices();
    let mut out = GeodesicTerms { geodesic_turning: 0.0, corner_deficit: 0.0 };
    for i in 0..n {
        let incoming = lp.edges[(i + n - 1) % n];
        let outgoing = lp.edges[i];
        let v = outgoing.tail;
        let nv = normals[v];
        let project = |d: geom::Vec3| geom::sub(d, geom::scale(nv, geom::dot(d, nv)));
        let din = project(geom::sub(mesh.position(v), mesh.position(incoming.tail)));
        let dout = project(geom::sub(mesh.position(outgoing.head), mesh.position(v)));
        let turn = geom::dot(nv, geom::cross(din, dout)).atan2(geom::dot(din, dout));
        if corners.contains(&v) {
            // interior angle alpha = pi - turn
            out.corner_deficit += turn;
        } else {
            out.geodesic_turning += turn;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryTrace {
    pub edge_count: usize,
    pub winding: i64,
    pub holonomy: Option<f64>,
    pub geodesic_turning: f64,
    pub corner_deficit: f64,
    pub max_abs_step: f64,
    pub max_corner_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub flux: f64,
    /// Right-hand side terms, summed left to right.
    pub terms: Vec<Term>,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl IdentityCheck {
    fn new(flux: f64, terms: Vec<Term>, tolerance: f64) -> Self {
        let rhs = terms.iter().fold(0.0, |acc, t| acc + t.value);
        let residual = flux - rhs;
        let verdict = if residual.abs() < tolerance { Verdict::Pass } else { Verdict::Fail };
        Self { flux, terms, residual, tolerance, verdict, diagnostics: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralityReport {
    pub total_flux: f64,
    /// Flux in units of h = 2 pi hbar.
    pub flux_over_h: f64,
    pub census: VortexCensus,
    pub loops: Vec<BoundaryTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed: Option<IdentityCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bordered: Option<IdentityCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corner: Option<IdentityCheck>,
}

impl IntegralityReport {
    pub fn charge(&self) -> i64 {
        self.census.total_charge
    }

    pub fn total_winding(&self) -> i64 {
        self.loops.iter().map(|l| l.winding).sum()
    }

    pub fn total_holonomy(&self) -> f64 {
        self.loops.iter().filter_map(|l| l.holonomy).sum()
    }

    /// The populated identity checks.
    pub fn checks(&self) -> impl Iterator<Item = &IdentityCheck> {
        [&self.closed, &self.bordered, &self.corner].into_iter().flatten()
    }

    pub fn passed(&self) -> bool {
        self.checks().all(IdentityCheck::passed)
    }
}

fn traces(mesh: &SurfaceMesh, field: &UnitField, connection: Option<&ConnectionField>) -> Result<Vec<BoundaryTrace>> {
    let normals = mesh.vertex_normals();
    let mut loops = Vec::new();
    for lp in mesh.boundary_loops() {
        let w = boundary_winding(mesh, field, lp)?;
        let hol = connection.map(|c| holonomy(c, lp)).transpose()?;
        let g = if lp.len() >= 3 {
            geodesic_terms_with_normals(mesh, lp, &normals)?
        } else {
            GeodesicTerms { geodesic_turning: 0.0, corner_deficit: 0.0 }
        };
        loops.push(BoundaryTrace {
            edge_count: lp.len(),
            winding: w.winding,
            holonomy: hol,
            geodesic_turning: g.geodesic_turning,
            corner_deficit: g.corner_deficit,
            max_abs_step: w.max_abs_step,
            max_corner_step: w.max_corner_step,
        });
    }
    Ok(loops)
}

/// Winding, holonomy and turning terms of every boundary loop.
pub fn boundary_traces(
    mesh: &SurfaceMesh,
    section: &SectionField,
    connection: Option<&ConnectionField>,
) -> Result<Vec<BoundaryTrace>> {
    section.check_mesh(mesh)?;
    traces(mesh, &unit_field(section)?, connection)
}

struct Pieces {
    flux: f64,
    census: VortexCensus,
    loops: Vec<BoundaryTrace>,
}

fn gather(
    mesh: &SurfaceMesh,
    twoform: &TwoFormField,
    section: &SectionField,
    connection: Option<&ConnectionField>,
) -> Result<(Pieces, UnitField)> {
    section.check_mesh(mesh)?;
    let flux = total_flux(mesh, twoform)?;
    let field = unit_field(section)?;
    let census = census_with_field(mesh, section, &field)?;
    let loops = traces(mesh, &field, connection)?;
    Ok((Pieces { flux, census, loops }, field))
}

fn report(p: Pieces) -> IntegralityReport {
    IntegralityReport {
        total_flux: p.flux,
        flux_over_h: p.flux / TAU,
        census: p.census,
        loops: p.loops,
        closed: None,
        bordered: None,
        corner: None,
    }
}

/// flux = 2 pi g on a closed surface.
pub fn check_closed(
    mesh: &SurfaceMesh,
    twoform: &TwoFormField,
    section: &SectionField,
    tol: Option<f64>,
) -> Result<IntegralityReport> {
    if !mesh.is_closed() {
        return Err(Error::NotApplicable("closed identity on a mesh with boundary".into()));
    }
    let (pieces, _) = gather(mesh, twoform, section, None)?;
    let g = pieces.census.total_charge;
    let mut check = IdentityCheck::new(
        pieces.flux,
        vec![Term { name: "two_pi_g", value: TAU * g as f64 }],
        tol.unwrap_or(IDENTITY_TOL),
    );
    let nearest = (pieces.flux / TAU).round();
    if (pieces.flux / TAU - nearest).abs() * TAU >= check.tolerance {
        check.diagnostics.push(format!("flux not integral: flux/h = {}", pieces.flux / TAU));
    }
    if nearest as i64 != g {
        check.verdict = Verdict::Fail;
        check.diagnostics.push(format!("census charge {g} differs from round(flux/h) = {nearest}"));
    }
    let mut r = report(pieces);
    r.closed = Some(check);
    Ok(r)
}

/// flux = 2 pi (g - l) + holonomy, with l and holonomy summed over all
/// boundary loops. On a closed mesh both boundary terms vanish.
pub fn check_bordered(
    mesh: &SurfaceMesh,
    twoform: &TwoFormField,
    section: &SectionField,
    connection: &ConnectionField,
    tol: Option<f64>,
) -> Result<IntegralityReport> {
    let (pieces, _) = gather(mesh, twoform, section, Some(connection))?;
    let g = pieces.census.total_charge;
    let l: i64 = pieces.loops.iter().map(|t| t.winding).sum();
    let hol: f64 = pieces.loops.iter().filter_map(|t| t.holonomy).sum();
    let mut check = IdentityCheck::new(
        pieces.flux,
        vec![
            Term { name: "two_pi_g", value: TAU * g as f64 },
            Term { name: "minus_two_pi_l", value: -TAU * l as f64 },
            Term { name: "holonomy", value: hol },
        ],
        tol.unwrap_or(IDENTITY_TOL),
    );
    for (i, t) in pieces.loops.iter().enumerate() {
        if t.max_corner_step > PI / 2.0 {
            check
                .diagnostics
                .push(format!("loop {i}: phase step {} at a corner exceeds pi/2", t.max_corner_step));
        }
    }
    let mut r = report(pieces);
    r.bordered = Some(check);
    Ok(r)
}

/// Default corner-form tolerance: 10 h^2 L with h the largest face diameter
/// and L the total boundary length.
pub fn corner_tolerance(mesh: &SurfaceMesh) -> f64 {
    let h = mesh.max_face_diameter();
    let length: f64 = mesh
        .boundary_loops()
        .iter()
        .flat_map(|l| l.edges.iter())
        .map(|e| geom::norm(geom::sub(mesh.position(e.head), mesh.position(e.tail))))
        .sum();
    10.0 * h * h * length
}

/// Verifies that the section is tangent to the boundary at every smooth
/// boundary vertex. The section components are read in the frame of the
/// (x, y) chart coordinates.
pub fn check_tangency(mesh: &SurfaceMesh, field: &UnitField, tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for lp in mesh.boundary_loops() {
        let n = lp.len();
        for i in 0..n {
            let v = lp.edges[i].tail;
            if mesh.corner_vertices().contains(&v) {
                continue;
            }
            let prev = mesh.position(lp.edges[(i + n - 1) % n].tail);
            let next = mesh.position(lp.edges[i].head);
            let (tx, ty) = (next[0] - prev[0], next[1] - prev[1]);
            let len = tx.hypot(ty);
            if len == 0.0 {
                return Err(Error::DegenerateEdge(lp.edges[i].tail, lp.edges[i].head));
            }
            let normal = [ty / len, -tx / len];
            let nv = field.n_in_face(Some(loop_face(mesh, lp, i)), v);
            let dot = (nv[0] * normal[0] + nv[1] * normal[1]).abs();
            if dot >= tol {
                return Err(Error::NotTangent { vertex: v, dot });
            }
            worst = worst.max(dot);
        }
    }
    Ok(worst)
}

/// flux = 2 pi g - corner_deficit - geodesic_turning for a section tangent
/// to the boundary.
pub fn check_corner_form(
    mesh: &SurfaceMesh,
    twoform: &TwoFormField,
    section: &SectionField,
    tol: Option<f64>,
) -> Result<IntegralityReport> {
    if mesh.is_closed() {
        return Err(Error::NotApplicable("corner identity on a closed mesh".into()));
    }
    let (pieces, field) = gather(mesh, twoform, section, None)?;
    let tangency = check_tangency(mesh, &field, TANGENCY_TOL)?;
    let g = pieces.census.total_charge;
    let deficit: f64 = pieces.loops.iter().map(|t| t.corner_deficit).sum();
    let turning: f64 = pieces.loops.iter().map(|t| t.geodesic_turning).sum();
    let mut check = IdentityCheck::new(
        pieces.flux,
        vec![
            Term { name: "two_pi_g", value: TAU * g as f64 },
            Term { name: "minus_corner_deficit", value: -deficit },
            Term { name: "minus_geodesic_turning", value: -turning },
        ],
        tol.unwrap_or_else(|| corner_tolerance(mesh)),
    );
    check.diagnostics.push(format!("max tangency defect {tangency:e}"));
    let mut r = report(pieces);
    r.corner = Some(check);
    Ok(r)
}
