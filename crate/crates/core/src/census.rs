//! Vortex census: per-face winding numbers of the unit field.
//!
//! The topological current of a section is supported on its zeros, each
//! weighted by Hopf index times Brouwer degree. On a triangulation the zeros
//! are localized to faces: the winding of the sampled phase around a face is
//! the signed number of zeros it encloses.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{unit_field, SectionField, UnitField};
use crate::geom::{self, Vec3};
use crate::mesh::{face_edges, DirectedEdge, SurfaceMesh};

/// Phase steps within this distance of pi are rejected.
pub const ANGLE_MARGIN: f64 = 1e-6;
/// Allowed distance of a winding sum from the nearest integer.
pub const WINDING_ROUND_TOL: f64 = 1e-6;
/// Relative Jacobian degeneracy threshold: |det J| <= JAC_TOL * |J|_F^2.
pub const JAC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vortex {
    pub face: usize,
    /// Barycenter of the host face.
    pub position: Vec3,
    pub winding: i64,
    pub hopf_index: u64,
    pub brouwer_degree: i8,
    /// Determinant of the affine fit of psi over the host face, when the
    /// fit is non-degenerate.
    pub jacobian_det: Option<f64>,
    /// |winding| > 1: several zeros may share this face.
    pub needs_refinement: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VortexCensus {
    pub vortices: Vec<Vortex>,
    pub total_charge: i64,
    /// Largest |phase step| over all face edges (admissibility margin).
    pub max_abs_step: f64,
}

/// Principal phase step between two unit vectors.
pub fn angle_step(n_tail: [f64; 2], n_head: [f64; 2]) -> f64 {
    let cross = n_tail[0] * n_head[1] - n_tail[1] * n_head[0];
    let dot = n_tail[0] * n_head[0] + n_tail[1] * n_head[1];
    cross.atan2(dot)
}

/// Phase step alpha_head - alpha_tail reduced to (-pi, pi), evaluated in the
/// trivialization of `face` (or the primary one when `face` is `None`).
pub fn edge_angle_step(field: &UnitField, face: Option<usize>, edge: DirectedEdge) -> Result<f64> {
    let step = angle_step(field.n_in_face(face, edge.tail), field.n_in_face(face, edge.head));
    if step.abs() >= std::f64::consts::PI - ANGLE_MARGIN {
        return Err(Error::AngleStepPi { tail: edge.tail, head: edge.head, step });
    }
    Ok(step)
}

/// Rounds a sum of phase steps to a winding number.
pub fn winding_from_steps(total: f64) -> Result<i64> {
    let w = total / TAU;
    let r = w.round();
    if (w - r).abs() >= WINDING_ROUND_TOL {
        return Err(Error::WindingNotInteger { value: w });
    }
    Ok(r as i64)
}

fn face_steps(mesh: &SurfaceMesh, field: &UnitField, face: usize) -> Result<[f64; 3]> {
    let e = face_edges(mesh.face(face));
    Ok([
        edge_angle_step(field, Some(face), e[0])?,
        edge_angle_step(field, Some(face), e[1])?,
        edge_angle_step(field, Some(face), e[2])?,
    ])
}

pub fn face_winding(mesh: &SurfaceMesh, field: &UnitField, face: usize) -> Result<i64> {
    let s = face_steps(mesh, field, face)?;
    winding_from_steps(s[0] + s[1] + s[2])
}

/// Least-squares affine fit psi(p) ~ psi0 + J (p - p0) over 2-D sample
/// points; returns J as `[[d psi1/dx, d psi1/dy], [d psi2/dx, d psi2/dy]]`.
pub fn fit_jacobian(points: &[[f64; 2]], values: &[Complex64]) -> Option<[[f64; 2]; 2]> {
    let n = points.len() as f64;
    if points.len() < 3 || points.len() != values.len() {
        return None;
    }
    let (mx, my) = points.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0] / n, y + p[1] / n));
    let mz = values.iter().sum::<Complex64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    let (mut bx, mut by) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (p, z) in points.iter().zip(values) {
        let (dx, dy, dz) = (p[0] - mx, p[1] - my, z - mz);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
        bx += dz * dx;
        by += dz * dy;
    }
    let det = sxx * syy - sxy * sxy;
    if det.abs() <= f64::EPSILON * (sxx * syy).max(f64::MIN_POSITIVE) {
        return None;
    }
    let gx = (bx * syy - by * sxy) / det;
    let gy = (by * sxx - bx * sxy) / det;
    Some([[gx.re, gy.re], [gx.im, gy.im]])
}

/// Sign of the Jacobian determinant of psi at a zero, from an affine fit
/// of the given samples.
pub fn brouwer_degree_from_jacobian(points: &[[f64; 2]], values: &[Complex64]) -> Result<i8> {
    let j = fit_jacobian(points, values).ok_or(Error::DegenerateJacobian { det: 0.0 })?;
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let frob2 = j.iter().flatten().map(|x| x * x).sum::<f64>();
    if det.abs() <= JAC_TOL * frob2 || det == 0.0 {
        return Err(Error::DegenerateJacobian { det });
    }
    Ok(if det > 0.0 { 1 } else { -1 })
}

/// Vertex coordinates of a face in an orthonormal frame of its own plane,
/// oriented by the face normal.
pub fn face_local_coords(mesh: &SurfaceMesh, face: usize) -> [[f64; 2]; 3] {
    let [a, b, c] = mesh.face(face);
    let (pa, pb, pc) = (mesh.position(a), mesh.position(b), mesh.position(c));
    let e1 = geom::normalize(geom::sub(pb, pa));
    let n = geom::normalize(mesh.face_normal(face));
    let e2 = geom::cross(n, e1);
    let local = |p: Vec3| {
        let d = geom::sub(p, pa);
        [geom::dot(d, e1), geom::dot(d, e2)]
    };
    [[0.0, 0.0], local(pb), local(pc)]
}

fn face_jacobian_det(mesh: &SurfaceMesh, section: &SectionField, face: usize) -> Option<f64> {
    let pts = face_local_coords(mesh, face);
    let vals = mesh.face(face).map(|v| section.value_in_face(face, v));
    let j = fit_jacobian(&pts, &vals)?;
    Some(j[0][0] * j[1][1] - j[0][1] * j[1][0])
}

pub fn run_census(mesh: &SurfaceMesh, section: &SectionField) -> Result<VortexCensus> {
    section.check_mesh(mesh)?;
    let field = unit_field(section)?;
    census_with_field(mesh, section, &field)
}

pub(crate) fn census_with_field(
    mesh: &SurfaceMesh,
    section: &SectionField,
    field: &UnitField,
) -> Result<VortexCensus> {
    let per_face: Vec<Result<[f64; 3]>> =
        (0..mesh.num_faces()).into_par_iter().map(|f| face_steps(mesh, field, f)).collect();

    let mut vortices = Vec::new();
    let mut total_charge = 0;
    let mut max_abs_step: f64 = 0.0;
    for (f, steps) in per_face.into_iter().enumerate() {
        let steps = steps?;
        max_abs_step = steps.iter().fold(max_abs_step, |m, s| m.max(s.abs()));
        let w = winding_from_steps(steps[0] + steps[1] + steps[2])?;
        if w == 0 {
            continue;
        }
        total_charge += w;
        let jacobian_det = face_jacobian_det(mesh, section, f);
        let pts = face_local_coords(mesh, f);
        let vals = mesh.face(f).map(|v| section.value_in_face(f, v));
        let eta: i8 = if w > 0 { 1 } else { -1 };
        let jac_sign = brouwer_degree_from_jacobian(&pts, &vals).ok();
        if w.abs() == 1 {
            if let Some(s) = jac_sign {
                if s != eta {
                    return Err(Error::InconsistentDegree { face: f, winding: w, jacobian_sign: s });
                }
            }
        }
        vortices.push(Vortex {
            face: f,
            position: mesh.face_centroid(f),
            winding: w,
            hopf_index: w.unsigned_abs(),
            brouwer_degree: eta,
            jacobian_det: jac_sign.and(jacobian_det),
            needs_refinement: w.abs() > 1,
        });
    }
    Ok(VortexCensus { vortices, total_charge, max_abs_step })
}
