//! Sampled bundle data: section, connection and symplectic two-form.
//!
//! Units: hbar = 1 throughout, so the curvature face integral equals the
//! two-form face integral. Complex values are `Complex64`; the U(1) phase
//! of a section and the SO(2) angle of its unit field are the same number.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mesh::{face_edges, DirectedEdge, SurfaceMesh};

/// Vertex samples at or below this fraction of the largest sample norm are
/// treated as zeros of the section.
pub const ZERO_TOL: f64 = 1e-12;

/// Values of the section in a second local trivialization, used on a chosen
/// set of faces. A bundle with nonzero first Chern number has no global
/// trivialization, so a closed-surface section of such a bundle is stored
/// as two per-vertex arrays plus the faces that read from the second one.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionPatch {
    pub psi: Vec<Complex64>,
    pub faces: Vec<bool>,
}

/// Section samples psi = psi1 + i psi2 per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionField {
    psi: Vec<Complex64>,
    patch: Option<SectionPatch>,
}

impl SectionField {
    pub fn new(psi: Vec<Complex64>) -> Self {
        Self { psi, patch: None }
    }

    pub fn with_patch(psi: Vec<Complex64>, patch: SectionPatch) -> Result<Self> {
        if patch.psi.len() != psi.len() {
            return Err(Error::LengthMismatch {
                what: "patch section samples",
                expected: psi.len(),
                found: patch.psi.len(),
            });
        }
        Ok(Self { psi, patch: Some(patch) })
    }

    pub fn from_fn(mesh: &SurfaceMesh, f: impl Fn(usize, [f64; 3]) -> Complex64) -> Self {
        Self::new(mesh.positions().iter().enumerate().map(|(v, &p)| f(v, p)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn patch(&self) -> Option<&SectionPatch> {
        self.patch.as_ref()
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    /// Whether face `f` reads its vertex values from the patch.
    pub fn face_uses_patch(&self, f: usize) -> bool {
        self.patch.as_ref().is_some_and(|p| p.faces.get(f).copied().unwrap_or(false))
    }

    /// Value at vertex `v` in the trivialization used by face `f`.
    pub fn value_in_face(&self, f: usize, v: usize) -> Complex64 {
        match &self.patch {
            Some(p) if p.faces[f] => p.psi[v],
            _ => self.psi[v],
        }
    }

    pub fn check_mesh(&self, mesh: &SurfaceMesh) -> Result<()> {
        if self.psi.len() != mesh.num_vertices() {
            return Err(Error::LengthMismatch {
                what: "section samples",
                expected: mesh.num_vertices(),
                found: self.psi.len(),
            });
        }
        if let Some(p) = &self.patch {
            if p.faces.len() != mesh.num_faces() {
                return Err(Error::LengthMismatch {
                    what: "patch face flags",
                    expected: mesh.num_faces(),
                    found: p.faces.len(),
                });
            }
        }
        Ok(())
    }

    /// Applies `g` to every stored sample (both trivializations).
    pub fn map(&self, g: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let apply = |vals: &[Complex64]| vals.iter().enumerate().map(|(v, &z)| g(v, z)).collect();
        Self {
            psi: apply(&self.psi),
            patch: self.patch.as_ref().map(|p| SectionPatch { psi: apply(&p.psi), faces: p.faces.clone() }),
        }
    }

    /// psi2 -> -psi2 everywhere.
    pub fn conjugated(&self) -> Self {
        self.map(|_, z| z.conj())
    }
}

/// Norms, unit vectors and phase angles of one array of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSamples {
    pub norm: Vec<f64>,
    pub n: Vec<[f64; 2]>,
    pub alpha: Vec<f64>,
}

/// The unit field n = psi / |psi| with its principal angle alpha in (-pi, pi].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitField {
    pub primary: UnitSamples,
    pub patch: Option<(UnitSamples, Vec<bool>)>,
}

impl UnitField {
    pub fn n_in_face(&self, f: Option<usize>, v: usize) -> [f64; 2] {
        self.samples_for(f).n[v]
    }

    pub fn samples_for(&self, f: Option<usize>) -> &UnitSamples {
        match (&self.patch, f) {
            (Some((s, faces)), Some(f)) if faces[f] => s,
            _ => &self.primary,
        }
    }
}

fn unit_samples(psi: &[Complex64], threshold: f64) -> Result<UnitSamples> {
    let mut out = UnitSamples {
        norm: Vec::with_capacity(psi.len()),
        n: Vec::with_capacity(psi.len()),
        alpha: Vec::with_capacity(psi.len()),
    };
    for (v, z) in psi.iter().enumerate() {
        let r = z.re.hypot(z.im);
        if !(r > threshold) {
            return Err(Error::ZeroOnVertex { vertex: v, norm: r });
        }
        out.norm.push(r);
        out.n.push([z.re / r, z.im / r]);
        out.alpha.push(z.im.atan2(z.re));
    }
    Ok(out)
}

/// Normalizes the section. Fails with `ZeroOnVertex` if any sample is at or
/// below `ZERO_TOL` times the largest sample norm.
pub fn unit_field(section: &SectionField) -> Result<UnitField> {
    let max_norm = section
        .psi
        .iter()
        .chain(section.patch.iter().flat_map(|p| p.psi.iter()))
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let threshold = ZERO_TOL * max_norm;
    let primary = unit_samples(&section.psi, threshold)?;
    let patch = match &section.patch {
        Some(p) => Some((unit_samples(&p.psi, threshold)?, p.faces.clone())),
        None => None,
    };
    Ok(UnitField { primary, patch })
}

/// Edge integrals of the connection one-form, stored once per undirected
/// edge in the `tail < head` direction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConnectionField {
    edges: BTreeMap<(usize, usize), f64>,
}

impl ConnectionField {
    pub fn new() -> Self {
        Self::default()
    }

    /// Connection on every mesh edge, from an integral along `tail -> head`.
    pub fn from_fn(mesh: &SurfaceMesh, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut c = Self::new();
        for (a, b) in mesh.edges() {
            c.set(a, b, f(a, b));
        }
        c
    }

    pub fn zero(mesh: &SurfaceMesh) -> Self {
        Self::from_fn(mesh, |_, _| 0.0)
    }

    pub fn set(&mut self, tail: usize, head: usize, theta: f64) {
        if tail < head {
            self.edges.insert((tail, head), theta);
        } else {
            self.edges.insert((head, tail), -theta);
        }
    }

    pub fn get(&self, tail: usize, head: usize) -> Option<f64> {
        if tail < head {
            self.edges.get(&(tail, head)).copied()
        } else {
            self.edges.get(&(head, tail)).map(|t| -t)
        }
    }

    pub fn theta(&self, e: DirectedEdge) -> Result<f64> {
        self.get(e.tail, e.head).ok_or(Error::MissingEdgeData(e.tail, e.head))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Stored `(tail, head, theta)` triples with `tail < head`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(a, b), &t)| (a, b, t))
    }
}

/// Face integrals of the two-form, aligned with the mesh face list.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFormField {
    omega: Vec<f64>,
}

impl TwoFormField {
    pub fn new(omega: Vec<f64>) -> Self {
        Self { omega }
    }

    pub fn zero(mesh: &SurfaceMesh) -> Self {
        Self::new(vec![0.0; mesh.num_faces()])
    }

    pub fn values(&self) -> &[f64] {
        &self.omega
    }

    pub fn get(&self, f: usize) -> Result<f64> {
        self.omega.get(f).copied().ok_or(Error::MissingFaceData(f))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.omega.iter().map(|w| w * s).collect())
    }

    /// The two-form seen from the opposite orientation.
    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }
}

/// psi'_v = exp(i lambda_v) psi_v and theta'_e = theta_e + lambda_head - lambda_tail.
pub fn gauge_transform(
    section: &SectionField,
    connection: &ConnectionField,
    lambda: &[f64],
) -> (SectionField, ConnectionField) {
    let psi = section.map(|v, z| z * Complex64::from_polar(1.0, lambda[v]));
    let mut conn = ConnectionField::new();
    for (a, b, t) in connection.iter() {
        conn.set(a, b, t + lambda[b] - lambda[a]);
    }
    (psi, conn)
}

/// r_f = omega_f - sum of theta over the oriented boundary of f, for the
/// given faces.
pub fn exactness_residual_on(
    mesh: &SurfaceMesh,
    connection: &ConnectionField,
    twoform: &TwoFormField,
    faces: impl IntoIterator<Item = usize>,
) -> Result<Vec<f64>> {
    faces
        .into_iter()
        .map(|f| {
            let mut circulation = 0.0;
            for e in face_edges(mesh.face(f)) {
                circulation += connection.theta(e)?;
            }
            Ok(twoform.get(f)? - circulation)
        })
        .collect()
}

/// Per-face residual of omega = d(theta) over the whole mesh.
pub fn exactness_residual(
    mesh: &SurfaceMesh,
    connection: &ConnectionField,
    twoform: &TwoFormField,
) -> Result<Vec<f64>> {
    exactness_residual_on(mesh, connection, twoform, 0..mesh.num_faces())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tri() -> SurfaceMesh {
        SurfaceMesh::build(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![[0, 1, 2]], [])
            .unwrap()
    }

    #[test]
    fn three_four_five() {
        let s = SectionField::new(vec![Complex64::new(3.0, 4.0), Complex64::new(-1.0, 0.0)]);
        let u = unit_field(&s).unwrap();
        assert!((u.primary.n[0][0] - 0.6).abs() < 1e-15 && (u.primary.n[0][1] - 0.8).abs() < 1e-15);
        assert!((u.primary.alpha[0] - 0.8_f64.atan2(0.6)).abs() < 1e-15);
        assert_eq!(u.primary.n[1], [-1.0, 0.0]);
        assert_eq!(u.primary.alpha[1], PI);
    }

    #[test]
    fn zero_sample_is_rejected() {
        let s = SectionField::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(matches!(unit_field(&s), Err(Error::ZeroOnVertex { vertex: 1, .. })));
    }

    #[test]
    fn norms_times_unit_reproduce_samples() {
        let s = SectionField::new(vec![Complex64::new(0.3, -2.0), Complex64::new(-1e-3, 7.0)]);
        let u = unit_field(&s).unwrap();
        for (v, z) in s.values().iter().enumerate() {
            let r = u.primary.norm[v];
            assert!((r * u.primary.n[v][0] - z.re).abs() <= 1e-15 * r);
            assert!((r * u.primary.n[v][1] - z.im).abs() <= 1e-15 * r);
        }
    }

    #[test]
    fn connection_is_antisymmetric() {
        let mut c = ConnectionField::new();
        c.set(5, 2, 0.7);
        assert_eq!(c.get(2, 5), Some(-0.7));
        assert_eq!(c.get(5, 2), Some(0.7));
        assert!(matches!(c.theta(DirectedEdge::new(1, 2)), Err(Error::MissingEdgeData(1, 2))));
    }

    #[test]
    fn zero_gauge_is_identity_and_constant_gauge_keeps_connection() {
        let m = tri();
        let s = SectionField::from_fn(&m, |_, p| Complex64::new(p[0] + 0.1, p[1] - 0.2));
        let c = ConnectionField::from_fn(&m, |a, b| (a as f64) - 2.0 * b as f64);
        let (s0, c0) = gauge_transform(&s, &c, &[0.0; 3]);
        assert_eq!(s0, s);
        assert_eq!(c0, c);
        let (s1, c1) = gauge_transform(&s, &c, &[PI / 2.0; 3]);
        assert_eq!(c1, c);
        for (a, b) in s.values().iter().zip(s1.values()) {
            assert!((a * Complex64::i() - b).norm() < 1e-15);
        }
    }

    #[test]
    fn exactness_of_flat_data() {
        let m = tri();
        let r = exactness_residual(&m, &ConnectionField::zero(&m), &TwoFormField::zero(&m)).unwrap();
        assert_eq!(r, vec![0.0]);
        assert!(matches!(
            exactness_residual(&m, &ConnectionField::new(), &TwoFormField::zero(&m)),
            Err(Error::MissingEdgeData(..))
        ));
    }

    #[test]
    fn linear_potential_is_exact() {
        // Theta = x dy has d(Theta) = dx ^ dy; its edge integral along a
        // straight segment is the average x times the change in y.
        let m = tri();
        let p = m.positions().to_vec();
        let c = ConnectionField::from_fn(&m, |a, b| 0.5 * (p[a][0] + p[b][0]) * (p[b][1] - p[a][1]));
        let w = TwoFormField::new(vec![0.5]);
        let r = exactness_residual(&m, &c, &w).unwrap();
        assert!(r[0].abs() < 1e-12);
    }
}
