//! Canonical test instances with known charge, flux and boundary winding.
//!
//! Face integrals come from closed-form expressions (solid angles, uniform
//! cell flux), never from quadrature, so identity residuals measure only
//! rounding.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bundle::ChartAtlas;
use crate::error::{Error, Result};
use crate::fields::{ConnectionField, SectionField, SectionPatch, TwoFormField};
use crate::geom::{self, compensated_sum, Vec3};
use crate::instance::Instance;
use crate::mesh::{face_edges, SurfaceMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// UV sphere with monopole flux 2 pi k and a two-chart atlas.
    MonopoleSphere,
    /// N x N periodic grid with uniform flux 2 pi k.
    FluxTorus,
    /// Flat unit disk, psi with k simple zeros near the origin.
    DiskVortex,
    /// Flat ring 1/2 <= r <= 1, psi = z^k.
    Annulus,
    /// Regular polygon with declared corners and a boundary-tangent field.
    PolygonTangent,
    /// Monopole sphere with a cap around the south pole removed.
    SphereMinusCap,
    /// Spherical cap with a boundary-tangent field; two-form = area.
    CapTangent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    /// Resolution: latitude rings, grid cells per side, or radial rings.
    pub n: usize,
    pub k: i64,
    pub scale: f64,
    /// Polygon side count (polygon-tangent).
    pub sides: usize,
    /// Polar radius of the cap (cap-tangent) or of the removed cap
    /// (sphere-minus-cap).
    pub cap_angle: f64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, k: i64) -> Self {
        Self { kind, n, k, scale: 1.0, sides: 4, cap_angle: FRAC_PI_3 }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_sides(mut self, sides: usize) -> Self {
        self.sides = sides;
        self
    }

    pub fn with_cap_angle(mut self, cap_angle: f64) -> Self {
        self.cap_angle = cap_angle;
        self
    }
}

fn unsupported(msg: impl Into<String>) -> Error {
    Error::UnsupportedParameter(msg.into())
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    if spec.n < 3 {
        return Err(unsupported(format!("resolution n = {} (need n >= 3)", spec.n)));
    }
    if !spec.scale.is_finite() {
        return Err(unsupported(format!("scale = {}", spec.scale)));
    }
    let flat = matches!(
        spec.kind,
        GeneratorKind::DiskVortex | GeneratorKind::Annulus | GeneratorKind::PolygonTangent | GeneratorKind::CapTangent
    );
    if flat && spec.scale != 1.0 {
        return Err(unsupported(format!("{:?} carries no adjustable flux; scale must be 1", spec.kind)));
    }
    let mut inst = match spec.kind {
        GeneratorKind::MonopoleSphere => monopole_sphere(spec),
        GeneratorKind::FluxTorus => flux_torus(spec),
        GeneratorKind::DiskVortex => disk_vortex(spec),
        GeneratorKind::Annulus => annulus(spec),
        GeneratorKind::PolygonTangent => polygon_tangent(spec),
        GeneratorKind::SphereMinusCap => sphere_minus_cap(spec),
        GeneratorKind::CapTangent => cap_tangent(spec),
    }?;
    inst.generator = Some(spec.clone());
    Ok(inst)
}

fn c(p: Vec3) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Product of (z - a) over the zeros, conjugated when k < 0.
fn vortex_product(z: Complex64, zeros: &[Complex64], k: i64) -> Complex64 {
    let w: Complex64 = zeros.iter().map(|a| z - a).product();
    if k < 0 {
        w.conj()
    } else {
        w
    }
}

/// Face values omega_f = each(f), with the last face set so the compensated
/// total is exactly `total`.
fn absorbing(num_faces: usize, total: f64, each: impl Fn(usize) -> f64) -> TwoFormField {
    let mut omega: Vec<f64> = (0..num_faces).map(each).collect();
    if let Some(last) = num_faces.checked_sub(1) {
        omega[last] = total - compensated_sum(omega[..last].iter().copied());
    }
    TwoFormField::new(omega)
}

// ---- UV sphere -------------------------------------------------------------

/// Unit sphere with n latitude bands and 2n meridians. Vertex 0 is the north
/// pole, the last vertex the south pole; band b of a face lies between
/// rings b and b + 1.
struct UvSphere {
    n: usize,
}

impl UvSphere {
    fn ring_vertex(&self, j: usize, s: usize) -> usize {
        match j {
            0 => 0,
            j if j == self.n => self.south(),
            j => 1 + (j - 1) * 2 * self.n + s % (2 * self.n),
        }
    }

    fn south(&self) -> usize {
        1 + (self.n - 1) * 2 * self.n
    }

    fn positions(&self) -> Vec<Vec3> {
        let n = self.n;
        let mut p = vec![[0.0, 0.0, 1.0]];
        for j in 1..n {
            let t = PI * j as f64 / n as f64;
            for s in 0..2 * n {
                let f = PI * s as f64 / n as f64;
                p.push([t.sin() * f.cos(), t.sin() * f.sin(), t.cos()]);
            }
        }
        p.push([0.0, 0.0, -1.0]);
        p
    }

    /// Faces of bands `0..bands`, with their band index.
    fn faces(&self, bands: usize) -> (Vec<[usize; 3]>, Vec<usize>) {
        let n = self.n;
        let (mut faces, mut band) = (Vec::new(), Vec::new());
        for b in 0..bands.min(n) {
            for s in 0..2 * n {
                let (a, bb) = (self.ring_vertex(b, s), self.ring_vertex(b, s + 1));
                let (cc, d) = (self.ring_vertex(b + 1, s), self.ring_vertex(b + 1, s + 1));
                if b == 0 {
                    faces.push([0, cc, d]);
                    band.push(b);
                } else if b + 1 == n {
                    faces.push([cc, bb, a]);
                    band.push(b);
                } else {
                    faces.push([cc, d, bb]);
                    faces.push([cc, bb, a]);
                    band.extend([b, b]);
                }
            }
        }
        (faces, band)
    }
}

/// Stereographic coordinate regular away from the south pole.
fn zeta(p: Vec3) -> Complex64 {
    Complex64::new(p[0], p[1]) / (1.0 + p[2])
}

/// |k| zeros in latitude band n/4, spread in longitude, each placed inside
/// a face rather than on an edge. Given in the coordinate `zeta`.
fn sphere_zeros(n: usize, k: i64) -> Vec<Complex64> {
    let m = k.unsigned_abs() as usize;
    let polar = PI * (n / 4) as f64 / n as f64 + PI * 0.5 / n as f64;
    (0..m)
        .map(|i| {
            let s = (2 * n * i) / m;
            let az = PI * (s as f64 + 0.3) / n as f64;
            Complex64::from_polar((polar / 2.0).tan(), az)
        })
        .collect()
}

/// psi1 = prod(zeta - a) on the north, psi2 = prod(1 - a / zeta) on the
/// south; psi1 = zeta^k psi2, so psi2 has no zeros where it is used.
fn monopole_section(
    positions: &[Vec3],
    k: i64,
    zeros: &[Complex64],
    patch_faces: Option<Vec<bool>>,
) -> Result<SectionField> {
    let psi1: Vec<Complex64> = positions
        .iter()
        .map(|&p| if p[2] <= -1.0 { Complex64::new(1.0, 0.0) } else { vortex_product(zeta(p), zeros, k) })
        .collect();
    let Some(faces) = patch_faces else { return Ok(SectionField::new(psi1)) };
    let psi2 = positions
        .iter()
        .map(|&p| {
            if p[2] >= 1.0 {
                return Complex64::new(1.0, 0.0);
            }
            let xi = Complex64::new(p[0], -p[1]) / (1.0 - p[2]);
            let w: Complex64 = zeros.iter().map(|a| 1.0 - a * xi).product();
            if k < 0 {
                w.conj()
            } else {
                w
            }
        })
        .collect();
    SectionField::with_patch(psi1, SectionPatch { psi: psi2, faces })
}

fn potential_on(mesh: &SurfaceMesh, faces: &[usize], theta: impl Fn(Vec3, Vec3) -> f64) -> ConnectionField {
    let mut conn = ConnectionField::new();
    for &f in faces {
        for e in face_edges(mesh.face(f)) {
            let (a, b) = e.key();
            conn.set(a, b, theta(mesh.position(a), mesh.position(b)));
        }
    }
    conn
}

/// Potential regular away from `-apex`: each edge integral is q/2 times the
/// solid angle of (apex, tail, head).
fn monopole_theta(q: f64, apex: Vec3) -> impl Fn(Vec3, Vec3) -> f64 {
    move |a, b| 0.5 * q * geom::solid_angle(apex, a, b)
}

fn monopole_sphere(spec: &GeneratorSpec) -> Result<Instance> {
    let n = spec.n;
    let q = spec.k as f64 * spec.scale;
    let uv = UvSphere { n };
    let (faces, band) = uv.faces(n);
    let mesh = SurfaceMesh::build(uv.positions(), faces, [])?;
    let twoform = absorbing(mesh.num_faces(), TAU * q, |f| {
        let [a, b, c] = mesh.face(f);
        0.5 * q * geom::solid_angle(mesh.position(a), mesh.position(b), mesh.position(c))
    });

    // chart 1: bands above j_hi, chart 2: bands from j_lo, overlap band j_lo
    let j_lo = n / 2;
    let j_hi = j_lo + 1;
    let membership: Vec<[bool; 2]> = band.iter().map(|&b| [b < j_hi, b >= j_lo]).collect();
    let chart = |i: usize| -> Vec<usize> { (0..mesh.num_faces()).filter(|&f| membership[f][i]).collect() };
    let north = [0.0, 0.0, 1.0];
    let south = [0.0, 0.0, -1.0];
    let atlas = ChartAtlas {
        connections: [
            potential_on(&mesh, &chart(0), monopole_theta(q, north)),
            potential_on(&mesh, &chart(1), monopole_theta(q, south)),
        ],
        membership,
        base: uv.ring_vertex(j_lo, 0),
        anchors: [0, uv.south()],
    };

    let zeros = sphere_zeros(n, spec.k);
    let patch = (spec.k != 0).then(|| band.iter().map(|&b| b >= j_hi).collect());
    let section = monopole_section(mesh.positions(), spec.k, &zeros, patch)?;

    let mut inst = Instance::new(mesh);
    inst.section = Some(section);
    inst.twoform = Some(twoform);
    inst.atlas = Some(atlas);
    Ok(inst)
}

fn sphere_minus_cap(spec: &GeneratorSpec) -> Result<Instance> {
    let n = spec.n;
    let q = spec.k as f64 * spec.scale;
    if !(spec.cap_angle > 0.0 && spec.cap_angle < PI) {
        return Err(unsupported(format!("cap angle {} outside (0, pi)", spec.cap_angle)));
    }
    let removed = ((n as f64 * spec.cap_angle / PI).round() as usize).max(1);
    let keep = n.saturating_sub(removed);
    if keep <= n / 4 + 1 {
        return Err(unsupported(format!("cap angle {} leaves no room for the vortices", spec.cap_angle)));
    }
    let uv = UvSphere { n };
    let (faces, _) = uv.faces(keep);
    let mut positions = uv.positions();
    positions.truncate(1 + keep * 2 * n);
    let mesh = SurfaceMesh::build(positions, faces, [])?;
    let north = [0.0, 0.0, 1.0];
    let omega = (0..mesh.num_faces())
        .map(|f| {
            let [a, b, c] = mesh.face(f);
            0.5 * q * geom::solid_angle(mesh.position(a), mesh.position(b), mesh.position(c))
        })
        .collect();
    let all: Vec<usize> = (0..mesh.num_faces()).collect();
    let connection = potential_on(&mesh, &all, monopole_theta(q, north));
    let section = monopole_section(mesh.positions(), spec.k, &sphere_zeros(n, spec.k), None)?;

    let mut inst = Instance::new(mesh);
    inst.section = Some(section);
    inst.connection = Some(connection);
    inst.twoform = Some(TwoFormField::new(omega));
    Ok(inst)
}

// ---- torus -----------------------------------------------------------------

fn flux_torus(spec: &GeneratorSpec) -> Result<Instance> {
    let n = spec.n;
    let q = spec.k as f64 * spec.scale;
    let (big, small) = (2.0, 1.0);
    let idx = |i: usize, j: usize| (j % n) * n + i % n;
    let mut positions = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let (u, v) = (TAU * i as f64 / n as f64, TAU * j as f64 / n as f64);
            let r = big + small * v.cos();
            positions.push([r * u.cos(), r * u.sin(), small * v.sin()]);
        }
    }
    let mut faces = Vec::with_capacity(2 * n * n);
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            cells.extend([(i, j), (i, j)]);
        }
    }
    let mesh = SurfaceMesh::build(positions, faces, [])?;
    let per_face = TAU * q / (2 * n * n) as f64;
    let twoform = absorbing(mesh.num_faces(), TAU * q, |_| per_face);

    // Cells 1..n-1 in both directions form a square on which the unwrapped
    // grid coordinate is continuous; psi1 lives there. Faces touching the
    // seams read psi2 = 1, so psi1 / psi2 winds k times around the square.
    let m = spec.k.unsigned_abs() as usize;
    let mut candidates: Vec<(usize, usize)> =
        (1..n - 1).step_by(2).flat_map(|cj| (1..n - 1).step_by(2).map(move |ci| (ci, cj))).collect();
    let mid = n as f64 / 2.0;
    let key = |&(ci, cj): &(usize, usize)| {
        let (dx, dy) = (ci as f64 + 0.5 - mid, cj as f64 + 0.5 - mid);
        (((dx * dx + dy * dy) * 1e6) as i64, cj, ci)
    };
    candidates.sort_by_key(key);
    if m > candidates.len() {
        return Err(unsupported(format!("grid n = {n} cannot host {m} separated vortices")));
    }
    let coord = |i: usize, j: usize| Complex64::new(i as f64 / n as f64, j as f64 / n as f64);
    let zeros: Vec<Complex64> = candidates[..m]
        .iter()
        .map(|&(ci, cj)| coord(3 * ci + 2, 3 * cj + 1) / 3.0)
        .collect();
    let psi1 = (0..n * n)
        .map(|v| {
            let (i, j) = (v % n, v / n);
            if i == 0 || j == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                vortex_product(coord(i, j), &zeros, spec.k)
            }
        })
        .collect();
    let section = if m == 0 {
        SectionField::new(vec![Complex64::new(1.0, 0.0); n * n])
    } else {
        let faces = cells.iter().map(|&(i, j)| i == 0 || j == 0 || i == n - 1 || j == n - 1).collect();
        SectionField::with_patch(psi1, SectionPatch { psi: vec![Complex64::new(1.0, 0.0); n * n], faces })?
    };

    let mut inst = Instance::new(mesh);
    inst.section = Some(section);
    inst.twoform = Some(twoform);
    Ok(inst)
}

// ---- fan triangulations ----------------------------------------------------

/// Disk triangulation by m sectors and n rings; ring k has m k vertices,
/// indexed by s in 0..m k counterclockwise. Vertex 0 is the center.
struct Fan {
    m: usize,
    n: usize,
}

impl Fan {
    fn vertex(&self, k: usize, s: usize) -> usize {
        if k == 0 {
            0
        } else {
            1 + self.m * k * (k - 1) / 2 + s % (self.m * k)
        }
    }

    /// (ring, azimuth index) per vertex.
    fn rings(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0)];
        for k in 1..=self.n {
            out.extend((0..self.m * k).map(|s| (k, s)));
        }
        out
    }

    fn faces(&self) -> Vec<[usize; 3]> {
        let mut faces = Vec::with_capacity(self.m * self.n * self.n);
        for k in 1..=self.n {
            for j in 0..self.m {
                let inner = |i: usize| self.vertex(k - 1, j * (k - 1) + i);
                let outer = |i: usize| self.vertex(k, j * k + i);
                for i in 0..k {
                    faces.push([inner(i), outer(i), outer(i + 1)]);
                    if i + 1 < k {
                        faces.push([inner(i), outer(i + 1), inner(i + 1)]);
                    }
                }
            }
        }
        faces
    }

    fn positions(&self, f: impl Fn(usize, usize) -> Vec3) -> Vec<Vec3> {
        self.rings().into_iter().map(|(k, s)| f(k, s)).collect()
    }

    /// Azimuth of vertex (k, s) when rings are laid out on circles.
    fn azimuth(&self, k: usize, s: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            TAU * s as f64 / (self.m * k) as f64
        }
    }
}

fn centroid(mesh_positions: &[Vec3], tri: [usize; 3]) -> Vec3 {
    let [a, b, c] = tri.map(|v| mesh_positions[v]);
    geom::scale(geom::add(geom::add(a, b), c), 1.0 / 3.0)
}

fn disk_vortex(spec: &GeneratorSpec) -> Result<Instance> {
    let n = spec.n;
    let fan = Fan { m: 6, n };
    let positions = fan.positions(|k, s| {
        let (r, a) = (k as f64 / n as f64, fan.azimuth(k, s));
        [r * a.cos(), r * a.sin(), 0.0]
    });
    let m = spec.k.unsigned_abs() as usize;
    let first = (n / 4).max(2);
    let mut zeros = Vec::with_capacity(m);
    for i in 0..m {
        let (sector, ring) = if m <= 6 { (i * 6 / m, first) } else { (i % 6, first + 2 * (i / 6)) };
        if ring + 1 > n {
            return Err(unsupported(format!("disk with n = {n} cannot host {m} separated vortices")));
        }
        let p = i_mid(ring);
        let tri = [
            fan.vertex(ring, sector * ring + p),
            fan.vertex(ring + 1, sector * (ring + 1) + p),
            fan.vertex(ring + 1, sector * (ring + 1) + p + 1),
        ];
        zeros.push(c(centroid(&positions, tri)));
    }
    let mesh = SurfaceMesh::build(positions, fan.faces(), [])?;
    let section = SectionField::from_fn(&mesh, |_, p| vortex_product(c(p), &zeros, spec.k));

    let mut inst = Instance::new(mesh);
    inst.connection = Some(ConnectionField::zero(&inst.mesh));
    inst.twoform = Some(TwoFormField::zero(&inst.mesh));
    inst.section = Some(section);
    Ok(inst)
}

fn i_mid(ring: usize) -> usize {
    ring / 2
}

fn annulus(spec: &GeneratorSpec) -> Result<Instance> {
    let n = spec.n;
    let around = 6 * n;
    let inner = 0.5;
    let idx = |j: usize, s: usize| j * around + s % around;
    let mut positions = Vec::with_capacity((n + 1) * around);
    for j in 0..=n {
        let r = inner + (1.0 - inner) * j as f64 / n as f64;
        for s in 0..around {
            let a = TAU * s as f64 / around as f64;
            positions.push([r * a.cos(), r * a.sin(), 0.0]);
        }
    }
    let mut faces = Vec::with_capacity(2 * n * around);
    for j in 0..n {
        for s in 0..around {
            faces.push([idx(j, s), idx(j + 1, s), idx(j + 1, s + 1)]);
            faces.push([idx(j, s), idx(j + 1, s + 1), idx(j, s + 1)]);
        }
    }
    let mesh = SurfaceMesh::build(positions, faces, [])?;
    let k = spec.k;
    let section = SectionField::from_fn(&mesh, |_, p| {
        let z = c(p).powi(k.unsigned_abs() as i32);
        if k < 0 {
            z.conj()
        } else {
            z
        }
    });
    let mut inst = Instance::new(mesh);
    inst.connection = Some(ConnectionField::zero(&inst.mesh));
    inst.twoform = Some(TwoFormField::zero(&inst.mesh));
    inst.section = Some(section);
    Ok(inst)
}

/// Tangent fields on a disk have charge 1, so k must be 1.
fn require_unit_charge(spec: &GeneratorSpec) -> Result<()> {
    if spec.k != 1 {
        return Err(unsupported(format!("{:?} has charge 1 by construction; got k = {}", spec.kind, spec.k)));
    }
    Ok(())
}

/// Rotation field i (z - z0) inside, exactly tangent values on the rim.
fn rotation_section(
    mesh: &SurfaceMesh,
    z0: Complex64,
    rim: impl Fn(usize) -> Option<Complex64>,
) -> SectionField {
    SectionField::from_fn(mesh, |v, p| rim(v).unwrap_or_else(|| Complex64::i() * (c(p) - z0)))
}

fn polygon_tangent(spec: &GeneratorSpec) -> Result<Instance> {
    require_unit_charge(spec)?;
    let (m, n) = (spec.sides, spec.n);
    if m < 3 {
        return Err(unsupported(format!("polygon with {m} sides")));
    }
    let fan = Fan { m, n };
    let corner_pt = |j: usize| {
        let a = TAU * (j % m) as f64 / m as f64;
        [a.cos(), a.sin(), 0.0]
    };
    let rings = fan.rings();
    let positions = fan.positions(|k, s| {
        if k == 0 {
            return [0.0; 3];
        }
        let (j, i) = (s / k, s % k);
        let edge = geom::sub(corner_pt(j + 1), corner_pt(j));
        geom::scale(geom::add(corner_pt(j), geom::scale(edge, i as f64 / k as f64)), k as f64 / n as f64)
    });
    let corners: Vec<usize> = (0..m).map(|j| fan.vertex(n, j * n)).collect();
    let z0 = c(centroid(&positions, [0, fan.vertex(1, 0), fan.vertex(1, 1)]));
    let mesh = SurfaceMesh::build(positions, fan.faces(), corners)?;
    let section = rotation_section(&mesh, z0, |v| {
        let (k, s) = rings[v];
        if k != n {
            return None;
        }
        let (j, i) = (s / n, s % n);
        let t = if i == 0 {
            Complex64::i() * c(corner_pt(j))
        } else {
            c(geom::normalize(geom::sub(corner_pt(j + 1), corner_pt(j))))
        };
        Some(t)
    });
    let mut inst = Instance::new(mesh);
    inst.twoform = Some(TwoFormField::zero(&inst.mesh));
    inst.section = Some(section);
    Ok(inst)
}

fn cap_tangent(spec: &GeneratorSpec) -> Result<Instance> {
    require_unit_charge(spec)?;
    let a = spec.cap_angle;
    if !(a > 0.0 && a < PI / 2.0) {
        return Err(unsupported(format!("cap angle {a} outside (0, pi/2)")));
    }
    let n = spec.n;
    let fan = Fan { m: 6, n };
    let rings = fan.rings();
    let positions = fan.positions(|k, s| {
        let (t, f) = (a * k as f64 / n as f64, fan.azimuth(k, s));
        [t.sin() * f.cos(), t.sin() * f.sin(), t.cos()]
    });
    let z0 = c(centroid(&positions, [0, fan.vertex(1, 0), fan.vertex(1, 1)]));
    let mesh = SurfaceMesh::build(positions, fan.faces(), [])?;
    let omega = (0..mesh.num_faces())
        .map(|f| {
            let [p, q, r] = mesh.face(f).map(|v| mesh.position(v));
            geom::solid_angle(p, q, r)
        })
        .collect();
    let section =
        rotation_section(&mesh, z0, |v| (rings[v].0 == n).then(|| Complex64::i() * c(mesh.position(v))));
    let mut inst = Instance::new(mesh);
    inst.twoform = Some(TwoFormField::new(omega));
    inst.section = Some(section);
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::run_census;
    use crate::identity::total_flux;

    #[test]
    fn tiny_resolution_is_rejected() {
        let s = GeneratorSpec::new(GeneratorKind::DiskVortex, 2, 1);
        assert!(matches!(generate(&s), Err(Error::UnsupportedParameter(_))));
    }

    #[test]
    fn fan_counts() {
        let fan = Fan { m: 6, n: 4 };
        assert_eq!(fan.rings().len(), 1 + 6 * 4 * 5 / 2);
        assert_eq!(fan.faces().len(), 6 * 16);
    }

    #[test]
    fn torus_flux_is_exact() {
        let inst = generate(&GeneratorSpec::new(GeneratorKind::FluxTorus, 8, 3)).unwrap();
        assert_eq!(total_flux(&inst.mesh, inst.twoform.as_ref().unwrap()).unwrap(), 6.0 * PI);
        assert_eq!(inst.mesh.euler_characteristic(), 0);
    }

    #[test]
    fn disk_charge_matches_k() {
        for k in [-3, -1, 0, 2, 3] {
            let inst = generate(&GeneratorSpec::new(GeneratorKind::DiskVortex, 16, k)).unwrap();
            let census = run_census(&inst.mesh, inst.section.as_ref().unwrap()).unwrap();
            assert_eq!(census.total_charge, k);
            assert_eq!(census.vortices.len(), k.unsigned_abs() as usize);
        }
    }

    #[test]
    fn scale_rejected_on_flat_kinds() {
        let s = GeneratorSpec::new(GeneratorKind::DiskVortex, 16, 1).with_scale(1.5);
        assert!(matches!(generate(&s), Err(Error::UnsupportedParameter(_))));
    }
}
