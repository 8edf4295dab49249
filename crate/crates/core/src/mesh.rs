//! Oriented triangle meshes with boundary.
//!
//! Faces are vertex triples whose cyclic order fixes the orientation. A
//! boundary edge is traversed in the direction it has in its unique face, so
//! every [`BoundaryLoop`] keeps the surface on its left.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::geom::{self, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub tail: usize,
    pub head: usize,
}

impl DirectedEdge {
    pub fn new(tail: usize, head: usize) -> Self {
        Self { tail, head }
    }

    pub fn reversed(self) -> Self {
        Self::new(self.head, self.tail)
    }

    /// Undirected key `(min, max)`.
    pub fn key(self) -> (usize, usize) {
        if self.tail < self.head {
            (self.tail, self.head)
        } else {
            (self.head, self.tail)
        }
    }
}

/// A closed boundary cycle with the surface on its left.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub edges: Vec<DirectedEdge>,
    /// Declared corner vertices on this loop, in traversal order.
    pub corners: Vec<usize>,
}

impl BoundaryLoop {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertices in traversal order (tail of each edge).
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().map(|e| e.tail)
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    positions: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    corners: BTreeSet<usize>,
    edge_faces: BTreeMap<(usize, usize), Vec<usize>>,
    loops: Vec<BoundaryLoop>,
    flipped: Vec<bool>,
}

pub fn face_edges(face: [usize; 3]) -> [DirectedEdge; 3] {
    [
        DirectedEdge::new(face[0], face[1]),
        DirectedEdge::new(face[1], face[2]),
        DirectedEdge::new(face[2], face[0]),
    ]
}

impl SurfaceMesh {
    /// Builds and validates a mesh.
    ///
    /// Face orientations are made consistent by one breadth-first pass per
    /// connected component; the lowest-index face of each component keeps its
    /// orientation. Faces that had to be flipped are reported by
    /// [`SurfaceMesh::flipped_faces`].
    pub fn build(
        positions: Vec<Vec3>,
        faces: Vec<[usize; 3]>,
        corners: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let count = positions.len();
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                if v >= count {
                    return Err(Error::VertexOutOfRange { face: f, vertex: v, count });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::DegenerateFace { face: f });
            }
        }

        let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (f, tri) in faces.iter().enumerate() {
            for e in face_edges(*tri) {
                let incident = edge_faces.entry(e.key()).or_default();
                incident.push(f);
                if incident.len() > 2 {
                    return Err(Error::NonManifoldEdge(e.key().0, e.key().1));
                }
            }
        }

        let flipped = orient(&faces, &edge_faces)?;
        let faces: Vec<[usize; 3]> = faces
            .into_iter()
            .zip(&flipped)
            .map(|(t, &flip)| if flip { [t[0], t[2], t[1]] } else { t })
            .collect();

        let corners: BTreeSet<usize> = corners.into_iter().collect();
        let loops = extract_loops(&faces, &edge_faces, &corners)?;
        let on_boundary: BTreeSet<usize> =
            loops.iter().flat_map(|l| l.vertices()).collect();
        if let Some(&c) = corners.iter().find(|c| !on_boundary.contains(c)) {
            return Err(Error::InteriorCorner(c));
        }

        Ok(Self { positions, faces, corners, edge_faces, loops, flipped })
    }

    pub fn num_vertices(&self) -> usize {
        self.positions.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_faces.len()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> Vec3 {
        self.positions[v]
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> [usize; 3] {
        self.faces[f]
    }

    pub fn corner_vertices(&self) -> &BTreeSet<usize> {
        &self.corners
    }

    pub fn boundary_loops(&self) -> &[BoundaryLoop] {
        &self.loops
    }

    pub fn is_closed(&self) -> bool {
        self.loops.is_empty()
    }

    /// Faces whose vertex order was reversed during orientation repair.
    pub fn flipped_faces(&self) -> impl Iterator<Item = usize> + '_ {
        self.flipped.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i)
    }

    pub fn is_flipped(&self, f: usize) -> bool {
        self.flipped[f]
    }

    /// Undirected edge keys `(min, max)` in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_faces.keys().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_faces.contains_key(&DirectedEdge::new(a, b).key())
    }

    pub fn edge_faces(&self, a: usize, b: usize) -> &[usize] {
        self.edge_faces
            .get(&DirectedEdge::new(a, b).key())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn boundary_edge_count(&self) -> usize {
        self.edge_faces.values().filter(|f| f.len() == 1).count()
    }

    pub fn interior_edge_count(&self) -> usize {
        self.edge_faces.values().filter(|f| f.len() == 2).count()
    }

    /// V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.faces[f];
        geom::scale(
            geom::add(geom::add(self.positions[a], self.positions[b]), self.positions[c]),
            1.0 / 3.0,
        )
    }

    /// Unnormalized face normal (twice the vector area).
    pub fn face_normal(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.faces[f];
        let p = &self.positions;
        geom::cross(geom::sub(p[b], p[a]), geom::sub(p[c], p[a]))
    }

    pub fn face_diameter(&self, f: usize) -> f64 {
        let [a, b, c] = self.faces[f];
        let p = &self.positions;
        geom::norm(geom::sub(p[a], p[b]))
            .max(geom::norm(geom::sub(p[b], p[c])))
            .max(geom::norm(geom::sub(p[c], p[a])))
    }

    pub fn max_face_diameter(&self) -> f64 {
        (0..self.num_faces()).map(|f| self.face_diameter(f)).fold(0.0, f64::max)
    }

    /// Angle-weighted vertex normals (unit length).
    pub fn vertex_normals(&self) -> Vec<Vec3> {
        let mut normals = vec![[0.0; 3]; self.num_vertices()];
        for (f, tri) in self.faces.iter().enumerate() {
            let n = geom::normalize(self.face_normal(f));
            for i in 0..3 {
                let v = tri[i];
                let prev = tri[(i + 2) % 3];
                let next = tri[(i + 1) % 3];
                let angle = geom::angle_between(
                    geom::sub(self.positions[next], self.positions[v]),
                    geom::sub(self.positions[prev], self.positions[v]),
                );
                normals[v] = geom::add(normals[v], geom::scale(n, angle));
            }
        }
        normals.into_iter().map(geom::normalize).collect()
    }

    /// The same surface with every face orientation reversed.
    pub fn reversed(&self) -> Self {
        let faces = self.faces.iter().map(|t| [t[0], t[2], t[1]]).collect();
        Self::build(self.positions.clone(), faces, self.corners.iter().copied())
            .expect("reversing a valid mesh keeps it valid")
    }

    /// Restriction to a subset of faces. Returns the submesh (vertices
    /// renumbered in increasing original order, faces in the given order) and
    /// the map from original vertex ids to submesh ids. Corners are dropped.
    pub fn submesh(&self, faces: &[usize]) -> Result<(Self, Vec<Option<usize>>)> {
        let mut map = vec![None; self.num_vertices()];
        let used: BTreeSet<usize> = faces.iter().flat_map(|&f| self.faces[f]).collect();
        let mut positions = Vec::with_capacity(used.len());
        for v in used {
            map[v] = Some(positions.len());
            positions.push(self.positions[v]);
        }
        let tris = faces
            .iter()
            .map(|&f| self.faces[f].map(|v| map[v].expect("vertex of selected face")))
            .collect();
        Ok((Self::build(positions, tris, [])?, map))
    }

    /// One step of midpoint subdivision (each triangle becomes four).
    pub fn subdivided(&self) -> Self {
        let mut positions = self.positions.clone();
        let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(a, b) in self.edge_faces.keys() {
            midpoint.insert((a, b), positions.len());
            positions.push(geom::scale(geom::add(self.positions[a], self.positions[b]), 0.5));
        }
        let mid = |a: usize, b: usize| midpoint[&DirectedEdge::new(a, b).key()];
        let mut faces = Vec::with_capacity(4 * self.faces.len());
        for &[a, b, c] in &self.faces {
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            faces.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        Self::build(positions, faces, self.corners.iter().copied())
            .expect("subdivision of a valid mesh is valid")
    }
}

/// Breadth-first orientation pass. Returns the per-face flip flags.
fn orient(faces: &[[usize; 3]], edge_faces: &BTreeMap<(usize, usize), Vec<usize>>) -> Result<Vec<bool>> {
    let mut flipped = vec![false; faces.len()];
    let mut seen = vec![false; faces.len()];
    let has_forward = |f: usize, e: DirectedEdge| face_edges(faces[f]).contains(&e);

    for seed in 0..faces.len() {
        if seen[seed] {
            continue;
        }
        seen[seed] = true;
        let mut queue = VecDeque::from([seed]);
        while let Some(f) = queue.pop_front() {
            for e in face_edges(faces[f]) {
                // e as it runs in the original ordering of f
                let Some(&g) = edge_faces[&e.key()].iter().find(|&&g| g != f) else {
                    continue;
                };
                // After orientation, g must traverse the shared edge opposite to f.
                let same_direction = has_forward(g, e);
                let want_flip = flipped[f] ^ same_direction;
                if seen[g] {
                    if flipped[g] != want_flip {
                        return Err(Error::NonOrientable { face: g });
                    }
                } else {
                    seen[g] = true;
                    flipped[g] = want_flip;
                    queue.push_back(g);
                }
            }
        }
    }
    Ok(flipped)
}

fn extract_loops(
    faces: &[[usize; 3]],
    edge_faces: &BTreeMap<(usize, usize), Vec<usize>>,
    corners: &BTreeSet<usize>,
) -> Result<Vec<BoundaryLoop>> {
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for tri in faces {
        for e in face_edges(*tri) {
            if edge_faces[&e.key()].len() == 1 && next.insert(e.tail, e.head).is_some() {
                // two outgoing boundary edges: pinched vertex
                return Err(Error::OpenChain { vertex: e.tail });
            }
        }
    }

    let mut loops = Vec::new();
    let mut visited = BTreeSet::new();
    for &start in next.keys() {
        if visited.contains(&start) {
            continue;
        }
        let mut edges = Vec::new();
        let mut v = start;
        loop {
            visited.insert(v);
            let Some(&w) = next.get(&v) else {
                return Err(Error::OpenChain { vertex: v });
            };
            edges.push(DirectedEdge::new(v, w));
            if w == start {
                break;
            }
            if visited.contains(&w) {
                return Err(Error::OpenChain { vertex: w });
            }
            v = w;
        }
        let loop_corners = edges.iter().map(|e| e.tail).filter(|v| corners.contains(v)).collect();
        loops.push(BoundaryLoop { edges, corners: loop_corners });
    }
    Ok(loops)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn octahedron() -> SurfaceMesh {
        let p = vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let f = vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ];
        SurfaceMesh::build(p, f, []).unwrap()
    }

    fn square_disk() -> SurfaceMesh {
        // 3x3 vertex grid, 8 triangles
        let mut p = Vec::new();
        for j in 0..3 {
            for i in 0..3 {
                p.push([i as f64, j as f64, 0.0]);
            }
        }
        let mut f = Vec::new();
        for j in 0..2 {
            for i in 0..2 {
                let a = j * 3 + i;
                f.push([a, a + 1, a + 4]);
                f.push([a, a + 4, a + 3]);
            }
        }
        SurfaceMesh::build(p, f, [0, 2, 8, 6]).unwrap()
    }

    #[test]
    fn single_triangle_has_one_loop() {
        let m = SurfaceMesh::build(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![[0, 1, 2]], [])
            .unwrap();
        assert_eq!(m.boundary_loops().len(), 1);
        assert_eq!(m.boundary_loops()[0].len(), 3);
        assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn octahedron_is_closed_sphere() {
        let m = octahedron();
        assert!(m.is_closed());
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(m.flipped_faces().count(), 0);
    }

    #[test]
    fn square_disk_loop_and_corners() {
        let m = square_disk();
        assert_eq!(m.euler_characteristic(), 1);
        let loops = m.boundary_loops();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 8);
        assert_eq!(loops[0].corners, vec![0, 2, 8, 6]);
        // counterclockwise traversal: 0 -> 1 -> 2
        assert_eq!(loops[0].edges[0], DirectedEdge::new(0, 1));
    }

    #[test]
    fn inconsistent_pair_is_repaired() {
        // Both faces run the shared edge 1->2 in the same direction.
        let p = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        let m = SurfaceMesh::build(p, vec![[0, 1, 2], [1, 2, 3]], []).unwrap();
        assert_eq!(m.flipped_faces().collect::<Vec<_>>(), vec![1]);
        assert_eq!(m.face(1), [1, 3, 2]);
        assert_eq!(m.boundary_loops().len(), 1);
    }

    #[test]
    fn mobius_strip_is_rejected() {
        // Strip of 2n triangles closed with a half twist.
        let n = 5;
        let mut p = Vec::new();
        for i in 0..n {
            let t = i as f64;
            p.push([t, 0.0, 0.0]);
            p.push([t, 1.0, 0.0]);
        }
        let mut f = Vec::new();
        for i in 0..n - 1 {
            let (a, b, c, d) = (2 * i, 2 * i + 1, 2 * i + 2, 2 * i + 3);
            f.push([a, c, b]);
            f.push([b, c, d]);
        }
        let (a, b) = (2 * (n - 1), 2 * (n - 1) + 1);
        f.push([a, 1, b]);
        f.push([b, 1, 0]);
        assert!(matches!(SurfaceMesh::build(p, f, []), Err(Error::NonOrientable { .. })));
    }

    #[test]
    fn non_manifold_edge_is_rejected() {
        let p = vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        let f = vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]];
        assert!(matches!(SurfaceMesh::build(p, f, []), Err(Error::NonManifoldEdge(0, 1))));
    }

    #[test]
    fn pinched_boundary_is_rejected() {
        // Two triangles sharing only vertex 0.
        let p = vec![[0.0; 3], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [-1.0, -1.0, 0.0]];
        let f = vec![[0, 1, 2], [0, 3, 4]];
        assert!(matches!(SurfaceMesh::build(p, f, []), Err(Error::OpenChain { vertex: 0 })));
    }

    #[test]
    fn interior_corner_is_rejected() {
        let m = square_disk();
        let err = SurfaceMesh::build(m.positions().to_vec(), m.faces().to_vec(), [4]);
        assert!(matches!(err, Err(Error::InteriorCorner(4))));
    }

    #[test]
    fn edge_count_identity() {
        for m in [octahedron(), square_disk()] {
            assert_eq!(3 * m.num_faces(), 2 * m.interior_edge_count() + m.boundary_edge_count());
        }
    }

    #[test]
    fn subdivision_keeps_euler_characteristic() {
        for m in [octahedron(), square_disk()] {
            let s = m.subdivided();
            assert_eq!(s.num_faces(), 4 * m.num_faces());
            assert_eq!(s.euler_characteristic(), m.euler_characteristic());
        }
    }

    #[test]
    fn reversal_reverses_loops() {
        let m = square_disk();
        let r = m.reversed();
        let fwd: BTreeSet<_> = m.boundary_loops()[0].edges.iter().copied().collect();
        let back: BTreeSet<_> = r.boundary_loops()[0].edges.iter().map(|e| e.reversed()).collect();
        assert_eq!(fwd, back);
    }
}
