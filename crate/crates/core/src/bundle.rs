//! Line bundle construction from a two-chart atlas.
//!
//! Each chart carries a potential whose discrete curl is the two-form. On
//! the overlap the transition function obeys
//! `c12(m') = c12(m) exp(i * integral(theta1 - theta2, m -> m'))`, so it is
//! obtained by propagating phases along a spanning tree of overlap edges.
//! A non-contractible overlap loop carries the defect
//! `integral(theta1 - theta2)`, which equals the total flux; c12 is
//! single-valued exactly when that defect is a multiple of 2 pi.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::census::angle_step;
use crate::error::{Error, Result};
use crate::fields::{exactness_residual_on, ConnectionField, TwoFormField};
use crate::mesh::{face_edges, DirectedEdge, SurfaceMesh};

pub const DEFECT_TOL: f64 = 1e-8;
/// Per-face bound on |omega - d theta| within each chart.
pub const CHART_EXACTNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Chart {
    One,
    Two,
}

impl Chart {
    pub fn index(self) -> usize {
        match self {
            Chart::One => 0,
            Chart::Two => 1,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Chart::One),
            2 => Some(Chart::Two),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartAtlas {
    /// Per face: membership in chart 1 and chart 2.
    pub membership: Vec<[bool; 2]>,
    pub connections: [ConnectionField; 2],
    /// Base point m0.
    pub base: usize,
    /// Anchor vertices m1, m2 of the two charts.
    pub anchors: [usize; 2],
}

type Adjacency = BTreeMap<usize, BTreeSet<usize>>;

fn adjacency(mesh: &SurfaceMesh, faces: &[usize]) -> Adjacency {
    let mut adj = Adjacency::new();
    for &f in faces {
        for e in face_edges(mesh.face(f)) {
            adj.entry(e.tail).or_default().insert(e.head);
            adj.entry(e.head).or_default().insert(e.tail);
        }
    }
    adj
}

/// Breadth-first tree edges `(parent, child)` in visiting order.
fn bfs_tree(adj: &Adjacency, roots: &[usize], skip: &BTreeSet<usize>) -> Vec<(usize, usize)> {
    let mut seen: BTreeSet<usize> = skip.iter().chain(roots).copied().collect();
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    let mut tree = Vec::new();
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                tree.push((v, w));
                queue.push_back(w);
            }
        }
    }
    tree
}

fn faces_connected(mesh: &SurfaceMesh, faces: &[usize]) -> bool {
    let Some(&start) = faces.first() else { return false };
    let set: BTreeSet<usize> = faces.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for e in face_edges(mesh.face(f)) {
            for &g in mesh.edge_faces(e.tail, e.head) {
                if set.contains(&g) && seen.insert(g) {
                    queue.push_back(g);
                }
            }
        }
    }
    seen.len() == set.len()
}

impl ChartAtlas {
    pub fn chart_faces(&self, chart: Chart) -> Vec<usize> {
        (0..self.membership.len()).filter(|&f| self.membership[f][chart.index()]).collect()
    }

    pub fn overlap_faces(&self) -> Vec<usize> {
        (0..self.membership.len()).filter(|&f| self.membership[f][0] && self.membership[f][1]).collect()
    }

    pub fn connection(&self, chart: Chart) -> &ConnectionField {
        &self.connections[chart.index()]
    }

    /// Vertex the transition function is normalized at: the base point if it
    /// lies on the overlap, otherwise the lowest overlap vertex.
    pub fn reference_vertex(&self, mesh: &SurfaceMesh) -> Option<usize> {
        let verts: BTreeSet<usize> =
            self.overlap_faces().into_iter().flat_map(|f| mesh.face(f)).collect();
        if verts.contains(&self.base) {
            Some(self.base)
        } else {
            verts.first().copied()
        }
    }

    /// Checks chart topology, overlap shape and per-chart exactness.
    pub fn validate(&self, mesh: &SurfaceMesh, twoform: &TwoFormField) -> Result<()> {
        if self.membership.len() != mesh.num_faces() {
            return Err(Error::LengthMismatch {
                what: "atlas face charts",
                expected: mesh.num_faces(),
                found: self.membership.len(),
            });
        }
        if let Some(f) = self.membership.iter().position(|m| !m[0] && !m[1]) {
            return Err(Error::InvalidAtlas(format!("face {f} belongs to no chart")));
        }
        if self.base >= mesh.num_vertices() {
            return Err(Error::InvalidAtlas(format!("base point {} is not a vertex", self.base)));
        }
        for chart in [Chart::One, Chart::Two] {
            let faces = self.chart_faces(chart);
            if !faces_connected(mesh, &faces) {
                return Err(Error::InvalidAtlas(format!("chart {} is not edge-connected", chart.number())));
            }
            let (sub, _) = mesh.submesh(&faces)?;
            if sub.euler_characteristic() != 1 {
                return Err(Error::InvalidAtlas(format!(
                    "chart {} is not simply connected (Euler characteristic {})",
                    chart.number(),
                    sub.euler_characteristic()
                )));
            }
            let anchor = self.anchors[chart.index()];
            if !faces.iter().any(|&f| mesh.face(f).contains(&anchor)) {
                return Err(Error::InvalidAtlas(format!(
                    "anchor {anchor} is not in chart {}",
                    chart.number()
                )));
            }
            let r = exactness_residual_on(mesh, self.connection(chart), twoform, faces.iter().copied())?;
            if let Some((i, v)) = r.iter().enumerate().find(|(_, v)| v.abs() >= CHART_EXACTNESS_TOL) {
                return Err(Error::InvalidAtlas(format!(
                    "chart {} potential is not exact on face {} (residual {v:e})",
                    chart.number(),
                    faces[i]
                )));
            }
        }
        let overlap = self.overlap_faces();
        if !faces_connected(mesh, &overlap) {
            return Err(Error::InvalidAtlas("overlap band is empty or disconnected".into()));
        }
        let (sub, _) = mesh.submesh(&overlap)?;
        if !matches!(sub.euler_characteristic(), 0 | 1) {
            return Err(Error::InvalidAtlas("overlap band is neither a disk nor an annulus".into()));
        }
        Ok(())
    }

    fn delta(&self, e: DirectedEdge) -> Result<f64> {
        Ok(self.connections[0].theta(e)? - self.connections[1].theta(e)?)
    }
}

/// Unit-modulus transition function sampled on overlap vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionFunction {
    pub values: BTreeMap<usize, Complex64>,
    pub reference_vertex: usize,
    pub reference_value: Complex64,
    /// Overlap loop bordering the chart-2-only region, traversed with the
    /// overlap on its left; empty when the overlap is a disk.
    pub seam_loop: Vec<usize>,
    /// Sum of theta1 - theta2 along the seam loop.
    pub loop_defect: f64,
}

impl TransitionFunction {
    pub fn value(&self, v: usize) -> Option<Complex64> {
        self.values.get(&v).copied()
    }

    /// Winding of the sampled phase of c12 along a closed vertex cycle.
    pub fn winding_along(&self, cycle: &[usize]) -> Result<i64> {
        let n = cycle.len();
        let mut total = 0.0;
        for i in 0..n {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            let ca = self.value(a).ok_or(Error::MissingEdgeData(a, b))?;
            let cb = self.value(b).ok_or(Error::MissingEdgeData(a, b))?;
            total += angle_step([ca.re, ca.im], [cb.re, cb.im]);
        }
        crate::census::winding_from_steps(total)
    }

    /// Winding of c12 around the seam loop (0 for a disk overlap).
    pub fn seam_winding(&self) -> Result<i64> {
        if self.seam_loop.is_empty() {
            return Ok(0);
        }
        self.winding_along(&self.seam_loop)
    }

    /// Multiplies every sample by a unit phase at vertex `v`; used to probe
    /// the locality of the cocycle check.
    pub fn perturbed(&self, v: usize, phase: f64) -> Self {
        let mut t = self.clone();
        if let Some(c) = t.values.get_mut(&v) {
            *c *= Complex64::from_polar(1.0, phase);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obstruction {
    pub loop_defect: f64,
    /// loop_defect / 2 pi minus its floor, in [0, 1).
    pub fractional_part: f64,
    pub seam_loop: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransitionOutcome {
    SingleValued(TransitionFunction),
    Obstruction(Obstruction),
}

impl TransitionOutcome {
    pub fn single_valued(self) -> Option<TransitionFunction> {
        match self {
            TransitionOutcome::SingleValued(t) => Some(t),
            TransitionOutcome::Obstruction(_) => None,
        }
    }
}

pub fn propagate_transition(mesh: &SurfaceMesh, atlas: &ChartAtlas) -> Result<TransitionOutcome> {
    let r = atlas
        .reference_vertex(mesh)
        .ok_or_else(|| Error::InvalidAtlas("empty overlap band".into()))?;
    propagate_transition_from(mesh, atlas, r)
}

/// Propagation normalized to c12 = 1 at `reference`.
pub fn propagate_transition_from(
    mesh: &SurfaceMesh,
    atlas: &ChartAtlas,
    reference: usize,
) -> Result<TransitionOutcome> {
    let overlap = atlas.overlap_faces();
    if overlap.is_empty() {
        return Err(Error::InvalidAtlas("empty overlap band".into()));
    }
    let adj = adjacency(mesh, &overlap);
    if !adj.contains_key(&reference) {
        return Err(Error::InvalidAtlas(format!("reference vertex {reference} is not on the overlap")));
    }

    let mut phase = BTreeMap::from([(reference, 0.0)]);
    let mut tree = BTreeSet::new();
    for (p, c) in bfs_tree(&adj, &[reference], &BTreeSet::new()) {
        phase.insert(c, phase[&p] + atlas.delta(DirectedEdge::new(p, c))?);
        tree.insert(DirectedEdge::new(p, c).key());
    }
    if phase.len() != adj.len() {
        return Err(Error::InvalidAtlas("overlap band is disconnected".into()));
    }

    let (sub, map) = mesh.submesh(&overlap)?;
    let mut inverse = vec![0; sub.num_vertices()];
    for (orig, m) in map.iter().enumerate() {
        if let Some(m) = m {
            inverse[*m] = orig;
        }
    }

    let (seam_loop, loop_defect) = match sub.euler_characteristic() {
        1 => (Vec::new(), 0.0),
        0 if sub.boundary_loops().len() == 2 => {
            let only_two = |f: usize| atlas.membership[f] == [false, true];
            let loops = sub.boundary_loops();
            let touches_chart_two = |i: usize| {
                loops[i].edges.iter().any(|e| {
                    let (a, b) = (inverse[e.tail], inverse[e.head]);
                    mesh.edge_faces(a, b).iter().any(|&f| only_two(f))
                })
            };
            let pick = if touches_chart_two(0) || !touches_chart_two(1) { 0 } else { 1 };
            let cycle: Vec<usize> = loops[pick].vertices().map(|v| inverse[v]).collect();
            let mut defect = 0.0;
            for i in 0..cycle.len() {
                defect += atlas.delta(DirectedEdge::new(cycle[i], cycle[(i + 1) % cycle.len()]))?;
            }
            (cycle, defect)
        }
        _ => return Err(Error::InvalidAtlas("overlap band is neither a disk nor an annulus".into())),
    };

    // every non-tree edge must close up to a multiple of the loop defect
    for (&a, ns) in &adj {
        for &b in ns.range(a + 1..) {
            if tree.contains(&(a, b)) {
                continue;
            }
            let d = phase[&a] + atlas.delta(DirectedEdge::new(a, b))? - phase[&b];
            let m = if loop_defect.abs() > DEFECT_TOL { (d / loop_defect).round() } else { 0.0 };
            let mismatch = (d - m * loop_defect).abs();
            if mismatch > DEFECT_TOL {
                return Err(Error::InconsistentAtlas { tail: a, head: b, mismatch });
            }
        }
    }

    let turns = loop_defect / TAU;
    if (loop_defect - TAU * turns.round()).abs() >= DEFECT_TOL {
        return Ok(TransitionOutcome::Obstruction(Obstruction {
            loop_defect,
            fractional_part: turns - turns.floor(),
            seam_loop,
        }));
    }
    let values = phase.into_iter().map(|(v, p)| (v, Complex64::from_polar(1.0, p))).collect();
    Ok(TransitionOutcome::SingleValued(TransitionFunction {
        values,
        reference_vertex: reference,
        reference_value: Complex64::new(1.0, 0.0),
        seam_loop,
        loop_defect,
    }))
}

/// max over overlap edges of |c(head)/c(tail) - exp(i (theta1 - theta2))|.
pub fn verify_cocycle_relation(
    mesh: &SurfaceMesh,
    transition: &TransitionFunction,
    atlas: &ChartAtlas,
) -> Result<f64> {
    let adj = adjacency(mesh, &atlas.overlap_faces());
    let mut worst: f64 = 0.0;
    for (&a, ns) in &adj {
        for &b in ns.range(a + 1..) {
            let ca = transition.value(a).ok_or(Error::MissingEdgeData(a, b))?;
            let cb = transition.value(b).ok_or(Error::MissingEdgeData(a, b))?;
            let expected = Complex64::from_polar(1.0, atlas.delta(DirectedEdge::new(a, b))?);
            worst = worst.max((cb / ca - expected).norm());
        }
    }
    Ok(worst)
}

/// A section materialized in one chart's trivialization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSection {
    pub chart: Chart,
    pub values: BTreeMap<usize, Complex64>,
}

/// psi(m) = w(m) exp(-i sum of chart theta along a tree path from the anchor).
///
/// The tree runs from the anchor to the atlas reference vertex, then along
/// the same overlap tree the transition function uses, then outward over
/// the rest of the chart. With this choice the two charts' materializations
/// satisfy psi2 = kappa c12 psi1 on the overlap for one constant unit kappa.
pub fn section_in_chart(
    mesh: &SurfaceMesh,
    atlas: &ChartAtlas,
    chart: Chart,
    fiber: &[Complex64],
) -> Result<ChartSection> {
    if fiber.len() != mesh.num_vertices() {
        return Err(Error::LengthMismatch {
            what: "fiber values",
            expected: mesh.num_vertices(),
            found: fiber.len(),
        });
    }
    let conn = atlas.connection(chart);
    let chart_adj = adjacency(mesh, &atlas.chart_faces(chart));
    let anchor = atlas.anchors[chart.index()];
    if !chart_adj.contains_key(&anchor) {
        return Err(Error::InvalidAtlas(format!("anchor {anchor} is not in chart {}", chart.number())));
    }
    let r = atlas
        .reference_vertex(mesh)
        .ok_or_else(|| Error::InvalidAtlas("empty overlap band".into()))?;

    // path anchor -> r
    let mut parent = BTreeMap::new();
    for (p, c) in bfs_tree(&chart_adj, &[anchor], &BTreeSet::new()) {
        parent.insert(c, p);
    }
    let mut to_ref = 0.0;
    let mut v = r;
    while v != anchor {
        let p = *parent
            .get(&v)
            .ok_or_else(|| Error::InvalidAtlas(format!("reference {r} unreachable in chart {}", chart.number())))?;
        to_ref += conn.theta(DirectedEdge::new(p, v))?;
        v = p;
    }

    let mut phase = BTreeMap::from([(r, to_ref)]);
    let overlap_adj = adjacency(mesh, &atlas.overlap_faces());
    for (p, c) in bfs_tree(&overlap_adj, &[r], &BTreeSet::new()) {
        phase.insert(c, phase[&p] + conn.theta(DirectedEdge::new(p, c))?);
    }
    let assigned: Vec<usize> = phase.keys().copied().collect();
    let skip: BTreeSet<usize> = assigned.iter().copied().collect();
    for (p, c) in bfs_tree(&chart_adj, &assigned, &skip) {
        phase.insert(c, phase[&p] + conn.theta(DirectedEdge::new(p, c))?);
    }

    let values = phase
        .into_iter()
        .filter(|(v, _)| chart_adj.contains_key(v))
        .map(|(v, p)| (v, fiber[v] * Complex64::from_polar(1.0, -p)))
        .collect();
    Ok(ChartSection { chart, values })
}
