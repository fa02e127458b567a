//! Discrete domains: induced square-grid subgraphs with dual and medial
//! structure.
//!
//! All combinatorics is exact: every geometric object (vertex, edge midpoint,
//! face center) is a [`Point`] with integer coordinates in units of `δ/2`, so
//! a vertex has two even coordinates, a face center two odd ones, and an edge
//! midpoint one of each. Floating point enters only through [`Point::embed`]
//! and the region membership tests.

pub mod gallery;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Grid point in doubled coordinates: the embedded position is `δ/2 (x + iy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    /// Lattice vertex `δ(j + ik)` in doubled coordinates.
    pub const fn vertex(j: i64, k: i64) -> Self {
        Point { x: 2 * j, y: 2 * k }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Point {
            x: self.x + dx,
            y: self.y + dy,
        }
    }

    /// Embedded position for mesh `δ`.
    pub fn embed(self, mesh: f64) -> Complex64 {
        Complex64::new(self.x as f64, self.y as f64) * (mesh / 2.0)
    }

    pub fn is_vertex(self) -> bool {
        self.x % 2 == 0 && self.y % 2 == 0
    }

    pub fn is_face_center(self) -> bool {
        self.x % 2 != 0 && self.y % 2 != 0
    }

    /// Midpoint of a horizontal edge.
    pub fn is_horizontal_midpoint(self) -> bool {
        self.x % 2 != 0 && self.y % 2 == 0
    }

    /// Midpoint of a vertical edge.
    pub fn is_vertical_midpoint(self) -> bool {
        self.x % 2 == 0 && self.y % 2 != 0
    }

    pub fn is_edge_midpoint(self) -> bool {
        self.is_horizontal_midpoint() || self.is_vertical_midpoint()
    }

    /// Endpoints of the edge with this midpoint.
    pub fn edge_endpoints(self) -> [Point; 2] {
        debug_assert!(self.is_edge_midpoint());
        if self.is_horizontal_midpoint() {
            [self.offset(-1, 0), self.offset(1, 0)]
        } else {
            [self.offset(0, -1), self.offset(0, 1)]
        }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}/2, {}/2)", self.x, self.y)
    }
}

/// Continuum region descriptor with a strict-interior membership test.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disk { center: [f64; 2], radius: f64 },
    Rectangle { x0: f64, y0: f64, x1: f64, y1: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

impl Region {
    pub fn unit_disk() -> Self {
        Region::Disk {
            center: [0.0, 0.0],
            radius: 1.0,
        }
    }

    pub fn square(side: f64) -> Self {
        Region::Rectangle {
            x0: 0.0,
            y0: 0.0,
            x1: side,
            y1: side,
        }
    }

    /// Strict interior test (boundary points are excluded).
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            Region::Disk { center, radius } => {
                let dx = z.re - center[0];
                let dy = z.im - center[1];
                dx * dx + dy * dy < radius * radius
            }
            Region::Rectangle { x0, y0, x1, y1 } => {
                z.re > *x0 && z.re < *x1 && z.im > *y0 && z.im < *y1
            }
            Region::Polygon { vertices } => polygon_contains(vertices, z),
        }
    }

    /// Axis-aligned bounding box.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        match self {
            Region::Disk { center, radius } => (
                center[0] - radius,
                center[1] - radius,
                center[0] + radius,
                center[1] + radius,
            ),
            Region::Rectangle { x0, y0, x1, y1 } => (*x0, *y0, *x1, *y1),
            Region::Polygon { vertices } => {
                let mut b = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
                for v in vertices {
                    b.0 = b.0.min(v[0]);
                    b.1 = b.1.min(v[1]);
                    b.2 = b.2.max(v[0]);
                    b.3 = b.3.max(v[1]);
                }
                b
            }
        }
    }
}

fn polygon_contains(vertices: &[[f64; 2]], z: Complex64) -> bool {
    // Even-odd crossing rule; points on an edge count as outside (best effort
    // in floating point).
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let [x1, y1] = vertices[i];
        let [x2, y2] = vertices[(i + 1) % n];
        if (y1 > z.im) != (y2 > z.im) {
            let t = (z.im - y1) / (y2 - y1);
            let xc = x1 + t * (x2 - x1);
            if z.re < xc {
                inside = !inside;
            }
        }
    }
    inside
}

/// One entry of the multiplicity-aware boundary: a boundary edge from an
/// interior vertex to an outside grid point. Outside points shared by several
/// boundary edges appear once per edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub inside: Point,
    pub outside: Point,
}

impl BoundaryEdge {
    pub fn midpoint(self) -> Point {
        Point::new(
            (self.inside.x + self.outside.x) / 2,
            (self.inside.y + self.outside.y) / 2,
        )
    }

    /// Unit outward normal `(y - x)/δ` as a complex number of modulus 1.
    pub fn outward_normal(self) -> Complex64 {
        Complex64::new(
            ((self.outside.x - self.inside.x) / 2) as f64,
            ((self.outside.y - self.inside.y) / 2) as f64,
        )
    }
}

/// Line `ℓ(e) = (d - v)^{-1/2} ℝ` attached to a medial edge, stored through
/// its doubled angle `η²` to keep the mod-π ambiguity explicit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeLine {
    /// Quadrant sign of `d - v`: (±1, ±1).
    qx: i8,
    qy: i8,
}

const COS_PI_8: f64 = 0.9238795325112867;
const SIN_PI_8: f64 = 0.3826834323650898;
const FRAC_SQRT2_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

impl EdgeLine {
    /// Line for the medial edge whose nearest vertex is `v` and nearest dual
    /// vertex is `d`.
    pub fn from_vertices(v: Point, d: Point) -> Self {
        debug_assert!(v.is_vertex() && d.is_face_center());
        let qx = (d.x - v.x) as i8;
        let qy = (d.y - v.y) as i8;
        debug_assert!(qx.abs() == 1 && qy.abs() == 1);
        EdgeLine { qx, qy }
    }

    /// `η² = conj(d - v)/|d - v|`, one of the four eighth roots `e^{±iπ/4}`,
    /// `e^{±3iπ/4}`.
    pub fn eta_squared(self) -> Complex64 {
        Complex64::new(
            self.qx as f64 * FRAC_SQRT2_2,
            -(self.qy as f64) * FRAC_SQRT2_2,
        )
    }

    /// A unit direction `η` spanning the line (defined up to sign). The four
    /// lattice lines are `e^{±iπ/8} ℝ` and `e^{±3iπ/8} ℝ`.
    pub fn direction(self) -> Complex64 {
        match (self.qx, self.qy) {
            (1, 1) => Complex64::new(COS_PI_8, -SIN_PI_8), // e^{-iπ/8}
            (1, -1) => Complex64::new(COS_PI_8, SIN_PI_8), // e^{+iπ/8}
            (-1, 1) => Complex64::new(SIN_PI_8, -COS_PI_8), // e^{-3iπ/8}
            (-1, -1) => Complex64::new(SIN_PI_8, COS_PI_8), // e^{+3iπ/8}
            _ => unreachable!(),
        }
    }

    /// Orthogonal projection of `z` onto the line: `½(z + η² z̄)`.
    pub fn project(self, z: Complex64) -> Complex64 {
        0.5 * (z + self.eta_squared() * z.conj())
    }

    /// Signed coordinate of the projection along [`Self::direction`].
    pub fn coefficient(self, z: Complex64) -> f64 {
        (self.direction().conj() * z).re
    }
}

/// Orthogonal projection of `z` onto the line spanned by the unit complex
/// number `direction`.
pub fn project_onto(direction: Complex64, z: Complex64) -> Complex64 {
    0.5 * (z + direction * direction * z.conj())
}

/// A medial edge: two medial vertices at distance `δ/√2` around a shared
/// interior lattice vertex, together with the data defining its line.
#[derive(Debug, Clone, Copy)]
pub struct MedialEdge {
    /// Midpoint of one underlying lattice edge.
    pub a: Point,
    /// Midpoint of the other underlying lattice edge.
    pub b: Point,
    /// The shared lattice vertex.
    pub vertex: Point,
    /// The face center of the quadrant between the two edges.
    pub face: Point,
}

impl MedialEdge {
    pub fn line(&self) -> EdgeLine {
        EdgeLine::from_vertices(self.vertex, self.face)
    }
}

/// Classification of a medial vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MedialClass {
    /// Midpoint of an interior edge.
    Interior,
    /// Midpoint of the boundary edge with this index.
    Boundary(usize),
}

/// Induced subgraph of the mesh-δ grid with all derived structure.
#[derive(Debug, Clone)]
pub struct DiscreteDomain {
    mesh: f64,
    region: Option<Region>,
    vertices: BTreeSet<Point>,
    /// Interior edges, identified by their midpoints.
    edges: BTreeSet<Point>,
    /// Boundary edges in canonical order; one entry per edge (multiplicity).
    boundary: Vec<BoundaryEdge>,
    boundary_by_midpoint: BTreeMap<Point, usize>,
    /// Centers of unit-square faces all four corners of which are vertices.
    dual_vertices: BTreeSet<Point>,
    /// Dual boundary edges (inside face center, adjacent outside face center).
    dual_boundary: Vec<BoundaryEdge>,
}

impl DiscreteDomain {
    /// Largest connected induced subgraph of the mesh-δ grid contained in the
    /// region. Ties between maximal components are broken by the
    /// lexicographically smallest vertex.
    pub fn discretize(region: &Region, mesh: f64) -> Result<Self> {
        assert!(mesh > 0.0, "mesh must be positive");
        let (x0, y0, x1, y1) = region.bounds();
        let j0 = (x0 / mesh).floor() as i64 - 1;
        let j1 = (x1 / mesh).ceil() as i64 + 1;
        let k0 = (y0 / mesh).floor() as i64 - 1;
        let k1 = (y1 / mesh).ceil() as i64 + 1;
        let mut inside = BTreeSet::new();
        for j in j0..=j1 {
            for k in k0..=k1 {
                let p = Point::vertex(j, k);
                if region.contains(p.embed(mesh)) {
                    inside.insert(p);
                }
            }
        }
        if inside.is_empty() {
            return Err(Error::EmptyDomain { mesh });
        }
        let component = largest_component(&inside);
        Ok(Self::from_vertices(component, mesh, Some(region.clone())))
    }

    /// Build a domain from an explicit vertex set (doubled coordinates, all
    /// even). The vertex set is used as-is; connectivity is the caller's
    /// choice.
    pub fn from_vertex_set(vertices: impl IntoIterator<Item = Point>, mesh: f64) -> Self {
        let set: BTreeSet<Point> = vertices.into_iter().collect();
        assert!(
            set.iter().all(|p| p.is_vertex()),
            "vertex coordinates must be even"
        );
        Self::from_vertices(set, mesh, None)
    }

    fn from_vertices(vertices: BTreeSet<Point>, mesh: f64, region: Option<Region>) -> Self {
        let mut edges = BTreeSet::new();
        let mut boundary = Vec::new();
        for &v in &vertices {
            debug_assert!(v.is_vertex());
            for (dx, dy) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
                let w = v.offset(dx, dy);
                if vertices.contains(&w) {
                    edges.insert(Point::new((v.x + w.x) / 2, (v.y + w.y) / 2));
                } else {
                    boundary.push(BoundaryEdge {
                        inside: v,
                        outside: w,
                    });
                }
            }
        }
        boundary.sort();
        let boundary_by_midpoint = boundary
            .iter()
            .enumerate()
            .map(|(i, b)| (b.midpoint(), i))
            .collect();

        let mut dual_vertices = BTreeSet::new();
        for &v in &vertices {
            let c = v.offset(1, 1);
            if [(1, 1), (-1, 1), (1, -1), (-1, -1)]
                .iter()
                .all(|&(dx, dy)| vertices.contains(&c.offset(dx, dy)))
            {
                dual_vertices.insert(c);
            }
        }
        let mut dual_boundary = Vec::new();
        for &d in &dual_vertices {
            for (dx, dy) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
                let c = d.offset(dx, dy);
                if !dual_vertices.contains(&c) {
                    dual_boundary.push(BoundaryEdge {
                        inside: d,
                        outside: c,
                    });
                }
            }
        }
        dual_boundary.sort();

        DiscreteDomain {
            mesh,
            region,
            vertices,
            edges,
            boundary,
            boundary_by_midpoint,
            dual_vertices,
            dual_boundary,
        }
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn region(&self) -> Option<&Region> {
        self.region.as_ref()
    }

    pub fn vertices(&self) -> &BTreeSet<Point> {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Interior edges, identified by their midpoints.
    pub fn edge_midpoints(&self) -> &BTreeSet<Point> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, midpoint: Point) -> bool {
        self.edges.contains(&midpoint)
    }

    pub fn horizontal_edges(&self) -> impl Iterator<Item = Point> + '_ {
        self.edges
            .iter()
            .copied()
            .filter(|m| m.is_horizontal_midpoint())
    }

    pub fn vertical_edges(&self) -> impl Iterator<Item = Point> + '_ {
        self.edges
            .iter()
            .copied()
            .filter(|m| m.is_vertical_midpoint())
    }

    /// Boundary entries in canonical order, one per boundary edge.
    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn boundary_index(&self, midpoint: Point) -> Option<usize> {
        self.boundary_by_midpoint.get(&midpoint).copied()
    }

    pub fn dual_vertices(&self) -> &BTreeSet<Point> {
        &self.dual_vertices
    }

    pub fn dual_boundary_edges(&self) -> &[BoundaryEdge] {
        &self.dual_boundary
    }

    /// Dual edges between interior dual vertices, identified by the midpoint
    /// they share with the primal edge they cross.
    pub fn dual_edges(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for &d in &self.dual_vertices {
            for (dx, dy) in [(2, 0), (0, 2)] {
                let c = d.offset(dx, dy);
                if self.dual_vertices.contains(&c) {
                    out.push(Point::new(d.x + dx / 2, d.y + dy / 2));
                }
            }
        }
        out
    }

    /// All medial vertices: midpoints of interior and boundary edges.
    pub fn medial_vertices(&self) -> Vec<Point> {
        let mut out: Vec<Point> = self.edges.iter().copied().collect();
        out.extend(self.boundary.iter().map(|b| b.midpoint()));
        out.sort();
        out
    }

    pub fn classify_medial(&self, m: Point) -> Option<MedialClass> {
        if self.edges.contains(&m) {
            Some(MedialClass::Interior)
        } else {
            self.boundary_index(m).map(MedialClass::Boundary)
        }
    }

    /// The set `∂₀V` of boundary medial vertices.
    pub fn boundary_medial_vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.boundary.iter().map(|b| b.midpoint())
    }

    /// Unit outward normal at a boundary medial vertex.
    pub fn outward_normal(&self, m: Point) -> Option<Complex64> {
        self.boundary_index(m)
            .map(|i| self.boundary[i].outward_normal())
    }

    /// Medial edges: the four diamond sides around each interior vertex,
    /// in a fixed deterministic order.
    pub fn medial_edges(&self) -> Vec<MedialEdge> {
        let mut out = Vec::with_capacity(4 * self.vertices.len());
        for &v in &self.vertices {
            // Quadrants NE, NW, SW, SE; each joins the midpoints of the two
            // incident edges bordering that quadrant.
            for (qx, qy) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
                out.push(MedialEdge {
                    a: v.offset(qx, 0),
                    b: v.offset(0, qy),
                    vertex: v,
                    face: v.offset(qx, qy),
                });
            }
        }
        out
    }

    /// Line `ℓ(e)` of the medial edge joining the midpoints `a` and `b`
    /// (which must be at distance `δ/√2`).
    pub fn edge_line(&self, a: Point, b: Point) -> EdgeLine {
        edge_line(a, b)
    }

    /// Midpoint of the horizontal edge closest to `z`; ties broken by the
    /// smallest real part, then the smallest imaginary part.
    pub fn nearest_horizontal_midpoint(&self, z: Complex64) -> Result<Point> {
        let target = z * (2.0 / self.mesh);
        let mut best: Option<(f64, Point)> = None;
        for m in self.horizontal_edges() {
            let dx = m.x as f64 - target.re;
            let dy = m.y as f64 - target.im;
            let d2 = dx * dx + dy * dy;
            let better = match best {
                None => true,
                Some((bd, bm)) => d2 < bd || (d2 == bd && (m.x, m.y) < (bm.x, bm.y)),
            };
            if better {
                best = Some((d2, m));
            }
        }
        best.map(|(_, m)| m).ok_or(Error::NoHorizontalEdge)
    }

    /// Serialize to the versioned JSON document format.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<[i64; 2]> = self.vertices.iter().map(|p| [p.x / 2, p.y / 2]).collect();
        serde_json::json!({
            "format": "ising-energy-domain",
            "version": 1,
            "mesh": self.mesh,
            "region": self.region,
            "vertices": vertices,
        })
    }

    /// Reload a domain from its JSON document; all derived structures are
    /// recomputed.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let fmt = value["format"].as_str().unwrap_or_default();
        if fmt != "ising-energy-domain" {
            return Err(Error::BadDomainFile(format!("unknown format {fmt:?}")));
        }
        if value["version"].as_i64() != Some(1) {
            return Err(Error::BadDomainFile("unsupported version".into()));
        }
        let mesh = value["mesh"]
            .as_f64()
            .ok_or_else(|| Error::BadDomainFile("missing mesh".into()))?;
        let region: Option<Region> = match value.get("region") {
            Some(serde_json::Value::Null) | None => None,
            Some(r) => Some(serde_json::from_value(r.clone())?),
        };
        let vertices: Vec<[i64; 2]> = serde_json::from_value(value["vertices"].clone())?;
        let set: BTreeSet<Point> = vertices
            .into_iter()
            .map(|[j, k]| Point::vertex(j, k))
            .collect();
        if set.is_empty() {
            return Err(Error::EmptyDomain { mesh });
        }
        Ok(Self::from_vertices(set, mesh, region))
    }

    /// Number of bounded faces by Euler's formula (connected domains).
    pub fn euler_bounded_faces(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }
}

/// Line of the medial edge joining midpoints `a` and `b` on the full-plane
/// grid; independent of any domain.
pub fn edge_line(a: Point, b: Point) -> EdgeLine {
    debug_assert!(a.is_edge_midpoint() && b.is_edge_midpoint());
    let (h, v) = if a.is_horizontal_midpoint() {
        (a, b)
    } else {
        (b, a)
    };
    debug_assert!(h.is_horizontal_midpoint() && v.is_vertical_midpoint());
    debug_assert!((h.x - v.x).abs() == 1 && (h.y - v.y).abs() == 1);
    // Shared lattice vertex and quadrant face center.
    let vertex = Point::new(v.x, h.y);
    let face = Point::new(h.x, v.y);
    EdgeLine::from_vertices(vertex, face)
}

fn largest_component(vertices: &BTreeSet<Point>) -> BTreeSet<Point> {
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut best: BTreeSet<Point> = BTreeSet::new();
    for &start in vertices {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        comp.insert(start);
        while let Some(v) = queue.pop_front() {
            for (dx, dy) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
                let w = v.offset(dx, dy);
                if vertices.contains(&w) && comp.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.extend(comp.iter().copied());
        // Larger component wins; equal sizes fall back to the smaller
        // lexicographic minimum, which is the iteration order here.
        if comp.len() > best.len() {
            best = comp;
        }
    }
    best
}
