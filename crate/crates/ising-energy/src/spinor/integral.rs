//! Discrete antiderivative of `-Re ∫ f²` for s-holomorphic fields.
//!
//! The integral lives on primal and dual vertices together with their
//! multiplicity-aware boundary entries. Its defining increment across each
//! medial edge between a primal vertex `b` and an adjacent dual vertex `w` is
//! `I(b) - I(w) = √2 δ |P_{ℓ(e)}[f]|²`; between adjacent same-sublattice
//! vertices it satisfies `I(y) - I(x) = -Re(f(m)² (y - x))` with `m` the
//! midpoint. On simply connected domains the increments are consistent and
//! the function single-valued; `I•` (primal) is discrete subharmonic and `I°`
//! (dual) superharmonic, except at the four points adjacent to a spinor
//! source.

use std::collections::{BTreeMap, VecDeque};

use num_complex::Complex64;

use crate::lattice::{DiscreteDomain, Point};
use crate::{Error, Result};

use super::SpinorField;

/// Node of the integral's domain: interior vertices and per-edge boundary
/// entries on both sublattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Primal(Point),
    Dual(Point),
    PrimalBoundary(usize),
    DualBoundary(usize),
}

/// The discrete integral `I_{x₀,δ}[f]`.
#[derive(Debug, Clone)]
pub struct DiscreteIntegral {
    base: Node,
    values: BTreeMap<Node, f64>,
    /// Largest inconsistency among redundant increments encountered while
    /// propagating.
    pub consistency: f64,
}

impl DiscreteIntegral {
    pub fn value(&self, node: Node) -> Option<f64> {
        self.values.get(&node).copied()
    }

    pub fn base(&self) -> Node {
        self.base
    }

    /// `I•`: restriction to primal vertices (interior only).
    pub fn primal(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        self.values.iter().filter_map(|(n, &v)| match n {
            Node::Primal(p) => Some((*p, v)),
            _ => None,
        })
    }

    /// `I°`: restriction to dual vertices (interior only).
    pub fn dual(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        self.values.iter().filter_map(|(n, &v)| match n {
            Node::Dual(p) => Some((*p, v)),
            _ => None,
        })
    }

    /// Values on the dual boundary entries.
    pub fn dual_boundary_values(&self, domain: &DiscreteDomain) -> Vec<f64> {
        (0..domain.dual_boundary_edges().len())
            .filter_map(|i| self.value(Node::DualBoundary(i)))
            .collect()
    }

    /// Five-point Laplacian of `I•` at an interior primal vertex, resolving
    /// outside neighbors through their boundary-edge entries.
    pub fn laplacian_primal(&self, domain: &DiscreteDomain, v: Point) -> Result<f64> {
        let mut acc = -4.0 * self.value(Node::Primal(v)).ok_or_else(missing(v))?;
        for (dx, dy) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
            let n = v.offset(dx, dy);
            let val = if domain.vertices().contains(&n) {
                self.value(Node::Primal(n))
            } else {
                let mid = Point::new((v.x + n.x) / 2, (v.y + n.y) / 2);
                domain
                    .boundary_index(mid)
                    .and_then(|i| self.value(Node::PrimalBoundary(i)))
            };
            acc += val.ok_or_else(missing(n))?;
        }
        Ok(acc)
    }

    /// Five-point Laplacian of `I°` at an interior dual vertex.
    pub fn laplacian_dual(&self, domain: &DiscreteDomain, v: Point) -> Result<f64> {
        let mut acc = -4.0 * self.value(Node::Dual(v)).ok_or_else(missing(v))?;
        let dual_entry: BTreeMap<(Point, Point), usize> = domain
            .dual_boundary_edges()
            .iter()
            .enumerate()
            .map(|(i, b)| ((b.inside, b.outside), i))
            .collect();
        for (dx, dy) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
            let n = v.offset(dx, dy);
            let val = if domain.dual_vertices().contains(&n) {
                self.value(Node::Dual(n))
            } else {
                dual_entry
                    .get(&(v, n))
                    .and_then(|&i| self.value(Node::DualBoundary(i)))
            };
            acc += val.ok_or_else(missing(n))?;
        }
        Ok(acc)
    }
}

fn missing(p: Point) -> impl FnOnce() -> Error {
    move || Error::MissingNeighbor(p.to_string())
}

/// Build the discrete integral of `f²` by breadth-first propagation from the
/// base vertex, verifying consistency of every redundant increment.
pub fn discrete_integral(
    domain: &DiscreteDomain,
    field: &SpinorField,
    base: Point,
) -> Result<DiscreteIntegral> {
    discrete_integral_tol(domain, field, base, 1e-9)
}

pub fn discrete_integral_tol(
    domain: &DiscreteDomain,
    field: &SpinorField,
    base: Point,
    tol: f64,
) -> Result<DiscreteIntegral> {
    let delta = domain.mesh();
    let source = field.source();
    let singular = field.singular_at_source();
    let value_at = |m: Point| -> Option<Complex64> { field.value(m) };

    // Increment I(to) - I(from) across one adjacency, if defined.
    let mut edges: Vec<(Node, Node, f64)> = Vec::new();

    // Diagonal rule: primal b ↔ dual w with the medial edge between them.
    for &b in domain.vertices() {
        for (sx, sy) in [(1i64, 1i64), (-1, 1), (-1, -1), (1, -1)] {
            let w = b.offset(sx, sy);
            if !domain.dual_vertices().contains(&w) {
                continue;
            }
            let m1 = Point::new(w.x, b.y); // horizontal-edge midpoint at b
            let m2 = Point::new(b.x, w.y); // vertical-edge midpoint at b
            let line = crate::lattice::edge_line(m1, m2);
            let f1 = value_at(m1).ok_or_else(missing(m1))?;
            let f2 = value_at(m2).ok_or_else(missing(m2))?;
            let proj = if singular && m1 == source {
                line.project(f2)
            } else if singular && m2 == source {
                line.project(f1)
            } else {
                0.5 * (line.project(f1) + line.project(f2))
            };
            let inc = std::f64::consts::SQRT_2 * delta * proj.norm_sqr();
            // I(b) - I(w) = inc
            edges.push((Node::Dual(w), Node::Primal(b), inc));
        }
    }

    // Same-sublattice rule along interior edges and dual edges:
    // I(y) - I(x) = -Re(f(m)² (y - x)). The rule is derived from the two
    // diagonal increments through s-holomorphicity, so it does not apply
    // across the source midpoint of a singular field.
    for &m in domain.edge_midpoints() {
        if singular && m == source {
            continue;
        }
        let [x, y] = m.edge_endpoints();
        let f = value_at(m).ok_or_else(missing(m))?;
        let step = (y.embed(delta)) - (x.embed(delta));
        let inc = -(f * f * step).re;
        edges.push((Node::Primal(x), Node::Primal(y), inc));
    }
    for m in domain.dual_edges() {
        if singular && m == source {
            continue;
        }
        // Dual edge crossing the primal edge with midpoint m.
        let (x, y) = if m.is_horizontal_midpoint() {
            (m.offset(0, -1), m.offset(0, 1))
        } else {
            (m.offset(-1, 0), m.offset(1, 0))
        };
        let f = value_at(m).ok_or_else(missing(m))?;
        let step = (y.embed(delta)) - (x.embed(delta));
        let inc = -(f * f * step).re;
        edges.push((Node::Dual(x), Node::Dual(y), inc));
    }

    // Boundary extensions on both sublattices.
    for (i, b) in domain.boundary_edges().iter().enumerate() {
        let m = b.midpoint();
        let f = value_at(m).ok_or_else(missing(m))?;
        let step = b.outside.embed(delta) - b.inside.embed(delta);
        let inc = -(f * f * step).re;
        edges.push((Node::Primal(b.inside), Node::PrimalBoundary(i), inc));
    }
    for (i, b) in domain.dual_boundary_edges().iter().enumerate() {
        let m = Point::new(
            (b.inside.x + b.outside.x) / 2,
            (b.inside.y + b.outside.y) / 2,
        );
        let f = value_at(m).ok_or_else(missing(m))?;
        let step = b.outside.embed(delta) - b.inside.embed(delta);
        let inc = -(f * f * step).re;
        edges.push((Node::Dual(b.inside), Node::DualBoundary(i), inc));
    }

    // Adjacency list with signed increments.
    let mut adj: BTreeMap<Node, Vec<(Node, f64)>> = BTreeMap::new();
    for &(from, to, inc) in &edges {
        adj.entry(from).or_default().push((to, inc));
        adj.entry(to).or_default().push((from, -inc));
    }

    let base_node = if domain.vertices().contains(&base) {
        Node::Primal(base)
    } else if domain.dual_vertices().contains(&base) {
        Node::Dual(base)
    } else {
        return Err(Error::PointOutsideDomain(base.to_string()));
    };

    let mut values: BTreeMap<Node, f64> = BTreeMap::new();
    values.insert(base_node, 0.0);
    let mut queue = VecDeque::from([base_node]);
    while let Some(node) = queue.pop_front() {
        let v = values[&node];
        if let Some(neighbors) = adj.get(&node) {
            for &(next, inc) in neighbors {
                if let std::collections::btree_map::Entry::Vacant(e) = values.entry(next) {
                    e.insert(v + inc);
                    queue.push_back(next);
                }
            }
        }
    }

    // Every increment is now redundant-checked against the assigned values.
    let mut consistency: f64 = 0.0;
    for &(from, to, inc) in &edges {
        if let (Some(&vf), Some(&vt)) = (values.get(&from), values.get(&to)) {
            consistency = consistency.max((vt - vf - inc).abs());
        }
    }
    if consistency > tol {
        return Err(Error::IntegralInconsistent(consistency));
    }
    Ok(DiscreteIntegral {
        base: base_node,
        values,
        consistency,
    })
}

/// Report of the sub/superharmonicity and boundary-derivative checks.
#[derive(Debug, Clone)]
pub struct SubSuperReport {
    /// Interior primal vertices (outside the excluded set) where
    /// `Δ_δ I• < -tol`.
    pub primal_violations: Vec<Point>,
    /// Interior dual vertices (outside the excluded set) where
    /// `Δ_δ I° > tol`.
    pub dual_violations: Vec<Point>,
    /// Worst defect among the excluded source-adjacent points (informative).
    pub source_defect: f64,
    /// Max |∂_ν I• - (Im(fν^{1/2})² - Re(fν^{1/2})²)| over boundary entries.
    pub normal_identity_residual: f64,
    /// Max |∂_ν I• + |f(m)|²| over boundary entries (uses the spinor
    /// boundary condition).
    pub spinor_normal_residual: f64,
    /// Spread max - min of I° over the dual boundary entries.
    pub dual_boundary_spread: f64,
}

impl SubSuperReport {
    pub fn clean(&self) -> bool {
        self.primal_violations.is_empty() && self.dual_violations.is_empty()
    }
}

/// Verify discrete subharmonicity of `I•`, superharmonicity of `I°`, and the
/// boundary normal-derivative identities. When the field is singular at its
/// source, the four adjacent points `a ± δ/2`, `a ± iδ/2` are excluded.
pub fn check_sub_super(
    domain: &DiscreteDomain,
    field: &SpinorField,
    integral: &DiscreteIntegral,
    tol: f64,
) -> Result<SubSuperReport> {
    let a = field.source();
    let excluded_primal = if field.singular_at_source() {
        vec![a.offset(1, 0), a.offset(-1, 0)]
    } else {
        vec![]
    };
    let excluded_dual = if field.singular_at_source() {
        vec![a.offset(0, 1), a.offset(0, -1)]
    } else {
        vec![]
    };

    let mut primal_violations = Vec::new();
    let mut source_defect: f64 = 0.0;
    for &v in domain.vertices() {
        let lap = match integral.laplacian_primal(domain, v) {
            Ok(l) => l,
            Err(_) => continue,
        };
        if excluded_primal.contains(&v) {
            source_defect = source_defect.max((-lap).max(0.0));
            continue;
        }
        if lap < -tol {
            primal_violations.push(v);
        }
    }
    let mut dual_violations = Vec::new();
    for &v in domain.dual_vertices() {
        let lap = match integral.laplacian_dual(domain, v) {
            Ok(l) => l,
            Err(_) => continue,
        };
        if excluded_dual.contains(&v) {
            source_defect = source_defect.max(lap.max(0.0));
            continue;
        }
        if lap > tol {
            dual_violations.push(v);
        }
    }

    let delta = domain.mesh();
    let mut normal_identity_residual: f64 = 0.0;
    let mut spinor_normal_residual: f64 = 0.0;
    for (i, b) in domain.boundary_edges().iter().enumerate() {
        let m = b.midpoint();
        let f = field.value(m).ok_or_else(missing(m))?;
        let inside = integral
            .value(Node::Primal(b.inside))
            .ok_or_else(missing(b.inside))?;
        let outside = integral
            .value(Node::PrimalBoundary(i))
            .ok_or_else(|| Error::MissingNeighbor(format!("boundary entry {i}")))?;
        let normal_derivative = (outside - inside) / delta;
        let fnu = f * b.outward_normal().sqrt();
        let identity = fnu.im * fnu.im - fnu.re * fnu.re;
        normal_identity_residual =
            normal_identity_residual.max((normal_derivative - identity).abs());
        spinor_normal_residual =
            spinor_normal_residual.max((normal_derivative + f.norm_sqr()).abs());
    }

    let db = integral.dual_boundary_values(domain);
    let dual_boundary_spread = match (
        db.iter().cloned().reduce(f64::max),
        db.iter().cloned().reduce(f64::min),
    ) {
        (Some(max), Some(min)) => max - min,
        _ => 0.0,
    };

    Ok(SubSuperReport {
        primal_violations,
        dual_violations,
        source_defect,
        normal_identity_residual,
        spinor_normal_residual,
        dual_boundary_spread,
    })
}
