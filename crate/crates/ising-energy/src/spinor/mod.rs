//! The discrete Riemann boundary value problem for the fermionic spinor.
//!
//! `f(a, ·)` is characterized on the medial vertices by three ingredients:
//! s-holomorphicity (equal projections onto `ℓ(e)` at the two ends of every
//! medial edge), the boundary condition `Im(f ν_out^{1/2}) = 0`, and four
//! singularity relations at the source `a`, two of which carry the only
//! inhomogeneity. Boundary unknowns are parameterized as `t·ν_out^{-1/2}`
//! with real `t`, which makes the boundary condition structural; the result
//! is a square real system with one equation per medial edge and `4|V|`
//! unknowns, solved through the normal equations with a sparse LDLᵀ
//! factorization and checked against the enumeration oracle.

pub mod integral;

use std::collections::BTreeMap;

use num_complex::Complex64;
use sprs::{CsMat, TriMat};
use sprs_ldl::Ldl;

use crate::coupling::{full_plane_spinor_displacement, CouplingEvaluator};
use crate::lattice::{DiscreteDomain, Point};
use crate::{Error, Result, FULL_PLANE_DIAGONAL};

/// Default max-norm residual tolerance for the linear solve.
pub const SOLVE_TOLERANCE: f64 = 1e-9;

/// Unknown layout of the assembled system.
#[derive(Debug, Clone)]
enum Slot {
    /// Two real unknowns (re, im) starting at this column.
    Interior(usize),
    /// One real unknown `t` at this column; `f = t · ν_out^{-1/2}`.
    Boundary(usize, Complex64),
}

/// Sparse real least-squares system for the spinor.
pub struct LinearSystem {
    pub rows: usize,
    pub cols: usize,
    triplets: Vec<(usize, usize, f64)>,
    rhs: Vec<f64>,
    slots: BTreeMap<Point, Slot>,
    source: Point,
}

impl LinearSystem {
    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }
}

/// Solved spinor: one complex value per medial vertex, including the source.
#[derive(Debug, Clone)]
pub struct SpinorField {
    values: BTreeMap<Point, Complex64>,
    source: Point,
    mesh: f64,
    residual: f64,
    /// Whether the field carries the discrete singularity at the source
    /// (false for the difference with the full-plane spinor).
    singular_at_source: bool,
}

impl SpinorField {
    pub fn source(&self) -> Point {
        self.source
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Max-norm residual of the defining equations at the solution.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn singular_at_source(&self) -> bool {
        self.singular_at_source
    }

    pub fn value(&self, m: Point) -> Option<Complex64> {
        self.values.get(&m).copied()
    }

    pub fn values(&self) -> &BTreeMap<Point, Complex64> {
        &self.values
    }

    /// `f(a, a)`.
    pub fn source_value(&self) -> Complex64 {
        self.values[&self.source]
    }

    /// Build a field directly from values (used for oracle fields in tests).
    pub fn from_values(
        values: BTreeMap<Point, Complex64>,
        source: Point,
        mesh: f64,
        singular_at_source: bool,
    ) -> Self {
        SpinorField {
            values,
            source,
            mesh,
            residual: 0.0,
            singular_at_source,
        }
    }

    /// Average energy density `(⟨ε⟩⁺, ⟨ε⟩^free) = (2(f - f_C)(a,a), -2(f - f_C)(a,a))`.
    ///
    /// The full-plane spinor equals `(2+√2)/4` at its source, so only the
    /// diagonal value of this field enters.
    pub fn energy_density(&self) -> (f64, f64) {
        let plus = 2.0 * (self.source_value().re - FULL_PLANE_DIAGONAL);
        (plus, -plus)
    }

    /// Max s-holomorphicity defect over medial edges, excluding the four
    /// incident to the source when the field is singular there.
    pub fn s_holomorphicity_residual(&self, domain: &DiscreteDomain) -> f64 {
        let mut worst: f64 = 0.0;
        for me in domain.medial_edges() {
            if self.singular_at_source && (me.a == self.source || me.b == self.source) {
                continue;
            }
            if let (Some(fa), Some(fb)) = (self.value(me.a), self.value(me.b)) {
                let line = me.line();
                worst = worst.max((line.project(fa) - line.project(fb)).norm());
            }
        }
        worst
    }

    /// Max residual of the four singularity relations at the source.
    pub fn singularity_residual(&self) -> f64 {
        let a = self.source;
        let faa = self.source_value();
        let mut worst: f64 = 0.0;
        for (dx, dy) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
            let neighbor = a.offset(dx, dy);
            let line = crate::lattice::edge_line(a, neighbor);
            let reference = if dx > 0 {
                faa
            } else {
                faa - Complex64::new(1.0, 0.0)
            };
            if let Some(fx) = self.value(neighbor) {
                worst = worst.max((line.project(reference) - line.project(fx)).norm());
            }
        }
        worst
    }

    /// Max of `|Im(f(m) ν_out^{1/2}(m))|` over boundary medial vertices.
    pub fn boundary_residual(&self, domain: &DiscreteDomain) -> f64 {
        let mut worst: f64 = 0.0;
        for b in domain.boundary_edges() {
            let m = b.midpoint();
            if let Some(f) = self.value(m) {
                worst = worst.max((f * b.outward_normal().sqrt()).im.abs());
            }
        }
        worst
    }
}

/// Assemble the boundary value problem for the spinor with source `a`
/// (midpoint of an interior horizontal edge).
pub fn assemble_bvp(domain: &DiscreteDomain, a: Point) -> Result<LinearSystem> {
    if !a.is_horizontal_midpoint() || !domain.has_edge(a) {
        return Err(Error::NotInteriorHorizontalMidpoint(a.to_string()));
    }
    // Unknown layout in deterministic medial-vertex order.
    let mut slots = BTreeMap::new();
    let mut col = 0usize;
    for m in domain.medial_vertices() {
        if domain.has_edge(m) {
            slots.insert(m, Slot::Interior(col));
            col += 2;
        } else {
            let i = domain
                .boundary_index(m)
                .expect("medial vertex is interior or boundary");
            let nu = domain.boundary_edges()[i].outward_normal();
            // Principal branch of ν^{1/2}; the constraint is sign-invariant.
            let w = nu.sqrt().inv();
            slots.insert(m, Slot::Boundary(col, w));
            col += 1;
        }
    }

    let medial_edges = domain.medial_edges();
    let mut triplets = Vec::with_capacity(4 * medial_edges.len());
    let mut rhs = Vec::with_capacity(medial_edges.len());

    let push = |triplets: &mut Vec<(usize, usize, f64)>,
                row: usize,
                m: Point,
                coeff: Complex64,
                slots: &BTreeMap<Point, Slot>| {
        // Contribution coeff·f(m) to the real equation Re(Σ ...) = rhs.
        match slots[&m] {
            Slot::Interior(c) => {
                triplets.push((row, c, coeff.re));
                triplets.push((row, c + 1, -coeff.im));
            }
            Slot::Boundary(c, w) => {
                triplets.push((row, c, (coeff * w).re));
            }
        }
    };

    for (row, me) in medial_edges.iter().enumerate() {
        let eta_bar = me.line().direction().conj();
        let (first, second) = if me.b == a {
            (me.b, me.a)
        } else {
            (me.a, me.b)
        };
        // Singularity rows: the two west relations compare against f(a,a) - 1,
        // which moves Re(η̄·1) to the right-hand side; the east relations and
        // all ordinary s-holomorphicity rows are homogeneous.
        let b = if first == a && second.x < a.x {
            eta_bar.re
        } else {
            0.0
        };
        push(&mut triplets, row, first, eta_bar, &slots);
        push(&mut triplets, row, second, -eta_bar, &slots);
        rhs.push(b);
    }

    Ok(LinearSystem {
        rows: medial_edges.len(),
        cols: col,
        triplets,
        rhs,
        slots,
        source: a,
    })
}

/// Solve the assembled system by LDLᵀ on the normal equations with one step
/// of iterative refinement; deterministic for a fixed domain and source.
pub fn solve_system(domain: &DiscreteDomain, system: &LinearSystem) -> Result<SpinorField> {
    solve_system_tol(domain, system, SOLVE_TOLERANCE)
}

pub fn solve_system_tol(
    domain: &DiscreteDomain,
    system: &LinearSystem,
    tol: f64,
) -> Result<SpinorField> {
    let mut tri = TriMat::new((system.rows, system.cols));
    for &(r, c, v) in &system.triplets {
        tri.add_triplet(r, c, v);
    }
    let a: CsMat<f64> = tri.to_csr();
    let at = a.transpose_view().to_csr();
    let normal = &at * &a;
    let atb = mat_vec(&at, &system.rhs);

    let ldl = Ldl::new()
        .check_symmetry(sprs::SymmetryCheck::DontCheckSymmetry)
        .fill_in_reduction(sprs::FillInReduction::ReverseCuthillMcKee)
        .numeric(normal.view())
        .map_err(|e| Error::Linalg(format!("LDLT factorization failed: {e:?}")))?;
    let mut x = ldl.solve(&atb);
    // One step of iterative refinement on the normal equations.
    let r = sub(&atb, &mat_vec(&normal, &x));
    let dx = ldl.solve(&r);
    for i in 0..x.len() {
        x[i] += dx[i];
    }

    let residual = {
        let ax = mat_vec(&a, &x);
        system
            .rhs
            .iter()
            .zip(ax.iter())
            .map(|(b, y)| (b - y).abs())
            .fold(0.0f64, f64::max)
    };
    if !residual.is_finite() || residual > tol {
        return Err(Error::SolverDegenerate {
            residual,
            tolerance: tol,
        });
    }

    let mut values = BTreeMap::new();
    for (&m, slot) in &system.slots {
        let f = match *slot {
            Slot::Interior(c) => Complex64::new(x[c], x[c + 1]),
            Slot::Boundary(c, w) => x[c] * w,
        };
        values.insert(m, f);
    }
    Ok(SpinorField {
        values,
        source: system.source,
        mesh: domain.mesh(),
        residual,
        singular_at_source: true,
    })
}

/// Assemble and solve the spinor BVP.
pub fn solve_spinor(domain: &DiscreteDomain, a: Point) -> Result<SpinorField> {
    let system = assemble_bvp(domain, a)?;
    solve_system(domain, &system)
}

/// `f_Ω - f_C` pointwise on all medial vertices; s-holomorphic everywhere,
/// including across the four medial edges at the source.
pub fn difference_spinor(
    domain: &DiscreteDomain,
    a: Point,
    eval: &CouplingEvaluator,
) -> Result<SpinorField> {
    let solved = solve_spinor(domain, a)?;
    difference_from_solved(&solved, eval)
}

/// Subtract the full-plane spinor from an already-solved field.
pub fn difference_from_solved(
    solved: &SpinorField,
    eval: &CouplingEvaluator,
) -> Result<SpinorField> {
    let a = solved.source;
    let mut values = BTreeMap::new();
    for (&m, &f) in &solved.values {
        let fp = full_plane_spinor_displacement(eval, m.x - a.x, m.y - a.y)?;
        values.insert(m, f - fp);
    }
    Ok(SpinorField {
        values,
        source: a,
        mesh: solved.mesh,
        residual: solved.residual,
        singular_at_source: false,
    })
}

/// Energy density `(plus, free)` of the domain at source `a`, through the
/// solved spinor.
pub fn energy_density(domain: &DiscreteDomain, a: Point) -> Result<(f64, f64)> {
    Ok(solve_spinor(domain, a)?.energy_density())
}

// ---------------------------------------------------------------------------
// discrete differential operators
// ---------------------------------------------------------------------------

/// `∂̄_δ f(v) = f(v+δ/2) - f(v-δ/2) + i(f(v+iδ/2) - f(v-iδ/2))` at a lattice
/// vertex or face center `v`, from values on the four adjacent midpoints.
pub fn dbar(values: &BTreeMap<Point, Complex64>, v: Point) -> Result<Complex64> {
    let get = |p: Point| {
        values
            .get(&p)
            .copied()
            .ok_or_else(|| Error::MissingNeighbor(p.to_string()))
    };
    let east = get(v.offset(1, 0))?;
    let west = get(v.offset(-1, 0))?;
    let north = get(v.offset(0, 1))?;
    let south = get(v.offset(0, -1))?;
    Ok(east - west + Complex64::i() * (north - south))
}

/// Five-point Laplacian
/// `Δ_δ f(v) = f(v+δ) + f(v+iδ) + f(v-δ) + f(v-iδ) - 4 f(v)` of a scalar
/// field on one sublattice. Outside neighbors of a boundary-adjacent vertex
/// are resolved per edge: the value looked up is the one attached to the
/// boundary entry of the edge `⟨v, n⟩`, supplied by `boundary_value`.
pub fn laplacian(
    domain: &DiscreteDomain,
    values: &BTreeMap<Point, f64>,
    boundary_value: impl Fn(usize) -> Option<f64>,
    v: Point,
) -> Result<f64> {
    let mut acc = -4.0
        * values
            .get(&v)
            .copied()
            .ok_or_else(|| Error::MissingNeighbor(v.to_string()))?;
    for (dx, dy) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
        let n = v.offset(dx, dy);
        let val = match values.get(&n) {
            Some(&x) => Some(x),
            None => {
                let mid = Point::new((v.x + n.x) / 2, (v.y + n.y) / 2);
                domain.boundary_index(mid).and_then(&boundary_value)
            }
        };
        acc += val.ok_or_else(|| Error::MissingNeighbor(n.to_string()))?;
    }
    Ok(acc)
}

/// `Σ (f(v_i)+f(v_{i+1}))/2 · (v_{i+1}-v_i)` around a closed medial contour.
pub fn contour_sum(
    values: &BTreeMap<Point, Complex64>,
    contour: &[Point],
    mesh: f64,
) -> Result<Complex64> {
    if contour.len() < 4 {
        return Err(Error::NotClosedContour);
    }
    // Simple loop: no medial vertex visited twice.
    let distinct: std::collections::BTreeSet<&Point> = contour.iter().collect();
    if distinct.len() != contour.len() {
        return Err(Error::NotClosedContour);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..contour.len() {
        let p = contour[i];
        let q = contour[(i + 1) % contour.len()];
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        if dx.abs() != 1 || dy.abs() != 1 {
            return Err(Error::NotClosedContour);
        }
        let fp = values
            .get(&p)
            .ok_or_else(|| Error::MissingNeighbor(p.to_string()))?;
        let fq = values
            .get(&q)
            .ok_or_else(|| Error::MissingNeighbor(q.to_string()))?;
        let step = Complex64::new(dx as f64, dy as f64) * (mesh / 2.0);
        sum += 0.5 * (fp + fq) * step;
    }
    Ok(sum)
}

/// Counterclockwise diamond contour of L1-radius `r` around `center`
/// (a lattice vertex or face center; `r` must be odd so the corners land on
/// medial vertices).
pub fn diamond_contour(center: Point, r: i64) -> Vec<Point> {
    assert!(r >= 1 && r % 2 == 1, "diamond radius must be odd");
    let mut pts = Vec::with_capacity(4 * r as usize);
    let c = center;
    for k in 0..r {
        pts.push(c.offset(r - k, k));
    }
    for k in 0..r {
        pts.push(c.offset(-k, r - k));
    }
    for k in 0..r {
        pts.push(c.offset(-(r - k), -k));
    }
    for k in 0..r {
        pts.push(c.offset(k, -(r - k)));
    }
    pts
}

// ---------------------------------------------------------------------------
// small linear algebra helpers
// ---------------------------------------------------------------------------

fn mat_vec(m: &CsMat<f64>, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.rows()];
    for (row, vec) in m.outer_iterator().enumerate() {
        let mut acc = 0.0;
        for (col, &val) in vec.iter() {
            acc += val * v[col];
        }
        out[row] = acc;
    }
    out
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contours;
    use crate::lattice::Region;
    use approx::assert_abs_diff_eq;

    fn unit_cell() -> DiscreteDomain {
        DiscreteDomain::from_vertex_set(
            [(1, 1), (2, 1), (1, 2), (2, 2)].map(|(j, k)| Point::vertex(j, k)),
            1.0,
        )
    }

    fn block_2x3() -> DiscreteDomain {
        DiscreteDomain::from_vertex_set(
            (0..3).flat_map(|j| (0..2).map(move |k| Point::vertex(j, k))),
            1.0,
        )
    }

    fn staircase() -> DiscreteDomain {
        DiscreteDomain::from_vertex_set(
            [(0, 0), (1, 0), (1, 1), (2, 1)].map(|(j, k)| Point::vertex(j, k)),
            1.0,
        )
    }

    #[test]
    fn system_is_square_with_one_row_per_medial_edge() {
        for dom in [unit_cell(), block_2x3(), staircase()] {
            let a = dom
                .nearest_horizontal_midpoint(Complex64::new(0.5, 0.0))
                .unwrap();
            let sys = assemble_bvp(&dom, a).unwrap();
            assert_eq!(sys.rows, 4 * dom.vertex_count());
            assert_eq!(sys.cols, sys.rows);
        }
    }

    #[test]
    fn source_must_be_interior_horizontal() {
        let dom = unit_cell();
        // A vertical edge midpoint.
        let vertical = dom.vertical_edges().next().unwrap();
        assert!(matches!(
            assemble_bvp(&dom, vertical),
            Err(Error::NotInteriorHorizontalMidpoint(_))
        ));
        // A boundary edge midpoint.
        let b = dom.boundary_edges()[0].midpoint();
        assert!(matches!(
            assemble_bvp(&dom, b),
            Err(Error::NotInteriorHorizontalMidpoint(_))
        ));
    }

    #[test]
    fn unit_cell_solution_matches_oracle_everywhere() {
        let dom = unit_cell();
        let a = Point::new(3, 2);
        let field = solve_spinor(&dom, a).unwrap();
        assert!(field.residual() < 1e-12);
        assert_abs_diff_eq!(
            field.source_value().re,
            1.0 / (1.0 + crate::ALPHA.powi(4)),
            epsilon = 1e-12
        );
        for m in dom.medial_vertices() {
            let oracle = contours::oracle_spinor(&dom, a, m).unwrap();
            let solved = field.value(m).unwrap();
            assert!(
                (oracle - solved).norm() < 1e-12,
                "mismatch at {m}: {oracle} vs {solved}"
            );
        }
    }

    #[test]
    fn staircase_solution_matches_oracle() {
        let dom = staircase();
        let a = Point::new(1, 0);
        let field = solve_spinor(&dom, a).unwrap();
        for m in dom.medial_vertices() {
            let oracle = contours::oracle_spinor(&dom, a, m).unwrap();
            assert!((oracle - field.value(m).unwrap()).norm() < 1e-11);
        }
    }

    #[test]
    fn boundary_values_have_real_phase() {
        let dom = block_2x3();
        let a = Point::new(1, 0);
        let field = solve_spinor(&dom, a).unwrap();
        assert!(field.boundary_residual(&dom) < 1e-15);
        assert!(field.s_holomorphicity_residual(&dom) < 1e-12);
        assert!(field.singularity_residual() < 1e-12);
    }

    #[test]
    fn source_value_in_unit_interval() {
        // f(a,a) = Z⁺/Z ∈ (0, 1]; strictly below 1 whenever some contour
        // uses the source edge (Z⁻ > 0).
        for dom in [unit_cell(), block_2x3(), staircase()] {
            let a = dom.horizontal_edges().next().unwrap();
            let field = solve_spinor(&dom, a).unwrap();
            let faa = field.source_value();
            assert!(faa.im.abs() < 1e-12);
            let (_, _, zm) = contours::partition_functions(&dom, a).unwrap();
            assert!(faa.re > 0.0, "f(a,a) = {faa}");
            if zm > 0.0 {
                assert!(faa.re < 1.0, "f(a,a) = {faa}");
            } else {
                assert!(faa.re <= 1.0 + 1e-12, "f(a,a) = {faa}");
            }
        }
    }

    #[test]
    fn energy_density_matches_oracle_identity() {
        let dom = unit_cell();
        let a = Point::new(3, 2);
        let (plus, free) = energy_density(&dom, a).unwrap();
        let exact = contours::oracle_energy_plus(&dom, a).unwrap();
        assert_abs_diff_eq!(plus, exact, epsilon = 1e-11);
        assert_abs_diff_eq!(free, -exact, epsilon = 1e-12);
    }

    #[test]
    fn difference_spinor_is_s_holomorphic_at_source() {
        let eval = CouplingEvaluator::default();
        for dom in [unit_cell(), block_2x3()] {
            let a = dom.horizontal_edges().next().unwrap();
            let diff = difference_spinor(&dom, a, &eval).unwrap();
            // All medial edges, including the four at the source.
            assert!(
                diff.s_holomorphicity_residual(&dom) < 1e-9,
                "difference spinor not s-holomorphic"
            );
        }
    }

    #[test]
    fn dbar_vanishes_for_constant_and_identity() {
        let dom = block_2x3();
        let mut constant = BTreeMap::new();
        let mut identity = BTreeMap::new();
        for m in dom.medial_vertices() {
            constant.insert(m, Complex64::new(0.7, -0.3));
            identity.insert(m, m.embed(dom.mesh()));
        }
        for &v in dom.vertices() {
            assert_abs_diff_eq!(dbar(&constant, v).unwrap().norm(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(dbar(&identity, v).unwrap().norm(), 0.0, epsilon = 1e-14);
        }
        // Missing neighbor is an error.
        let outside = Point::vertex(10, 10);
        assert!(matches!(
            dbar(&constant, outside),
            Err(Error::MissingNeighbor(_))
        ));
    }

    #[test]
    fn dbar_vanishes_on_solved_field() {
        let dom = block_2x3();
        let a = Point::new(1, 0);
        let field = solve_spinor(&dom, a).unwrap();
        // At every interior vertex and interior dual vertex whose four medial
        // neighbors exist and exclude the source.
        let mut centers: Vec<Point> = dom.vertices().iter().copied().collect();
        centers.extend(dom.dual_vertices().iter().copied());
        for v in centers {
            let neighbors = [
                v.offset(1, 0),
                v.offset(-1, 0),
                v.offset(0, 1),
                v.offset(0, -1),
            ];
            if neighbors
                .iter()
                .any(|n| field.value(*n).is_none() || *n == a)
            {
                continue;
            }
            assert!(dbar(field.values(), v).unwrap().norm() < 1e-11);
        }
    }

    #[test]
    fn laplacian_examples() {
        let dom = block_2x3();
        // Constant scalar: Δ = 0 with constant boundary entries.
        let constant: BTreeMap<Point, f64> = dom.vertices().iter().map(|&v| (v, 3.5)).collect();
        for &v in dom.vertices() {
            let lap = laplacian(&dom, &constant, |_| Some(3.5), v).unwrap();
            assert_abs_diff_eq!(lap, 0.0, epsilon = 1e-15);
        }
        // Linear scalar x-coordinate: Δ = 0 when the boundary entries carry
        // the same linear values.
        let linear: BTreeMap<Point, f64> =
            dom.vertices().iter().map(|&v| (v, v.x as f64)).collect();
        let boundary = dom.boundary_edges().to_vec();
        for &v in dom.vertices() {
            let lap = laplacian(&dom, &linear, |i| Some(boundary[i].outside.x as f64), v).unwrap();
            assert_abs_diff_eq!(lap, 0.0, epsilon = 1e-15);
        }
        // Missing boundary data is an error.
        assert!(matches!(
            laplacian(&dom, &linear, |_| None, Point::vertex(0, 0)),
            Err(Error::MissingNeighbor(_))
        ));
    }

    #[test]
    fn contour_sum_equals_enclosed_dbar() {
        // Σ (f+f)/2 Δv over a closed medial contour equals (iδ/2) Σ ∂̄f over
        // the enclosed lattice and dual points, for any field (collect the
        // four coefficients around one diamond and tile).
        let dom = gallery_like_block(7, 7);
        let mesh = dom.mesh();
        let mut values = BTreeMap::new();
        for (i, m) in dom.medial_vertices().into_iter().enumerate() {
            // An arbitrary deterministic field.
            let t = i as f64;
            values.insert(m, Complex64::new((0.3 * t).sin(), (0.17 * t).cos()));
        }
        let center = Point::vertex(3, 3);
        for r in [1i64, 3, 5] {
            let contour = diamond_contour(center, r);
            let lhs = contour_sum(&values, &contour, mesh).unwrap();
            let mut rhs = Complex64::new(0.0, 0.0);
            for &p in dom.vertices().iter().chain(dom.dual_vertices().iter()) {
                if (p.x - center.x).abs() + (p.y - center.y).abs() < r {
                    rhs += dbar(&values, p).unwrap();
                }
            }
            rhs *= Complex64::i() * mesh / 2.0;
            assert!((lhs - rhs).norm() < 1e-12, "r={r}: {lhs} vs {rhs}");
        }
    }

    fn gallery_like_block(w: i64, h: i64) -> DiscreteDomain {
        DiscreteDomain::from_vertex_set(
            (0..w).flat_map(|j| (0..h).map(move |k| Point::vertex(j, k))),
            1.0,
        )
    }

    #[test]
    fn contour_sums() {
        let dom = DiscreteDomain::discretize(&Region::square(1.0), 0.2).unwrap();
        let a = dom
            .nearest_horizontal_midpoint(Complex64::new(0.5, 0.5))
            .unwrap();
        let field = solve_spinor(&dom, a).unwrap();

        // Constant field: every closed contour sums to zero.
        let mut constant = BTreeMap::new();
        for m in dom.medial_vertices() {
            constant.insert(m, Complex64::new(1.0, 2.0));
        }
        let around_vertex = diamond_contour(a.offset(1, 0), 1);
        assert_abs_diff_eq!(
            contour_sum(&constant, &around_vertex, dom.mesh())
                .unwrap()
                .norm(),
            0.0,
            epsilon = 1e-15
        );

        // Solved spinor: vanishes on contours not enclosing the source.
        let far_vertex = a.offset(1, 4);
        let c = diamond_contour(far_vertex, 1);
        assert!(contour_sum(field.values(), &c, dom.mesh()).unwrap().norm() < 1e-10);

        // Raw spinor around the source: nonzero; difference spinor: zero.
        let c3 = diamond_contour(a.offset(1, 0), 3);
        let raw = contour_sum(field.values(), &c3, dom.mesh()).unwrap();
        assert!(raw.norm() > 1e-4, "raw contour sum {raw}");
        let eval = CouplingEvaluator::default();
        let diff = difference_from_solved(&field, &eval).unwrap();
        let d = contour_sum(diff.values(), &c3, dom.mesh()).unwrap();
        assert!(d.norm() < 1e-9, "difference contour sum {d}");

        // Non-closed contour is an error.
        let open = vec![a.offset(1, 0), a.offset(2, 1), a.offset(5, 2)];
        assert!(matches!(
            contour_sum(&constant, &open, dom.mesh()),
            Err(Error::NotClosedContour)
        ));
    }
}
