//! Kenyon's dimer coupling function `C₀` and the full-plane discrete spinor.
//!
//! `C₀(0, x+iy)` is defined by the double integral
//! `(1/4π²) ∬ e^{i(xθ - yφ)} / (2i sin θ + 2 sin φ) dθ dφ` over `[0, 2π]²`.
//! The raw integrand is singular where `sin θ = sin φ = 0`, so the inner
//! integral is evaluated analytically by residues, which leaves a smooth
//! one-dimensional integral:
//!
//! * `x` odd:  `C₀ = (1/2π) ∫₀^π cos(yφ) r(sin φ)^x / √(1 + sin²φ) dφ` (real)
//! * `x` even: `C₀ = -(i/2π) ∫₀^π sin(yφ) r(sin φ)^x / √(1 + sin²φ) dφ`
//!   (purely imaginary)
//!
//! with `r(s) = √(1+s²) - s`, after reducing to `x ≥ 0` through
//! `C₀(0, x - iy) = conj(C₀(0, x + iy))` and `C₀(0, -z) = -C₀(0, z)`.
//! `C₀` vanishes identically when `x + y` is even.

use std::collections::HashMap;
use std::sync::RwLock;

use num_complex::Complex64;

use crate::lattice::Point;
use crate::{Error, Result, FULL_PLANE_DIAGONAL};

const PI: f64 = std::f64::consts::PI;

/// Default quadrature convergence target for successive panel refinements.
pub const QUADRATURE_TOL: f64 = 1e-11;

/// Default crossover radius between quadrature and the asymptotic formula.
pub const DEFAULT_CROSSOVER_RADIUS: f64 = 40.0;

// ---------------------------------------------------------------------------
// Gauss–Legendre panels
// ---------------------------------------------------------------------------

/// 32-point Gauss–Legendre nodes and weights on [-1, 1], computed once by
/// Newton iteration on the Legendre recurrence.
fn gauss_legendre_32() -> &'static ([f64; 32], [f64; 32]) {
    use std::sync::OnceLock;
    static NODES: OnceLock<([f64; 32], [f64; 32])> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 32usize;
        let mut x = [0.0f64; 32];
        let mut w = [0.0f64; 32];
        for i in 0..n {
            // Chebyshev initial guess.
            let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Legendre P_n(t) and P_n'(t) by recurrence.
                let (mut p0, mut p1) = (1.0, t);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                let dt = p1 / dp;
                t -= dt;
                if dt.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        (x, w)
    })
}

/// Composite 32-point Gauss–Legendre over [0, π] with `panels` subintervals.
fn composite_gl(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_32();
    let h = PI / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for i in 0..32 {
            acc += weights[i] * f(mid + half * nodes[i]);
        }
        total += acc * half;
    }
    total
}

/// Adaptive panel doubling until two refinements agree within `tol`.
fn refine_gl(f: impl Fn(f64) -> f64 + Copy, start_panels: usize, tol: f64) -> Result<f64> {
    let mut panels = start_panels.max(4);
    let mut prev = composite_gl(f, panels);
    for _ in 0..8 {
        panels *= 2;
        let next = composite_gl(f, panels);
        let delta = (next - prev).abs();
        if delta <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence {
        delta: (composite_gl(f, panels * 2) - prev).abs(),
    })
}

// ---------------------------------------------------------------------------
// the coupling function
// ---------------------------------------------------------------------------

/// `C₀(0, x+iy)` by direct quadrature of the residue-reduced integral.
pub fn c0_quadrature(x: i64, y: i64) -> Result<Complex64> {
    c0_quadrature_tol(x, y, QUADRATURE_TOL)
}

pub fn c0_quadrature_tol(x: i64, y: i64, tol: f64) -> Result<Complex64> {
    if (x + y).rem_euclid(2) == 0 {
        // Off the bipartite pairing the integral vanishes identically.
        return Ok(Complex64::new(0.0, 0.0));
    }
    if x < 0 {
        // C₀(0, -x+iy) = -conj(C₀(0, x+iy))
        return Ok(-c0_quadrature_tol(-x, y, tol)?.conj());
    }
    let r = |s: f64| (1.0 + s * s).sqrt() - s;
    let g = move |phi: f64| {
        let s = phi.sin();
        r(s).powi(x as i32) / (1.0 + s * s).sqrt()
    };
    let yf = y as f64;
    let start = (4 + y.unsigned_abs() as usize / 6).max(4);
    if x % 2 != 0 {
        let val = refine_gl(move |phi| (yf * phi).cos() * g(phi), start, tol)?;
        Ok(Complex64::new(val / (2.0 * PI), 0.0))
    } else {
        let val = refine_gl(move |phi| (yf * phi).sin() * g(phi), start, tol)?;
        Ok(Complex64::new(0.0, -val / (2.0 * PI)))
    }
}

/// Closed-form values of `C₀` at the twelve displacements where they are
/// known exactly, `None` elsewhere.
pub fn c0_exact(x: i64, y: i64) -> Option<Complex64> {
    let q = 1.0 / PI - 0.25;
    let v = match (x, y) {
        (1, 0) => Complex64::new(0.25, 0.0),
        (-1, 0) => Complex64::new(-0.25, 0.0),
        (0, 1) => Complex64::new(0.0, -0.25),
        (0, -1) => Complex64::new(0.0, 0.25),
        (2, 1) | (-2, 1) => Complex64::new(0.0, -q),
        (2, -1) | (-2, -1) => Complex64::new(0.0, q),
        (1, 2) | (1, -2) => Complex64::new(q, 0.0),
        (-1, 2) | (-1, -2) => Complex64::new(-q, 0.0),
        _ => return None,
    };
    Some(v)
}

/// Kenyon's large-distance asymptotics of `C₀`.
///
/// On the sublattice `z = (2m+1) + 2ni` (x odd, y even) the value is real and
/// approaches `Re(1/(πz))`; on `z = 2m + (2n+1)i` it is purely imaginary and
/// approaches `i·Im(1/(πz))`. The error is `O(1/|z|²)`.
pub fn c0_asymptotic(x: i64, y: i64) -> Result<Complex64> {
    if (x + y).rem_euclid(2) == 0 {
        return Err(Error::AsymptoticParity { x, y });
    }
    let z = Complex64::new(x as f64, y as f64);
    let w = 1.0 / (PI * z);
    if x.rem_euclid(2) == 1 {
        Ok(Complex64::new(w.re, 0.0))
    } else {
        Ok(Complex64::new(0.0, w.im))
    }
}

/// How a coupling value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Exact,
    Quadrature,
    Asymptotic,
}

impl EvalMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalMethod::Exact => "exact",
            EvalMethod::Quadrature => "quadrature",
            EvalMethod::Asymptotic => "asymptotic",
        }
    }
}

/// Cached evaluator of `C₀` on lattice displacements, switching from
/// quadrature to the asymptotic formula beyond the crossover radius.
#[derive(Debug)]
pub struct CouplingEvaluator {
    crossover_radius: f64,
    tol: f64,
    force_quadrature: bool,
    cache: RwLock<HashMap<(i64, i64), Complex64>>,
}

impl Default for CouplingEvaluator {
    fn default() -> Self {
        Self::new(DEFAULT_CROSSOVER_RADIUS, QUADRATURE_TOL)
    }
}

impl CouplingEvaluator {
    pub fn new(crossover_radius: f64, tol: f64) -> Self {
        CouplingEvaluator {
            crossover_radius,
            tol,
            force_quadrature: false,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// An evaluator that always integrates, bypassing the exact table and
    /// the asymptotic regime (for cross-validation).
    pub fn quadrature_only(tol: f64) -> Self {
        CouplingEvaluator {
            crossover_radius: f64::INFINITY,
            tol,
            force_quadrature: true,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn crossover_radius(&self) -> f64 {
        self.crossover_radius
    }

    /// Which method [`Self::c0`] will use for this displacement.
    pub fn method_for(&self, x: i64, y: i64) -> EvalMethod {
        if self.force_quadrature {
            EvalMethod::Quadrature
        } else if c0_exact(x, y).is_some() {
            EvalMethod::Exact
        } else if ((x * x + y * y) as f64).sqrt() <= self.crossover_radius {
            EvalMethod::Quadrature
        } else {
            EvalMethod::Asymptotic
        }
    }

    /// `C₀(0, x+iy)`, cached. `C₀(0,0) = 0` by convention, and 0 on the whole
    /// even sublattice (never consumed by the spinor assembly).
    pub fn c0(&self, x: i64, y: i64) -> Result<Complex64> {
        if (x + y).rem_euclid(2) == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if let Some(v) = self.cache.read().expect("cache lock").get(&(x, y)) {
            return Ok(*v);
        }
        let v = match self.method_for(x, y) {
            EvalMethod::Exact => c0_exact(x, y).expect("method said exact"),
            EvalMethod::Quadrature => c0_quadrature_tol(x, y, self.tol)?,
            EvalMethod::Asymptotic => c0_asymptotic(x, y)?,
        };
        self.cache.write().expect("cache lock").insert((x, y), v);
        Ok(v)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

// ---------------------------------------------------------------------------
// fallback evaluation: lattice ∂̄ problem
// ---------------------------------------------------------------------------

/// Where the boundary data of the lattice solve comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeBoundaryData {
    /// High-accuracy quadrature values on the box boundary; reproduces the
    /// exact table to the quadrature tolerance.
    Quadrature,
    /// `1/(πz)` asymptotics on the box boundary; self-contained but limited
    /// to the `O(1/R²)` accuracy of the boundary data itself.
    Asymptotic,
}

/// Fallback route for `C₀`: solve the discrete equation
/// `∂̄ C(v) = C(v+1) - C(v-1) + i(C(v+i) - C(v-i)) = [v = 0]`
/// on the odd sublattice of the box `max(|x|,|y|) ≤ radius`, with boundary
/// values on the surrounding ring. Returns the values at all interior odd
/// displacements.
///
/// The equation holds exactly for the true coupling function (the source
/// normalization `∂̄ C(0) = 1` follows from the exact table), so this is an
/// independent structural check on the quadrature path.
pub fn c0_lattice_bvp(
    radius: i64,
    boundary: LatticeBoundaryData,
) -> Result<std::collections::BTreeMap<(i64, i64), Complex64>> {
    use sprs::TriMat;
    assert!(radius >= 3);
    let inside = |x: i64, y: i64| x.abs().max(y.abs()) <= radius;
    // Unknowns: odd-sum points strictly inside the box.
    let mut index = std::collections::BTreeMap::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            if (x + y).rem_euclid(2) == 1 {
                let n = index.len();
                index.insert((x, y), n);
            }
        }
    }
    let boundary_value = |x: i64, y: i64| -> Result<Complex64> {
        match boundary {
            LatticeBoundaryData::Quadrature => c0_quadrature(x, y),
            LatticeBoundaryData::Asymptotic => c0_asymptotic(x, y),
        }
    };

    // Two real equations (Re, Im) per even-sum point of the box.
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut row = 0usize;
    for x in -radius..=radius {
        for y in -radius..=radius {
            if (x + y).rem_euclid(2) != 1 {
                let mut b = if x == 0 && y == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                // coefficient of C(n) in ∂̄: +1, -1, +i, -i
                let stencil = [
                    ((x + 1, y), Complex64::new(1.0, 0.0)),
                    ((x - 1, y), Complex64::new(-1.0, 0.0)),
                    ((x, y + 1), Complex64::new(0.0, 1.0)),
                    ((x, y - 1), Complex64::new(0.0, -1.0)),
                ];
                for ((nx, ny), coeff) in stencil {
                    if let Some(&col) = index.get(&(nx, ny)) {
                        // Complex coefficient times complex unknown -> 2x2
                        // real block.
                        triplets.push((row, 2 * col, coeff.re));
                        triplets.push((row, 2 * col + 1, -coeff.im));
                        triplets.push((row + 1, 2 * col, coeff.im));
                        triplets.push((row + 1, 2 * col + 1, coeff.re));
                    } else {
                        debug_assert!(!inside(nx, ny));
                        b -= coeff * boundary_value(nx, ny)?;
                    }
                }
                rhs.push(b.re);
                rhs.push(b.im);
                row += 2;
            }
        }
    }

    let cols = 2 * index.len();
    let mut tri = TriMat::new((row, cols));
    for &(r, c, v) in &triplets {
        tri.add_triplet(r, c, v);
    }
    let a: sprs::CsMat<f64> = tri.to_csr();
    let at = a.transpose_view().to_csr();
    let normal = &at * &a;
    let mut atb = vec![0.0; cols];
    for (r, vec) in a.outer_iterator().enumerate() {
        for (c, &v) in vec.iter() {
            atb[c] += v * rhs[r];
        }
    }
    let ldl = sprs_ldl::Ldl::new()
        .check_symmetry(sprs::SymmetryCheck::DontCheckSymmetry)
        .fill_in_reduction(sprs::FillInReduction::ReverseCuthillMcKee)
        .numeric(normal.view())
        .map_err(|e| Error::Linalg(format!("lattice C0 factorization: {e:?}")))?;
    let x = ldl.solve(&atb);

    Ok(index
        .into_iter()
        .map(|((px, py), col)| ((px, py), Complex64::new(x[2 * col], x[2 * col + 1])))
        .collect())
}

// ---------------------------------------------------------------------------
// the full-plane spinor
// ---------------------------------------------------------------------------

const COS_PI_8: f64 = 0.9238795325112867;
const SIN_PI_8: f64 = 0.3826834323650898;

/// `η = e^{iπ/8}`
fn eta() -> Complex64 {
    Complex64::new(COS_PI_8, SIN_PI_8)
}

/// `e^{-3iπ/8} = η̄³`
fn eta_bar_cubed() -> Complex64 {
    Complex64::new(SIN_PI_8, -COS_PI_8)
}

/// Full-plane discrete fermionic spinor as a function of the doubled lattice
/// displacement `D = 2(z - a)/δ` (a Gaussian integer; the source `a` is a
/// horizontal edge midpoint, so `D` has two even or two odd coordinates).
///
/// `f(D) = cos(π/8) e^{iπ/8} [C₀(D-1) + C₀(D+i)]
///        + sin(π/8) e^{-3iπ/8} [C₀(D+1) + C₀(D-i)]`,
/// and `f(0) = (2+√2)/4` at the source.
pub fn full_plane_spinor_displacement(
    eval: &CouplingEvaluator,
    dx: i64,
    dy: i64,
) -> Result<Complex64> {
    if dx == 0 && dy == 0 {
        return Ok(Complex64::new(FULL_PLANE_DIAGONAL, 0.0));
    }
    let b1 = eval.c0(dx - 1, dy)? + eval.c0(dx, dy + 1)?;
    let b2 = eval.c0(dx + 1, dy)? + eval.c0(dx, dy - 1)?;
    Ok(COS_PI_8 * eta() * b1 + SIN_PI_8 * eta_bar_cubed() * b2)
}

/// `f_{C_δ}(a, z)` for medial vertices given in doubled grid coordinates;
/// the value depends only on the displacement `z - a`.
pub fn full_plane_spinor(eval: &CouplingEvaluator, a: Point, z: Point) -> Result<Complex64> {
    debug_assert!(a.is_horizontal_midpoint());
    debug_assert!(z.is_edge_midpoint() || z == a);
    full_plane_spinor_displacement(eval, z.x - a.x, z.y - a.y)
}

/// The s-holomorphic building blocks of the full-plane spinor
/// (`G₁ = η(C_δ(a, z_{-1}) + C_δ(a, z_i))`,
///  `G₂ = iη(C_δ(a, z_1) + C_δ(a, z_{-i}))`), as functions of `D`.
pub fn g1(eval: &CouplingEvaluator, dx: i64, dy: i64) -> Result<Complex64> {
    Ok(eta() * (eval.c0(dx - 1, dy)? + eval.c0(dx, dy + 1)?))
}

pub fn g2(eval: &CouplingEvaluator, dx: i64, dy: i64) -> Result<Complex64> {
    Ok(Complex64::i() * eta() * (eval.c0(dx + 1, dy)? + eval.c0(dx, dy - 1)?))
}

/// Maximum residual of the four discrete-singularity projection relations of
/// the full-plane spinor at its source, evaluated with the given evaluator:
/// `P_ℓ[f(a,a)] = P_ℓ[f(a,a_{1±i})]` on the east medial edges and
/// `P_ℓ[f(a,a) - 1] = P_ℓ[f(a,a_{-1±i})]` on the west ones.
pub fn check_full_plane_singularity(eval: &CouplingEvaluator) -> Result<f64> {
    let faa = Complex64::new(FULL_PLANE_DIAGONAL, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for (dx, dy) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
        let line = source_edge_line(dx, dy);
        let neighbor = full_plane_spinor_displacement(eval, dx, dy)?;
        let reference = if dx > 0 { faa } else { faa - one };
        let r = (project(line, reference) - project(line, neighbor)).norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Direction η of the line `ℓ(e_x)` of the medial edge from the source
/// midpoint towards `a + xδ/2`, `x = dx + i·dy ∈ {±1±i}`. The nearest vertex
/// is the east or west endpoint of the source edge and the nearest dual
/// vertex the face center above or below it, which gives
///   `e_{1+i} → e^{-3iπ/8}`, `e_{1-i} → e^{3iπ/8}`,
///   `e_{-1+i} → e^{-iπ/8}`, `e_{-1-i} → e^{iπ/8}`.
fn source_edge_line(dx: i64, dy: i64) -> Complex64 {
    let vertex = Point::new(dx.signum(), 0);
    let face = Point::new(0, dy.signum());
    // Quadrant of (face - vertex), mapped through EdgeLine on a shifted copy
    // so the parities are those of a genuine vertex/face pair.
    let line = crate::lattice::EdgeLine::from_vertices(
        Point::vertex(0, 0),
        Point::new(face.x - vertex.x, face.y - vertex.y),
    );
    line.direction()
}

fn project(direction: Complex64, z: Complex64) -> Complex64 {
    0.5 * (z + direction * direction * z.conj())
}
