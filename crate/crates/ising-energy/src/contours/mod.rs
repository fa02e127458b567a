//! Exact enumeration oracle for contour statistics on tiny domains.
//!
//! The low-temperature expansion of the critical Ising model turns partition
//! functions and spin correlations into sums over even edge subsets with
//! weight `α^{|ω|}`, `α = √2 - 1`. On domains with at most
//! [`DEFAULT_ENUMERATION_CAP`] edges everything here is computed by exhaustive
//! enumeration, making this module the ground truth the linear solver and the
//! Monte Carlo sampler are tested against.
//!
//! Weights are kept exact: subset sizes are integers, windings are integer
//! multiples of π/2, and the phase `e^{-iW/2}` is read from an eighth-root
//! table. Partition functions are also exposed in exact `ℚ(√2)` arithmetic.

pub mod exact;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::lattice::{DiscreteDomain, Point};
use crate::{Error, Result, ALPHA};
use exact::QSqrt2;

/// Largest edge count accepted by the enumeration routines.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Critical coupling constants of the contour representation.
#[derive(Debug, Clone, Copy)]
pub struct IsingWeights {
    /// `α = √2 - 1`
    pub alpha: f64,
    /// `β_c = ½ ln(√2 + 1)`
    pub beta_c: f64,
}

impl IsingWeights {
    pub fn critical() -> Self {
        IsingWeights {
            alpha: ALPHA,
            beta_c: crate::beta_critical(),
        }
    }

    /// `α = tanh β_c = e^{-2β_c}` characterizes the critical point.
    pub fn max_identity_residual(&self) -> f64 {
        let t = (self.beta_c.tanh() - self.alpha).abs();
        let e = ((-2.0 * self.beta_c).exp() - self.alpha).abs();
        t.max(e)
    }
}

impl Default for IsingWeights {
    fn default() -> Self {
        Self::critical()
    }
}

/// An even edge subset, identified by the midpoints of its edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourConfig {
    pub edges: Vec<Point>,
}

impl ContourConfig {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Every domain vertex meets an even number of edges.
    pub fn has_even_degrees(&self, domain: &DiscreteDomain) -> bool {
        let mut deg: BTreeMap<Point, u32> = BTreeMap::new();
        for &m in &self.edges {
            for p in m.edge_endpoints() {
                *deg.entry(p).or_insert(0) += 1;
            }
        }
        deg.iter()
            .all(|(p, d)| !domain.vertices().contains(p) || d % 2 == 0)
    }
}

/// Half of an edge, from its midpoint to one of its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    pub midpoint: Point,
    pub vertex: Point,
}

/// A spinor configuration: full edges plus the two defining half-edges.
/// `|γ|` counts half-edges as one half each, so `double_size` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinorConfig {
    pub edges: Vec<Point>,
    pub source_half: HalfEdge,
    pub target_half: HalfEdge,
}

impl SpinorConfig {
    /// `2|γ|`, an integer (half-edges contribute 1 each here).
    pub fn double_size(&self) -> u32 {
        2 * self.edges.len() as u32 + 2
    }
}

/// Winding analysis of a spinor configuration over all admissible walks.
#[derive(Debug, Clone, Copy)]
pub struct WindingClass {
    /// All admissible walks agree mod 4π.
    pub consistent: bool,
    /// Common winding in quarter turns mod 8 (i.e. `W mod 4π` in units of
    /// π/2), from the first walk found.
    pub quarter_turns_mod8: u8,
    pub walk_count: usize,
}

// ---------------------------------------------------------------------------
// enumeration machinery
// ---------------------------------------------------------------------------

struct Enumerator {
    /// Edge midpoints being enumerated over.
    edges: Vec<Point>,
    /// For each edge, the packed indices of its two endpoints.
    ends: Vec<(u32, u32)>,
    vertex_ids: BTreeMap<Point, u32>,
}

impl Enumerator {
    fn new(domain: &DiscreteDomain, excluded: &[Point]) -> Result<Self> {
        if domain.edge_count() > DEFAULT_ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                edges: domain.edge_count(),
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        let edges: Vec<Point> = domain
            .edge_midpoints()
            .iter()
            .copied()
            .filter(|m| !excluded.contains(m))
            .collect();
        let mut vertex_ids = BTreeMap::new();
        let mut ends = Vec::with_capacity(edges.len());
        for &m in &edges {
            let [p, q] = m.edge_endpoints();
            let np = vertex_ids.len() as u32;
            let ip = *vertex_ids.entry(p).or_insert(np);
            let nq = vertex_ids.len() as u32;
            let iq = *vertex_ids.entry(q).or_insert(nq);
            ends.push((ip, iq));
        }
        debug_assert!(vertex_ids.len() <= 64);
        Ok(Enumerator {
            edges,
            ends,
            vertex_ids,
        })
    }

    fn vertex_bit(&self, p: Point) -> Option<u64> {
        self.vertex_ids.get(&p).map(|&i| 1u64 << i)
    }

    /// Visit every subset whose odd-degree vertex set is exactly
    /// `target_parity`, via Gray-code iteration with incremental parity
    /// updates. The callback receives the subset bitmask and its cardinality.
    fn for_each_with_parity(&self, target_parity: u64, mut visit: impl FnMut(u32, u32)) {
        let m = self.edges.len();
        let mut parity: u64 = 0;
        let mut mask: u32 = 0;
        if target_parity == 0 {
            visit(0, 0);
        }
        for i in 1u64..(1u64 << m) {
            let bit = i.trailing_zeros() as usize;
            mask ^= 1u32 << bit;
            let (p, q) = self.ends[bit];
            parity ^= (1u64 << p) | (1u64 << q);
            if parity == target_parity {
                visit(mask, mask.count_ones());
            }
        }
    }

    fn subset(&self, mask: u32) -> Vec<Point> {
        (0..self.edges.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.edges[i])
            .collect()
    }
}

// ---------------------------------------------------------------------------
// partition functions and energy density
// ---------------------------------------------------------------------------

/// All even edge subsets of the domain, the empty one included.
pub fn enumerate_even_subsets(domain: &DiscreteDomain) -> Result<Vec<ContourConfig>> {
    let en = Enumerator::new(domain, &[])?;
    let mut out = Vec::new();
    en.for_each_with_parity(0, |mask, _| {
        out.push(ContourConfig {
            edges: en.subset(mask),
        })
    });
    Ok(out)
}

/// `(Z, Z^{e+}, Z^{e-})`: the contour partition function and its split by
/// whether configurations omit or contain the edge with midpoint `e`.
pub fn partition_functions(domain: &DiscreteDomain, e: Point) -> Result<(f64, f64, f64)> {
    let (z, zp, zm) = partition_functions_exact(domain, e)?;
    Ok((z.to_f64(), zp.to_f64(), zm.to_f64()))
}

/// Exact `ℚ(√2)` version of [`partition_functions`].
pub fn partition_functions_exact(
    domain: &DiscreteDomain,
    e: Point,
) -> Result<(QSqrt2, QSqrt2, QSqrt2)> {
    assert!(domain.has_edge(e), "e must be an interior edge midpoint");
    let en = Enumerator::new(domain, &[])?;
    let e_bit = en.edges.iter().position(|&m| m == e).expect("edge present") as u32;
    let powers = alpha_powers(en.edges.len() as u32);
    let mut z = QSqrt2::zero();
    let mut zp = QSqrt2::zero();
    let mut zm = QSqrt2::zero();
    en.for_each_with_parity(0, |mask, count| {
        let w = &powers[count as usize];
        z = &z + w;
        if mask >> e_bit & 1 == 1 {
            zm = &zm + w;
        } else {
            zp = &zp + w;
        }
    });
    Ok((z, zp, zm))
}

fn alpha_powers(up_to: u32) -> Vec<QSqrt2> {
    let mut v = Vec::with_capacity(up_to as usize + 1);
    v.push(QSqrt2::one());
    for i in 1..=up_to {
        v.push(&v[(i - 1) as usize] * &QSqrt2::alpha());
    }
    v
}

/// Exact `⟨ε_δ(a)⟩⁺ = 2 Z^{e+}/Z - (2+√2)/2` for the horizontal edge with
/// midpoint `e`; the free-boundary value is its negation.
pub fn oracle_energy_plus(domain: &DiscreteDomain, e: Point) -> Result<f64> {
    Ok(oracle_energy_plus_exact(domain, e)?.to_f64())
}

/// Exact `ℚ(√2)` version of [`oracle_energy_plus`].
pub fn oracle_energy_plus_exact(domain: &DiscreteDomain, e: Point) -> Result<QSqrt2> {
    let (z, zp, _) = partition_functions_exact(domain, e)?;
    // 2 Z⁺/Z - (2+√2)/2
    let ratio = &zp / &z;
    let offset = QSqrt2::from_ints(2, 1).scale(1, 2);
    Ok(&ratio.scale(2, 1) - &offset)
}

/// Free-boundary energy density, `-⟨ε⟩⁺`.
pub fn oracle_energy_free(domain: &DiscreteDomain, e: Point) -> Result<f64> {
    Ok(-oracle_energy_plus(domain, e)?)
}

// ---------------------------------------------------------------------------
// spinor configurations and windings
// ---------------------------------------------------------------------------

fn source_half(a: Point) -> HalfEdge {
    // The source half-edge always runs from a to a + δ/2.
    HalfEdge {
        midpoint: a,
        vertex: a.offset(1, 0),
    }
}

fn target_half_candidates(domain: &DiscreteDomain, z: Point) -> Vec<HalfEdge> {
    if domain.has_edge(z) {
        z.edge_endpoints()
            .iter()
            .map(|&v| HalfEdge {
                midpoint: z,
                vertex: v,
            })
            .collect()
    } else if let Some(i) = domain.boundary_index(z) {
        vec![HalfEdge {
            midpoint: z,
            vertex: domain.boundary_edges()[i].inside,
        }]
    } else {
        Vec::new()
    }
}

fn check_source(domain: &DiscreteDomain, a: Point) -> Result<()> {
    if a.is_horizontal_midpoint() && domain.has_edge(a) {
        Ok(())
    } else {
        Err(Error::NotInteriorHorizontalMidpoint(a.to_string()))
    }
}

/// All spinor configurations joining the source half-edge at `a` to a
/// half-edge at `z`, over every parity-consistent choice of the latter.
pub fn enumerate_spinor_configs(
    domain: &DiscreteDomain,
    a: Point,
    z: Point,
) -> Result<Vec<SpinorConfig>> {
    check_source(domain, a)?;
    assert_ne!(a, z, "source and target must differ");
    let mut out = Vec::new();
    for_each_spinor_config(domain, a, z, |cfg| out.push(cfg.clone()))?;
    Ok(out)
}

fn for_each_spinor_config(
    domain: &DiscreteDomain,
    a: Point,
    z: Point,
    mut visit: impl FnMut(&SpinorConfig),
) -> Result<()> {
    let sh = source_half(a);
    let excluded = if domain.has_edge(z) {
        vec![a, z]
    } else {
        vec![a]
    };
    let en = Enumerator::new(domain, &excluded)?;
    'candidates: for th in target_half_candidates(domain, z) {
        // Odd degree exactly at the vertex ends of the two half-edges. A
        // vertex that meets no enumerable edge can only have even degree, so
        // a half-edge ending there is completable only if the other one ends
        // at the same vertex.
        let mut target = 0u64;
        if sh.vertex == th.vertex {
            // The two half-edges cancel; target parity is trivial.
        } else {
            for v in [sh.vertex, th.vertex] {
                match en.vertex_bit(v) {
                    Some(bit) => target ^= bit,
                    None => continue 'candidates,
                }
            }
        }
        let mut configs = Vec::new();
        en.for_each_with_parity(target, |mask, _| configs.push(mask));
        for mask in configs {
            let cfg = SpinorConfig {
                edges: en.subset(mask),
                source_half: sh,
                target_half: th,
            };
            visit(&cfg);
        }
    }
    Ok(())
}

/// Direction index: 0 = east, 1 = north, 2 = west, 3 = south.
fn direction(from: Point, to: Point) -> u8 {
    let dx = to.x - from.x;
    let dy = to.y - from.y;
    match (dx.signum(), dy.signum()) {
        (1, 0) => 0,
        (0, 1) => 1,
        (-1, 0) => 2,
        (0, -1) => 3,
        _ => panic!("not an axis step: {from} -> {to}"),
    }
}

/// Signed quarter turns from direction `d0` to `d1`: +1 left, -1 right,
/// 0 straight; `None` for a U-turn.
fn quarter_turn(d0: u8, d1: u8) -> Option<i64> {
    match (4 + d1 - d0) % 4 {
        0 => Some(0),
        1 => Some(1),
        3 => Some(-1),
        _ => None,
    }
}

/// Enumerate the windings (in quarter turns) of every admissible walk
/// through the configuration.
pub fn admissible_windings(config: &SpinorConfig) -> Vec<i64> {
    // Adjacency of full edges by vertex.
    let mut adj: BTreeMap<Point, Vec<(usize, Point)>> = BTreeMap::new();
    for (i, &m) in config.edges.iter().enumerate() {
        let [p, q] = m.edge_endpoints();
        adj.entry(p).or_default().push((i, q));
        adj.entry(q).or_default().push((i, p));
    }
    let degree = |v: Point| -> usize {
        adj.get(&v).map_or(0, |l| l.len())
            + usize::from(config.source_half.vertex == v)
            + usize::from(config.target_half.vertex == v)
    };
    let target_v = config.target_half.vertex;
    let exit_dir = direction(target_v, config.target_half.midpoint);

    let mut windings = Vec::new();
    // Depth-first over (vertex, incoming direction, used-edge mask, turns).
    let mut stack: Vec<(Point, u8, u32, i64)> = Vec::new();
    let start_dir = direction(config.source_half.midpoint, config.source_half.vertex);
    stack.push((config.source_half.vertex, start_dir, 0, 0));
    while let Some((v, dir, used, turns)) = stack.pop() {
        let ambiguous = degree(v) == 4;
        if v == target_v {
            if let Some(t) = quarter_turn(dir, exit_dir) {
                if !(ambiguous && t == 0) {
                    windings.push(turns + t);
                }
            }
        }
        if let Some(neighbors) = adj.get(&v) {
            for &(i, w) in neighbors {
                if used >> i & 1 == 1 {
                    continue;
                }
                let d = direction(v, w);
                if let Some(t) = quarter_turn(dir, d) {
                    if ambiguous && t == 0 {
                        continue;
                    }
                    stack.push((w, d, used | (1 << i), turns + t));
                }
            }
        }
    }
    windings
}

/// Exhaustive well-definedness check of the winding number mod 4π
/// (quarter turns mod 8) over all admissible walks.
pub fn winding_well_defined(config: &SpinorConfig) -> WindingClass {
    let ws = admissible_windings(config);
    if ws.is_empty() {
        return WindingClass {
            consistent: true,
            quarter_turns_mod8: 0,
            walk_count: 0,
        };
    }
    let class = ws[0].rem_euclid(8) as u8;
    let consistent = ws.iter().all(|w| w.rem_euclid(8) as u8 == class);
    WindingClass {
        consistent,
        quarter_turns_mod8: class,
        walk_count: ws.len(),
    }
}

/// `e^{-i W/2}` for `W = q · π/2`: the eighth root `e^{-i q π/4}`.
pub fn winding_phase(quarter_turns: i64) -> Complex64 {
    const TABLE: [(f64, f64); 8] = [
        (1.0, 0.0),
        (
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ),
        (0.0, 1.0),
        (
            -std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        ),
        (-1.0, 0.0),
        (
            -std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ),
        (0.0, -1.0),
        (
            std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ),
    ];
    let k = (-quarter_turns).rem_euclid(8) as usize;
    Complex64::new(TABLE[k].0, TABLE[k].1)
}

/// Discrete fermionic spinor by exhaustive enumeration:
/// `f(a, z) = Z⁻¹ Σ_γ α^{|γ|} e^{-i W(γ)/2}`, and `Z^{e+}/Z` at `z = a`.
///
/// Every configuration's winding is checked for well-definedness; an
/// inconsistency is a hard error.
pub fn oracle_spinor(domain: &DiscreteDomain, a: Point, z: Point) -> Result<Complex64> {
    check_source(domain, a)?;
    if z == a {
        let (zf, zp, _) = partition_functions(domain, a)?;
        return Ok(Complex64::new(zp / zf, 0.0));
    }
    let (zf, _, _) = partition_functions(domain, a)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut bad: Option<Vec<i64>> = None;
    for_each_spinor_config(domain, a, z, |cfg| {
        if bad.is_some() {
            return;
        }
        let ws = admissible_windings(cfg);
        if ws.is_empty() {
            // No admissible walk exists; the configuration cannot occur.
            bad = Some(vec![]);
            return;
        }
        let class = ws[0].rem_euclid(8);
        if ws.iter().any(|w| w.rem_euclid(8) != class) {
            bad = Some(ws.clone());
            return;
        }
        // |γ| = #edges + 1 (two half-edges at ½ each).
        let weight = ALPHA.powi(cfg.edges.len() as i32 + 1);
        sum += weight * winding_phase(class);
    })?;
    if let Some(ws) = bad {
        return Err(Error::WindingInconsistent(ws));
    }
    Ok(sum / zf)
}

// ---------------------------------------------------------------------------
// high-temperature expansion and the low-temperature bijection
// ---------------------------------------------------------------------------

/// High-temperature two-point function of adjacent vertices `z1`, `z2` with
/// free boundary: `Σ_{ω̃ ∈ C(z1,z2)} α^{|ω̃|} / Z`.
pub fn high_temp_correlation(domain: &DiscreteDomain, z1: Point, z2: Point) -> Result<f64> {
    Ok(high_temp_correlation_exact(domain, z1, z2)?.to_f64())
}

/// Exact `ℚ(√2)` version of [`high_temp_correlation`].
pub fn high_temp_correlation_exact(
    domain: &DiscreteDomain,
    z1: Point,
    z2: Point,
) -> Result<QSqrt2> {
    assert!(domain.vertices().contains(&z1) && domain.vertices().contains(&z2));
    assert!(
        (z1.x - z2.x).abs() + (z1.y - z2.y).abs() == 2,
        "vertices must be adjacent"
    );
    let en = Enumerator::new(domain, &[])?;
    let powers = alpha_powers(en.edges.len() as u32);
    let target = match (en.vertex_bit(z1), en.vertex_bit(z2)) {
        (Some(b1), Some(b2)) => b1 ^ b2,
        // A vertex with no incident enumerable edge can never have odd degree.
        _ => return Ok(QSqrt2::zero()),
    };
    let mut num = QSqrt2::zero();
    let mut den = QSqrt2::zero();
    en.for_each_with_parity(target, |_, count| num = &num + &powers[count as usize]);
    en.for_each_with_parity(0, |_, count| den = &den + &powers[count as usize]);
    Ok(&num / &den)
}

/// Report of the low-temperature expansion check.
#[derive(Debug, Clone, Copy)]
pub struct BijectionReport {
    pub spin_states: usize,
    pub even_subsets: usize,
    pub bijective: bool,
    /// Boltzmann weights are exactly proportional to `α^{|ω|}`:
    /// `H(σ) - H(+) = 2|ω(σ)|` for every state.
    pub weights_match: bool,
}

/// Enumerate all `±` spin states on the dual with `+` boundary, map each to
/// its disagreement contour and verify the bijection onto even subsets.
pub fn low_temp_bijection_check(domain: &DiscreteDomain) -> Result<BijectionReport> {
    let duals: Vec<Point> = domain.dual_vertices().iter().copied().collect();
    if duals.len() > DEFAULT_ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            edges: duals.len(),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let faces = domain.euler_bounded_faces();
    if faces != duals.len() as i64 {
        return Err(Error::NotCellular(faces.max(0) as usize, duals.len()));
    }
    let dual_index: BTreeMap<Point, usize> =
        duals.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let edges: Vec<Point> = domain.edge_midpoints().iter().copied().collect();
    let en = Enumerator::new(domain, &[])?;

    let mut even_masks = std::collections::BTreeSet::new();
    en.for_each_with_parity(0, |mask, _| {
        even_masks.insert(mask);
    });

    let spin_at = |sigma: u64, face: Point| -> i64 {
        match dual_index.get(&face) {
            Some(&i) if sigma >> i & 1 == 1 => -1,
            Some(_) => 1,
            None => 1, // boundary dual spins are fixed to +1
        }
    };

    let mut seen = std::collections::BTreeSet::new();
    let mut weights_match = true;
    for sigma in 0u64..(1u64 << duals.len()) {
        let mut mask = 0u32;
        let mut disagreements = 0i64;
        for (i, &m) in edges.iter().enumerate() {
            let (f1, f2) = if m.is_horizontal_midpoint() {
                (m.offset(0, 1), m.offset(0, -1))
            } else {
                (m.offset(1, 0), m.offset(-1, 0))
            };
            if spin_at(sigma, f1) != spin_at(sigma, f2) {
                mask |= 1 << i;
                disagreements += 1;
            }
        }
        if !even_masks.contains(&mask) || !seen.insert(mask) {
            return Ok(BijectionReport {
                spin_states: 1 << duals.len(),
                even_subsets: even_masks.len(),
                bijective: false,
                weights_match: false,
            });
        }
        // H(σ) - H(+) counted over Ē*: each disagreement bond contributes +2.
        let mut energy_gap = 0i64;
        for &m in &edges {
            let (f1, f2) = if m.is_horizontal_midpoint() {
                (m.offset(0, 1), m.offset(0, -1))
            } else {
                (m.offset(1, 0), m.offset(-1, 0))
            };
            energy_gap += 1 - spin_at(sigma, f1) * spin_at(sigma, f2);
        }
        if energy_gap != 2 * disagreements {
            weights_match = false;
        }
    }
    Ok(BijectionReport {
        spin_states: 1 << duals.len(),
        even_subsets: even_masks.len(),
        bijective: seen.len() == even_masks.len(),
        weights_match,
    })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Region;
    use crate::MEAN_FIELD_ENERGY;
    use approx::assert_abs_diff_eq;

    pub(crate) fn unit_cell() -> DiscreteDomain {
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

    fn single_edge() -> DiscreteDomain {
        DiscreteDomain::from_vertex_set([Point::vertex(0, 0), Point::vertex(1, 0)], 1.0)
    }

    #[test]
    fn critical_weights_identity() {
        assert!(IsingWeights::critical().max_identity_residual() < 1e-15);
    }

    #[test]
    fn even_subsets_of_unit_cell() {
        let dom = unit_cell();
        let subsets = enumerate_even_subsets(&dom).unwrap();
        assert_eq!(subsets.len(), 2);
        assert!(subsets.iter().any(|c| c.is_empty()));
        assert!(subsets.iter().any(|c| c.len() == 4));
        for c in &subsets {
            assert!(c.has_even_degrees(&dom));
        }
    }

    #[test]
    fn single_edge_has_only_empty_subset() {
        let subsets = enumerate_even_subsets(&single_edge()).unwrap();
        assert_eq!(subsets.len(), 1);
        assert!(subsets[0].is_empty());
    }

    #[test]
    fn even_subsets_of_2x3_block() {
        // 7 edges, 6 vertices: the cycle space has dimension 2, so there are
        // 4 even subsets: ∅, the two unit squares, and the outer 6-cycle.
        let dom = block_2x3();
        assert_eq!(dom.edge_count(), 7);
        let subsets = enumerate_even_subsets(&dom).unwrap();
        assert_eq!(subsets.len(), 4);
        let mut sizes: Vec<usize> = subsets.iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![0, 4, 4, 6]);
        // The middle vertical edge lies in both unit squares but not in the
        // outer cycle.
        let middle = Point::new(2, 1);
        let with_middle = subsets.iter().filter(|c| c.edges.contains(&middle)).count();
        assert_eq!(with_middle, 2);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let dom = DiscreteDomain::discretize(&Region::square(1.0), 1.0 / 6.0).unwrap();
        assert!(dom.edge_count() > DEFAULT_ENUMERATION_CAP);
        assert!(matches!(
            enumerate_even_subsets(&dom),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn partition_functions_unit_cell() {
        let dom = unit_cell();
        let e = Point::new(3, 2); // bottom horizontal edge midpoint
        assert!(dom.has_edge(e));
        let (z, zp, zm) = partition_functions(&dom, e).unwrap();
        assert_abs_diff_eq!(z, 1.0 + ALPHA.powi(4), epsilon = 1e-15);
        assert_abs_diff_eq!(zp, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zm, ALPHA.powi(4), epsilon = 1e-15);
        // Exact split.
        let (ze, zpe, zme) = partition_functions_exact(&dom, e).unwrap();
        assert_eq!(&zpe + &zme, ze);
    }

    #[test]
    fn partition_functions_single_edge() {
        let dom = single_edge();
        let e = Point::new(1, 0);
        let (z, zp, zm) = partition_functions(&dom, e).unwrap();
        assert_eq!((z, zp, zm), (1.0, 1.0, 0.0));
    }

    #[test]
    fn partition_functions_2x3_middle_edge() {
        let dom = block_2x3();
        let middle = Point::new(2, 1);
        let (z, zp, zm) = partition_functions(&dom, middle).unwrap();
        // Both unit squares contain the middle edge; ∅ and the 6-cycle don't.
        assert_abs_diff_eq!(zm, 2.0 * ALPHA.powi(4), epsilon = 1e-15);
        assert_abs_diff_eq!(zp, 1.0 + ALPHA.powi(6), epsilon = 1e-15);
        assert_abs_diff_eq!(z, zp + zm, epsilon = 1e-15);
    }

    #[test]
    fn energy_plus_unit_cell() {
        let dom = unit_cell();
        let e = Point::new(3, 2);
        let eps = oracle_energy_plus(&dom, e).unwrap();
        assert_abs_diff_eq!(
            eps,
            2.0 / (1.0 + ALPHA.powi(4)) - (2.0 + 2f64.sqrt()) / 2.0,
            epsilon = 1e-15
        );
        // The + measure is a single spin with four + neighbors.
        let tanh4b = (4.0 * crate::beta_critical()).tanh();
        assert_abs_diff_eq!(eps, tanh4b - MEAN_FIELD_ENERGY, epsilon = 1e-14);
        // Free boundary is the negation.
        assert_abs_diff_eq!(oracle_energy_free(&dom, e).unwrap(), -eps, epsilon = 1e-16);
    }

    #[test]
    fn spinor_configs_unit_cell() {
        let dom = unit_cell();
        let a = Point::new(3, 2); // bottom edge midpoint
        let z = Point::new(4, 3); // right edge midpoint
        let configs = enumerate_spinor_configs(&dom, a, z).unwrap();
        assert!(!configs.is_empty());
        for cfg in &configs {
            // Connecting edges run along the two arcs of the 4-cycle.
            assert!(cfg.double_size() % 2 == 0);
            assert_eq!(cfg.source_half.vertex, a.offset(1, 0));
        }
    }

    #[test]
    fn spinor_configs_empty_for_unreachable_target() {
        // Domain with one horizontal edge only: no even completion exists for
        // a target away from the source's east vertex.
        let dom = single_edge();
        let a = Point::new(1, 0);
        let z = Point::new(-1, 0); // boundary edge midpoint west of vertex 0
        assert!(dom.boundary_index(z).is_some());
        let configs = enumerate_spinor_configs(&dom, a, z).unwrap();
        assert!(configs.is_empty());
        assert_abs_diff_eq!(
            oracle_spinor(&dom, a, z).unwrap().norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn straight_and_l_shaped_windings() {
        // Straight: source half [a, a+δ/2], target half approaching from the
        // west, no turns.
        let dom = single_edge();
        let a = Point::new(1, 0);
        let z = Point::new(3, 0); // boundary midpoint east of vertex (1,0)...
                                  // (3,0) is the midpoint of the boundary edge from vertex (2,0)/2=(1,0)
        assert!(dom.boundary_index(z).is_some());
        let cfgs = enumerate_spinor_configs(&dom, a, z).unwrap();
        assert_eq!(cfgs.len(), 1);
        let ws = admissible_windings(&cfgs[0]);
        assert_eq!(ws, vec![0]);

        // L-shaped: one left turn, W = π/2.
        let zl = Point::new(2, 1); // boundary midpoint north of vertex (1,0)
        assert!(dom.boundary_index(zl).is_some());
        let cfgs = enumerate_spinor_configs(&dom, a, zl).unwrap();
        assert_eq!(cfgs.len(), 1);
        assert_eq!(admissible_windings(&cfgs[0]), vec![1]);
        let wc = winding_well_defined(&cfgs[0]);
        assert!(wc.consistent);
        assert_eq!(wc.quarter_turns_mod8, 1);
    }

    #[test]
    fn winding_well_defined_with_ambiguity() {
        // A 4-valent ambiguity: 2x3 block, source at bottom-left horizontal
        // edge, target on the far side; all walks agree mod 4π.
        let dom = block_2x3();
        let a = Point::new(1, 0);
        for z in dom.medial_vertices() {
            if z == a {
                continue;
            }
            for cfg in enumerate_spinor_configs(&dom, a, z).unwrap() {
                let wc = winding_well_defined(&cfg);
                assert!(wc.consistent, "winding inconsistent at {z}");
                assert!(wc.walk_count >= 1);
            }
        }
    }

    #[test]
    fn oracle_spinor_diagonal_value() {
        let dom = unit_cell();
        let a = Point::new(3, 2);
        let f = oracle_spinor(&dom, a, a).unwrap();
        assert_abs_diff_eq!(f.re, 1.0 / (1.0 + ALPHA.powi(4)), epsilon = 1e-15);
        assert_abs_diff_eq!(f.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn oracle_spinor_boundary_phase() {
        // Im(f(z) ν_out^{1/2}) = 0 at boundary medial vertices.
        for dom in [unit_cell(), block_2x3()] {
            let a = dom
                .nearest_horizontal_midpoint(Complex64::new(0.0, 0.0))
                .unwrap();
            for b in dom.boundary_edges() {
                let z = b.midpoint();
                let f = oracle_spinor(&dom, a, z).unwrap();
                let nu_sqrt = b.outward_normal().sqrt();
                assert_abs_diff_eq!((f * nu_sqrt).im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn high_temperature_identities() {
        // Single edge: correlation α.
        let dom = single_edge();
        let c = high_temp_correlation(&dom, Point::vertex(0, 0), Point::vertex(1, 0)).unwrap();
        assert_abs_diff_eq!(c, ALPHA, epsilon = 1e-15);

        // Unit cell: (α + α³)/(1 + α⁴).
        let dom = unit_cell();
        let c = high_temp_correlation(&dom, Point::vertex(1, 1), Point::vertex(2, 1)).unwrap();
        assert_abs_diff_eq!(
            c,
            (ALPHA + ALPHA.powi(3)) / (1.0 + ALPHA.powi(4)),
            epsilon = 1e-15
        );

        // Exact identity: high-temp − √2/2 = −⟨ε⟩⁺, in ℚ(√2).
        let e = Point::new(3, 2);
        let ht =
            high_temp_correlation_exact(&dom, Point::vertex(1, 1), Point::vertex(2, 1)).unwrap();
        let half_sqrt2 = QSqrt2::sqrt2().scale(1, 2);
        let free = &ht - &half_sqrt2;
        let plus = oracle_energy_plus_exact(&dom, e).unwrap();
        assert_eq!(free, -&plus);
    }

    #[test]
    fn low_temperature_bijection() {
        // Unit cell: 1 interior dual spin, 2 states ↔ {∅, 4-cycle}.
        let report = low_temp_bijection_check(&unit_cell()).unwrap();
        assert_eq!(report.spin_states, 2);
        assert_eq!(report.even_subsets, 2);
        assert!(report.bijective && report.weights_match);

        // 2x3 block: 2 interior dual spins, 4 states ↔ 4 even subsets.
        let report = low_temp_bijection_check(&block_2x3()).unwrap();
        assert_eq!(report.spin_states, 4);
        assert_eq!(report.even_subsets, 4);
        assert!(report.bijective && report.weights_match);

        // Empty dual interior: single state ↔ {∅}.
        let report = low_temp_bijection_check(&single_edge()).unwrap();
        assert_eq!(report.spin_states, 1);
        assert_eq!(report.even_subsets, 1);
        assert!(report.bijective && report.weights_match);
    }
}
