//! Command-line front end: discretization, solving, sweeps, oracle checks,
//! Monte Carlo, verification, and artifact export.
//!
//! CSV is the primary tabular format (headers mandatory, UTF-8, '.' decimal
//! separator); JSON mirrors the data with full round-trip precision. Data
//! files are byte-identical across runs for identical commands, seeds and
//! thread counts; timestamps and wall times live in a `.meta.json` sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::continuum::ConformalFrame;
use crate::contours;
use crate::coupling::{self, CouplingEvaluator};
use crate::lattice::{gallery, DiscreteDomain, Point, Region};
use crate::mc::{self, Boundary, McParams};
use crate::spinor::{self, integral};
use crate::{Error, Result};

/// Global options shared by all subcommands.
#[derive(Debug, Clone)]
pub struct GlobalOpts {
    pub seed: u64,
    pub threads: usize,
    pub tolerance: f64,
    pub out_dir: PathBuf,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            seed: 1,
            threads: 1,
            tolerance: spinor::SOLVE_TOLERANCE,
            out_dir: PathBuf::from("."),
        }
    }
}

// ---------------------------------------------------------------------------
// argument parsing helpers
// ---------------------------------------------------------------------------

/// Parse a region spec: `disk:cx,cy,r`, `rect:x0,y0,x1,y1`, `square:side`, or
/// `polygon:x1,y1;x2,y2;...`.
pub fn parse_region(spec: &str) -> Result<Region> {
    let bad = |m: &str| Error::InvalidSpec(format!("region {spec:?}: {m}"));
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected kind:params"))?;
    let nums = |s: &str| -> Result<Vec<f64>> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| bad(&format!("{e}"))))
            .collect()
    };
    match kind {
        "disk" => {
            let v = nums(rest)?;
            if v.len() != 3 {
                return Err(bad("disk needs cx,cy,r"));
            }
            Ok(Region::Disk {
                center: [v[0], v[1]],
                radius: v[2],
            })
        }
        "rect" => {
            let v = nums(rest)?;
            if v.len() != 4 {
                return Err(bad("rect needs x0,y0,x1,y1"));
            }
            Ok(Region::Rectangle {
                x0: v[0],
                y0: v[1],
                x1: v[2],
                y1: v[3],
            })
        }
        "square" => {
            let v = nums(rest)?;
            if v.len() != 1 {
                return Err(bad("square needs side"));
            }
            Ok(Region::square(v[0]))
        }
        "polygon" => {
            let mut vertices = Vec::new();
            for pair in rest.split(';') {
                let v = nums(pair)?;
                if v.len() != 2 {
                    return Err(bad("polygon vertices are x,y pairs"));
                }
                vertices.push([v[0], v[1]]);
            }
            if vertices.len() < 3 {
                return Err(bad("polygon needs at least 3 vertices"));
            }
            Ok(Region::Polygon { vertices })
        }
        _ => Err(bad("unknown kind")),
    }
}

/// Parse `x,y` into a complex point.
pub fn parse_point(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidSpec(format!("point {s:?}: expected x,y")));
    }
    let x = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let y = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    Ok(Complex64::new(x, y))
}

/// Parse a mesh list like `1/16,1/32,1/64` (fractions or decimals).
pub fn parse_mesh_list(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let v = if let Some((num, den)) = tok.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|e: std::num::ParseFloatError| Error::InvalidSpec(e.to_string()))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|e: std::num::ParseFloatError| Error::InvalidSpec(e.to_string()))?;
            n / d
        } else {
            tok.parse()
                .map_err(|e: std::num::ParseFloatError| Error::InvalidSpec(e.to_string()))?
        };
        out.push(v);
    }
    Ok(out)
}

/// FNV-1a hash of a domain's canonical JSON document, as stable identifier.
pub fn domain_hash(domain: &DiscreteDomain) -> String {
    let doc = serde_json::to_string(&domain.to_json()).expect("domain json");
    let mut h: u64 = 0xcbf29ce484222325;
    for b in doc.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_file(path, &s)
}

/// Sidecar metadata next to a data file (timestamps and wall times live
/// here so the data file stays byte-identical across runs).
fn write_meta(path: &Path, wall_seconds: f64) -> Result<()> {
    let meta_path = path.with_extension(match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{ext}.meta.json"),
        None => "meta.json".to_string(),
    });
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "unix_timestamp": now,
        "wall_seconds": wall_seconds,
    });
    write_json(&meta_path, &meta)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

/// Specification of the convergence sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub region: Region,
    pub a: Complex64,
    /// Strictly decreasing mesh list.
    pub meshes: Vec<f64>,
    pub name: String,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.meshes.is_empty() {
            return Err(Error::InvalidSpec("empty mesh list".into()));
        }
        if !self.meshes.windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::InvalidSpec(
                "meshes must be strictly decreasing".into(),
            ));
        }
        if !self.region.contains(self.a) {
            return Err(Error::InvalidSpec("a must lie inside the region".into()));
        }
        Ok(())
    }

    /// Continuum target `ℓ_Ω(a)/(2π)` when the region has an analytic frame
    /// (disks only); `None` otherwise, never fabricated.
    pub fn target(&self) -> Option<f64> {
        match self.region {
            Region::Disk { center, radius } => {
                let frame =
                    ConformalFrame::disk(Complex64::new(center[0], center[1]), radius, self.a)
                        .ok()?;
                Some(crate::continuum::hyperbolic_element(&frame) / (2.0 * std::f64::consts::PI))
            }
            _ => None,
        }
    }
}

/// One mesh record of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct MeshRecord {
    pub delta: f64,
    pub plus_over_delta: Option<f64>,
    pub free_over_delta: Option<f64>,
    pub target: Option<f64>,
    pub rel_error: Option<f64>,
    pub residual: Option<f64>,
    #[serde(skip)]
    pub wall_seconds: f64,
    pub error: Option<String>,
}

/// Sweep output: one record per mesh, coarse to fine.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub a: [f64; 2],
    pub target: Option<f64>,
    pub records: Vec<MeshRecord>,
}

/// Run the convergence sweep: discretize, solve, compare with the continuum
/// target. Per-mesh failures are recorded and the sweep continues.
pub fn cmd_sweep(spec: &SweepSpec, tolerance: f64) -> Result<RunReport> {
    spec.validate()?;
    let target = spec.target();
    let mut records = Vec::new();
    for &delta in &spec.meshes {
        let t0 = Instant::now();
        let outcome = (|| -> Result<(f64, f64, f64)> {
            let domain = DiscreteDomain::discretize(&spec.region, delta)?;
            let a = domain.nearest_horizontal_midpoint(spec.a)?;
            let system = spinor::assemble_bvp(&domain, a)?;
            let field = spinor::solve_system_tol(&domain, &system, tolerance)?;
            let (plus, free) = field.energy_density();
            Ok((plus / delta, free / delta, field.residual()))
        })();
        let wall = t0.elapsed().as_secs_f64();
        let record = match outcome {
            Ok((plus, free, residual)) => MeshRecord {
                delta,
                plus_over_delta: Some(plus),
                free_over_delta: Some(free),
                target,
                rel_error: target.map(|t| (plus - t).abs() / t.abs()),
                residual: Some(residual),
                wall_seconds: wall,
                error: None,
            },
            Err(e) => MeshRecord {
                delta,
                plus_over_delta: None,
                free_over_delta: None,
                target,
                rel_error: None,
                residual: None,
                wall_seconds: wall,
                error: Some(e.to_string()),
            },
        };
        records.push(record);
    }
    Ok(RunReport {
        name: spec.name.clone(),
        a: [spec.a.re, spec.a.im],
        target,
        records,
    })
}

/// Write a sweep report as CSV and JSON into `out_dir` with the given stem.
pub fn write_sweep_report(report: &RunReport, out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let csv_path = out_dir.join(format!("{stem}.csv"));
    let json_path = out_dir.join(format!("{stem}.json"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "delta",
        "plus_over_delta",
        "free_over_delta",
        "target",
        "rel_error",
        "residual",
        "wall_seconds",
        "error",
    ])?;
    let fmt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    for r in &report.records {
        w.write_record([
            format!("{}", r.delta),
            fmt(r.plus_over_delta),
            fmt(r.free_over_delta),
            fmt(r.target),
            fmt(r.rel_error),
            fmt(r.residual),
            format!("{}", r.wall_seconds),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    let csv_bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let mut f = std::fs::File::create(&csv_path)
        .map_err(|e| Error::io(csv_path.display().to_string(), e))?;
    f.write_all(&csv_bytes)
        .map_err(|e| Error::io(csv_path.display().to_string(), e))?;

    write_json(&json_path, report)?;
    write_meta(
        &json_path,
        report.records.iter().map(|r| r.wall_seconds).sum(),
    )?;
    Ok(vec![csv_path, json_path])
}

// ---------------------------------------------------------------------------
// exports
// ---------------------------------------------------------------------------

/// Export a solved field as CSV: one row per medial vertex.
pub fn export_field(
    domain: &DiscreteDomain,
    field: &spinor::SpinorField,
    path: &Path,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["re_z", "im_z", "re_f", "im_f", "class"])?;
    for m in domain.medial_vertices() {
        let z = m.embed(domain.mesh());
        let f = field.value(m).expect("field covers all medial vertices");
        let class = if m == field.source() {
            "source"
        } else if domain.has_edge(m) {
            "interior"
        } else {
            "boundary"
        };
        w.write_record([
            format!("{}", z.re),
            format!("{}", z.im),
            format!("{}", f.re),
            format!("{}", f.im),
            class.to_string(),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

/// Export a discrete integral as CSV: one row per primal/dual vertex and per
/// boundary entry.
pub fn export_integral(
    domain: &DiscreteDomain,
    integral: &integral::DiscreteIntegral,
    path: &Path,
) -> Result<()> {
    use integral::Node;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["node", "re_z", "im_z", "value"])?;
    let mesh = domain.mesh();
    let mut rows: Vec<(String, Complex64, f64)> = Vec::new();
    for &v in domain.vertices() {
        if let Some(x) = integral.value(Node::Primal(v)) {
            rows.push(("primal".into(), v.embed(mesh), x));
        }
    }
    for &v in domain.dual_vertices() {
        if let Some(x) = integral.value(Node::Dual(v)) {
            rows.push(("dual".into(), v.embed(mesh), x));
        }
    }
    for (i, b) in domain.boundary_edges().iter().enumerate() {
        if let Some(x) = integral.value(Node::PrimalBoundary(i)) {
            rows.push(("primal_boundary".into(), b.outside.embed(mesh), x));
        }
    }
    for (i, b) in domain.dual_boundary_edges().iter().enumerate() {
        if let Some(x) = integral.value(Node::DualBoundary(i)) {
            rows.push(("dual_boundary".into(), b.outside.embed(mesh), x));
        }
    }
    for (class, z, x) in rows {
        w.write_record([
            class,
            format!("{}", z.re),
            format!("{}", z.im),
            format!("{x}"),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

/// Export a `C₀` table over `|x + iy| ≤ radius` as CSV with the method
/// column.
pub fn export_coupling(radius: f64, path: &Path) -> Result<()> {
    let eval = CouplingEvaluator::default();
    let r = radius.floor() as i64;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "re", "im", "method"])?;
    for x in -r..=r {
        for y in -r..=r {
            if ((x * x + y * y) as f64) > radius * radius || (x + y).rem_euclid(2) == 0 {
                continue;
            }
            let v = eval.c0(x, y)?;
            w.write_record([
                format!("{x}"),
                format!("{y}"),
                format!("{}", v.re),
                format!("{}", v.im),
                eval.method_for(x, y).as_str().to_string(),
            ])?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(())
}

/// Oracle result for JSON export.
#[derive(Debug, Serialize)]
pub struct OracleResult {
    pub domain_hash: String,
    pub a: [f64; 2],
    pub z: [f64; 2],
    pub z_sum: f64,
    pub z_plus: f64,
    pub z_minus: f64,
    pub spinor: [f64; 2],
}

/// Run the enumeration oracle at `(a, z)` and package the result.
pub fn cmd_oracle(domain: &DiscreteDomain, a: Point, z: Point) -> Result<OracleResult> {
    let (zf, zp, zm) = contours::partition_functions(domain, a)?;
    let f = contours::oracle_spinor(domain, a, z)?;
    Ok(OracleResult {
        domain_hash: domain_hash(domain),
        a: {
            let c = a.embed(domain.mesh());
            [c.re, c.im]
        },
        z: {
            let c = z.embed(domain.mesh());
            [c.re, c.im]
        },
        z_sum: zf,
        z_plus: zp,
        z_minus: zm,
        spinor: [f.re, f.im],
    })
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

impl std::str::FromStr for VerifyLevel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quick" => Ok(VerifyLevel::Quick),
            "full" => Ok(VerifyLevel::Full),
            other => Err(format!("unknown level {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Run the named invariant suites; returns one result per check.
pub fn cmd_verify(level: VerifyLevel, seed: u64) -> Vec<CheckResult> {
    let mut results = Vec::new();
    let mut check = |name: &'static str, outcome: Result<(bool, String)>| {
        let (passed, detail) = match outcome {
            Ok((p, d)) => (p, d),
            Err(e) => (false, format!("error: {e}")),
        };
        results.push(CheckResult {
            name,
            passed,
            detail,
        });
    };

    check(
        "coupling-exact-table",
        (|| {
            let mut worst: f64 = 0.0;
            for x in -2i64..=2 {
                for y in -2i64..=2 {
                    if let Some(exact) = coupling::c0_exact(x, y) {
                        worst = worst.max((coupling::c0_quadrature(x, y)? - exact).norm());
                    }
                }
            }
            Ok((
                worst < 1e-10,
                format!("max |quadrature - exact| = {worst:.3e}"),
            ))
        })(),
    );

    check(
        "full-plane-singularity-closed-form",
        (|| {
            let eval = CouplingEvaluator::default();
            let r = coupling::check_full_plane_singularity(&eval)?;
            Ok((r < 1e-14, format!("residual {r:.3e}")))
        })(),
    );

    check(
        "full-plane-singularity-quadrature",
        (|| {
            let eval = CouplingEvaluator::quadrature_only(1e-11);
            let r = coupling::check_full_plane_singularity(&eval)?;
            Ok((r < 1e-8, format!("residual {r:.3e}")))
        })(),
    );

    check(
        "kenyon-asymptotics",
        (|| {
            let mut worst: f64 = 0.0;
            for (x, y) in [(0i64, 21i64), (41, 0), (11, 4), (4, 11), (21, 20), (15, 8)] {
                let d = (coupling::c0_quadrature(x, y)? - coupling::c0_asymptotic(x, y)?).norm();
                worst = worst.max(d * (x * x + y * y) as f64);
            }
            Ok((worst <= 5.0, format!("max |diff|·|z|² = {worst:.3}")))
        })(),
    );

    check(
        "oracle-solver-equivalence",
        (|| {
            let mut worst: f64 = 0.0;
            for (_, dom) in gallery::small_domains() {
                let a = dom.horizontal_edges().next().expect("horizontal edge");
                let field = spinor::solve_spinor(&dom, a)?;
                for m in dom.medial_vertices() {
                    let oracle = contours::oracle_spinor(&dom, a, m)?;
                    worst = worst.max((oracle - field.value(m).unwrap()).norm());
                }
            }
            Ok((worst < 1e-9, format!("max |solver - oracle| = {worst:.3e}")))
        })(),
    );

    check(
        "winding-well-definedness",
        (|| {
            let mut walks = 0usize;
            for (_, dom) in gallery::small_domains() {
                if dom.edge_count() > 12 {
                    continue;
                }
                for a in dom.horizontal_edges() {
                    for z in dom.medial_vertices() {
                        if z == a {
                            continue;
                        }
                        for cfg in contours::enumerate_spinor_configs(&dom, a, z)? {
                            let wc = contours::winding_well_defined(&cfg);
                            if !wc.consistent {
                                return Ok((false, format!("inconsistent at {z}")));
                            }
                            walks += wc.walk_count;
                        }
                    }
                }
            }
            Ok((true, format!("{walks} walks checked")))
        })(),
    );

    check(
        "energy-identities",
        (|| {
            use contours::exact::QSqrt2;
            for (name, dom) in gallery::small_domains() {
                for a in dom.horizontal_edges() {
                    let plus = contours::oracle_energy_plus_exact(&dom, a)?;
                    let [x, y] = a.edge_endpoints();
                    let ht = contours::high_temp_correlation_exact(&dom, x, y)?;
                    let free = &ht - &QSqrt2::sqrt2().scale(1, 2);
                    if free != -&plus {
                        return Ok((false, format!("identity fails on {name}")));
                    }
                }
            }
            Ok((true, "high-temp = -low-temp exactly in ℚ(√2)".into()))
        })(),
    );

    check(
        "boundary-phase",
        (|| {
            let mut worst: f64 = 0.0;
            for (_, dom) in gallery::small_domains() {
                let a = dom.horizontal_edges().next().unwrap();
                let field = spinor::solve_spinor(&dom, a)?;
                worst = worst.max(field.boundary_residual(&dom));
            }
            Ok((
                worst < 1e-12,
                format!("max |Im(f ν^{{1/2}})| = {worst:.3e}"),
            ))
        })(),
    );

    check(
        "integral-structure",
        (|| {
            let dom = gallery::block(7, 7);
            let a = dom.nearest_horizontal_midpoint(Complex64::new(3.0, 3.0))?;
            let field = spinor::solve_spinor(&dom, a)?;
            let base = *dom.vertices().iter().next().unwrap();
            let int = integral::discrete_integral(&dom, &field, base)?;
            let report = integral::check_sub_super(&dom, &field, &int, 1e-9)?;
            Ok((
                report.clean() && report.dual_boundary_spread < 1e-9,
                format!(
                    "violations {}+{}, I° spread {:.3e}",
                    report.primal_violations.len(),
                    report.dual_violations.len(),
                    report.dual_boundary_spread
                ),
            ))
        })(),
    );

    check(
        "domain-monotonicity",
        (|| {
            let e = Point::new(1, 0);
            let mut plus_values = Vec::new();
            for (_, dom) in gallery::nested_domains() {
                plus_values.push(contours::oracle_energy_plus(&dom, e)?);
            }
            let plus_mono = plus_values.windows(2).all(|w| w[0] >= w[1] - 1e-15);
            let free_mono = plus_values.windows(2).all(|w| -w[0] <= -w[1] + 1e-15);
            Ok((
                plus_mono && free_mono,
                format!("⟨ε⟩⁺ along nesting: {plus_values:?}"),
            ))
        })(),
    );

    if level == VerifyLevel::Full {
        check(
            "mc-unit-cell",
            (|| {
                let dom = gallery::unit_cell();
                let a = Point::new(1, 0);
                let exact = (4.0 * crate::beta_critical()).tanh() - crate::MEAN_FIELD_ENERGY;
                let params = McParams {
                    sweeps: 100_000,
                    burn_in: 1000,
                    seed,
                    ..Default::default()
                };
                let est = mc::estimate_energy(&dom, a, Boundary::Plus, &params)?;
                Ok((
                    est.compatible_with(exact, 3.0),
                    format!("{:.6} ± {:.6} vs {exact:.6}", est.mean, est.std_error),
                ))
            })(),
        );

        check(
            "mc-solver-8x8",
            (|| {
                let dom = gallery::block(8, 8);
                let a = dom.nearest_horizontal_midpoint(Complex64::new(3.5, 3.5))?;
                let solver = spinor::energy_density(&dom, a)?.0;
                let params = McParams {
                    sweeps: 200_000,
                    burn_in: 2000,
                    seed,
                    ..Default::default()
                };
                let est = mc::estimate_energy(&dom, a, Boundary::Plus, &params)?;
                Ok((
                    est.compatible_with(solver, 3.0),
                    format!(
                        "{:.6} ± {:.6} vs solver {solver:.6}",
                        est.mean, est.std_error
                    ),
                ))
            })(),
        );

        check(
            "low-temp-bijection",
            (|| {
                let mut checked = 0;
                for (name, dom) in gallery::small_domains() {
                    match contours::low_temp_bijection_check(&dom) {
                        Ok(report) => {
                            if !(report.bijective && report.weights_match) {
                                return Ok((false, format!("bijection fails on {name}")));
                            }
                            checked += 1;
                        }
                        // Domains with non-square bounded faces are outside the
                        // cellular dual model; the bijection is not asserted there.
                        Err(Error::NotCellular(..)) => {}
                        Err(e) => return Err(e),
                    }
                }
                Ok((
                    true,
                    format!("{checked} domains: states ↔ even subsets with α^|ω| weights"),
                ))
            })(),
        );
    }

    results
}

/// Print one line per check; non-zero exit status when any failed.
pub fn print_verify_report(results: &[CheckResult]) -> i32 {
    let mut status = 0;
    for r in results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {:-32} {}", r.name, r.detail);
        if !r.passed {
            status = 1;
        }
    }
    status
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_and_point_parsing() {
        assert!(matches!(
            parse_region("disk:0,0,1").unwrap(),
            Region::Disk { .. }
        ));
        assert!(matches!(
            parse_region("rect:0,0,2,1").unwrap(),
            Region::Rectangle { .. }
        ));
        assert!(matches!(
            parse_region("square:1").unwrap(),
            Region::Rectangle { .. }
        ));
        assert!(matches!(
            parse_region("polygon:0,0;1,0;1,1").unwrap(),
            Region::Polygon { .. }
        ));
        assert!(parse_region("blob:1").is_err());
        assert_eq!(parse_point("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert_eq!(
            parse_mesh_list("1/16,1/32").unwrap(),
            vec![1.0 / 16.0, 1.0 / 32.0]
        );
    }

    #[test]
    fn sweep_spec_validation() {
        let spec = SweepSpec {
            region: Region::unit_disk(),
            a: Complex64::new(0.0, 0.0),
            meshes: vec![0.25, 0.5],
            name: "bad".into(),
        };
        assert!(spec.validate().is_err());
        let spec = SweepSpec {
            meshes: vec![0.5, 0.25],
            ..spec
        };
        assert!(spec.validate().is_ok());
        // Disk targets exist; rectangles emit none.
        assert!(spec.target().is_some());
        let rect = SweepSpec {
            region: Region::square(1.0),
            a: Complex64::new(0.5, 0.5),
            meshes: vec![0.25],
            name: "rect".into(),
        };
        assert!(rect.target().is_none());
    }

    #[test]
    fn sweep_records_per_mesh_failures_and_continues() {
        // The coarsest mesh has no vertex inside the disk; the sweep records
        // the failure and still solves the finer meshes.
        let spec = SweepSpec {
            region: Region::Disk {
                center: [0.3, 0.3],
                radius: 0.2,
            },
            a: Complex64::new(0.3, 0.3),
            meshes: vec![2.0, 1.0 / 16.0],
            name: "partial".into(),
        };
        let report = cmd_sweep(&spec, 1e-9).unwrap();
        assert!(report.records[0].error.is_some());
        assert!(report.records[0].plus_over_delta.is_none());
        assert!(report.records[1].error.is_none());
        assert!(report.records[1].plus_over_delta.is_some());
    }

    #[test]
    fn small_sweep_runs_and_reports() {
        let spec = SweepSpec {
            region: Region::unit_disk(),
            a: Complex64::new(0.0, 0.0),
            meshes: vec![1.0 / 4.0, 1.0 / 8.0],
            name: "smoke".into(),
        };
        let report = cmd_sweep(&spec, 1e-9).unwrap();
        assert_eq!(report.records.len(), 2);
        for r in &report.records {
            assert!(r.error.is_none(), "{:?}", r.error);
            assert!(r.rel_error.is_some());
        }
    }

    #[test]
    fn domain_hash_is_stable() {
        let d1 = gallery::unit_cell();
        let d2 = gallery::unit_cell();
        assert_eq!(domain_hash(&d1), domain_hash(&d2));
        assert_ne!(domain_hash(&d1), domain_hash(&gallery::block(3, 2)));
    }

    #[test]
    fn failed_checks_are_named_and_fail_the_run() {
        let results = vec![
            CheckResult {
                name: "coupling-exact-table",
                passed: true,
                detail: "ok".into(),
            },
            CheckResult {
                name: "full-plane-singularity-closed-form",
                passed: false,
                detail: "injected fault".into(),
            },
        ];
        assert_eq!(print_verify_report(&results), 1);
        assert_eq!(print_verify_report(&results[..1]), 0);
    }
}
