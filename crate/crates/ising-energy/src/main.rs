use std::path::PathBuf;

use clap::{Parser, Subcommand};
use ising_energy::cli::{self, GlobalOpts, SweepSpec, VerifyLevel};
use ising_energy::lattice::DiscreteDomain;
use ising_energy::mc::{self, Algorithm, Boundary, McParams};
use ising_energy::spinor::{self, integral};
use ising_energy::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ising-energy",
    version,
    about = "Energy density of the critical planar Ising model"
)]
struct Cli {
    /// RNG seed for stochastic subcommands.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (independent MC chains).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Linear-solver residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Output directory for generated artifacts.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discretize a region and write the domain JSON document.
    Discretize {
        /// Region spec: disk:cx,cy,r | rect:x0,y0,x1,y1 | square:side |
        /// polygon:x1,y1;x2,y2;...
        #[arg(long)]
        region: String,
        #[arg(long)]
        mesh: String,
        #[arg(long, default_value = "domain.json")]
        out: PathBuf,
    },
    /// Solve the spinor BVP and export the field as CSV.
    Solve {
        #[arg(long)]
        domain: PathBuf,
        /// Source point; snapped to the nearest horizontal edge midpoint.
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "field.csv")]
        out: PathBuf,
    },
    /// Print the energy density (plus and free) at a point.
    Energy {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        a: String,
        /// Optional JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence sweep over a mesh list against the continuum target.
    Sweep {
        #[arg(long)]
        region: String,
        #[arg(long)]
        a: String,
        /// Comma-separated decreasing meshes, fractions allowed (1/16,1/32).
        #[arg(long)]
        meshes: String,
        #[arg(long, default_value = "sweep")]
        name: String,
    },
    /// Emit a C₀ coupling-function table as CSV.
    Coupling {
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        #[arg(long, default_value = "coupling.csv")]
        out: PathBuf,
    },
    /// Exact enumeration oracle on a tiny domain.
    Oracle {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        a: String,
        /// Target medial vertex; defaults to a itself.
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the energy density.
    Mc {
        #[arg(long)]
        domain: PathBuf,
        /// plus | free
        #[arg(long)]
        boundary: String,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 100_000)]
        sweeps: usize,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        #[arg(long, default_value = "cluster")]
        algorithm: String,
        #[arg(long, default_value = "est.json")]
        out: PathBuf,
    },
    /// Run the invariant suites and report pass/fail per check.
    Verify {
        /// quick | full
        #[arg(long, default_value = "quick")]
        level: String,
    },
    /// Export computed artifacts (field | integral | coupling).
    Export {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        domain: Option<PathBuf>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_domain(path: &PathBuf) -> Result<DiscreteDomain> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    DiscreteDomain::from_json(&value)
}

fn snapped_source(domain: &DiscreteDomain, a: &str) -> Result<ising_energy::lattice::Point> {
    domain.nearest_horizontal_midpoint(cli::parse_point(a)?)
}

fn run(args: Cli) -> Result<i32> {
    let opts = GlobalOpts {
        seed: args.seed,
        threads: args.threads,
        tolerance: args.tolerance,
        out_dir: args.out_dir.clone(),
    };
    std::fs::create_dir_all(&opts.out_dir)
        .map_err(|e| Error::io(opts.out_dir.display().to_string(), e))?;
    match args.command {
        Command::Discretize { region, mesh, out } => {
            let region = cli::parse_region(&region)?;
            let meshes = cli::parse_mesh_list(&mesh)?;
            let domain = DiscreteDomain::discretize(&region, meshes[0])?;
            let path = opts.out_dir.join(out);
            let mut doc = serde_json::to_string_pretty(&domain.to_json())?;
            doc.push('\n');
            std::fs::write(&path, doc).map_err(|e| Error::io(path.display().to_string(), e))?;
            println!(
                "domain: {} vertices, {} edges, {} boundary entries -> {}",
                domain.vertex_count(),
                domain.edge_count(),
                domain.boundary_edges().len(),
                path.display()
            );
            Ok(0)
        }
        Command::Solve { domain, a, out } => {
            let dom = load_domain(&domain)?;
            let a = snapped_source(&dom, &a)?;
            let system = spinor::assemble_bvp(&dom, a)?;
            let field = spinor::solve_system_tol(&dom, &system, opts.tolerance)?;
            let path = opts.out_dir.join(out);
            cli::export_field(&dom, &field, &path)?;
            println!(
                "solved {} unknowns, residual {:.3e} -> {}",
                system.cols,
                field.residual(),
                path.display()
            );
            Ok(0)
        }
        Command::Energy { domain, a, out } => {
            let dom = load_domain(&domain)?;
            let a = snapped_source(&dom, &a)?;
            let system = spinor::assemble_bvp(&dom, a)?;
            let field = spinor::solve_system_tol(&dom, &system, opts.tolerance)?;
            let (plus, free) = field.energy_density();
            println!("a = {}", a.embed(dom.mesh()));
            println!("plus = {plus}");
            println!("free = {free}");
            if let Some(out) = out {
                let path = opts.out_dir.join(out);
                let doc = serde_json::json!({
                    "a": [a.embed(dom.mesh()).re, a.embed(dom.mesh()).im],
                    "plus": plus,
                    "free": free,
                    "residual": field.residual(),
                });
                let mut s = serde_json::to_string_pretty(&doc)?;
                s.push('\n');
                std::fs::write(&path, s).map_err(|e| Error::io(path.display().to_string(), e))?;
            }
            Ok(0)
        }
        Command::Sweep {
            region,
            a,
            meshes,
            name,
        } => {
            let spec = SweepSpec {
                region: cli::parse_region(&region)?,
                a: cli::parse_point(&a)?,
                meshes: cli::parse_mesh_list(&meshes)?,
                name: name.clone(),
            };
            let report = cli::cmd_sweep(&spec, opts.tolerance)?;
            let files = cli::write_sweep_report(&report, &opts.out_dir, &name)?;
            println!("delta        plus/delta      free/delta      target          rel_error");
            for r in &report.records {
                println!(
                    "{:<12} {:<15} {:<15} {:<15} {:<15}",
                    r.delta,
                    r.plus_over_delta
                        .map(|v| format!("{v:.8}"))
                        .unwrap_or_else(|| "-".into()),
                    r.free_over_delta
                        .map(|v| format!("{v:.8}"))
                        .unwrap_or_else(|| "-".into()),
                    r.target
                        .map(|v| format!("{v:.8}"))
                        .unwrap_or_else(|| "null".into()),
                    r.rel_error
                        .map(|v| format!("{v:.3e}"))
                        .unwrap_or_else(|| "-".into()),
                );
            }
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(0)
        }
        Command::Coupling { radius, out } => {
            let path = opts.out_dir.join(out);
            cli::export_coupling(radius, &path)?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Oracle { domain, a, z, out } => {
            let dom = load_domain(&domain)?;
            let a = snapped_source(&dom, &a)?;
            let z = match z {
                Some(s) => {
                    let target = cli::parse_point(&s)?;
                    // Snap to the nearest medial vertex.
                    let mut best = None;
                    for m in dom.medial_vertices() {
                        let d = (m.embed(dom.mesh()) - target).norm();
                        if best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, m));
                        }
                    }
                    best.expect("domain has medial vertices").1
                }
                None => a,
            };
            let result = cli::cmd_oracle(&dom, a, z)?;
            let mut s = serde_json::to_string_pretty(&result)?;
            s.push('\n');
            match out {
                Some(out) => {
                    let path = opts.out_dir.join(out);
                    std::fs::write(&path, s)
                        .map_err(|e| Error::io(path.display().to_string(), e))?;
                    println!("wrote {}", path.display());
                }
                None => print!("{s}"),
            }
            Ok(0)
        }
        Command::Mc {
            domain,
            boundary,
            a,
            sweeps,
            burn_in,
            algorithm,
            out,
        } => {
            let dom = load_domain(&domain)?;
            let a = snapped_source(&dom, &a)?;
            let boundary: Boundary = boundary.parse().map_err(Error::InvalidSpec)?;
            let algorithm = match algorithm.as_str() {
                "cluster" => Algorithm::Cluster,
                "single-flip" => Algorithm::SingleFlip,
                other => return Err(Error::InvalidSpec(format!("algorithm {other:?}"))),
            };
            let params = McParams {
                sweeps,
                burn_in,
                seed: opts.seed,
                algorithm,
                chains: opts.threads.max(1),
                ..Default::default()
            };
            let est = mc::estimate_energy(&dom, a, boundary, &params)?;
            let doc = serde_json::json!({
                "boundary": match boundary { Boundary::Plus => "plus", Boundary::Free => "free" },
                "a": [a.embed(dom.mesh()).re, a.embed(dom.mesh()).im],
                "sweeps": sweeps,
                "seed": opts.seed,
                "chains": params.chains,
                "estimate": est,
            });
            let path = opts.out_dir.join(out);
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            std::fs::write(&path, s).map_err(|e| Error::io(path.display().to_string(), e))?;
            println!(
                "estimate {} ± {} -> {}",
                est.mean,
                est.std_error,
                path.display()
            );
            Ok(0)
        }
        Command::Verify { level } => {
            let level: VerifyLevel = level.parse().map_err(Error::InvalidSpec)?;
            let results = cli::cmd_verify(level, opts.seed);
            Ok(cli::print_verify_report(&results))
        }
        Command::Export {
            kind,
            domain,
            a,
            radius,
            out,
        } => {
            let path = opts.out_dir.join(out);
            match kind.as_str() {
                "coupling" => {
                    cli::export_coupling(radius, &path)?;
                }
                "field" | "integral" => {
                    let dom = load_domain(
                        domain
                            .as_ref()
                            .ok_or_else(|| Error::InvalidSpec("--domain required".into()))?,
                    )?;
                    let a = snapped_source(
                        &dom,
                        a.as_deref()
                            .ok_or_else(|| Error::InvalidSpec("--a required".into()))?,
                    )?;
                    let field = spinor::solve_spinor(&dom, a)?;
                    if kind == "field" {
                        cli::export_field(&dom, &field, &path)?;
                    } else {
                        let base = *dom.vertices().iter().next().expect("non-empty domain");
                        let int = integral::discrete_integral(&dom, &field, base)?;
                        cli::export_integral(&dom, &int, &path)?;
                    }
                }
                other => return Err(Error::InvalidSpec(format!("export kind {other:?}"))),
            }
            println!("wrote {}", path.display());
            Ok(0)
        }
    }
}

fn main() {
    let args = Cli::parse();
    match run(args) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
