//! Monte Carlo validation: cluster and single-flip sampling of the critical
//! Ising model with + and free boundary conditions, cross-checked against
//! exact sums and the spinor solver.

use num_complex::Complex64;

use ising_energy::lattice::{gallery, Point};
use ising_energy::mc::{estimate_energy, Algorithm, Boundary, McParams};
use ising_energy::spinor;
use ising_energy::{beta_critical, ALPHA, MEAN_FIELD_ENERGY};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Unit cell, + boundary: one dual spin with four + neighbors, so
    // E[σ] = tanh(4β_c) exactly.
    let cell = gallery::unit_cell();
    let a = Point::new(1, 0);
    let exact = (4.0 * beta_critical()).tanh() - MEAN_FIELD_ENERGY;
    for algorithm in [Algorithm::Cluster, Algorithm::SingleFlip] {
        let params = McParams {
            sweeps: 200_000,
            burn_in: 1_000,
            seed: 2,
            algorithm,
            ..Default::default()
        };
        let est = estimate_energy(&cell, a, Boundary::Plus, &params)?;
        println!(
            "unit cell + ({algorithm:?}): {:+.6} ± {:.6}  exact {exact:+.6}  ({:+.2}σ)",
            est.mean,
            est.std_error,
            (est.mean - exact) / est.std_error
        );
    }

    // Single edge, free boundary: E[σσ] = tanh β_c = α.
    let edge = gallery::single_edge();
    let est = estimate_energy(
        &edge,
        Point::new(1, 0),
        Boundary::Free,
        &McParams {
            sweeps: 200_000,
            burn_in: 1_000,
            seed: 3,
            ..Default::default()
        },
    )?;
    println!(
        "single edge free:          {:+.6} ± {:.6}  exact {:+.6}",
        est.mean,
        est.std_error,
        ALPHA - MEAN_FIELD_ENERGY
    );

    // 8×8 square: the stochastic estimate matches the solver, and the free
    // boundary flips the sign.
    let dom = gallery::block(8, 8);
    let a = dom.nearest_horizontal_midpoint(Complex64::new(3.5, 3.5))?;
    let solver = spinor::energy_density(&dom, a)?;
    println!(
        "\n8×8 square central edge, solver: plus {:+.6}, free {:+.6}",
        solver.0, solver.1
    );
    for (boundary, reference) in [(Boundary::Plus, solver.0), (Boundary::Free, solver.1)] {
        let params = McParams {
            sweeps: 400_000,
            burn_in: 4_000,
            seed: 4,
            chains: 2,
            ..Default::default()
        };
        let est = estimate_energy(&dom, a, boundary, &params)?;
        println!(
            "  MC {:?}: {:+.6} ± {:.6}  ({:+.2}σ from solver)",
            boundary,
            est.mean,
            est.std_error,
            (est.mean - reference) / est.std_error
        );
    }
    Ok(())
}
