//! The dimer coupling function C₀: exact small-argument values, quadrature,
//! large-distance asymptotics, and the full-plane spinor built from it.

use ising_energy::coupling::{
    c0_asymptotic, c0_exact, c0_quadrature, check_full_plane_singularity,
    full_plane_spinor_displacement, CouplingEvaluator,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("exact table vs quadrature:");
    for (x, y) in [(1i64, 0i64), (0, 1), (2, 1), (1, 2), (-1, -2), (-2, 1)] {
        let q = c0_quadrature(x, y)?;
        let e = c0_exact(x, y).unwrap();
        println!(
            "  C0({x:+},{y:+}) = {:+.12}{:+.12}i   (error {:.1e})",
            q.re,
            q.im,
            (q - e).norm()
        );
    }

    println!("\nvalues are purely real (x odd) or purely imaginary (x even):");
    for (x, y) in [(3i64, 2i64), (5, 4), (2, 3), (4, 7)] {
        let v = c0_quadrature(x, y)?;
        println!("  C0({x},{y}) = {:+.10}{:+.10}i", v.re, v.im);
    }

    println!("\nasymptotics C0 ≈ Re(1/πz) or i·Im(1/πz); |error|·|z|² stays bounded:");
    for (x, y) in [(11i64, 0i64), (0, 11), (21, 10), (10, 21), (41, 0), (0, 41)] {
        let q = c0_quadrature(x, y)?;
        let a = c0_asymptotic(x, y)?;
        let z2 = (x * x + y * y) as f64;
        println!(
            "  z = {x:+3}{y:+3}i: quad {:+.8}{:+.8}i, asym {:+.8}{:+.8}i, |diff|·|z|² = {:.4}",
            q.re,
            q.im,
            a.re,
            a.im,
            (q - a).norm() * z2
        );
    }

    // The full-plane spinor: diagonal value, neighbors, and the convergence
    // (1/δ) f(a,z) → 1/(2π(z-a)).
    let eval = CouplingEvaluator::default();
    println!("\nfull-plane spinor:");
    let f0 = full_plane_spinor_displacement(&eval, 0, 0)?;
    println!("  f(a,a) = {:.12} (= (2+√2)/4)", f0.re);
    for k in [4i64, 8, 16, 32, 64] {
        let f = full_plane_spinor_displacement(&eval, k, 0)?;
        let scaled = f * (k as f64 / 2.0);
        let target = 1.0 / (2.0 * std::f64::consts::PI);
        println!(
            "  D = {k:3}: (1/δ) f = {:+.8}{:+.8}i, 1/(2π(z-a)) = {target:.8}, err {:.2e}",
            scaled.re,
            scaled.im,
            (scaled - target).norm()
        );
    }

    let r = check_full_plane_singularity(&eval)?;
    println!("\nsource singularity relations: max residual {r:.2e}");
    println!("cache now holds {} displacements", eval.cache_len());
    Ok(())
}
