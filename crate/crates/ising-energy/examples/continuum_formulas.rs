//! Closed-form continuum objects: Möbius frames on disks, the hyperbolic
//! metric element, the continuous spinors and their boundary behavior.

use num_complex::Complex64;

use ising_energy::continuum::{
    boundary_condition_residual, boundary_square_integral, continuous_spinor, diagonal_difference,
    full_plane_continuous, hyperbolic_element, ConformalFrame,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // ℓ_Ω(a) = 2 ψ_a'(a) on the unit disk: 2/(1-|a|²).
    println!("hyperbolic metric element on the unit disk:");
    for a in [0.0, 0.4, 0.8] {
        let frame = ConformalFrame::unit_disk(Complex64::new(a, 0.0))?;
        println!(
            "  a = {a:.1}: ℓ = {:.8} (formula 2/(1-|a|²) = {:.8})",
            hyperbolic_element(&frame),
            2.0 / (1.0 - a * a)
        );
    }

    // The spinor has a simple pole of residue 1/2π at the source.
    let a = Complex64::new(0.25, 0.1);
    let frame = ConformalFrame::unit_disk(a)?;
    println!("\nresidue check at a = {a}:");
    for h in [1e-3, 1e-4, 1e-5] {
        let z = a + Complex64::new(h, 0.0);
        let f = continuous_spinor(&frame, z)?;
        println!(
            "  h = {h:.0e}: h·f(a, a+h) = {:.8} (→ 1/2π = {:.8})",
            (f * Complex64::new(h, 0.0)).re,
            1.0 / (2.0 * std::f64::consts::PI)
        );
    }

    // (f_Ω - f_C)(a,a) = ψ'(a)/2π, and 2·that = ℓ/2π — the energy-density
    // limit.
    println!("\ndiagonal difference:");
    println!("  (f_Ω - f_C)(a,a) = {:.8}", diagonal_difference(&frame));
    println!(
        "  2·(f_Ω - f_C)(a,a) = {:.8} = ℓ/2π = {:.8}",
        2.0 * diagonal_difference(&frame),
        hyperbolic_element(&frame) / (2.0 * std::f64::consts::PI)
    );

    // Boundary behavior: Im(f_Ω ν^½) = 0 on the circle; the full-plane spinor
    // alone does not satisfy it.
    println!("\nboundary condition Im(f ν^½) = 0 on |z| = 1:");
    println!(
        "  f_Ω residual over 360 samples: {:.2e}",
        boundary_condition_residual(&frame, 360)?
    );
    let mut fc_worst: f64 = 0.0;
    for i in 0..360 {
        let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / 360.0;
        let (z, nu) = frame.boundary_point(theta);
        fc_worst = fc_worst.max((full_plane_continuous(a, z) * nu.sqrt()).im.abs());
    }
    println!("  f_C residual (not small):      {fc_worst:.3}");

    // F = -Re ∫ f² is constant along the boundary.
    println!("\nRe ∫ f_Ω² dz along boundary arcs:");
    for (t0, t1) in [(0.0, 1.0), (1.0, 4.0)] {
        println!(
            "  θ ∈ [{t0}, {t1}]: {:.2e}",
            boundary_square_integral(&frame, t0, t1, 4000)?
        );
    }
    Ok(())
}
