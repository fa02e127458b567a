//! The discrete antiderivative of -Re ∫ f²: single-valued on simply
//! connected domains, subharmonic on primal vertices, superharmonic on dual
//! vertices (except next to the source), constant on the dual boundary, with
//! outward normal derivative -|f|².

use num_complex::Complex64;

use ising_energy::lattice::gallery;
use ising_energy::spinor::{integral, solve_spinor};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dom = gallery::block(12, 12);
    let a = dom.nearest_horizontal_midpoint(Complex64::new(5.5, 5.5))?;
    let field = solve_spinor(&dom, a)?;
    let base = *dom.vertices().iter().next().unwrap();
    let int = integral::discrete_integral(&dom, &field, base)?;

    println!("12×12 square, source at the center");
    println!("  path-independence spread : {:.2e}", int.consistency);

    let report = integral::check_sub_super(&dom, &field, &int, 1e-9)?;
    println!(
        "  subharmonicity violations (primal, excluding a±δ/2) : {}",
        report.primal_violations.len()
    );
    println!(
        "  superharmonicity violations (dual, excluding a±iδ/2): {}",
        report.dual_violations.len()
    );
    println!(
        "  worst defect at the excluded source points          : {:.3e}",
        report.source_defect
    );
    println!(
        "  I° spread on the dual boundary                      : {:.2e}",
        report.dual_boundary_spread
    );
    println!(
        "  max |∂_ν I• - (Im² - Re²)(f ν^½)|                   : {:.2e}",
        report.normal_identity_residual
    );
    println!(
        "  max |∂_ν I• + |f(m)|²|                              : {:.2e}",
        report.spinor_normal_residual
    );

    // A few values along the diagonal, showing the sandwich I° ≤ I•.
    println!("\n  I along the diagonal (primal vs adjacent dual):");
    for k in [1i64, 3, 5, 7, 9] {
        use integral::Node;
        let b = ising_energy::lattice::Point::vertex(k, k);
        let w = b.offset(1, 1);
        if let (Some(ib), Some(iw)) = (int.value(Node::Primal(b)), int.value(Node::Dual(w))) {
            println!(
                "    vertex ({k},{k}): I• = {ib:+.6}, I° = {iw:+.6}, I• - I° = {:+.3e}",
                ib - iw
            );
        }
    }
    Ok(())
}
