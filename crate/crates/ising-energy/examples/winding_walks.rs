//! Spinor configurations and their admissible walks: the winding number is
//! well defined mod 4π no matter which turns the walk takes at 4-valent
//! ambiguities.

use ising_energy::contours::{
    admissible_windings, enumerate_spinor_configs, oracle_spinor, winding_phase,
    winding_well_defined,
};
use ising_energy::lattice::{gallery, Point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dom = gallery::block(3, 3);
    let a = Point::new(1, 0);
    println!("3×3 block, source a at the bottom-left horizontal edge\n");

    let mut total_configs = 0;
    let mut total_walks = 0;
    let mut max_walks = (0usize, Point::new(0, 0));
    for z in dom.medial_vertices() {
        if z == a {
            continue;
        }
        for cfg in enumerate_spinor_configs(&dom, a, z)? {
            let wc = winding_well_defined(&cfg);
            assert!(wc.consistent, "walks disagree mod 4π at z = {z}");
            total_configs += 1;
            total_walks += wc.walk_count;
            if wc.walk_count > max_walks.0 {
                max_walks = (wc.walk_count, z);
            }
        }
    }
    println!("configurations checked : {total_configs}");
    println!("admissible walks       : {total_walks}");
    println!(
        "most branched          : {} walks for one γ at z = {}",
        max_walks.0, max_walks.1
    );

    // A closer look at one configuration with an ambiguity.
    let z = Point::new(5, 4);
    println!("\nconfigurations from a to z = {z}:");
    for cfg in enumerate_spinor_configs(&dom, a, z)? {
        let ws = admissible_windings(&cfg);
        let class = ws[0].rem_euclid(8);
        let phase = winding_phase(class);
        println!(
            "  |γ| = {:4.1}, {} walk(s), winding {}·π/2 mod 4π, e^(-iW/2) = {:.4}{:+.4}i",
            cfg.double_size() as f64 / 2.0,
            ws.len(),
            class,
            phase.re,
            phase.im
        );
        assert!(ws.iter().all(|w| w.rem_euclid(8) == class));
    }

    let f = oracle_spinor(&dom, a, z)?;
    println!(
        "\nf(a, z) = Σ α^|γ| e^(-iW/2) / Z = {:.10}{:+.10}i",
        f.re, f.im
    );
    Ok(())
}
