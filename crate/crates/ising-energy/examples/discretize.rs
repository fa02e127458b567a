//! Build discrete domains from continuum regions and inspect their
//! structure: vertices, edges, dual graph, medial graph, and the
//! multiplicity-aware boundary.

use ising_energy::lattice::{DiscreteDomain, Region};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, region, mesh) in [
        ("open unit square, δ = 1/3", Region::square(1.0), 1.0 / 3.0),
        ("unit disk, δ = 1/8", Region::unit_disk(), 0.125),
        (
            "L-shaped polygon, δ = 1/6",
            Region::Polygon {
                vertices: vec![
                    [0.0, 0.0],
                    [1.0, 0.0],
                    [1.0, 0.5],
                    [0.5, 0.5],
                    [0.5, 1.0],
                    [0.0, 1.0],
                ],
            },
            1.0 / 6.0,
        ),
    ] {
        let dom = DiscreteDomain::discretize(&region, mesh)?;
        println!("{label}");
        println!("  vertices          : {}", dom.vertex_count());
        println!(
            "  edges             : {} ({} horizontal, {} vertical)",
            dom.edge_count(),
            dom.horizontal_edges().count(),
            dom.vertical_edges().count()
        );
        println!("  dual vertices     : {}", dom.dual_vertices().len());
        println!("  boundary entries  : {}", dom.boundary_edges().len());
        println!("  medial vertices   : {}", dom.medial_vertices().len());
        println!("  medial edges      : {}", dom.medial_edges().len());
        println!("  bounded faces (Euler): {}", dom.euler_bounded_faces());

        // The boundary is one entry per boundary edge: an outside grid point
        // shared by two boundary edges appears twice.
        let distinct_outside: std::collections::BTreeSet<_> =
            dom.boundary_edges().iter().map(|b| b.outside).collect();
        println!(
            "  distinct outside points: {} (multiplicity {})",
            distinct_outside.len(),
            dom.boundary_edges().len() - distinct_outside.len()
        );

        // Round-trip through the versioned JSON document.
        let doc = dom.to_json();
        let reloaded = DiscreteDomain::from_json(&doc)?;
        assert_eq!(reloaded.vertices(), dom.vertices());
        println!("  JSON round-trip   : ok\n");
    }
    Ok(())
}
