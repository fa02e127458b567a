//! Named tiny domains used by the verification suites, examples, and the
//! oracle/solver equivalence tests.

use super::{DiscreteDomain, Point};

fn from_cells(cells: &[(i64, i64)]) -> DiscreteDomain {
    DiscreteDomain::from_vertex_set(cells.iter().map(|&(j, k)| Point::vertex(j, k)), 1.0)
}

/// Rectangular block of `w × h` vertices.
pub fn block(w: i64, h: i64) -> DiscreteDomain {
    DiscreteDomain::from_vertex_set(
        (0..w).flat_map(|j| (0..h).map(move |k| Point::vertex(j, k))),
        1.0,
    )
}

/// The unit cell: 2×2 vertices around a single face.
pub fn unit_cell() -> DiscreteDomain {
    block(2, 2)
}

/// A single horizontal edge.
pub fn single_edge() -> DiscreteDomain {
    block(2, 1)
}

/// Small domains (≤ 16 edges each) with their names, covering rectangles,
/// trees, staircases and re-entrant corners.
pub fn small_domains() -> Vec<(&'static str, DiscreteDomain)> {
    vec![
        ("single-edge", single_edge()),
        ("path-4", block(4, 1)),
        ("unit-cell", unit_cell()),
        ("block-2x3", block(3, 2)),
        ("block-2x4", block(4, 2)),
        ("block-3x3", block(3, 3)),
        ("staircase", from_cells(&[(0, 0), (1, 0), (1, 1), (2, 1)])),
        ("l-tromino", from_cells(&[(0, 0), (1, 0), (0, 1)])),
        ("t-tetromino", from_cells(&[(0, 0), (1, 0), (2, 0), (1, 1)])),
        (
            "s-tetromino",
            from_cells(&[(0, 0), (1, 0), (1, 1), (2, 1), (2, 0)]),
        ),
        (
            "plus-pentomino",
            from_cells(&[(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]),
        ),
        (
            "notched-block",
            from_cells(&[
                (0, 0),
                (1, 0),
                (2, 0),
                (0, 1),
                (2, 1),
                (0, 2),
                (1, 2),
                (2, 2),
            ]),
        ),
    ]
}

/// Nested domains sharing the horizontal edge with midpoint `(1, 0)`
/// (doubled coordinates), ordered by inclusion.
pub fn nested_domains() -> Vec<(&'static str, DiscreteDomain)> {
    vec![
        ("single-edge", single_edge()),
        ("unit-cell-row", block(2, 2)),
        ("block-2x3", block(3, 2)),
        ("block-3x3", block(3, 3)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_domains_are_small_and_connected() {
        for (name, dom) in small_domains() {
            assert!(
                dom.edge_count() <= 16,
                "{name} has {} edges",
                dom.edge_count()
            );
            assert!(
                dom.horizontal_edges().next().is_some(),
                "{name} has no horizontal edge"
            );
        }
    }

    #[test]
    fn nested_domains_share_the_reference_edge() {
        let e = Point::new(1, 0);
        let doms = nested_domains();
        for (name, dom) in &doms {
            assert!(dom.has_edge(e), "{name} misses the shared edge");
        }
        for w in doms.windows(2) {
            let (_, small) = &w[0];
            let (_, large) = &w[1];
            assert!(small.vertices().is_subset(large.vertices()));
        }
    }
}
