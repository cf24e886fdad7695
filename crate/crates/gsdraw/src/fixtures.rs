//! Small hand-built maps used by tests, benchmarks and the CLI.

use crate::embed::from_coordinates;
use crate::map::{build_map, MapSpec, PlanarMap};

/// The unit square; vertices `v1..v4 = 0..3`.
pub fn square() -> PlanarMap {
    build_map(&MapSpec {
        edges: vec![[0, 1], [1, 2], [2, 3], [3, 0]],
        rotations: vec![vec![0, 7], vec![2, 1], vec![4, 3], vec![5, 6]],
        outer_dart: 7,
        outer_vertices: Some([0, 1, 2, 3]),
        root_vertex: None,
    })
    .expect("square fixture")
}

/// Square with the diagonal `v1 v3`.
pub fn square_diagonal() -> PlanarMap {
    from_coordinates(&[(0, 0), (0, 2), (2, 2), (2, 0)], &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], [0, 1, 2, 3])
        .expect("diagonal fixture")
}

/// Outer square, inner square `a b c d` (4..8) and spokes `v_i` to the
/// matching inner vertex.
pub fn cube() -> PlanarMap {
    let pts = [(0, 0), (0, 6), (6, 6), (6, 0), (2, 2), (2, 4), (4, 4), (4, 2)];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)];
    from_coordinates(&pts, &edges, [0, 1, 2, 3]).expect("cube fixture")
}

/// Square with a central vertex joined to the four corners.
pub fn wheel() -> PlanarMap {
    let pts = [(0, 0), (0, 2), (2, 2), (2, 0), (1, 1)];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)];
    from_coordinates(&pts, &edges, [0, 1, 2, 3]).expect("wheel fixture")
}

/// A triangulation with a vertex of degree 4 used to build non-planar rotations.
pub fn k4_like_triangulation() -> PlanarMap {
    wheel()
}

/// Square plus diagonal `v1 v3` plus a vertex `u` (4) inside `v1 v2 v3`
/// joined to its three corners; `(v1, v2, v3)` is a separating triangle.
pub fn non_adapted() -> PlanarMap {
    let pts = [(0, 0), (0, 6), (6, 6), (6, 0), (2, 4)];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 0), (4, 1), (4, 2)];
    from_coordinates(&pts, &edges, [0, 1, 2, 3]).expect("non-adapted fixture")
}

/// Square with a path `v1 x v4` below, leaving an inner pentagon.
pub fn pentagon() -> PlanarMap {
    let pts = [(0, 0), (0, 6), (6, 6), (6, 0), (3, 2)];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 3)];
    from_coordinates(&pts, &edges, [0, 1, 2, 3]).expect("pentagon fixture")
}

/// `k x k` grid surrounded by the outer square, each grid side fanned to one
/// outer vertex. Adapted for `k >= 2`, with `k^2 + 4` vertices.
pub fn fanned_grid(k: usize) -> PlanarMap {
    assert!(k >= 2);
    let k64 = k as i64;
    let mut pts = vec![(0, 0), (0, k64 + 1), (k64 + 1, k64 + 1), (k64 + 1, 0)];
    let g = |i: usize, j: usize| 4 + i * k + j;
    for i in 0..k {
        for j in 0..k {
            pts.push((i as i64 + 1, j as i64 + 1));
        }
    }
    let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
    for i in 0..k {
        for j in 0..k {
            if i + 1 < k {
                edges.push((g(i, j), g(i + 1, j)));
            }
            if j + 1 < k {
                edges.push((g(i, j), g(i, j + 1)));
            }
        }
    }
    for t in 0..k {
        edges.push((0, g(0, t)));
        edges.push((1, g(t, k - 1)));
        edges.push((2, g(k - 1, t)));
        edges.push((3, g(t, 0)));
    }
    from_coordinates(&pts, &edges, [0, 1, 2, 3]).expect("grid fixture")
}

/// Nested squares joined by spokes; `layers` inner squares. A quadrangulation.
pub fn nested_squares(layers: usize) -> PlanarMap {
    let mut pts = Vec::new();
    let mut edges = Vec::new();
    let s = 2 * (layers as i64 + 1);
    for l in 0..=layers {
        let o = l as i64;
        let base = pts.len();
        pts.extend([(o, o), (o, s - o), (s - o, s - o), (s - o, o)]);
        for i in 0..4 {
            edges.push((base + i, base + (i + 1) % 4));
            if l > 0 {
                edges.push((base + i - 4, base + i));
            }
        }
    }
    from_coordinates(&pts, &edges, [0, 1, 2, 3]).expect("nested fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::classify_34_square;

    #[test]
    fn fixtures_are_classified() {
        for m in [square(), square_diagonal(), cube(), wheel(), fanned_grid(3), nested_squares(2)] {
            let r = classify_34_square(&m);
            assert!(r.is_34_angulation && r.is_adapted, "{r:?}");
        }
        assert_eq!(fanned_grid(4).vertex_count(), 20);
    }
}
