//! Rotation systems from straight-line drawings.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::map::{PlanarMap, Vertex};

pub type Point = (i64, i64);

/// Orders direction vectors counterclockwise starting from the positive x axis.
fn ccw_angle_cmp(a: Point, b: Point) -> Ordering {
    let half = |p: Point| if p.1 > 0 || (p.1 == 0 && p.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&cross)
    })
}

/// Builds the map of a planar straight-line drawing. Edge `e` is oriented
/// `edges[e].0 -> edges[e].1`; the outer face is the one on the right of the
/// dart `v1 -> v4`.
pub fn from_coordinates(points: &[Point], edges: &[(Vertex, Vertex)], outer: [Vertex; 4]) -> Result<PlanarMap> {
    let n = points.len();
    let mut head = Vec::with_capacity(2 * edges.len());
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if u >= n || v >= n {
            return Err(Error::Format(format!("edge {e} out of range")));
        }
        head.push(v);
        head.push(u);
        out[u].push(2 * e);
        out[v].push(2 * e + 1);
    }
    let mut cw_next = vec![0; head.len()];
    for (v, darts) in out.iter_mut().enumerate() {
        let dir = |d: usize| {
            let w = head[d];
            (points[w].0 - points[v].0, points[w].1 - points[v].1)
        };
        // clockwise = decreasing counterclockwise angle
        darts.sort_by(|&a, &b| ccw_angle_cmp(dir(b), dir(a)));
        for i in 0..darts.len() {
            cw_next[darts[i]] = darts[(i + 1) % darts.len()];
        }
    }
    let od = out[outer[0]]
        .iter()
        .copied()
        .find(|&d| head[d] == outer[3])
        .ok_or_else(|| Error::InvalidOuter("no edge v1 v4".into()))?;
    PlanarMap::from_parts(n, head, cw_next, od)?.with_outer_vertices(outer)
}
