//! Grid drawings shared by the primal and dual pipelines.

use serde::{Deserialize, Serialize};

use crate::map::{PlanarMap, Vertex};

pub type Point = (i64, i64);

/// Compass direction of a dangling arrow: 1 west, 2 north, 3 east, 4 south.
pub fn direction_vector(k: u8) -> Point {
    match k {
        1 => (-1, 0),
        2 => (0, 1),
        3 => (1, 0),
        _ => (0, -1),
    }
}

/// Direction of a nonzero axis-parallel vector.
pub fn direction_of(v: Point) -> Option<u8> {
    match (v.0.signum(), v.1.signum()) {
        (-1, 0) => Some(1),
        (0, 1) => Some(2),
        (1, 0) => Some(3),
        (0, -1) => Some(4),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub edge: usize,
    pub from: Vertex,
    pub direction: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDrawing {
    /// `None` for the root vertex of a dual drawing
    pub coords: Vec<Option<Point>>,
    /// polyline of edge `e` from `endpoints(e).0` to `endpoints(e).1`;
    /// `None` for root edges
    pub polylines: Vec<Option<Vec<Point>>>,
    pub width: i64,
    pub height: i64,
    pub arrows: Option<Vec<Arrow>>,
    pub method: String,
}

impl GridDrawing {
    pub fn straight_line(m: &PlanarMap, coords: &[(u64, u64)], method: &str) -> Self {
        let coords: Vec<Option<Point>> = coords.iter().map(|&(x, y)| Some((x as i64, y as i64))).collect();
        let polylines = (0..m.edge_count())
            .map(|e| {
                let (u, v) = m.endpoints(e);
                Some(vec![coords[u].unwrap(), coords[v].unwrap()])
            })
            .collect();
        Self::new(coords, polylines, None, method)
    }

    pub fn new(
        coords: Vec<Option<Point>>,
        polylines: Vec<Option<Vec<Point>>>,
        arrows: Option<Vec<Arrow>>,
        method: &str,
    ) -> Self {
        let mut d = GridDrawing { coords, polylines, width: 0, height: 0, arrows, method: method.to_string() };
        let (w, h) = d.extent();
        d.width = w;
        d.height = h;
        d
    }

    fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.coords.iter().flatten().copied().chain(self.polylines.iter().flatten().flatten().copied())
    }

    /// Width and height of the bounding box of vertices and bends.
    pub fn extent(&self) -> (i64, i64) {
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for (x, y) in self.points() {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (0, 0)
        } else {
            (x1 - x0, y1 - y0)
        }
    }

    pub fn point(&self, v: Vertex) -> Option<Point> {
        self.coords[v]
    }

    pub fn bend_count(&self) -> usize {
        self.polylines.iter().flatten().map(|p| p.len().saturating_sub(2)).sum()
    }

    pub fn straight_count(&self) -> usize {
        self.polylines.iter().flatten().filter(|p| p.len() == 2).count()
    }

    /// Every vertical and horizontal grid line of the bounding box holds a vertex.
    pub fn every_line_occupied(&self) -> bool {
        let pts: Vec<Point> = self.coords.iter().flatten().copied().collect();
        if pts.is_empty() {
            return true;
        }
        let x0 = pts.iter().map(|p| p.0).min().unwrap();
        let y0 = pts.iter().map(|p| p.1).min().unwrap();
        let mut xs = vec![false; self.width as usize + 1];
        let mut ys = vec![false; self.height as usize + 1];
        for (x, y) in pts {
            if let Some(s) = xs.get_mut((x - x0) as usize) {
                *s = true;
            }
            if let Some(s) = ys.get_mut((y - y0) as usize) {
                *s = true;
            }
        }
        xs.into_iter().chain(ys).all(|b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn unit_square_extent() {
        let m = fixtures::square();
        let d = GridDrawing::straight_line(&m, &[(0, 0), (0, 1), (1, 1), (1, 0)], "test");
        assert_eq!((d.width, d.height), (1, 1));
        assert_eq!(d.bend_count(), 0);
        assert!(d.every_line_occupied());
    }

    #[test]
    fn directions_round_trip() {
        for k in 1..=4 {
            assert_eq!(direction_of(direction_vector(k)), Some(k));
        }
        assert_eq!(direction_of((1, 1)), None);
    }
}
