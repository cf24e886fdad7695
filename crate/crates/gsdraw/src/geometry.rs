//! Exact integer geometry: segment predicates, face validity, a quadratic
//! crossing oracle and the reconstruction of a labeling from a drawing.

use serde::{Deserialize, Serialize};

use crate::drawing::{direction_vector, GridDrawing, Point};
use crate::labeling::{shift, verify_labeling, CornerLabeling};
use crate::map::{edge_of, Dart, Face, PlanarMap, Vertex};

pub fn orient(a: Point, b: Point, c: Point) -> i128 {
    let (abx, aby) = ((b.0 - a.0) as i128, (b.1 - a.1) as i128);
    let (acx, acy) = ((c.0 - a.0) as i128, (c.1 - a.1) as i128);
    (abx * acy - aby * acx).signum()
}

/// `p` on the closed segment `[a, b]`, assuming collinearity.
fn within(p: Point, a: Point, b: Point) -> bool {
    a.0.min(b.0) <= p.0 && p.0 <= a.0.max(b.0) && a.1.min(b.1) <= p.1 && p.1 <= a.1.max(b.1)
}

pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    orient(a, b, p) == 0 && within(p, a, b)
}

/// Closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within(c, a, b))
        || (o2 == 0 && within(d, a, b))
        || (o3 == 0 && within(a, c, d))
        || (o4 == 0 && within(b, c, d))
}

/// The intersection of two closed segments is exactly `{p}` with `p` an
/// endpoint of both.
fn touch_only_at(a: Point, b: Point, c: Point, d: Point, p: Point) -> bool {
    if !((a == p || b == p) && (c == p || d == p)) {
        return false;
    }
    let (a2, b2) = if a == p { (a, b) } else { (b, a) };
    let (_, d2) = if c == p { (c, d) } else { (d, c) };
    // two segments from a common point overlap only when they point the same way
    if orient(a2, b2, d2) != 0 {
        return true;
    }
    let (u, v) = ((b2.0 - a2.0, b2.1 - a2.1), (d2.0 - a2.0, d2.1 - a2.1));
    (u.0 as i128 * v.0 as i128 + u.1 as i128 * v.1 as i128) < 0
}

/// Twice the signed area; negative for a clockwise polygon under y-up.
pub fn signed_area2(poly: &[Point]) -> i128 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p.0 as i128 * q.1 as i128 - q.0 as i128 * p.1 as i128
        })
        .sum()
}

/// Closed polygon without repeated points or self-intersections.
pub fn polygon_is_simple(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if poly[i] == poly[j] {
                return false;
            }
        }
    }
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (poly[j], poly[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                let p = if j == i + 1 { b } else { a };
                if !touch_only_at(a, b, c, d, p) {
                    return false;
                }
            } else if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Points along dart `d`, excluding its head.
fn dart_points(m: &PlanarMap, g: &GridDrawing, d: Dart) -> Option<Vec<Point>> {
    let line = g.polylines[edge_of(d)].as_ref()?;
    let mut pts: Vec<Point> = if d.is_multiple_of(2) { line.clone() } else { line.iter().rev().copied().collect() };
    pts.pop();
    if pts.first() != Some(&g.coords[m.tail(d)]?) {
        return None;
    }
    Some(pts)
}

/// Polygon of a face contour, or `None` if a point or polyline is missing.
pub fn face_polygon(m: &PlanarMap, g: &GridDrawing, f: Face) -> Option<Vec<Point>> {
    let mut poly = Vec::new();
    for d in m.face_contour(f) {
        poly.extend(dart_points(m, g, d)?);
    }
    Some(poly)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeometryFailure {
    MissingGeometry { edge: usize },
    PolylineEndpoints { edge: usize },
    DegenerateSegment { edge: usize },
    FaceNotSimple { face: Face },
    FaceWrongOrientation { face: Face },
    Crossing { edge_a: usize, edge_b: usize },
    LabelMismatch { dart: Dart, expected: u8, found: u8 },
    LabelNotRecovered { candidates: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelCheck {
    NotChecked,
    Recovered,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub faces_valid: bool,
    pub oracle_clean: bool,
    pub labeling: LabelCheck,
    pub failures: Vec<GeometryFailure>,
}

impl Certificate {
    /// Per-face validity and the crossing oracle both pass.
    pub fn is_planar(&self) -> bool {
        self.faces_valid && self.oracle_clean
    }
    pub fn is_certified(&self) -> bool {
        self.is_planar() && self.labeling != LabelCheck::Failed
    }
}

/// Polylines join their endpoints and have no zero-length segment.
pub fn check_polylines(m: &PlanarMap, g: &GridDrawing, skip_root: bool) -> Vec<GeometryFailure> {
    let mut out = Vec::new();
    for e in 0..m.edge_count() {
        let (u, v) = m.endpoints(e);
        if skip_root && (Some(u) == m.root_vertex() || Some(v) == m.root_vertex()) {
            continue;
        }
        let (Some(line), Some(pu), Some(pv)) = (&g.polylines[e], g.coords[u], g.coords[v]) else {
            out.push(GeometryFailure::MissingGeometry { edge: e });
            continue;
        };
        if line.len() < 2 || line[0] != pu || *line.last().unwrap() != pv {
            out.push(GeometryFailure::PolylineEndpoints { edge: e });
        } else if line.windows(2).any(|w| w[0] == w[1]) {
            out.push(GeometryFailure::DegenerateSegment { edge: e });
        }
    }
    out
}

/// Validity of each listed face: simple polygon, interior on the right of
/// the clockwise contour (negative area), or on the left for `outer`.
pub fn check_faces(m: &PlanarMap, g: &GridDrawing, faces: &[Face], outer: Option<Face>) -> Vec<GeometryFailure> {
    let mut out = Vec::new();
    for &f in faces {
        let Some(poly) = face_polygon(m, g, f) else {
            out.push(GeometryFailure::FaceNotSimple { face: f });
            continue;
        };
        if !polygon_is_simple(&poly) {
            out.push(GeometryFailure::FaceNotSimple { face: f });
            continue;
        }
        let area = signed_area2(&poly);
        let ok = if Some(f) == outer { area > 0 } else { area < 0 };
        if !ok {
            out.push(GeometryFailure::FaceWrongOrientation { face: f });
        }
    }
    out
}

struct Seg {
    edge: usize,
    ends: [Option<Vertex>; 2],
    a: Point,
    b: Point,
}

/// Quadratic oracle over all segments of all edges and the dangling arrows:
/// two segments of different edges may only meet at a common endpoint that
/// is the point of a shared vertex.
pub fn crossing_oracle(m: &PlanarMap, g: &GridDrawing) -> Vec<GeometryFailure> {
    let mut segs = Vec::new();
    for e in 0..m.edge_count() {
        let Some(line) = &g.polylines[e] else { continue };
        let (u, v) = m.endpoints(e);
        for w in line.windows(2) {
            segs.push(Seg { edge: e, ends: [Some(u), Some(v)], a: w[0], b: w[1] });
        }
    }
    if let Some(arrows) = &g.arrows {
        let reach = g.width + g.height + 2;
        for ar in arrows {
            let Some(p) = g.coords[ar.from] else { continue };
            let dv = direction_vector(ar.direction);
            let far = (p.0 + dv.0 * reach * 2 + dv.0, p.1 + dv.1 * reach * 2 + dv.1);
            segs.push(Seg { edge: ar.edge, ends: [Some(ar.from), None], a: p, b: far });
        }
    }
    let mut out = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (s, t) = (&segs[i], &segs[j]);
            if s.edge == t.edge || !segments_intersect(s.a, s.b, t.a, t.b) {
                continue;
            }
            let allowed = s.ends.iter().flatten().any(|&x| {
                t.ends.contains(&Some(x)) && g.coords[x].is_some_and(|p| touch_only_at(s.a, s.b, t.a, t.b, p))
            });
            if !allowed {
                out.push(GeometryFailure::Crossing { edge_a: s.edge, edge_b: t.edge });
            }
        }
    }
    out
}

/// Label candidates for the corners of an inner face, read from the
/// placement of its vertices.
fn face_candidates(m: &PlanarMap, g: &GridDrawing, f: Face) -> Vec<Vec<(Dart, u8)>> {
    let contour = m.face_contour(f);
    let pts: Vec<Point> = contour.iter().map(|&d| g.coords[m.tail(d)].unwrap_or((0, 0))).collect();
    let k = contour.len();
    let mut out = Vec::new();
    if k == 4 {
        for r in 0..4 {
            // u[j]: point of the corner labeled j+1
            let u: Vec<Point> = (0..4).map(|j| pts[(j + 4 - r) % 4]).collect();
            let ok = u[0].0.max(u[1].0) < u[2].0.min(u[3].0) && u[0].1.max(u[3].1) < u[1].1.min(u[2].1);
            if ok {
                out.push((0..4).map(|j| (contour[j], ((j + r) % 4) as u8 + 1)).collect());
            }
        }
    } else if k == 3 {
        for missing in 1..=4u8 {
            let first = shift(missing, 1);
            let turns = (4 - missing) % 4;
            for r in 0..3 {
                // corner (j + r) % 3 gets label first + j
                let mut u = [(0i64, 0i64); 3];
                for (j, slot) in u.iter_mut().enumerate() {
                    let mut p = pts[(j + r) % 3];
                    for _ in 0..turns {
                        p = (p.1, -p.0);
                    }
                    *slot = p;
                }
                let ok = u[0].0 <= u[1].0 && u[1].0 < u[2].0 && u[0].1 < u[2].1 && u[2].1 <= u[1].1;
                if ok {
                    out.push((0..3).map(|j| (contour[(j + r) % 3], shift(first, j as i32))).collect());
                }
            }
        }
    }
    out
}

pub const RECONSTRUCTION_LIMIT: usize = 1 << 12;

/// Labelings consistent with the local geometry of every inner face and
/// passing verification; unique for increasing-function drawings.
pub fn reconstruct_labeling(m: &PlanarMap, g: &GridDrawing) -> Vec<CornerLabeling> {
    let outer = m.outer_face();
    let per_face: Vec<Vec<Vec<(Dart, u8)>>> =
        (0..m.face_count()).filter(|&f| f != outer).map(|f| face_candidates(m, g, f)).collect();
    let total = per_face.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
    if total.is_none_or(|t| t == 0 || t > RECONSTRUCTION_LIMIT) {
        return Vec::new();
    }
    let mut found = Vec::new();
    let mut idx = vec![0usize; per_face.len()];
    loop {
        let mut l = CornerLabeling::empty(m.dart_count());
        for (c, &i) in per_face.iter().zip(&idx) {
            for &(d, lab) in &c[i] {
                l.set(d, lab);
            }
        }
        if verify_labeling(m, &l).is_valid() {
            found.push(l);
        }
        let mut p = 0;
        while p < idx.len() {
            idx[p] += 1;
            if idx[p] < per_face[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == idx.len() {
            break;
        }
    }
    found
}

/// The three checks on a straight-line drawing of a 3,4-angulation of the
/// square. The labeling round trip runs only when `labeling` is given.
pub fn validate_straightline(m: &PlanarMap, labeling: Option<&CornerLabeling>, g: &GridDrawing) -> Certificate {
    let mut failures = check_polylines(m, g, false);
    let faces: Vec<Face> = (0..m.face_count()).collect();
    let face_failures = check_faces(m, g, &faces, Some(m.outer_face()));
    let faces_valid = failures.is_empty() && face_failures.is_empty();
    failures.extend(face_failures);
    let crossings = crossing_oracle(m, g);
    let oracle_clean = crossings.is_empty();
    failures.extend(crossings);
    let check = match labeling {
        None => LabelCheck::NotChecked,
        Some(l) => {
            let found = reconstruct_labeling(m, g);
            if found.len() == 1 && &found[0] == l {
                LabelCheck::Recovered
            } else {
                if found.len() == 1 {
                    for d in 0..m.dart_count() {
                        if found[0].get(d) != l.get(d) {
                            failures.push(GeometryFailure::LabelMismatch {
                                dart: d,
                                expected: l.get(d),
                                found: found[0].get(d),
                            });
                        }
                    }
                } else {
                    failures.push(GeometryFailure::LabelNotRecovered { candidates: found.len() });
                }
                LabelCheck::Failed
            }
        }
    };
    Certificate { faces_valid, oracle_clean, labeling: check, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::labeling::enumerate_labelings;
    use crate::primal::{draw_primal, FaceCountMode, PrimalMethod};
    use crate::structure::derive_structure;

    #[test]
    fn segment_predicates() {
        assert!(segments_intersect((0, 0), (2, 2), (0, 2), (2, 0)));
        assert!(!segments_intersect((0, 0), (1, 0), (0, 1), (1, 1)));
        assert!(segments_intersect((0, 0), (2, 0), (1, 0), (3, 0)));
        assert!(segments_intersect((0, 0), (1, 0), (1, 0), (1, 1)));
        assert!(touch_only_at((0, 0), (1, 0), (1, 0), (1, 1), (1, 0)));
        assert!(!touch_only_at((0, 0), (2, 0), (0, 0), (1, 0), (0, 0)));
        assert!(touch_only_at((0, 0), (2, 0), (0, 0), (-1, 0), (0, 0)));
    }

    #[test]
    fn clockwise_square_has_negative_area() {
        let sq = [(0, 0), (0, 1), (1, 1), (1, 0)];
        assert_eq!(signed_area2(&sq), -2);
        assert!(polygon_is_simple(&sq));
        assert!(!polygon_is_simple(&[(0, 0), (1, 1), (1, 0), (0, 1)]));
    }

    #[test]
    fn unit_square_is_certified() {
        let m = fixtures::square();
        let l = enumerate_labelings(&m).unwrap().pop().unwrap();
        let g = GridDrawing::straight_line(&m, &[(0, 0), (0, 1), (1, 1), (1, 0)], "test");
        let c = validate_straightline(&m, Some(&l), &g);
        assert!(c.is_certified(), "{c:?}");
        assert_eq!(c.labeling, LabelCheck::Recovered);
    }

    #[test]
    fn coincident_vertices_fail() {
        let m = fixtures::square();
        let g = GridDrawing::straight_line(&m, &[(0, 0), (0, 1), (0, 0), (1, 0)], "test");
        let c = validate_straightline(&m, None, &g);
        assert!(!c.is_planar());
        assert!(!c.faces_valid);
    }

    #[test]
    fn primal_methods_certified_on_cube() {
        let m = fixtures::cube();
        for l in enumerate_labelings(&m).unwrap() {
            let s = derive_structure(&m, &l).unwrap();
            for method in [PrimalMethod::FaceCount, PrimalMethod::Increasing, PrimalMethod::Optimized] {
                let g = draw_primal(&m, &l, &s, method, &FaceCountMode::Submap).unwrap();
                let c = validate_straightline(&m, None, &g);
                assert!(c.is_planar(), "{method:?} {c:?}");
            }
            let g = draw_primal(&m, &l, &s, PrimalMethod::Increasing, &FaceCountMode::Submap).unwrap();
            assert_eq!(validate_straightline(&m, Some(&l), &g).labeling, LabelCheck::Recovered);
        }
    }
}
