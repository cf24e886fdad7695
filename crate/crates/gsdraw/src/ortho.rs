//! Suspended planar orthogonal (SPO) drawings of rooted 3,4-maps from dual
//! labelings: coordinates, edge routing, grid reductions, degree-2 vertices
//! and certification.
//!
//! The root vertex is not placed; its four edges become dangling arrows
//! pointing west, north, east and south for `e*_1..e*_4`.

use serde::{Deserialize, Serialize};

use crate::dag::{ArcKind, ContractionDag, DagArc};
use crate::drawing::{direction_of, direction_vector, Arrow, GridDrawing, Point};
use crate::dual::{
    around, build_dual_contractions, derive_dual_structure, dualize_labels, last_corner, DualDags, DualStructure,
    RootedMap,
};
use crate::error::{Error, Result};
use crate::geometry::{check_faces, check_polylines, crossing_oracle, orient, GeometryFailure};
use crate::labeling::{shift, solve_labeling, CornerLabeling, SolveOptions};
use crate::map::{dual_adapted_via_primal, edge_of, twin, Dart, Face, MapSpec, PlanarMap, Vertex};
use crate::structure::{bit, find};

pub type Placement = Vec<Option<Point>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualMethod {
    FaceCount,
    Increasing,
    Relaxed,
    Weakened,
}

impl DualMethod {
    pub fn name(self) -> &'static str {
        match self {
            DualMethod::FaceCount => "face-count",
            DualMethod::Increasing => "increasing",
            DualMethod::Relaxed => "relaxed",
            DualMethod::Weakened => "weakened",
        }
    }

    pub const ALL: [DualMethod; 4] =
        [DualMethod::FaceCount, DualMethod::Increasing, DualMethod::Relaxed, DualMethod::Weakened];
}

fn reversed(walk: &[Dart]) -> Vec<Dart> {
    walk.iter().rev().map(|&d| twin(d)).collect()
}

/// Faces on the right of a closed walk, flooding across non-walk edges.
pub(crate) fn region_right_of(m: &PlanarMap, walk: &[Dart]) -> Vec<bool> {
    let mut on_walk = vec![false; m.edge_count()];
    let mut in_walk = vec![false; m.dart_count()];
    for &d in walk {
        on_walk[edge_of(d)] = true;
        in_walk[d] = true;
    }
    let mut region = vec![false; m.face_count()];
    let mut stack = Vec::new();
    for &d in walk.iter().filter(|&&d| !in_walk[twin(d)]) {
        let f = m.face_of(d);
        if !region[f] {
            region[f] = true;
            stack.push(f);
        }
    }
    while let Some(f) = stack.pop() {
        for d in m.face_contour(f).into_iter().filter(|&d| !on_walk[edge_of(d)]) {
            let g = m.face_of(twin(d));
            if !region[g] {
                region[g] = true;
                stack.push(g);
            }
        }
    }
    region
}

/// Number of faces of the submap (edges with `in_sub`) covered by `region`,
/// ignoring the submap faces incident to the root.
fn count_inner(r: &RootedMap, in_sub: impl Fn(usize) -> bool, region: &[bool]) -> Result<i64> {
    let m = &r.map;
    let mut uf: Vec<usize> = (0..m.face_count()).collect();
    for e in (0..m.edge_count()).filter(|&e| !in_sub(e)) {
        let (a, b) = (find(&mut uf, m.face_of(2 * e)), find(&mut uf, m.face_of(2 * e + 1)));
        uf[a.max(b)] = a.min(b);
    }
    let class: Vec<usize> = (0..m.face_count()).map(|f| find(&mut uf, f)).collect();
    let mut rooted = vec![false; m.face_count()];
    for &f in &r.root_faces {
        rooted[class[f]] = true;
    }
    let mut inside = vec![false; m.face_count()];
    let mut outside = vec![false; m.face_count()];
    for f in 0..m.face_count() {
        if region[f] {
            inside[class[f]] = true;
        } else {
            outside[class[f]] = true;
        }
    }
    let mut n = 0;
    for c in (0..m.face_count()).filter(|&c| inside[c] && !rooted[c]) {
        if outside[c] {
            return Err(Error::InternalInvariantViolated(format!("submap face {c} split by a path")));
        }
        n += 1;
    }
    Ok(n)
}

/// Face-counting coordinates `(ℓ*_e(v), r*_o(v))` of the non-root vertices.
pub fn dual_face_count_coords(r: &RootedMap, ds: &DualStructure) -> Result<Placement> {
    if let Some(e) = ds.fully_colored.iter().position(|&b| b) {
        return Err(Error::FullyColoredEdgePresent { edge: e });
    }
    let m = &r.map;
    let in_e = |e: usize| ds.b_e[2 * e] || ds.b_e[2 * e + 1];
    let in_o = |e: usize| ds.b_o[2 * e] || ds.b_o[2 * e + 1];
    let mut out = vec![None; m.vertex_count()];
    for v in (0..m.vertex_count()).filter(|&v| v != r.root()) {
        let path = |k: u8| ds.tree_path(m, k, v);
        // left of P*_e = right of its reverse
        let mut we = reversed(&path(2));
        we.extend(path(4));
        let mut wo = reversed(&path(1));
        wo.extend(path(3));
        let x = count_inner(r, in_e, &region_right_of(m, &we))?;
        let y = count_inner(r, in_o, &region_right_of(m, &wo))?;
        out[v] = Some((x, y));
    }
    Ok(out)
}

fn placement_of(odd: &ContractionDag, xs: &[u64], even: &ContractionDag, ys: &[u64]) -> Placement {
    odd.per_vertex(xs)
        .into_iter()
        .zip(even.per_vertex(ys))
        .map(|(x, y)| Some((x? as i64, y? as i64)))
        .collect()
}

/// Tight `A⃗*_o`- and `A⃗*_e`-increasing coordinates.
pub fn dual_increasing_coords(dags: &DualDags) -> Result<Placement> {
    let xs = dags.odd.source_levels()?;
    let ys = dags.even.source_levels()?;
    Ok(placement_of(&dags.odd, &xs, &dags.even, &ys))
}

/// `B*`-increasing orientation with its diagonals; `weak[f]` makes the
/// diagonal of face `f` non-strict.
fn relaxed_dag(r: &RootedMap, ds: &DualStructure, odd: bool, weak: &[bool]) -> Result<ContractionDag> {
    let m = &r.map;
    let root = r.root();
    let b = if odd { &ds.b_o } else { &ds.b_e };
    let (from, to) = if odd { (4, 2) } else { (3, 1) };
    let forest: Vec<(Vertex, Vertex)> = (0..m.edge_count())
        .filter(|&e| !r.is_root_edge(e) && !b[2 * e] && !b[2 * e + 1])
        .map(|e| m.endpoints(e))
        .collect();
    let mut dag = ContractionDag::new(m.vertex_count(), &forest, Some(root))?;
    for d in (0..m.dart_count()).filter(|&d| b[d] && !r.is_root_edge(edge_of(d))) {
        dag.add_orientation_arc(d, m.tail(d), m.head(d));
    }
    for f in (0..m.face_count()).filter(|&f| !r.is_root_face(f)) {
        if let (Some(u), Some(v)) = (last_corner(m, &ds.labeling, f, from), last_corner(m, &ds.labeling, f, to)) {
            dag.add_diagonal(f, u, v, !weak[f], true);
        }
    }
    Ok(dag)
}

fn relaxed_levels(dag: &ContractionDag, a: &[bool]) -> Result<Vec<u64>> {
    dag.levels(|arc: &DagArc| {
        Some(match arc.kind {
            ArcKind::Orientation => a[arc.dart.unwrap()] as u64,
            ArcKind::Diagonal => arc.strict as u64,
        })
    })
}

fn relaxed_axis(r: &RootedMap, ds: &DualStructure, odd: bool, weak: &[bool]) -> Result<(ContractionDag, Vec<u64>)> {
    let dag = relaxed_dag(r, ds, odd, weak)?;
    let levels = relaxed_levels(&dag, if odd { &ds.a_o } else { &ds.a_e })?;
    Ok((dag, levels))
}

/// Tight `B*_o`- and `B*_e`-increasing coordinates.
pub fn relaxed_coords(r: &RootedMap, ds: &DualStructure) -> Result<Placement> {
    let none = vec![false; r.map.face_count()];
    let (odd, xs) = relaxed_axis(r, ds, true, &none)?;
    let (even, ys) = relaxed_axis(r, ds, false, &none)?;
    Ok(placement_of(&odd, &xs, &even, &ys))
}

fn color_index(mask: u8) -> u8 {
    mask.trailing_zeros() as u8 + 1
}

/// Colors `(i, j)` of the arcs `2e` and `2e+1` when the edge has exactly two
/// colors of different parity.
pub fn bent_colors(ds: &DualStructure, e: usize) -> Option<(u8, u8)> {
    let (a, b) = (ds.colors[2 * e], ds.colors[2 * e + 1]);
    if a.count_ones() != 1 || b.count_ones() != 1 {
        return None;
    }
    let (i, j) = (color_index(a), color_index(b));
    ((i + j) % 2 == 1).then_some((i, j))
}

/// Intersection of the rays `γ_i(a)` and `γ_j(b)` for colors of different parity.
fn ray_meet(a: Point, i: u8, b: Point, j: u8) -> Option<Point> {
    let (da, db) = (direction_vector(i), direction_vector(j));
    let x = if da.0 != 0 { (b.0, a.1) } else { (a.0, b.1) };
    let fwd = |p: Point, d: Point| (x.0 - p.0) * d.0 + (x.1 - p.1) * d.1 >= 0;
    (fwd(a, da) && fwd(b, db)).then_some(x)
}

fn axis_parallel(a: Point, b: Point) -> bool {
    a.0 == b.0 || a.1 == b.1
}

/// Bend of a relaxed edge, convex toward the face chosen by the labels.
fn convex_bend(m: &PlanarMap, ls: &CornerLabeling, e: usize, a: Point, b: Point) -> Point {
    let d = 2 * e;
    let [ri, rt, lt, li] = around(m, ls, d);
    let (fr, fl) = (m.face_of(d), m.face_of(twin(d)));
    let right = match (ri != rt, lt != li) {
        (true, false) => true,
        (false, true) => false,
        (false, false) if ri == 4 => true,
        (false, false) if lt == 4 => false,
        _ => fr < fl,
    };
    let (p, q) = ((a.0, b.1), (b.0, a.1));
    if (orient(a, p, b) < 0) == right {
        p
    } else {
        q
    }
}

/// The four dangling arrows.
pub fn root_arrows(r: &RootedMap, ds: &DualStructure) -> Vec<Arrow> {
    let root = r.root();
    (1..=4u8)
        .map(|k| {
            let e = ds.root_edges[(k - 1) as usize];
            let (u, v) = r.map.endpoints(e);
            Arrow { edge: e, from: if u == root { v } else { u }, direction: k }
        })
        .collect()
}

fn route(r: &RootedMap, ds: &DualStructure, coords: &Placement, relaxed: bool, method: &str) -> Result<GridDrawing> {
    let m = &r.map;
    let mut polylines = vec![None; m.edge_count()];
    for e in (0..m.edge_count()).filter(|&e| !r.is_root_edge(e)) {
        let (u, v) = m.endpoints(e);
        let (Some(a), Some(b)) = (coords[u], coords[v]) else {
            return Err(Error::InternalInvariantViolated(format!("edge {e} has an unplaced endpoint")));
        };
        let line = if let Some((i, j)) = bent_colors(ds, e) {
            match ray_meet(a, i, b, j) {
                Some(x) if x == a || x == b => vec![a, b],
                Some(x) => vec![a, x, b],
                None if relaxed && !axis_parallel(a, b) => vec![a, convex_bend(m, &ds.labeling, e, a, b), b],
                None if relaxed => vec![a, b],
                None => return Err(Error::RayIntersectionEmpty { edge: e }),
            }
        } else if axis_parallel(a, b) {
            vec![a, b]
        } else if relaxed {
            vec![a, convex_bend(m, &ds.labeling, e, a, b), b]
        } else {
            return Err(Error::NonOrthogonalStraightEdge { edge: e });
        };
        polylines[e] = Some(line);
    }
    Ok(GridDrawing::new(coords.clone(), polylines, Some(root_arrows(r, ds)), method))
}

/// Routing by the `L*`-rule: an edge with two colors of different parity
/// bends at the meeting point of the rays of its arc colors, every other
/// edge is straight.
pub fn route_edges(r: &RootedMap, ds: &DualStructure, coords: &Placement) -> Result<GridDrawing> {
    route(r, ds, coords, false, DualMethod::Increasing.name())
}

/// Routing for `B*`-increasing coordinates: non-aligned edges outside the
/// `L*`-rule get one bend, convex toward the adjacent face where the edge
/// joins two runs, or toward the face where it lies on a 4-run.
pub fn route_relaxed(r: &RootedMap, ds: &DualStructure, coords: &Placement, method: &str) -> Result<GridDrawing> {
    route(r, ds, coords, true, method)
}

/// Points of the drawing of the `k`-run of face `f`, as segments.
fn run_segments(m: &PlanarMap, ls: &CornerLabeling, g: &GridDrawing, f: Face, k: u8) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for c in m.face_contour(f) {
        if ls.get(c) != k {
            continue;
        }
        if let Some(p) = g.coords[m.tail(c)] {
            out.push((p, p));
        }
        if ls.get(m.succ(c)) == k {
            if let Some(line) = &g.polylines[edge_of(c)] {
                out.extend(line.windows(2).map(|w| (w[0], w[1])));
            }
        }
    }
    out
}

/// Extreme value of the other coordinate among run points on the line
/// `axis = t` (`axis` 0 for x, 1 for y).
fn extreme_on_line(segs: &[(Point, Point)], axis: usize, t: i64, max: bool) -> Option<i64> {
    let get = |p: Point, i: usize| if i == 0 { p.0 } else { p.1 };
    let other = 1 - axis;
    let vals = segs.iter().flat_map(|&(p, q)| {
        let (lo, hi) = (get(p, axis).min(get(q, axis)), get(p, axis).max(get(q, axis)));
        let hit = lo <= t && t <= hi;
        let ends: Vec<i64> = if !hit {
            vec![]
        } else if lo == hi {
            vec![get(p, other), get(q, other)]
        } else {
            vec![get(p, other)]
        };
        ends
    });
    if max {
        vals.max()
    } else {
        vals.min()
    }
}

/// Faces whose odd (`odd`) or even diagonal can be weakened in `g`.
fn weak_diagonals(r: &RootedMap, ds: &DualStructure, g: &GridDrawing, odd: bool) -> Vec<bool> {
    let m = &r.map;
    let ls = &ds.labeling;
    let mut weak = vec![false; m.face_count()];
    for f in (0..m.face_count()).filter(|&f| !r.is_root_face(f)) {
        let (ku, kv) = if odd { (4, 2) } else { (3, 1) };
        let (Some(u), Some(v)) = (last_corner(m, ls, f, ku), last_corner(m, ls, f, kv)) else { continue };
        let (Some(pu), Some(pv)) = (g.coords[u], g.coords[v]) else { continue };
        let (su, sv) = (run_segments(m, ls, g, f, ku), run_segments(m, ls, g, f, kv));
        weak[f] = if odd {
            // C4 lowest on the 4-run above x(u), C2 highest on the 2-run above x(v)
            match (extreme_on_line(&su, 0, pu.0, false), extreme_on_line(&sv, 0, pv.0, true)) {
                (Some(c4), Some(c2)) => c4 > c2,
                _ => false,
            }
        } else {
            // C3 rightmost on the 3-run at y(u), C1 leftmost on the 1-run at y(v)
            match (extreme_on_line(&su, 1, pu.1, true), extreme_on_line(&sv, 1, pv.1, false)) {
                (Some(c3), Some(c1)) => c3 < c1,
                _ => false,
            }
        };
    }
    weak
}

/// Relaxed coordinates with the diagonals that the drawing allows made weak,
/// one coordinate at a time.
pub fn weaken_diagonals(r: &RootedMap, ds: &DualStructure) -> Result<GridDrawing> {
    let none = vec![false; r.map.face_count()];
    let (odd0, xs0) = relaxed_axis(r, ds, true, &none)?;
    let (even0, ys0) = relaxed_axis(r, ds, false, &none)?;
    let provisional = route_relaxed(r, ds, &placement_of(&odd0, &xs0, &even0, &ys0), "provisional")?;
    let weak_o = weak_diagonals(r, ds, &provisional, true);
    let (odd, xs) = relaxed_axis(r, ds, true, &weak_o)?;
    let second = route_relaxed(r, ds, &placement_of(&odd, &xs, &even0, &ys0), "provisional")?;
    let weak_e = weak_diagonals(r, ds, &second, false);
    let (even, ys) = relaxed_axis(r, ds, false, &weak_e)?;
    route_relaxed(r, ds, &placement_of(&odd, &xs, &even, &ys), DualMethod::Weakened.name())
}

/// Drawing by one of the four coordinate methods.
pub fn draw_dual(r: &RootedMap, ds: &DualStructure, method: DualMethod) -> Result<GridDrawing> {
    let mut g = match method {
        DualMethod::FaceCount => route_edges(r, ds, &dual_face_count_coords(r, ds)?)?,
        DualMethod::Increasing => route_edges(r, ds, &dual_increasing_coords(&build_dual_contractions(r, ds)?)?)?,
        DualMethod::Relaxed => route_relaxed(r, ds, &relaxed_coords(r, ds)?, method.name())?,
        DualMethod::Weakened => weaken_diagonals(r, ds)?,
    };
    g.method = method.name().to_string();
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpoFailure {
    Geometry(GeometryFailure),
    NotAxisParallel { edge: usize },
    TooManyBends { edge: usize },
    ArrowMismatch { index: u8 },
    RunDirection { face: Face, dart: Dart },
    LeftTurn { dart: Dart },
    DirectionLaw { dart: Dart, expected: u8, found: u8 },
    NotRectangle { face: Face },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpoCertificate {
    /// planarity and the shape of every inner face
    pub failures: Vec<SpoFailure>,
    /// chirality, direction law and rectangular faces in the all-degree-3
    /// case, which the increasing-function drawings satisfy
    pub shape: Vec<SpoFailure>,
}

impl SpoCertificate {
    pub fn is_certified(&self) -> bool {
        self.failures.is_empty()
    }
    pub fn follows_orientation_laws(&self) -> bool {
        self.shape.is_empty()
    }
}

/// Points of the drawing of a dart, from its tail.
fn dart_line(g: &GridDrawing, d: Dart) -> Option<Vec<Point>> {
    let mut line = g.polylines[edge_of(d)].clone()?;
    if d % 2 == 1 {
        line.reverse();
    }
    Some(line)
}

fn delta(p: Point, q: Point) -> Point {
    (q.0 - p.0, q.1 - p.1)
}

fn dot(a: Point, b: Point) -> i64 {
    a.0 * b.0 + a.1 * b.1
}

/// Shape of the drawing of a contour dart going from a corner labeled `a`
/// to one labeled `b`: a `k`-run stays in the quadrant of directions `k-2`
/// and `k-1`, a step `k → k+1` advances in direction `k-1`, a jump
/// `k → k+2` advances in directions `k-1` and `k`.
fn run_shape_ok(line: &[Point], a: u8, b: u8) -> bool {
    let segs: Vec<Point> = line.windows(2).map(|w| delta(w[0], w[1])).collect();
    let total = delta(line[0], *line.last().unwrap());
    let (p, q) = (direction_vector(shift(a, -2)), direction_vector(shift(a, -1)));
    match crate::labeling::jump(a, b) {
        0 => segs.iter().all(|&s| dot(s, p) >= 0 && dot(s, q) >= 0 && dot(s, p) + dot(s, q) > 0),
        1 => dot(total, q) > 0 && segs.iter().all(|&s| dot(s, q) >= 0),
        2 => {
            let r = direction_vector(a);
            dot(total, q) > 0 && dot(total, r) > 0 && segs.iter().all(|&s| dot(s, q) >= 0 && dot(s, r) >= 0)
        }
        _ => true,
    }
}

/// Number of corners of a rectilinear polygon.
fn corner_count(poly: &[Point]) -> usize {
    let n = poly.len();
    (0..n).filter(|&i| orient(poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]) != 0).count()
}

/// Axis-parallel segments, at most one bend, arrows, and validity of the
/// listed faces plus the global crossing oracle. Shared with maps that have
/// degree-2 vertices.
pub fn check_orthogonal(m: &PlanarMap, g: &GridDrawing, inner: &[Face]) -> Vec<SpoFailure> {
    let mut out: Vec<SpoFailure> = check_polylines(m, g, true).into_iter().map(SpoFailure::Geometry).collect();
    for (e, line) in g.polylines.iter().enumerate() {
        let Some(line) = line else { continue };
        if line.windows(2).any(|w| !axis_parallel(w[0], w[1])) {
            out.push(SpoFailure::NotAxisParallel { edge: e });
        }
        if line.len() > 3 {
            out.push(SpoFailure::TooManyBends { edge: e });
        }
    }
    if !out.is_empty() {
        return out;
    }
    out.extend(check_faces(m, g, inner, None).into_iter().map(SpoFailure::Geometry));
    out.extend(crossing_oracle(m, g).into_iter().map(SpoFailure::Geometry));
    out
}

/// Exact certification of an SPO drawing against its dual labeling.
pub fn validate_spo(r: &RootedMap, ds: &DualStructure, g: &GridDrawing) -> SpoCertificate {
    let m = &r.map;
    let ls = &ds.labeling;
    let root = r.root();
    let inner: Vec<Face> = (0..m.face_count()).filter(|&f| !r.is_root_face(f)).collect();
    let mut failures = check_orthogonal(m, g, &inner);
    let expected = root_arrows(r, ds);
    for k in 1..=4u8 {
        let want = &expected[(k - 1) as usize];
        if !g.arrows.as_ref().is_some_and(|a| a.contains(want)) {
            failures.push(SpoFailure::ArrowMismatch { index: k });
        }
    }
    let mut shape = Vec::new();
    if !failures.is_empty() {
        return SpoCertificate { failures, shape };
    }
    for &f in &inner {
        for c in m.face_contour(f) {
            let line = dart_line(g, c).expect("checked polylines");
            if !run_shape_ok(&line, ls.get(c), ls.get(m.succ(c))) {
                failures.push(SpoFailure::RunDirection { face: f, dart: c });
            }
        }
    }
    for d in (0..m.dart_count()).filter(|&d| m.tail(d) != root && m.head(d) != root) {
        let line = dart_line(g, d).expect("checked polylines");
        if line.len() == 3 && m.degree(m.tail(d)) == 3 && orient(line[0], line[1], line[2]) > 0 {
            shape.push(SpoFailure::LeftTurn { dart: d });
        }
        let c = ds.colors[d];
        let first = direction_of(delta(line[0], line[1])).unwrap_or(0);
        let want = match c.count_ones() {
            1 => Some(color_index(c)),
            2 => (1..=4u8).find(|&k| c == bit(k) | bit(shift(k, 1))).map(|k| if ds.special[d] || ds.special[twin(d)] { shift(k, 1) } else { k }),
            _ => None,
        };
        if let Some(k) = want.filter(|&k| k != first) {
            shape.push(SpoFailure::DirectionLaw { dart: d, expected: k, found: first });
        }
    }
    if (0..m.vertex_count()).all(|v| v == root || m.degree(v) == 3) {
        for &f in &inner {
            let poly = crate::geometry::face_polygon(m, g, f).expect("checked polylines");
            if corner_count(&poly) != 4 {
                shape.push(SpoFailure::NotRectangle { face: f });
            }
        }
    }
    SpoCertificate { failures, shape }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCounts {
    /// non-root faces, vertices and edges
    pub faces: usize,
    pub vertices: usize,
    pub edges: usize,
    pub v3: usize,
    pub v4: usize,
    /// edges colored exactly `{1,3}` / `{2,4}`
    pub d_o: usize,
    pub d_e: usize,
    /// fully-colored edges with labels `{1,1,3,3}` / `{2,2,4,4}`
    pub u_o: usize,
    pub u_e: usize,
}

pub fn dual_counts(r: &RootedMap, ds: &DualStructure) -> DualCounts {
    let m = &r.map;
    let root = r.root();
    let inner_edges: Vec<usize> = (0..m.edge_count()).filter(|&e| !r.is_root_edge(e)).collect();
    let colored = |e: &&usize, mask: u8| ds.colors[2 * **e] | ds.colors[2 * **e + 1] == mask;
    let pattern = |e: &&usize, k: u8| {
        let a = around(m, &ds.labeling, 2 * **e);
        ds.fully_colored[**e] && (a == [k, k, k + 2, k + 2] || a == [k + 2, k + 2, k, k])
    };
    let non_root = (0..m.vertex_count()).filter(|&v| v != root);
    DualCounts {
        faces: (0..m.face_count()).filter(|&f| !r.is_root_face(f)).count(),
        vertices: non_root.clone().count(),
        edges: inner_edges.len(),
        v3: non_root.clone().filter(|&v| m.degree(v) == 3).count(),
        v4: non_root.filter(|&v| m.degree(v) == 4).count(),
        d_o: inner_edges.iter().filter(|e| colored(e, bit(1) | bit(3))).count(),
        d_e: inner_edges.iter().filter(|e| colored(e, bit(2) | bit(4))).count(),
        u_o: inner_edges.iter().filter(|e| pattern(e, 1)).count(),
        u_e: inner_edges.iter().filter(|e| pattern(e, 2)).count(),
    }
}

/// Bounds on the tight increasing-function grid: `(m*_o, m*_e)`.
pub fn dual_grid_bound(c: &DualCounts) -> (i64, i64) {
    ((c.faces + c.u_o) as i64 - c.d_o as i64, (c.faces + c.u_e) as i64 - c.d_e as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BendBounds {
    /// twice the straight edges is at least this
    pub min_straight_twice: usize,
    pub max_bends: usize,
    pub max_bends_rotated: usize,
    pub max_semi_perimeter: i64,
    pub max_semi_perimeter_rotated: i64,
}

pub fn bend_bounds(c: &DualCounts) -> BendBounds {
    let (e, v3, v4) = (c.edges as i64, c.v3 as i64, c.v4 as i64);
    BendBounds {
        min_straight_twice: c.v3,
        max_bends: 4 * c.v4,
        max_bends_rotated: 3 * c.v4,
        max_semi_perimeter: e.min(e + 2 * v4 - v3 + 2),
        max_semi_perimeter_rotated: e.min(e + v4 - v3 + 2),
    }
}

/// Per vertex, the number of incident bent edges turning left when leaving it.
pub fn left_turn_contributions(r: &RootedMap, ds: &DualStructure) -> Vec<usize> {
    let m = &r.map;
    let mut out = vec![0; m.vertex_count()];
    for e in (0..m.edge_count()).filter(|&e| !r.is_root_edge(e)) {
        if let Some((i, j)) = bent_colors(ds, e) {
            let (u, v) = m.endpoints(e);
            // heading i, leaving toward the reverse of j: a left turn iff j = i + 1
            if j == shift(i, 1) {
                out[u] += 1;
            } else {
                out[v] += 1;
            }
        }
    }
    out
}

/// Labels decreased by one around every degree-4 vertex contributing four
/// left-turning bent edges; the result is verified.
pub fn rotate_labels(r: &RootedMap, ds: &DualStructure) -> Result<DualStructure> {
    let m = &r.map;
    let contrib = left_turn_contributions(r, ds);
    let mut ls = ds.labeling.clone();
    for v in (0..m.vertex_count()).filter(|&v| contrib[v] == 4) {
        for d in m.darts_around(v) {
            ls.set(d, shift(ls.get(d), -1));
        }
    }
    derive_dual_structure(r, &ls)
}

/// A rooted map with chains of degree-2 vertices, erased to a rooted
/// 3,4-map whose edge `e` stands for the chain `chains[e]`.
#[derive(Clone, Debug)]
pub struct Erased {
    pub map: PlanarMap,
    /// darts of the original map along each erased edge, from its tail
    pub chains: Vec<Vec<Dart>>,
    /// original vertex of each erased vertex
    pub vertex: Vec<Vertex>,
}

pub fn erase_degree2(m: &PlanarMap) -> Result<Erased> {
    let root = m.root_vertex().ok_or_else(|| Error::NotRooted34Map("no root vertex".into()))?;
    for w in m.neighbours(root) {
        if m.degree(w) == 2 {
            return Err(Error::RootAdjacentDegree2 { vertex: w });
        }
    }
    let keep: Vec<Vertex> = (0..m.vertex_count()).filter(|&v| m.degree(v) != 2).collect();
    let mut id = vec![usize::MAX; m.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        id[v] = i;
    }
    let mut chains = Vec::new();
    let mut edge_dart = vec![usize::MAX; m.dart_count()];
    for &v in &keep {
        for d in m.darts_around(v) {
            if edge_dart[d] != usize::MAX {
                continue;
            }
            let mut chain = vec![d];
            let mut x = d;
            while m.degree(m.head(x)) == 2 {
                x = m.cw_next(twin(x));
                chain.push(x);
            }
            let e = chains.len();
            for &c in &chain {
                edge_dart[c] = 2 * e;
                edge_dart[twin(c)] = 2 * e + 1;
            }
            chains.push(chain);
        }
    }
    let spec = MapSpec {
        edges: chains.iter().map(|c| [id[m.tail(c[0])], id[m.head(*c.last().unwrap())]]).collect(),
        rotations: keep.iter().map(|&v| m.darts_around(v).into_iter().map(|d| edge_dart[d]).collect()).collect(),
        outer_dart: edge_dart[m.outer_dart()],
        outer_vertices: None,
        root_vertex: Some(id[root]),
    };
    Ok(Erased { map: crate::map::build_map(&spec)?, chains, vertex: keep })
}

/// Point at distance `s` along an axis-parallel polyline, and the index of
/// the segment holding it.
fn point_along(line: &[Point], s: i64) -> (Point, usize) {
    let mut left = s;
    for (i, w) in line.windows(2).enumerate() {
        let len = (w[1].0 - w[0].0).abs() + (w[1].1 - w[0].1).abs();
        if left <= len {
            let (dx, dy) = ((w[1].0 - w[0].0).signum(), (w[1].1 - w[0].1).signum());
            return ((w[0].0 + dx * left, w[0].1 + dy * left), i);
        }
        left -= len;
    }
    (*line.last().unwrap(), line.len() - 2)
}

/// Labeling, structure and drawing of a rooted map by a standard method.
pub fn draw_rooted(g: &PlanarMap, method: DualMethod) -> Result<(RootedMap, DualStructure, GridDrawing)> {
    if !dual_adapted_via_primal(g)? {
        return Err(Error::NotDualAdapted);
    }
    let (p, r) = RootedMap::from_rooted(g)?;
    let l = solve_labeling(&p, SolveOptions::default())?;
    let ds = derive_dual_structure(&r, &dualize_labels(&p, &l))?;
    let d = draw_dual(&r, &ds, method)?;
    Ok((r, ds, d))
}

/// SPO drawing of a rooted map with degree-2 vertices: the erased map is
/// drawn with every edge at least as long as its chain, then the chain
/// vertices are put at consecutive grid points from the tail end.
pub fn draw_with_degree2(m: &PlanarMap) -> Result<GridDrawing> {
    let er = erase_degree2(m)?;
    let g = &er.map;
    if !dual_adapted_via_primal(g)? {
        return Err(Error::NotDualAdapted);
    }
    let (p, r) = RootedMap::from_rooted(g)?;
    let l = solve_labeling(&p, SolveOptions::default())?;
    let ds = derive_dual_structure(&r, &dualize_labels(&p, &l))?;
    let dags = build_dual_contractions(&r, &ds)?;
    let len: Vec<u64> = er.chains.iter().map(|c| c.len() as u64).collect();
    let in_o = |e: usize| ds.a_o[2 * e] || ds.a_o[2 * e + 1];
    let in_e = |e: usize| ds.a_e[2 * e] || ds.a_e[2 * e + 1];
    let share = |e: usize, odd: bool| -> u64 {
        let n = len[e];
        let s = match (in_o(e), in_e(e)) {
            (true, true) if odd => n.div_ceil(2),
            (true, true) => n / 2,
            _ => n,
        };
        s.max(1)
    };
    let weight = |odd: bool| move |a: &DagArc| Some(a.dart.map_or(1, |d| share(d / 2, odd)));
    let xs = dags.odd.levels(weight(true))?;
    let ys = dags.even.levels(weight(false))?;
    let drawing = route_edges(&r, &ds, &placement_of(&dags.odd, &xs, &dags.even, &ys))?;
    // r shares darts with g; translate vertices of r to vertices of m
    let mut orig = vec![usize::MAX; r.map.vertex_count()];
    for d in 0..g.dart_count() {
        orig[r.map.tail(d)] = er.vertex[g.tail(d)];
    }
    let mut coords = vec![None; m.vertex_count()];
    for (v, &o) in orig.iter().enumerate() {
        coords[o] = drawing.coords[v];
    }
    let mut polylines = vec![None; m.edge_count()];
    for (e, chain) in er.chains.iter().enumerate() {
        let Some(line) = &drawing.polylines[e] else { continue };
        let mut prev = (line[0], 0usize);
        for (i, &d) in chain.iter().enumerate() {
            let next = if i + 1 == chain.len() {
                (*line.last().unwrap(), line.len() - 2)
            } else {
                let (pt, seg) = point_along(line, i as i64 + 1);
                coords[m.head(d)] = Some(pt);
                (pt, seg)
            };
            let mut piece = vec![prev.0];
            piece.extend(line[prev.1 + 1..=next.1].iter().copied().filter(|&q| q != prev.0 && q != next.0));
            piece.push(next.0);
            if d % 2 == 1 {
                piece.reverse();
            }
            polylines[edge_of(d)] = Some(piece);
            prev = next;
        }
    }
    let arrows = drawing.arrows.as_ref().map(|arrows| {
        arrows
            .iter()
            .map(|a| Arrow { edge: edge_of(er.chains[a.edge][0]), from: orig[a.from], direction: a.direction })
            .collect()
    });
    Ok(GridDrawing::new(coords, polylines, arrows, "degree2"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::subdivide;
    use crate::dual::dualize_labeling;
    use crate::fixtures;
    use crate::labeling::enumerate_labelings;
    use crate::map::build_map;

    fn duals(m: &PlanarMap) -> Vec<(RootedMap, DualStructure)> {
        enumerate_labelings(m).unwrap().iter().map(|l| dualize_labeling(m, l).unwrap()).collect()
    }

    #[test]
    fn square_dual_is_a_single_point() {
        for (r, ds) in duals(&fixtures::square()) {
            let x = 1 - r.root();
            assert_eq!(dual_face_count_coords(&r, &ds).unwrap()[x], Some((0, 0)));
            for method in DualMethod::ALL {
                let g = draw_dual(&r, &ds, method).unwrap();
                assert_eq!(g.coords[x], Some((0, 0)));
                assert!(validate_spo(&r, &ds, &g).is_certified());
            }
        }
    }

    #[test]
    fn normative_bend() {
        assert_eq!(ray_meet((2, 3), 1, (1, 1), 2), Some((1, 3)));
        assert_eq!(ray_meet((2, 3), 3, (1, 1), 2), None);
    }

    #[test]
    fn all_methods_certified_on_cube_duals() {
        for (r, ds) in duals(&fixtures::cube()) {
            let mut sizes = Vec::new();
            for method in DualMethod::ALL {
                if method == DualMethod::FaceCount && ds.has_fully_colored_edge() {
                    continue;
                }
                let g = draw_dual(&r, &ds, method).unwrap();
                let cert = validate_spo(&r, &ds, &g);
                assert!(cert.is_certified(), "{method:?}: {:?}", cert.failures);
                if matches!(method, DualMethod::FaceCount | DualMethod::Increasing) {
                    assert!(cert.follows_orientation_laws(), "{method:?}: {:?}", cert.shape);
                }
                sizes.push((method, g.width, g.height));
            }
            for w in sizes.windows(2) {
                assert!(w[1].1 <= w[0].1 && w[1].2 <= w[0].2, "{sizes:?}");
            }
        }
    }

    #[test]
    fn he_case_has_rectangles_and_no_bends() {
        for (r, ds) in duals(&fixtures::wheel()) {
            let g = draw_dual(&r, &ds, DualMethod::Increasing).unwrap();
            let cert = validate_spo(&r, &ds, &g);
            assert!(cert.is_certified() && cert.follows_orientation_laws(), "{cert:?}");
            assert_eq!(g.bend_count(), 0);
        }
    }

    #[test]
    fn two_bend_detour_is_rejected() {
        let (r, ds) = duals(&fixtures::square_diagonal()).remove(0);
        let mut g = draw_dual(&r, &ds, DualMethod::Increasing).unwrap();
        let e = (0..r.map.edge_count()).find(|&e| !r.is_root_edge(e)).unwrap();
        let line = g.polylines[e].clone().unwrap();
        let (a, b) = (line[0], line[1]);
        // replace the straight edge by a detour turning left at its tail
        let dv = (b.0 - a.0, b.1 - a.1);
        let left = (-dv.1, dv.0);
        g.polylines[e] = Some(vec![a, (a.0 + left.0, a.1 + left.1), (b.0 + left.0, b.1 + left.1), b]);
        let cert = validate_spo(&r, &ds, &g);
        assert!(cert.failures.contains(&SpoFailure::TooManyBends { edge: e }));
    }

    #[test]
    fn degree2_chains_are_drawn_on_the_grid() {
        let d = crate::map::dual_map(&fixtures::cube());
        let root = d.root_vertex().unwrap();
        let inner: Vec<usize> = (0..d.edge_count())
            .filter(|&e| {
                let (u, v) = d.endpoints(e);
                u != root && v != root
            })
            .collect();
        let one = build_map(&subdivide(&d, inner[0], 4)).unwrap();
        let two = build_map(&subdivide(&build_map(&subdivide(&d, inner[0], 2)).unwrap(), inner[5], 3)).unwrap();
        for m in [one, two] {
            let g = draw_with_degree2(&m).unwrap();
            let faces: Vec<Face> = (0..m.face_count())
                .filter(|&f| m.face_contour(f).iter().all(|&x| m.tail(x) != root))
                .collect();
            assert!(check_orthogonal(&m, &g, &faces).is_empty());
            let mut pts: Vec<Point> = g.coords.iter().flatten().copied().collect();
            assert_eq!(pts.len(), m.vertex_count() - 1);
            pts.sort_unstable();
            pts.dedup();
            assert_eq!(pts.len(), m.vertex_count() - 1);
        }
    }
}
