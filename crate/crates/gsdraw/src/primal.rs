//! Straight-line grid drawings of adapted 3,4-angulations of the square.

use serde::{Deserialize, Serialize};

use crate::dag::{all_arcs, orientation_only, ArcKind, ContractionDag, DagArc};
use crate::drawing::GridDrawing;
use crate::error::{Error, Result};
use crate::labeling::CornerLabeling;
use crate::map::{edge_of, twin, Dart, Face, PlanarMap, Vertex};
use crate::structure::{find, tree_paths, OrientedStructure};

/// A degree-4 inner face read from its labels: `u[k]` carries the corner
/// labeled `k+1`, and `e[k]` is the contour dart `u[k] -> u[k+1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quad {
    pub face: Face,
    pub u: [Vertex; 4],
    pub e: [Dart; 4],
}

pub fn quad_of(m: &PlanarMap, l: &CornerLabeling, f: Face) -> Option<Quad> {
    let contour = m.face_contour(f);
    if contour.len() != 4 || f == m.outer_face() {
        return None;
    }
    let mut e = [usize::MAX; 4];
    for &d in &contour {
        let k = l.get(d);
        if !(1..=4).contains(&k) {
            return None;
        }
        e[(k - 1) as usize] = d;
    }
    if e.contains(&usize::MAX) {
        return None;
    }
    Some(Quad { face: f, u: e.map(|d| m.tail(d)), e })
}

/// Side counts of a quad face: `(missing, converging, diverging)`.
pub fn side_counts(s: &OrientedStructure, q: &Quad) -> (usize, usize, usize) {
    let (mut missing, mut conv, mut div) = (0, 0, 0);
    for &d in &q.e {
        let e = edge_of(d);
        if s.abar_o[e] || s.abar_e[e] {
            missing += 1;
        } else if s.a_o[d] == s.a_e[d] {
            conv += 1;
        } else {
            div += 1;
        }
    }
    (missing, conv, div)
}

/// `A⃗_o` and `A⃗_e`: contractions of `A_o`, `A_e` with their diagonal arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalDags {
    pub odd: ContractionDag,
    pub even: ContractionDag,
}

fn contraction(m: &PlanarMap, abar: &[bool], arcs: &[bool]) -> Result<ContractionDag> {
    let forest: Vec<(Vertex, Vertex)> =
        (0..m.edge_count()).filter(|&e| abar[e]).map(|e| m.endpoints(e)).collect();
    let mut dag = ContractionDag::new(m.vertex_count(), &forest, None)?;
    for d in (0..m.dart_count()).filter(|&d| arcs[d]) {
        dag.add_orientation_arc(d, m.tail(d), m.head(d));
    }
    Ok(dag)
}

pub fn build_contractions(m: &PlanarMap, l: &CornerLabeling, s: &OrientedStructure) -> Result<PrimalDags> {
    let ov = m.outer_vertices().ok_or_else(|| Error::InvalidOuter("outer vertices required".into()))?;
    let mut odd = contraction(m, &s.abar_o, &s.a_o)?;
    let mut even = contraction(m, &s.abar_e, &s.a_e)?;
    for f in 0..m.face_count() {
        let Some(q) = quad_of(m, l, f) else { continue };
        let (missing, conv, div) = side_counts(s, &q);
        let mandatory = conv.abs_diff(div) != missing;
        let [u1, u2, u3, u4] = q.u;
        let [e1, e2, e3, e4] = q.e;
        if s.a_o[e1] && s.a_o[twin(e3)] {
            odd.add_diagonal(f, u2, u4, false, mandatory);
        }
        if s.a_o[twin(e1)] && s.a_o[e3] {
            odd.add_diagonal(f, u1, u3, false, mandatory);
        }
        let strict = conv == 4 || div == 4;
        if s.a_e[twin(e4)] && s.a_e[e2] {
            even.add_diagonal(f, u4, u2, strict, mandatory);
        }
        if s.a_e[e4] && s.a_e[twin(e2)] {
            even.add_diagonal(f, u1, u3, strict, mandatory);
        }
    }
    let expect = |dag: &ContractionDag, name: &str, src: [Vertex; 2], sink: [Vertex; 2]| -> Result<()> {
        let bad = |msg: &str| Err(Error::InternalInvariantViolated(format!("{name}: {msg}")));
        if dag.class(src[0]) != dag.class(src[1]) || dag.class(sink[0]) != dag.class(sink[1]) {
            return bad("outer edge not contracted");
        }
        for keep in [orientation_only as fn(&DagArc) -> bool, all_arcs] {
            if !dag.is_bipolar(keep) {
                return bad("not bipolar");
            }
            let (so, si) = dag.sources_and_sinks(keep);
            if so != [dag.class(src[0])] || si != [dag.class(sink[0])] {
                return bad("unexpected source or sink");
            }
        }
        Ok(())
    };
    expect(&odd, "A_o", [ov[0], ov[1]], [ov[2], ov[3]])?;
    expect(&even, "A_e", [ov[0], ov[3]], [ov[1], ov[2]])?;
    Ok(PrimalDags { odd, even })
}

fn per_vertex_coords(dags: &PrimalDags, x: &[u64], y: &[u64]) -> Vec<(u64, u64)> {
    let px = dags.odd.per_vertex(x);
    let py = dags.even.per_vertex(y);
    px.into_iter().zip(py).map(|(a, b)| (a.unwrap_or(0), b.unwrap_or(0))).collect()
}

/// Tight increasing functions: source levels of `A⃗_o` (x) and `A⃗_e` (y).
pub fn increasing_coords(dags: &PrimalDags) -> Result<Vec<(u64, u64)>> {
    let x = dags.odd.source_levels()?;
    let y = dags.even.source_levels()?;
    Ok(per_vertex_coords(dags, &x, &y))
}

/// Weight of an arc in the strict source level; `None` drops the arc.
pub fn optimized_weight(a: &DagArc) -> Option<u64> {
    match a.kind {
        ArcKind::Orientation => Some(1),
        ArcKind::Diagonal if !a.mandatory => None,
        ArcKind::Diagonal => Some(a.strict as u64),
    }
}

/// Tight quasi-increasing functions: non-mandatory diagonals dropped, weak
/// diagonals of weight 0.
pub fn optimized_coords(dags: &PrimalDags) -> Result<Vec<(u64, u64)>> {
    let x = dags.odd.levels(optimized_weight)?;
    let y = dags.even.levels(optimized_weight)?;
    Ok(per_vertex_coords(dags, &x, &y))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceCountMode {
    /// faces of `B_o` and `B_e`
    Submap,
    /// faces of `B'_o` and `B'_e`
    Classic,
    /// faces of `B_o`, `B_e` weighted by the sum of the weights of their
    /// inner faces of the map, indexed by face id
    Weighted(Vec<u64>),
}

/// Face classes of a submap: union of map faces across edges not in it.
fn submap_classes(m: &PlanarMap, in_sub: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut uf: Vec<usize> = (0..m.face_count()).collect();
    for e in (0..m.edge_count()).filter(|&e| !in_sub(e)) {
        let (a, b) = (find(&mut uf, m.face_of(2 * e)), find(&mut uf, m.face_of(2 * e + 1)));
        uf[a.max(b)] = a.min(b);
    }
    (0..m.face_count()).map(|f| find(&mut uf, f)).collect()
}

/// Inner faces of the map lying on the right of a walk from the outer
/// contour to the outer contour.
pub fn faces_right_of(m: &PlanarMap, walk: &[Dart]) -> Vec<bool> {
    let outer = m.outer_face();
    let mut on_walk = vec![false; m.edge_count()];
    let mut in_walk = vec![false; m.dart_count()];
    for &d in walk {
        on_walk[edge_of(d)] = true;
        in_walk[d] = true;
    }
    let mut region = vec![false; m.face_count()];
    let mut stack = Vec::new();
    for &d in walk {
        let f = m.face_of(d);
        if !in_walk[twin(d)] && f != outer && !region[f] {
            region[f] = true;
            stack.push(f);
        }
    }
    while let Some(f) = stack.pop() {
        for d in m.face_contour(f) {
            if on_walk[edge_of(d)] {
                continue;
            }
            let g = m.face_of(twin(d));
            if g != outer && !region[g] {
                region[g] = true;
                stack.push(g);
            }
        }
    }
    region
}

fn reversed(walk: &[Dart]) -> Vec<Dart> {
    walk.iter().rev().map(|&d| twin(d)).collect()
}

/// Total weight of the submap faces touched by a region; a submap face cut
/// by the region is an invariant violation.
fn count_region(m: &PlanarMap, classes: &[usize], region: &[bool], weights: Option<&[u64]>) -> Result<u64> {
    let outer = m.outer_face();
    let mut touched = vec![false; m.face_count()];
    let mut total = 0;
    for f in (0..m.face_count()).filter(|&f| region[f]) {
        let c = classes[f];
        if c == classes[outer] {
            return Err(Error::InternalInvariantViolated(format!("face {f} of the outer submap face counted")));
        }
        match weights {
            Some(w) => total += w[f],
            None if !touched[c] => total += 1,
            None => {}
        }
        touched[c] = true;
    }
    for f in 0..m.face_count() {
        if touched[classes[f]] && !region[f] {
            return Err(Error::InternalInvariantViolated(format!("submap face of {f} split by a path")));
        }
    }
    Ok(total)
}

/// Face-counting coordinates `(ℓ_e(v), r_o(v))`.
pub fn face_count_coords(
    m: &PlanarMap,
    s: &OrientedStructure,
    mode: &FaceCountMode,
) -> Result<Vec<(u64, u64)>> {
    let in_o = |e: usize| s.b_o[2 * e] || s.b_o[2 * e + 1];
    let in_e = |e: usize| s.b_e[2 * e] || s.b_e[2 * e + 1];
    let (co, ce) = match mode {
        FaceCountMode::Classic => (
            submap_classes(m, |e| in_o(e) || s.u_o[2 * e] || s.u_o[2 * e + 1]),
            submap_classes(m, |e| in_e(e) || s.u_e[2 * e] || s.u_e[2 * e + 1]),
        ),
        _ => (submap_classes(m, in_o), submap_classes(m, in_e)),
    };
    let weights = match mode {
        FaceCountMode::Weighted(w) => {
            if w.len() != m.face_count() {
                return Err(Error::Format(format!("{} weights for {} faces", w.len(), m.face_count())));
            }
            Some(w.as_slice())
        }
        _ => None,
    };
    (0..m.vertex_count())
        .map(|v| {
            let p = tree_paths(m, s, v);
            let x = count_region(m, &ce, &faces_right_of(m, &reversed(&p.even)), weights)?;
            let y = count_region(m, &co, &faces_right_of(m, &p.odd), weights)?;
            Ok((x, y))
        })
        .collect()
}

/// Inner faces between consecutive tree paths of each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarycentricReport {
    /// `r[v][i-1]`: inner faces right of `P_i(v)^- ∪ P_{i-1}(v)`
    pub r: Vec<[u64; 4]>,
    /// whole-map counts `(ℓ_e', r_o')` per vertex
    pub whole_map: Vec<(u64, u64)>,
    pub identities_hold: bool,
}

pub fn barycentric_report(m: &PlanarMap, s: &OrientedStructure) -> Result<BarycentricReport> {
    let whole_map = face_count_coords(m, s, &FaceCountMode::Weighted(vec![1; m.face_count()]))?;
    let inner = m.face_count() as u64 - 1;
    let mut r = Vec::with_capacity(m.vertex_count());
    let mut ok = true;
    for v in 0..m.vertex_count() {
        let p = tree_paths(m, s, v);
        let ri: [u64; 4] = std::array::from_fn(|i| {
            let mut walk = reversed(&p.p[i]);
            walk.extend(&p.p[(i + 3) % 4]);
            faces_right_of(m, &walk).iter().filter(|&&b| b).count() as u64
        });
        let (le, ro) = whole_map[v];
        ok &= ro == ri[1] + ri[2] && le == ri[2] + ri[3] && ri.iter().sum::<u64>() == inner;
        r.push(ri);
    }
    Ok(BarycentricReport { r, whole_map, identities_hold: ok })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimalMethod {
    FaceCount,
    Increasing,
    Optimized,
}

impl PrimalMethod {
    pub fn name(self) -> &'static str {
        match self {
            PrimalMethod::FaceCount => "face-count",
            PrimalMethod::Increasing => "increasing",
            PrimalMethod::Optimized => "optimized",
        }
    }
}

/// Runs one primal method end to end.
pub fn draw_primal(
    m: &PlanarMap,
    l: &CornerLabeling,
    s: &OrientedStructure,
    method: PrimalMethod,
    mode: &FaceCountMode,
) -> Result<GridDrawing> {
    let coords = match method {
        PrimalMethod::FaceCount => face_count_coords(m, s, mode)?,
        PrimalMethod::Increasing => increasing_coords(&build_contractions(m, l, s)?)?,
        PrimalMethod::Optimized => optimized_coords(&build_contractions(m, l, s)?)?,
    };
    Ok(GridDrawing::straight_line(m, &coords, method.name()))
}

/// Grid bounds `m_o <= v+1-d_e`, `m_e <= v+1-d_o`, and `m_o+m_e <= v+3` for
/// triangulations.
pub fn grid_bound(m: &PlanarMap, s: &OrientedStructure) -> (u64, u64, Option<u64>) {
    let v = (m.vertex_count() - 4) as u64;
    let tri = (0..m.face_count()).all(|f| f == m.outer_face() || m.face_degree(f) == 3);
    (v + 1 - s.d_e(m) as u64, v + 1 - s.d_o(m) as u64, tri.then_some(v + 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::labeling::enumerate_labelings;
    use crate::structure::derive_structure;

    fn all(m: &PlanarMap) -> Vec<(CornerLabeling, OrientedStructure)> {
        enumerate_labelings(m)
            .unwrap()
            .into_iter()
            .map(|l| {
                let s = derive_structure(m, &l).unwrap();
                (l, s)
            })
            .collect()
    }

    #[test]
    fn square_is_the_unit_square() {
        let m = fixtures::square();
        let (l, s) = all(&m).pop().unwrap();
        let fc = face_count_coords(&m, &s, &FaceCountMode::Submap).unwrap();
        assert_eq!(fc, vec![(0, 0), (0, 1), (1, 1), (1, 0)]);
        let dags = build_contractions(&m, &l, &s).unwrap();
        assert_eq!(dags.odd.n_classes, 2);
        assert_eq!(dags.odd.diagonals().count(), 0);
        assert_eq!(increasing_coords(&dags).unwrap(), fc);
        assert_eq!(optimized_coords(&dags).unwrap(), fc);
    }

    #[test]
    fn domination_and_bounds_on_small_maps() {
        for m in [fixtures::cube(), fixtures::square_diagonal(), fixtures::wheel(), fixtures::k4_like_triangulation()] {
            for (l, s) in all(&m) {
                let fc = face_count_coords(&m, &s, &FaceCountMode::Submap).unwrap();
                let dags = build_contractions(&m, &l, &s).unwrap();
                let inc = increasing_coords(&dags).unwrap();
                let opt = optimized_coords(&dags).unwrap();
                for v in 0..m.vertex_count() {
                    assert!(inc[v].0 <= fc[v].0 && inc[v].1 <= fc[v].1);
                }
                let dims = |c: &[(u64, u64)]| {
                    (c.iter().map(|p| p.0).max().unwrap(), c.iter().map(|p| p.1).max().unwrap())
                };
                let (a, b, c) = (dims(&opt), dims(&inc), dims(&fc));
                assert!(a.0 <= b.0 && a.1 <= b.1 && b.0 <= c.0 && b.1 <= c.1);
                let (bx, by, bt) = grid_bound(&m, &s);
                assert!(c.0 <= bx && c.1 <= by);
                if let Some(t) = bt {
                    assert!(c.0 + c.1 <= t);
                }
            }
        }
    }

    #[test]
    fn barycentric_identities_on_cube() {
        let m = fixtures::cube();
        for (_, s) in all(&m) {
            assert!(barycentric_report(&m, &s).unwrap().identities_hold);
        }
    }

    #[test]
    fn square_quad_has_no_diagonal() {
        let m = fixtures::square();
        let (l, s) = all(&m).pop().unwrap();
        let q = quad_of(&m, &l, 0).unwrap();
        assert_eq!(q.u, [0, 1, 2, 3]);
        assert_eq!(side_counts(&s, &q), (4, 0, 0));
    }
}
