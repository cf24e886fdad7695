//! Transversal structures and separating decompositions, their corner
//! labelings, and the separating-path placements computed from them.

use serde::{Deserialize, Serialize};

use crate::bend::dangling_darts;
use crate::dual::RootedMap;
use crate::error::{Error, Result};
use crate::labeling::{bipartition, jump, CornerLabeling};
use crate::map::{edge_of, twin, Dart, PlanarMap, Vertex};
use crate::ortho::region_right_of;
use crate::primal::faces_right_of;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColor {
    Red,
    Blue,
    Orange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassicalKind {
    Transversal,
    SeparatingDecomposition,
}

/// Colored orientation of the inner edges; `arcs[e]` is the dart of `e`
/// giving its direction, `None` on outer edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalStructure {
    pub arcs: Vec<Option<(Dart, EdgeColor)>>,
}

impl ClassicalStructure {
    fn at(&self, d: Dart) -> Option<(bool, EdgeColor)> {
        self.arcs[edge_of(d)].map(|(a, c)| (a == d, c))
    }
}

fn invalid(msg: String) -> Error {
    Error::StructureInvalid(msg)
}

fn inner_edges(m: &PlanarMap) -> impl Iterator<Item = usize> + '_ {
    (0..m.edge_count()).filter(move |&e| !m.is_outer_edge(2 * e))
}

fn check_outer(m: &PlanarMap, s: &ClassicalStructure, want: [(bool, EdgeColor); 4]) -> Result<[Vertex; 4]> {
    let ov = m.outer_vertices().ok_or_else(|| Error::InvalidOuter("outer vertices required".into()))?;
    for e in 0..m.edge_count() {
        if m.is_outer_edge(2 * e) != s.arcs[e].is_none() {
            return Err(invalid(format!("edge {e}: inner edges and only those must be oriented")));
        }
    }
    for (i, &v) in ov.iter().enumerate() {
        for d in m.darts_around(v).into_iter().filter(|&d| !m.is_outer_edge(d)) {
            if s.at(d) != Some(want[i]) {
                return Err(invalid(format!("edge {} at outer vertex v{}", edge_of(d), i + 1)));
            }
        }
    }
    Ok(ov)
}

/// Position in the clockwise cycle out-red, out-blue, in-red, in-blue.
fn transversal_type(s: &ClassicalStructure, d: Dart) -> Option<u8> {
    match s.at(d)? {
        (true, EdgeColor::Red) => Some(1),
        (true, EdgeColor::Blue) => Some(2),
        (false, EdgeColor::Red) => Some(3),
        (false, EdgeColor::Blue) => Some(4),
        _ => None,
    }
}

fn transversal_labels(m: &PlanarMap, s: &ClassicalStructure) -> Result<CornerLabeling> {
    use EdgeColor::*;
    let ov = check_outer(m, s, [(true, Red), (true, Blue), (false, Red), (false, Blue)])?;
    let outer = m.outer_face();
    let mut l = CornerLabeling::empty(m.dart_count());
    for v in 0..m.vertex_count() {
        let darts = m.darts_around(v);
        if let Some(i) = ov.iter().position(|&x| x == v) {
            for d in darts.into_iter().filter(|&d| m.face_of(d) != outer) {
                l.set(d, i as u8 + 1);
            }
            continue;
        }
        let types = darts
            .iter()
            .map(|&d| transversal_type(s, d).ok_or_else(|| invalid(format!("edge {} is not red or blue", edge_of(d)))))
            .collect::<Result<Vec<u8>>>()?;
        let n = types.len();
        let steps: Vec<u8> = (0..n).map(|i| jump(types[i], types[(i + 1) % n])).collect();
        if steps.iter().any(|&j| j > 1) || steps.iter().map(|&j| j as u32).sum::<u32>() != 4 {
            return Err(invalid(format!("vertex {v}: edges do not form the four groups in clockwise order")));
        }
        for (&d, &t) in darts.iter().zip(&types) {
            l.set(d, t);
        }
    }
    Ok(l)
}

fn separating_labels(m: &PlanarMap, s: &ClassicalStructure) -> Result<CornerLabeling> {
    use EdgeColor::*;
    let ov = check_outer(m, s, [(false, Orange), (false, Orange), (false, Blue), (false, Blue)])?;
    let black = bipartition(m).ok_or(Error::NoEvenLabeling)?;
    let outer = m.outer_face();
    let mut l = CornerLabeling::empty(m.dart_count());
    for v in 0..m.vertex_count() {
        let darts = m.darts_around(v);
        if let Some(i) = ov.iter().position(|&x| x == v) {
            for d in darts.into_iter().filter(|&d| m.face_of(d) != outer) {
                l.set(d, i as u8 + 1);
            }
            continue;
        }
        let out_of = |c: EdgeColor| (0..darts.len()).filter(|&i| s.at(darts[i]) == Some((true, c))).collect::<Vec<_>>();
        let (ob, oo) = (out_of(Blue), out_of(Orange));
        if ob.len() != 1 || oo.len() != 1 {
            return Err(invalid(format!("vertex {v}: needs one outgoing blue and one outgoing orange edge")));
        }
        let (b, o) = (ob[0], oo[0]);
        let n = darts.len();
        // clockwise from the outgoing blue edge to the outgoing orange one
        let (first, second) = if black[v] { (Blue, Orange) } else { (Orange, Blue) };
        let mut i = (b + 1) % n;
        while i != o {
            if s.at(darts[i]) != Some((false, first)) {
                return Err(invalid(format!("vertex {v}: edge {} breaks the color sectors", edge_of(darts[i]))));
            }
            i = (i + 1) % n;
        }
        let mut i = (o + 1) % n;
        while i != b {
            if s.at(darts[i]) != Some((false, second)) {
                return Err(invalid(format!("vertex {v}: edge {} breaks the color sectors", edge_of(darts[i]))));
            }
            i = (i + 1) % n;
        }
        // corners from the outgoing orange edge to the outgoing blue one
        let (inside, outside) = if black[v] { (1, 3) } else { (4, 2) };
        let span = (b + n - o) % n;
        for k in 0..n {
            l.set(darts[(o + k) % n], if k < span { inside } else { outside });
        }
    }
    Ok(l)
}

/// Corner labeling of a transversal structure or a separating decomposition.
pub fn import_classical(m: &PlanarMap, s: &ClassicalStructure, kind: ClassicalKind) -> Result<CornerLabeling> {
    if s.arcs.len() != m.edge_count() {
        return Err(Error::Format(format!("{} arcs for {} edges", s.arcs.len(), m.edge_count())));
    }
    let outer = m.outer_face();
    let degree = match kind {
        ClassicalKind::Transversal => 3,
        ClassicalKind::SeparatingDecomposition => 4,
    };
    if let Some(f) = (0..m.face_count()).find(|&f| f != outer && m.face_degree(f) != degree) {
        return Err(invalid(format!("face {f} has degree {}", m.face_degree(f))));
    }
    match kind {
        ClassicalKind::Transversal => transversal_labels(m, s),
        ClassicalKind::SeparatingDecomposition => separating_labels(m, s),
    }
}

/// Inverse of [`import_classical`] on a valid labeling of a triangulation
/// (transversal) or an even labeling of a quadrangulation.
pub fn export_classical(m: &PlanarMap, l: &CornerLabeling, kind: ClassicalKind) -> Result<ClassicalStructure> {
    let ov = m.outer_vertices().ok_or_else(|| Error::InvalidOuter("outer vertices required".into()))?;
    let mut arcs = vec![None; m.edge_count()];
    match kind {
        ClassicalKind::Transversal => {
            for e in inner_edges(m) {
                let d = 2 * e;
                let (u, v) = (m.tail(d), m.head(d));
                let (from_u, color) = match (ov.iter().position(|&x| x == u), ov.iter().position(|&x| x == v)) {
                    (Some(i), _) | (None, Some(i)) => {
                        let at_u = ov[i] == u;
                        let (out, c) = [(true, EdgeColor::Red), (true, EdgeColor::Blue), (false, EdgeColor::Red), (false, EdgeColor::Blue)][i];
                        (out == at_u, c)
                    }
                    (None, None) => match l.get(d) {
                        1 => (true, EdgeColor::Red),
                        2 => (true, EdgeColor::Blue),
                        3 => (false, EdgeColor::Red),
                        _ => (false, EdgeColor::Blue),
                    },
                };
                arcs[e] = Some((if from_u { d } else { twin(d) }, color));
            }
        }
        ClassicalKind::SeparatingDecomposition => {
            let black = bipartition(m).ok_or(Error::NoEvenLabeling)?;
            for v in (0..m.vertex_count()).filter(|v| !ov.contains(v)) {
                let (to_blue, to_orange) = if black[v] { ((1, 3), (3, 1)) } else { ((4, 2), (2, 4)) };
                for d in m.darts_around(v) {
                    let pair = (l.get(m.cw_prev(d)), l.get(d));
                    let color = if pair == to_blue {
                        EdgeColor::Blue
                    } else if pair == to_orange {
                        EdgeColor::Orange
                    } else {
                        continue;
                    };
                    if arcs[edge_of(d)].is_some() {
                        return Err(invalid(format!("edge {} is outgoing at both ends", edge_of(d))));
                    }
                    arcs[edge_of(d)] = Some((d, color));
                }
            }
        }
    }
    if let Some(e) = inner_edges(m).find(|&e| arcs[e].is_none()) {
        return Err(invalid(format!("edge {e} received no orientation")));
    }
    Ok(ClassicalStructure { arcs })
}

fn reversed(walk: &[Dart]) -> Vec<Dart> {
    walk.iter().rev().map(|&d| twin(d)).collect()
}

/// `P_i(v)` of a separating decomposition, read from arc colors: `P_1`
/// (resp. `P_3`) follows blue (resp. orange) arcs, `P_2` (resp. `P_4`) blue
/// (resp. orange) at black vertices and the other color at white ones.
/// Outer vertices follow their outer arc.
fn separating_path(m: &PlanarMap, s: &ClassicalStructure, black: &[bool], ov: [Vertex; 4], i: usize, v: Vertex) -> Vec<Dart> {
    let target = ov[(i + 3) % 4];
    let outer_next = |w: Vertex| {
        let k = ov.iter().position(|&x| x == w).unwrap();
        m.dart_between(w, ov[(k + 1) % 4]).expect("outer edge")
    };
    let mut out = Vec::new();
    let mut w = v;
    while w != target {
        let d = if ov.contains(&w) {
            outer_next(w)
        } else {
            let blue = match i {
                0 => true,
                1 => black[w],
                2 => false,
                _ => !black[w],
            };
            let c = if blue { EdgeColor::Blue } else { EdgeColor::Orange };
            m.darts_around(w).into_iter().find(|&d| s.at(d) == Some((true, c))).expect("outgoing arc")
        };
        out.push(d);
        w = m.head(d);
        assert!(out.len() <= m.edge_count(), "separating path does not terminate");
    }
    out
}

/// Straight-line placement from separating paths: `x` counts inner faces
/// left of `P_e(v)`, `y` inner faces right of `P_o(v)`. Outer vertices sit
/// at the corners of the `f × f` grid.
pub fn separating_path_coords(m: &PlanarMap, s: &ClassicalStructure) -> Result<Vec<(u64, u64)>> {
    let ov = m.outer_vertices().ok_or_else(|| Error::InvalidOuter("outer vertices required".into()))?;
    let black = bipartition(m).ok_or(Error::NoEvenLabeling)?;
    let count = |r: Vec<bool>| r.iter().filter(|&&b| b).count() as u64;
    let f = m.face_count() as u64 - 1;
    let corners = [(0, 0), (0, f), (f, f), (f, 0)];
    Ok((0..m.vertex_count())
        .map(|v| {
            if let Some(i) = ov.iter().position(|&x| x == v) {
                return corners[i];
            }
            let p: Vec<Vec<Dart>> = (0..4).map(|i| separating_path(m, s, &black, ov, i, v)).collect();
            let mut even = reversed(&p[1]);
            even.extend(&p[3]);
            let mut odd = reversed(&p[2]);
            odd.extend(&p[0]);
            (count(faces_right_of(m, &reversed(&even))), count(faces_right_of(m, &odd)))
        })
        .collect())
}

/// `P'_k(v)` on a dual labeling: at each vertex, the arc between the
/// corners labeled `k` and `k+1`, up to the endpoint of the `k`-th root edge.
fn dual_label_path(r: &RootedMap, ls: &CornerLabeling, k: u8, v: Vertex) -> Result<Vec<Dart>> {
    let m = &r.map;
    let root = r.root();
    let mut out = Vec::new();
    let mut w = v;
    loop {
        let d = m
            .darts_around(w)
            .into_iter()
            .find(|&d| ls.get(m.cw_prev(d)) == k && ls.get(d) == crate::labeling::shift(k, 1))
            .ok_or_else(|| invalid(format!("vertex {w}: labels {k}, {} are not consecutive", k % 4 + 1)))?;
        if m.head(d) == root {
            return Ok(out);
        }
        out.push(d);
        w = m.head(d);
        if out.len() > m.edge_count() {
            return Err(Error::CycleDetected);
        }
    }
}

/// Orthogonal placement on the dual of a quadrangulation with an even
/// labeling, from the separating paths `P'_e(v) = P'_2 ∪ P'_4⁻` and
/// `P'_o(v) = P'_3 ∪ P'_1⁻`: inner faces of `G* \ v∞` left of the first and
/// right of the second.
pub fn dual_separating_coords(r: &RootedMap, ls: &CornerLabeling) -> Result<Vec<Option<(i64, i64)>>> {
    let m = &r.map;
    let root = r.root();
    let dangling = dangling_darts(r);
    let closed = |from: usize, p_in: &[Dart], p_out: &[Dart], to: usize| {
        let mut w = vec![twin(dangling[from])];
        w.extend(reversed(p_in));
        w.extend(p_out);
        w.push(dangling[to]);
        w
    };
    let count = |region: Vec<bool>| (0..m.face_count()).filter(|&f| region[f] && !r.is_root_face(f)).count() as i64;
    (0..m.vertex_count())
        .map(|v| {
            if v == root {
                return Ok(None);
            }
            let p: Vec<Vec<Dart>> = (1..=4).map(|k| dual_label_path(r, ls, k, v)).collect::<Result<_>>()?;
            let even = closed(3, &p[3], &p[1], 1);
            let odd = closed(0, &p[0], &p[2], 2);
            Ok(Some((count(region_right_of(m, &reversed(&even))), count(region_right_of(m, &odd)))))
        })
        .collect()
}
