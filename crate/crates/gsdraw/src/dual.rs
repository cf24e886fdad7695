//! Dual 4-GS labelings of rooted 3,4-maps: verification, woods, the dual
//! orientations, their contractions, and duality with the primal structure.
//!
//! The dual map shares dart indices with the primal (see [`dual_map`]). A
//! dual labeling stores `labels[d]` for the corner `(tail*(d), d)` and 0 at
//! the corners of the root vertex.

use serde::{Deserialize, Serialize};

use crate::dag::{all_arcs, orientation_only, ContractionDag, DagArc};
use crate::error::{Error, Result};
use crate::labeling::{jump, shift, CornerLabeling};
use crate::map::{dual_map, primal_of_rooted, twin, Dart, Face, PlanarMap, Vertex};
use crate::structure::{bit, interval_mask, OrientedStructure};

/// A rooted 3,4-map with its root faces `f_1..f_4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedMap {
    pub map: PlanarMap,
    pub root_faces: [Face; 4],
}

impl RootedMap {
    pub fn root(&self) -> Vertex {
        self.map.root_vertex().expect("rooted map")
    }

    /// Dual of a 3,4-angulation of the square; `f_i` is the face of `v_i`.
    pub fn of_primal(m: &PlanarMap) -> Result<Self> {
        let ov = m.outer_vertices().ok_or_else(|| Error::InvalidOuter("outer vertices required".into()))?;
        Ok(RootedMap { map: dual_map(m), root_faces: ov })
    }

    /// Primal of a rooted map, and the rooted map renumbered as its dual.
    pub fn from_rooted(r: &PlanarMap) -> Result<(PlanarMap, Self)> {
        let p = primal_of_rooted(r)?;
        if p.outer_vertices().is_none() {
            return Err(Error::NotRooted34Map("root vertex must have degree 4".into()));
        }
        let d = Self::of_primal(&p)?;
        Ok((p, d))
    }

    pub fn is_root_edge(&self, e: usize) -> bool {
        let (u, v) = self.map.endpoints(e);
        u == self.root() || v == self.root()
    }

    /// Corners not at the root vertex.
    pub fn is_labeled_corner(&self, d: Dart) -> bool {
        self.map.tail(d) != self.root()
    }

    pub fn is_root_face(&self, f: Face) -> bool {
        self.root_faces.contains(&f)
    }
}

/// Dual labeling induced by a primal one: `L*[d] = L[cw_prev(d)]`.
pub fn dualize_labels(m: &PlanarMap, l: &CornerLabeling) -> CornerLabeling {
    let outer = m.outer_face();
    let labels = (0..m.dart_count())
        .map(|d| if m.face_of(twin(d)) == outer { 0 } else { l.get(m.cw_prev(d)) })
        .collect();
    CornerLabeling::from_labels(labels)
}

/// Inverse of [`dualize_labels`]: `L[d] = L*[cw_next(d)]`.
pub fn primal_labels(m: &PlanarMap, ls: &CornerLabeling) -> CornerLabeling {
    let outer = m.outer_face();
    let labels = (0..m.dart_count())
        .map(|d| if m.face_of(d) == outer { 0 } else { ls.get(m.cw_next(d)) })
        .collect();
    CornerLabeling::from_labels(labels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualViolation {
    Unlabeled { dart: Dart },
    RootCornerLabeled { dart: Dart },
    L0 { dart: Dart, face: Face, label: u8 },
    L1Vertex { vertex: Vertex, sum: u32 },
    L1Face { face: Face, sum: u32 },
    L2 { dart: Dart },
    L3 { dart: Dart, delta: u8, epsilon: u8 },
}

/// Checks (L0*)-(L3*). In (L3*) the jump from the left-initial to the
/// right-initial corner plus the jump to the right-terminal corner is >= 2.
pub fn verify_dual_labeling(r: &RootedMap, ls: &CornerLabeling) -> Vec<DualViolation> {
    let m = &r.map;
    let root = r.root();
    let mut v = Vec::new();
    if ls.len() != m.dart_count() {
        return vec![DualViolation::Unlabeled { dart: ls.len().min(m.dart_count()) }];
    }
    for d in 0..m.dart_count() {
        let lab = ls.get(d);
        if m.tail(d) == root {
            if lab != 0 {
                v.push(DualViolation::RootCornerLabeled { dart: d });
            }
        } else if !(1..=4).contains(&lab) {
            v.push(DualViolation::Unlabeled { dart: d });
        }
    }
    if !v.is_empty() {
        return v;
    }
    for d in (0..m.dart_count()).filter(|&d| m.tail(d) != root) {
        let f = m.face_of(d);
        if let Some(i) = r.root_faces.iter().position(|&x| x == f) {
            if ls.get(d) != i as u8 + 1 {
                v.push(DualViolation::L0 { dart: d, face: f, label: ls.get(d) });
            }
        }
    }
    for x in (0..m.vertex_count()).filter(|&x| x != root) {
        let around = m.darts_around(x);
        let mut sum = 0;
        for &d in &around {
            let j = jump(ls.get(d), ls.get(m.cw_next(d)));
            if j == 0 {
                v.push(DualViolation::L2 { dart: d });
            }
            sum += j as u32;
        }
        if sum != 4 {
            v.push(DualViolation::L1Vertex { vertex: x, sum });
        }
    }
    for f in (0..m.face_count()).filter(|&f| !r.is_root_face(f)) {
        let sum: u32 = m.face_contour(f).into_iter().map(|d| jump(ls.get(d), ls.get(m.succ(d))) as u32).sum();
        if sum != 4 {
            v.push(DualViolation::L1Face { face: f, sum });
        }
    }
    for d in 0..m.dart_count() {
        let (t, h) = (m.tail(d), m.head(d));
        if t == root || h == root || m.degree(t) != 3 {
            continue;
        }
        let delta = jump(ls.get(m.cw_prev(d)), ls.get(d));
        let epsilon = jump(ls.get(d), ls.get(m.succ(d)));
        if delta + epsilon < 2 {
            v.push(DualViolation::L3 { dart: d, delta, epsilon });
        }
    }
    v
}

/// `(right-init, right-term, left-term, left-init)` on the dual map.
pub fn around(m: &PlanarMap, ls: &CornerLabeling, d: Dart) -> [u8; 4] {
    [ls.get(d), ls.get(m.succ(d)), ls.get(twin(d)), ls.get(m.cw_prev(d))]
}

/// Label pattern `(k, k, k+2, k+3)` of a special arc.
pub fn is_special_pattern(a: [u8; 4]) -> bool {
    let k = a[0];
    k != 0 && a == [k, k, shift(k, 2), shift(k, 3)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualStructure {
    pub labeling: CornerLabeling,
    pub colors: Vec<u8>,
    pub b_o: Vec<bool>,
    pub b_e: Vec<bool>,
    pub a_o: Vec<bool>,
    pub a_e: Vec<bool>,
    /// per edge: non-root edge outside the support of `A*_o` / `A*_e`
    pub abar_o: Vec<bool>,
    pub abar_e: Vec<bool>,
    /// `parent[k-1][v]`: outgoing arc of `W*_k` at `v`
    pub parent: [Vec<Option<Dart>>; 4],
    /// edge of `e*_k`
    pub root_edges: [usize; 4],
    pub special: Vec<bool>,
    /// per edge: both arcs together carry all four colors
    pub fully_colored: Vec<bool>,
}

impl DualStructure {
    pub fn has_color(&self, d: Dart, k: u8) -> bool {
        self.colors[d] & bit(k) != 0
    }

    pub fn tree_path(&self, m: &PlanarMap, k: u8, v: Vertex) -> Vec<Dart> {
        let mut out = Vec::new();
        let mut x = v;
        while let Some(d) = self.parent[(k - 1) as usize][x] {
            out.push(d);
            x = m.head(d);
        }
        out
    }

    pub fn has_fully_colored_edge(&self) -> bool {
        self.fully_colored.iter().any(|&b| b)
    }

    /// `d*_o`: non-root edges in both `W*_1` and `W*_3`; `d*_e` likewise for 2, 4.
    pub fn double_count(&self, r: &RootedMap, i: u8, j: u8) -> usize {
        (0..r.map.edge_count())
            .filter(|&e| !r.is_root_edge(e))
            .filter(|&e| {
                let (d, t) = (2 * e, 2 * e + 1);
                (self.has_color(d, i) && self.has_color(t, j)) || (self.has_color(d, j) && self.has_color(t, i))
            })
            .count()
    }
}

pub fn derive_dual_structure(r: &RootedMap, ls: &CornerLabeling) -> Result<DualStructure> {
    if let Some(v) = verify_dual_labeling(r, ls).first() {
        return Err(Error::InternalInvariantViolated(format!("invalid dual labeling: {v:?}")));
    }
    let m = &r.map;
    let root = r.root();
    let nd = m.dart_count();
    let mut colors = vec![0u8; nd];
    let mut a_o = vec![false; nd];
    let mut a_e = vec![false; nd];
    let mut special = vec![false; nd];
    for d in (0..nd).filter(|&d| m.tail(d) != root) {
        colors[d] = interval_mask(ls.get(m.cw_prev(d)), ls.get(d));
        if m.head(d) == root {
            continue;
        }
        let a = around(m, ls, d);
        let [ri, rt, lt, li] = a;
        a_o[d] = interval_mask(ri, rt) & bit(4) != 0 || interval_mask(lt, li) & bit(2) != 0 || a == [1, 1, 3, 3];
        a_e[d] = interval_mask(ri, rt) & bit(3) != 0 || interval_mask(lt, li) & bit(1) != 0 || a == [4, 4, 2, 2];
        special[d] = is_special_pattern(a);
    }
    let b_o: Vec<bool> = (0..nd).map(|d| colors[d] & bit(3) != 0 || colors[twin(d)] & bit(1) != 0).collect();
    let b_e: Vec<bool> = (0..nd).map(|d| colors[d] & bit(2) != 0 || colors[twin(d)] & bit(4) != 0).collect();
    let ne = m.edge_count();
    let non_root = |e: usize| {
        let (u, v) = m.endpoints(e);
        u != root && v != root
    };
    let abar_o: Vec<bool> = (0..ne).map(|e| non_root(e) && !a_o[2 * e] && !a_o[2 * e + 1]).collect();
    let abar_e: Vec<bool> = (0..ne).map(|e| non_root(e) && !a_e[2 * e] && !a_e[2 * e + 1]).collect();
    let fully_colored: Vec<bool> = (0..ne).map(|e| colors[2 * e] | colors[2 * e + 1] == 0b1111).collect();
    let mut root_edges = [usize::MAX; 4];
    for d in (0..nd).filter(|&d| m.head(d) == root) {
        for k in 1..=4u8 {
            if colors[d] == bit(k) && m.face_of(twin(d)) == r.root_faces[(k - 1) as usize] {
                root_edges[(k - 1) as usize] = d / 2;
            }
        }
    }
    if root_edges.contains(&usize::MAX) {
        return Err(Error::InternalInvariantViolated(format!("root edges not identified: {root_edges:?}")));
    }
    let mut parent: [Vec<Option<Dart>>; 4] = std::array::from_fn(|_| vec![None; m.vertex_count()]);
    for k in 1..=4u8 {
        let p = &mut parent[(k - 1) as usize];
        for d in (0..nd).filter(|&d| colors[d] & bit(k) != 0) {
            let t = m.tail(d);
            if p[t].replace(d).is_some() {
                return Err(Error::InternalInvariantViolated(format!("W*{k}: two outgoing arcs at {t}")));
            }
        }
    }
    let ds = DualStructure {
        labeling: ls.clone(),
        colors,
        b_o,
        b_e,
        a_o,
        a_e,
        abar_o,
        abar_e,
        parent,
        root_edges,
        special,
        fully_colored,
    };
    check_dual_structure(r, &ds)?;
    Ok(ds)
}

fn check_dual_structure(r: &RootedMap, ds: &DualStructure) -> Result<()> {
    let bad = |msg: String| Err(Error::InternalInvariantViolated(msg));
    let m = &r.map;
    let root = r.root();
    let n = m.vertex_count();
    for k in 1..=4u8 {
        let p = &ds.parent[(k - 1) as usize];
        for v in 0..n {
            if (v == root) != p[v].is_none() {
                return bad(format!("W*{k}: vertex {v} has wrong out-degree"));
            }
            let mut x = v;
            let mut steps = 0;
            while let Some(d) = p[x] {
                x = m.head(d);
                steps += 1;
                if steps > n {
                    return bad(format!("W*{k} has a cycle through {v}"));
                }
            }
        }
        let e = ds.root_edges[(k - 1) as usize];
        if !ds.has_color(2 * e, k) && !ds.has_color(2 * e + 1, k) {
            return bad(format!("W*{k} misses its root edge"));
        }
    }
    for d in 0..m.dart_count() {
        if (ds.a_o[d] && !ds.b_o[d]) || (ds.a_e[d] && !ds.b_e[d]) {
            return bad(format!("A* arc {d} outside B*"));
        }
        if ds.special[d] && (m.degree(m.tail(d)) != 4 || m.degree(m.head(d)) != 3) {
            return bad(format!("special arc {d} has wrong end degrees"));
        }
    }
    for (name, set) in [("B*_o", &ds.b_o), ("B*_e", &ds.b_e), ("A*_o", &ds.a_o), ("A*_e", &ds.a_e)] {
        for e in 0..m.edge_count() {
            if set[2 * e] && set[2 * e + 1] {
                return bad(format!("{name} contains both arcs of edge {e}"));
            }
        }
    }
    Ok(())
}

/// `A⃗*_o` and `A⃗*_e`, over the non-root vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDags {
    pub odd: ContractionDag,
    pub even: ContractionDag,
}

/// Vertex of the last corner labeled `k` clockwise around a face.
pub fn last_corner(m: &PlanarMap, ls: &CornerLabeling, f: Face, k: u8) -> Option<Vertex> {
    let c = m.face_contour(f);
    let n = c.len();
    (0..n).find(|&i| ls.get(c[i]) == k && ls.get(c[(i + 1) % n]) != k).map(|i| m.tail(c[i]))
}

pub fn build_dual_contractions(r: &RootedMap, ds: &DualStructure) -> Result<DualDags> {
    let m = &r.map;
    let root = r.root();
    let build = |abar: &[bool], arcs: &[bool], from: u8, to: u8| -> Result<ContractionDag> {
        let forest: Vec<(Vertex, Vertex)> =
            (0..m.edge_count()).filter(|&e| abar[e]).map(|e| m.endpoints(e)).collect();
        let mut dag = ContractionDag::new(m.vertex_count(), &forest, Some(root))?;
        for d in (0..m.dart_count()).filter(|&d| arcs[d]) {
            dag.add_orientation_arc(d, m.tail(d), m.head(d));
        }
        for f in (0..m.face_count()).filter(|&f| !r.is_root_face(f)) {
            if let (Some(u), Some(v)) = (last_corner(m, &ds.labeling, f, from), last_corner(m, &ds.labeling, f, to)) {
                dag.add_diagonal(f, u, v, true, true);
            }
        }
        for keep in [orientation_only as fn(&DagArc) -> bool, all_arcs] {
            if !dag.is_bipolar(keep) {
                return Err(Error::InternalInvariantViolated("dual contraction is not bipolar".into()));
            }
        }
        Ok(dag)
    };
    Ok(DualDags { odd: build(&ds.abar_o, &ds.a_o, 4, 2)?, even: build(&ds.abar_e, &ds.a_e, 3, 1)? })
}

/// Arc-level duality between the primal structure and the dual one:
/// `B*_o = dual(Ã_e)`, `B*_e = dual(Ã_o^-)`, `Ã*_o = dual(B'_e)` and
/// `(Ã*_e)^- = dual(B'_o)`. Returns the first failing identity.
pub fn duality_mismatch(m: &PlanarMap, s: &OrientedStructure, ds: &DualStructure) -> Option<String> {
    for d in 0..m.dart_count() {
        if ds.b_o[d] != s.a_e[d] {
            return Some(format!("B*_o vs A_e at dart {d}"));
        }
        if ds.b_e[d] != s.a_o[twin(d)] {
            return Some(format!("B*_e vs A_o^- at dart {d}"));
        }
        if m.is_outer_edge(d) {
            continue;
        }
        if ds.a_o[d] != s.in_bprime_e(d) {
            return Some(format!("A*_o vs B'_e at dart {d}"));
        }
        if ds.a_e[twin(d)] != s.in_bprime_o(d) {
            return Some(format!("A*_e^- vs B'_o at dart {d}"));
        }
    }
    None
}

/// Dual structure of a primal labeling, verified.
pub fn dualize_labeling(m: &PlanarMap, l: &CornerLabeling) -> Result<(RootedMap, DualStructure)> {
    let r = RootedMap::of_primal(m)?;
    let ls = dualize_labels(m, l);
    let ds = derive_dual_structure(&r, &ls)?;
    Ok((r, ds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::labeling::enumerate_labelings;
    use crate::structure::derive_structure;

    #[test]
    fn square_dual_structure() {
        let m = fixtures::square();
        let l = enumerate_labelings(&m).unwrap().pop().unwrap();
        let (r, ds) = dualize_labeling(&m, &l).unwrap();
        assert_eq!(r.map.vertex_count(), 2);
        let x = 1 - r.root();
        let around: Vec<u8> = r.map.darts_around(x).into_iter().map(|d| ds.labeling.get(d)).collect();
        let mut sorted = around.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3, 4]);
        for k in 1..=4u8 {
            let p = ds.tree_path(&r.map, k, x);
            assert_eq!(p.len(), 1);
            assert_eq!(p[0] / 2, ds.root_edges[(k - 1) as usize]);
        }
        let dags = build_dual_contractions(&r, &ds).unwrap();
        assert_eq!((dags.odd.n_classes, dags.even.n_classes), (1, 1));
        assert_eq!(dags.odd.diagonals().count(), 0);
    }

    #[test]
    fn cube_duality_identities() {
        let m = fixtures::cube();
        for l in enumerate_labelings(&m).unwrap() {
            let s = derive_structure(&m, &l).unwrap();
            let (r, ds) = dualize_labeling(&m, &l).unwrap();
            assert_eq!(duality_mismatch(&m, &s, &ds), None);
            assert_eq!(primal_labels(&m, &ds.labeling), l);
            build_dual_contractions(&r, &ds).unwrap();
            let v = r.map.vertex_count();
            for k in 1..=4u8 {
                let arcs = (0..r.map.dart_count()).filter(|&d| ds.has_color(d, k)).count();
                assert_eq!(arcs, v - 1);
            }
        }
    }

    #[test]
    fn square_diagonal_dual() {
        let m = fixtures::square_diagonal();
        let l = enumerate_labelings(&m).unwrap().pop().unwrap();
        let (r, ds) = dualize_labeling(&m, &l).unwrap();
        let degs: Vec<usize> = (0..r.map.vertex_count()).map(|v| r.map.degree(v)).collect();
        assert_eq!(degs.iter().filter(|&&d| d == 3).count(), 2);
        assert_eq!(degs[r.root()], 4);
        // the chord v1 v3 is uncolored, so its dual edge is fully colored
        assert_eq!(ds.fully_colored.iter().filter(|&&b| b).count(), 1);
    }

    #[test]
    fn l3_mutation_is_flagged() {
        // some mutated labeling of a degree-3 tail arc violates only (L3*)
        let m = fixtures::wheel();
        let mut seen = false;
        for l in enumerate_labelings(&m).unwrap() {
            let (r, ds) = dualize_labeling(&m, &l).unwrap();
            for d in 0..r.map.dart_count() {
                if !r.is_labeled_corner(d) {
                    continue;
                }
                for lab in 1..=4u8 {
                    let mut ls = ds.labeling.clone();
                    ls.set(d, lab);
                    let v = verify_dual_labeling(&r, &ls);
                    if !v.is_empty() && v.iter().all(|x| matches!(x, DualViolation::L3 { .. })) {
                        seen = true;
                    }
                }
            }
        }
        assert!(seen);
    }

    #[test]
    fn equal_consecutive_labels_violate_l2() {
        let m = fixtures::cube();
        let l = enumerate_labelings(&m).unwrap().pop().unwrap();
        let (r, ds) = dualize_labeling(&m, &l).unwrap();
        let x = (0..r.map.vertex_count()).find(|&v| v != r.root() && !r.map.neighbours(v).contains(&r.root())).unwrap();
        let d = r.map.vertex_dart(x);
        let mut ls = ds.labeling.clone();
        ls.set(d, ls.get(r.map.cw_next(d)));
        assert!(verify_dual_labeling(&r, &ls).iter().any(|v| matches!(v, DualViolation::L2 { .. })));
    }
}
