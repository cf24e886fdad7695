//! Dart-based combinatorial maps.
//!
//! Edge `e` owns darts `2e` and `2e + 1`; `twin(d) = d ^ 1`. Rotations list the
//! darts leaving a vertex in clockwise order. A face is traversed clockwise
//! with its interior on the right of every contour dart, using
//! `succ(d) = cw_prev(twin(d))`.
//!
//! The corner `(tail(d), d)` is the sector swept clockwise from `d` to
//! `cw_next(d)`. It lies in `face_of(d)`, so corners, darts and face contour
//! positions are in bijection.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Dart = usize;
pub type Vertex = usize;
pub type Face = usize;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn edge_of(d: Dart) -> usize {
    d >> 1
}

/// Serialized map description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub edges: Vec<[usize; 2]>,
    pub rotations: Vec<Vec<usize>>,
    pub outer_dart: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_vertices: Option<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_vertex: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    n_vertices: usize,
    head: Vec<Vertex>,
    cw_next: Vec<Dart>,
    cw_prev: Vec<Dart>,
    vertex_dart: Vec<Dart>,
    face_of: Vec<Face>,
    face_dart: Vec<Dart>,
    outer_dart: Dart,
    outer_vertices: Option<[Vertex; 4]>,
    root_vertex: Option<Vertex>,
}

impl PlanarMap {
    /// Builds a map from raw arrays. Faces are numbered by smallest dart.
    pub fn from_parts(n_vertices: usize, head: Vec<Vertex>, cw_next: Vec<Dart>, outer_dart: Dart) -> Result<Self> {
        let n = head.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if !n.is_multiple_of(2) || cw_next.len() != n {
            return Err(Error::Format("dart arrays have inconsistent length".into()));
        }
        if outer_dart >= n {
            return Err(Error::InvalidOuter(format!("outer dart {outer_dart} out of range")));
        }
        let mut cw_prev = vec![usize::MAX; n];
        for d in 0..n {
            let nx = cw_next[d];
            if nx >= n || cw_prev[nx] != usize::MAX {
                return Err(Error::InvalidRotation { dart: nx.min(n - 1) });
            }
            cw_prev[nx] = d;
        }
        for &h in &head {
            if h >= n_vertices {
                return Err(Error::Format(format!("vertex {h} out of range")));
            }
        }
        // every cw_next cycle must stay at one vertex, one cycle per vertex
        let mut vertex_dart = vec![usize::MAX; n_vertices];
        let mut seen = vec![false; n];
        for d in 0..n {
            if seen[d] {
                continue;
            }
            let v = head[twin(d)];
            if vertex_dart[v] != usize::MAX {
                return Err(Error::InvalidRotation { dart: d });
            }
            vertex_dart[v] = d;
            let mut x = d;
            loop {
                if head[twin(x)] != v {
                    return Err(Error::InvalidRotation { dart: x });
                }
                seen[x] = true;
                x = cw_next[x];
                if x == d {
                    break;
                }
            }
        }
        if vertex_dart.contains(&usize::MAX) {
            return Err(Error::Disconnected);
        }
        let mut m = PlanarMap {
            n_vertices,
            head,
            cw_next,
            cw_prev,
            vertex_dart,
            face_of: vec![usize::MAX; n],
            face_dart: Vec::new(),
            outer_dart,
            outer_vertices: None,
            root_vertex: None,
        };
        for d in 0..n {
            if m.face_of[d] != usize::MAX {
                continue;
            }
            let f = m.face_dart.len();
            m.face_dart.push(d);
            let mut x = d;
            loop {
                m.face_of[x] = f;
                x = m.succ(x);
                if x == d {
                    break;
                }
            }
        }
        if !m.is_connected() {
            return Err(Error::Disconnected);
        }
        let euler = m.n_vertices as i64 - m.edge_count() as i64 + m.face_count() as i64;
        if euler != 2 {
            return Err(Error::NotPlanar { euler });
        }
        Ok(m)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for d in self.darts_around(v) {
                let w = self.head[d];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Renumbers faces so that the face containing dart `d` gets id `label(d)`.
    fn relabel_faces(&mut self, label: impl Fn(Dart) -> Face) -> Result<()> {
        let f = self.face_count();
        let mut face_dart = vec![usize::MAX; f];
        let mut face_of = vec![usize::MAX; self.dart_count()];
        for old in 0..f {
            let d0 = self.face_dart[old];
            let new = label(d0);
            if new >= f || face_dart[new] != usize::MAX {
                return Err(Error::InternalInvariantViolated("face relabeling is not a bijection".into()));
            }
            face_dart[new] = d0;
            for d in self.face_contour(old) {
                if label(d) != new {
                    return Err(Error::InternalInvariantViolated("face relabeling not constant on a face".into()));
                }
                face_of[d] = new;
            }
        }
        self.face_dart = face_dart;
        self.face_of = face_of;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }
    pub fn dart_count(&self) -> usize {
        self.head.len()
    }
    pub fn edge_count(&self) -> usize {
        self.head.len() / 2
    }
    pub fn face_count(&self) -> usize {
        self.face_dart.len()
    }
    pub fn head(&self, d: Dart) -> Vertex {
        self.head[d]
    }
    pub fn tail(&self, d: Dart) -> Vertex {
        self.head[twin(d)]
    }
    pub fn cw_next(&self, d: Dart) -> Dart {
        self.cw_next[d]
    }
    pub fn cw_prev(&self, d: Dart) -> Dart {
        self.cw_prev[d]
    }
    /// Next dart clockwise along the face on the right of `d`.
    pub fn succ(&self, d: Dart) -> Dart {
        self.cw_prev[twin(d)]
    }
    pub fn pred(&self, d: Dart) -> Dart {
        twin(self.cw_next[d])
    }
    pub fn face_of(&self, d: Dart) -> Face {
        self.face_of[d]
    }
    pub fn face_dart(&self, f: Face) -> Dart {
        self.face_dart[f]
    }
    pub fn vertex_dart(&self, v: Vertex) -> Dart {
        self.vertex_dart[v]
    }
    pub fn outer_dart(&self) -> Dart {
        self.outer_dart
    }
    pub fn outer_face(&self) -> Face {
        self.face_of[self.outer_dart]
    }
    pub fn outer_vertices(&self) -> Option<[Vertex; 4]> {
        self.outer_vertices
    }
    pub fn root_vertex(&self) -> Option<Vertex> {
        self.root_vertex
    }
    pub fn endpoints(&self, e: usize) -> (Vertex, Vertex) {
        (self.tail(2 * e), self.head(2 * e))
    }

    /// Darts leaving `v` in clockwise order.
    pub fn darts_around(&self, v: Vertex) -> Vec<Dart> {
        let d0 = self.vertex_dart[v];
        let mut out = vec![d0];
        let mut d = self.cw_next[d0];
        while d != d0 {
            out.push(d);
            d = self.cw_next[d];
        }
        out
    }

    /// Contour darts of `f` in clockwise order.
    pub fn face_contour(&self, f: Face) -> Vec<Dart> {
        self.contour_from(self.face_dart[f])
    }

    pub fn contour_from(&self, d0: Dart) -> Vec<Dart> {
        let mut out = vec![d0];
        let mut d = self.succ(d0);
        while d != d0 {
            out.push(d);
            d = self.succ(d);
        }
        out
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.darts_around(v).len()
    }

    pub fn face_degree(&self, f: Face) -> usize {
        self.face_contour(f).len()
    }

    pub fn is_outer_vertex(&self, v: Vertex) -> bool {
        self.outer_vertices.is_some_and(|o| o.contains(&v))
    }

    /// Index `i` in 0..4 such that `v = v_{i+1}`.
    pub fn outer_index(&self, v: Vertex) -> Option<usize> {
        self.outer_vertices.and_then(|o| o.iter().position(|&x| x == v))
    }

    /// Whether the edge of `d` borders the outer face.
    pub fn is_outer_edge(&self, d: Dart) -> bool {
        let o = self.outer_face();
        self.face_of[d] == o || self.face_of[twin(d)] == o
    }

    /// Corners not in the outer face, i.e. darts whose right face is inner.
    pub fn is_inner_corner(&self, d: Dart) -> bool {
        self.face_of[d] != self.outer_face()
    }

    pub fn with_outer_vertices(mut self, ov: [Vertex; 4]) -> Result<Self> {
        let contour = self.face_contour(self.outer_face());
        if contour.len() != 4 {
            return Err(Error::InvalidOuter(format!("outer face has degree {}", contour.len())));
        }
        // the contour visits v1, v4, v3, v2
        let start = contour
            .iter()
            .position(|&d| self.tail(d) == ov[0])
            .ok_or_else(|| Error::InvalidOuter("v1 not on the outer face".into()))?;
        let d1 = contour[start];
        let seq: Vec<Vertex> = (0..4).map(|i| self.tail(contour[(start + i) % 4])).collect();
        if seq != vec![ov[0], ov[3], ov[2], ov[1]] {
            return Err(Error::InvalidOuter(format!("outer vertices {ov:?} not in clockwise order")));
        }
        self.outer_dart = d1;
        self.outer_vertices = Some(ov);
        Ok(self)
    }

    /// Derives `v1..v4` from the outer dart when the outer face is a 4-cycle.
    pub fn with_default_outer_vertices(self) -> Result<Self> {
        let c = self.contour_from(self.outer_dart);
        if c.len() != 4 {
            return Err(Error::InvalidOuter(format!("outer face has degree {}", c.len())));
        }
        let ov = [self.tail(c[0]), self.tail(c[3]), self.tail(c[2]), self.tail(c[1])];
        self.with_outer_vertices(ov)
    }

    pub fn with_root_vertex(mut self, r: Vertex) -> Result<Self> {
        if r >= self.n_vertices {
            return Err(Error::NotRooted34Map(format!("root {r} out of range")));
        }
        self.root_vertex = Some(r);
        Ok(self)
    }

    /// Same darts, heads, rotations and face numbering.
    pub fn same_combinatorics(&self, other: &PlanarMap) -> bool {
        self.n_vertices == other.n_vertices
            && self.head == other.head
            && self.cw_next == other.cw_next
            && self.face_of == other.face_of
    }

    pub fn to_spec(&self) -> MapSpec {
        MapSpec {
            edges: (0..self.edge_count())
                .map(|e| {
                    let (u, v) = self.endpoints(e);
                    [u, v]
                })
                .collect(),
            rotations: (0..self.n_vertices).map(|v| self.darts_around(v)).collect(),
            outer_dart: self.outer_dart,
            outer_vertices: self.outer_vertices,
            root_vertex: self.root_vertex,
        }
    }

    /// Neighbour sets, used for simple-graph queries.
    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        self.darts_around(v).into_iter().map(|d| self.head[d]).collect()
    }

    /// Dart from `u` to `v`, if the edge exists.
    pub fn dart_between(&self, u: Vertex, v: Vertex) -> Option<Dart> {
        self.darts_around(u).into_iter().find(|&d| self.head[d] == v)
    }
}

pub fn build_map(spec: &MapSpec) -> Result<PlanarMap> {
    if spec.edges.is_empty() {
        return Err(Error::Empty);
    }
    let n = spec.rotations.len();
    let nd = 2 * spec.edges.len();
    let mut head = vec![0; nd];
    for (e, &[u, v]) in spec.edges.iter().enumerate() {
        if u >= n || v >= n {
            return Err(Error::Format(format!("edge {e} has an endpoint out of range")));
        }
        head[2 * e] = v;
        head[2 * e + 1] = u;
    }
    let mut cw_next = vec![usize::MAX; nd];
    for (v, rot) in spec.rotations.iter().enumerate() {
        if rot.is_empty() {
            return Err(Error::Disconnected);
        }
        for (i, &d) in rot.iter().enumerate() {
            if d >= nd || cw_next[d] != usize::MAX || head[twin(d)] != v {
                return Err(Error::InvalidRotation { dart: d });
            }
            cw_next[d] = rot[(i + 1) % rot.len()];
        }
    }
    if let Some(d) = cw_next.iter().position(|&x| x == usize::MAX) {
        return Err(Error::InvalidRotation { dart: d });
    }
    let mut m = PlanarMap::from_parts(n, head, cw_next, spec.outer_dart)?;
    if let Some(ov) = spec.outer_vertices {
        m = m.with_outer_vertices(ov)?;
    } else if spec.root_vertex.is_none() && m.face_degree(m.outer_face()) == 4 {
        m = m.with_default_outer_vertices()?;
    }
    if let Some(r) = spec.root_vertex {
        m = m.with_root_vertex(r)?;
    }
    Ok(m)
}

/// Dual map sharing dart indices: dart `d*` crosses `d` from left to right,
/// so `head*(d) = face_of(d)`. Face ids of the dual equal primal vertex ids
/// (`face*(d) = tail(d)`), and the root vertex is the primal outer face.
pub fn dual_map(m: &PlanarMap) -> PlanarMap {
    let nd = m.dart_count();
    let head: Vec<Vertex> = (0..nd).map(|d| m.face_of(d)).collect();
    let cw_next: Vec<Dart> = (0..nd).map(|d| twin(m.succ(twin(d)))).collect();
    let mut dual = PlanarMap::from_parts(m.face_count(), head, cw_next, m.outer_dart())
        .expect("dual of a valid map is valid");
    dual.relabel_faces(|d| m.tail(d)).expect("dual faces correspond to primal vertices");
    dual.root_vertex = Some(m.outer_face());
    dual
}

/// Reverses every edge: dart `d` takes the role of `twin(d)`.
pub fn flip(m: &PlanarMap) -> PlanarMap {
    let nd = m.dart_count();
    let head: Vec<Vertex> = (0..nd).map(|d| m.tail(d)).collect();
    let cw_next: Vec<Dart> = (0..nd).map(|d| twin(m.cw_next(twin(d)))).collect();
    let mut f = PlanarMap::from_parts(m.vertex_count(), head, cw_next, twin(m.outer_dart())).expect("flip of a valid map");
    f.relabel_faces(|d| m.face_of(twin(d))).expect("flip preserves faces");
    f.root_vertex = m.root_vertex;
    f.outer_vertices = m.outer_vertices;
    f
}

/// Primal 3,4-angulation of a rooted map, with the root as outer face.
/// Dart indices are preserved, and `primal_of_rooted(dual_map(p))` reproduces `p`.
pub fn primal_of_rooted(r: &PlanarMap) -> Result<PlanarMap> {
    let root = r.root_vertex().ok_or_else(|| Error::NotRooted34Map("no root vertex".into()))?;
    let mut p = flip(&dual_map(r));
    // faces of p are the vertices of r: face_p(d) = head_r(d)
    let od = if r.head(r.outer_dart()) == root {
        r.outer_dart()
    } else {
        (0..r.dart_count()).find(|&d| r.head(d) == root).expect("root has darts")
    };
    p.outer_dart = od;
    p.root_vertex = None;
    p.outer_vertices = None;
    if p.face_degree(p.outer_face()) == 4 {
        p = p.with_default_outer_vertices()?;
    }
    Ok(p)
}

/// Why a map fails to be an adapted 3,4-angulation of the square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    NoOuterVertices,
    OuterFace { degree: usize },
    FaceDegree { face: Face, degree: usize },
    Loop { edge: usize },
    MultipleEdge { edges: [usize; 2] },
    Triangle { vertices: [Vertex; 3] },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::NoOuterVertices => write!(f, "outer vertices not designated"),
            Witness::OuterFace { degree } => write!(f, "outer face has degree {degree}"),
            Witness::FaceDegree { face, degree } => write!(f, "face {face} has degree {degree}"),
            Witness::Loop { edge } => write!(f, "edge {edge} is a loop"),
            Witness::MultipleEdge { edges } => write!(f, "edges {} and {} are parallel", edges[0], edges[1]),
            Witness::Triangle { vertices } => write!(
                f,
                "non-facial 3-cycle ({}, {}, {})",
                vertices[0], vertices[1], vertices[2]
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub is_34_angulation: bool,
    pub is_adapted: bool,
    pub witness: Option<Witness>,
}

impl ClassifyReport {
    /// An adapted 3,4-angulation of the square.
    pub fn accepts(&self) -> bool {
        self.is_34_angulation && self.is_adapted
    }
}

pub fn classify_34_square(m: &PlanarMap) -> ClassifyReport {
    let mut witness = None;
    let mut is_34 = true;
    match m.outer_vertices() {
        None => {
            is_34 = false;
            witness = Some(Witness::NoOuterVertices);
        }
        Some(ov) => {
            let deg = m.face_degree(m.outer_face());
            let distinct: HashSet<_> = ov.iter().collect();
            if deg != 4 || distinct.len() != 4 {
                is_34 = false;
                witness = Some(Witness::OuterFace { degree: deg });
            }
        }
    }
    if is_34 {
        for f in 0..m.face_count() {
            if f == m.outer_face() {
                continue;
            }
            let deg = m.face_degree(f);
            if deg != 3 && deg != 4 {
                is_34 = false;
                witness = Some(Witness::FaceDegree { face: f, degree: deg });
                break;
            }
        }
    }
    let adapt = adaptedness_witness(m);
    let is_adapted = adapt.is_none();
    if witness.is_none() {
        witness = adapt;
    }
    ClassifyReport { is_34_angulation: is_34, is_adapted, witness }
}

/// Loops, multiple edges or non-facial triangles.
fn adaptedness_witness(m: &PlanarMap) -> Option<Witness> {
    let mut pairs: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for e in 0..m.edge_count() {
        let (u, v) = m.endpoints(e);
        if u == v {
            return Some(Witness::Loop { edge: e });
        }
        let key = (u.min(v), u.max(v));
        if let Some(&e0) = pairs.get(&key) {
            return Some(Witness::MultipleEdge { edges: [e0, e] });
        }
        pairs.insert(key, e);
    }
    let mut facial: HashSet<[Vertex; 3]> = HashSet::new();
    for f in 0..m.face_count() {
        let c = m.face_contour(f);
        if c.len() == 3 {
            let mut t = [m.tail(c[0]), m.tail(c[1]), m.tail(c[2])];
            t.sort_unstable();
            facial.insert(t);
        }
    }
    let adj: Vec<HashSet<Vertex>> = (0..m.vertex_count()).map(|v| m.neighbours(v).into_iter().collect()).collect();
    let mut keys: Vec<_> = pairs.keys().copied().collect();
    keys.sort_unstable();
    for (u, v) in keys {
        let mut common: Vec<_> = adj[u].intersection(&adj[v]).copied().filter(|&w| w > v).collect();
        common.sort_unstable();
        for w in common {
            if !facial.contains(&[u, v, w]) {
                return Some(Witness::Triangle { vertices: [u, v, w] });
            }
        }
    }
    None
}

fn check_rooted_34(r: &PlanarMap) -> Result<Vertex> {
    let root = r.root_vertex().ok_or_else(|| Error::NotRooted34Map("no root vertex".into()))?;
    if r.degree(root) != 4 {
        return Err(Error::NotRooted34Map(format!("root has degree {}", r.degree(root))));
    }
    for v in 0..r.vertex_count() {
        let d = r.degree(v);
        if d != 3 && d != 4 {
            return Err(Error::NotRooted34Map(format!("vertex {v} has degree {d}")));
        }
    }
    Ok(root)
}

/// Whether deleting fewer than 4 edges never splits the vertices into two
/// parts of size at least 2. Exhaustive over edge subsets.
pub fn check_dual_adapted(r: &PlanarMap) -> Result<bool> {
    check_rooted_34(r)?;
    let n = r.vertex_count();
    let m = r.edge_count();
    let ends: Vec<(Vertex, Vertex)> = (0..m).map(|e| r.endpoints(e)).collect();
    let splits = |removed: &[usize]| -> bool {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (e, &(u, v)) in ends.iter().enumerate() {
            if removed.contains(&e) {
                continue;
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for v in 0..n {
            let root = find(&mut parent, v);
            *sizes.entry(root).or_default() += 1;
        }
        if sizes.len() < 2 {
            return false;
        }
        // subset sums of component sizes hitting [2, n-2]
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for &s in sizes.values() {
            for t in (s..=n).rev() {
                if reach[t - s] {
                    reach[t] = true;
                }
            }
        }
        (2..=n.saturating_sub(2)).any(|t| reach[t])
    };
    if splits(&[]) {
        return Ok(false);
    }
    for a in 0..m {
        if splits(&[a]) {
            return Ok(false);
        }
        for b in a + 1..m {
            if splits(&[a, b]) {
                return Ok(false);
            }
            for c in b + 1..m {
                if splits(&[a, b, c]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Same answer as [`check_dual_adapted`], computed on the primal map.
pub fn dual_adapted_via_primal(r: &PlanarMap) -> Result<bool> {
    check_rooted_34(r)?;
    let p = primal_of_rooted(r)?;
    Ok(classify_34_square(&p).accepts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_faces_follow_the_convention() {
        let m = fixtures::square();
        assert_eq!(m.face_count(), 2);
        assert_eq!(m.face_contour(0), vec![0, 2, 4, 6]);
        assert_eq!(m.contour_from(7), vec![7, 5, 3, 1]);
        assert_eq!(m.face_of(7), 1);
        assert_eq!(m.outer_face(), 1);
        assert_eq!(m.outer_dart(), 7);
        assert_eq!(m.outer_vertices(), Some([0, 1, 2, 3]));
    }

    #[test]
    fn single_edge_has_one_face_of_degree_two() {
        let spec = MapSpec {
            edges: vec![[0, 1]],
            rotations: vec![vec![0], vec![1]],
            outer_dart: 0,
            outer_vertices: None,
            root_vertex: None,
        };
        let m = build_map(&spec).unwrap();
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.face_degree(0), 2);
    }

    #[test]
    fn cube_counts() {
        let m = fixtures::cube();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (8, 12, 6));
    }

    #[test]
    fn rejects_bad_rotations() {
        let mut spec = fixtures::square().to_spec();
        spec.rotations[0] = vec![0, 0];
        assert!(matches!(build_map(&spec), Err(Error::InvalidRotation { .. })));
        let mut spec = fixtures::square().to_spec();
        spec.rotations[0] = vec![0];
        assert!(matches!(build_map(&spec), Err(Error::InvalidRotation { dart: 7 })));
    }

    #[test]
    fn rejects_disconnected_and_empty() {
        let spec = MapSpec {
            edges: vec![[0, 1], [2, 3]],
            rotations: vec![vec![0], vec![1], vec![2], vec![3]],
            outer_dart: 0,
            outer_vertices: None,
            root_vertex: None,
        };
        assert_eq!(build_map(&spec), Err(Error::Disconnected));
        let spec = MapSpec { edges: vec![], rotations: vec![vec![]], outer_dart: 0, outer_vertices: None, root_vertex: None };
        assert_eq!(build_map(&spec), Err(Error::Empty));
    }

    #[test]
    fn rejects_non_planar_rotation() {
        // K4 with a twisted rotation at one vertex
        let m = fixtures::k4_like_triangulation();
        let mut spec = m.to_spec();
        spec.outer_vertices = None;
        let r = &mut spec.rotations[4];
        r.swap(0, 1);
        assert!(matches!(build_map(&spec), Err(Error::NotPlanar { .. })));
    }

    #[test]
    fn dual_of_square() {
        let d = dual_map(&fixtures::square());
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 4);
        assert_eq!(d.root_vertex(), Some(1));
        assert_eq!(d.degree(0), 4);
        for dd in 0..8 {
            assert_eq!(d.face_of(dd), fixtures::square().tail(dd));
        }
    }

    #[test]
    fn dual_of_cube_and_diagonal() {
        let d = dual_map(&fixtures::cube());
        assert_eq!(d.vertex_count(), 6);
        assert!((0..6).all(|v| d.degree(v) == 4));
        let d = dual_map(&fixtures::square_diagonal());
        assert_eq!(d.vertex_count(), 3);
        let mut degs: Vec<_> = (0..3).map(|v| d.degree(v)).collect();
        degs.sort();
        assert_eq!(degs, vec![3, 3, 4]);
    }

    #[test]
    fn double_dual_is_flip() {
        for m in [fixtures::square(), fixtures::cube(), fixtures::square_diagonal(), fixtures::non_adapted()] {
            let dd = flip(&dual_map(&dual_map(&m)));
            assert!(dd.same_combinatorics(&m));
            let p = primal_of_rooted(&dual_map(&m)).unwrap();
            assert!(p.same_combinatorics(&m));
            assert_eq!(p.outer_vertices(), m.outer_vertices());
        }
    }

    #[test]
    fn classification() {
        let r = classify_34_square(&fixtures::cube());
        assert!(r.is_34_angulation && r.is_adapted && r.witness.is_none());
        let r = classify_34_square(&fixtures::non_adapted());
        assert!(r.is_34_angulation && !r.is_adapted);
        assert_eq!(r.witness, Some(Witness::Triangle { vertices: [0, 1, 2] }));
        let r = classify_34_square(&fixtures::pentagon());
        assert!(!r.is_34_angulation);
    }

    #[test]
    fn dual_adaptedness() {
        assert!(check_dual_adapted(&dual_map(&fixtures::cube())).unwrap());
        assert!(!check_dual_adapted(&dual_map(&fixtures::non_adapted())).unwrap());
        assert!(check_dual_adapted(&dual_map(&fixtures::square())).unwrap());
        assert!(matches!(check_dual_adapted(&fixtures::cube()), Err(Error::NotRooted34Map(_))));
        for m in [fixtures::cube(), fixtures::non_adapted(), fixtures::square_diagonal()] {
            let d = dual_map(&m);
            assert_eq!(check_dual_adapted(&d).unwrap(), dual_adapted_via_primal(&d).unwrap());
        }
    }

    #[test]
    fn spec_round_trip() {
        let m = fixtures::cube();
        let back = build_map(&m.to_spec()).unwrap();
        assert_eq!(back, m);
    }
}
