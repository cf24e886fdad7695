//! Bend minimization over right-chiral orthogonal types of a rooted map.
//!
//! An orthogonal type fixes the starting direction of every half-edge at a
//! non-root vertex. Angles and bends are encoded as a flow in the network
//! with one node per non-root vertex and one per face: red arcs join a face
//! to the vertices of its corners, blue arcs cross non-root edges. A corner
//! of angle `π/2` (resp. `π`, `3π/2`) carries 1 (resp. 0, −1) from its face
//! to its vertex; a bend convex toward face `f` carries 1 from `f` across
//! its edge. The corner map `Φ` labels each corner by the direction of the
//! half-edge on its clockwise side.

use std::collections::VecDeque;

use crate::dual::{
    derive_dual_structure, dualize_labels, primal_labels, verify_dual_labeling, DualStructure, RootedMap,
};
use crate::drawing::{direction_of, GridDrawing};
use crate::error::{Error, Result};
use crate::labeling::{jump, shift, verify_labeling, CornerLabeling};
use crate::map::{twin, Dart, PlanarMap};
use crate::ortho::{draw_dual, DualMethod};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    /// corner `c`, oriented from its face to its vertex
    RedIn(Dart),
    /// corner `c`, oriented from its vertex to its face
    RedOut(Dart),
    /// from `face_of(d)` to `face_of(twin(d))`
    Blue(Dart),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetArc {
    pub from: usize,
    pub to: usize,
    pub kind: ArcKind,
    pub cost: i64,
}

/// Network on vertices `0..V` and faces `V..V+F`; root nodes are unused.
#[derive(Clone, Debug)]
pub struct TamassiaNetwork {
    pub n_vertices: usize,
    pub arcs: Vec<NetArc>,
    /// required net outflow per node, after routing the fixed corners
    pub supply: Vec<i64>,
    /// corners of angle `π/2` on the right of each dangling half-edge
    pub fixed: Vec<Dart>,
    pub right_chiral: bool,
}

/// Root dart leaving the vertex of `e*_k`, for `k = 1..4`.
pub fn dangling_darts(r: &RootedMap) -> [Dart; 4] {
    let m = &r.map;
    let root = r.root();
    let mut out = [usize::MAX; 4];
    for d in (0..m.dart_count()).filter(|&d| m.head(d) == root) {
        if let Some(k) = r.root_faces.iter().position(|&f| f == m.face_of(twin(d))) {
            out[k] = d;
        }
    }
    out
}

pub fn build_network(r: &RootedMap, right_chiral: bool) -> TamassiaNetwork {
    let m = &r.map;
    let root = r.root();
    let nv = m.vertex_count();
    let fnode = |f: usize| nv + f;
    let mut supply = vec![0i64; nv + m.face_count()];
    for v in (0..nv).filter(|&v| v != root) {
        supply[v] = 4 - 2 * m.degree(v) as i64;
    }
    for f in 0..m.face_count() {
        supply[fnode(f)] = if r.is_root_face(f) { 1 } else { 4 };
    }
    let fixed: Vec<Dart> = dangling_darts(r).to_vec();
    for &c in &fixed {
        supply[fnode(m.face_of(c))] -= 1;
        supply[m.tail(c)] += 1;
    }
    let mut arcs = Vec::new();
    for c in (0..m.dart_count()).filter(|&c| m.tail(c) != root && !fixed.contains(&c)) {
        let (v, f) = (m.tail(c), fnode(m.face_of(c)));
        arcs.push(NetArc { from: f, to: v, kind: ArcKind::RedIn(c), cost: 0 });
        arcs.push(NetArc { from: v, to: f, kind: ArcKind::RedOut(c), cost: 0 });
    }
    for d in 0..m.dart_count() {
        if m.tail(d) == root || m.head(d) == root {
            continue;
        }
        if right_chiral && m.degree(m.head(d)) == 3 {
            continue;
        }
        arcs.push(NetArc { from: fnode(m.face_of(d)), to: fnode(m.face_of(twin(d))), kind: ArcKind::Blue(d), cost: 1 });
    }
    TamassiaNetwork { n_vertices: nv, arcs, supply, fixed, right_chiral }
}

/// 0/1 flow value per network arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamassiaFlow {
    pub flow: Vec<u8>,
}

impl TamassiaNetwork {
    fn node_count(&self) -> usize {
        self.supply.len()
    }

    pub fn cost(&self, f: &TamassiaFlow) -> i64 {
        self.arcs.iter().zip(&f.flow).map(|(a, &x)| a.cost * x as i64).sum()
    }

    /// Net outflows match the supplies.
    pub fn conserves(&self, f: &TamassiaFlow) -> bool {
        let mut net = vec![0i64; self.node_count()];
        for (a, &x) in self.arcs.iter().zip(&f.flow) {
            net[a.from] += x as i64;
            net[a.to] -= x as i64;
        }
        net == self.supply
    }

    /// Removes flow on pairs of opposite arcs, leaving net flows unchanged.
    pub fn cancel_opposite(&self, f: &mut TamassiaFlow) {
        let mut by_pair = std::collections::HashMap::new();
        for (i, a) in self.arcs.iter().enumerate() {
            if f.flow[i] == 1 {
                let key = match a.kind {
                    ArcKind::RedIn(c) | ArcKind::RedOut(c) => (0, c),
                    ArcKind::Blue(d) => (1, d.min(twin(d))),
                };
                if let Some(j) = by_pair.remove(&key) {
                    f.flow[i] = 0;
                    f.flow[j] = 0;
                } else {
                    by_pair.insert(key, i);
                }
            }
        }
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    /// Arc `2i` is network arc `i`; `2i+1` its reverse. Super source and
    /// sink arcs follow.
    fn new(net: &TamassiaNetwork) -> (Self, usize, usize, i64) {
        let n = net.node_count();
        let (s, t) = (n, n + 1);
        let mut g = Residual { head: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); n + 2] };
        for a in &net.arcs {
            g.add(a.from, a.to, 1, a.cost);
        }
        let mut total = 0;
        for (v, &b) in net.supply.iter().enumerate() {
            if b > 0 {
                g.add(s, v, b, 0);
                total += b;
            } else if b < 0 {
                g.add(v, t, -b, 0);
            }
        }
        (g, s, t, total)
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) {
        self.adj[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.adj[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
    }

    fn flow_of(&self, net: &TamassiaNetwork) -> TamassiaFlow {
        TamassiaFlow { flow: (0..net.arcs.len()).map(|i| self.cap[2 * i + 1] as u8).collect() }
    }

    fn dinic(&mut self, s: usize, t: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &a in &self.adj[u] {
                    if self.cap[a] > 0 && level[self.head[a]] == usize::MAX {
                        level[self.head[a]] = level[u] + 1;
                        q.push_back(self.head[a]);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut it = vec![0usize; n];
            loop {
                let pushed = self.blocking(s, t, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    /// One augmenting path in the level graph, found without recursion.
    fn blocking(&mut self, s: usize, t: usize, level: &[usize], it: &mut [usize]) -> i64 {
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let got = path.iter().map(|&a| self.cap[a]).min().unwrap_or(0);
                for &a in &path {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                }
                return got;
            }
            if it[u] < self.adj[u].len() {
                let a = self.adj[u][it[u]];
                let v = self.head[a];
                if self.cap[a] > 0 && level[v] == level[u] + 1 {
                    path.push(a);
                    u = v;
                } else {
                    it[u] += 1;
                }
            } else {
                let Some(a) = path.pop() else { return 0 };
                u = self.head[a ^ 1];
                it[u] += 1;
            }
        }
    }

    /// Successive shortest paths with Dijkstra on reduced costs.
    fn min_cost(&mut self, s: usize, t: usize, want: i64) -> i64 {
        let n = self.adj.len();
        let mut pot = vec![0i64; n];
        let mut sent = 0;
        while sent < want {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0;
            let mut heap = std::collections::BinaryHeap::from([std::cmp::Reverse((0i64, s))]);
            while let Some(std::cmp::Reverse((du, u))) = heap.pop() {
                if du > dist[u] {
                    continue;
                }
                for &a in &self.adj[u] {
                    let v = self.head[a];
                    if self.cap[a] == 0 {
                        continue;
                    }
                    let nd = du + self.cost[a] + pot[u] - pot[v];
                    if nd < dist[v] {
                        dist[v] = nd;
                        via[v] = a;
                        heap.push(std::cmp::Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] < i64::MAX {
                    pot[v] += dist[v];
                }
            }
            let mut push = want - sent;
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.head[a ^ 1];
            }
            sent += push;
        }
        sent
    }
}

/// Some valid flow of the network, by maximum flow.
pub fn feasible_flow(net: &TamassiaNetwork) -> Result<TamassiaFlow> {
    let (mut g, s, t, total) = Residual::new(net);
    if g.dinic(s, t) != total {
        return Err(Error::Infeasible);
    }
    let mut f = g.flow_of(net);
    net.cancel_opposite(&mut f);
    Ok(f)
}

/// A valid flow of minimum cost.
pub fn min_cost_flow(net: &TamassiaNetwork) -> Result<TamassiaFlow> {
    let (mut g, s, t, total) = Residual::new(net);
    if g.min_cost(s, t, total) != total {
        return Err(Error::Infeasible);
    }
    let mut f = g.flow_of(net);
    net.cancel_opposite(&mut f);
    Ok(f)
}

/// Angle values of an orthogonal type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamassiaAssignment {
    /// per corner at a non-root vertex: 1, 0, −1 for `π/2`, `π`, `3π/2`
    pub corner: Vec<i8>,
    /// per dart of a non-root edge: angle value of the bend on the right of the dart
    pub side: Vec<i8>,
}

impl TamassiaAssignment {
    pub fn bends(&self) -> usize {
        self.side.iter().filter(|&&s| s != 0).count() / 2
    }
}

pub fn assignment_of_flow(r: &RootedMap, net: &TamassiaNetwork, f: &TamassiaFlow) -> TamassiaAssignment {
    let nd = r.map.dart_count();
    let mut a = TamassiaAssignment { corner: vec![0; nd], side: vec![0; nd] };
    for &c in &net.fixed {
        a.corner[c] = 1;
    }
    for (arc, &x) in net.arcs.iter().zip(&f.flow) {
        let x = x as i8;
        match arc.kind {
            ArcKind::RedIn(c) => a.corner[c] += x,
            ArcKind::RedOut(c) => a.corner[c] -= x,
            ArcKind::Blue(d) => {
                a.side[d] += x;
                a.side[twin(d)] -= x;
            }
        }
    }
    a
}

/// Flow realizing an assignment; fails if it needs an arc absent from the network.
pub fn flow_of_assignment(net: &TamassiaNetwork, a: &TamassiaAssignment) -> Result<TamassiaFlow> {
    let mut flow = vec![0u8; net.arcs.len()];
    let mut used = 0;
    for (i, arc) in net.arcs.iter().enumerate() {
        let on = match arc.kind {
            ArcKind::RedIn(c) => a.corner[c] == 1,
            ArcKind::RedOut(c) => a.corner[c] == -1,
            ArcKind::Blue(d) => a.side[d] == 1,
        };
        if on {
            flow[i] = 1;
            if let ArcKind::Blue(_) = arc.kind {
                used += 1;
            }
        }
    }
    if used != a.bends() {
        let d = (0..a.side.len()).find(|&d| a.side[d] == 1).unwrap_or(0);
        return Err(Error::NotRightChiral { dart: d });
    }
    Ok(TamassiaFlow { flow })
}

/// Directions of the half-edges at non-root vertices; 0 at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalType {
    pub dir: Vec<u8>,
}

fn is_inner_edge(r: &RootedMap, d: Dart) -> bool {
    let root = r.root();
    r.map.tail(d) != root && r.map.head(d) != root
}

impl OrthogonalType {
    /// Angle value of the bend on the right of `d`, from the two end directions.
    fn side(&self, d: Dart) -> Option<i8> {
        match jump(self.dir[d], self.dir[twin(d)]) {
            2 => Some(0),
            3 => Some(1),
            1 => Some(-1),
            _ => None,
        }
    }

    pub fn bends(&self, r: &RootedMap) -> usize {
        (0..r.map.edge_count()).filter(|&e| is_inner_edge(r, 2 * e) && self.side(2 * e) != Some(0)).count()
    }

    /// First dart whose edge turns left when leaving a degree-3 vertex.
    pub fn left_turn_at_degree3(&self, r: &RootedMap) -> Option<Dart> {
        let m = &r.map;
        (0..m.dart_count()).find(|&d| is_inner_edge(r, d) && m.degree(m.tail(d)) == 3 && self.side(d) == Some(-1))
    }

    pub fn assignment(&self, r: &RootedMap) -> Result<TamassiaAssignment> {
        let m = &r.map;
        let nd = m.dart_count();
        let mut a = TamassiaAssignment { corner: vec![0; nd], side: vec![0; nd] };
        for c in (0..nd).filter(|&c| r.is_labeled_corner(c)) {
            let q = jump(self.dir[c], self.dir[m.cw_next(c)]);
            if q == 0 {
                return Err(Error::StructureInvalid(format!("zero angle at corner {c}")));
            }
            a.corner[c] = 2 - q as i8;
        }
        for d in (0..nd).filter(|&d| is_inner_edge(r, d)) {
            a.side[d] = self
                .side(d)
                .ok_or_else(|| Error::StructureInvalid(format!("edge of dart {d} needs two bends")))?;
        }
        Ok(a)
    }
}

/// Sum conditions on angle values: around each vertex, on each edge, in each
/// inner face, and in each of the four outer portions.
pub fn check_assignment(r: &RootedMap, a: &TamassiaAssignment) -> bool {
    let m = &r.map;
    let root = r.root();
    let mut at_vertex = vec![0i64; m.vertex_count()];
    let mut in_face = vec![0i64; m.face_count()];
    for c in (0..m.dart_count()).filter(|&c| r.is_labeled_corner(c)) {
        at_vertex[m.tail(c)] += a.corner[c] as i64;
        in_face[m.face_of(c)] += a.corner[c] as i64;
    }
    for d in (0..m.dart_count()).filter(|&d| is_inner_edge(r, d)) {
        if a.side[d] + a.side[twin(d)] != 0 {
            return false;
        }
        in_face[m.face_of(d)] += a.side[d] as i64;
    }
    let vertices_ok = (0..m.vertex_count()).all(|v| v == root || at_vertex[v] == 2 * m.degree(v) as i64 - 4);
    let faces_ok = (0..m.face_count()).all(|f| in_face[f] == if r.is_root_face(f) { 1 } else { 4 });
    vertices_ok && faces_ok
}

/// Directions recovered from angle values, anchored at the dangling half-edges.
pub fn type_of_assignment(r: &RootedMap, a: &TamassiaAssignment) -> Result<OrthogonalType> {
    let m = &r.map;
    let mut dir = vec![0u8; m.dart_count()];
    let mut queue = VecDeque::new();
    for (k, &d) in dangling_darts(r).iter().enumerate() {
        dir[d] = k as u8 + 1;
        queue.push_back(d);
    }
    let bad = |what: String| Error::InternalInvariantViolated(format!("inconsistent angle values: {what}"));
    while let Some(d) = queue.pop_front() {
        // around the tail
        let mut c = d;
        loop {
            let next = m.cw_next(c);
            let want = shift(dir[c], 2 - a.corner[c] as i32);
            if next == d {
                if dir[next] != want {
                    return Err(bad(format!("vertex {}", m.tail(d))));
                }
                break;
            }
            if dir[next] == 0 {
                dir[next] = want;
                queue.push_back(next);
            } else if dir[next] != want {
                return Err(bad(format!("vertex {}", m.tail(d))));
            }
            c = next;
        }
        if is_inner_edge(r, d) {
            let t = twin(d);
            let want = shift(dir[d], 2 + a.side[d] as i32);
            if dir[t] == 0 {
                dir[t] = want;
                queue.push_back(t);
            } else if dir[t] != want {
                return Err(bad(format!("edge of dart {d}")));
            }
        }
    }
    Ok(OrthogonalType { dir })
}

/// `Φ`: each corner gets the direction of the half-edge on its clockwise side.
pub fn phi(r: &RootedMap, t: &OrthogonalType) -> Result<CornerLabeling> {
    if let Some(d) = t.left_turn_at_degree3(r) {
        return Err(Error::NotRightChiral { dart: d });
    }
    let m = &r.map;
    let labels = (0..m.dart_count()).map(|c| if r.is_labeled_corner(c) { t.dir[m.cw_next(c)] } else { 0 }).collect();
    Ok(CornerLabeling::from_labels(labels))
}

/// `Φ⁻¹`: a half-edge starts in the direction labeling the corner on its
/// counterclockwise side.
pub fn phi_inverse(r: &RootedMap, ls: &CornerLabeling) -> OrthogonalType {
    let m = &r.map;
    let dir = (0..m.dart_count()).map(|d| if r.is_labeled_corner(d) { ls.get(m.cw_prev(d)) } else { 0 }).collect();
    OrthogonalType { dir }
}

/// Type of a drawing: directions of the first segments and of the arrows.
pub fn type_of_drawing(r: &RootedMap, g: &GridDrawing) -> Result<OrthogonalType> {
    let m = &r.map;
    let mut dir = vec![0u8; m.dart_count()];
    for (k, &d) in dangling_darts(r).iter().enumerate() {
        dir[d] = k as u8 + 1;
    }
    for e in 0..m.edge_count() {
        let Some(p) = g.polylines[e].as_ref() else { continue };
        let n = p.len();
        let first = (p[1].0 - p[0].0, p[1].1 - p[0].1);
        let last = (p[n - 2].0 - p[n - 1].0, p[n - 2].1 - p[n - 1].1);
        let bad = || Error::NonOrthogonalStraightEdge { edge: e };
        dir[2 * e] = direction_of(first).ok_or_else(bad)?;
        dir[2 * e + 1] = direction_of(last).ok_or_else(bad)?;
    }
    Ok(OrthogonalType { dir })
}

/// Minimum-bend right-chiral type, as a dual labeling with its bend count.
pub fn min_bend_labeling(r: &RootedMap) -> Result<(CornerLabeling, usize)> {
    let net = build_network(r, true);
    let f = min_cost_flow(&net)?;
    let a = assignment_of_flow(r, &net, &f);
    let t = type_of_assignment(r, &a)?;
    let ls = phi(r, &t)?;
    if let Some(v) = verify_dual_labeling(r, &ls).first() {
        return Err(Error::InternalInvariantViolated(format!("Φ of a flow is not a labeling: {v:?}")));
    }
    Ok((ls, net.cost(&f) as usize))
}

/// Increasing drawing of the minimum-bend labeling. Special arcs, which the
/// drawing routes differently from the type, are removed first by lowering
/// their left-terminal label; each removal must save a bend.
pub fn min_bend_drawing(r: &RootedMap) -> Result<(DualStructure, GridDrawing)> {
    let (mut ls, mut cost) = min_bend_labeling(r)?;
    loop {
        let ds = derive_dual_structure(r, &ls)?;
        let Some(a) = (0..ds.special.len()).find(|&d| ds.special[d]) else {
            let g = draw_dual(r, &ds, DualMethod::Increasing)?;
            if g.bend_count() != cost {
                return Err(Error::InternalInvariantViolated(format!(
                    "drawing has {} bends, flow cost {cost}",
                    g.bend_count()
                )));
            }
            return Ok((ds, g));
        };
        let mut fixed = ls.clone();
        let t = twin(a);
        fixed.set(t, shift(ls.get(t), -1));
        let c = phi_inverse(r, &fixed).bends(r);
        if !verify_dual_labeling(r, &fixed).is_empty() || c >= cost {
            return Err(Error::InternalInvariantViolated(format!("special arc {a} survives bend minimization")));
        }
        ls = fixed;
        cost = c;
    }
}

/// Primal labeling from a feasible right-chiral flow on the dual.
pub fn solve_by_flow(m: &PlanarMap) -> Result<CornerLabeling> {
    let r = RootedMap::of_primal(m)?;
    let net = build_network(&r, true);
    let f = feasible_flow(&net)?;
    let a = assignment_of_flow(&r, &net, &f);
    let t = type_of_assignment(&r, &a)?;
    let l = primal_labels(m, &phi(&r, &t)?);
    if let Some(v) = verify_labeling(m, &l).violations.first() {
        return Err(Error::InternalInvariantViolated(format!("flow labeling invalid: {v:?}")));
    }
    Ok(l)
}

/// Bend count of the right-chiral type of a primal labeling's dual.
pub fn labeling_bends(m: &PlanarMap, l: &CornerLabeling) -> Result<usize> {
    let r = RootedMap::of_primal(m)?;
    Ok(phi_inverse(&r, &dualize_labels(m, l)).bends(&r))
}
