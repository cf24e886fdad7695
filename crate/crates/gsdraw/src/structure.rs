//! Woods and orientations derived from a primal 4-GS labeling.

use crate::error::{Error, Result};
use crate::labeling::{shift, CornerLabeling};
use crate::map::{edge_of, twin, Dart, PlanarMap, Vertex};

/// Bit for color `k` in a color mask.
#[inline]
pub fn bit(k: u8) -> u8 {
    1 << (k - 1)
}

/// Colors `k` with `k` in `[from, to[` cyclically; empty when `from == to`.
pub fn interval_mask(from: u8, to: u8) -> u8 {
    let mut mask = 0;
    let mut k = from;
    while k != to {
        mask |= bit(k);
        k = shift(k, 1);
    }
    mask
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedStructure {
    /// color mask of each arc
    pub colors: Vec<u8>,
    pub b_o: Vec<bool>,
    pub b_e: Vec<bool>,
    pub a_o: Vec<bool>,
    pub a_e: Vec<bool>,
    /// per edge: outside the support of `A_o` / `A_e`
    pub abar_o: Vec<bool>,
    pub abar_e: Vec<bool>,
    pub u_o: Vec<bool>,
    pub u_e: Vec<bool>,
    /// `parent[k-1][v]`: outgoing arc of `W_k` at `v`
    pub parent: [Vec<Option<Dart>>; 4],
    pub roots: [Vertex; 4],
}

impl OrientedStructure {
    pub fn has_color(&self, d: Dart, k: u8) -> bool {
        self.colors[d] & bit(k) != 0
    }
    pub fn in_bprime_o(&self, d: Dart) -> bool {
        self.b_o[d] || self.u_o[d]
    }
    pub fn in_bprime_e(&self, d: Dart) -> bool {
        self.b_e[d] || self.u_e[d]
    }
    /// Number of inner edges carrying arcs of both `W_i` and `W_j`.
    pub fn double_count(&self, m: &PlanarMap, i: u8, j: u8) -> usize {
        (0..m.edge_count())
            .filter(|&e| !m.is_outer_edge(2 * e))
            .filter(|&e| {
                let (d, t) = (2 * e, 2 * e + 1);
                (self.has_color(d, i) && self.has_color(t, j)) || (self.has_color(d, j) && self.has_color(t, i))
            })
            .count()
    }
    /// `d_o`: inner edges in both `W_1` and `W_3`.
    pub fn d_o(&self, m: &PlanarMap) -> usize {
        self.double_count(m, 1, 3)
    }
    /// `d_e`: inner edges in both `W_2` and `W_4`.
    pub fn d_e(&self, m: &PlanarMap) -> usize {
        self.double_count(m, 2, 4)
    }
    /// Directed path from `v` to the root of `W_k`.
    pub fn tree_path(&self, m: &PlanarMap, k: u8, v: Vertex) -> Vec<Dart> {
        let mut out = Vec::new();
        let mut x = v;
        while let Some(d) = self.parent[(k - 1) as usize][x] {
            out.push(d);
            x = m.head(d);
        }
        out
    }
}

/// Color mask of an outer arc `v_a -> v_b` (1-based outer indices).
fn outer_arc_colors(a: u8, b: u8) -> u8 {
    let mut mask = 0;
    for k in 1..=4u8 {
        let pairs = [(shift(k, 1), shift(k, 2)), (shift(k, 2), shift(k, 3)), (k, shift(k, 3))];
        if pairs.contains(&(a, b)) {
            mask |= bit(k);
        }
    }
    mask
}

pub fn derive_structure(m: &PlanarMap, l: &CornerLabeling) -> Result<OrientedStructure> {
    let ov = m.outer_vertices().ok_or_else(|| Error::InvalidOuter("outer vertices required".into()))?;
    let nd = m.dart_count();
    let oidx = |v: Vertex| ov.iter().position(|&x| x == v).map(|i| i as u8 + 1);
    let mut colors = vec![0u8; nd];
    let mut a_o = vec![false; nd];
    let mut a_e = vec![false; nd];
    let mut u_o = vec![false; nd];
    let mut u_e = vec![false; nd];
    for d in 0..nd {
        if m.is_outer_edge(d) {
            let (a, b) = (oidx(m.tail(d)).unwrap(), oidx(m.head(d)).unwrap());
            colors[d] = outer_arc_colors(a, b);
            a_o[d] = (a, b) == (1, 4) || (a, b) == (2, 3);
            a_e[d] = (a, b) == (1, 2) || (a, b) == (4, 3);
            continue;
        }
        let [ri, rt, lt, li] = l.around(m, d);
        colors[d] = interval_mask(li, ri);
        a_o[d] = li == 1 || ri == 2 || rt == 3 || lt == 4;
        a_e[d] = li == 4 || ri == 1 || rt == 2 || lt == 3;
        u_o[d] = (li, ri, rt, lt) == (2, 2, 4, 4);
        u_e[d] = (li, ri, rt, lt) == (1, 1, 3, 3);
    }
    let b_o: Vec<bool> = (0..nd).map(|d| colors[d] & bit(1) != 0 || colors[twin(d)] & bit(3) != 0).collect();
    let b_e: Vec<bool> = (0..nd).map(|d| colors[d] & bit(4) != 0 || colors[twin(d)] & bit(2) != 0).collect();
    let ne = m.edge_count();
    let abar_o: Vec<bool> = (0..ne).map(|e| !a_o[2 * e] && !a_o[2 * e + 1]).collect();
    let abar_e: Vec<bool> = (0..ne).map(|e| !a_e[2 * e] && !a_e[2 * e + 1]).collect();
    let roots = [ov[3], ov[0], ov[1], ov[2]];
    let mut parent: [Vec<Option<Dart>>; 4] = std::array::from_fn(|_| vec![None; m.vertex_count()]);
    for k in 1..=4u8 {
        let p = &mut parent[(k - 1) as usize];
        for d in 0..nd {
            if colors[d] & bit(k) != 0 {
                let t = m.tail(d);
                if p[t].is_some() {
                    return Err(Error::InternalInvariantViolated(format!("vertex {t} has two outgoing arcs of W{k}")));
                }
                p[t] = Some(d);
            }
        }
    }
    let s = OrientedStructure { colors, b_o, b_e, a_o, a_e, abar_o, abar_e, u_o, u_e, parent, roots };
    check_structure(m, &s, ov)?;
    Ok(s)
}

fn check_structure(m: &PlanarMap, s: &OrientedStructure, ov: [Vertex; 4]) -> Result<()> {
    let bad = |msg: String| Err(Error::InternalInvariantViolated(msg));
    let n = m.vertex_count();
    for k in 1..=4u8 {
        let p = &s.parent[(k - 1) as usize];
        let root = s.roots[(k - 1) as usize];
        for v in 0..n {
            if (v == root) != p[v].is_none() {
                return bad(format!("W{k}: vertex {v} has wrong out-degree"));
            }
            // walk to the root, detecting cycles by length
            let mut x = v;
            let mut steps = 0;
            while let Some(d) = p[x] {
                x = m.head(d);
                steps += 1;
                if steps > n {
                    return bad(format!("W{k} has a cycle through {v}"));
                }
            }
        }
        // v_k and v_{k+1} receive no inner arc of W_k
        for leaf in [ov[(k - 1) as usize], ov[(k % 4) as usize]] {
            for d in m.darts_around(leaf) {
                let inc = twin(d);
                if !m.is_outer_edge(inc) && s.has_color(inc, k) {
                    return bad(format!("W{k}: outer vertex {leaf} is not a leaf"));
                }
            }
        }
    }
    for (name, set) in [("B_o", &s.b_o), ("B_e", &s.b_e), ("A_o", &s.a_o), ("A_e", &s.a_e)] {
        for e in 0..m.edge_count() {
            if set[2 * e] && set[2 * e + 1] {
                return bad(format!("{name} contains both arcs of edge {e}"));
            }
        }
    }
    let arc = |a: usize, b: usize| m.dart_between(ov[a], ov[b]);
    let extra_o = [arc(1, 0), arc(2, 3)];
    let extra_e = [arc(0, 3), arc(1, 2)];
    for d in 0..m.dart_count() {
        if s.b_o[d] && !s.a_o[d] && !extra_o.contains(&Some(d)) {
            return bad(format!("B_o arc {d} outside A_o"));
        }
        if s.b_e[d] && !s.a_e[d] && !extra_e.contains(&Some(d)) {
            return bad(format!("B_e arc {d} outside A_e"));
        }
    }
    for (name, bar) in [("A_o", &s.abar_o), ("A_e", &s.abar_e)] {
        let mut uf: Vec<usize> = (0..n).collect();
        for (e, &b) in bar.iter().enumerate() {
            if !b {
                continue;
            }
            let (u, v) = m.endpoints(e);
            let (a, c) = (find(&mut uf, u), find(&mut uf, v));
            if a == c {
                return bad(format!("complement of {name} has a cycle"));
            }
            uf[a] = c;
        }
    }
    Ok(())
}

pub(crate) fn find(p: &mut [usize], x: usize) -> usize {
    let mut x = x;
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// The six paths of a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePaths {
    /// `p[k-1]`: darts of `P_k(v)` from `v` to the root of `W_k`
    pub p: [Vec<Dart>; 4],
    /// `P_o(v) = P_1(v) ∪ P_3(v)^-`, from `v2` to `v4`
    pub odd: Vec<Dart>,
    /// `P_e(v) = P_4(v) ∪ P_2(v)^-`, from `v1` to `v3`
    pub even: Vec<Dart>,
}

fn reversed(path: &[Dart]) -> Vec<Dart> {
    path.iter().rev().map(|&d| twin(d)).collect()
}

pub fn tree_paths(m: &PlanarMap, s: &OrientedStructure, v: Vertex) -> TreePaths {
    let p: [Vec<Dart>; 4] = std::array::from_fn(|i| s.tree_path(m, i as u8 + 1, v));
    let mut odd = reversed(&p[2]);
    odd.extend(&p[0]);
    let mut even = reversed(&p[1]);
    even.extend(&p[3]);
    TreePaths { p, odd, even }
}

/// Vertices visited by a dart walk, starting at the tail of its first dart.
pub fn walk_vertices(m: &PlanarMap, walk: &[Dart], start: Vertex) -> Vec<Vertex> {
    let mut out = vec![start];
    for &d in walk {
        out.push(m.head(d));
    }
    out
}

/// Edges of a dart list.
pub fn walk_edges(walk: &[Dart]) -> Vec<usize> {
    walk.iter().map(|&d| edge_of(d)).collect()
}
