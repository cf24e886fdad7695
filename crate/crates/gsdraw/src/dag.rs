//! Contractions of orientations along edge forests, and longest-path levels.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Dart, Face, Vertex};
use crate::structure::find;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcKind {
    Orientation,
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagArc {
    pub tail: usize,
    pub head: usize,
    pub kind: ArcKind,
    /// map dart of an orientation arc
    pub dart: Option<Dart>,
    /// map vertices joined by a diagonal arc
    pub ends: Option<(Vertex, Vertex)>,
    pub face: Option<Face>,
    pub strict: bool,
    pub mandatory: bool,
}

/// An orientation with a forest of edges contracted, plus diagonal arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionDag {
    /// class of each map vertex; `None` for excluded vertices
    pub class_of: Vec<Option<usize>>,
    pub n_classes: usize,
    pub arcs: Vec<DagArc>,
}

impl ContractionDag {
    /// Classes are the components of `contracted`, numbered by smallest member.
    pub fn new(n_vertices: usize, contracted: &[(Vertex, Vertex)], excluded: Option<Vertex>) -> Result<Self> {
        let mut uf: Vec<usize> = (0..n_vertices).collect();
        for &(u, v) in contracted {
            let (a, b) = (find(&mut uf, u), find(&mut uf, v));
            if a == b {
                return Err(Error::InternalInvariantViolated("contracted edges contain a cycle".into()));
            }
            uf[a.max(b)] = a.min(b);
        }
        let mut class_of = vec![None; n_vertices];
        let mut id_of_root = vec![usize::MAX; n_vertices];
        let mut n = 0;
        for v in 0..n_vertices {
            if Some(v) == excluded {
                continue;
            }
            let r = find(&mut uf, v);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = n;
                n += 1;
            }
            class_of[v] = Some(id_of_root[r]);
        }
        Ok(ContractionDag { class_of, n_classes: n, arcs: Vec::new() })
    }

    pub fn class(&self, v: Vertex) -> usize {
        self.class_of[v].expect("vertex excluded from the contraction")
    }

    pub fn add_orientation_arc(&mut self, d: Dart, tail: Vertex, head: Vertex) {
        let (t, h) = (self.class(tail), self.class(head));
        self.arcs.push(DagArc {
            tail: t,
            head: h,
            kind: ArcKind::Orientation,
            dart: Some(d),
            ends: Some((tail, head)),
            face: None,
            strict: true,
            mandatory: true,
        });
    }

    pub fn add_diagonal(&mut self, face: Face, from: Vertex, to: Vertex, strict: bool, mandatory: bool) {
        let (t, h) = (self.class(from), self.class(to));
        self.arcs.push(DagArc {
            tail: t,
            head: h,
            kind: ArcKind::Diagonal,
            dart: None,
            ends: Some((from, to)),
            face: Some(face),
            strict,
            mandatory,
        });
    }

    pub fn diagonals(&self) -> impl Iterator<Item = &DagArc> {
        self.arcs.iter().filter(|a| a.kind == ArcKind::Diagonal)
    }

    /// Topological order over the kept arcs, lowest class id first among ready ones.
    pub fn topo_order(&self, keep: impl Fn(&DagArc) -> bool) -> Result<Vec<usize>> {
        let mask: Vec<bool> = self.arcs.iter().map(keep).collect();
        self.topo_masked(&mask)
    }

    fn topo_masked(&self, mask: &[bool]) -> Result<Vec<usize>> {
        let n = self.n_classes;
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, _) in self.arcs.iter().zip(mask).filter(|(_, &k)| k) {
            indeg[a.head] += 1;
            out[a.tail].push(a.head);
        }
        let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&c| indeg[c] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(c)) = heap.pop() {
            order.push(c);
            for &h in &out[c] {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    heap.push(Reverse(h));
                }
            }
        }
        if order.len() != n {
            return Err(Error::CycleDetected);
        }
        Ok(order)
    }

    /// Longest weighted path ending at each class; `weight` returning `None`
    /// drops the arc.
    pub fn levels(&self, weight: impl Fn(&DagArc) -> Option<u64>) -> Result<Vec<u64>> {
        let n = self.n_classes;
        let w: Vec<Option<u64>> = self.arcs.iter().map(&weight).collect();
        let mut incoming: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for (a, wa) in self.arcs.iter().zip(&w) {
            if let Some(x) = wa {
                incoming[a.head].push((a.tail, *x));
            }
        }
        let kept: Vec<bool> = w.iter().map(Option::is_some).collect();
        let order = self.topo_masked(&kept)?;
        let mut level = vec![0u64; n];
        for &c in &order {
            level[c] = incoming[c].iter().map(|&(t, x)| level[t] + x).max().unwrap_or(0);
        }
        Ok(level)
    }

    /// Levels with every arc of weight 1.
    pub fn source_levels(&self) -> Result<Vec<u64>> {
        self.levels(|_| Some(1))
    }

    /// Classes without incoming (resp. outgoing) kept arcs.
    pub fn sources_and_sinks(&self, keep: impl Fn(&DagArc) -> bool) -> (Vec<usize>, Vec<usize>) {
        let mut has_in = vec![false; self.n_classes];
        let mut has_out = vec![false; self.n_classes];
        for a in self.arcs.iter().filter(|a| keep(a)) {
            has_out[a.tail] = true;
            has_in[a.head] = true;
        }
        (
            (0..self.n_classes).filter(|&c| !has_in[c]).collect(),
            (0..self.n_classes).filter(|&c| !has_out[c]).collect(),
        )
    }

    /// Acyclic with one source and one sink.
    pub fn is_bipolar(&self, keep: impl Fn(&DagArc) -> bool + Copy) -> bool {
        if self.topo_order(keep).is_err() {
            return false;
        }
        let (s, t) = self.sources_and_sinks(keep);
        s.len() == 1 && t.len() == 1
    }

    /// Per-vertex values from per-class values.
    pub fn per_vertex(&self, values: &[u64]) -> Vec<Option<u64>> {
        self.class_of.iter().map(|c| c.map(|c| values[c])).collect()
    }
}

/// Orientation arcs only.
pub fn orientation_only(a: &DagArc) -> bool {
    a.kind == ArcKind::Orientation
}

pub fn all_arcs(_: &DagArc) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> ContractionDag {
        let mut d = ContractionDag::new(n, &[], None).unwrap();
        for i in 0..n - 1 {
            d.add_orientation_arc(2 * i, i, i + 1);
        }
        d
    }

    #[test]
    fn path_levels() {
        let d = path(4);
        assert_eq!(d.source_levels().unwrap(), vec![0, 1, 2, 3]);
        assert!(d.is_bipolar(all_arcs));
    }

    #[test]
    fn contraction_merges_classes() {
        let mut d = ContractionDag::new(4, &[(1, 2)], None).unwrap();
        d.add_orientation_arc(0, 0, 1);
        d.add_orientation_arc(2, 2, 3);
        assert_eq!(d.n_classes, 3);
        assert_eq!(d.source_levels().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn cycles_are_reported() {
        let mut d = path(3);
        d.add_orientation_arc(9, 2, 0);
        assert_eq!(d.source_levels(), Err(Error::CycleDetected));
        assert!(!d.is_bipolar(all_arcs));
    }

    #[test]
    fn weak_arcs_do_not_count() {
        let mut d = path(3);
        d.add_diagonal(0, 0, 2, false, true);
        d.add_diagonal(0, 1, 2, false, true);
        let strict = d.levels(|a| Some(if a.kind == ArcKind::Diagonal && !a.strict { 0 } else { 1 })).unwrap();
        assert_eq!(strict, vec![0, 1, 2]);
        let dropped = d.levels(|a| if a.kind == ArcKind::Diagonal { None } else { Some(1) }).unwrap();
        assert_eq!(dropped, vec![0, 1, 2]);
    }

    #[test]
    fn ties_break_by_lowest_id() {
        let d = ContractionDag::new(3, &[], None).unwrap();
        assert_eq!(d.topo_order(all_arcs).unwrap(), vec![0, 1, 2]);
    }
}
