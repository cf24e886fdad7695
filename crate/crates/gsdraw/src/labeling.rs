//! Corner labelings of 3,4-angulations of the square: verification,
//! exhaustive enumeration and solving.
//!
//! A labeling stores one label per dart: `labels[d]` is the label of the
//! corner `(tail(d), d)`, and 0 marks corners of the outer face.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{classify_34_square, twin, Dart, PlanarMap, Vertex};

#[inline]
pub fn jump(a: u8, b: u8) -> u8 {
    (b + 4 - a) % 4
}

/// `l + k` in `1..=4`, modulo 4.
#[inline]
pub fn shift(l: u8, k: i32) -> u8 {
    ((l as i32 - 1 + k).rem_euclid(4) + 1) as u8
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CornerLabeling {
    labels: Vec<u8>,
}

impl CornerLabeling {
    pub fn empty(dart_count: usize) -> Self {
        CornerLabeling { labels: vec![0; dart_count] }
    }
    pub fn from_labels(labels: Vec<u8>) -> Self {
        CornerLabeling { labels }
    }
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
    pub fn get(&self, d: Dart) -> u8 {
        self.labels[d]
    }
    pub fn set(&mut self, d: Dart, l: u8) {
        self.labels[d] = l;
    }
    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
    pub fn right_init(&self, _m: &PlanarMap, d: Dart) -> u8 {
        self.labels[d]
    }
    pub fn left_init(&self, m: &PlanarMap, d: Dart) -> u8 {
        self.labels[m.cw_prev(d)]
    }
    pub fn left_term(&self, _m: &PlanarMap, d: Dart) -> u8 {
        self.labels[twin(d)]
    }
    pub fn right_term(&self, m: &PlanarMap, d: Dart) -> u8 {
        self.labels[m.succ(d)]
    }
    /// `(right-init, right-term, left-term, left-init)`.
    pub fn around(&self, m: &PlanarMap, d: Dart) -> [u8; 4] {
        [self.right_init(m, d), self.right_term(m, d), self.left_term(m, d), self.left_init(m, d)]
    }
    /// Adds `k` to every nonzero label.
    pub fn shifted(&self, k: i32) -> Self {
        CornerLabeling { labels: self.labels.iter().map(|&l| if l == 0 { 0 } else { shift(l, k) }).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Unlabeled { dart: Dart },
    OuterCornerLabeled { dart: Dart },
    OutOfRange { dart: Dart, label: u8 },
    L0 { dart: Dart, vertex: Vertex, label: u8 },
    L1Vertex { vertex: Vertex, sum: u32 },
    L1Face { face: usize, sum: u32 },
    L2 { dart: Dart },
    L3 { dart: Dart, delta: u8, epsilon: u8 },
    EdgeSum { edge: usize, sum: u32 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingReport {
    pub violations: Vec<Violation>,
}

impl LabelingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks (L0)-(L3) and the counterclockwise edge sum.
pub fn verify_labeling(m: &PlanarMap, l: &CornerLabeling) -> LabelingReport {
    let mut v = Vec::new();
    let ov = m.outer_vertices().unwrap_or([usize::MAX; 4]);
    let outer = m.outer_face();
    if l.len() != m.dart_count() {
        v.push(Violation::Unlabeled { dart: l.len().min(m.dart_count()) });
        return LabelingReport { violations: v };
    }
    for d in 0..m.dart_count() {
        let lab = l.get(d);
        if m.face_of(d) == outer {
            if lab != 0 {
                v.push(Violation::OuterCornerLabeled { dart: d });
            }
            continue;
        }
        if lab == 0 {
            v.push(Violation::Unlabeled { dart: d });
        } else if lab > 4 {
            v.push(Violation::OutOfRange { dart: d, label: lab });
        }
    }
    if !v.is_empty() {
        return LabelingReport { violations: v };
    }
    for d in 0..m.dart_count() {
        if m.face_of(d) == outer {
            continue;
        }
        let t = m.tail(d);
        if let Some(i) = ov.iter().position(|&x| x == t) {
            if l.get(d) != i as u8 + 1 {
                v.push(Violation::L0 { dart: d, vertex: t, label: l.get(d) });
            }
        }
    }
    for x in 0..m.vertex_count() {
        if ov.contains(&x) {
            continue;
        }
        let sum: u32 = m.darts_around(x).into_iter().map(|d| jump(l.get(d), l.get(m.cw_next(d))) as u32).sum();
        if sum != 4 {
            v.push(Violation::L1Vertex { vertex: x, sum });
        }
    }
    for f in 0..m.face_count() {
        if f == outer {
            continue;
        }
        let c = m.face_contour(f);
        let mut sum = 0;
        for &d in &c {
            let j = jump(l.get(d), l.get(m.succ(d)));
            if j == 0 {
                v.push(Violation::L2 { dart: d });
            }
            sum += j as u32;
        }
        if sum != 4 {
            v.push(Violation::L1Face { face: f, sum });
        }
        if c.len() == 3 {
            for &d in &c {
                if m.face_of(twin(d)) == outer {
                    continue;
                }
                let delta = jump(l.get(d), l.get(m.succ(d)));
                let epsilon = jump(l.get(m.succ(d)), l.get(twin(d)));
                if delta + epsilon < 2 {
                    v.push(Violation::L3 { dart: d, delta, epsilon });
                }
            }
        }
    }
    for e in 0..m.edge_count() {
        let d = 2 * e;
        if m.is_outer_edge(d) {
            continue;
        }
        let sum = edge_sum(m, l.labels(), d);
        if sum != 4 {
            v.push(Violation::EdgeSum { edge: e, sum });
        }
    }
    LabelingReport { violations: v }
}

/// Counterclockwise jump sum around the edge of `d`.
fn edge_sum(m: &PlanarMap, l: &[u8], d: Dart) -> u32 {
    let [ri, rt, lt, li] = [l[d], l[m.succ(d)], l[twin(d)], l[m.cw_prev(d)]];
    (jump(ri, rt) + jump(rt, lt) + jump(lt, li) + jump(li, ri)) as u32
}

/// Options of [`solve_labeling`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub require_no_uncolored_edge: bool,
    pub require_even: bool,
}

/// Proper 2-coloring with `v1` black (`true`), if the map is bipartite.
pub fn bipartition(m: &PlanarMap) -> Option<Vec<bool>> {
    let start = m.outer_vertices().map(|o| o[0]).unwrap_or(0);
    let mut color: Vec<Option<bool>> = vec![None; m.vertex_count()];
    color[start] = Some(true);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        let c = color[v].unwrap();
        for w in m.neighbours(v) {
            match color[w] {
                None => {
                    color[w] = Some(!c);
                    stack.push(w);
                }
                Some(cw) if cw == c => return None,
                _ => {}
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap()).collect())
}

/// Backtracking over per-face label patterns.
struct Search<'a> {
    m: &'a PlanarMap,
    order: Vec<usize>,
    patterns: Vec<Vec<Vec<u8>>>,
    /// position of each face in `order`, `usize::MAX` for the outer face
    rank: Vec<usize>,
    labels: Vec<u8>,
    derived: bool,
    no_uncolored: bool,
    nodes: u64,
    budget: u64,
}

enum Outcome {
    Done,
    Exhausted,
}

impl<'a> Search<'a> {
    fn new(m: &'a PlanarMap, even: Option<&[bool]>, derived: bool, no_uncolored: bool, budget: u64) -> Self {
        let outer = m.outer_face();
        let ov = m.outer_vertices().expect("outer vertices");
        // breadth-first face order starting next to v1
        let mut order = Vec::new();
        let mut seen = vec![false; m.face_count()];
        seen[outer] = true;
        let mut queue = std::collections::VecDeque::new();
        for d in m.darts_around(ov[0]) {
            let f = m.face_of(d);
            if !seen[f] {
                seen[f] = true;
                queue.push_back(f);
            }
        }
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for d in m.face_contour(f) {
                let g = m.face_of(twin(d));
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        let mut rank = vec![usize::MAX; m.face_count()];
        for (i, &f) in order.iter().enumerate() {
            rank[f] = i;
        }
        let patterns = order
            .iter()
            .map(|&f| {
                let c = m.face_contour(f);
                let mut out = Vec::new();
                let jumps: Vec<Vec<u8>> = if c.len() == 4 {
                    vec![vec![1, 1, 1, 1]]
                } else {
                    vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]
                };
                for start in 1..=4u8 {
                    for js in &jumps {
                        let mut labs = vec![start];
                        for &j in &js[..c.len() - 1] {
                            labs.push(shift(*labs.last().unwrap(), j as i32));
                        }
                        let ok = c.iter().zip(&labs).all(|(&d, &lab)| {
                            let t = m.tail(d);
                            if let Some(i) = ov.iter().position(|&x| x == t) {
                                return lab == i as u8 + 1;
                            }
                            match even {
                                Some(black) => (lab % 2 == 1) == black[t],
                                None => true,
                            }
                        });
                        if ok {
                            out.push(labs);
                        }
                    }
                }
                out.sort();
                out.dedup();
                out
            })
            .collect();
        Search {
            m,
            order,
            patterns,
            rank,
            labels: vec![0; m.dart_count()],
            derived,
            no_uncolored,
            nodes: 0,
            budget,
        }
    }

    fn vertex_ok(&self, v: Vertex) -> bool {
        let m = self.m;
        if m.is_outer_vertex(v) {
            return true;
        }
        let ds = m.darts_around(v);
        let labs: Vec<u8> = ds.iter().map(|&d| self.labels[d]).collect();
        let assigned: Vec<usize> = (0..labs.len()).filter(|&i| labs[i] != 0).collect();
        if assigned.len() < 2 {
            return true;
        }
        // each stretch between assigned corners contributes at least its net jump
        let mut lower = 0u32;
        for (k, &i) in assigned.iter().enumerate() {
            let j = assigned[(k + 1) % assigned.len()];
            lower += jump(labs[i], labs[j]) as u32;
        }
        if assigned.len() == labs.len() {
            lower == 4
        } else {
            lower <= 4
        }
    }

    fn edge_ok(&self, d: Dart) -> bool {
        let m = self.m;
        let l = &self.labels;
        let outer = m.outer_face();
        let (f, g) = (m.face_of(d), m.face_of(twin(d)));
        if f == outer || g == outer {
            return true;
        }
        // (L3) on both sides
        for (x, face) in [(d, f), (twin(d), g)] {
            if m.face_degree(face) == 3 {
                let delta = jump(l[x], l[m.succ(x)]);
                let eps = jump(l[m.succ(x)], l[twin(x)]);
                if delta + eps < 2 {
                    return false;
                }
            }
        }
        if self.derived && edge_sum(m, l, d) != 4 {
            return false;
        }
        if self.no_uncolored && l[m.cw_prev(d)] == l[d] && l[m.cw_prev(twin(d))] == l[twin(d)] {
            return false;
        }
        true
    }

    /// Depth-first over the face order with an explicit stack of pattern
    /// indices; labels are cleared again before returning.
    fn run(&mut self, visit: &mut dyn FnMut(&[u8]) -> bool) -> Option<Outcome> {
        let m = self.m;
        let n = self.order.len();
        let contours: Vec<Vec<Dart>> = self.order.iter().map(|&f| m.face_contour(f)).collect();
        let mut next = vec![0usize; n];
        let mut pos = 0;
        let outcome = 'search: loop {
            if pos == n {
                if !visit(&self.labels) {
                    break 'search Some(Outcome::Done);
                }
                if pos == 0 {
                    break None;
                }
                pos -= 1;
                continue;
            }
            let mut advanced = false;
            while next[pos] < self.patterns[pos].len() {
                let pi = next[pos];
                next[pos] += 1;
                self.nodes += 1;
                if self.nodes > self.budget {
                    break 'search Some(Outcome::Exhausted);
                }
                for (k, &d) in contours[pos].iter().enumerate() {
                    self.labels[d] = self.patterns[pos][pi][k];
                }
                let ok = contours[pos].iter().all(|&d| self.vertex_ok(m.tail(d)))
                    && contours[pos].iter().all(|&d| {
                        let g = m.face_of(twin(d));
                        self.rank[g] == usize::MAX || self.rank[g] > pos || self.edge_ok(d)
                    });
                if ok {
                    advanced = true;
                    break;
                }
            }
            if advanced {
                pos += 1;
                if pos < n {
                    next[pos] = 0;
                }
                continue;
            }
            for &d in &contours[pos] {
                self.labels[d] = 0;
            }
            if pos == 0 {
                break None;
            }
            pos -= 1;
        };
        for c in &contours {
            for &d in c {
                self.labels[d] = 0;
            }
        }
        outcome
    }
}

/// Inner-face limit for [`enumerate_labelings`].
pub const ENUMERATION_FACE_LIMIT: usize = 16;

fn require_square(m: &PlanarMap) -> Result<()> {
    let r = classify_34_square(m);
    if !r.is_34_angulation {
        return Err(Error::NotAdapted(r.witness.map(|w| w.to_string()).unwrap_or_default()));
    }
    Ok(())
}

/// All 4-GS labelings, by exhaustive search pruned only with (L0)-(L3).
pub fn enumerate_labelings(m: &PlanarMap) -> Result<Vec<CornerLabeling>> {
    require_square(m)?;
    let inner = m.face_count() - 1;
    if inner > ENUMERATION_FACE_LIMIT {
        return Err(Error::TooLarge { inner_faces: inner, limit: ENUMERATION_FACE_LIMIT });
    }
    let mut s = Search::new(m, None, false, false, u64::MAX);
    let mut out = Vec::new();
    s.run(&mut |labs| {
        out.push(CornerLabeling { labels: labs.to_vec() });
        true
    });
    out.sort();
    Ok(out)
}

/// Node budget of the backtracking solver.
pub const SOLVER_BUDGET: u64 = 2_000_000;

/// Finds one 4-GS labeling.
///
/// Without options a flow formulation is tried when backtracking runs out of
/// budget; the result is always certified by [`verify_labeling`].
pub fn solve_labeling(m: &PlanarMap, opts: SolveOptions) -> Result<CornerLabeling> {
    require_square(m)?;
    let r = classify_34_square(m);
    if !r.is_adapted {
        return Err(Error::NotAdapted(r.witness.map(|w| w.to_string()).unwrap_or_default()));
    }
    let black = if opts.require_even {
        Some(bipartition(m).ok_or(Error::NoEvenLabeling)?)
    } else {
        None
    };
    let budget = if opts == SolveOptions::default() { 20_000.min(SOLVER_BUDGET) } else { SOLVER_BUDGET };
    let mut s = Search::new(m, black.as_deref(), true, opts.require_no_uncolored_edge, budget);
    let mut found = None;
    let outcome = s.run(&mut |labs| {
        found = Some(CornerLabeling { labels: labs.to_vec() });
        false
    });
    let lab = match (found, outcome) {
        (Some(l), _) => l,
        (None, Some(Outcome::Exhausted)) if opts == SolveOptions::default() => crate::bend::solve_by_flow(m)?,
        (None, Some(Outcome::Exhausted)) => return Err(Error::SearchBudgetExhausted),
        (None, _) => return Err(Error::Infeasible),
    };
    let rep = verify_labeling(m, &lab);
    if !rep.is_valid() {
        return Err(Error::InternalInvariantViolated(format!("solver produced {:?}", rep.violations[0])));
    }
    Ok(lab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn square_labels() -> CornerLabeling {
        let m = fixtures::square();
        let mut l = CornerLabeling::empty(8);
        for d in m.face_contour(0) {
            l.set(d, m.tail(d) as u8 + 1);
        }
        l
    }

    #[test]
    fn jumps_and_shifts() {
        assert_eq!(jump(4, 1), 1);
        assert_eq!(jump(2, 2), 0);
        assert_eq!(jump(1, 4), 3);
        assert_eq!(shift(4, 1), 1);
        assert_eq!(shift(1, -1), 4);
    }

    #[test]
    fn square_labeling_is_valid() {
        let m = fixtures::square();
        assert!(verify_labeling(&m, &square_labels()).is_valid());
        let mut bad = square_labels();
        bad.set(0, 2);
        let r = verify_labeling(&m, &bad);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::L0 { dart: 0, .. })));
    }

    #[test]
    fn square_has_one_labeling() {
        let all = enumerate_labelings(&fixtures::square()).unwrap();
        assert_eq!(all, vec![square_labels()]);
        assert_eq!(solve_labeling(&fixtures::square(), SolveOptions::default()).unwrap(), square_labels());
    }

    #[test]
    fn non_adapted_has_no_labeling() {
        let m = fixtures::non_adapted();
        assert!(enumerate_labelings(&m).unwrap().is_empty());
        assert!(matches!(solve_labeling(&m, SolveOptions::default()), Err(Error::NotAdapted(_))));
    }

    #[test]
    fn enumerated_labelings_verify() {
        for m in [fixtures::cube(), fixtures::wheel(), fixtures::square_diagonal(), fixtures::nested_squares(1)] {
            let all = enumerate_labelings(&m).unwrap();
            assert!(!all.is_empty());
            for l in &all {
                assert!(verify_labeling(&m, l).is_valid());
            }
        }
    }

    #[test]
    fn even_labeling_of_cube() {
        let m = fixtures::cube();
        let black = bipartition(&m).unwrap();
        let l = solve_labeling(&m, SolveOptions { require_even: true, ..Default::default() }).unwrap();
        for d in 0..m.dart_count() {
            if l.get(d) != 0 {
                assert_eq!(l.get(d) % 2 == 1, black[m.tail(d)]);
            }
        }
        assert!(matches!(
            solve_labeling(&fixtures::wheel(), SolveOptions { require_even: true, ..Default::default() }),
            Err(Error::NoEvenLabeling)
        ));
    }

    #[test]
    fn mutations_are_flagged() {
        assert_eq!(enumerate_labelings(&fixtures::square_diagonal()).unwrap().len(), 1);
        let m = fixtures::wheel();
        let all = enumerate_labelings(&m).unwrap();
        // shifting the inner corners of one face breaks a vertex condition
        let mut l = all[0].clone();
        let f = m.face_of(m.dart_between(4, 0).unwrap());
        for d in m.face_contour(f) {
            if !m.is_outer_vertex(m.tail(d)) {
                l.set(d, shift(l.get(d), 1));
            }
        }
        assert!(!verify_labeling(&m, &l).is_valid());
    }
}
