//! Generation of small adapted 3,4-angulations of the square by local
//! insertions into inner faces, with rejection of rooted isomorphs.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::map::{build_map, classify_34_square, twin, Dart, Face, MapSpec, PlanarMap, Vertex};

/// Canonical code of a map up to isomorphisms sending the outer vertices
/// `v1..v4` to a cyclic shift of themselves.
pub fn canonical_code(m: &PlanarMap) -> Vec<u32> {
    let ov = m.outer_vertices().expect("outer vertices");
    (0..4).map(|i| rooted_code(m, [ov[i], ov[(i + 1) % 4], ov[(i + 2) % 4], ov[(i + 3) % 4]])).min().unwrap()
}

/// Code of a map rooted at its dart `v1 → v2`: breadth-first numbering of
/// vertices, each rotation read from its discovery dart.
fn rooted_code(m: &PlanarMap, ov: [Vertex; 4]) -> Vec<u32> {
    let root = m.dart_between(ov[0], ov[1]).expect("outer edge v1 v2");
    let mut id = vec![u32::MAX; m.vertex_count()];
    let mut queue = VecDeque::new();
    id[m.tail(root)] = 0;
    queue.push_back(root);
    let mut next = 1;
    let mut code = Vec::new();
    while let Some(start) = queue.pop_front() {
        let v = m.tail(start);
        code.push(m.degree(v) as u32);
        let mut d = start;
        loop {
            let w = m.head(d);
            if id[w] == u32::MAX {
                id[w] = next;
                next += 1;
                queue.push_back(twin(d));
            }
            code.push(id[w]);
            d = m.cw_next(d);
            if d == start {
                break;
            }
        }
    }
    code.extend(ov.iter().map(|&v| id[v]));
    code
}

fn insert_after(rot: &mut [Vec<Dart>], v: Vertex, after: Dart, new: Dart) {
    let i = rot[v].iter().position(|&d| d == after).expect("dart in rotation");
    rot[v].insert(i + 1, new);
}

/// Chord between the corners of the contour darts `a` and `b` of a face.
fn with_chord(m: &PlanarMap, a: Dart, b: Dart) -> MapSpec {
    let mut s = m.to_spec();
    let e = s.edges.len();
    s.edges.push([m.tail(a), m.tail(b)]);
    insert_after(&mut s.rotations, m.tail(a), a, 2 * e);
    insert_after(&mut s.rotations, m.tail(b), b, 2 * e + 1);
    s
}

/// New vertex inside a face joined to the corners of the given contour
/// darts, listed in contour order.
fn with_star(m: &PlanarMap, corners: &[Dart]) -> MapSpec {
    let mut s = m.to_spec();
    let z = s.rotations.len();
    let mut around = Vec::new();
    for &c in corners {
        let e = s.edges.len();
        s.edges.push([m.tail(c), z]);
        insert_after(&mut s.rotations, m.tail(c), c, 2 * e);
        around.push(2 * e + 1);
    }
    s.rotations.push(around);
    s
}

/// New cycle inside a face, each of its vertices joined to one corner.
fn with_ring(m: &PlanarMap, corners: &[Dart]) -> MapSpec {
    let mut s = m.to_spec();
    let k = corners.len();
    let z0 = s.rotations.len();
    let e0 = s.edges.len();
    // spokes e0..e0+k, then ring edges z_i -> z_{i+1}
    for (i, &c) in corners.iter().enumerate() {
        s.edges.push([m.tail(c), z0 + i]);
        insert_after(&mut s.rotations, m.tail(c), c, 2 * (e0 + i));
    }
    for i in 0..k {
        s.edges.push([z0 + i, z0 + (i + 1) % k]);
    }
    for i in 0..k {
        let ring = |j: usize| e0 + k + j;
        s.rotations.push(vec![2 * ring(i), 2 * ring((i + k - 1) % k) + 1, 2 * (e0 + i) + 1]);
    }
    s
}

/// Edge `e` replaced by a path of `k + 1` edges through new vertices.
pub fn subdivide(m: &PlanarMap, e: usize, k: usize) -> MapSpec {
    let mut s = m.to_spec();
    let v = s.edges[e][1];
    let mut prev = e;
    for _ in 0..k {
        let w = s.rotations.len();
        let f = s.edges.len();
        // edge `prev` now ends at w; the new edge f continues from w
        s.edges[prev][1] = w;
        s.edges.push([w, v]);
        s.rotations.push(vec![2 * prev + 1, 2 * f]);
        prev = f;
    }
    if prev != e {
        let r = s.rotations[v].iter_mut().find(|d| **d == 2 * e + 1).expect("twin at v");
        *r = 2 * prev + 1;
    }
    s
}

fn candidates(m: &PlanarMap) -> Vec<MapSpec> {
    let mut out = Vec::new();
    let outer = m.outer_face();
    for f in (0..m.face_count()).filter(|&f| f != outer) {
        let c = m.face_contour(f);
        match c.len() {
            3 => {
                out.push(with_star(m, &c));
                out.push(with_ring(m, &c));
            }
            4 => {
                for i in 0..2 {
                    out.push(with_chord(m, c[i], c[i + 2]));
                    out.push(with_star(m, &[c[i], c[i + 2]]));
                }
                for i in 0..4 {
                    out.push(with_star(m, &[c[i], c[(i + 1) % 4], c[(i + 2) % 4]]));
                }
                out.push(with_star(m, &c));
                out.push(with_ring(m, &c));
            }
            _ => {}
        }
    }
    for e in 0..m.edge_count() {
        let (a, b) = (m.face_of(2 * e), m.face_of(2 * e + 1));
        if a != outer && b != outer && m.face_degree(a) == 3 && m.face_degree(b) == 3 {
            out.push(subdivide(m, e, 1));
        }
    }
    out
}

fn inner_faces(m: &PlanarMap) -> usize {
    m.face_count() - 1
}

/// Adapted 3,4-angulations of the square with at most `max_inner_faces`
/// inner faces reachable from the square, grouped by inner face count.
/// Distinct up to isomorphism preserving `v1..v4`.
pub fn generate_corpus(max_inner_faces: usize) -> BTreeMap<usize, Vec<PlanarMap>> {
    let mut levels: BTreeMap<usize, Vec<PlanarMap>> = BTreeMap::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let square = crate::fixtures::square();
    seen.insert(canonical_code(&square));
    levels.entry(1).or_default().push(square);
    for n in 1..=max_inner_faces {
        let mut i = 0;
        while i < levels.get(&n).map_or(0, Vec::len) {
            let m = levels[&n][i].clone();
            i += 1;
            for spec in candidates(&m) {
                let Ok(next) = build_map(&MapSpec { outer_vertices: m.outer_vertices(), ..spec }) else { continue };
                let k = inner_faces(&next);
                if k > max_inner_faces || !classify_34_square(&next).accepts() {
                    continue;
                }
                if seen.insert(canonical_code(&next)) {
                    levels.entry(k).or_default().push(next);
                }
            }
        }
    }
    levels
}

/// All maps of the corpus, by increasing face count.
pub fn corpus_maps(max_inner_faces: usize) -> Vec<PlanarMap> {
    generate_corpus(max_inner_faces).into_values().flatten().collect()
}

/// Faces of degree 4 of a map, used to split corpora.
pub fn quad_faces(m: &PlanarMap) -> Vec<Face> {
    let outer = m.outer_face();
    (0..m.face_count()).filter(|&f| f != outer && m.face_degree(f) == 4).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn code_ignores_numbering() {
        let a = fixtures::cube();
        let spec = a.to_spec();
        // swap the labels of two inner vertices
        let perm = |v: usize| match v {
            4 => 5,
            5 => 4,
            x => x,
        };
        let mut rot = spec.rotations.clone();
        rot.swap(4, 5);
        let b = build_map(&MapSpec {
            edges: spec.edges.iter().map(|&[u, v]| [perm(u), perm(v)]).collect(),
            rotations: rot,
            ..spec
        })
        .unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        assert_ne!(canonical_code(&a), canonical_code(&fixtures::wheel()));
    }

    #[test]
    fn small_levels() {
        let c = generate_corpus(2);
        assert_eq!(c[&1].len(), 1);
        let codes: HashSet<Vec<u32>> = c[&2].iter().map(canonical_code).collect();
        assert!(codes.contains(&canonical_code(&fixtures::square_diagonal())));
    }

    #[test]
    fn cube_is_generated() {
        let c = generate_corpus(5);
        let cube = canonical_code(&fixtures::cube());
        assert!(c[&5].iter().any(|m| canonical_code(m) == cube));
    }

    #[test]
    fn stars_and_rings_are_planar() {
        let c = generate_corpus(4);
        let wheel = canonical_code(&fixtures::wheel());
        assert!(c[&4].iter().any(|m| canonical_code(m) == wheel));
    }

    #[test]
    fn subdivision_keeps_planarity() {
        let m = fixtures::cube();
        let s = subdivide(&m, 4, 3);
        let g = build_map(&s).unwrap();
        assert_eq!(g.vertex_count(), m.vertex_count() + 3);
        assert_eq!(g.face_count(), m.face_count());
    }
}
