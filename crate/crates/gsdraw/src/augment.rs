//! Diagonals added to the quadrangular inner faces of a labeled adapted
//! 3,4-angulation, keeping the labeling valid, down to an irreducible
//! triangulation of the square.

use crate::error::{Error, Result};
use crate::labeling::{jump, shift, verify_labeling, CornerLabeling};
use crate::map::{build_map, classify_34_square, twin, Dart, Face, PlanarMap};

/// Decisions taken in one quadrangular face, all read from the input labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPlan {
    pub face: Face,
    /// contour darts whose corners carry labels 1..4
    pub corners: [Dart; 4],
    pub special: [bool; 4],
    pub diagonal: [bool; 4],
    /// the diagonal joins the corners labeled `i` and `i + 2`
    pub i: u8,
}

/// A corner is special when the jump to the far corner of the next edge,
/// on the other side, is 1. Corners before an outer edge never are.
pub fn is_special(m: &PlanarMap, l: &CornerLabeling, d: Dart) -> bool {
    !m.is_outer_edge(d) && jump(l.get(d), l.get(twin(d))) == 1
}

pub fn plan_quad(m: &PlanarMap, l: &CornerLabeling, f: Face) -> Result<QuadPlan> {
    let contour = m.face_contour(f);
    let mut corners = [usize::MAX; 4];
    for &d in &contour {
        let k = l.get(d);
        if !(1..=4).contains(&k) || corners[k as usize - 1] != usize::MAX {
            return Err(Error::InternalInvariantViolated(format!("face {f} is not labeled 1, 2, 3, 4")));
        }
        corners[k as usize - 1] = d;
    }
    let special = corners.map(|d| is_special(m, l, d));
    // the corner labeled k is preceded by the one labeled k-1
    let diagonal: [bool; 4] = std::array::from_fn(|k| special[k] && !special[(k + 3) % 4]);
    if (0..4).any(|k| diagonal[k] && diagonal[(k + 1) % 4]) {
        return Err(Error::InternalInvariantViolated(format!("face {f} has consecutive diagonal corners")));
    }
    let eligible = |i: usize| !diagonal[(i + 1) % 4] && !diagonal[(i + 3) % 4];
    let i = if eligible(0) {
        1
    } else if eligible(1) {
        2
    } else {
        return Err(Error::InternalInvariantViolated(format!("face {f} has no eligible diagonal")));
    };
    Ok(QuadPlan { face: f, corners, special, diagonal, i })
}

/// Inserts one diagonal per quadrangular inner face. New edges are appended,
/// so the darts of the input keep their indices.
pub fn triangulate_adapted(m: &PlanarMap, l: &CornerLabeling) -> Result<(PlanarMap, CornerLabeling)> {
    let rep = classify_34_square(m);
    if !rep.accepts() {
        return Err(Error::NotAdapted(format!("{:?}", rep.witness)));
    }
    if let Some(v) = verify_labeling(m, l).violations.first() {
        return Err(Error::StructureInvalid(format!("{v:?}")));
    }
    let outer = m.outer_face();
    let plans = (0..m.face_count())
        .filter(|&f| f != outer && m.face_degree(f) == 4)
        .map(|f| plan_quad(m, l, f))
        .collect::<Result<Vec<_>>>()?;
    let mut labels = l.labels().to_vec();
    let mut spec = m.to_spec();
    for p in &plans {
        for k in 0..4 {
            if p.special[k] {
                labels[p.corners[k]] = shift(labels[p.corners[k]], -1);
            }
        }
        let (a, b) = (p.corners[p.i as usize - 1], p.corners[p.i as usize + 1]);
        let e = spec.edges.len();
        spec.edges.push([m.tail(a), m.tail(b)]);
        for (dart, after) in [(2 * e, a), (2 * e + 1, b)] {
            let rot = &mut spec.rotations[m.tail(after)];
            let at = rot.iter().position(|&x| x == after).expect("contour dart in rotation");
            rot.insert(at + 1, dart);
        }
        labels.extend([p.i, shift(p.i, 2)]);
    }
    let out = build_map(&spec)?;
    let lab = CornerLabeling::from_labels(labels);
    if let Some(v) = verify_labeling(&out, &lab).violations.first() {
        return Err(Error::InternalInvariantViolated(format!("labeling broken by diagonals: {v:?}")));
    }
    Ok((out, lab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::labeling::enumerate_labelings;
    use crate::structure::derive_structure;

    #[test]
    fn square_gets_one_diagonal() {
        let m = fixtures::square();
        let l = enumerate_labelings(&m).unwrap().remove(0);
        let (t, lt) = triangulate_adapted(&m, &l).unwrap();
        assert_eq!(t.edge_count(), 5);
        assert!(verify_labeling(&t, &lt).is_valid());
        assert!(classify_34_square(&t).accepts());
    }

    #[test]
    fn cube_labelings_triangulate() {
        let m = fixtures::cube();
        for l in enumerate_labelings(&m).unwrap() {
            let (t, lt) = triangulate_adapted(&m, &l).unwrap();
            let outer = t.outer_face();
            assert!((0..t.face_count()).all(|f| f == outer || t.face_degree(f) == 3));
            assert!(classify_34_square(&t).accepts());
            let (s0, s1) = (derive_structure(&m, &l).unwrap(), derive_structure(&t, &lt).unwrap());
            assert!(s1.d_o(&t) >= s0.d_o(&m));
            assert!(s1.d_e(&t) >= s0.d_e(&m));
        }
    }

    #[test]
    fn triangulation_is_unchanged() {
        let m = fixtures::square_diagonal();
        let l = enumerate_labelings(&m).unwrap().remove(0);
        let (t, lt) = triangulate_adapted(&m, &l).unwrap();
        assert!(t.same_combinatorics(&m));
        assert_eq!(lt, l);
    }

    #[test]
    fn non_adapted_is_rejected() {
        let m = fixtures::non_adapted();
        let l = CornerLabeling::empty(m.dart_count());
        assert!(matches!(triangulate_adapted(&m, &l), Err(Error::NotAdapted(_))));
    }
}
