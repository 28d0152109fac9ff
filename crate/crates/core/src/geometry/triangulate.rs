//! Pulling triangulation of `σ^∨` into simplicial cones on its own rays.

use crate::linalg::{dot_i, rank_int};

use super::ToricCone;

/// Triangulates `σ^∨` into full-dimensional simplicial cones.
///
/// Each simplex is returned as `dim` indices into [`ToricCone::dual_rays`].
/// Faces of `σ^∨` are ray-index sets; the facets of a face `F` are the sets
/// `F ∩ v_i^⊥` of rank `dim F - 1`. The face is coned from its first ray over
/// the facets not containing it.
pub fn triangulate_dual(cone: &ToricCone) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..cone.dual_rays().len()).collect();
    let mut out = Vec::new();
    pull(cone, &all, cone.dim(), &mut Vec::new(), &mut out);
    out
}

fn pull(
    cone: &ToricCone,
    face: &[usize],
    dim: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if face.len() == dim {
        let mut simplex = prefix.clone();
        simplex.extend_from_slice(face);
        out.push(simplex);
        return;
    }
    let apex = face[0];
    let rays = cone.dual_rays();
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for v in cone.rays() {
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&j| dot_i(v, &rays[j]) == 0)
            .collect();
        if sub.is_empty() || sub.len() == face.len() || sub.contains(&apex) {
            continue;
        }
        if facets.contains(&sub) {
            continue;
        }
        let vecs: Vec<Vec<i64>> = sub.iter().map(|&j| rays[j].clone()).collect();
        if rank_int(&vecs) == dim - 1 {
            facets.push(sub);
        }
    }
    prefix.push(apex);
    for f in &facets {
        pull(cone, f, dim - 1, prefix, out);
    }
    prefix.pop();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dual_cone;
    use crate::linalg::det_int;

    #[test]
    fn simplicial_cone_is_one_piece() {
        let c = dual_cone(&[vec![1, 0], vec![1, 2]], 2).unwrap();
        assert_eq!(triangulate_dual(&c), vec![vec![0, 1]]);
    }

    #[test]
    fn conifold_splits_in_two() {
        let c = dual_cone(
            &[vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1], vec![1, 0, 1]],
            3,
        )
        .unwrap();
        let t = triangulate_dual(&c);
        assert_eq!(t.len(), 2);
        for s in &t {
            let m: Vec<Vec<i64>> = s.iter().map(|&j| c.dual_rays()[j].clone()).collect();
            assert_ne!(det_int(&m).unwrap(), 0);
        }
    }

    #[test]
    fn hexagon_cone_has_four_simplices() {
        // cone over a hexagon: dual of dP3-type cone
        let rays = vec![
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![1, 2, 1],
            vec![1, 2, 2],
            vec![1, 1, 2],
            vec![1, 0, 1],
        ];
        let c = dual_cone(&rays, 3).unwrap();
        let t = triangulate_dual(&c);
        assert_eq!(t.len(), c.dual_rays().len() - 2);
    }
}
