//! Projection between array shapes and the derivation of array-triad
//! catalogs from catalogs one rank lower.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::equivalence::{OrbitEngine, Provenance, TriadClass};
use crate::error::{Error, Result};
use crate::z3core::{is_golay_triad, strides_of, Triad, Z3Array};

/// Join dimension `k` into dimension `l`: index `i_l` becomes `i_k + s_k·i_l`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSpec {
    pub k: usize,
    pub l: usize,
}

impl ProjectionSpec {
    pub fn new(k: usize, l: usize) -> Self {
        ProjectionSpec { k, l }
    }

    fn check(self, rank: usize) -> Result<()> {
        if self.k == self.l || self.k >= rank || self.l >= rank || rank < 2 {
            return Err(Error::InvalidProjection { k: self.k, l: self.l, rank });
        }
        Ok(())
    }
}

/// Apply ψ_{k,l}; the result has rank one lower.
pub fn project(a: &Z3Array, spec: ProjectionSpec) -> Result<Z3Array> {
    spec.check(a.rank())?;
    let shape = a.shape();
    let (k, l) = (spec.k, spec.l);
    let mut out_shape: Vec<usize> = shape.to_vec();
    out_shape[l] *= shape[k];
    out_shape.remove(k);
    let out_strides = strides_of(&out_shape);
    let mut out = vec![0u8; a.len()];
    for (flat, &d) in a.digits().iter().enumerate() {
        let idx = a.unflatten(flat);
        let mut target = 0;
        let mut j = 0;
        for (dim, &i) in idx.iter().enumerate() {
            if dim == k {
                continue;
            }
            let v = if dim == l { idx[k] + shape[k] * i } else { i };
            target += v * out_strides[j];
            j += 1;
        }
        out[target] = d;
    }
    Ok(Z3Array::from_raw(out_shape, out))
}

/// Memberwise ψ_{k,l}.
pub fn project_triad(t: &Triad, spec: ProjectionSpec) -> Result<Triad> {
    t.try_map(|m| project(m, spec))
}

/// Split dimension `dim` of extent `f·g` into a new dimension of extent `f`
/// (inserted at position `dim`, fast index) followed by one of extent `g`.
/// Inverse of `project` with `k = dim`, `l = dim + 1`.
pub fn unproject(a: &Z3Array, dim: usize, factor: usize) -> Result<Z3Array> {
    if dim >= a.rank() {
        return Err(Error::DimensionOutOfRange { dim, rank: a.rank() });
    }
    let extent = a.shape()[dim];
    if factor == 0 || extent % factor != 0 {
        return Err(Error::NotDivisible { factor, extent });
    }
    let mut shape = a.shape().to_vec();
    shape[dim] = extent / factor;
    shape.insert(dim, factor);
    let strides = strides_of(&shape);
    let mut out = vec![0u8; a.len()];
    for (flat, &d) in a.digits().iter().enumerate() {
        let idx = a.unflatten(flat);
        let mut target = 0;
        for (pos, &i) in idx.iter().enumerate() {
            if pos < dim {
                target += i * strides[pos];
            } else if pos == dim {
                target += (i % factor) * strides[dim] + (i / factor) * strides[dim + 1];
            } else {
                target += i * strides[pos + 1];
            }
        }
        out[target] = d;
    }
    Ok(Z3Array::from_raw(shape, out))
}

/// Memberwise inverse reshape. The result need not be a Golay triad.
pub fn unproject_triad(t: &Triad, dim: usize, factor: usize) -> Result<Triad> {
    t.try_map(|m| unproject(m, dim, factor))
}

/// Shape with extents sorted ascending, together with the dimension
/// permutation that achieves it. Extent-1 dimensions are kept.
pub fn sorted_shape(shape: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut perm: Vec<usize> = (0..shape.len()).collect();
    perm.sort_by_key(|&d| shape[d]);
    (perm.iter().map(|&d| shape[d]).collect(), perm)
}

/// Reorder a triad's dimensions so that extents are nondecreasing.
pub fn canonical_shape_triad(t: &Triad) -> Triad {
    let (_, perm) = sorted_shape(t.shape());
    t.try_map(|m| m.permute_dims(&perm)).expect("permutation of own rank")
}

/// Every reordering of `t`'s dimensions that leaves its shape unchanged.
fn shape_preserving_permutations(shape: &[usize]) -> Vec<Vec<usize>> {
    let r = shape.len();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..r).collect();
    permutations(&mut perm, 0, &mut |p| {
        if p.iter().enumerate().all(|(j, &d)| shape[j] == shape[d]) {
            out.push(p.to_vec());
        }
    });
    out
}

fn permutations(p: &mut Vec<usize>, start: usize, visit: &mut dyn FnMut(&[usize])) {
    if start == p.len() {
        visit(p);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permutations(p, start + 1, visit);
        p.swap(start, i);
    }
}

/// A way to obtain shape `target` by splitting one dimension of `parent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub parent: Vec<usize>,
    pub dim: usize,
    pub factor: usize,
}

/// All parent shapes (sorted) and split positions that lead to `target`
/// (sorted) after one unprojection and a dimension sort.
pub fn routes(target: &[usize]) -> Vec<Route> {
    let (target, _) = sorted_shape(target);
    let mut out = Vec::new();
    for k in 0..target.len() {
        for l in 0..target.len() {
            if k == l {
                continue;
            }
            let mut parent = target.clone();
            parent[l] *= target[k];
            parent.remove(k);
            let (parent, _) = sorted_shape(&parent);
            let merged = target[k] * target[l];
            for dim in 0..parent.len() {
                if parent[dim] != merged {
                    continue;
                }
                let route = Route { parent: parent.clone(), dim, factor: target[k] };
                if !out.contains(&route) {
                    out.push(route);
                }
            }
        }
    }
    out
}

/// Every Golay triad of the (sorted) shape `target` whose unprojection
/// route starts from one of `parent_orbits`, which must contain every
/// normalised triad of `route.parent`.
pub fn lift_triads<'a, I>(route: &Route, parent_orbits: I) -> Result<BTreeSet<Triad>>
where
    I: IntoParallelIterator<Item = &'a Triad>,
{
    let mut shape = route.parent.clone();
    shape[route.dim] /= route.factor;
    shape.insert(route.dim, route.factor);
    let (target, perm) = sorted_shape(&shape);
    let symmetric = shape_preserving_permutations(&target);
    let found: Vec<Vec<Triad>> = parent_orbits
        .into_par_iter()
        .map(|t| -> Result<Vec<Triad>> {
            let lifted = unproject_triad(t, route.dim, route.factor)?.try_map(|m| m.permute_dims(&perm))?;
            if !is_golay_triad(&lifted) {
                return Ok(Vec::new());
            }
            symmetric.iter().map(|p| lifted.try_map(|m| m.permute_dims(p))).collect()
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Classes of Golay array triads of shape `target` obtained by lifting the
/// full orbits of a parent catalog.
pub fn derive_array_classes<'a, I>(target: &[usize], route: &Route, parent_orbits: I) -> Result<Vec<(TriadClass, Vec<Triad>)>>
where
    I: IntoParallelIterator<Item = &'a Triad>,
{
    let (sorted, _) = sorted_shape(target);
    let lifted = lift_triads(route, parent_orbits)?;
    if let Some(t) = lifted.first() {
        if t.shape() != sorted.as_slice() {
            return Err(Error::ShapeMismatch(sorted, t.shape().to_vec()));
        }
    }
    OrbitEngine::new(&sorted).classify_with_orbits(lifted, &Provenance::Projected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(shape: &[usize], d: &[u8]) -> Z3Array {
        Z3Array::new(shape.to_vec(), d.to_vec()).unwrap()
    }

    #[test]
    fn projection_reads_columns() {
        let a = arr(&[2, 3], &[0, 0, 2, 2, 0, 0]);
        let p = project(&a, ProjectionSpec::new(0, 1)).unwrap();
        assert_eq!(p.shape(), &[6]);
        assert_eq!(p.digits(), &[0, 2, 0, 0, 2, 0]);
        assert_eq!(unproject(&p, 0, 2).unwrap(), a);
    }

    #[test]
    fn projection_rejects_bad_spec() {
        let a = arr(&[2, 3], &[0; 6]);
        assert!(project(&a, ProjectionSpec::new(0, 0)).is_err());
        assert!(project(&a, ProjectionSpec::new(0, 2)).is_err());
        assert!(project(&arr(&[3], &[0; 3]), ProjectionSpec::new(0, 1)).is_err());
        assert!(unproject(&arr(&[6], &[0; 6]), 0, 4).is_err());
    }

    #[test]
    fn trivial_factors_keep_digits() {
        let a = arr(&[6], &[0, 1, 2, 2, 1, 0]);
        assert_eq!(unproject(&a, 0, 1).unwrap().digits(), a.digits());
        assert_eq!(unproject(&a, 0, 6).unwrap().digits(), a.digits());
        let col = arr(&[3, 1], &[0, 1, 2]);
        assert_eq!(project(&col, ProjectionSpec::new(1, 0)).unwrap(), arr(&[3], &[0, 1, 2]));
    }

    #[test]
    fn rank_three_round_trip() {
        let a = arr(&[2, 3, 3], &(0..18).map(|i| (i * 7 % 3) as u8).collect::<Vec<_>>());
        for (k, l) in [(1, 2), (2, 1), (0, 1), (0, 2), (1, 0), (2, 0)] {
            let p = project(&a, ProjectionSpec::new(k, l)).unwrap();
            assert_eq!(p.rank(), 2);
            if l == k + 1 {
                assert_eq!(unproject(&p, k, a.shape()[k]).unwrap(), a);
            }
        }
    }

    #[test]
    fn routes_for_common_shapes() {
        let r = routes(&[2, 9]);
        assert!(r.contains(&Route { parent: vec![18], dim: 0, factor: 2 }));
        assert!(r.contains(&Route { parent: vec![18], dim: 0, factor: 9 }));
        let r = routes(&[2, 3, 3]);
        assert!(r.contains(&Route { parent: vec![2, 9], dim: 1, factor: 3 }));
        assert!(r.iter().any(|x| x.parent == vec![3, 6]));
    }
}
