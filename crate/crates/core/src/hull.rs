//! Double description: extreme rays of a pointed cone `{y : a_i . y >= 0}`.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::{dot, integer_kernel, primitive, IntMatrix, IntVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeRay {
    /// Primitive integer generator.
    pub ray: IntVector,
    /// Constraints that vanish on the ray.
    pub tight: FixedBitSet,
}

/// Extreme rays of `{y : a . y >= 0 for a in constraints}`.
///
/// Returns `None` when the constraints do not span the ambient space (the
/// cone then contains a line). Rays are sorted lexicographically.
pub fn extreme_rays(constraints: &IntMatrix) -> Option<Vec<ExtremeRay>> {
    let dim = constraints.ncols();
    let a = constraints.rows();
    let basis = independent_rows(constraints)?;

    let mut processed = FixedBitSet::with_capacity(a.len());
    for &i in &basis {
        processed.insert(i);
    }
    let mut rays: Vec<(IntVector, FixedBitSet)> = Vec::with_capacity(dim);
    for &j in &basis {
        let others: Vec<IntVector> = basis.iter().filter(|&&i| i != j).map(|&i| a[i].clone()).collect();
        let k = integer_kernel(&IntMatrix::new(dim, others));
        debug_assert_eq!(k.nrows(), 1);
        let mut r = k.rows()[0].clone();
        if dot(&a[j], &r).is_negative() {
            for x in r.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let tight = tight_set(a, &r, &processed);
        rays.push((r, tight));
    }

    for (idx, row) in a.iter().enumerate() {
        if processed.contains(idx) {
            continue;
        }
        processed.insert(idx);
        let values: Vec<BigInt> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let mut next: Vec<(IntVector, FixedBitSet)> = Vec::new();
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for (k, v) in values.iter().enumerate() {
            if v.is_positive() {
                plus.push(k);
            } else if v.is_negative() {
                minus.push(k);
            }
        }
        for &p in &plus {
            for &m in &minus {
                if !adjacent(&rays, p, m, dim) {
                    continue;
                }
                let (rp, rm) = (&rays[p].0, &rays[m].0);
                let (vp, vm) = (&values[p], &values[m]);
                let combo: IntVector = rp
                    .iter()
                    .zip(rm)
                    .map(|(x, y)| vp * y - vm * x)
                    .collect();
                let combo = primitive(&combo).expect("adjacent rays are independent");
                let mut tight = rays[p].1.clone();
                tight.intersect_with(&rays[m].1);
                tight.insert(idx);
                next.push((combo, tight));
            }
        }
        for (k, ray) in rays.into_iter().enumerate() {
            if values[k].is_zero() {
                let mut ray = ray;
                ray.1.insert(idx);
                next.push(ray);
            } else if values[k].is_positive() {
                next.push(ray);
            }
        }
        rays = next;
    }

    let mut out: Vec<ExtremeRay> = rays
        .into_iter()
        .map(|(ray, tight)| ExtremeRay { ray, tight })
        .collect();
    out.sort_by(|x, y| x.ray.cmp(&y.ray));
    out.dedup_by(|x, y| x.ray == y.ray);
    Some(out)
}

/// Greedy choice of `dim` linearly independent constraint indices.
fn independent_rows(m: &IntMatrix) -> Option<Vec<usize>> {
    let dim = m.ncols();
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    let mut rows: Vec<IntVector> = Vec::with_capacity(dim);
    for (i, r) in m.rows().iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        rows.push(r.clone());
        if IntMatrix::new(dim, rows.clone()).rank() == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    (chosen.len() == dim).then_some(chosen)
}

fn tight_set(a: &[IntVector], r: &[BigInt], processed: &FixedBitSet) -> FixedBitSet {
    let mut t = FixedBitSet::with_capacity(a.len());
    for i in processed.ones() {
        if dot(&a[i], r).is_zero() {
            t.insert(i);
        }
    }
    t
}

/// Combinatorial adjacency: the common tight set is not contained in the
/// tight set of any third ray.
fn adjacent(rays: &[(IntVector, FixedBitSet)], p: usize, m: usize, dim: usize) -> bool {
    let mut common = rays[p].1.clone();
    common.intersect_with(&rays[m].1);
    if common.count_ones(..) + 2 < dim {
        return false;
    }
    !rays
        .iter()
        .enumerate()
        .any(|(k, (_, t))| k != p && k != m && common.is_subset(t))
}
