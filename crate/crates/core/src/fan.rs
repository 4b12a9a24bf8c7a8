//! Fans with per-cone lattice data: normal fans, face fans, the duality
//! between them for reflexive polytopes, and mod-2 regularity.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Subspace};
use crate::hull::extreme_rays;
use crate::lattice::{dot, integer_kernel, mod2_image, mod2_matrix, primitive, saturate, IntMatrix, IntVector};
use crate::polytope::LatticePolytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanKind {
    Normal,
    Face,
    Abstract,
}

/// Where a fan came from. Both polytope fans label their cones by faces of
/// the same polytope, which is what the duality correspondence matches on.
#[derive(Clone, Debug)]
pub struct FanSource {
    pub kind: FanKind,
    pub polytope: Option<LatticePolytope>,
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub id: usize,
    pub dim: usize,
    /// Indices into the fan's ray list, ascending.
    pub rays: Vec<usize>,
    /// Primitive ray generators as rows.
    pub generators: IntMatrix,
    /// Vertex set of the polytope face this cone was built from.
    pub face: Option<Vec<usize>>,
    pub span_basis: IntMatrix,
    pub n_sigma: Gf2Subspace,
    /// Surjection `N/2N -> N(σ)` with kernel `n_sigma`.
    pub quotient_map: Gf2Matrix,
}

impl Cone {
    pub fn codim(&self, d: usize) -> usize {
        d - self.dim
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    dim: usize,
    rays: Vec<IntVector>,
    cones: Vec<Cone>,
    by_dim: Vec<Vec<usize>>,
    covers: Vec<(usize, usize)>,
    cover_index: HashMap<(usize, usize), usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    complete: bool,
    source: FanSource,
}

/// Input to [`Fan::from_cones`]: ray indices plus an optional face label.
pub type ConeSpec = (Vec<usize>, Option<Vec<usize>>);

impl Fan {
    /// Builds a fan from its cones given as ray sets. The zero cone is added
    /// if absent. Covers are ray-set inclusions with dimension gap one.
    pub fn from_cones(dim: usize, rays: Vec<IntVector>, cones: Vec<ConeSpec>, complete: bool) -> Result<Fan> {
        Self::build(dim, rays, cones, complete, FanSource { kind: FanKind::Abstract, polytope: None })
    }

    fn build(dim: usize, rays: Vec<IntVector>, mut specs: Vec<ConeSpec>, complete: bool, source: FanSource) -> Result<Fan> {
        for r in &rays {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
            }
        }
        let rays: Vec<IntVector> = rays.iter().map(|r| primitive(r)).collect::<Result<_>>()?;
        for s in specs.iter_mut() {
            s.0.sort_unstable();
            s.0.dedup();
        }
        if !specs.iter().any(|s| s.0.is_empty()) {
            specs.push((Vec::new(), None));
        }

        let mut cones: Vec<Cone> = specs
            .into_iter()
            .map(|(ids, face)| cone_data(dim, &rays, ids, face))
            .collect();
        cones.sort_by(|a, b| (a.dim, &a.rays).cmp(&(b.dim, &b.rays)));
        for (i, c) in cones.iter_mut().enumerate() {
            c.id = i;
        }

        let mut by_dim = vec![Vec::new(); dim + 1];
        for c in &cones {
            by_dim[c.dim].push(c.id);
        }
        let sets: Vec<FixedBitSet> = cones
            .iter()
            .map(|c| {
                let mut s = FixedBitSet::with_capacity(rays.len());
                for &r in &c.rays {
                    s.insert(r);
                }
                s
            })
            .collect();
        let mut covers = Vec::new();
        let mut up = vec![Vec::new(); cones.len()];
        let mut down = vec![Vec::new(); cones.len()];
        for k in 0..dim {
            for &lo in &by_dim[k] {
                for &hi in &by_dim[k + 1] {
                    if sets[lo].is_subset(&sets[hi]) {
                        covers.push((lo, hi));
                        up[lo].push(hi);
                        down[hi].push(lo);
                    }
                }
            }
        }
        let cover_index = covers.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Ok(Fan { dim, rays, cones, by_dim, covers, cover_index, up, down, complete, source })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: usize) -> &Cone {
        &self.cones[id]
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Cone ids of dimension `k`, in id order.
    pub fn cones_of_dim(&self, k: usize) -> &[usize] {
        &self.by_dim[k]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Cones covering `id`.
    pub fn up(&self, id: usize) -> &[usize] {
        &self.up[id]
    }

    /// Cones covered by `id`.
    pub fn down(&self, id: usize) -> &[usize] {
        &self.down[id]
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn source(&self) -> &FanSource {
        &self.source
    }

    pub fn zero_cone(&self) -> usize {
        self.by_dim[0][0]
    }

    /// Number of cones per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn is_cover(&self, lower: usize, upper: usize) -> bool {
        self.cover_index.contains_key(&(lower, upper))
    }

    /// Position of `(lower, upper)` in [`Fan::covers`].
    pub fn cover_position(&self, lower: usize, upper: usize) -> Option<usize> {
        self.cover_index.get(&(lower, upper)).copied()
    }

    /// Pairs `(σ, β)` with `dim β = dim σ + 2` and `σ < β`, together with
    /// the intermediate cones.
    pub fn diamonds(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let mut out = Vec::new();
        for c in &self.cones {
            let mut mids: HashMap<usize, Vec<usize>> = HashMap::new();
            for &t in &self.up[c.id] {
                for &b in &self.up[t] {
                    mids.entry(b).or_default().push(t);
                }
            }
            let mut v: Vec<_> = mids.into_iter().collect();
            v.sort();
            for (b, ts) in v {
                out.push((c.id, b, ts));
            }
        }
        out
    }

    /// Every interval of length two has exactly two middle elements.
    pub fn check_diamonds(&self) -> Result<()> {
        for (s, b, ts) in self.diamonds() {
            if ts.len() != 2 {
                return Err(Error::Invariant(format!(
                    "fan interval {s} < {b} has {} intermediate cones",
                    ts.len()
                )));
            }
        }
        Ok(())
    }

    /// Dimension of the span of all ray reductions mod 2.
    pub fn ray_rank_mod2(&self) -> usize {
        mod2_image(&IntMatrix::new(self.dim, self.rays.clone())).dim()
    }
}

fn cone_data(d: usize, rays: &[IntVector], ids: Vec<usize>, face: Option<Vec<usize>>) -> Cone {
    let generators = IntMatrix::new(d, ids.iter().map(|&i| rays[i].clone()).collect());
    let span_basis = saturate(&generators);
    let n_sigma = mod2_image(&span_basis);
    debug_assert_eq!(n_sigma.dim(), span_basis.nrows());
    let quotient_map = n_sigma.quotient_map();
    Cone {
        id: 0,
        dim: span_basis.nrows(),
        rays: ids,
        generators,
        face,
        span_basis,
        n_sigma,
        quotient_map,
    }
}

/// Normal fan: one cone per nonempty face `f`, spanned by the inward
/// normals of the facets containing `f`.
pub fn normal_fan(p: &LatticePolytope) -> Result<Fan> {
    let fl = p.face_lattice();
    let rays: Vec<IntVector> = p.facets().iter().map(|f| f.normal.clone()).collect();
    let specs = fl
        .faces
        .iter()
        .zip(&fl.facets_of)
        .map(|(f, fs)| (fs.clone(), Some(f.vertices.clone())))
        .collect();
    let fan = Fan::build(
        p.dim(),
        rays,
        specs,
        true,
        FanSource { kind: FanKind::Normal, polytope: Some(p.clone()) },
    )?;
    debug_assert!(fan.cones.iter().all(|c| c.dim + fl.faces[fl.index_of(c.face.as_ref().unwrap()).unwrap()].dim == p.dim()));
    Ok(fan)
}

/// Face fan: cones over the proper faces, with the zero cone over the
/// empty face.
pub fn face_fan(p: &LatticePolytope) -> Result<Fan> {
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let fl = p.face_lattice();
    let d = p.dim();
    let mut specs: Vec<ConeSpec> = fl
        .faces
        .iter()
        .filter(|f| f.dim < d)
        .map(|f| (f.vertices.clone(), Some(f.vertices.clone())))
        .collect();
    specs.push((Vec::new(), Some(Vec::new())));
    Fan::build(
        d,
        p.vertices().to_vec(),
        specs,
        true,
        FanSource { kind: FanKind::Face, polytope: Some(p.clone()) },
    )
}

/// Bijection between positive-dimensional cones of the normal fan and the
/// face fan of one reflexive polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCorrespondence {
    /// Indexed by cone of Σ; `None` only for the zero cone.
    pub to_star: Vec<Option<usize>>,
    /// Indexed by cone of Σ*; `None` only for the zero cone.
    pub from_star: Vec<Option<usize>>,
}

impl DualCorrespondence {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.to_star.iter().enumerate().filter_map(|(t, s)| s.map(|s| (t, s)))
    }
}

pub fn dual_correspondence(sigma: &Fan, sigma_star: &Fan) -> Result<DualCorrespondence> {
    let (s, ss) = (sigma.source(), sigma_star.source());
    let (Some(p), Some(q)) = (&s.polytope, &ss.polytope) else {
        return Err(Error::CorrespondenceMismatch("fans do not come from a polytope".into()));
    };
    if s.kind != FanKind::Normal || ss.kind != FanKind::Face || p != q {
        return Err(Error::CorrespondenceMismatch(
            "expected the normal fan and the face fan of one polytope".into(),
        ));
    }
    if !p.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let d = sigma.dim();
    let index: HashMap<&[usize], usize> = sigma_star
        .cones()
        .iter()
        .map(|c| (c.face.as_deref().expect("face fan cones carry labels"), c.id))
        .collect();
    let mut to_star = vec![None; sigma.len()];
    let mut from_star = vec![None; sigma_star.len()];
    for c in sigma.cones().iter().filter(|c| c.dim > 0) {
        let face = c.face.as_deref().expect("normal fan cones carry labels");
        let &t = index
            .get(face)
            .ok_or_else(|| Error::CorrespondenceMismatch(format!("no dual cone for cone {}", c.id)))?;
        if c.dim + sigma_star.cone(t).dim != d + 1 {
            return Err(Error::CorrespondenceMismatch(format!("dimensions of {} and {t} do not add to d+1", c.id)));
        }
        to_star[c.id] = Some(t);
        from_star[t] = Some(c.id);
    }
    if from_star.iter().filter(|x| x.is_some()).count() + 1 != sigma_star.len() {
        return Err(Error::CorrespondenceMismatch("correspondence is not onto".into()));
    }
    Ok(DualCorrespondence { to_star, from_star })
}

/// The mod-2 reductions of the ray generators form a basis of `n_sigma`.
pub fn is_z2_regular(c: &Cone) -> bool {
    let g = mod2_matrix(&c.generators);
    g.rows() == c.dim && g.rank() == c.dim
}

/// Largest `e` such that every cone of dimension at most `e` is regular.
pub fn regularity_depth(f: &Fan) -> usize {
    for k in 1..=f.dim() {
        if !f.cones_of_dim(k).iter().all(|&c| is_z2_regular(f.cone(c))) {
            return k - 1;
        }
    }
    f.dim()
}

/// Inequality description of a cone inside its linear span.
#[derive(Clone, Debug)]
pub struct ConeInequalities {
    /// Rows spanning the orthogonal complement of the span.
    pub lineality: IntMatrix,
    /// Facet normals within the span.
    pub normals: Vec<IntVector>,
}

impl ConeInequalities {
    pub fn new(generators: &IntMatrix) -> Self {
        let d = generators.ncols();
        let k = integer_kernel(generators);
        if generators.nrows() == 0 || k.nrows() == d {
            return Self { lineality: IntMatrix::identity(d), normals: Vec::new() };
        }
        let mut rows: Vec<IntVector> = generators.rows().to_vec();
        for r in k.rows() {
            rows.push(r.clone());
            rows.push(r.iter().map(|x| -x).collect());
        }
        let normals = extreme_rays(&IntMatrix::new(d, rows))
            .expect("generators and their complement span the space")
            .into_iter()
            .map(|r| r.ray)
            .collect();
        Self { lineality: k, normals }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.lineality.apply(v).iter().all(Zero::is_zero)
            && self.normals.iter().all(|n| !dot(n, v).is_negative())
    }
}

/// Checks that `a` (acting on column vectors) is a map of fans from `f1`
/// to `f2` with odd determinant whose reduction mod 2 carries the spaces
/// `N_σ` of `f1` isomorphically onto spaces `N_σ'` of `f2`, hitting every
/// one of them.
pub fn check_t_homeomorphism(a: &IntMatrix, f1: &Fan, f2: &Fan) -> Result<bool> {
    let d = f1.dim();
    if f2.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: f2.dim() });
    }
    if a.nrows() != d || a.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: a.nrows().max(a.ncols()) });
    }
    if a.det().is_even() {
        return Ok(false);
    }
    let ineqs: Vec<ConeInequalities> = f2.cones().iter().map(|c| ConeInequalities::new(&c.generators)).collect();
    for c in f1.cones() {
        let images: Vec<IntVector> = c.generators.rows().iter().map(|r| a.apply(r)).collect();
        if !ineqs.iter().any(|q| images.iter().all(|v| q.contains(v))) {
            return Ok(false);
        }
    }

    let a2t = mod2_matrix(a).transpose();
    let mut hit = vec![false; f2.len()];
    for c in f1.cones() {
        let image = Gf2Subspace::from_rows(&c.n_sigma.basis().mul(&a2t));
        if image.dim() != c.dim {
            return Ok(false);
        }
        let matches: Vec<usize> = f2.cones().iter().filter(|t| t.n_sigma == image).map(|t| t.id).collect();
        if matches.is_empty() {
            return Ok(false);
        }
        for t in matches {
            hit[t] = true;
        }
    }
    Ok(hit.iter().all(|&h| h))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lattice::int_vector;
    use num_traits::One;

    pub(crate) fn square() -> LatticePolytope {
        LatticePolytope::from_i64(2, &[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]).unwrap()
    }

    pub(crate) fn segment() -> LatticePolytope {
        LatticePolytope::from_i64(1, &[&[-1], &[1]]).unwrap()
    }

    fn cross2() -> LatticePolytope {
        LatticePolytope::from_i64(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap()
    }

    fn cone_of(rays: &[&[i64]]) -> Cone {
        let d = rays[0].len();
        let rays: Vec<IntVector> = rays.iter().map(|r| int_vector(r)).collect();
        cone_data(d, &rays, (0..rays.len()).collect(), None)
    }

    #[test]
    fn segment_normal_fan() {
        let f = normal_fan(&segment()).unwrap();
        assert_eq!(f.f_vector(), vec![1, 2]);
        assert_eq!(f.rays(), &[int_vector(&[-1]), int_vector(&[1])]);
        let ff = face_fan(&segment()).unwrap();
        assert_eq!(ff.f_vector(), vec![1, 2]);
    }

    #[test]
    fn square_fans() {
        let f = normal_fan(&square()).unwrap();
        assert_eq!(f.f_vector(), vec![1, 4, 4]);
        let mut rays = f.rays().to_vec();
        rays.sort();
        assert_eq!(
            rays,
            vec![int_vector(&[-1, 0]), int_vector(&[0, -1]), int_vector(&[0, 1]), int_vector(&[1, 0])]
        );
        for &c in f.cones_of_dim(2) {
            assert_eq!(f.cone(c).n_sigma.dim(), 2);
            assert_eq!(f.cone(c).quotient_map.rows(), 0);
        }
        let ff = face_fan(&cross2()).unwrap();
        assert_eq!(ff.f_vector(), vec![1, 4, 4]);
        f.check_diamonds().unwrap();
        ff.check_diamonds().unwrap();
    }

    #[test]
    fn face_fan_needs_interior_origin() {
        let p = LatticePolytope::from_i64(2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(face_fan(&p).unwrap_err(), Error::OriginNotInterior);
    }

    #[test]
    fn zero_cone_has_identity_quotient() {
        let f = normal_fan(&square()).unwrap();
        let z = f.cone(f.zero_cone());
        assert_eq!(z.dim, 0);
        assert_eq!(z.quotient_map, Gf2Matrix::identity(2));
    }

    #[test]
    fn regularity_examples() {
        assert!(is_z2_regular(&cone_of(&[&[1, 0], &[0, 1]])));
        assert!(!is_z2_regular(&cone_of(&[&[1, 1], &[1, -1]])));
        // the square's face fan has the non-regular cone above
        let ff = face_fan(&square()).unwrap();
        assert_eq!(regularity_depth(&ff), 1);
        assert_eq!(regularity_depth(&face_fan(&cross2()).unwrap()), 2);
    }

    #[test]
    fn square_correspondence() {
        let p = square();
        let (s, ss) = (normal_fan(&p).unwrap(), face_fan(&p).unwrap());
        let corr = dual_correspondence(&s, &ss).unwrap();
        for (t, u) in corr.pairs() {
            assert_eq!(s.cone(t).dim + ss.cone(u).dim, 3);
        }
        assert_eq!(corr.pairs().count(), 8);
        // inclusion reversing on covers
        for &(lo, hi) in s.covers() {
            if let (Some(a), Some(b)) = (corr.to_star[lo], corr.to_star[hi]) {
                assert!(ss.is_cover(b, a));
            }
        }
        let big = LatticePolytope::from_i64(2, &[&[2, 2], &[2, -2], &[-2, 2], &[-2, -2]]).unwrap();
        let e = dual_correspondence(&normal_fan(&big).unwrap(), &face_fan(&big).unwrap()).unwrap_err();
        assert_eq!(e, Error::NotReflexive);
    }

    #[test]
    fn normal_fan_of_reflexive_is_face_fan_of_polar() {
        let p = square();
        let a = normal_fan(&p).unwrap();
        let b = face_fan(&p.polar().unwrap()).unwrap();
        let key = |f: &Fan| {
            let mut v: Vec<Vec<IntVector>> = f
                .cones()
                .iter()
                .map(|c| {
                    let mut r = c.generators.rows().to_vec();
                    r.sort();
                    r
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(key(&a), key(&b));
    }

    #[test]
    fn cone_membership() {
        let q = ConeInequalities::new(&IntMatrix::from_i64(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(q.contains(&int_vector(&[2, 3, 0])));
        assert!(!q.contains(&int_vector(&[2, 3, 1])));
        assert!(!q.contains(&int_vector(&[-1, 3, 0])));
        let z = ConeInequalities::new(&IntMatrix::zeros(0, 2));
        assert!(z.contains(&int_vector(&[0, 0])));
        assert!(!z.contains(&int_vector(&[0, 1])));
    }

    #[test]
    fn t_homeomorphism_examples() {
        let f = normal_fan(&square()).unwrap();
        assert!(check_t_homeomorphism(&IntMatrix::identity(2), &f, &f).unwrap());
        let line = normal_fan(&segment()).unwrap();
        let three = IntMatrix::new(1, vec![vec![BigInt::from(3)]]);
        assert!(check_t_homeomorphism(&three, &line, &line).unwrap());
        let diag = IntMatrix::from_i64(2, &[&[1, 0], &[0, 2]]);
        assert!(!check_t_homeomorphism(&diag, &f, &f).unwrap());
        // a shear of odd determinant that does not preserve the cones
        let shear = IntMatrix::from_i64(2, &[&[1, 1], &[0, 1]]);
        assert!(shear.det().is_one());
        assert!(!check_t_homeomorphism(&shear, &f, &f).unwrap());
        assert!(check_t_homeomorphism(&IntMatrix::identity(1), &f, &line).is_err());
    }
}
