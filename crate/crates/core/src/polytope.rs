//! Lattice polytopes: facets, face lattice, polarity, products.

use std::collections::HashMap;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::extreme_rays;
use crate::lattice::{dot, int_vector, primitive, IntMatrix, IntVector};

/// Which of the two dual lattices the vertices live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LatticeRole {
    M,
    N,
}

impl LatticeRole {
    pub fn dual(self) -> Self {
        match self {
            LatticeRole::M => LatticeRole::N,
            LatticeRole::N => LatticeRole::M,
        }
    }
}

/// `{x : <normal, x> >= -offset}`, tight exactly on `vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: BigInt,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
}

/// Faces of dimension `0..=d`, the polytope itself last. Faces are listed
/// by dimension, then by vertex set.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub faces: Vec<Face>,
    /// `(lower, upper)` with `dim upper = dim lower + 1`.
    pub covers: Vec<(usize, usize)>,
    pub by_dim: Vec<Vec<usize>>,
    /// Facets of the polytope containing each face.
    pub facets_of: Vec<Vec<usize>>,
}

impl FaceLattice {
    /// `f_0, ..., f_{d-1}`.
    pub fn f_vector(&self) -> Vec<usize> {
        let d = self.by_dim.len() - 1;
        self.by_dim[..d].iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        self.faces.iter().position(|f| f.vertices == vertices)
    }
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<IntVector>,
    role: LatticeRole,
    facets: Vec<Facet>,
    lattice: OnceLock<FaceLattice>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices && self.role == other.role
    }
}

impl Eq for LatticePolytope {}

/// Polar of a polytope with the origin in its interior; vertices may be
/// rational.
#[derive(Clone, Debug)]
pub struct RationalPolar {
    pub vertices: Vec<Vec<BigRational>>,
    pub is_lattice: bool,
}

impl LatticePolytope {
    /// Canonicalizes `points` (duplicates and non-extreme points dropped,
    /// lexicographic order) and computes the facets.
    pub fn new(dim: usize, points: Vec<IntVector>, role: LatticeRole) -> Result<Self> {
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
        }
        let mut points = points;
        points.sort();
        points.dedup();

        let facets = compute_facets(dim, &points)?;
        let mut keep = vec![false; points.len()];
        for (i, flag) in keep.iter_mut().enumerate() {
            let normals: Vec<IntVector> = facets
                .iter()
                .filter(|f| f.vertices.binary_search(&i).is_ok())
                .map(|f| f.normal.clone())
                .collect();
            *flag = IntMatrix::new(dim, normals).rank() == dim;
        }
        let vertices: Vec<IntVector> = points
            .into_iter()
            .zip(&keep)
            .filter_map(|(p, &k)| {
                if !k {
                    log::warn!("dropping non-extreme point {:?}", p.iter().map(ToString::to_string).collect::<Vec<_>>());
                }
                k.then_some(p)
            })
            .collect();
        let facets = if keep.iter().all(|&k| k) {
            facets
        } else {
            compute_facets(dim, &vertices)?
        };
        Ok(Self {
            dim,
            vertices,
            role,
            facets,
            lattice: OnceLock::new(),
        })
    }

    pub fn from_i64(dim: usize, points: &[&[i64]]) -> Result<Self> {
        Self::new(dim, points.iter().map(|p| int_vector(p)).collect(), LatticeRole::M)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn role(&self) -> LatticeRole {
        self.role
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertex-facet incidence: row per facet, column per vertex.
    pub fn incidence(&self) -> Vec<FixedBitSet> {
        self.facets
            .iter()
            .map(|f| {
                let mut s = FixedBitSet::with_capacity(self.vertices.len());
                for &v in &f.vertices {
                    s.insert(v);
                }
                s
            })
            .collect()
    }

    pub fn face_lattice(&self) -> &FaceLattice {
        self.lattice.get_or_init(|| build_face_lattice(self))
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.face_lattice().f_vector()
    }

    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    pub fn polar_rational(&self) -> Result<RationalPolar> {
        if !self.origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        let vertices = self
            .facets
            .iter()
            .map(|f| {
                f.normal
                    .iter()
                    .map(|x| BigRational::new(x.clone(), f.offset.clone()))
                    .collect()
            })
            .collect();
        Ok(RationalPolar {
            vertices,
            is_lattice: self.facets.iter().all(|f| f.offset.is_one()),
        })
    }

    /// `{y : <x, y> >= -1 for x in self}`.
    pub fn polar(&self) -> Result<LatticePolytope> {
        let rp = self.polar_rational()?;
        if !rp.is_lattice {
            return Err(Error::NotLattice);
        }
        let points = self.facets.iter().map(|f| f.normal.clone()).collect();
        LatticePolytope::new(self.dim, points, self.role.dual())
    }

    pub fn is_reflexive(&self) -> bool {
        self.polar_rational().map(|p| p.is_lattice).unwrap_or(false)
    }

    pub fn product(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        let points = self
            .vertices
            .iter()
            .cartesian_product(&other.vertices)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        LatticePolytope::new(self.dim + other.dim, points, self.role)
    }

    /// Text form accepted by the parser.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim, self.vertices.len());
        for v in &self.vertices {
            s.push_str(&v.iter().map(ToString::to_string).join(" "));
            s.push('\n');
        }
        s
    }
}

fn compute_facets(dim: usize, points: &[IntVector]) -> Result<Vec<Facet>> {
    let homogenized: Vec<IntVector> = points
        .iter()
        .map(|p| std::iter::once(BigInt::one()).chain(p.iter().cloned()).collect())
        .collect();
    let a = IntMatrix::new(dim + 1, homogenized);
    let rank = a.rank();
    if rank != dim + 1 || dim == 0 {
        return Err(Error::NotFullDimensional { dim, rank: rank.saturating_sub(1) });
    }
    let rays = extreme_rays(&a).ok_or(Error::NotFullDimensional { dim, rank: dim })?;
    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|r| {
            let normal = primitive(&r.ray[1..]).expect("facet normal is nonzero");
            let vertices: Vec<usize> = r.tight.ones().collect();
            let offset = -dot(&normal, &points[vertices[0]]);
            Facet { normal, offset, vertices }
        })
        .collect();
    facets.sort_by(|x, y| x.normal.cmp(&y.normal));
    for f in &facets {
        debug_assert!(points.iter().all(|p| dot(&f.normal, p) >= -f.offset.clone()));
    }
    Ok(facets)
}

fn build_face_lattice(p: &LatticePolytope) -> FaceLattice {
    let d = p.dim;
    let n = p.vertices.len();
    let incidence = p.incidence();

    // levels[k] holds faces of dimension d - 1 - k
    let mut levels: Vec<Vec<FixedBitSet>> = vec![incidence.clone()];
    let mut level_covers: Vec<Vec<(usize, usize)>> = Vec::new();
    for _ in 1..d {
        let current = levels.last().unwrap();
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut next: Vec<FixedBitSet> = Vec::new();
        let mut covers = Vec::new();
        for (ui, face) in current.iter().enumerate() {
            let mut candidates: Vec<FixedBitSet> = incidence
                .iter()
                .map(|g| {
                    let mut x = face.clone();
                    x.intersect_with(g);
                    x
                })
                .filter(|x| x != face && x.count_ones(..) > 0)
                .collect();
            candidates.sort();
            candidates.dedup();
            let maximal: Vec<&FixedBitSet> = candidates
                .iter()
                .filter(|x| !candidates.iter().any(|y| y != *x && x.is_subset(y)))
                .collect();
            for m in maximal {
                let li = *index.entry(m.clone()).or_insert_with(|| {
                    next.push(m.clone());
                    next.len() - 1
                });
                covers.push((li, ui));
            }
        }
        levels.push(next);
        level_covers.push(covers);
    }

    // assemble with dimension-major ordering, sorted vertex sets in each
    let mut faces = Vec::new();
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); d + 1];
    let mut ids: Vec<Vec<usize>> = vec![Vec::new(); levels.len()];
    for dim in 0..d {
        let k = d - 1 - dim;
        let mut order: Vec<(Vec<usize>, usize)> =
            levels[k].iter().enumerate().map(|(i, s)| (s.ones().collect(), i)).collect();
        order.sort();
        ids[k] = vec![0; order.len()];
        for (vertices, i) in order {
            ids[k][i] = faces.len();
            by_dim[dim].push(faces.len());
            faces.push(Face { dim, vertices });
        }
    }
    let top = faces.len();
    faces.push(Face { dim: d, vertices: (0..n).collect() });
    by_dim[d].push(top);

    let mut covers: Vec<(usize, usize)> = Vec::new();
    for &f in &ids[0] {
        covers.push((f, top));
    }
    for (k, cs) in level_covers.iter().enumerate() {
        for &(lo, up) in cs {
            covers.push((ids[k + 1][lo], ids[k][up]));
        }
    }
    covers.sort();

    let facets_of = faces
        .iter()
        .map(|f| {
            incidence
                .iter()
                .enumerate()
                .filter(|(_, s)| f.vertices.iter().all(|&v| s.contains(v)))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    FaceLattice { faces, covers, by_dim, facets_of }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn square() -> LatticePolytope {
        LatticePolytope::from_i64(2, &[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]).unwrap()
    }

    #[test]
    fn square_facets() {
        let p = square();
        let f = p.facets();
        assert_eq!(f.len(), 4);
        let normals: Vec<IntVector> = f.iter().map(|f| f.normal.clone()).collect();
        assert_eq!(
            normals,
            vec![int_vector(&[-1, 0]), int_vector(&[0, -1]), int_vector(&[0, 1]), int_vector(&[1, 0])]
        );
        assert!(f.iter().all(|f| f.offset.is_one()));
        assert_eq!(p.f_vector(), vec![4, 4]);
    }

    #[test]
    fn canonicalization_drops_interior_and_duplicates() {
        let p = LatticePolytope::from_i64(2, &[&[1, 1], &[0, 0], &[1, -1], &[-1, 1], &[-1, -1], &[1, 1], &[1, 0]])
            .unwrap();
        assert_eq!(p, square());
        assert_eq!(p.facets().len(), 4);
    }

    #[test]
    fn not_full_dimensional() {
        let e = LatticePolytope::from_i64(2, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap_err();
        assert_eq!(e, Error::NotFullDimensional { dim: 2, rank: 1 });
    }

    #[test]
    fn square_polar_is_cross() {
        let c = square().polar().unwrap();
        let cross = LatticePolytope::new(
            2,
            vec![int_vector(&[1, 0]), int_vector(&[-1, 0]), int_vector(&[0, 1]), int_vector(&[0, -1])],
            LatticeRole::N,
        )
        .unwrap();
        assert_eq!(c, cross);
        assert_eq!(c.polar().unwrap(), square());
    }

    #[test]
    fn reflexivity() {
        assert!(square().is_reflexive());
        let big = LatticePolytope::from_i64(2, &[&[2, 2], &[2, -2], &[-2, 2], &[-2, -2]]).unwrap();
        assert!(!big.is_reflexive());
        let rp = big.polar_rational().unwrap();
        assert!(!rp.is_lattice);
        assert_eq!(rp.vertices[0][0], BigRational::new((-1).into(), 2.into()));
        assert_eq!(big.polar(), Err(Error::NotLattice));
        let off = LatticePolytope::from_i64(1, &[&[1], &[2]]).unwrap();
        assert_eq!(off.polar_rational().unwrap_err(), Error::OriginNotInterior);
    }

    #[test]
    fn segment_product_is_square() {
        let seg = LatticePolytope::from_i64(1, &[&[-1], &[1]]).unwrap();
        assert_eq!(seg.product(&seg).unwrap(), square());
    }

    #[test]
    fn face_lattice_covers_are_inclusions() {
        let cube = LatticePolytope::from_i64(
            3,
            &[&[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1], &[-1, 1, 1], &[-1, 1, -1], &[-1, -1, 1], &[-1, -1, -1]],
        )
        .unwrap();
        let fl = cube.face_lattice();
        assert_eq!(fl.f_vector(), vec![8, 12, 6]);
        for &(lo, up) in &fl.covers {
            let (a, b) = (&fl.faces[lo], &fl.faces[up]);
            assert_eq!(a.dim + 1, b.dim);
            assert!(a.vertices.iter().all(|v| b.vertices.contains(v)));
        }
        // every edge has two vertices, every vertex lies on three facets
        assert!(fl.by_dim[1].iter().all(|&e| fl.faces[e].vertices.len() == 2));
        assert!(fl.by_dim[0].iter().all(|&v| fl.facets_of[v].len() == 3));
    }
}
