//! Sheaves `F`, `G` on the face fan of a reflexive polytope, their hats on
//! the normal fan, the cosheaf `C`, and the exact sequences relating them.

use std::sync::Arc;

use num_traits::Zero;

use crate::cosheaf::{hat, Cosheaf, Variance};
use crate::error::{Error, Result};
use crate::fan::{dual_correspondence, face_fan, normal_fan, regularity_depth, DualCorrespondence, Fan};
use crate::gf2::{induced_quotient_map, Gf2Matrix, Gf2Subspace};
use crate::hodge::{cosheaf_e, cosheaf_n, HodgeTable};
use crate::lattice::{dot, integer_kernel, mod2_image};
use crate::polytope::LatticePolytope;

/// Stalkwise maps `a: A -> B`, `b: B -> C`, one pair per cone.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub a: Cosheaf,
    pub b: Cosheaf,
    pub c: Cosheaf,
    pub first: Vec<Gf2Matrix>,
    pub second: Vec<Gf2Matrix>,
}

impl ShortExactSequence {
    /// Injective first map, surjective second map, composite zero, dimensions
    /// adding up, and both maps commuting with every restriction.
    pub fn verify(&self) -> bool {
        let fan = self.a.fan().clone();
        let stalkwise = fan.cones().iter().all(|cone| {
            let i = cone.id;
            let (f, g) = (&self.first[i], &self.second[i]);
            let (na, nb, nc) = (self.a.stalk_dim(i), self.b.stalk_dim(i), self.c.stalk_dim(i));
            (f.rows(), f.cols(), g.rows(), g.cols()) == (nb, na, nc, nb)
                && g.mul(f).is_zero()
                && f.rank() == na
                && g.rank() == nc
                && na + nc == nb
        });
        stalkwise
            && fan.covers().iter().enumerate().all(|(k, &(lo, hi))| {
                let (src, tgt) = match self.a.variance() {
                    Variance::Cosheaf => (lo, hi),
                    Variance::Sheaf => (hi, lo),
                };
                let (ra, rb, rc) = (&self.a.restrictions()[k], &self.b.restrictions()[k], &self.c.restrictions()[k]);
                self.first[tgt].mul(ra) == rb.mul(&self.first[src])
                    && self.second[tgt].mul(rb) == rc.mul(&self.second[src])
            })
    }
}

pub struct DualityBundle {
    pub delta: LatticePolytope,
    pub sigma: Arc<Fan>,
    pub sigma_star: Arc<Fan>,
    pub corr: DualCorrespondence,
    /// `F_{σ*}` as a subspace of `N/2N`, per cone of Σ*.
    pub f_spaces: Vec<Gf2Subspace>,
    pub f_sheaf: Cosheaf,
    pub g_sheaf: Cosheaf,
    pub n_cosheaf: Cosheaf,
    pub f_hat: Cosheaf,
    pub g_hat: Cosheaf,
    pub c_cosheaf: Cosheaf,
    pub e_circ: Cosheaf,
    /// `0 -> F -> N/2N -> G -> 0` on Σ*.
    pub brion: ShortExactSequence,
    /// `0 -> F̂ -> N -> C -> 0` on Σ.
    pub fc: ShortExactSequence,
    /// `0 -> C -> Ĝ -> E° -> 0` on Σ.
    pub circ: ShortExactSequence,
}

pub fn build_bundle(delta: &LatticePolytope) -> Result<DualityBundle> {
    if !delta.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let d = delta.dim();
    let sigma = Arc::new(normal_fan(delta)?);
    let sigma_star = Arc::new(face_fan(delta)?);
    let corr = dual_correspondence(&sigma, &sigma_star)?;
    check_pairing(delta, &sigma, &sigma_star, &corr)?;

    // F_{σ*} = (σ*)^⊥ ∩ N reduced mod 2
    let f_spaces: Vec<Gf2Subspace> = sigma_star
        .cones()
        .iter()
        .map(|c| mod2_image(&integer_kernel(&c.generators)))
        .collect();
    for c in sigma_star.cones() {
        if f_spaces[c.id].dim() != d - c.dim {
            return Err(Error::Invariant(format!("F on dual cone {} has the wrong rank", c.id)));
        }
    }
    let f_quot: Vec<Gf2Matrix> = f_spaces.iter().map(Gf2Subspace::quotient_map).collect();

    let f_sheaf = Cosheaf::from_fn(
        sigma_star.clone(),
        Variance::Sheaf,
        f_spaces.iter().map(Gf2Subspace::dim).collect(),
        |lo, hi| inclusion(&f_spaces[hi], &f_spaces[lo]),
    )?;
    let g_sheaf = Cosheaf::from_fn(
        sigma_star.clone(),
        Variance::Sheaf,
        f_quot.iter().map(Gf2Matrix::rows).collect(),
        |lo, hi| Ok(induced_quotient_map(&f_quot[hi], &f_quot[lo])?),
    )?;
    let ambient = Cosheaf::constant(sigma_star.clone(), Variance::Sheaf, d);
    let brion = ShortExactSequence {
        a: f_sheaf.clone(),
        b: ambient,
        c: g_sheaf.clone(),
        first: f_spaces.iter().map(|s| s.basis().transpose()).collect(),
        second: f_quot.clone(),
    };

    let f_hat = hat(&f_sheaf, &sigma, &corr)?;
    let g_hat = hat(&g_sheaf, &sigma, &corr)?;
    let n_cosheaf = cosheaf_n(&sigma)?;
    let e_circ = cosheaf_e(&sigma)?.circ_truncate();

    // F̂_τ inside N_τ, and C_τ = N_τ / F̂_τ
    let mut f_to_n = Vec::with_capacity(sigma.len());
    let mut n_to_c = Vec::with_capacity(sigma.len());
    for c in sigma.cones() {
        let n_basis = c.n_sigma.basis();
        match corr.to_star[c.id] {
            None => {
                f_to_n.push(Gf2Matrix::zeros(0, 0));
                n_to_c.push(Gf2Matrix::zeros(0, 0));
            }
            Some(s) => {
                let a = inclusion(&f_spaces[s], &c.n_sigma)
                    .map_err(|_| Error::Invariant(format!("F̂ is not inside N on cone {}", c.id)))?;
                let image = Gf2Subspace::from_rows(&a.transpose());
                n_to_c.push(image.quotient_map());
                f_to_n.push(a);
                debug_assert_eq!(n_basis.rows(), c.dim);
            }
        }
    }
    let c_dims: Vec<usize> = n_to_c.iter().map(Gf2Matrix::rows).collect();
    let c_cosheaf = Cosheaf::from_fn(sigma.clone(), Variance::Cosheaf, c_dims, |lo, hi| {
        let rho = n_cosheaf.restriction(lo, hi)?;
        let target = n_to_c[hi].mul(rho);
        n_to_c[lo]
            .solve_left(&target)
            .ok_or_else(|| Error::Invariant(format!("N -> C does not descend on cover {lo} < {hi}")))
    })?;
    let fc = ShortExactSequence {
        a: f_hat.clone(),
        b: n_cosheaf.clone(),
        c: c_cosheaf.clone(),
        first: f_to_n,
        second: n_to_c.clone(),
    };

    // C -> Ĝ from N_τ ⊂ N/2N, Ĝ -> E° from the identity of N/2N
    let mut iota = Vec::with_capacity(sigma.len());
    let mut pi = Vec::with_capacity(sigma.len());
    for c in sigma.cones() {
        match corr.to_star[c.id] {
            None => {
                iota.push(Gf2Matrix::zeros(0, 0));
                pi.push(Gf2Matrix::zeros(0, 0));
            }
            Some(s) => {
                let n_into_g = f_quot[s].mul(&c.n_sigma.basis().transpose());
                let i = n_to_c[c.id]
                    .solve_left(&n_into_g)
                    .ok_or_else(|| Error::Invariant(format!("C -> Ĝ undefined on cone {}", c.id)))?;
                iota.push(i);
                pi.push(induced_quotient_map(&f_quot[s], &c.quotient_map)?);
            }
        }
    }
    let circ = ShortExactSequence {
        a: c_cosheaf.clone(),
        b: g_hat.clone(),
        c: e_circ.clone(),
        first: iota,
        second: pi,
    };

    Ok(DualityBundle {
        delta: delta.clone(),
        sigma,
        sigma_star,
        corr,
        f_spaces,
        f_sheaf,
        g_sheaf,
        n_cosheaf,
        f_hat,
        g_hat,
        c_cosheaf,
        e_circ,
        brion,
        fc,
        circ,
    })
}

/// Column-convention matrix of the inclusion `small ⊂ big` in echelon bases.
fn inclusion(small: &Gf2Subspace, big: &Gf2Subspace) -> Result<Gf2Matrix> {
    big.basis()
        .solve_left(small.basis())
        .map(|x| x.transpose())
        .ok_or_else(|| Error::Invariant("subspace is not contained in its supposed superspace".into()))
}

/// Vertices of a face pair with the normals of the facets containing it
/// to `-1`.
fn check_pairing(delta: &LatticePolytope, sigma: &Fan, sigma_star: &Fan, corr: &DualCorrespondence) -> Result<()> {
    let one = -num_bigint::BigInt::from(1);
    for (t, s) in corr.pairs() {
        for p in sigma.cone(t).generators.rows() {
            for q in sigma_star.cone(s).generators.rows() {
                if dot(p, q) != one {
                    return Err(Error::Invariant(format!("pairing on dual cones {t} and {s} is not -1")));
                }
            }
        }
    }
    debug_assert!(delta.facets().iter().all(|f| !f.offset.is_zero()));
    Ok(())
}

impl DualityBundle {
    pub fn d(&self) -> usize {
        self.sigma.dim()
    }

    /// Stalk dimensions of F̂, Ĝ, C, E° against their closed forms.
    pub fn verify_stalk_dims(&self) -> bool {
        let d = self.d();
        self.sigma.cones().iter().all(|c| {
            let i = c.id;
            let dims = [
                self.f_hat.stalk_dim(i),
                self.g_hat.stalk_dim(i),
                self.c_cosheaf.stalk_dim(i),
                self.e_circ.stalk_dim(i),
            ];
            if c.dim == 0 {
                dims == [0, 0, 0, 0]
            } else {
                dims == [c.dim - 1, d - c.dim + 1, 1, d - c.dim]
            }
        })
    }

    /// Every restriction of C between positive-dimensional cones is the
    /// identity.
    pub fn verify_c_identity(&self) -> bool {
        let zero = self.sigma.zero_cone();
        self.sigma
            .covers()
            .iter()
            .zip(self.c_cosheaf.restrictions())
            .filter(|((lo, _), _)| *lo != zero)
            .all(|(_, m)| *m == Gf2Matrix::identity(1))
    }

    /// Both sequences on Σ and the one on Σ* are exact and natural.
    pub fn verify_ses(&self) -> bool {
        self.brion.verify() && self.fc.verify() && self.circ.verify()
    }

    /// `χ(C) - χ(Ĝ) + χ(E°) = 0`.
    pub fn verify_euler_additivity(&self) -> Result<bool> {
        let chi = |c: &Cosheaf| -> Result<i64> { Ok(c.chain_complex()?.euler_characteristic()) };
        Ok(chi(&self.c_cosheaf)? - chi(&self.g_hat)? + chi(&self.e_circ)? == 0)
    }

    /// `e` for the vanishing statements.
    pub fn regularity_depth(&self) -> usize {
        regularity_depth(&self.sigma_star)
    }

    /// `rank H_p(∧^k Ĝ)` as `table[k][p]`.
    pub fn g_vanishing(&self, k_max: usize) -> Result<Vec<Vec<usize>>> {
        let job = |k: usize| self.g_hat.exterior_power(k).homology_ranks();
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..=k_max).into_par_iter().map(job).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..=k_max).map(job).collect()
        }
    }

    /// Zero region `1 <= p < e - 1` of the table from [`Self::g_vanishing`].
    pub fn verify_g_vanishing(&self, table: &[Vec<usize>]) -> bool {
        let e = self.regularity_depth();
        table.iter().all(|row| (1..e.saturating_sub(1)).all(|p| row[p] == 0))
    }

    /// `H_pq = 0` for `q < p < e - 1` and `H_qq = 1` for `q < e - 1`.
    pub fn vanishing_theorem_check(&self, table: &HodgeTable) -> bool {
        vanishing_holds(table, self.regularity_depth())
    }
}

pub fn vanishing_holds(table: &HodgeTable, e: usize) -> bool {
    let bound = e.saturating_sub(1);
    (0..bound).all(|q| table.get(q, q) == 1 && (q + 1..bound).all(|p| table.get(p, q) == 0))
}

/// Sheaf cohomology of `∧^k G` against homology of its hat, in the range
/// where they are identified.
pub fn hat_identity_holds(bundle: &DualityBundle, k: usize) -> Result<bool> {
    let d = bundle.d();
    let sheaf = bundle.g_sheaf.exterior_power(k).cohomology_ranks()?;
    let cosheaf = bundle.g_hat.exterior_power(k).homology_ranks()?;
    Ok((1..d.saturating_sub(1)).all(|p| sheaf[p] == cosheaf[d - p - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::hodge_table;

    fn square() -> LatticePolytope {
        LatticePolytope::from_i64(2, &[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]).unwrap()
    }

    fn cube() -> LatticePolytope {
        LatticePolytope::from_i64(
            3,
            &[&[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1], &[-1, 1, 1], &[-1, 1, -1], &[-1, -1, 1], &[-1, -1, -1]],
        )
        .unwrap()
    }

    #[test]
    fn square_bundle() {
        let b = build_bundle(&square()).unwrap();
        let s = &b.sigma;
        for &r in s.cones_of_dim(1) {
            assert_eq!(b.f_hat.stalk_dim(r), 0);
        }
        for &c in s.cones_of_dim(2) {
            assert_eq!(b.f_hat.stalk_dim(c), 1);
        }
        assert!(b.verify_stalk_dims());
        assert!(b.verify_c_identity());
        assert!(b.verify_ses());
        assert!(b.verify_euler_additivity().unwrap());
        let g = b.g_vanishing(2).unwrap();
        assert_eq!(g.len(), 3);
        assert!(b.verify_g_vanishing(&g));
        assert!(b.vanishing_theorem_check(&hodge_table(s).unwrap()));
    }

    #[test]
    fn cube_bundle() {
        let b = build_bundle(&cube()).unwrap();
        assert!(b.verify_stalk_dims());
        assert!(b.verify_c_identity());
        assert!(b.verify_ses());
        assert!(b.verify_euler_additivity().unwrap());
        for k in 0..=3 {
            assert!(hat_identity_holds(&b, k).unwrap());
        }
    }

    #[test]
    fn non_reflexive_rejected() {
        let big = LatticePolytope::from_i64(2, &[&[2, 2], &[2, -2], &[-2, 2], &[-2, -2]]).unwrap();
        assert_eq!(build_bundle(&big).err(), Some(Error::NotReflexive));
    }

    #[test]
    fn broken_sequence_detected() {
        let b = build_bundle(&square()).unwrap();
        let mut bad = b.circ.clone();
        let top = b.sigma.cones_of_dim(2)[0];
        bad.second[top] = Gf2Matrix::zeros(bad.second[top].rows(), bad.second[top].cols());
        let first_ray = b.sigma.cones_of_dim(1)[0];
        bad.first[first_ray] = Gf2Matrix::zeros(bad.first[first_ray].rows(), bad.first[first_ray].cols());
        assert!(!bad.verify());
    }

    #[test]
    fn vanishing_region() {
        let t = HodgeTable::from_ranks(vec![vec![1], vec![0, 1], vec![0, 1, 1], vec![0, 0, 0, 1]]);
        assert!(vanishing_holds(&t, 3));
        assert!(!vanishing_holds(&t, 4));
        assert!(vanishing_holds(&t, 2));
        assert!(vanishing_holds(&t, 0));
    }
}
