//! Torus-invariant Chow groups with GF(2) coefficients.

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::hodge::HodgeTable;
use crate::lattice::{mod2, IntMatrix};

/// Class in `N(σ)` of a generator of `(τ ∩ N)/(σ ∩ N)` for a cover `σ < τ`.
pub fn normal_generator(fan: &Fan, sigma: usize, tau: usize) -> Result<Gf2Vector> {
    if !fan.is_cover(sigma, tau) {
        return Err(Error::NotACover { lower: sigma, upper: tau });
    }
    normal_generator_from(&fan.cone(tau).span_basis, fan.cone(sigma))
}

/// As [`normal_generator`], given any lattice basis of the span of `τ`.
pub fn normal_generator_from(tau_basis: &IntMatrix, sigma: &Cone) -> Result<Gf2Vector> {
    tau_basis
        .rows()
        .iter()
        .map(|b| mod2(b))
        .find(|b| !sigma.n_sigma.contains(b))
        .map(|b| sigma.quotient_map.mul_vec(&b))
        .ok_or_else(|| Error::Invariant(format!("no generator over cone {}", sigma.id)))
}

/// Cycles on cones of dimension `d - q`, relations from cones of
/// dimension `d - q - 1` paired against the dual basis of `N(σ)`.
#[derive(Clone, Debug)]
pub struct ChowPresentation {
    pub q: usize,
    pub cycle_basis: Vec<usize>,
    pub relation_matrix: Gf2Matrix,
}

impl ChowPresentation {
    pub fn rank(&self) -> usize {
        self.cycle_basis.len() - self.relation_matrix.rank()
    }
}

pub fn chow_presentation(fan: &Fan, q: usize) -> Result<ChowPresentation> {
    let d = fan.dim();
    if q > d {
        return Err(Error::DimensionMismatch { expected: d, found: q });
    }
    let cycle_basis = fan.cones_of_dim(d - q).to_vec();
    let column = |c: usize| cycle_basis.binary_search(&c).expect("cover of a codim q+1 cone has codim q");
    let relation_matrix = if q == d {
        Gf2Matrix::zeros(0, cycle_basis.len())
    } else {
        let sigmas = fan.cones_of_dim(d - q - 1);
        let mut m = Gf2Matrix::zeros(sigmas.len() * (q + 1), cycle_basis.len());
        for (k, &s) in sigmas.iter().enumerate() {
            for &w in fan.up(s) {
                let n = normal_generator(fan, s, w)?;
                for i in n.ones() {
                    m.set(k * (q + 1) + i, column(w), true);
                }
            }
        }
        m
    };
    Ok(ChowPresentation { q, cycle_basis, relation_matrix })
}

pub fn chow_rank(fan: &Fan, q: usize) -> Result<usize> {
    Ok(chow_presentation(fan, q)?.rank())
}

pub fn chow_ranks(fan: &Fan) -> Result<Vec<usize>> {
    (0..=fan.dim()).map(|q| chow_rank(fan, q)).collect()
}

pub fn verify_hqq_equals_chow(fan: &Fan, table: &HodgeTable) -> Result<bool> {
    Ok(chow_ranks(fan)? == table.diagonal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::normal_fan;
    use crate::gf2::Gf2Subspace;
    use crate::lattice::{dot, int_vector, integer_kernel};
    use num_traits::Zero;
    use crate::polytope::LatticePolytope;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fan_of(points: &[&[i64]]) -> Fan {
        normal_fan(&LatticePolytope::from_i64(points[0].len(), points).unwrap()).unwrap()
    }

    fn plane() -> Fan {
        fan_of(&[&[-1, -1], &[2, -1], &[-1, 2]])
    }

    /// Lattice generator found from a functional vanishing on σ: the
    /// combination of τ's basis on which it attains the gcd of its values.
    fn generator_oracle(fan: &Fan, s: usize, t: usize) -> Gf2Vector {
        use num_integer::Integer;
        let (sig, tau) = (fan.cone(s), fan.cone(t));
        let basis = tau.span_basis.rows();
        let phi = integer_kernel(&sig.span_basis)
            .rows()
            .iter()
            .find(|k| basis.iter().any(|b| !dot(k, b).is_zero()))
            .unwrap()
            .clone();
        let mut g = BigInt::zero();
        let mut v = vec![BigInt::zero(); fan.dim()];
        for b in basis {
            let a = dot(&phi, b);
            let e = g.extended_gcd(&a);
            for (x, y) in v.iter_mut().zip(b) {
                *x = &e.x * &*x + &e.y * y;
            }
            g = e.gcd;
        }
        sig.quotient_map.mul_vec(&mod2(&v))
    }

    #[test]
    fn generator_examples() {
        let f = plane();
        let z = f.zero_cone();
        for &r in f.cones_of_dim(1) {
            let expected = mod2(&f.rays()[f.cone(r).rays[0]]);
            assert_eq!(normal_generator(&f, z, r).unwrap(), expected);
        }
        // σ = poshull(e1) inside poshull(e1, e2)
        let sq = fan_of(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let e1 = sq.cones_of_dim(1).iter().copied().find(|&c| sq.rays()[sq.cone(c).rays[0]] == int_vector(&[1, 0])).unwrap();
        let quad = sq
            .up(e1)
            .iter()
            .copied()
            .find(|&c| sq.cone(c).generators.rows().contains(&int_vector(&[0, 1])))
            .unwrap();
        let n = normal_generator(&sq, e1, quad).unwrap();
        let e2 = Gf2Vector::from_bits([false, true]);
        assert_eq!(n, sq.cone(e1).quotient_map.mul_vec(&e2));
        assert!(matches!(normal_generator(&sq, sq.zero_cone(), quad), Err(Error::NotACover { .. })));
    }

    #[test]
    fn generator_is_basis_independent() {
        let f = fan_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -3], &[1, 1, 1]]);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &(s, t) in f.covers() {
            let n = normal_generator(&f, s, t).unwrap();
            assert!(n.weight() > 0);
            assert_eq!(n, generator_oracle(&f, s, t));
            // a different basis of the same lattice: random unimodular mix
            let mut rows = f.cone(t).span_basis.rows().to_vec();
            rows.reverse();
            for _ in 0..6 {
                if rows.len() < 2 {
                    break;
                }
                let (i, j) = (rng.gen_range(0..rows.len()), rng.gen_range(0..rows.len()));
                if i != j {
                    let c = BigInt::from(rng.gen_range(-3i64..4));
                    let add: Vec<BigInt> = rows[j].iter().map(|x| x * &c).collect();
                    for (a, b) in rows[i].iter_mut().zip(add) {
                        *a += b;
                    }
                }
            }
            let other = IntMatrix::new(f.dim(), rows);
            assert_eq!(normal_generator_from(&other, f.cone(s)).unwrap(), n);
        }
    }

    /// Relation matrix built from every functional on `N(σ)`.
    fn chow_rank_oracle(fan: &Fan, q: usize) -> usize {
        let d = fan.dim();
        let cycles = fan.cones_of_dim(d - q);
        if q == d {
            return cycles.len();
        }
        let mut rows = Vec::new();
        for &s in fan.cones_of_dim(d - q - 1) {
            for u in 0..1usize << (q + 1) {
                let row = Gf2Vector::from_bits(cycles.iter().map(|&w| {
                    if !fan.is_cover(s, w) {
                        return false;
                    }
                    let n = generator_oracle(fan, s, w);
                    n.ones().filter(|&i| u >> i & 1 == 1).count() % 2 == 1
                }));
                rows.push(row);
            }
        }
        cycles.len() - Gf2Subspace::span(cycles.len(), &rows).dim()
    }

    #[test]
    fn plane_chow() {
        let f = plane();
        assert_eq!(chow_ranks(&f).unwrap(), vec![1, 1, 1]);
        for q in 0..=2 {
            assert_eq!(chow_rank(&f, q).unwrap(), chow_rank_oracle(&f, q));
        }
    }

    #[test]
    fn chow_matches_oracle_on_small_fans() {
        let fans = [
            fan_of(&[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]),
            fan_of(&[&[1, 0], &[0, 1], &[-1, -1]]),
            fan_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -3], &[1, 1, 1]]),
        ];
        for f in &fans {
            for q in 0..=f.dim() {
                assert_eq!(chow_rank(f, q).unwrap(), chow_rank_oracle(f, q));
            }
        }
    }
}
