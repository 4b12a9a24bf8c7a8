//! Cosheaves (and sheaves) of GF(2) vector spaces on fans, their chain
//! complexes and homology.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fan::{DualCorrespondence, Fan};
use crate::gf2::{binomial, exterior_power, Gf2Matrix};

/// A cosheaf maps along covers from the smaller cone to the larger one; a
/// sheaf maps from the larger cone to the smaller one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Cosheaf,
    Sheaf,
}

/// Stalk dimensions per cone and one restriction matrix per cover of the
/// fan, stored in the fan's cover order.
#[derive(Clone, Debug)]
pub struct Cosheaf {
    fan: Arc<Fan>,
    variance: Variance,
    stalk_dim: Vec<usize>,
    restrictions: Vec<Gf2Matrix>,
}

impl Cosheaf {
    pub fn new(fan: Arc<Fan>, variance: Variance, stalk_dim: Vec<usize>, restrictions: Vec<Gf2Matrix>) -> Result<Self> {
        if stalk_dim.len() != fan.len() || restrictions.len() != fan.covers().len() {
            return Err(Error::Invariant("cosheaf data does not match its fan".into()));
        }
        for (&(lo, hi), m) in fan.covers().iter().zip(&restrictions) {
            let (src, tgt) = match variance {
                Variance::Cosheaf => (lo, hi),
                Variance::Sheaf => (hi, lo),
            };
            if m.rows() != stalk_dim[tgt] || m.cols() != stalk_dim[src] {
                return Err(Error::Invariant(format!(
                    "restriction on cover {lo} < {hi} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    stalk_dim[tgt],
                    stalk_dim[src]
                )));
            }
        }
        Ok(Self { fan, variance, stalk_dim, restrictions })
    }

    /// Builds each restriction from its cover `(lower, upper)`.
    pub fn from_fn(
        fan: Arc<Fan>,
        variance: Variance,
        stalk_dim: Vec<usize>,
        mut f: impl FnMut(usize, usize) -> Result<Gf2Matrix>,
    ) -> Result<Self> {
        let restrictions = fan.covers().iter().map(|&(lo, hi)| f(lo, hi)).collect::<Result<Vec<_>>>()?;
        Self::new(fan, variance, stalk_dim, restrictions)
    }

    /// Constant cosheaf with stalk `GF(2)^k` and identity restrictions.
    pub fn constant(fan: Arc<Fan>, variance: Variance, k: usize) -> Self {
        let n = fan.len();
        let r = vec![Gf2Matrix::identity(k); fan.covers().len()];
        Self::new(fan, variance, vec![k; n], r).expect("shapes agree")
    }

    pub fn zero(fan: Arc<Fan>, variance: Variance) -> Self {
        Self::constant(fan, variance, 0)
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn stalk_dim(&self, cone: usize) -> usize {
        self.stalk_dim[cone]
    }

    pub fn stalk_dims(&self) -> &[usize] {
        &self.stalk_dim
    }

    pub fn restrictions(&self) -> &[Gf2Matrix] {
        &self.restrictions
    }

    /// Restriction attached to the cover `lower < upper`, in the direction
    /// given by the variance.
    pub fn restriction(&self, lower: usize, upper: usize) -> Result<&Gf2Matrix> {
        let i = self
            .fan
            .cover_position(lower, upper)
            .ok_or(Error::NotACover { lower, upper })?;
        Ok(&self.restrictions[i])
    }

    /// Both composites around every length-two interval agree.
    pub fn verify_functoriality(&self) -> Result<()> {
        for (s, b, mids) in self.fan.diamonds() {
            let composite = |t: usize| -> Result<Gf2Matrix> {
                let (a, c) = (self.restriction(s, t)?, self.restriction(t, b)?);
                Ok(match self.variance {
                    Variance::Cosheaf => c.mul(a),
                    Variance::Sheaf => a.mul(c),
                })
            };
            let first = composite(mids[0])?;
            for &t in &mids[1..] {
                if composite(t)? != first {
                    return Err(Error::FunctorialityViolation { lower: s, upper: b });
                }
            }
        }
        Ok(())
    }

    /// Degree of cone `c` in the chain complex: codimension for cosheaves,
    /// dimension for sheaves.
    fn degree(&self, c: usize) -> usize {
        let dim = self.fan.cone(c).dim;
        match self.variance {
            Variance::Cosheaf => self.fan.dim() - dim,
            Variance::Sheaf => dim,
        }
    }

    /// For a cosheaf, `C_p` is the sum of stalks over cones of dimension
    /// `d - p`. For a sheaf, the cochain complex is returned re-indexed as a
    /// chain complex whose degree `g` collects cones of dimension `g`, so
    /// `H^p = H_{d-p}`.
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        self.verify_functoriality()?;
        let d = self.fan.dim();
        let mut blocks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d + 1];
        let mut dims = vec![0; d + 1];
        let mut offset = vec![0; self.fan.len()];
        for c in self.fan.cones() {
            let g = self.degree(c.id);
            offset[c.id] = dims[g];
            blocks[g].push((c.id, dims[g]));
            dims[g] += self.stalk_dim[c.id];
        }
        let mut boundaries: Vec<Gf2Matrix> = (0..=d)
            .map(|p| Gf2Matrix::zeros(if p == 0 { 0 } else { dims[p - 1] }, dims[p]))
            .collect();
        for (&(lo, hi), m) in self.fan.covers().iter().zip(&self.restrictions) {
            let (src, tgt) = match self.variance {
                Variance::Cosheaf => (lo, hi),
                Variance::Sheaf => (hi, lo),
            };
            let p = self.degree(src);
            debug_assert_eq!(self.degree(tgt) + 1, p);
            boundaries[p].write_block(offset[tgt], offset[src], m);
        }
        ChainComplex::new(dims, boundaries, blocks)
    }

    pub fn homology_ranks(&self) -> Result<Vec<usize>> {
        Ok(self.chain_complex()?.homology_ranks())
    }

    /// Sheaf cohomology ranks `H^p` for `p = 0..=d`.
    pub fn cohomology_ranks(&self) -> Result<Vec<usize>> {
        if self.variance != Variance::Sheaf {
            return Err(Error::Invariant("cohomology requested for a cosheaf".into()));
        }
        let mut h = self.homology_ranks()?;
        h.reverse();
        Ok(h)
    }

    pub fn exterior_power(&self, q: usize) -> Cosheaf {
        let stalk_dim = self.stalk_dim.iter().map(|&n| binomial(n as i64, q as i64) as usize).collect();
        let restrictions = self.restrictions.iter().map(|m| exterior_power(m, q)).collect();
        Cosheaf::new(self.fan.clone(), self.variance, stalk_dim, restrictions).expect("shapes agree")
    }

    /// Zero stalk at the zero cone, zero maps into and out of it.
    pub fn circ_truncate(&self) -> Cosheaf {
        let zero = self.fan.zero_cone();
        let mut stalk_dim = self.stalk_dim.clone();
        stalk_dim[zero] = 0;
        let restrictions = self
            .fan
            .covers()
            .iter()
            .zip(&self.restrictions)
            .map(|(&(lo, _), m)| {
                if lo == zero {
                    match self.variance {
                        Variance::Cosheaf => Gf2Matrix::zeros(m.rows(), 0),
                        Variance::Sheaf => Gf2Matrix::zeros(0, m.cols()),
                    }
                } else {
                    m.clone()
                }
            })
            .collect();
        Cosheaf::new(self.fan.clone(), self.variance, stalk_dim, restrictions).expect("shapes agree")
    }

    /// Stalkwise direct sum.
    pub fn direct_sum(&self, other: &Cosheaf) -> Result<Cosheaf> {
        if !Arc::ptr_eq(&self.fan, &other.fan) || self.variance != other.variance {
            return Err(Error::Invariant("direct sum over different fans".into()));
        }
        let stalk_dim = self.stalk_dim.iter().zip(&other.stalk_dim).map(|(a, b)| a + b).collect();
        let restrictions = self
            .restrictions
            .iter()
            .zip(&other.restrictions)
            .map(|(a, b)| {
                let mut m = Gf2Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                m.write_block(0, 0, a);
                m.write_block(a.rows(), a.cols(), b);
                m
            })
            .collect();
        Cosheaf::new(self.fan.clone(), self.variance, stalk_dim, restrictions)
    }
}

/// Turns a sheaf on the face fan into a cosheaf on the normal fan:
/// `Ĥ_τ = H_{τ*}` for positive-dimensional `τ`, zero on the zero cone, and
/// zero maps out of it.
pub fn hat(sheaf: &Cosheaf, sigma: &Arc<Fan>, corr: &DualCorrespondence) -> Result<Cosheaf> {
    if sheaf.variance() != Variance::Sheaf {
        return Err(Error::CorrespondenceMismatch("hat expects a sheaf".into()));
    }
    if corr.to_star.len() != sigma.len() || corr.from_star.len() != sheaf.fan().len() {
        return Err(Error::CorrespondenceMismatch("correspondence does not match the fans".into()));
    }
    let star = |t: usize| corr.to_star[t];
    let stalk_dim = sigma
        .cones()
        .iter()
        .map(|c| star(c.id).map_or(0, |s| sheaf.stalk_dim(s)))
        .collect::<Vec<_>>();
    let dims = stalk_dim.clone();
    Cosheaf::from_fn(sigma.clone(), Variance::Cosheaf, stalk_dim, |lo, hi| {
        match (star(lo), star(hi)) {
            (None, _) => Ok(Gf2Matrix::zeros(dims[hi], 0)),
            (Some(a), Some(b)) => {
                // τ < τ' in Σ is τ'* < τ* in Σ*; the sheaf maps τ* to τ'*
                sheaf.restriction(b, a).cloned().map_err(|_| {
                    Error::CorrespondenceMismatch(format!("cover {lo} < {hi} is not reversed in the dual fan"))
                })
            }
            (Some(_), None) => Err(Error::CorrespondenceMismatch(format!("cone {hi} has no dual"))),
        }
    })
}

/// Graded GF(2) complex with `boundaries[p]: C_p -> C_{p-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<Gf2Matrix>,
    /// Per degree: `(cone, offset)` of each stalk block.
    blocks: Vec<Vec<(usize, usize)>>,
}

impl ChainComplex {
    /// Checks shapes and `∂∂ = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<Gf2Matrix>, blocks: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if boundaries.len() != dims.len() {
            return Err(Error::Invariant("one boundary per degree expected".into()));
        }
        for (p, b) in boundaries.iter().enumerate() {
            let rows = if p == 0 { 0 } else { dims[p - 1] };
            if b.rows() != rows || b.cols() != dims[p] {
                return Err(Error::Invariant(format!("boundary {p} has the wrong shape")));
            }
        }
        for p in 2..dims.len() {
            if !boundaries[p - 1].mul(&boundaries[p]).is_zero() {
                return Err(Error::BoundarySquareNonzero { p });
            }
        }
        Ok(Self { dims, boundaries, blocks })
    }

    pub fn from_maps(dims: Vec<usize>, boundaries: Vec<Gf2Matrix>) -> Result<Self> {
        let n = dims.len();
        Self::new(dims, boundaries, vec![Vec::new(); n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, p: usize) -> &Gf2Matrix {
        &self.boundaries[p]
    }

    pub fn blocks(&self, p: usize) -> &[(usize, usize)] {
        &self.blocks[p]
    }

    pub fn boundary_ranks(&self) -> Vec<usize> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            self.boundaries.par_iter().map(Gf2Matrix::rank).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.boundaries.iter().map(Gf2Matrix::rank).collect()
        }
    }

    /// `rank H_p = dim C_p - rank ∂_p - rank ∂_{p+1}`.
    pub fn homology_ranks(&self) -> Vec<usize> {
        let r = self.boundary_ranks();
        (0..self.dims.len())
            .map(|p| self.dims[p] - r[p] - r.get(p + 1).copied().unwrap_or(0))
            .collect()
    }

    /// Alternating sum of homology ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}
