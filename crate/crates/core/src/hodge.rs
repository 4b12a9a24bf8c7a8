//! Hodge spaces `H_pq = H_p(∧^q E)`, the real cell complex, and the
//! bookkeeping that compares them.

use std::sync::Arc;

use serde::Serialize;

use crate::cosheaf::{ChainComplex, Cosheaf, Variance};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::gf2::{binomial, induced_quotient_map, Gf2Matrix};

/// `N_σ` with inclusion maps.
pub fn cosheaf_n(fan: &Arc<Fan>) -> Result<Cosheaf> {
    let dims = fan.cones().iter().map(|c| c.dim).collect();
    Cosheaf::from_fn(fan.clone(), Variance::Cosheaf, dims, |lo, hi| {
        let (a, b) = (fan.cone(lo).n_sigma.basis(), fan.cone(hi).n_sigma.basis());
        let x = b
            .solve_left(a)
            .ok_or_else(|| Error::Invariant(format!("N of cone {lo} is not inside N of cone {hi}")))?;
        Ok(x.transpose())
    })
}

/// `E_σ = N(σ)` with the maps induced by the identity of `N/2N`.
pub fn cosheaf_e(fan: &Arc<Fan>) -> Result<Cosheaf> {
    let d = fan.dim();
    let dims = fan.cones().iter().map(|c| d - c.dim).collect();
    Cosheaf::from_fn(fan.clone(), Variance::Cosheaf, dims, |lo, hi| {
        Ok(induced_quotient_map(&fan.cone(lo).quotient_map, &fan.cone(hi).quotient_map)?)
    })
}

/// `rank H_pq` for `0 <= q <= p <= d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HodgeTable {
    /// `ranks[p][q]`, defined for `q <= p`.
    ranks: Vec<Vec<usize>>,
}

impl HodgeTable {
    pub fn from_ranks(ranks: Vec<Vec<usize>>) -> Self {
        for (p, row) in ranks.iter().enumerate() {
            assert_eq!(row.len(), p + 1, "row {p} of a Hodge table has {} entries", row.len());
        }
        Self { ranks }
    }

    pub fn d(&self) -> usize {
        self.ranks.len() - 1
    }

    /// Zero outside the triangle.
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.ranks.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    pub fn diagonal(&self) -> Vec<usize> {
        (0..=self.d()).map(|q| self.get(q, q)).collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        self.ranks.iter().map(|r| r.iter().sum()).collect()
    }

    /// `b_k = Σ_{p+q=k} H_pq`.
    pub fn diagonal_sums(&self) -> Vec<usize> {
        let d = self.d();
        (0..=2 * d)
            .map(|k| (0..=d).filter(|&p| k >= p && k - p <= p).map(|p| self.get(p, k - p)).sum())
            .collect()
    }
}

/// `H_p(∧^q E)` for a single `q`, all `p`.
pub fn hodge_row(e: &Cosheaf, q: usize) -> Result<Vec<usize>> {
    e.exterior_power(q).homology_ranks()
}

pub fn hodge_table(fan: &Arc<Fan>) -> Result<HodgeTable> {
    let e = cosheaf_e(fan)?;
    let d = fan.dim();
    let rows: Vec<Vec<usize>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..=d).into_par_iter().map(|q| hodge_row(&e, q)).collect::<Result<_>>()?
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..=d).map(|q| hodge_row(&e, q)).collect::<Result<_>>()?
        }
    };
    for (q, row) in rows.iter().enumerate() {
        if row[..q].iter().any(|&r| r != 0) {
            return Err(Error::Invariant(format!("nonzero Hodge rank below the diagonal in row {q}")));
        }
    }
    let ranks = (0..=d).map(|p| (0..=p).map(|q| rows[q][p]).collect()).collect();
    Ok(HodgeTable::from_ranks(ranks))
}

/// Group-algebra cosheaf `Z2[N(σ)]`. Elements of `N(σ)` are bitmasks in the
/// coordinates of the cone's quotient map.
pub fn real_cosheaf(fan: &Arc<Fan>) -> Result<Cosheaf> {
    let d = fan.dim();
    let dims = fan.cones().iter().map(|c| 1usize << (d - c.dim)).collect();
    Cosheaf::from_fn(fan.clone(), Variance::Cosheaf, dims, |lo, hi| {
        let r = induced_quotient_map(&fan.cone(lo).quotient_map, &fan.cone(hi).quotient_map)?;
        let (src, tgt) = (r.cols(), r.rows());
        let columns: Vec<usize> = (0..src).map(|j| (0..tgt).filter(|&i| r.get(i, j)).map(|i| 1 << i).sum()).collect();
        let mut m = Gf2Matrix::zeros(1 << tgt, 1 << src);
        for t in 0..1usize << src {
            let image = (0..src).filter(|j| t >> j & 1 == 1).fold(0, |acc, j| acc ^ columns[j]);
            m.set(image, t, true);
        }
        Ok(m)
    })
}

/// Cellular chain complex of the real toric variety of a normal fan.
pub fn real_cell_complex(fan: &Arc<Fan>) -> Result<ChainComplex> {
    real_cosheaf(fan)?.chain_complex()
}

/// Whether the sum of all cells over `beta` is a nonzero homology class.
pub fn edge_class_nonzero(fan: &Fan, complex: &ChainComplex, beta: usize) -> Result<bool> {
    let q = fan.dim() - fan.cone(beta).dim;
    let &(_, offset) = complex
        .blocks(q)
        .iter()
        .find(|(c, _)| *c == beta)
        .ok_or_else(|| Error::Invariant(format!("cone {beta} missing from degree {q}")))?;
    let mut class = Gf2Matrix::zeros(complex.dims()[q], 1);
    for i in 0..1usize << q {
        class.set(offset + i, 0, true);
    }
    if !complex.boundary(q).mul(&class).is_zero() {
        return Err(Error::NotACycle { cone: beta });
    }
    let Some(next) = (q < fan.dim()).then(|| complex.boundary(q + 1)) else {
        return Ok(true);
    };
    let with = Gf2Matrix::hstack(next.rows(), &[next, &class]);
    Ok(with.rank() > next.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collapse {
    pub collapsed: bool,
    pub betti_complex: Option<Vec<usize>>,
    pub maximal: Option<bool>,
}

/// Compares column sums of the table with the real Betti numbers.
pub fn collapse_and_betti(table: &HodgeTable, real_betti: &[usize]) -> Result<Collapse> {
    let sums = table.column_sums();
    if sums.len() != real_betti.len() {
        return Err(Error::DimensionMismatch { expected: sums.len(), found: real_betti.len() });
    }
    for (p, (&column, &betti)) in sums.iter().zip(real_betti).enumerate() {
        if column < betti {
            return Err(Error::ColumnSumBelowBetti { p, column, betti });
        }
    }
    if sums != real_betti {
        return Ok(Collapse { collapsed: false, betti_complex: None, maximal: None });
    }
    let complex = table.diagonal_sums();
    let maximal = real_betti.iter().sum::<usize>() == complex.iter().sum::<usize>();
    Ok(Collapse { collapsed: true, betti_complex: Some(complex), maximal: Some(maximal) })
}

/// `s` and the predicted last column `C(d - s, q - s)`.
pub fn rightmost_column(fan: &Fan) -> (usize, Vec<usize>) {
    let d = fan.dim() as i64;
    let s = fan.ray_rank_mod2();
    let predicted = (0..=d).map(|q| binomial(d - s as i64, q - s as i64) as usize).collect();
    (s, predicted)
}

/// `h_q = Σ_{p >= q} (-1)^{p-q} C(p, q) f_p` with `f_d = 1`.
pub fn h_vector(f_vector: &[usize]) -> Vec<i64> {
    let mut f: Vec<i64> = f_vector.iter().map(|&x| x as i64).collect();
    f.push(1);
    let d = f.len() - 1;
    (0..=d)
        .map(|q| {
            (q..=d)
                .map(|p| {
                    let t = binomial(p as i64, q as i64) as i64 * f[p];
                    if (p - q) % 2 == 0 { t } else { -t }
                })
                .sum()
        })
        .collect()
}

/// Row Euler characteristics against the h-vector.
pub fn h_vector_check(f_vector: &[usize], table: &HodgeTable) -> bool {
    let h = h_vector(f_vector);
    let d = table.d();
    h.len() == d + 1
        && (0..=d).all(|q| {
            let row: i64 = (q..=d)
                .map(|p| if p % 2 == 0 { table.get(p, q) as i64 } else { -(table.get(p, q) as i64) })
                .sum();
            let sign = if q % 2 == 0 { 1 } else { -1 };
            row == sign * h[q]
        })
}
