//! Koszul complexes over GF(2) and their exactness.
//!
//! Tensor products `∧^a V ⊗ S^b W` use the wedge-major basis: the pair
//! (wedge `i`, monomial `j`) sits at `i * dim S^b W + j`.

use std::collections::HashMap;

use rand::Rng;

use crate::duality::DualityBundle;
use crate::error::{Error, Result};
use crate::gf2::{exterior_power, monomial_basis, sym_power, wedge_basis, Gf2Matrix, Gf2Subspace};

/// `0 -> V_0 -> V_1 -> ... -> V_n -> 0` with `maps[i]: V_i -> V_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    dims: Vec<usize>,
    maps: Vec<Gf2Matrix>,
}

impl GradedComplex {
    pub fn new(dims: Vec<usize>, maps: Vec<Gf2Matrix>) -> Result<Self> {
        if dims.len() != maps.len() + 1 {
            return Err(Error::Invariant("a complex needs one more space than maps".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.cols() != dims[i] || m.rows() != dims[i + 1] {
                return Err(Error::Invariant(format!("map {i} has the wrong shape")));
            }
        }
        Ok(Self { dims, maps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Gf2Matrix] {
        &self.maps
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(Gf2Matrix::rank).collect()
    }

    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Exact at every node, including both ends.
    pub fn is_exact(&self) -> bool {
        let r = self.ranks();
        self.is_complex()
            && (0..self.dims.len()).all(|i| {
                let incoming = if i == 0 { 0 } else { r[i - 1] };
                let outgoing = r.get(i).copied().unwrap_or(0);
                incoming + outgoing == self.dims[i]
            })
    }

    /// Reversed complex of transposes.
    pub fn dual(&self) -> GradedComplex {
        let mut dims = self.dims.clone();
        dims.reverse();
        let maps = self.maps.iter().rev().map(Gf2Matrix::transpose).collect();
        GradedComplex { dims, maps }
    }
}

/// `∧^a F ⊗ S^b E -> ∧^{a-1} F ⊗ S^{b+1} E`,
/// `(f_S, μ) -> Σ_{s in S} (f_{S - s}, μ · ψ(f_s))`.
pub fn koszul_differential(a: usize, b: usize, psi: &Gf2Matrix) -> Gf2Matrix {
    let (e, f) = (psi.rows(), psi.cols());
    let src_w = wedge_basis(f, a);
    let src_m = monomial_basis(e, b);
    let tgt_w: HashMap<Vec<usize>, usize> = wedge_basis(f, a.saturating_sub(1)).into_iter().enumerate().map(|(i, w)| (w, i)).collect();
    let tgt_m_list = monomial_basis(e, b + 1);
    let tgt_m: HashMap<&[usize], usize> = tgt_m_list.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    if a == 0 {
        return Gf2Matrix::zeros(0, src_m.len());
    }
    let mut out = Gf2Matrix::zeros(tgt_w.len() * tgt_m_list.len(), src_w.len() * src_m.len());
    for (wi, w) in src_w.iter().enumerate() {
        for (k, &s) in w.iter().enumerate() {
            let mut rest = w.clone();
            rest.remove(k);
            let ti = tgt_w[&rest];
            for r in (0..e).filter(|&r| psi.get(r, s)) {
                for (mi, m) in src_m.iter().enumerate() {
                    let mut mono = m.clone();
                    let pos = mono.partition_point(|&x| x <= r);
                    mono.insert(pos, r);
                    let tj = tgt_m[mono.as_slice()];
                    out.toggle(ti * tgt_m_list.len() + tj, wi * src_m.len() + mi);
                }
            }
        }
    }
    out
}

/// `0 -> ∧^j E -> ∧^{j-1} E ⊗ E -> ... -> S^j E -> 0`.
pub fn koszul_strand(rank_e: usize, j: usize) -> GradedComplex {
    let id = Gf2Matrix::identity(rank_e);
    let dims = (0..=j)
        .map(|l| wedge_basis(rank_e, j - l).len() * monomial_basis(rank_e, l).len())
        .collect();
    let maps = (0..j).map(|l| koszul_differential(j - l, l, &id)).collect();
    GradedComplex::new(dims, maps).expect("shapes agree")
}

/// Checks that `phi: G -> F`, `psi: F -> E` form a short exact sequence.
pub fn check_ses(phi: &Gf2Matrix, psi: &Gf2Matrix) -> Result<()> {
    let (g, f, e) = (phi.cols(), phi.rows(), psi.rows());
    if psi.cols() != f {
        return Err(Error::NotExactInput(format!("maps do not compose ({}x{} then {}x{})", f, g, e, psi.cols())));
    }
    if !psi.mul(phi).is_zero() {
        return Err(Error::NotExactInput("composite is nonzero".into()));
    }
    if phi.rank() != g || psi.rank() != e || g + e != f {
        return Err(Error::NotExactInput(format!(
            "ranks {} and {} for dimensions ({g}, {f}, {e})",
            phi.rank(),
            psi.rank()
        )));
    }
    Ok(())
}

/// `0 -> ∧^k G -> ∧^k F -> ∧^{k-1} F ⊗ E -> ... -> S^k E -> 0`.
pub fn kosa_complex(phi: &Gf2Matrix, psi: &Gf2Matrix, k: usize) -> Result<GradedComplex> {
    check_ses(phi, psi)?;
    let (g, f, e) = (phi.cols(), phi.rows(), psi.rows());
    let mut dims = vec![wedge_basis(g, k).len()];
    dims.extend((0..=k).map(|l| wedge_basis(f, k - l).len() * monomial_basis(e, l).len()));
    let mut maps = vec![exterior_power(phi, k)];
    maps.extend((0..k).map(|l| koszul_differential(k - l, l, psi)));
    GradedComplex::new(dims, maps)
}

/// `0 -> S^k E -> H ⊗ S^{k-1} E -> ... -> ∧^k H -> ∧^k G -> 0` for
/// `iota: E -> H`, `pi: H -> G`, the dual of the first construction applied
/// to the dual sequence. The symmetric terms carry the basis dual to the
/// monomial basis.
pub fn kosc_complex(iota: &Gf2Matrix, pi: &Gf2Matrix, k: usize) -> Result<GradedComplex> {
    check_ses(iota, pi)?;
    Ok(kosa_complex(&pi.transpose(), &iota.transpose(), k)?.dual())
}

/// A section `s` of `psi` (`psi * s = 1`).
pub fn section(psi: &Gf2Matrix) -> Option<Gf2Matrix> {
    psi.transpose()
        .solve_left(&Gf2Matrix::identity(psi.rows()))
        .map(|x| x.transpose())
}

/// The differentials of the first Koszul construction agree with those of
/// the split sequence `G ⊕ E -> E` transported along `P = [phi | s]`, for
/// each given section `s`.
pub fn splitting_independent(phi: &Gf2Matrix, psi: &Gf2Matrix, k: usize, sections: &[Gf2Matrix]) -> Result<bool> {
    check_ses(phi, psi)?;
    let (g, e) = (phi.cols(), psi.rows());
    let mut split = Gf2Matrix::zeros(e, g + e);
    split.write_block(0, g, &Gf2Matrix::identity(e));
    for s in sections {
        if psi.mul(s) != Gf2Matrix::identity(e) {
            return Err(Error::NotExactInput("not a section".into()));
        }
        let p = Gf2Matrix::hstack(phi.rows(), &[phi, s]);
        for l in 0..k {
            let (a, b) = (k - l, l);
            let lhs = koszul_differential(a, b, psi)
                .mul(&exterior_power(&p, a).kron(&Gf2Matrix::identity(monomial_basis(e, b).len())));
            let rhs = exterior_power(&p, a - 1)
                .kron(&Gf2Matrix::identity(monomial_basis(e, b + 1).len()))
                .mul(&koszul_differential(a, b, &split));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Uniform random matrix with full column rank, by rejection.
pub fn random_injection<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Gf2Matrix {
    assert!(cols <= rows);
    loop {
        let m = Gf2Matrix::from_fn(rows, cols, |_, _| rng.gen());
        if m.rank() == cols {
            return m;
        }
    }
}

/// Random short exact sequence `0 -> GF(2)^g -> GF(2)^f -> GF(2)^(f-g) -> 0`.
pub fn random_ses<R: Rng + ?Sized>(rng: &mut R, g: usize, f: usize) -> (Gf2Matrix, Gf2Matrix) {
    let phi = random_injection(rng, f, g);
    let q = Gf2Subspace::from_rows(&phi.transpose()).quotient_map();
    let mix = random_injection(rng, f - g, f - g);
    (phi, mix.mul(&q))
}

/// Stalkwise exactness and naturality of
/// `0 -> S^q C -> Ĝ ⊗ S^{q-1} C -> ... -> ∧^q Ĝ -> ∧^q E° -> 0`.
pub fn cosheaf_koszul_check(bundle: &DualityBundle, q: usize) -> Result<bool> {
    let fan = &bundle.sigma;
    let (c, g, e) = (&bundle.c_cosheaf, &bundle.g_hat, &bundle.e_circ);
    let mut complexes = Vec::with_capacity(fan.len());
    for cone in fan.cones() {
        let i = cone.id;
        let k = kosc_complex(&bundle.circ.first[i], &bundle.circ.second[i], q)?;
        if !k.is_exact() {
            return Ok(false);
        }
        complexes.push(k);
    }
    // restriction on term l (l = 0..=q is ∧^l Ĝ ⊗ S^{q-l} C), then ∧^q E°
    let term_maps = |cover: usize| -> Vec<Gf2Matrix> {
        let (rc, rg, re) = (&c.restrictions()[cover], &g.restrictions()[cover], &e.restrictions()[cover]);
        let mut v: Vec<Gf2Matrix> = (0..=q)
            .map(|l| exterior_power(rg, l).kron(&sym_power(&rc.transpose(), q - l).transpose()))
            .collect();
        v.push(exterior_power(re, q));
        v
    };
    for (cover, &(lo, hi)) in fan.covers().iter().enumerate() {
        let r = term_maps(cover);
        let (a, b) = (&complexes[lo], &complexes[hi]);
        for (i, (ma, mb)) in a.maps().iter().zip(b.maps()).enumerate() {
            if mb.mul(&r[i]) != r[i + 1].mul(ma) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
