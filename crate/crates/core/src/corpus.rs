//! Built-in polytopes.

use crate::error::{Error, Result};
use crate::lattice::IntVector;
use crate::polytope::{LatticePolytope, LatticeRole};
use num_bigint::BigInt;

fn unit(d: usize, i: usize, s: i64) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = s;
    v
}

fn build(d: usize, points: Vec<Vec<i64>>) -> LatticePolytope {
    let pts: Vec<IntVector> = points.into_iter().map(|p| p.into_iter().map(BigInt::from).collect()).collect();
    LatticePolytope::new(d, pts, LatticeRole::M).expect("corpus polytopes are full-dimensional")
}

/// `[-1, 1]^d`.
pub fn cube(d: usize) -> LatticePolytope {
    let points = (0..1usize << d)
        .map(|m| (0..d).map(|i| if m >> i & 1 == 1 { 1 } else { -1 }).collect())
        .collect();
    build(d, points)
}

/// `conv(±e_i)`.
pub fn cross(d: usize) -> LatticePolytope {
    build(d, (0..d).flat_map(|i| [unit(d, i, 1), unit(d, i, -1)]).collect())
}

/// `conv(e_1, ..., e_n, -(e_1 + ... + e_n))`.
pub fn simplex(n: usize) -> LatticePolytope {
    let mut pts: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i, 1)).collect();
    pts.push(vec![-1; n]);
    build(n, pts)
}

/// `{x_i >= -1, Σ x_i <= 1}`, whose normal fan is that of projective space.
pub fn proj_simplex(n: usize) -> LatticePolytope {
    let mut pts: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![-1; n];
            v[i] = n as i64;
            v
        })
        .collect();
    pts.push(vec![-1; n]);
    build(n, pts)
}

/// `conv(-e_i, sums of the coordinate blocks)`; the polar is a product of
/// simplices whose normal fan is a product of projective spaces.
pub fn simplex_product_polar(blocks: &[usize]) -> LatticePolytope {
    let d: usize = blocks.iter().sum();
    let mut pts: Vec<Vec<i64>> = (0..d).map(|i| unit(d, i, -1)).collect();
    let mut start = 0;
    for &b in blocks {
        let mut v = vec![0; d];
        v[start..start + b].iter_mut().for_each(|x| *x = 1);
        pts.push(v);
        start += b;
    }
    build(d, pts)
}

/// Product of the projective simplices of the given dimensions.
pub fn simplex_product(blocks: &[usize]) -> LatticePolytope {
    let mut it = blocks.iter();
    let first = proj_simplex(*it.next().expect("at least one block"));
    it.fold(first, |acc, &b| acc.product(&proj_simplex(b)).expect("products stay full-dimensional"))
}

pub fn example1() -> LatticePolytope {
    simplex_product_polar(&[4, 3])
}

pub fn example2() -> LatticePolytope {
    let d = 6;
    let mut pts = vec![unit(d, 0, -1)];
    for i in 1..5 {
        pts.push(unit(d, i, 1));
        pts.push(unit(d, i, -1));
    }
    pts.push(unit(d, 5, 1));
    pts.push(vec![1, 0, 0, 0, 0, -1]);
    pts.push(vec![-1; 6]);
    build(d, pts)
}

const NAMES: &[&str] = &[
    "segment",
    "square",
    "cube3",
    "cross2",
    "cross3",
    "cross4",
    "proj2",
    "proj3",
    "proj4",
    "simplex2",
    "simplex3",
    "simplex4",
    "simplex-product-1-1",
    "simplex-product-1-2",
    "simplex-product-2-2",
    "simplex-product-1-1-1",
    "polar-product-1-2",
    "polar-product-2-2",
    "polar-product-1-1-1",
    "polar-product-1-3",
    "polar-product-2-3",
    "example1",
    "example2",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

fn blocks(s: &str) -> Option<Vec<usize>> {
    s.split('-').map(|b| b.parse().ok().filter(|&n: &usize| n > 0)).collect()
}

/// Looks up a corpus entry. Besides the listed names, any
/// `simplex-product-a-b-...` and `polar-product-a-b-...` is accepted.
pub fn get(name: &str) -> Result<LatticePolytope> {
    let unknown = || Error::UnknownCorpus(name.to_string());
    Ok(match name {
        "segment" => cube(1),
        "square" => cube(2),
        "example1" => example1(),
        "example2" => example2(),
        _ => {
            if let Some(rest) = name.strip_prefix("simplex-product-") {
                simplex_product(&blocks(rest).ok_or_else(unknown)?)
            } else if let Some(rest) = name.strip_prefix("polar-product-") {
                simplex_product_polar(&blocks(rest).ok_or_else(unknown)?)
            } else {
                let split = name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
                let n: usize = name[split..].parse().map_err(|_| unknown())?;
                if n == 0 {
                    return Err(unknown());
                }
                match &name[..split] {
                    "cube" => cube(n),
                    "cross" => cross(n),
                    "proj" => proj_simplex(n),
                    "simplex" => simplex(n),
                    _ => return Err(unknown()),
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_names_resolve() {
        for n in names() {
            let p = get(n).unwrap();
            assert!(p.is_reflexive(), "{n}");
        }
        assert!(matches!(get("nope"), Err(Error::UnknownCorpus(_))));
        assert!(matches!(get("cube0"), Err(Error::UnknownCorpus(_))));
    }

    #[test]
    fn polar_pairs() {
        assert_eq!(simplex(2).polar().unwrap().vertices(), proj_simplex(2).vertices());
        assert_eq!(example1().vertices().len(), 9);
        assert_eq!(example2().vertices().len(), 12);
        // product of a 3- and 4-dimensional simplex has 20 vertices
        assert_eq!(simplex_product(&[3, 4]).vertices().len(), 20);
    }
}
