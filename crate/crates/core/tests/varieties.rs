use std::sync::Arc;

use z2hodge::corpus;
use z2hodge::fan::{face_fan, normal_fan};
use z2hodge::hodge::{collapse_and_betti, hodge_table, real_cell_complex};
use z2hodge::polytope::LatticePolytope;

fn betti(delta: &LatticePolytope) -> (Vec<usize>, Vec<usize>) {
    let fan = Arc::new(normal_fan(delta).unwrap());
    let t = hodge_table(&fan).unwrap();
    let real = real_cell_complex(&fan).unwrap().homology_ranks();
    let c = collapse_and_betti(&t, &real).unwrap();
    (real, c.betti_complex.unwrap())
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn projective_spaces() {
    // RP^n has one class per degree, CP^n one per even degree
    for n in 1..=5 {
        let (real, complex) = betti(&corpus::proj_simplex(n));
        assert_eq!(real, vec![1; n + 1]);
        let expected: Vec<usize> = (0..=2 * n).map(|i| usize::from(i % 2 == 0)).collect();
        assert_eq!(complex, expected);
    }
}

#[test]
fn products_of_lines() {
    // (P^1)^n: real points form a torus
    for n in 1..=4 {
        let (real, complex) = betti(&corpus::cube(n));
        assert_eq!(real, (0..=n).map(|k| binom(n, k)).collect::<Vec<_>>());
        let expected: Vec<usize> = (0..=2 * n).map(|i| if i % 2 == 0 { binom(n, i / 2) } else { 0 }).collect();
        assert_eq!(complex, expected);
    }
}

#[test]
fn product_of_projective_spaces() {
    // Künneth over GF(2)
    let (real, _) = betti(&corpus::simplex_product(&[2, 3]));
    let mut expected = vec![0; 6];
    for i in 0..=2 {
        for j in 0..=3 {
            expected[i + j] += 1;
        }
    }
    assert_eq!(real, expected);
}

#[test]
fn face_fan_is_normal_fan_of_polar() {
    for name in ["cross3", "simplex3", "polar-product-1-2", "example1"] {
        let delta = corpus::get(name).unwrap();
        let a = Arc::new(face_fan(&delta).unwrap());
        let b = Arc::new(normal_fan(&delta.polar().unwrap()).unwrap());
        assert_eq!(a.f_vector(), b.f_vector(), "{name}");
        assert_eq!(hodge_table(&a).unwrap(), hodge_table(&b).unwrap(), "{name}");
    }
}
