#![allow(dead_code)]

use dialgebra::algebra::{catalog, catalog_names, catalog_params, BiHomDialgebra, Bindings, StructureTensor};
use dialgebra::scalars::{frac, int, unit_vec, Mat, Scalar};
use proptest::prelude::*;
use rand::Rng;

/// `x ⊣ y = ε(y) x`, `x ⊢ y = ε(x) y` with `ε(e1) = 1`, twisted by a
/// commuting pair of invertible morphisms; satisfies all axioms and is
/// multiplicative, with non-nilpotent twists.
pub fn eps_dialgebra() -> BiHomDialgebra {
    let n = 3;
    let mut l = StructureTensor::zero(n);
    let mut r = StructureTensor::zero(n);
    for i in 0..n {
        l.set_product(i, 0, &unit_vec(n, i));
        r.set_product(0, i, &unit_vec(n, i));
    }
    let phi = Mat::from_i64(&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]);
    let psi = Mat::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]);
    BiHomDialgebra::twist_of("eps", &l, &r, phi, psi).unwrap()
}

pub fn ones(name: &str) -> Bindings {
    catalog_params(name).unwrap().into_iter().map(|p| (p.to_string(), int(1))).collect()
}

pub fn catalog_at_ones() -> Vec<BiHomDialgebra> {
    catalog_names().into_iter().map(|n| catalog(n, &ones(n)).unwrap()).collect()
}

/// Random nonzero rational with small numerator and denominator.
pub fn random_rational<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let p = rng.gen_range(-9..=9);
        let q = rng.gen_range(1..=5);
        if p != 0 {
            return frac(p, q);
        }
    }
}

pub fn random_bindings<R: Rng>(name: &str, rng: &mut R) -> Bindings {
    catalog_params(name).unwrap().into_iter().map(|p| (p.to_string(), random_rational(rng))).collect()
}

pub fn rational() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| frac(p, q))
}

pub fn vector(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    proptest::collection::vec(rational(), n)
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(rational(), rows * cols).prop_map(move |v| Mat::from_flat(rows, cols, v))
}

/// Adds `c` to one structure constant of one product.
pub fn perturb(d: &BiHomDialgebra, left: bool, i: usize, j: usize, k: usize, c: Scalar) -> BiHomDialgebra {
    let mut l = d.left().clone();
    let mut r = d.right().clone();
    let t = if left { &mut l } else { &mut r };
    let v = t.get(i, j, k) + c;
    t.set(i, j, k, v);
    BiHomDialgebra::new_unchecked(format!("{}~", d.name()), l, r, d.phi().clone(), d.psi().clone()).unwrap()
}
