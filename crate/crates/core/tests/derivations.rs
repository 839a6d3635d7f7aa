mod common;
mod oracle;

use common::{catalog_at_ones, eps_dialgebra, rational};
use dialgebra::derivations::{
    commutator, conjugate, derivation_space, generalized_derivation_space, generalized_triple_space, identity_failures,
    quasi_derivation_space, small_automorphisms, BiDegree, GeneralizedSpec, GradedMap, Variant,
};
use dialgebra::scalars::Mat;
use proptest::prelude::*;

const D11: BiDegree = BiDegree::new(1, 1);

#[test]
fn solver_matches_independent_oracle() {
    let mut algs = catalog_at_ones();
    algs.push(eps_dialgebra());
    for d in &algs {
        for variant in [Variant::Plain, Variant::Quasi, Variant::Triple, Variant::Generalized(GeneralizedSpec::ints(2, 1, -1))] {
            let space = match &variant {
                Variant::Plain => derivation_space(d, D11),
                Variant::Quasi => quasi_derivation_space(d, D11),
                Variant::Triple => generalized_triple_space(d, D11),
                Variant::Generalized(s) => generalized_derivation_space(d, D11, s.clone()),
            }
            .unwrap();
            let (exact, modular) = oracle::derivation_dims(d, &variant, 1, 1);
            assert_eq!(space.dim(), exact, "{} {}", d.name(), variant.name());
            for m in modular {
                assert_eq!(m, Some(exact), "{} {}", d.name(), variant.name());
            }
        }
    }
}

#[test]
fn basis_elements_satisfy_identities() {
    for d in catalog_at_ones() {
        for space in [derivation_space(&d, D11).unwrap(), generalized_triple_space(&d, D11).unwrap()] {
            for maps in space.basis_maps() {
                assert!(identity_failures(&d, &space.variant, D11, &maps).unwrap().is_empty());
            }
        }
    }
}

#[test]
fn commutators_close() {
    let mut algs = catalog_at_ones();
    algs.push(eps_dialgebra());
    for d in &algs {
        let s = derivation_space(d, D11).unwrap();
        let target = derivation_space(d, BiDegree::new(2, 2)).unwrap();
        let basis = s.basis_maps();
        for a in &basis {
            for b in &basis {
                let c = commutator(&GradedMap { map: a[0].clone(), degree: D11 }, &GradedMap { map: b[0].clone(), degree: D11 })
                    .unwrap();
                assert_eq!(c.degree, BiDegree::new(2, 2));
                assert!(target.contains(&[c.map]), "{}", d.name());
            }
        }
    }
}

#[test]
fn plain_derivations_embed_in_quasi_and_triples() {
    for d in catalog_at_ones() {
        let plain = derivation_space(&d, D11).unwrap();
        let quasi = quasi_derivation_space(&d, D11).unwrap();
        let triple = generalized_triple_space(&d, D11).unwrap();
        for maps in plain.basis_maps() {
            let m = &maps[0];
            assert!(quasi.contains(&[m.clone(), m.clone()]));
            assert!(triple.contains(&[m.clone(), m.clone(), m.clone()]));
        }
    }
}

#[test]
fn conjugation_transports_derivations() {
    let d = eps_dialgebra();
    let s = Mat::from_i64(&[&[1, 1, 0], &[0, 1, 2], &[0, 0, 1]]);
    let t = d.transport(&s).unwrap();
    let src = derivation_space(&t, D11).unwrap();
    let dst = derivation_space(&d, D11).unwrap();
    for maps in src.basis_maps() {
        let c = conjugate(&s, &maps[0], &t, &d).unwrap();
        assert!(dst.contains(&[c]));
    }
    for sigma in small_automorphisms(&d, 1, 4) {
        for maps in dst.basis_maps() {
            assert!(dst.contains(&[conjugate(&sigma, &maps[0], &d, &d).unwrap()]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Solution spaces are closed under linear combinations.
    #[test]
    fn solution_space_is_linear(c in rational(), e in rational(), pick in 0usize..9) {
        let d = &catalog_at_ones()[pick];
        let s = derivation_space(d, D11).unwrap();
        let basis = s.basis_maps();
        if basis.len() >= 2 {
            let m = &basis[0][0].scale(&c) + &basis[1][0].scale(&e);
            prop_assert!(identity_failures(d, &Variant::Plain, D11, &[m]).unwrap().is_empty());
        }
        if let Some(b) = basis.first() {
            prop_assert!(s.contains(&[b[0].scale(&c)]));
        }
    }
}
