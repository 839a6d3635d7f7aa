mod common;

use common::{catalog_at_ones, eps_dialgebra, perturb};
use dialgebra::cohomology::{dialg_compatible_space, random_element, DialgCochain};
use dialgebra::operad::{
    bracket, brace_pi, brace_pi_single, dot, gamma, gamma_iterated, identity, multiplication, pi_pi_cases,
};
use dialgebra::scalars::{frac, int};
use dialgebra::trees::Forest;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cochain(d: &dialgebra::BiHomDialgebra, n: usize, rng: &mut ChaCha8Rng) -> DialgCochain {
    DialgCochain::from_flat(n, d.dim(), &random_element(&dialg_compatible_space(d, n), rng))
}

#[test]
fn pi_pi_vanishes_on_catalog() {
    for d in catalog_at_ones() {
        assert!(brace_pi_single(&d).is_zero(), "{}", d.name());
    }
}

#[test]
fn pi_pi_agrees_with_case_list_on_broken_structures() {
    let forest = Forest::new(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for base in catalog_at_ones().iter().chain([eps_dialgebra()].iter()) {
        let n = base.dim();
        let d = perturb(base, rng.gen(), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), int(1));
        let pp = brace_pi_single(&d);
        for case in pi_pi_cases() {
            assert_eq!(pp.part(forest.position(&case.tree)), &case.evaluate(&d), "{} {}", d.name(), case.label);
        }
    }
}

#[test]
fn perturbations_are_detected_by_pi_pi() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let algs = catalog_at_ones();
    let mut broken = 0;
    for _ in 0..50 {
        let base = &algs[rng.gen_range(0..algs.len())];
        let n = base.dim();
        let c = frac(rng.gen_range(1..5), rng.gen_range(1..4));
        let d = perturb(base, rng.gen(), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), c);
        let fails = !d.check().is_ok();
        assert_eq!(fails, !brace_pi_single(&d).is_zero());
        broken += fails as usize;
    }
    assert!(broken > 0);
}

#[test]
fn dot_and_brace_signs() {
    let d = eps_dialgebra();
    let id = identity(3);
    let pi = multiplication(&d);
    assert_eq!(dot(&d, &id, &id).unwrap(), pi.scale(&int(-1)));
    assert_eq!(brace_pi(&d, &id, &id).unwrap(), pi);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn gamma_is_iterated_composition(seed in any::<u64>()) {
        let d = eps_dialgebra();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_cochain(&d, 2, &mut rng);
        let g1 = random_cochain(&d, rng.gen_range(1..=2), &mut rng);
        let g2 = random_cochain(&d, rng.gen_range(1..=2), &mut rng);
        let gs = [g1, g2];
        prop_assert_eq!(gamma(&d, &f, &gs).unwrap(), gamma_iterated(&d, &f, &gs).unwrap());
    }

    #[test]
    fn bracket_is_graded_antisymmetric(seed in any::<u64>()) {
        let d = eps_dialgebra();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let f = random_cochain(&d, m, &mut rng);
        let g = random_cochain(&d, n, &mut rng);
        let sign = if (m - 1) * (n - 1) % 2 == 0 { int(-1) } else { int(1) };
        prop_assert_eq!(bracket(&d, &f, &g).unwrap(), bracket(&d, &g, &f).unwrap().scale(&sign));
    }
}
