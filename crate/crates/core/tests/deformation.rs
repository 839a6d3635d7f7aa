mod common;

use common::{catalog_at_ones, ones};
use dialgebra::algebra::{catalog, Op};
use dialgebra::cohomology::{dialg_coboundary, dialg_cohomology, dialg_compatible_space, random_element, DialgCochain};
use dialgebra::deformation::{
    base_change_pullback, base_change_pushforward, check_equivalence, deformation_residual, infinitesimal,
    is_deformation_up_to, solve_triviality, EquivalenceTransformation, FirstOrderExpansion, Triviality,
    TruncatedDeformation,
};
use dialgebra::scalars::{int, Mat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alg2() -> dialgebra::BiHomDialgebra {
    catalog("Alg2_2", &ones("Alg2_2")).unwrap()
}

fn random_unipotent(dim: usize, order: usize, rng: &mut ChaCha8Rng) -> EquivalenceTransformation {
    let mut maps = vec![Mat::identity(dim)];
    for _ in 0..order {
        maps.push(Mat::from_fn(dim, dim, |_, _| int(rng.gen_range(-2..=2))));
    }
    EquivalenceTransformation::new(maps).unwrap()
}

#[test]
fn cocycles_give_first_order_deformations() {
    let d = alg2();
    let h = dialg_cohomology(&d, 2).unwrap();
    for v in h.cocycles.basis() {
        let pi1 = DialgCochain::from_flat(2, 2, v);
        let defm = TruncatedDeformation::first_order(&d, &pi1).unwrap();
        assert!(is_deformation_up_to(&defm, 1).unwrap().holds());
        let (inf, ok) = infinitesimal(&defm).unwrap();
        assert!(ok && inf == pi1);
        let r = deformation_residual(&defm, 1).unwrap();
        assert!(r.operadic.as_ref().unwrap().is_zero());
        assert!(r.displayed_families().iter().all(|(_, ok)| *ok));
    }
}

#[test]
fn non_cocycle_has_witness() {
    let d = alg2();
    let h = dialg_cohomology(&d, 2).unwrap();
    let v = h.compatible.basis().iter().find(|v| !h.cocycles.contains(v)).unwrap();
    let pi1 = DialgCochain::from_flat(2, 2, v);
    let defm = TruncatedDeformation::first_order(&d, &pi1).unwrap();
    let verdict = is_deformation_up_to(&defm, 1).unwrap();
    let w = verdict.failure.unwrap();
    assert_eq!(w.order, 1);
    assert!(!dialg_coboundary(&d, &pi1).is_zero());
    let (_, ok) = infinitesimal(&defm).unwrap();
    assert!(!ok);
}

#[test]
fn cohomology_class_decides_first_order_triviality() {
    for d in catalog_at_ones() {
        let h = dialg_cohomology(&d, 2).unwrap();
        for v in h.cocycles.basis() {
            let defm = TruncatedDeformation::first_order(&d, &DialgCochain::from_flat(2, d.dim(), v)).unwrap();
            let t = solve_triviality(&defm, 1).unwrap();
            assert_eq!(t.witness().is_some(), h.coboundaries.contains(v), "{}", d.name());
            match t {
                Triviality::Trivial(w) => {
                    assert!(check_equivalence(&defm, &TruncatedDeformation::zero(&d, 1), &w, 1).holds())
                }
                Triviality::Obstructed { order, residual, .. } => {
                    assert_eq!(order, 1);
                    assert!(dialg_coboundary(&d, &residual).is_zero());
                }
            }
        }
    }
}

#[test]
fn second_order_extension_reports_order() {
    let d = alg2();
    let h = dialg_cohomology(&d, 2).unwrap();
    for v in h.cocycles.basis() {
        let defm = TruncatedDeformation::first_order(&d, &DialgCochain::from_flat(2, 2, v)).unwrap().extend(2);
        if let Some(w) = is_deformation_up_to(&defm, 2).unwrap().failure {
            assert_eq!(w.order, 2);
        }
    }
}

#[test]
fn first_order_relation() {
    let d = alg2();
    let zero = TruncatedDeformation::zero(&d, 1);
    let e = EquivalenceTransformation::linear(&Mat::from_i64(&[&[1, 0], &[2, -1]]), 1);
    let pushed = base_change_pushforward(&zero, &e);
    for op in Op::BOTH {
        let x = FirstOrderExpansion::new(&zero, &pushed, &e, op);
        assert!(x.residual().is_zero());
        assert!(x.solved_form_holds(1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn pushforward_preserves_validity(seed in any::<u64>(), which in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = catalog(["Alg2_2", "Alg3_2"][which], &ones(["Alg2_2", "Alg3_2"][which])).unwrap();
        let h = dialg_cohomology(&d, 2).unwrap();
        let v = random_element(&h.cocycles, &mut rng);
        let defm = TruncatedDeformation::first_order(&d, &DialgCochain::from_flat(2, d.dim(), &v)).unwrap();
        let e = random_unipotent(d.dim(), 2, &mut rng);
        let pushed = base_change_pushforward(&defm, &e);
        prop_assert!(is_deformation_up_to(&pushed, 1).unwrap().holds());
        prop_assert!(check_equivalence(&defm, &pushed, &e, 1).holds());
        // symmetric under the truncated inverse
        prop_assert!(check_equivalence(&pushed, &defm, &e.inverse(), 1).holds());
        let z = TruncatedDeformation::zero(&d, 2);
        let pz = base_change_pushforward(&z, &e);
        prop_assert!(is_deformation_up_to(&pz, 2).unwrap().holds());
        let w = solve_triviality(&pz, 2).unwrap();
        let w = w.witness().unwrap();
        prop_assert!(check_equivalence(&pz, &z, w, 2).holds());
    }

    #[test]
    fn pullback_preserves_validity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = alg2();
        let h = dialg_cohomology(&d, 2).unwrap();
        let v = random_element(&h.cocycles, &mut rng);
        let defm = TruncatedDeformation::first_order(&d, &DialgCochain::from_flat(2, 2, &v)).unwrap();
        let s = loop {
            let s = Mat::from_fn(2, 2, |_, _| int(rng.gen_range(-3..=3)));
            if s.inverse().is_some() { break s; }
        };
        let p = base_change_pullback(&defm, &s).unwrap();
        prop_assert!(is_deformation_up_to(&p, 1).unwrap().holds());
        let back = base_change_pullback(&p, &s.inverse().unwrap()).unwrap();
        prop_assert!(back.same_series(&defm));
    }

    #[test]
    fn random_compatible_term_residual_matches_coboundary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = alg2();
        let v = random_element(&dialg_compatible_space(&d, 2), &mut rng);
        let pi1 = DialgCochain::from_flat(2, 2, &v);
        let defm = TruncatedDeformation::first_order(&d, &pi1).unwrap();
        let r = deformation_residual(&defm, 1).unwrap();
        prop_assert_eq!(r.is_zero(), dialg_coboundary(&d, &pi1).is_zero());
    }
}
