use proptest::prelude::*;

use nlamp::amplifier::{amplify, analytic_norm, Catalog};
use nlamp::fock::{
    apply_annihilate, apply_create, make_state, make_state_with_headroom, quadrature_moments, Cutoff, FockVector, Parity,
    StateSpec,
};
use nlamp::metrics::{analytic, ein, fidelity, gain_coherent};
use nlamp::scs::{amplified_scs, scs_fidelity_analytic};
use nlamp::squeezed::{squeezed_fidelity, squeezed_fidelity_analytic};
use nlamp::wigner::{wigner_analytic, wigner_numeric, PhasePoint, WignerFamily};

const CLOSED: [Catalog; 6] = [
    Catalog::AddSub,
    Catalog::Add2,
    Catalog::AddSub2,
    Catalog::Add4,
    Catalog::AddSubAdd2,
    Catalog::Add2AddSub,
];

fn closed_catalog() -> impl Strategy<Value = Catalog> {
    prop::sample::select(CLOSED.to_vec())
}

fn parity() -> impl Strategy<Value = Parity> {
    prop::sample::select(vec![Parity::Even, Parity::Odd])
}

fn coherent(alpha: f64, creations: usize) -> FockVector {
    make_state_with_headroom(&StateSpec::Coherent { alpha }, Cutoff::Auto, creations).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherent_norm_and_fidelity(cat in closed_catalog(), ai in 0.05f64..3.0, af in 0.05f64..4.0) {
        let seq = cat.seq();
        let (out, factor) = amplify(&seq, &coherent(ai, seq.creations())).unwrap();
        prop_assert!((factor / analytic_norm(&seq, ai).unwrap() - 1.0).abs() < 1e-9);
        let target = make_state(&StateSpec::Coherent { alpha: af }, Cutoff::Auto).unwrap();
        let num = fidelity(&out, &target).unwrap();
        prop_assert!((num - analytic::coherent_fidelity(cat, ai, af).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn gain_is_phase_independent(cat in closed_catalog(), ai in 0.05f64..3.0, lambda in -1.4f64..1.4) {
        let g = gain_coherent(&cat.seq(), ai, lambda).unwrap();
        prop_assert!((g - analytic::coherent_gain(cat, ai).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn ein_closed_forms(
        cat in prop::sample::select(vec![Catalog::AddSub, Catalog::AddSub2, Catalog::Add4, Catalog::AddSubAdd2, Catalog::Add2AddSub]),
        ai in 0.05f64..3.0,
        lambda in -1.4f64..1.4,
    ) {
        let e = ein(&cat.seq(), ai, lambda).unwrap();
        prop_assert!((e - analytic::coherent_ein(cat, ai, lambda).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn cat_fidelity_closed_form(
        cat in prop::sample::select(vec![Catalog::AddSub, Catalog::Add2]),
        p in parity(),
        ai in 0.05f64..3.0,
        af in 0.05f64..4.0,
    ) {
        let out = amplified_scs(&cat.seq(), p, ai).unwrap();
        let target = make_state(&StateSpec::scs(p, af), Cutoff::Auto).unwrap();
        let num = fidelity(&out, &target).unwrap();
        prop_assert!((num - scs_fidelity_analytic(cat, p, ai, af).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn squeezed_fidelity_closed_form(
        cat in prop::sample::select(vec![Catalog::AddSub, Catalog::Add2]),
        p in parity(),
        r in -2.0f64..2.0,
        af in 0.05f64..3.5,
    ) {
        let num = squeezed_fidelity(&cat.seq(), p, r, af).unwrap();
        prop_assert!((num - squeezed_fidelity_analytic(cat, p, r, af).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn wigner_closed_forms(
        family in prop::sample::select(WignerFamily::ALL.to_vec()),
        ai in 0.0f64..3.0,
        x in -3.0f64..5.0,
        y in -3.0f64..3.0,
    ) {
        let seq = family.seq();
        let (out, _) = amplify(&seq, &coherent(ai, seq.creations())).unwrap();
        let pt = PhasePoint::new(x, y).unwrap();
        let num = wigner_numeric(&out, pt).unwrap();
        prop_assert!((num - wigner_analytic(family, ai, pt)).abs() < 1e-8);
        prop_assert!(num.abs() <= std::f64::consts::FRAC_2_PI + 1e-12);
    }

    #[test]
    fn commutator_on_arbitrary_vectors(amps in prop::collection::vec(-1.0f64..1.0, 1..40)) {
        let psi = FockVector::from_real(amps);
        let ac = apply_annihilate(&apply_create(&psi));
        let ca = apply_create(&apply_annihilate(&psi));
        for n in 0..=psi.n_max() {
            prop_assert!((ac.amp(n) - ca.amp(n) - psi.amp(n)).norm() < 1e-10);
        }
    }

    #[test]
    fn quadrature_half_turn(alpha in -3.0f64..3.0, lambda in -1.5f64..1.5) {
        let psi = make_state(&StateSpec::Coherent { alpha }, Cutoff::Auto).unwrap();
        let (m0, v0) = quadrature_moments(&psi, lambda).unwrap();
        let (m1, v1) = quadrature_moments(&psi, lambda + std::f64::consts::PI).unwrap();
        prop_assert!((m0 + m1).abs() < 1e-10);
        prop_assert!((v0 - v1).abs() < 1e-10);
        prop_assert!((v0 - 0.5).abs() < 1e-10);
    }

    #[test]
    fn amplification_keeps_parity(cat in prop::sample::select(Catalog::ALL.to_vec()), p in parity(), a in 0.05f64..3.0) {
        let seq = cat.seq();
        let psi = make_state_with_headroom(&StateSpec::scs(p, a), Cutoff::Auto, seq.creations()).unwrap();
        let (out, _) = amplify(&seq, &psi).unwrap();
        prop_assert!(out.is_normalized());
        prop_assert_eq!(out.parity_weight(seq.output_parity(p).flip()), 0.0);
    }
}
