use num_complex::Complex64;
use octograv::action::{self, CouplingConstants, LagrangianForm};
use octograv::algebra::{AlgebraKind, CayleyElement, Chirality};
use octograv::frame::{CoordinateScaledFrame, DerivativeProvider, FrameField, LocalLorentz, LorentzRotatedFrame};
use octograv::parallel::Execution;
use octograv::scenarios::Scenario;
use octograv::tables::{permutations4, StructureTables};
use octograv::verify::hermitian_norm;
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn tables() -> &'static StructureTables {
    static T: OnceLock<StructureTables> = OnceLock::new();
    T.get_or_init(|| StructureTables::build().unwrap())
}

fn element(kind: AlgebraKind) -> impl Strategy<Value = CayleyElement> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), kind.dim()).prop_map(move |v| {
        let c: Vec<Complex64> = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        CayleyElement::from_coeffs(kind, &c).unwrap()
    })
}

fn kind() -> impl Strategy<Value = AlgebraKind> {
    prop_oneof![Just(AlgebraKind::Quaternionic), Just(AlgebraKind::Octonionic)]
}

fn chirality() -> impl Strategy<Value = Chirality> {
    prop_oneof![Just(Chirality::Left), Just(Chirality::Right)]
}

fn triple() -> impl Strategy<Value = (CayleyElement, CayleyElement, CayleyElement)> {
    kind().prop_flat_map(|k| (element(k), element(k), element(k)))
}

proptest! {
    #[test]
    fn norm_is_multiplicative((x, y, _) in triple()) {
        let lhs = (x * y).norm();
        let scale = (hermitian_norm(&x) * hermitian_norm(&y)).powi(2);
        prop_assert!((lhs - x.norm() * y.norm()).norm() <= 1e-12 * scale);
    }

    #[test]
    fn conjugation_reverses_products((x, y, _) in triple()) {
        let d = (x * y).conjugate() - y.conjugate() * x.conjugate();
        prop_assert!(d.max_abs() <= 1e-14 * hermitian_norm(&x) * hermitian_norm(&y) * 8.0);
    }

    #[test]
    fn cross_product_is_alternating_and_orthogonal((x, y, z) in triple(), c in chirality()) {
        let h = hermitian_norm(&x) * hermitian_norm(&y) * hermitian_norm(&z);
        let v = x.cross(&y, &z, c).unwrap();
        let cyclic = y.cross(&z, &x, c).unwrap();
        prop_assert!((v - cyclic).max_abs() <= 1e-13 * h);
        prop_assert!(x.cross(&x, &z, c).unwrap().max_abs() <= 1e-13 * h);
        for w in [&x, &y, &z] {
            prop_assert!(v.inner(w).unwrap().norm() <= 1e-12 * h * hermitian_norm(w));
        }
    }

    #[test]
    fn chi_entries_follow_permutation_sign(idx in proptest::array::uniform4(0usize..8), p in 0usize..24) {
        let (perm, sign) = permutations4()[p];
        let t = tables();
        for chi in [&t.chi_left, &t.chi_right] {
            let base = chi.get(idx[0], idx[1], idx[2], idx[3]);
            let moved = chi.get(idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]);
            prop_assert_eq!(moved, base * f64::from(sign));
        }
    }
}

fn schwarzschild_point() -> impl Strategy<Value = Vec<f64>> {
    (-5.0f64..5.0, 3.0f64..20.0, 0.3f64..2.8, 0.0f64..6.2).prop_map(|(t, r, th, ph)| vec![t, r, th, ph])
}

fn lorentz4() -> impl Strategy<Value = LocalLorentz> {
    (-3.0f64..3.0, -3.0f64..3.0, -1.0f64..1.0, 1usize..4).prop_map(|(a, b, rapidity, axis)| {
        LocalLorentz::rotation(4, 1, 2, a)
            .compose(&LocalLorentz::rotation(4, 2, 3, b))
            .compose(&LocalLorentz::boost(4, axis, rapidity))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn four_dim_forms_are_lorentz_invariant(x in schwarzschild_point(), l in lorentz4(), hubble in 0.05f64..1.0) {
        let c = CouplingConstants::default();
        for scenario in [Scenario::Schwarzschild { mass: 1.0 }, Scenario::DeSitter { hubble }] {
            let field = scenario.frame_field(DerivativeProvider::Analytic);
            let rotated = FrameField::new(
                Arc::new(LorentzRotatedFrame::new(scenario.frame_function(), l.clone())),
                DerivativeProvider::Analytic,
            );
            for form in [LagrangianForm::DoubleDual4, LagrangianForm::Vierbein4] {
                let a = action::evaluate(form, &field, &x, &c, tables()).unwrap();
                let b = action::evaluate(form, &rotated, &x, &c, tables()).unwrap();
                prop_assert!((a.value - b.value).norm() <= 1e-10 * a.value.norm().max(a.scale));
            }
        }
    }

    #[test]
    fn integrands_scale_as_densities(lambda in 0.5f64..2.0, t in -2.0f64..2.0, seed in 0u64..4) {
        let c = CouplingConstants::default();
        let cases = [
            (Scenario::DeSitter { hubble: 0.3 }, LagrangianForm::DoubleDual4, vec![t, 0.1, 0.2, 0.3]),
            (Scenario::DeSitter { hubble: 0.3 }, LagrangianForm::Vierbein4, vec![t, 0.1, 0.2, 0.3]),
            (Scenario::RandomSmooth8 { amplitude: 0.04, seed }, LagrangianForm::ChiDual8, vec![t / 4.0; 8]),
        ];
        for (scenario, form, x) in cases {
            let base = action::evaluate(form, &scenario.frame_field(DerivativeProvider::Analytic), &x, &c, tables()).unwrap();
            let scaled_field = FrameField::new(
                Arc::new(CoordinateScaledFrame::new(scenario.frame_function(), lambda)),
                DerivativeProvider::Analytic,
            );
            let xs: Vec<f64> = x.iter().map(|v| v * lambda).collect();
            let scaled = action::evaluate(form, &scaled_field, &xs, &c, tables()).unwrap();
            let want = base.value * lambda.powi(-(x.len() as i32));
            prop_assert!((scaled.value - want).norm() <= 1e-10 * want.norm().max(scaled.scale));
        }
    }

    #[test]
    fn swapping_chiralities_conjugates_chi_dual(seed in 0u64..1000) {
        let c = CouplingConstants::default();
        let scenario = Scenario::RandomSmooth8 { amplitude: 0.04, seed };
        let g = octograv::geometry::GeometryAtPoint::compute(
            &scenario.frame_field(DerivativeProvider::Analytic),
            &scenario.sample_points(1, seed)[0],
        ).unwrap();
        let t = tables();
        let a = action::lagrangian_chi_dual_8d(&g, &c, &t.chi_left, &t.chi_right).unwrap();
        let b = action::lagrangian_chi_dual_8d(&g, &c, &t.chi_right, &t.chi_left).unwrap();
        prop_assert!((a.value - b.value.conj()).norm() <= 1e-12 * a.value.norm().max(a.scale));
    }

    #[test]
    fn sweeps_do_not_depend_on_execution_mode(seed in 0u64..1000) {
        let c = CouplingConstants::default();
        let scenario = Scenario::Schwarzschild { mass: 1.5 };
        let field = scenario.frame_field(DerivativeProvider::finite_difference());
        let points = scenario.sample_points(12, seed);
        let seq = action::sweep(LagrangianForm::Vierbein4, &field, &points, &c, tables(), Execution::Sequential);
        let par = action::sweep(LagrangianForm::Vierbein4, &field, &points, &c, tables(), Execution::Parallel);
        prop_assert_eq!(seq, par);
    }
}
