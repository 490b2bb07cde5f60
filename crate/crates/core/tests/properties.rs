use proptest::prelude::*;

use schwinger_core::bogoliubov::{moduli, sauter_ratio_via_gamma, Branch};
use schwinger_core::entanglement::{
    boson_entropy_beta2_form, boson_entropy_x_form, entropy, schmidt_spectrum,
};
use schwinger_core::specfun::log_add_exp;
use schwinger_core::{FieldProfile, ModeParams, Statistics};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn mode() -> impl Strategy<Value = ModeParams> {
    (
        log_uniform(1e-2, 10.0),
        log_uniform(0.1, 3.0),
        log_uniform(1e-2, 10.0),
        -5.0..5.0f64,
    )
        .prop_map(|(m, q, kp, kz)| ModeParams::new(m, q, kp, kz).unwrap())
}

fn field() -> impl Strategy<Value = FieldProfile> {
    prop_oneof![
        log_uniform(1e-2, 100.0).prop_map(|e| FieldProfile::constant(e).unwrap()),
        (log_uniform(1e-2, 100.0), log_uniform(1e-2, 20.0))
            .prop_map(|(e, t)| FieldProfile::sauter(e, t).unwrap()),
    ]
}

fn stat() -> impl Strategy<Value = Statistics> {
    prop_oneof![Just(Statistics::Boson), Just(Statistics::Fermion)]
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normalization_holds(mode in mode(), field in field(), stat in stat()) {
        let m = moduli(&mode, &field, stat).unwrap();
        if let Some(defect) = m.normalization_defect() {
            prop_assert!(defect < 1e-10, "{defect}");
        }
        prop_assert!(m.beta2.ln().is_finite() || m.beta2.is_zero());
    }

    #[test]
    fn entropy_is_bounded(mode in mode(), field in field(), stat in stat()) {
        let m = moduli(&mode, &field, stat).unwrap();
        if let Ok(r) = entropy(&m) {
            prop_assert!(r.s_bits >= 0.0);
            if stat == Statistics::Fermion {
                prop_assert!(r.s_bits <= 1.0 + 1e-12);
                prop_assert!(r.beta2 <= 1.0);
            }
            // α⁴ may underflow for fermions.
            prop_assert!(r.c0_sq >= 0.0 && r.c0_sq <= 1.0);
        }
    }

    #[test]
    fn constant_field_ignores_k_z(mode in mode(), e in log_uniform(1e-2, 100.0), stat in stat()) {
        let field = FieldProfile::constant(e).unwrap();
        let a = moduli(&mode, &field, stat).unwrap();
        let b = moduli(&mode.with_k_z(0.0).unwrap(), &field, stat).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sauter_is_reflection_symmetric(mode in mode(), e in log_uniform(1e-2, 100.0), tau in log_uniform(1e-2, 20.0), stat in stat()) {
        let field = FieldProfile::sauter(e, tau).unwrap();
        let a = moduli(&mode, &field, stat).unwrap().beta2.ln();
        let b = moduli(&mode.reflected(), &field, stat).unwrap().beta2.ln();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn gamma_route_agrees(mode in mode(), e in log_uniform(0.1, 10.0), tau in log_uniform(0.1, 5.0), stat in stat()) {
        let pulse = match FieldProfile::sauter(e, tau).unwrap() {
            FieldProfile::Sauter(p) => p,
            _ => unreachable!(),
        };
        let closed = schwinger_core::bogoliubov::sauter_moduli(&mode, &pulse, stat).unwrap();
        let want = closed.ratio().ln();
        for branch in [Branch::Plus, Branch::Minus] {
            let g = sauter_ratio_via_gamma(&mode, &pulse, stat, branch).unwrap();
            for got in [g.positive.ln(), g.negative.ln()] {
                prop_assert!(((got - want).exp() - 1.0).abs() < 1e-9, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn boson_entropy_forms_agree(ln_b in -700.0..0.0f64) {
        let s1 = boson_entropy_beta2_form(ln_b);
        let s2 = boson_entropy_x_form(ln_b - log_add_exp(0.0, ln_b));
        prop_assert!((s1 - s2).abs() <= 1e-12 * s1);
    }

    #[test]
    fn boson_entropy_increases_with_beta2(a in -50.0..5.0f64, d in 1e-3..5.0f64) {
        prop_assert!(boson_entropy_beta2_form(a + d) > boson_entropy_beta2_form(a));
    }

    #[test]
    fn schmidt_weights_sum_to_one(mode in mode(), field in field(), stat in stat()) {
        let m = moduli(&mode, &field, stat).unwrap();
        if let Ok(spec) = schmidt_spectrum(&m) {
            // Very flat geometric spectra are not materialized.
            if let Ok(total) = spec.total_weight(1e-15) {
                prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
            }
        }
    }
}
