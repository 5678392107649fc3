use proptest::prelude::*;

use su11::detection::parity_stats;
use su11::interferometer::{loss_map, opa_map, phase_map, MODE_A, MODE_B};
use su11::numerics::{central_derivative, five_point_derivative};
use su11::{DetectionKind, InputSpec, InterferometerConfig, Propagator, Sensor};

fn input() -> impl Strategy<Value = InputSpec> {
    prop_oneof![
        Just(InputSpec::Vacuum),
        (0.0..3.0f64).prop_map(InputSpec::coherent),
        (0.0..3.0f64, 0.0..1.0f64).prop_map(|(a, r)| InputSpec::coherent_squeezed(a, r)),
        (0.1..2.0f64).prop_map(InputSpec::two_coherent),
    ]
}

fn config() -> impl Strategy<Value = InterferometerConfig> {
    (0.1..1.5f64, 0.0..0.5f64, 0.0..0.5f64).prop_map(|(g, l1, l2)| InterferometerConfig::balanced(g).with_losses(l1, l2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parity_is_bounded(spec in input(), config in config(), phi in -3.0..3.0f64) {
        let out = Propagator::new(&spec, &config).unwrap().at(phi).unwrap();
        for mode in [MODE_A, MODE_B] {
            let (p, var) = parity_stats(&out, mode).unwrap();
            prop_assert!((-1.0..=1.0).contains(&p), "parity {p}");
            prop_assert!((0.0..=1.0).contains(&var));
        }
    }

    #[test]
    fn output_respects_uncertainty(spec in input(), config in config(), phi in -3.0..3.0f64) {
        let out = Propagator::new(&spec, &config).unwrap().at(phi).unwrap();
        prop_assert!(out.uncertainty_min_eigenvalue() > -1e-9);
    }

    #[test]
    fn parity_signal_is_even_for_real_amplitudes(
        alpha in 0.0..3.0f64, r in 0.0..1.0f64, config in config(), phi in 0.01..2.0f64,
    ) {
        let spec = InputSpec::coherent_squeezed(alpha, r);
        let sensor = Sensor::new(DetectionKind::parity(), &spec, &config).unwrap();
        let (plus, minus) = (sensor.signal(phi).unwrap(), sensor.signal(-phi).unwrap());
        prop_assert!((plus - minus).abs() <= 1e-12 * plus.abs().max(1e-3), "{plus} vs {minus}");
    }

    #[test]
    fn derivative_matches_five_point_stencil(spec in input(), config in config(), phi in 0.05..2.0f64) {
        let sensor = Sensor::new(DetectionKind::parity(), &spec, &config).unwrap();
        let f = |p: f64| sensor.signal(p);
        let central = central_derivative(&f, phi).unwrap().value;
        let stencil = five_point_derivative(&f, phi, 1e-3).unwrap();
        prop_assert!((central - stencil).abs() <= 1e-5 * stencil.abs().max(1e-3), "{central} vs {stencil}");
    }

    #[test]
    fn composition_is_associative(
        g1 in 0.0..1.5f64, t1 in -3.0..3.0f64, phi in -3.0..3.0f64,
        l1 in 0.0..0.9f64, l2 in 0.0..0.9f64, g2 in 0.0..1.5f64,
    ) {
        let a = opa_map(g1, t1).unwrap().embed(4).unwrap();
        let b = phase_map(phi).embed(4).unwrap();
        let c = loss_map(l1, l2).unwrap();
        let d = opa_map(g2, 0.0).unwrap().embed(4).unwrap();
        let left = a.then(&b).unwrap().then(&c).unwrap().then(&d).unwrap();
        let right = a.then(&b.then(&c.then(&d).unwrap()).unwrap()).unwrap();
        let diff = (left.matrix() - right.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-12);
        prop_assert!(left.metric_defect() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reduced_wigner_function_is_normalised(spec in input(), config in config(), phi in -1.0..1.0f64) {
        let out = Propagator::new(&spec, &config).unwrap().at(phi).unwrap();
        let mode = out.reduce_to_mode(MODE_B).unwrap();
        let (m, v) = (mode.mean(), mode.cov());
        let n = 240;
        let span: Vec<(f64, f64)> = (0..2).map(|k| (m[k], 9.0 * v[(k, k)].sqrt())).collect();
        let h: Vec<f64> = span.iter().map(|&(_, w)| 2.0 * w / n as f64).collect();
        let mut total = 0.0;
        for i in 0..=n {
            let x = span[0].0 - span[0].1 + i as f64 * h[0];
            for j in 0..=n {
                let p = span[1].0 - span[1].1 + j as f64 * h[1];
                let w = if i == 0 || i == n { 0.5 } else { 1.0 } * if j == 0 || j == n { 0.5 } else { 1.0 };
                total += w * mode.wigner_value(&[x, p]).unwrap();
            }
        }
        total *= h[0] * h[1];
        prop_assert!((total - 1.0).abs() < 1e-6, "integral {total}");
    }
}
