use num_complex::Complex64;
use on_qkz::algebra::{basis_ops, r_matrix, ModelParams};
use on_qkz::chain::{big_omega2_from_omega2, omega2_from_big_omega2, rho_coefficients};
use on_qkz::linalg::{kron, max_abs, partial_trace_pair, DenseMatrix};
use on_qkz::reference::PrintedValue;
use on_qkz::special::digamma;
use proptest::prelude::*;

fn params(n: usize) -> ModelParams {
    ModelParams::new(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitarity_away_from_poles(n in 3usize..=8, lambda in -3.0f64..3.0) {
        let p = params(n);
        let delta = p.delta();
        prop_assume!([-1.0, -delta, 1.0, delta].iter().all(|pole| (lambda - pole).abs() > 0.05));
        let ops = basis_ops(&p);
        let r12 = r_matrix(&p, Complex64::new(lambda, 0.0)).unwrap().matrix;
        let r21 = &ops.permutation * r_matrix(&p, Complex64::new(-lambda, 0.0)).unwrap().matrix * &ops.permutation;
        prop_assert!(max_abs(&(r12 * r21 - &ops.identity)) < 1e-11);
    }

    #[test]
    fn rho_coefficients_are_normalized(n in 3usize..=8, big1 in -2.0f64..2.0, big2 in -2.0f64..8.0) {
        let nf = n as f64;
        let [r1, r2, r3] = rho_coefficients(&params(n), big1, big2);
        prop_assert!((nf * nf * r1 + nf * r2 + nf * r3 - 1.0).abs() < 1e-12);
        prop_assert!((nf * r1 + nf * nf * r2 + nf * r3 - big1).abs() < 1e-12);
        prop_assert!((nf * r1 + nf * r2 + nf * nf * r3 - big2).abs() < 1e-12);
    }

    #[test]
    fn branch_map_inverts(n in 3usize..=8, big2 in -10.0f64..10.0) {
        let p = params(n);
        let back = big_omega2_from_omega2(&p, omega2_from_big_omega2(&p, big2));
        prop_assert!((back - big2).abs() < 1e-12 * big2.abs().max(1.0));
    }

    #[test]
    fn printed_values_keep_their_precision(mantissa in -10_000_000i64..10_000_000, decimals in 0u32..12) {
        let text = format!("{:.*}", decimals as usize, mantissa as f64 / 10f64.powi(decimals as i32));
        let value: PrintedValue = text.parse().unwrap();
        prop_assert_eq!(value.text(), text.as_str());
        prop_assert!((value.unit() - 10f64.powi(-(decimals as i32))).abs() < 1e-12 * value.unit());
        prop_assert_eq!(value.to_string(), text);
    }

    #[test]
    fn digamma_recurrence(x in 0.01f64..40.0) {
        let step = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        prop_assert!(step.abs() < 1e-12 * (1.0 + 1.0 / x));
    }

    #[test]
    fn partial_trace_of_a_product_state(a in 0usize..3, b in 0usize..3, c in 0usize..3) {
        // |a b c⟩ on three qutrits: the (1,3) marginal is |a c⟩⟨a c|.
        let n = 3;
        let mut state = vec![Complex64::new(0.0, 0.0); 27];
        state[a * 9 + b * 3 + c] = Complex64::new(1.0, 0.0);
        let rho = partial_trace_pair(&state, n, 3, 1, 3).unwrap();
        let e = |k: usize| DenseMatrix::from_fn(n, n, |i, j| Complex64::new(f64::from(u8::from(i == k && j == k)), 0.0));
        prop_assert!(max_abs(&(rho - kron(&e(a), &e(c)))) < 1e-15);
    }
}
