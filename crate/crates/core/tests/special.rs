use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use on_qkz::special::{
    cos_pi, digamma, digamma_complex, gamma, gamma_ratio, gamma_ratio_complex, ln_gamma,
    ln_gamma_complex, ln_gamma_shift_ratio_asymptotic, sin_pi, EULER_GAMMA,
};
use on_qkz::Error;

const TOL: f64 = 1e-13;

#[test]
fn digamma_at_one_and_one_half() {
    assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() <= TOL);
    assert!((digamma(0.5).unwrap() + EULER_GAMMA + 2.0 * LN_2).abs() <= TOL);
}

#[test]
fn digamma_reflection() {
    assert!((digamma(0.75).unwrap() - digamma(0.25).unwrap() - PI).abs() <= TOL);
    for x in [0.1, 0.3, 1.7, -2.4, -7.25] {
        let lhs = digamma(1.0 - x).unwrap() - digamma(x).unwrap();
        assert!((lhs - PI * cos_pi(x) / sin_pi(x)).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn digamma_recurrence_over_the_domain() {
    let mut x = -49.7;
    while x < 49.0 {
        let step = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        assert!(step.abs() < 1e-12 * (1.0 + digamma(x).unwrap().abs()), "x={x}");
        x += 0.731;
    }
}

#[test]
fn gamma_ratio_at_negative_argument() {
    let direct = gamma_ratio(-2.0 / 3.0, 2.0 / 3.0).unwrap();
    assert!((direct - (-2.967_546_389_470_19)).abs() < 1e-13);
    // Γ(−2/3) = Γ(1/3)/(−2/3).
    let via_recurrence = gamma(1.0 / 3.0).unwrap() / (-2.0 / 3.0) / gamma(2.0 / 3.0).unwrap();
    assert!((direct - via_recurrence).abs() < 1e-13);
}

#[test]
fn gamma_values_and_signs() {
    assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
    assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
    assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
    assert!(gamma(-1.5).unwrap() > 0.0);
    assert!(gamma(-2.5).unwrap() < 0.0);
    assert!((ln_gamma(30.0).unwrap() - 71.257_038_967_168_01).abs() < 1e-12);
}

#[test]
fn gamma_ratio_vanishes_at_denominator_poles() {
    assert_eq!(gamma_ratio(0.5, -3.0).unwrap(), 0.0);
    assert_eq!(gamma_ratio_complex(Complex64::new(0.5, 0.0), Complex64::new(-2.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn poles_are_errors() {
    for x in [0.0, -1.0, -12.0] {
        assert!(matches!(digamma(x), Err(Error::Pole { .. })));
        assert!(matches!(ln_gamma(x), Err(Error::Pole { .. })));
    }
    assert!(digamma_complex(Complex64::new(-3.0, 0.0)).is_err());
    assert!(ln_gamma_complex(Complex64::new(0.0, 0.0)).is_err());
}

#[test]
fn exact_trigonometric_reduction() {
    for k in -6..=6 {
        assert_eq!(sin_pi(k as f64), 0.0);
    }
    assert!((cos_pi(1.0 / 3.0) - 0.5).abs() < 3e-16);
}

#[test]
fn complex_functions_reduce_to_real_ones() {
    for x in [-3.3, -0.4, 0.2, 1.0, 7.5, 33.0] {
        let z = Complex64::new(x, 0.0);
        assert!((digamma_complex(z).unwrap().re - digamma(x).unwrap()).abs() < 1e-13);
        assert!((ln_gamma_complex(z).unwrap().re - ln_gamma(x).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn complex_digamma_recurrence_and_conjugation() {
    for z in [Complex64::new(0.3, 1.2), Complex64::new(-2.7, 0.4), Complex64::new(4.0, -25.0)] {
        let step = digamma_complex(z + 1.0).unwrap() - digamma_complex(z).unwrap() - 1.0 / z;
        assert!(step.norm() < 1e-13);
        let conj = digamma_complex(z.conj()).unwrap() - digamma_complex(z).unwrap().conj();
        assert!(conj.norm() < 1e-13);
    }
}

#[test]
fn complex_gamma_on_the_imaginary_axis() {
    // |Γ(iy)|² = π / (y sinh(πy)).
    for y in [0.5, 2.0, 10.0] {
        let lg = ln_gamma_complex(Complex64::new(0.0, y)).unwrap();
        let expected = 0.5 * (PI / (y * (PI * y).sinh())).ln();
        assert!((lg.re - expected).abs() < 1e-12);
    }
}

#[test]
fn asymptotic_gamma_shift_ratio_matches_direct_evaluation() {
    for (a, h) in [(Complex64::new(0.7, 25.0), 1.3), (Complex64::new(-1.2, -40.0), 0.5), (Complex64::new(2.0, 80.0), 4.0)] {
        let direct = ln_gamma_complex(a).unwrap() - ln_gamma_complex(a + h).unwrap();
        let asymptotic = ln_gamma_shift_ratio_asymptotic(a, h);
        // Branches of the logarithm may differ by 2πi.
        let diff = direct - asymptotic;
        let wrapped = Complex64::new(diff.re, diff.im - 2.0 * PI * (diff.im / (2.0 * PI)).round());
        assert!(wrapped.norm() < 1e-11, "a={a} h={h}: {diff}");
    }
}
