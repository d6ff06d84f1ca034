//! Log-gamma and digamma for real and complex arguments.
//!
//! Both use the reflection formula for arguments left of 1/2, upward
//! recurrence until the argument is large, and the Stirling / asymptotic
//! series there. Accuracy is about 1e-14 absolute on |x| ≤ 50.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Recurrence shifts the argument past this modulus before the series is used.
const ASYMPTOTIC_FROM: f64 = 15.0;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn pole_error(what: &'static str, x: f64) -> Error {
    Error::Pole {
        what,
        lambda: Complex64::new(x, 0.0),
        pole: x,
    }
}

/// `sin(πx)` with the argument reduced exactly, so that integers give 0.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round(); // r ∈ [−1, 1]
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(πx)` with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = 0.0;
    for (k, b) in BERNOULLI.iter().enumerate().take(8) {
        let m = 2.0 * (k as f64 + 1.0);
        series += b / (m * (m - 1.0)) * term;
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// `ln|Γ(x)|` for real x that is not a non-positive integer.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(pole_error("log-gamma", x));
    }
    Ok(ln_gamma_unchecked(x))
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI.ln() - sin_pi(x).abs().ln() - ln_gamma_unchecked(1.0 - x);
    }
    let mut z = x;
    let mut product = 1.0;
    while z < ASYMPTOTIC_FROM {
        product *= z;
        z += 1.0;
    }
    stirling(z) - product.ln()
}

/// Sign of Γ(x) for real x that is not a non-positive integer.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Γ(x), computed as `sign · exp(ln|Γ(x)|)`.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(gamma_sign(x) * ln_gamma(x)?.exp())
}

/// Γ(a)/Γ(b) through log-gamma with explicit sign tracking.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if is_pole(b) {
        return Ok(0.0);
    }
    Ok(gamma_sign(a) * gamma_sign(b) * (ln_gamma(a)? - ln_gamma(b)?).exp())
}

/// Digamma ψ(x) = Γ′(x)/Γ(x) for real x that is not a non-positive integer.
pub fn digamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(pole_error("digamma", x));
    }
    Ok(digamma_unchecked(x))
}

fn digamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return digamma_unchecked(1.0 - x) - PI * cos_pi(x) / sin_pi(x);
    }
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_FROM {
        shift += 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut term = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI.iter().enumerate().take(8) {
        let m = 2.0 * (k as f64 + 1.0);
        series += b / m * term;
        term *= inv2;
    }
    z.ln() - 0.5 / z - series - shift
}

fn complex_is_pole(z: Complex64) -> bool {
    z.im == 0.0 && is_pole(z.re)
}

/// `ln sin(πz)` (some branch), stable for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im >= 0.0 {
        let q = (2.0 * PI * i * z).exp();
        (0.5 * i).ln() - PI * i * z + (1.0 - q).ln()
    } else {
        let q = (-2.0 * PI * i * z).exp();
        (-0.5 * i).ln() + PI * i * z + (1.0 - q).ln()
    }
}

/// `π cot(πz)`, stable for large |Im z|.
pub fn pi_cot_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im == 0.0 {
        return Complex64::new(PI * cos_pi(z.re) / sin_pi(z.re), 0.0);
    }
    if z.im > 0.0 {
        let q = (2.0 * PI * i * z).exp();
        -PI * i * (1.0 + q) / (1.0 - q)
    } else {
        let q = (-2.0 * PI * i * z).exp();
        PI * i * (1.0 + q) / (1.0 - q)
    }
}

/// `π² / sin²(πz)`, stable for large |Im z|.
pub fn pi2_csc2_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im == 0.0 {
        let s = sin_pi(z.re);
        return Complex64::new(PI * PI / (s * s), 0.0);
    }
    // 1/sin² = −4 q/(1 − q)² with q = e^{±2πiz}, |q| < 1.
    let q = if z.im > 0.0 {
        (2.0 * PI * i * z).exp()
    } else {
        (-2.0 * PI * i * z).exp()
    };
    -4.0 * PI * PI * q / ((1.0 - q) * (1.0 - q))
}

fn stirling_complex(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate().take(8) {
        let m = 2.0 * (k as f64 + 1.0);
        series += b / (m * (m - 1.0)) * term;
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// A branch of `ln Γ(z)`: its exponential is Γ(z) and its real part is ln|Γ(z)|.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if complex_is_pole(z) {
        return Err(pole_error("log-gamma", z.re));
    }
    Ok(ln_gamma_complex_unchecked(z))
}

fn ln_gamma_complex_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return PI.ln() - ln_sin_pi(z) - ln_gamma_complex_unchecked(1.0 - z);
    }
    let mut w = z;
    let mut log_product = Complex64::new(0.0, 0.0);
    while w.norm() < ASYMPTOTIC_FROM {
        log_product += w.ln();
        w += 1.0;
    }
    stirling_complex(w) - log_product
}

/// Digamma ψ(z) for complex z.
pub fn digamma_complex(z: Complex64) -> Result<Complex64> {
    if complex_is_pole(z) {
        return Err(pole_error("digamma", z.re));
    }
    Ok(digamma_complex_unchecked(z))
}

fn digamma_complex_unchecked(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(digamma_unchecked(z.re), 0.0);
    }
    if z.re < 0.5 {
        return digamma_complex_unchecked(1.0 - z) - pi_cot_pi(z);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < ASYMPTOTIC_FROM {
        shift += 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut term = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate().take(8) {
        let m = 2.0 * (k as f64 + 1.0);
        series += b / m * term;
        term *= inv2;
    }
    w.ln() - 0.5 / w - series - shift
}

/// Γ(a)/Γ(b) for complex arguments; zero when `b` is a pole of Γ.
pub fn gamma_ratio_complex(a: Complex64, b: Complex64) -> Result<Complex64> {
    if complex_is_pole(b) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a.im == 0.0 && b.im == 0.0 {
        return Ok(Complex64::new(gamma_ratio(a.re, b.re)?, 0.0));
    }
    Ok((ln_gamma_complex(a)? - ln_gamma_complex_unchecked(b)).exp())
}

/// `ln(1 + x)` without cancellation for small |x|.
pub fn ln_1p_complex(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        x * (1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x)))
    } else {
        (1.0 + x).ln()
    }
}

fn stirling_tail(w: Complex64) -> Complex64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate().take(8) {
        let m = 2.0 * (k as f64 + 1.0);
        series += b / (m * (m - 1.0)) * term;
        term *= inv2;
    }
    series
}

/// `ln Γ(a) − ln Γ(a + h)` for complex `a` far from the real axis
/// (`|Im a| ≥ 20`), from the Stirling series with the large logarithms
/// combined analytically: `−h ln a − (a+h−½) ln(1 + h/a) + h + S(a) − S(a+h)`.
pub fn ln_gamma_shift_ratio_asymptotic(a: Complex64, h: f64) -> Complex64 {
    -h * a.ln() - (a + h - 0.5) * ln_1p_complex(h / a) + h + stirling_tail(a)
        - stirling_tail(a + h)
}
