//! Zero-temperature solution of the two-site correlations in the
//! thermodynamic limit.
//!
//! * `ω₁(λ)` in closed form as a combination of eight digamma functions,
//!   solving `ω₁(λ−Δ) + ω₁(λ) = 1/(λ−1) − 1/λ + 1/(λ−Δ) − 1/(λ−Δ+1)`.
//! * `ω̃₂(λ)`, the solution of `ω̃₂(λ−Δ) − ω̃₂(λ) = φ(λ)` with
//!   `φ(λ) = α(λ)[1/(λ−1) − 1/λ − ω₁(λ)]` and `α(λ) = Γ((λ−1)/Δ)/Γ((λ+1)/Δ)`,
//!   analytic in the strip `1−Δ < Re λ < 1` (except for a simple pole at
//!   `1−Δ` when Δ > 1) and decaying at `±i∞`. Two independent numerical
//!   representations are provided, see [`Omega2Strategy`].
//! * Closed forms of ω̃₂ for n = 3 and n = 4.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::ModelParams;
use crate::chain::{big_omega2_from_omega2, row_from_observables, ChainLength, Omega2Kind, TableRow};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::special::{
    digamma, digamma_complex, gamma_ratio, gamma_ratio_complex, ln_1p_complex,
    ln_gamma_shift_ratio_asymptotic, pi2_csc2_pi, pi_cot_pi, sin_pi,
};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ω₁(λ) = −c[ψ(1+z) + ψ(1−z) − ψ(½−z) − ψ(½+z) + ψ(½+c+z) + ψ(½+c−z) − ψ(c−z) − ψ(c+z)]`
/// with `c = 1/(2Δ)` and `z = cλ`, for complex λ.
pub fn omega1_inf_complex(params: &ModelParams, lambda: Complex64) -> Result<Complex64> {
    let c = 0.5 / params.delta();
    let z = lambda * c;
    if z.im.abs() >= ASYMPTOTIC_IMAG {
        return Ok(omega1_asymptotic(c, z));
    }
    let terms = [
        (1.0 + z, 1.0),
        (1.0 - z, 1.0),
        (0.5 - z, -1.0),
        (0.5 + z, -1.0),
        (0.5 + c + z, 1.0),
        (0.5 + c - z, 1.0),
        (c - z, -1.0),
        (c + z, -1.0),
    ];
    let mut sum = Complex64::new(0.0, 0.0);
    for (arg, sign) in terms {
        if is_nonpositive_integer(arg) {
            return Err(Error::Pole {
                what: "ω₁",
                lambda,
                pole: lambda.re,
            });
        }
        sum += sign * digamma_complex(arg)?;
    }
    Ok(-c * sum)
}

/// Beyond this |Im| of the digamma arguments the asymptotic forms are used.
const ASYMPTOTIC_IMAG: f64 = 20.0;

/// ω₁ far from the real axis. The eight digammas pair up as `ψ(b+z) + ψ(b−z)`
/// with `b ∈ {1, ½, ½+c, c}` and signs `(+, −, +, −)`. Their logarithms
/// combine into `ln[(1−z²)((½+c)²−z²) / ((¼−z²)(c²−z²))]`, evaluated with
/// `ln(1+x)`, and the inverse powers of the asymptotic series pair up into
/// functions of `b² − z²`, so nothing of size `ln z` is ever subtracted.
fn omega1_asymptotic(c: f64, z: Complex64) -> Complex64 {
    const B: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let z2 = z * z;
    let bh = 0.5 + c;
    let logs = ln_1p_complex(0.75 / (0.25 - z2)) + ln_1p_complex((bh * bh - c * c) / (c * c - z2));
    let pairs = [(1.0, 1.0), (0.5, -1.0), (bh, 1.0), (c, -1.0)];
    let mut rest = Complex64::new(0.0, 0.0);
    for (b, sign) in pairs {
        // −1/(2w) summed over w = b ± z
        rest -= sign * b / (b * b - z2);
        let (p, m) = (1.0 / (b + z), 1.0 / (b - z));
        let (p2, m2) = (p * p, m * m);
        let (mut pp, mut mm) = (p2, m2);
        for (k, bk) in B.iter().enumerate() {
            let order = 2.0 * (k as f64 + 1.0);
            rest -= sign * bk / order * (pp + mm);
            pp *= p2;
            mm *= m2;
        }
    }
    -c * (logs + rest)
}

/// [`omega1_inf_complex`] on the real axis.
pub fn omega1_inf(params: &ModelParams, lambda: f64) -> Result<f64> {
    Ok(omega1_inf_complex(params, real(lambda))?.re)
}

/// Ground-state energy per site in the thermodynamic limit,
/// `−(1/Δ)[2 ln 2 − ψ(1/(2Δ)) + ψ(½ + 1/(2Δ))]`.
pub fn ground_energy_inf(params: &ModelParams) -> f64 {
    let c = 0.5 / params.delta();
    let psi = |x: f64| digamma(x).expect("positive argument");
    -(2.0 * LN_2 - psi(c) + psi(0.5 + c)) / params.delta()
}

/// `α(λ) = Γ((λ−1)/Δ) / Γ((λ+1)/Δ)` for complex λ.
pub fn alpha_complex(params: &ModelParams, lambda: Complex64) -> Result<Complex64> {
    let delta = params.delta();
    let a = (lambda - 1.0) / delta;
    if is_nonpositive_integer(a) {
        return Err(Error::Pole {
            what: "α",
            lambda,
            pole: lambda.re,
        });
    }
    if a.im.abs() >= ASYMPTOTIC_IMAG {
        return Ok(ln_gamma_shift_ratio_asymptotic(a, 2.0 / delta).exp());
    }
    gamma_ratio_complex(a, (lambda + 1.0) / delta)
}

/// `α(λ)` on the real axis, with the sign of each gamma function tracked.
pub fn alpha(params: &ModelParams, lambda: f64) -> Result<f64> {
    let delta = params.delta();
    let a = (lambda - 1.0) / delta;
    if a <= 0.0 && a == a.round() {
        return Err(Error::Pole {
            what: "α",
            lambda: real(lambda),
            pole: lambda,
        });
    }
    gamma_ratio(a, (lambda + 1.0) / delta)
}

/// Inhomogeneity of the ω̃₂ equation, `φ(λ) = α(λ)[1/(λ−1) − 1/λ − ω₁(λ)]`.
pub fn phi_complex(params: &ModelParams, lambda: Complex64) -> Result<Complex64> {
    for pole in [0.0, 1.0] {
        if lambda == real(pole) {
            return Err(Error::Pole {
                what: "φ",
                lambda,
                pole,
            });
        }
    }
    let bracket = 1.0 / (lambda - 1.0) - 1.0 / lambda - omega1_inf_complex(params, lambda)?;
    Ok(alpha_complex(params, lambda)? * bracket)
}

pub fn phi(params: &ModelParams, lambda: f64) -> Result<f64> {
    Ok(phi_complex(params, real(lambda))?.re)
}

/// B_0, B_2, ..., B_24.
const BERNOULLI_EVEN: [f64; 13] = [
    1.0,
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
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Below this |λ| the n = 3 closed form is evaluated by its Taylor series.
const O3_SERIES_RADIUS: f64 = 0.1;

/// Taylor coefficients in u = λ² of
/// `1/(3λ²(4λ²−1)²) − (4π²/3)/sin²(2πλ)`, whose 1/λ² parts cancel.
fn o3_series_coefficients() -> Vec<f64> {
    let mut factorial = 1.0;
    let mut coeffs = Vec::new();
    for (k, bernoulli) in BERNOULLI_EVEN.iter().enumerate().skip(1) {
        let m = 2 * k;
        factorial *= ((m - 1) * m) as f64;
        // 1/sin²x = Σ_k s_k x^{2k−2}
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let s_k = sign * (m as f64 - 1.0) * 2f64.powi(m as i32) * bernoulli / factorial;
        let rational = (k as f64 + 1.0) * 4f64.powi(k as i32) / 3.0;
        let trig = 4.0 * PI * PI / 3.0 * s_k * (2.0 * PI).powi(m as i32 - 2);
        coeffs.push(rational - trig);
    }
    coeffs
}

/// Exact ω̃₂(λ) for n = 3:
/// `−(λ²(4λ²−1)² − 9)/(27λ²(4λ²−1)²) + c₁/sin²(2πλ) + c₂` with `c₁ = −4π²/3`,
/// `c₂ = 1/27`. The removable singularity at 0 is handled by a Taylor series.
pub fn closed_form_o3(lambda: f64) -> Result<f64> {
    if lambda.abs() < O3_SERIES_RADIUS {
        let u = lambda * lambda;
        return Ok(o3_series_coefficients()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * u + c));
    }
    let s = sin_pi(2.0 * lambda);
    if s == 0.0 {
        return Err(Error::Pole {
            what: "ω̃₂ (n = 3)",
            lambda: real(lambda),
            pole: lambda,
        });
    }
    let q = 4.0 * lambda * lambda - 1.0;
    Ok(1.0 / (3.0 * lambda * lambda * q * q) - 4.0 * PI * PI / (3.0 * s * s))
}

/// The ω(λ) function of the spin-½ chain,
/// `(λ²−1) d/dλ log[Γ(1+λ/2)Γ(½−λ/2) / (Γ(1−λ/2)Γ(½+λ/2))] + ½`.
pub fn su2_omega(lambda: f64) -> Result<f64> {
    let x = 0.5 * lambda;
    let log_derivative =
        0.5 * (digamma(1.0 + x)? - digamma(0.5 - x)? + digamma(1.0 - x)? - digamma(0.5 + x)?);
    Ok((lambda * lambda - 1.0) * log_derivative + 0.5)
}

/// `ω₁(λ) = (1 − 2ω(λ))/(λ² − 1)` for n = 4.
pub fn closed_form_o4_omega1(lambda: f64) -> Result<f64> {
    if (lambda.abs() - 1.0).abs() < 1e-12 {
        return Err(Error::Pole {
            what: "ω₁ (n = 4)",
            lambda: real(lambda),
            pole: lambda.signum(),
        });
    }
    Ok((1.0 - 2.0 * su2_omega(lambda)?) / (lambda * lambda - 1.0))
}

/// Exact ω̃₂(λ) = ω₁(λ)²/4 for n = 4.
pub fn closed_form_o4(lambda: f64) -> Result<f64> {
    let w = closed_form_o4_omega1(lambda)?;
    Ok(0.25 * w * w)
}

/// Numerical representation used to solve for ω̃₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega2Strategy {
    /// `S(λ) = Σ_{j≥1} φ(λ + jΔ)` solves the equation up to a Δ-periodic
    /// function. The sum is taken in pairs of consecutive terms (which
    /// cancels the alternating part of the tail) and accelerated by
    /// Richardson extrapolation in the tail exponents `2/Δ + k`. The
    /// periodic correction removes the pole of S at 0 (its principal part is
    /// read off on a small circle) and, for Δ > 1, places the compensating
    /// pole at 1 − Δ, so that the result decays at `±i∞`.
    ShiftedSeries,
    /// Cauchy integral along the vertical line `Re ν = a` inside the
    /// pole-free window `0 < a < min(1, Δ)` of φ:
    /// `ω̃₂(λ) = −(1/2Δ) ∫ φ(a+iy)[cot(π(a+iy−λ)/Δ) − κ cot(π(1−λ)/Δ)] dy`
    /// for `a − Δ < Re λ < a`, where κ = 1 when Δ > 1 (the pole at 1 − Δ
    /// then lies in the strip) and 0 otherwise. The line never meets a real
    /// pole of φ, so no principal values are needed; the κ term is the
    /// periodic completion fixed by decay at `±i∞`.
    ContourIntegral,
}

impl Omega2Strategy {
    pub const ALL: [Omega2Strategy; 2] = [Omega2Strategy::ContourIntegral, Omega2Strategy::ShiftedSeries];

    pub fn name(&self) -> &'static str {
        match self {
            Omega2Strategy::ShiftedSeries => "shifted_series",
            Omega2Strategy::ContourIntegral => "contour_integral",
        }
    }
}

/// Tuning of the ω̃₂ solvers.
#[derive(Debug, Clone, Copy)]
pub struct Omega2Options {
    pub strategy: Omega2Strategy,
    pub quad: QuadConfig,
    /// Pair counts 8·2^l, l = 0..levels, feed the Richardson table.
    pub series_levels: usize,
    /// Trapezoid points on the circle around λ = 0.
    pub circle_points: usize,
}

impl Default for Omega2Options {
    fn default() -> Self {
        Self {
            strategy: Omega2Strategy::ContourIntegral,
            quad: QuadConfig::default(),
            series_levels: 9,
            circle_points: 32,
        }
    }
}

impl Omega2Options {
    pub fn with_strategy(strategy: Omega2Strategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }
}

/// Difference-equation residual `|ω̃₂(λ−Δ) − ω̃₂(λ) − φ(λ)|` at a complex λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSample {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub residual: f64,
}

/// Solution of the ω̃₂ equation at the homogeneous point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Omega2Solution {
    pub n: usize,
    pub method: Omega2Strategy,
    pub kind: Omega2Kind,
    /// ω̃₂(0); vanishes for n ≥ 5.
    pub value_at_0: f64,
    /// ω̃₂′(0).
    pub derivative_at_0: f64,
    /// Estimated absolute error of the reported observable.
    pub error_estimate: f64,
    pub residual_profile: Vec<ResidualSample>,
    /// `(Im λ, |ω̃₂(λ)|)` along a vertical line, for the decay check.
    pub tail: Vec<(f64, f64)>,
}

impl Omega2Solution {
    /// ω̃₂(0) for n = 3, 4 and ω̃₂′(0) for n ≥ 5.
    pub fn observable(&self) -> f64 {
        match self.kind {
            Omega2Kind::Value => self.value_at_0,
            Omega2Kind::Derivative => self.derivative_at_0,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residual_profile
            .iter()
            .map(|s| s.residual)
            .fold(0.0, f64::max)
    }
}

/// Width of the pole-free window `(0, min(1, Δ))` of φ.
fn window(params: &ModelParams) -> f64 {
    params.delta().min(1.0)
}

/// The compensating pole at 1 − Δ is needed when it falls inside the strip.
fn has_boundary_pole(params: &ModelParams) -> bool {
    params.delta() > 1.0
}

/// Check points for the difference equation: `λ = w/2 + iy`.
const CHECK_IMAG: [f64; 5] = [-1.1, -0.35, 0.2, 0.6, 1.7];

/// The vertical-line Cauchy representation with offset `a`.
struct ContourRepresentation<'a> {
    params: &'a ModelParams,
    offset: f64,
    boundary_pole: bool,
    quad: QuadConfig,
}

impl<'a> ContourRepresentation<'a> {
    fn new(params: &'a ModelParams, offset: f64, quad: QuadConfig) -> Self {
        Self {
            params,
            offset,
            boundary_pole: has_boundary_pole(params),
            quad,
        }
    }

    /// `∫ φ(a+iy) k(a+iy) dy` over the real line, with `y = s·t/(1−t²)`.
    /// For real λ the integrand is conjugation symmetric and only y ≥ 0 is
    /// integrated.
    fn line_integral<K>(&self, kernel: K, symmetric: bool) -> Result<(Complex64, f64)>
    where
        K: Fn(Complex64) -> Complex64,
    {
        let scale = self.params.delta().max(1.0);
        let integrand = |t: f64| {
            let y = scale * t / (1.0 - t * t);
            let jac = scale * (1.0 + t * t) / ((1.0 - t * t) * (1.0 - t * t));
            let nu = Complex64::new(self.offset, y);
            match phi_complex(self.params, nu) {
                Ok(f) => f * kernel(nu) * jac,
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            }
        };
        if symmetric {
            let r = integrate(integrand, 0.0, 1.0, &self.quad)?;
            Ok((real(2.0 * r.value.re), 2.0 * r.error))
        } else {
            let r = integrate(integrand, -1.0, 1.0, &self.quad)?;
            Ok((r.value, r.error))
        }
    }

    fn boundary_term(&self, kernel: fn(Complex64) -> Complex64, lambda: Complex64) -> Complex64 {
        if self.boundary_pole {
            kernel((1.0 - lambda) / self.params.delta())
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    fn check_strip(&self, lambda: Complex64) -> Result<()> {
        let delta = self.params.delta();
        if lambda.re <= self.offset - delta || lambda.re >= self.offset {
            return Err(Error::Invalid(format!(
                "λ = {lambda} lies outside the strip ({}, {}) of this representation",
                self.offset - delta,
                self.offset
            )));
        }
        Ok(())
    }

    fn value(&self, lambda: Complex64) -> Result<(Complex64, f64)> {
        self.check_strip(lambda)?;
        let delta = self.params.delta();
        let boundary = self.boundary_term(pi_cot_pi, lambda);
        let (integral, err) = self.line_integral(
            |nu| pi_cot_pi((nu - lambda) / delta) - boundary,
            lambda.im == 0.0,
        )?;
        let pref = -1.0 / (2.0 * PI * delta);
        Ok((integral * pref, err * pref.abs()))
    }

    fn derivative(&self, lambda: Complex64) -> Result<(Complex64, f64)> {
        self.check_strip(lambda)?;
        let delta = self.params.delta();
        let boundary = self.boundary_term(pi2_csc2_pi, lambda);
        let (integral, err) = self.line_integral(
            |nu| pi2_csc2_pi((nu - lambda) / delta) - boundary,
            lambda.im == 0.0,
        )?;
        let pref = -1.0 / (2.0 * PI * delta * delta);
        Ok((integral * pref, err * pref.abs()))
    }
}

fn solve_contour(params: &ModelParams, options: &Omega2Options) -> Result<Omega2Solution> {
    let w = window(params);
    let delta = params.delta();
    let main = ContourRepresentation::new(params, 0.5 * w, options.quad);
    let (value, value_err) = main.value(real(0.0))?;
    let (derivative, derivative_err) = main.derivative(real(0.0))?;

    // An independent offset gives the same function; the spread is part of
    // the error estimate.
    let other = ContourRepresentation::new(params, 0.3 * w, options.quad);
    let kind = Omega2Kind::for_n(params.n());
    let (spread, quad_err) = match kind {
        Omega2Kind::Value => ((other.value(real(0.0))?.0 - value).norm(), value_err),
        Omega2Kind::Derivative => (
            (other.derivative(real(0.0))?.0 - derivative).norm(),
            derivative_err,
        ),
    };

    let right = ContourRepresentation::new(params, 0.75 * w, options.quad);
    let left = ContourRepresentation::new(params, 0.25 * w, options.quad);
    let mut residual_profile = Vec::new();
    for y in CHECK_IMAG {
        let lambda = Complex64::new(0.5 * w, y);
        let shifted = left.value(lambda - delta)?.0;
        let here = right.value(lambda)?.0;
        let residual = (shifted - here - phi_complex(params, lambda)?).norm();
        residual_profile.push(ResidualSample {
            lambda_re: lambda.re,
            lambda_im: lambda.im,
            residual,
        });
    }

    // The decay check only needs the magnitude, so an absolute tolerance
    // far below the sampled values suffices.
    let coarse = ContourRepresentation::new(
        params,
        0.5 * w,
        QuadConfig {
            abs_tol: options.quad.abs_tol.max(1e-12),
            ..options.quad
        },
    );
    let tail = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&y| Ok((y, coarse.value(Complex64::new(0.0, y))?.0.norm())))
        .collect::<Result<Vec<_>>>()?;

    Ok(Omega2Solution {
        n: params.n(),
        method: Omega2Strategy::ContourIntegral,
        kind,
        value_at_0: value.re,
        derivative_at_0: derivative.re,
        error_estimate: spread.max(quad_err),
        residual_profile,
        tail,
    })
}

/// `Σ_{j≥1} φ(μ + jΔ)` with its extrapolation error estimate.
fn shifted_sum(params: &ModelParams, mu: Complex64, levels: usize) -> Result<(Complex64, f64)> {
    const BASE_PAIRS: usize = 8;
    let delta = params.delta();
    let mut partial = Vec::with_capacity(levels + 1);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut next_mark = BASE_PAIRS;
    let last = BASE_PAIRS << levels;
    for m in 1..=last {
        let j = 2 * m;
        sum += phi_complex(params, mu + (j - 1) as f64 * delta)?
            + phi_complex(params, mu + j as f64 * delta)?;
        if m == next_mark {
            partial.push(sum);
            next_mark *= 2;
        }
    }
    // Richardson: the tail after M pairs behaves as M^{-2/Δ}(d₀ + d₁/M + ...).
    let mut table = partial;
    let mut estimate = f64::INFINITY;
    let mut best = *table.last().expect("at least one level");
    for k in 0..levels {
        let factor = 2f64.powf(2.0 / delta + k as f64);
        let next: Vec<Complex64> = table
            .windows(2)
            .map(|w| (w[1] * factor - w[0]) / (factor - 1.0))
            .collect();
        let change = (next[next.len() - 1] - table[table.len() - 1]).norm();
        if change < estimate {
            estimate = change;
            best = next[next.len() - 1];
        }
        table = next;
        if table.len() < 2 {
            break;
        }
    }
    Ok((best, estimate))
}

/// Distance from 0 to the nearest other pole of the shifted sum.
fn nearest_other_pole(params: &ModelParams) -> f64 {
    let delta = params.delta();
    let mut d = delta.min(1.0);
    let boundary = (1.0 - delta).abs();
    if boundary > 1e-12 {
        d = d.min(boundary);
    }
    d
}

fn solve_series(params: &ModelParams, options: &Omega2Options) -> Result<Omega2Solution> {
    let delta = params.delta();
    let radius = 0.25 * nearest_other_pole(params);
    let m = options.circle_points;
    let points: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / m as f64))
        .collect();
    let mut values = Vec::with_capacity(m);
    let mut sum_err: f64 = 0.0;
    for &mu in &points {
        let (s, e) = shifted_sum(params, mu, options.series_levels)?;
        values.push(s);
        sum_err = sum_err.max(e);
    }
    // Laurent coefficients a_k = (1/M) Σ S(μ_j) μ_j^{−k}.
    let laurent = |k: i32| -> Complex64 {
        values
            .iter()
            .zip(&points)
            .map(|(s, mu)| s * mu.powi(-k))
            .sum::<Complex64>()
            / m as f64
    };
    let (c2, c1, a0, a1) = (laurent(-2), laurent(-1), laurent(0), laurent(1));
    let spurious = laurent(-3).norm();
    let k2 = (PI / delta).powi(2);

    let mut value = a0 - c2 * k2 / 3.0;
    let mut derivative = a1 + c1 * k2 / 3.0;
    if has_boundary_pole(params) {
        value -= c1 * pi_cot_pi(real(1.0 / delta)) / delta;
        derivative -= c1 * pi2_csc2_pi(real(1.0 / delta)) / (delta * delta);
    }

    // The periodic part cancels in the difference equation, so the residual
    // probes the series evaluation itself.
    let w = window(params);
    let mut residual_profile = Vec::new();
    for y in CHECK_IMAG {
        let lambda = Complex64::new(0.5 * w, y);
        let shifted = shifted_sum(params, lambda - delta, options.series_levels)?.0;
        let here = shifted_sum(params, lambda, options.series_levels)?.0;
        let residual = (shifted - here - phi_complex(params, lambda)?).norm();
        residual_profile.push(ResidualSample {
            lambda_re: lambda.re,
            lambda_im: lambda.im,
            residual,
        });
    }

    let periodic = |lambda: Complex64| {
        let x = lambda / delta;
        let mut p = c1 / delta * pi_cot_pi(x) + c2 / (delta * delta) * pi2_csc2_pi(x);
        if has_boundary_pole(params) {
            p += c1 / delta * pi_cot_pi((1.0 - lambda) / delta);
        }
        p
    };
    let tail = [2.0, 5.0, 10.0]
        .iter()
        .map(|&y| {
            let lambda = Complex64::new(0.0, y);
            let s = shifted_sum(params, lambda, options.series_levels)?.0;
            Ok((y, (s - periodic(lambda)).norm()))
        })
        .collect::<Result<Vec<_>>>()?;

    // Reading a Taylor coefficient of order k off the circle amplifies the
    // series error by radius^{-k}; a nonzero coefficient of μ^{-3} would
    // signal a pole the correction does not account for.
    let scale = match Omega2Kind::for_n(params.n()) {
        Omega2Kind::Value => 1.0,
        Omega2Kind::Derivative => 1.0 / radius,
    };
    Ok(Omega2Solution {
        n: params.n(),
        method: Omega2Strategy::ShiftedSeries,
        kind: Omega2Kind::for_n(params.n()),
        value_at_0: value.re,
        derivative_at_0: derivative.re,
        error_estimate: sum_err * scale + spurious,
        residual_profile,
        tail,
    })
}

/// Solves the ω̃₂ equation with the requested representation.
pub fn solve_omega2(params: &ModelParams, options: &Omega2Options) -> Result<Omega2Solution> {
    match options.strategy {
        Omega2Strategy::ContourIntegral => solve_contour(params, options),
        Omega2Strategy::ShiftedSeries => solve_series(params, options),
    }
}

/// Evaluates ω̃₂ at a real λ in `(min(1,Δ)/2 − Δ, min(1,Δ)/2)` from the contour representation.
pub fn omega2_tilde(params: &ModelParams, lambda: f64, quad: &QuadConfig) -> Result<f64> {
    let w = window(params);
    ContourRepresentation::new(params, 0.5 * w, *quad)
        .value(real(lambda))
        .map(|(v, _)| v.re)
}

/// Where the ω̃₂ observable of the thermodynamic row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega2Source {
    /// Closed forms for n = 3, 4 and the contour solver otherwise.
    Auto,
    Numeric(Omega2Strategy),
}

/// ω̃₂ observable at the homogeneous point from the selected source.
pub fn omega2_observable(params: &ModelParams, source: Omega2Source) -> Result<f64> {
    match (source, params.n()) {
        (Omega2Source::Auto, 3) => closed_form_o3(0.0),
        (Omega2Source::Auto, 4) => closed_form_o4(0.0),
        (Omega2Source::Auto, _) => Ok(solve_omega2(params, &Omega2Options::default())?.observable()),
        (Omega2Source::Numeric(strategy), _) => {
            Ok(solve_omega2(params, &Omega2Options::with_strategy(strategy))?.observable())
        }
    }
}

/// The L → ∞ table row: `Ω₂` from the ω̃₂ observable through the inverse
/// branch map, `Ω₁ = 1 + ω₁(0) + Ω₂/Δ`, then the ρ coefficients.
pub fn thermo_row(params: &ModelParams, source: Omega2Source) -> Result<TableRow> {
    let omega2 = omega2_observable(params, source)?;
    Ok(thermo_row_from(params, omega2))
}

/// The L → ∞ row for a given ω̃₂ observable.
pub fn thermo_row_from(params: &ModelParams, omega2: f64) -> TableRow {
    let big_omega2 = big_omega2_from_omega2(params, omega2);
    let mut row = row_from_observables(params, ChainLength::Infinite, ground_energy_inf(params), big_omega2);
    row.omega2 = omega2;
    row
}
