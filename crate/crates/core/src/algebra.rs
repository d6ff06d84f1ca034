//! The O(n) operators I, P, E, the R-matrix and its algebraic identities.
//!
//! Two-site basis: |a,c⟩ (a, c = 1..n) has flat index (a−1)·n + (c−1).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, real_matrix, DenseMatrix, EmbeddedPair, StateVector};

/// Model constants: local dimension `n` and `Δ = (n−2)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    delta: f64,
}

impl ModelParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidN(n));
        }
        Ok(Self {
            n,
            delta: (n as f64 - 2.0) / 2.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Dimension of the two-site space, n².
    pub fn pair_dim(&self) -> usize {
        self.n * self.n
    }
}

/// The identity, permutation and Temperley–Lieb operators on two sites.
#[derive(Debug, Clone)]
pub struct BasisOps {
    pub identity: DenseMatrix,
    pub permutation: DenseMatrix,
    pub temperley_lieb: DenseMatrix,
}

impl BasisOps {
    /// `x·I + y·P + z·E`.
    pub fn combine(&self, x: Complex64, y: Complex64, z: Complex64) -> DenseMatrix {
        self.identity.map(|v| v * x) + self.permutation.map(|v| v * y) + self.temperley_lieb.map(|v| v * z)
    }

    pub fn as_array(&self) -> [&DenseMatrix; 3] {
        [&self.identity, &self.permutation, &self.temperley_lieb]
    }
}

/// I, P and E with `P[a·n+c, b·n+d] = δ_ad δ_cb` and
/// `E[a·n+c, b·n+d] = δ_{a,n+1−c} δ_{b,n+1−d}` (1-based labels).
pub fn basis_ops(params: &ModelParams) -> BasisOps {
    let n = params.n;
    let d = n * n;
    let split = |k: usize| (k / n, k % n);
    let identity = real_matrix(d, |r, s| if r == s { 1.0 } else { 0.0 });
    let permutation = real_matrix(d, |r, s| {
        let ((a, c), (b, dd)) = (split(r), split(s));
        if a == dd && c == b {
            1.0
        } else {
            0.0
        }
    });
    let temperley_lieb = real_matrix(d, |r, s| {
        let ((a, c), (b, dd)) = (split(r), split(s));
        if a + c == n - 1 && b + dd == n - 1 {
            1.0
        } else {
            0.0
        }
    });
    BasisOps {
        identity,
        permutation,
        temperley_lieb,
    }
}

/// The unnormalized two-site singlet Σ_a |a, n+1−a⟩.
pub fn singlet(params: &ModelParams) -> StateVector {
    let n = params.n;
    StateVector::from_fn(n * n, |k, _| {
        if k / n + k % n == n - 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// The crossing matrix V: ones on the anti-diagonal.
pub fn crossing_matrix(params: &ModelParams) -> DenseMatrix {
    let n = params.n;
    real_matrix(n, |i, j| if i + j == n - 1 { 1.0 } else { 0.0 })
}

/// Coefficients of I, P, E in R(λ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RCoefficients {
    pub identity: Complex64,
    pub permutation: Complex64,
    pub temperley_lieb: Complex64,
}

/// Tolerance for deciding that a spectral parameter sits on a pole.
const POLE_TOL: f64 = 1e-12;

pub(crate) fn check_poles(what: &'static str, lambda: Complex64, poles: &[f64]) -> Result<()> {
    for &pole in poles {
        if (lambda - pole).norm() <= POLE_TOL * pole.abs().max(1.0) {
            return Err(Error::Pole { what, lambda, pole });
        }
    }
    Ok(())
}

/// `R(λ) = λ/(λ+1) I + 1/(λ+1) P − λ/((λ+1)(λ+Δ)) E`.
pub fn r_coefficients(params: &ModelParams, lambda: Complex64) -> Result<RCoefficients> {
    let delta = params.delta;
    check_poles("R-matrix", lambda, &[-1.0, -delta])?;
    let one = Complex64::new(1.0, 0.0);
    Ok(RCoefficients {
        identity: lambda / (lambda + 1.0),
        permutation: one / (lambda + 1.0),
        temperley_lieb: -lambda / ((lambda + 1.0) * (lambda + delta)),
    })
}

/// Derivatives of the R-matrix coefficients with respect to λ.
pub fn r_coefficient_derivatives(params: &ModelParams, lambda: Complex64) -> Result<RCoefficients> {
    let delta = params.delta;
    check_poles("R-matrix", lambda, &[-1.0, -delta])?;
    let p1 = (lambda + 1.0) * (lambda + 1.0);
    let pd = (lambda + delta) * (lambda + delta);
    Ok(RCoefficients {
        identity: 1.0 / p1,
        permutation: -1.0 / p1,
        temperley_lieb: -(delta - lambda * lambda) / (p1 * pd),
    })
}

/// An R-matrix evaluated at a spectral parameter.
#[derive(Debug, Clone)]
pub struct RMatrixEval {
    pub lambda: Complex64,
    pub matrix: DenseMatrix,
}

pub fn r_matrix(params: &ModelParams, lambda: Complex64) -> Result<RMatrixEval> {
    let c = r_coefficients(params, lambda)?;
    let ops = basis_ops(params);
    Ok(RMatrixEval {
        lambda,
        matrix: ops.combine(c.identity, c.permutation, c.temperley_lieb),
    })
}

/// `(λ+1)(λ+Δ) R(λ) = λ(λ+Δ) I + (λ+Δ) P − λ E`, entire in λ.
pub fn r_matrix_polynomial(params: &ModelParams, lambda: Complex64) -> DenseMatrix {
    let delta = params.delta;
    basis_ops(params).combine(lambda * (lambda + delta), lambda + delta, -lambda)
}

/// Analytic `dR/dλ`.
pub fn r_matrix_derivative(params: &ModelParams, lambda: Complex64) -> Result<DenseMatrix> {
    let c = r_coefficient_derivatives(params, lambda)?;
    Ok(basis_ops(params).combine(c.identity, c.permutation, c.temperley_lieb))
}

/// The crossing factor `ϱ(λ) = −λ(1−λ−Δ)/((λ+1)(λ+Δ))`.
pub fn crossing_factor(params: &ModelParams, lambda: Complex64) -> Result<Complex64> {
    let delta = params.delta;
    check_poles("crossing factor", lambda, &[-1.0, -delta])?;
    Ok(-lambda * (1.0 - lambda - delta) / ((lambda + 1.0) * (lambda + delta)))
}

/// Transposition in the second tensor factor:
/// `M^{t2}[(a,c),(b,d)] = M[(a,d),(b,c)]`.
pub fn partial_transpose_second(m: &DenseMatrix, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n * n, n * n, |r, s| {
        let (a, c) = (r / n, r % n);
        let (b, d) = (s / n, s % n);
        m[(a * n + d, b * n + c)]
    })
}

/// The identities satisfied by the R-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    YangBaxter,
    Regularity,
    Unitarity,
    Crossing,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 4] = [
        IdentityKind::YangBaxter,
        IdentityKind::Regularity,
        IdentityKind::Unitarity,
        IdentityKind::Crossing,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityKind::YangBaxter => "yang_baxter",
            IdentityKind::Regularity => "regularity",
            IdentityKind::Unitarity => "unitarity",
            IdentityKind::Crossing => "crossing",
        }
    }
}

/// Outcome of an identity check: max-norm residual and the full difference
/// `LHS − RHS` for diagnosis.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub kind: IdentityKind,
    pub residual: f64,
    pub difference: DenseMatrix,
}

/// Evaluates one identity at the given spectral parameters (`mu` is used by
/// Yang–Baxter only).
///
/// * Yang–Baxter: `R12(λ−μ) R13(λ) R23(μ) = R23(μ) R13(λ) R12(λ−μ)` on three sites.
/// * Regularity: `R(0) = P`.
/// * Unitarity: `R12(λ) R21(−λ) = I` with `R21 = P R12 P`.
/// * Crossing: `R(λ) = ϱ(λ) (V⊗I) R^{t2}(−λ−Δ) (V⊗I)`.
pub fn check_identity(
    params: &ModelParams,
    kind: IdentityKind,
    lambda: Complex64,
    mu: Complex64,
) -> Result<IdentityCheck> {
    let n = params.n;
    let ops = basis_ops(params);
    let difference = match kind {
        IdentityKind::YangBaxter => {
            let r_diff = r_matrix(params, lambda - mu)?.matrix;
            let r_lam = r_matrix(params, lambda)?.matrix;
            let r_mu = r_matrix(params, mu)?.matrix;
            let r12 = EmbeddedPair::between(&r_diff, n, 3, 1, 2)?;
            let r13 = EmbeddedPair::between(&r_lam, n, 3, 1, 3)?;
            let r23 = EmbeddedPair::between(&r_mu, n, 3, 2, 3)?;
            let lhs = r12.left_mul(&r13.left_mul(&r23.to_dense()));
            let rhs = r23.left_mul(&r13.left_mul(&r12.to_dense()));
            lhs - rhs
        }
        IdentityKind::Regularity => r_matrix(params, Complex64::new(0.0, 0.0))?.matrix - &ops.permutation,
        IdentityKind::Unitarity => {
            let r12 = r_matrix(params, lambda)?.matrix;
            let r21 = &ops.permutation * r_matrix(params, -lambda)?.matrix * &ops.permutation;
            r12 * r21 - &ops.identity
        }
        IdentityKind::Crossing => {
            let delta = params.delta;
            let factor = crossing_factor(params, lambda)?;
            let shifted = r_matrix(params, -lambda - delta)?.matrix;
            let v = crate::linalg::kron(&crossing_matrix(params), &DenseMatrix::identity(n, n));
            let rhs = (&v * partial_transpose_second(&shifted, n) * &v).map(|z| z * factor);
            r_matrix(params, lambda)?.matrix - rhs
        }
    };
    Ok(IdentityCheck {
        kind,
        residual: max_abs(&difference),
        difference,
    })
}

/// Bond term `h = P·R′(0)` from the analytic derivative of the coefficients;
/// equals `−(I − P + E/Δ)`.
pub fn hamiltonian_density(params: &ModelParams) -> DenseMatrix {
    let ops = basis_ops(params);
    let derivative = r_matrix_derivative(params, Complex64::new(0.0, 0.0))
        .expect("λ = 0 is never a pole of R");
    &ops.permutation * derivative
}

/// Distance kept between every R-matrix argument and its poles `−1, −Δ`
/// when spectral parameters are drawn at random.
pub const POLE_MARGIN: f64 = 0.3;

fn clear_of_poles(x: f64, delta: f64) -> bool {
    (x + 1.0).abs() > POLE_MARGIN && (x + delta).abs() > POLE_MARGIN
}

/// Draws (λ, μ) uniformly from [−2, 2]² such that every argument entering
/// the identity checks (λ, μ, λ−μ, −λ, −λ−Δ) keeps [`POLE_MARGIN`] from the poles.
pub fn sample_spectral_pair(rng: &mut impl Rng, delta: f64) -> (f64, f64) {
    loop {
        let lambda: f64 = rng.random_range(-2.0..2.0);
        let mu: f64 = rng.random_range(-2.0..2.0);
        let args = [lambda, mu, lambda - mu, -lambda, -lambda - delta];
        if args.iter().all(|&x| clear_of_poles(x, delta)) {
            return (lambda, mu);
        }
    }
}

/// Residual of one identity at one sample point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub kind: IdentityKind,
    pub lambda: f64,
    pub mu: f64,
    pub residual: f64,
}

/// Identity residuals at random spectral points plus the Hamiltonian check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: usize,
    pub samples: Vec<IdentityResidual>,
    /// `max |P·R′(0) + (I − P + E/Δ)|`.
    pub hamiltonian_residual: f64,
}

impl IdentityReport {
    /// Largest residual of one identity over all samples.
    pub fn max_residual(&self, kind: IdentityKind) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.kind == kind)
            .fold(0.0, |acc, s| acc.max(s.residual))
    }

    /// Largest residual over every identity and the Hamiltonian check.
    pub fn worst(&self) -> f64 {
        IdentityKind::ALL
            .iter()
            .fold(self.hamiltonian_residual, |acc, &k| acc.max(self.max_residual(k)))
    }
}

/// Checks every identity at `samples` random points drawn with
/// [`sample_spectral_pair`] from a generator seeded with `seed`.
pub fn verify_identities(params: &ModelParams, samples: usize, seed: u64) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residuals = Vec::with_capacity(samples * IdentityKind::ALL.len());
    for _ in 0..samples {
        let (lambda, mu) = sample_spectral_pair(&mut rng, params.delta);
        for kind in IdentityKind::ALL {
            let check = check_identity(params, kind, Complex64::new(lambda, 0.0), Complex64::new(mu, 0.0))?;
            residuals.push(IdentityResidual {
                kind,
                lambda,
                mu,
                residual: check.residual,
            });
        }
    }
    let ops = basis_ops(params);
    let expected = (&ops.identity - &ops.permutation + ops.temperley_lieb.map(|z| z / params.delta)).map(|z| -z);
    Ok(IdentityReport {
        n: params.n,
        samples: residuals,
        hamiltonian_residual: max_abs(&(hamiltonian_density(params) - expected)),
    })
}
