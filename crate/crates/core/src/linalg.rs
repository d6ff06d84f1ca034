//! Dense and matrix-free complex linear algebra: Kronecker products,
//! operators embedded on a pair of sites of a chain, partial traces and
//! ground-state eigensolvers (dense and Lanczos).
//!
//! Basis convention: a product state |s_1, ..., s_L⟩ with local states
//! s_k ∈ {0, ..., n-1} has flat index Σ_k s_k n^(L-k), i.e. site 1 is the
//! most significant digit. For two sites this is |a,c⟩ ↦ a·n + c.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Kronecker product, `(A⊗B)[(i·p+k),(j·q+l)] = A[i,j]·B[k,l]` for `B` of shape p×q.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

/// Largest entry modulus.
pub fn max_abs(m: &DenseMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `M - M†`.
pub fn hermitian_deviation(m: &DenseMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let d = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..d {
        for j in i..d {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Square matrix from real entries given row by row.
pub fn real_matrix(dim: usize, entries: impl Fn(usize, usize) -> f64) -> DenseMatrix {
    DenseMatrix::from_fn(dim, dim, |i, j| Complex64::new(entries(i, j), 0.0))
}

/// A Hermitian (or at least square) linear map given by its action on vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// Overwrites `y` with `A x`.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let d = self.nrows();
        for (i, yi) in y.iter_mut().enumerate().take(d) {
            let mut acc = ZERO;
            for (j, xj) in x.iter().enumerate() {
                acc += self[(i, j)] * xj;
            }
            *yi = acc;
        }
    }
}

/// Number of rows handed to one worker when applying operators in parallel.
#[cfg(feature = "parallel")]
const BLOCK: usize = 4096;

/// Fills `y[k] = row(k)` for every output index, in parallel when enabled.
/// Each entry is computed independently (gather form), so the result does
/// not depend on the number of threads.
pub(crate) fn fill_rows<F>(y: &mut [Complex64], row: F)
where
    F: Fn(usize) -> Complex64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        y.par_chunks_mut(BLOCK).enumerate().for_each(|(b, chunk)| {
            let offset = b * BLOCK;
            for (k, yk) in chunk.iter_mut().enumerate() {
                *yk = row(offset + k);
            }
        });
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (k, yk) in y.iter_mut().enumerate() {
            *yk = row(k);
        }
    }
}

/// Sparse rows of a two-site operator: for each row the nonzero `(column, value)` pairs.
fn sparse_rows(op: &DenseMatrix) -> Vec<Vec<(usize, Complex64)>> {
    (0..op.nrows())
        .map(|r| {
            (0..op.ncols())
                .filter(|&c| op[(r, c)] != ZERO)
                .map(|c| (c, op[(r, c)]))
                .collect()
        })
        .collect()
}

/// A two-site operator acting on sites `(first, second)` of a chain of
/// `length` sites with local dimension `n`, identity elsewhere.
///
/// The first tensor factor of the operator acts on `first`, the second on
/// `second`; the two sites need not be adjacent.
#[derive(Debug, Clone)]
pub struct EmbeddedPair {
    n: usize,
    length: usize,
    first: usize,
    second: usize,
    stride_first: usize,
    stride_second: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl EmbeddedPair {
    /// Embeds `op` on the nearest-neighbour pair `(i, i+1)` (1-based). For
    /// `i = L` the pair is `(L, 1)` and requires `periodic`.
    pub fn nearest_neighbour(
        op: &DenseMatrix,
        n: usize,
        length: usize,
        i: usize,
        periodic: bool,
    ) -> Result<Self> {
        if i == 0 || i > length {
            return Err(Error::SiteOutOfRange { site: i, length });
        }
        if i == length && !periodic {
            return Err(Error::NotPeriodic);
        }
        let next = if i == length { 1 } else { i + 1 };
        Self::between(op, n, length, i, next)
    }

    /// Embeds `op` on an arbitrary ordered pair of distinct sites (1-based).
    pub fn between(
        op: &DenseMatrix,
        n: usize,
        length: usize,
        first: usize,
        second: usize,
    ) -> Result<Self> {
        let d2 = n * n;
        if op.nrows() != d2 || op.ncols() != d2 {
            return Err(Error::Shape {
                expected: d2,
                rows: op.nrows(),
                cols: op.ncols(),
            });
        }
        for site in [first, second] {
            if site == 0 || site > length {
                return Err(Error::SiteOutOfRange { site, length });
            }
        }
        if first == second {
            return Err(Error::Invalid(format!(
                "pair sites must differ, got ({first}, {second})"
            )));
        }
        let stride = |site: usize| n.pow((length - site) as u32);
        Ok(Self {
            n,
            length,
            first,
            second,
            stride_first: stride(first),
            stride_second: stride(second),
            rows: sparse_rows(op),
        })
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.length as u32)
    }

    pub fn sites(&self) -> (usize, usize) {
        (self.first, self.second)
    }

    /// `(A x)[k]` for a single output index.
    #[inline]
    pub(crate) fn row_dot(&self, k: usize, x: &[Complex64]) -> Complex64 {
        let n = self.n;
        let a = (k / self.stride_first) % n;
        let c = (k / self.stride_second) % n;
        let base = k - a * self.stride_first - c * self.stride_second;
        let mut acc = ZERO;
        for &(col, v) in &self.rows[a * n + c] {
            let idx = base + (col / n) * self.stride_first + (col % n) * self.stride_second;
            acc += v * x[idx];
        }
        acc
    }

    /// Dense matrix of the embedded operator (small chains only).
    pub fn to_dense(&self) -> DenseMatrix {
        self.left_mul(&DenseMatrix::identity(self.dim(), self.dim()))
    }

    /// `A · M` computed column by column without forming `A`.
    pub fn left_mul(&self, m: &DenseMatrix) -> DenseMatrix {
        let d = self.dim();
        assert_eq!(m.nrows(), d, "left_mul dimension mismatch");
        let mut out = DenseMatrix::zeros(d, m.ncols());
        for j in 0..m.ncols() {
            let col: Vec<Complex64> = m.column(j).iter().copied().collect();
            for k in 0..d {
                out[(k, j)] = self.row_dot(k, &col);
            }
        }
        out
    }
}

impl LinearOperator for EmbeddedPair {
    fn dim(&self) -> usize {
        EmbeddedPair::dim(self)
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        fill_rows(y, |k| self.row_dot(k, x));
    }
}

/// A sum of pair operators on the same chain, applied matrix-free.
#[derive(Debug, Clone)]
pub struct PairSum {
    dim: usize,
    terms: Vec<EmbeddedPair>,
}

impl PairSum {
    pub fn new(terms: Vec<EmbeddedPair>) -> Result<Self> {
        let dim = terms
            .first()
            .map(|t| t.dim())
            .ok_or_else(|| Error::Invalid("empty operator sum".into()))?;
        if terms.iter().any(|t| t.dim() != dim) {
            return Err(Error::Invalid("terms act on different spaces".into()));
        }
        Ok(Self { dim, terms })
    }

    pub fn terms(&self) -> &[EmbeddedPair] {
        &self.terms
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut h = DenseMatrix::zeros(self.dim, self.dim);
        for t in &self.terms {
            h += t.to_dense();
        }
        h
    }
}

impl LinearOperator for PairSum {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        fill_rows(y, |k| self.terms.iter().map(|t| t.row_dot(k, x)).sum());
    }
}

/// Reduced density matrix of the sites `(first, second)` (1-based) for a
/// pure state on `length` sites of local dimension `n`:
/// `ρ[(a,c),(b,d)] = Σ_rest ψ[..a..c..] ψ*[..b..d..]`.
pub fn partial_trace_pair(
    state: &[Complex64],
    n: usize,
    length: usize,
    first: usize,
    second: usize,
) -> Result<DenseMatrix> {
    let dim = n.pow(length as u32);
    if state.len() != dim {
        return Err(Error::Shape {
            expected: dim,
            rows: state.len(),
            cols: 1,
        });
    }
    let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized { norm });
    }
    // The embedding machinery gives the strides; the operator itself is unused.
    let pair = EmbeddedPair::between(&DenseMatrix::zeros(n * n, n * n), n, length, first, second)?;
    let (sf, ss) = (pair.stride_first, pair.stride_second);
    let mut rho = DenseMatrix::zeros(n * n, n * n);
    for k in 0..dim {
        let a = (k / sf) % n;
        let c = (k / ss) % n;
        if a != 0 || c != 0 {
            continue;
        }
        // k enumerates the environment configurations with the pair digits zeroed.
        let amp: Vec<Complex64> = (0..n * n)
            .map(|p| state[k + (p / n) * sf + (p % n) * ss])
            .collect();
        for (r, ar) in amp.iter().enumerate() {
            if *ar == ZERO {
                continue;
            }
            for (s, as_) in amp.iter().enumerate() {
                rho[(r, s)] += ar * as_.conj();
            }
        }
    }
    Ok(rho)
}

/// Eigenpair approximation returned by the ground-state solvers.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub eigenvalue: f64,
    pub vector: StateVector,
    /// `‖H v − E v‖` evaluated explicitly.
    pub residual_norm: f64,
    /// Matrix-vector products (Lanczos) or 1 for a dense solve.
    pub iterations: usize,
}

/// Orthonormal basis of the (possibly degenerate) lowest eigenspace.
#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub energy: f64,
    pub states: Vec<SpectralResult>,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.states.len()
    }
}

/// Default largest dimension handed to the dense eigensolver.
pub const DENSE_CAP: usize = 4096;

/// Eigenvalues within this distance of the lowest one count as degenerate.
pub const DEGENERACY_WINDOW: f64 = 1e-8;

fn residual_norm(op: &dyn LinearOperator, v: &[Complex64], theta: f64) -> f64 {
    let mut w = vec![ZERO; v.len()];
    op.apply(v, &mut w);
    w.iter()
        .zip(v)
        .map(|(wi, vi)| (wi - vi * theta).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn check_dense_input(h: &DenseMatrix, cap: usize) -> Result<()> {
    if !h.is_square() {
        return Err(Error::Shape {
            expected: h.nrows(),
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    if h.nrows() > cap {
        return Err(Error::DimensionCap {
            dim: h.nrows(),
            cap,
        });
    }
    let deviation = hermitian_deviation(h);
    if deviation > 1e-13 * max_abs(h).max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Full spectrum of a Hermitian matrix, ascending, with eigenvectors as columns.
fn hermitian_eigen(h: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let d = h.nrows();
    let (values, vectors) = if h.iter().all(|z| z.im == 0.0) {
        let real = DMatrix::<f64>::from_fn(d, d, |i, j| h[(i, j)].re);
        let eig = real.symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let eig = h.clone().symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let cols: Vec<StateVector> = order.iter().map(|&i| vectors.column(i).into_owned()).collect();
    (sorted, DenseMatrix::from_columns(&cols))
}

/// Lowest eigenpair of a Hermitian matrix by full diagonalization.
pub fn ground_state_dense(h: &DenseMatrix, cap: usize) -> Result<SpectralResult> {
    let space = ground_space_dense(h, cap, 0.0)?;
    Ok(space.states.into_iter().next().expect("nonempty spectrum"))
}

/// Lowest eigenspace of a Hermitian matrix (eigenvalues within `window` of
/// the minimum) by full diagonalization.
pub fn ground_space_dense(h: &DenseMatrix, cap: usize, window: f64) -> Result<GroundSpace> {
    check_dense_input(h, cap)?;
    let (values, vectors) = hermitian_eigen(h);
    let energy = values[0];
    let states = values
        .iter()
        .enumerate()
        .take_while(|(k, &e)| *k == 0 || e - energy <= window)
        .map(|(k, &e)| {
            let v = vectors.column(k).into_owned();
            let residual_norm = residual_norm(h, v.as_slice(), e);
            SpectralResult {
                eigenvalue: e,
                vector: v,
                residual_norm,
                iterations: 1,
            }
        })
        .collect();
    Ok(GroundSpace { energy, states })
}

/// Settings of the restarted Lanczos eigensolver.
#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    /// Eigenvalue change between restarts accepted as converged.
    pub tol: f64,
    /// Target for `‖H v − θ v‖ / max(1, |θ|)`.
    pub residual_tol: f64,
    /// Budget of matrix-vector products.
    pub max_matvecs: usize,
    /// Krylov basis size before a restart.
    pub basis_cap: usize,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            residual_tol: 1e-12,
            max_matvecs: 20_000,
            basis_cap: 120,
            seed: 0x5eed,
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(v: &mut [Complex64], s: f64) {
    for z in v.iter_mut() {
        *z *= s;
    }
}

/// Removes the components along an orthonormal set (two passes, which keeps
/// the result orthogonal to working precision).
fn orthogonalize(w: &mut [Complex64], against: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for q in against {
            let c = dot(q, w);
            axpy(-c, q, w);
        }
    }
}

/// Lowest eigenvalue and eigenvector of the symmetric tridiagonal matrix
/// with diagonal `alpha` and off-diagonal `beta`.
fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let t = DMatrix::<f64>::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty tridiagonal");
    (eig.eigenvalues[idx], eig.eigenvectors.column(idx).iter().copied().collect())
}

fn random_start(dim: usize, seed: u64, deflate: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    orthogonalize(&mut v, deflate);
    let nv = norm(&v);
    scale(&mut v, 1.0 / nv);
    v
}

/// Lowest eigenpair of `op` restricted to the orthogonal complement of
/// `deflate` (an orthonormal set of eigenvectors already found).
fn lanczos_lowest(
    op: &dyn LinearOperator,
    config: &LanczosConfig,
    deflate: &[Vec<Complex64>],
    seed: u64,
) -> Result<SpectralResult> {
    let dim = op.dim();
    if dim < 2 {
        return Err(Error::Invalid("Lanczos needs dimension >= 2".into()));
    }
    let cap = config.basis_cap.clamp(2, dim - deflate.len());
    let mut v = random_start(dim, seed, deflate);
    let mut matvecs = 0usize;
    let mut previous = f64::INFINITY;
    let mut best = (f64::INFINITY, f64::INFINITY);
    let mut w = vec![ZERO; dim];

    loop {
        let mut basis: Vec<Vec<Complex64>> = vec![v.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut coeffs = Vec::new();

        for k in 0..cap {
            op.apply(&basis[k], &mut w);
            matvecs += 1;
            let a = dot(&basis[k], &w).re;
            alpha.push(a);
            orthogonalize(&mut w, deflate);
            orthogonalize(&mut w, &basis);
            let b = norm(&w);

            let last = k + 1 == cap || b < 1e-14 * a.abs().max(1.0);
            if last || k % 4 == 3 {
                let (theta, s) = tridiagonal_lowest(&alpha, &beta);
                coeffs = s;
                let estimate = b * coeffs[k].abs();
                if last || estimate <= 0.1 * config.residual_tol * theta.abs().max(1.0) {
                    break;
                }
            }
            beta.push(b);
            let mut next = w.clone();
            scale(&mut next, 1.0 / b);
            basis.push(next);
        }

        // Ritz vector of this cycle becomes the restart vector.
        let mut ritz = vec![ZERO; dim];
        for (q, c) in basis.iter().zip(&coeffs) {
            axpy(Complex64::new(*c, 0.0), q, &mut ritz);
        }
        orthogonalize(&mut ritz, deflate);
        let nr = norm(&ritz);
        scale(&mut ritz, 1.0 / nr);

        op.apply(&ritz, &mut w);
        matvecs += 1;
        let rq = dot(&ritz, &w).re;
        let residual = w
            .iter()
            .zip(&ritz)
            .map(|(wi, vi)| (wi - vi * rq).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual < best.1 {
            best = (rq, residual);
        }
        let converged = residual <= config.residual_tol * rq.abs().max(1.0)
            && (rq - previous).abs() <= config.tol * rq.abs().max(1.0);
        if converged {
            return Ok(SpectralResult {
                eigenvalue: rq,
                vector: StateVector::from_vec(ritz),
                residual_norm: residual,
                iterations: matvecs,
            });
        }
        if matvecs >= config.max_matvecs {
            return Err(Error::NoConvergence {
                matvecs,
                estimate: best.0,
                residual: best.1,
            });
        }
        previous = rq;
        v = ritz;
    }
}

/// Lowest eigenpair of a Hermitian operator by restarted Lanczos with full
/// reorthogonalization. Deterministic for a fixed seed.
pub fn ground_state_lanczos(
    op: &dyn LinearOperator,
    config: &LanczosConfig,
) -> Result<SpectralResult> {
    lanczos_lowest(op, config, &[], config.seed)
}

/// Lowest eigenspace by Lanczos with deflation: after each eigenvector is
/// found, the next run works in its orthogonal complement and the vector is
/// accepted while its eigenvalue stays within `window` of the ground energy.
pub fn ground_space_lanczos(
    op: &dyn LinearOperator,
    config: &LanczosConfig,
    window: f64,
) -> Result<GroundSpace> {
    let first = lanczos_lowest(op, config, &[], config.seed)?;
    let energy = first.eigenvalue;
    let mut found: Vec<Vec<Complex64>> = vec![first.vector.as_slice().to_vec()];
    let mut states = vec![first];
    while found.len() + 1 < op.dim() {
        let seed = config.seed.wrapping_add(found.len() as u64);
        let next = lanczos_lowest(op, config, &found, seed)?;
        if next.eigenvalue - energy > window {
            break;
        }
        found.push(next.vector.as_slice().to_vec());
        states.push(next);
    }
    Ok(GroundSpace { energy, states })
}
