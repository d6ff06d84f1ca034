//! Exact diagonalization of the periodic O(n) chain and the two-site
//! observables derived from its ground state.
//!
//! `H = −Σ_i (I − P + E/Δ)_{i,i+1}` with the pair `(L, 1)` included. From the
//! nearest-neighbour reduced density matrix `D` we read `Ω₁ = tr(P·D)` and
//! `Ω₂ = tr(E·D)`, then `ω₁(0) = Ω₁ − 1 − Ω₂/Δ` (the energy per site) and
//! the observable ω̃₂ whose form depends on n:
//!
//! * n = 3: `ω̃₂(0) = −Ω₂`
//! * n = 4: `ω̃₂(0) = Ω₂`
//! * n ≥ 5: `ω̃₂′(0) = −α(0)·Ω₂/Δ²` with `α(0) = Γ(−1/Δ)/Γ(1/Δ)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{basis_ops, hamiltonian_density, ModelParams};
use crate::error::{Error, Result};
use crate::linalg::{
    ground_space_dense, ground_space_lanczos, partial_trace_pair, DenseMatrix, EmbeddedPair,
    GroundSpace, LanczosConfig, LinearOperator, PairSum, DEGENERACY_WINDOW, DENSE_CAP,
};
use crate::thermo::alpha;

/// Whether the ω̃₂ column holds a value at 0 or a derivative at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega2Kind {
    Value,
    Derivative,
}

impl Omega2Kind {
    /// For n ≥ 5 the value at 0 vanishes identically and the derivative is reported.
    pub fn for_n(n: usize) -> Self {
        if n <= 4 {
            Omega2Kind::Value
        } else {
            Omega2Kind::Derivative
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Omega2Kind::Value => "value",
            Omega2Kind::Derivative => "derivative",
        }
    }
}

/// Chain length of a table row: finite `L` or the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainLength {
    Finite(usize),
    Infinite,
}

impl fmt::Display for ChainLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainLength::Finite(l) => write!(f, "{l}"),
            ChainLength::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ChainLength {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ChainLength::Finite(l) => s.serialize_u64(*l as u64),
            ChainLength::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ChainLength {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(l) => Ok(ChainLength::Finite(l as usize)),
            Raw::Text(t) if t == "inf" => Ok(ChainLength::Infinite),
            Raw::Text(t) => t
                .parse()
                .map(ChainLength::Finite)
                .map_err(|_| serde::de::Error::custom(format!("bad chain length {t:?}"))),
        }
    }
}

/// The two-site observables of one ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaSet {
    /// `Ω₁ − 1 − Ω₂/Δ`, the energy per site.
    pub omega1_0: f64,
    /// `tr(P·D)`.
    pub big_omega1: f64,
    /// `tr(E·D)`.
    pub big_omega2: f64,
    pub omega2_kind: Omega2Kind,
    pub omega2_tilde: f64,
    /// `E₀/L` from the eigensolver, for the consistency check with `omega1_0`.
    pub energy_per_site: f64,
    pub degeneracy: usize,
}

/// One row of the correlation tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: ChainLength,
    pub omega1_0: f64,
    pub omega2_kind: Omega2Kind,
    pub omega2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
}

impl TableRow {
    pub fn rho(&self) -> [f64; 3] {
        [self.rho1, self.rho2, self.rho3]
    }

    /// Values in column order: ω₁(0), ω̃₂, ρ₁, ρ₂, ρ₃.
    pub fn columns(&self) -> [f64; 5] {
        [self.omega1_0, self.omega2, self.rho1, self.rho2, self.rho3]
    }

    /// `n²ρ₁ + nρ₂ + nρ₃`, which equals the trace of the density matrix.
    pub fn normalization(&self) -> f64 {
        let n = self.n as f64;
        n * n * self.rho1 + n * self.rho2 + n * self.rho3
    }
}

/// Solves `[[n²,n,n],[n,n²,n],[n,n,n²]] ρ = (1, Ω₁, Ω₂)` in closed form:
/// `ρ_k = (b_k − S/(n+2)) / (n(n−1))` with `S = 1 + Ω₁ + Ω₂`.
pub fn rho_coefficients(params: &ModelParams, big_omega1: f64, big_omega2: f64) -> [f64; 3] {
    let n = params.n() as f64;
    let b = [1.0, big_omega1, big_omega2];
    let s: f64 = b.iter().sum();
    b.map(|bk| (bk - s / (n + 2.0)) / (n * (n - 1.0)))
}

/// The ω̃₂ observable from `Ω₂` (see the module documentation).
pub fn omega2_from_big_omega2(params: &ModelParams, big_omega2: f64) -> f64 {
    match params.n() {
        3 => -big_omega2,
        4 => big_omega2,
        _ => {
            let delta = params.delta();
            -alpha_at_zero(params) * big_omega2 / (delta * delta)
        }
    }
}

/// Inverse of [`omega2_from_big_omega2`].
pub fn big_omega2_from_omega2(params: &ModelParams, omega2: f64) -> f64 {
    match params.n() {
        3 => -omega2,
        4 => omega2,
        _ => {
            let delta = params.delta();
            -delta * delta * omega2 / alpha_at_zero(params)
        }
    }
}

/// `α(0) = Γ(−1/Δ)/Γ(1/Δ)`; finite for n ≥ 5.
pub fn alpha_at_zero(params: &ModelParams) -> f64 {
    alpha(params, 0.0).expect("α(0) is finite for n >= 5")
}

/// Assembles a table row from `ω₁(0)` and `Ω₂`.
pub fn row_from_observables(
    params: &ModelParams,
    length: ChainLength,
    omega1_0: f64,
    big_omega2: f64,
) -> TableRow {
    let big_omega1 = 1.0 + omega1_0 + big_omega2 / params.delta();
    let [rho1, rho2, rho3] = rho_coefficients(params, big_omega1, big_omega2);
    TableRow {
        n: params.n(),
        length,
        omega1_0,
        omega2_kind: Omega2Kind::for_n(params.n()),
        omega2: omega2_from_big_omega2(params, big_omega2),
        rho1,
        rho2,
        rho3,
    }
}

/// Largest Hilbert-space dimension accepted by default (covers 8⁶).
pub const DEFAULT_MAX_DIM: usize = 300_000;

/// The periodic chain Hamiltonian as a sum of embedded bond terms.
#[derive(Debug, Clone)]
pub struct ChainHamiltonian {
    params: ModelParams,
    length: usize,
    sum: PairSum,
}

impl ChainHamiltonian {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn to_dense(&self) -> DenseMatrix {
        self.sum.to_dense()
    }
}

impl LinearOperator for ChainHamiltonian {
    fn dim(&self) -> usize {
        self.sum.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.sum.apply(x, y)
    }
}

/// `H = Σ_{i=1}^{L} h_{i,i+1}` with periodic closure. For L = 2 both bonds
/// (1,2) and (2,1) are present, as the sum prescribes.
pub fn build_hamiltonian(
    params: &ModelParams,
    length: usize,
    max_dim: usize,
) -> Result<ChainHamiltonian> {
    if length < 2 {
        return Err(Error::Invalid(format!("chain length must be >= 2, got {length}")));
    }
    let n = params.n();
    let dim = (n as u128).pow(length as u32);
    if dim > max_dim as u128 {
        return Err(Error::DimensionCap {
            dim: usize::try_from(dim).unwrap_or(usize::MAX),
            cap: max_dim,
        });
    }
    let h = hamiltonian_density(params);
    let terms = (1..=length)
        .map(|i| EmbeddedPair::nearest_neighbour(&h, n, length, i, true))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainHamiltonian {
        params: *params,
        length,
        sum: PairSum::new(terms)?,
    })
}

/// Choice of eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenSolver {
    /// Dense up to `dense_threshold`, Lanczos above.
    Auto,
    Dense,
    Lanczos,
}

/// Settings of the exact-diagonalization pipeline.
#[derive(Debug, Clone, Copy)]
pub struct EdOptions {
    pub solver: EigenSolver,
    pub dense_threshold: usize,
    pub dense_cap: usize,
    pub max_dim: usize,
    pub lanczos: LanczosConfig,
}

impl Default for EdOptions {
    fn default() -> Self {
        Self {
            solver: EigenSolver::Auto,
            dense_threshold: 1024,
            dense_cap: DENSE_CAP,
            max_dim: DEFAULT_MAX_DIM,
            lanczos: LanczosConfig::default(),
        }
    }
}

/// Ground space of the periodic chain (all states within the degeneracy window).
pub fn ground_space(params: &ModelParams, length: usize, options: &EdOptions) -> Result<GroundSpace> {
    let h = build_hamiltonian(params, length, options.max_dim)?;
    let dense = match options.solver {
        EigenSolver::Dense => true,
        EigenSolver::Lanczos => false,
        EigenSolver::Auto => h.dim() <= options.dense_threshold,
    };
    if dense {
        ground_space_dense(&h.to_dense(), options.dense_cap, DEGENERACY_WINDOW)
    } else {
        ground_space_lanczos(&h, &options.lanczos, DEGENERACY_WINDOW)
    }
}

/// Reduced density matrix of the sites `(first, second)` averaged over an
/// orthonormal basis of the ground space.
pub fn ground_space_density_matrix(
    space: &GroundSpace,
    n: usize,
    length: usize,
    first: usize,
    second: usize,
) -> Result<DenseMatrix> {
    let mut rho = DenseMatrix::zeros(n * n, n * n);
    for state in &space.states {
        rho += partial_trace_pair(state.vector.as_slice(), n, length, first, second)?;
    }
    Ok(rho.map(|z| z / space.states.len() as f64))
}

/// Ω's and ω's of the ground state of an `L`-site chain from the (1,2) density matrix.
pub fn omega_observables(params: &ModelParams, length: usize, options: &EdOptions) -> Result<OmegaSet> {
    let space = ground_space(params, length, options)?;
    let rho = ground_space_density_matrix(&space, params.n(), length, 1, 2)?;
    Ok(observables_from_density_matrix(params, &rho, space.energy / length as f64, space.degeneracy()))
}

/// Ω's and ω's from a two-site density matrix.
pub fn observables_from_density_matrix(
    params: &ModelParams,
    rho: &DenseMatrix,
    energy_per_site: f64,
    degeneracy: usize,
) -> OmegaSet {
    let ops = basis_ops(params);
    let big_omega1 = (&ops.permutation * rho).trace().re;
    let big_omega2 = (&ops.temperley_lieb * rho).trace().re;
    OmegaSet {
        omega1_0: big_omega1 - 1.0 - big_omega2 / params.delta(),
        big_omega1,
        big_omega2,
        omega2_kind: Omega2Kind::for_n(params.n()),
        omega2_tilde: omega2_from_big_omega2(params, big_omega2),
        energy_per_site,
        degeneracy,
    }
}

/// The finite-L table row.
pub fn table_row(params: &ModelParams, length: usize, options: &EdOptions) -> Result<TableRow> {
    let omegas = omega_observables(params, length, options)?;
    Ok(row_from_omega_set(params, ChainLength::Finite(length), &omegas))
}

pub fn row_from_omega_set(params: &ModelParams, length: ChainLength, omegas: &OmegaSet) -> TableRow {
    let [rho1, rho2, rho3] = rho_coefficients(params, omegas.big_omega1, omegas.big_omega2);
    TableRow {
        n: params.n(),
        length,
        omega1_0: omegas.omega1_0,
        omega2_kind: omegas.omega2_kind,
        omega2: omegas.omega2_tilde,
        rho1,
        rho2,
        rho3,
    }
}
