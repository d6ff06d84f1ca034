use num_complex::Complex64;
use on_qkz::algebra::{basis_ops, singlet, ModelParams};
use on_qkz::chain::build_hamiltonian;
use on_qkz::linalg::{
    ground_state_dense, ground_state_lanczos, kron, max_abs, partial_trace_pair, DenseMatrix,
    EmbeddedPair, LanczosConfig, LinearOperator, PairSum, StateVector, DENSE_CAP,
};
use on_qkz::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn diag(values: &[f64]) -> DenseMatrix {
    DenseMatrix::from_diagonal(&StateVector::from_iterator(values.len(), values.iter().map(|&v| c(v))))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn basis_state(n: usize, digits: &[usize]) -> StateVector {
    let index = digits.iter().fold(0, |acc, d| acc * n + d);
    let mut v = StateVector::zeros(n.pow(digits.len() as u32));
    v[index] = c(1.0);
    v
}

fn apply(op: &dyn LinearOperator, x: &StateVector) -> StateVector {
    let mut y = StateVector::zeros(x.len());
    op.apply(x.as_slice(), y.as_mut_slice());
    y
}

#[test]
fn kron_of_identities_is_identity() {
    let id2 = DenseMatrix::identity(2, 2);
    assert_eq!(kron(&id2, &id2), DenseMatrix::identity(4, 4));
}

#[test]
fn kron_of_diagonals() {
    assert_eq!(kron(&diag(&[1.0, 2.0]), &diag(&[1.0, 3.0])), diag(&[1.0, 3.0, 2.0, 6.0]));
}

#[test]
fn kron_permutation_swaps_first_two_factors() {
    let params = ModelParams::new(3).unwrap();
    let ops = basis_ops(&params);
    let op = kron(&ops.permutation, &DenseMatrix::identity(3, 3));
    for a in 0..3 {
        for b in 0..3 {
            for d in 0..3 {
                let out = &op * basis_state(3, &[a, b, d]);
                assert_eq!(out, basis_state(3, &[b, a, d]));
            }
        }
    }
}

#[test]
fn kron_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let a = random_matrix(&mut rng, 2, 3);
        let b = random_matrix(&mut rng, 3, 2);
        let m = random_matrix(&mut rng, 2, 2);
        let lhs = kron(&kron(&a, &b), &m);
        let rhs = kron(&a, &kron(&b, &m));
        assert!(max_abs(&(lhs - rhs)) < 1e-14);
    }
}

#[test]
fn embedded_identity_is_identity() {
    let pair = EmbeddedPair::nearest_neighbour(&DenseMatrix::identity(9, 9), 3, 3, 1, false).unwrap();
    assert_eq!(pair.dim(), 27);
    assert_eq!(pair.to_dense(), DenseMatrix::identity(27, 27));
}

#[test]
fn embedded_permutation_swaps_sites() {
    let params = ModelParams::new(4).unwrap();
    let ops = basis_ops(&params);
    let pair = EmbeddedPair::nearest_neighbour(&ops.permutation, 4, 2, 1, false).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(apply(&pair, &basis_state(4, &[a, b])), basis_state(4, &[b, a]));
        }
    }
}

#[test]
fn embedded_temperley_lieb_produces_singlet() {
    let params = ModelParams::new(3).unwrap();
    let ops = basis_ops(&params);
    let pair = EmbeddedPair::nearest_neighbour(&ops.temperley_lieb, 3, 2, 1, false).unwrap();
    // |1,3⟩ in 1-based labels is |0,2⟩ here; E maps it onto Σ_b |b, 4−b⟩.
    let out = apply(&pair, &basis_state(3, &[0, 2]));
    assert_eq!(out, singlet(&params));
}

#[test]
fn embedding_rejects_bad_sites() {
    let id = DenseMatrix::identity(4, 4);
    assert!(matches!(
        EmbeddedPair::nearest_neighbour(&id, 2, 3, 0, true),
        Err(Error::SiteOutOfRange { .. })
    ));
    assert!(matches!(
        EmbeddedPair::nearest_neighbour(&id, 2, 3, 4, true),
        Err(Error::SiteOutOfRange { .. })
    ));
    assert!(matches!(
        EmbeddedPair::nearest_neighbour(&id, 2, 3, 3, false),
        Err(Error::NotPeriodic)
    ));
    assert!(EmbeddedPair::nearest_neighbour(&id, 2, 3, 3, true).is_ok());
    assert!(matches!(
        EmbeddedPair::nearest_neighbour(&DenseMatrix::identity(3, 3), 2, 3, 1, true),
        Err(Error::Shape { .. })
    ));
}

#[test]
fn matrix_free_application_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let op = random_matrix(&mut rng, 9, 9);
    for (first, second) in [(1, 2), (2, 3), (4, 1), (3, 1)] {
        let pair = EmbeddedPair::between(&op, 3, 4, first, second).unwrap();
        let x = StateVector::from_fn(81, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.3));
        let dense = pair.to_dense() * &x;
        let free = apply(&pair, &x);
        assert!((dense - free).camax() < 1e-13);
    }
}

#[test]
fn disjoint_embeddings_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_matrix(&mut rng, 9, 9);
    let b = random_matrix(&mut rng, 9, 9);
    let x = EmbeddedPair::nearest_neighbour(&a, 3, 4, 1, true).unwrap().to_dense();
    let y = EmbeddedPair::nearest_neighbour(&b, 3, 4, 3, true).unwrap().to_dense();
    assert!(max_abs(&(&x * &y - &y * &x)) < 1e-13);
}

#[test]
fn pair_sum_applies_every_term() {
    let params = ModelParams::new(3).unwrap();
    let ops = basis_ops(&params);
    let terms = (1..=3)
        .map(|i| EmbeddedPair::nearest_neighbour(&ops.permutation, 3, 3, i, true).unwrap())
        .collect();
    let sum = PairSum::new(terms).unwrap();
    let dense: DenseMatrix = sum.terms().iter().map(|t| t.to_dense()).sum();
    assert!(max_abs(&(sum.to_dense() - dense)) < 1e-15);
}

#[test]
fn product_state_gives_rank_one_density_matrix() {
    let state = basis_state(3, &[0, 0, 0]);
    let rho = partial_trace_pair(state.as_slice(), 3, 3, 1, 2).unwrap();
    let mut expected = DenseMatrix::zeros(9, 9);
    expected[(0, 0)] = c(1.0);
    assert_eq!(rho, expected);
}

#[test]
fn singlet_density_matrix() {
    for n in 3..=8 {
        let params = ModelParams::new(n).unwrap();
        let state = singlet(&params).map(|z| z / (n as f64).sqrt());
        let rho = partial_trace_pair(state.as_slice(), n, 2, 1, 2).unwrap();
        let ops = basis_ops(&params);
        let expected = ops.temperley_lieb.map(|z| z / n as f64);
        assert!(max_abs(&(&rho - expected)) < 1e-15);
        assert!(((&ops.temperley_lieb * &rho).trace().re - n as f64).abs() < 1e-12);
    }
}

#[test]
fn partial_trace_rejects_unnormalized_states() {
    let state = basis_state(3, &[0, 1]).map(|z| z * 2.0);
    assert!(matches!(
        partial_trace_pair(state.as_slice(), 3, 2, 1, 2),
        Err(Error::Unnormalized { .. })
    ));
}

#[test]
fn partial_trace_of_random_states_is_a_density_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, length) in [(3usize, 4usize), (4, 3), (5, 3)] {
        let dim = n.pow(length as u32);
        let mut psi = StateVector::from_fn(dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        psi /= c(psi.norm());
        for (first, second) in [(1, 2), (2, 1), (1, length)] {
            let rho = partial_trace_pair(psi.as_slice(), n, length, first, second).unwrap();
            assert!((rho.trace() - c(1.0)).norm() < 1e-12);
            assert!(max_abs(&(&rho - rho.adjoint())) < 1e-14);
            let min = rho.clone().symmetric_eigen().eigenvalues.min();
            assert!(min >= -1e-12);
        }
    }
}

#[test]
fn dense_ground_state_of_pauli_x() {
    let h = DenseMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let g = ground_state_dense(&h, DENSE_CAP).unwrap();
    assert!((g.eigenvalue + 1.0).abs() < 1e-15);
    assert!(g.residual_norm < 1e-14);
    assert!((g.vector.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn dense_solver_checks_its_input() {
    let h = DenseMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(2.0), c(0.0)]);
    assert!(matches!(ground_state_dense(&h, DENSE_CAP), Err(Error::NotHermitian { .. })));
    assert!(matches!(
        ground_state_dense(&DenseMatrix::identity(8, 8), 4),
        Err(Error::DimensionCap { .. })
    ));
}

#[test]
fn dense_two_site_chain_energies() {
    for (n, per_site) in [(3, -6.0), (5, -10.0 / 3.0)] {
        let params = ModelParams::new(n).unwrap();
        let h = build_hamiltonian(&params, 2, 1 << 20).unwrap().to_dense();
        let g = ground_state_dense(&h, DENSE_CAP).unwrap();
        assert!((g.eigenvalue / 2.0 - per_site).abs() < 1e-12);
        assert!(g.residual_norm < 1e-12 * max_abs(&h).max(1.0) * 10.0);
    }
}

/// `diag(1, 2, ..., 100)` applied without storing a matrix.
struct Diagonal(usize);

impl LinearOperator for Diagonal {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (k, (yk, xk)) in y.iter_mut().zip(x).enumerate() {
            *yk = xk * (k as f64 + 1.0);
        }
    }
}

#[test]
fn lanczos_on_a_diagonal_operator() {
    let g = ground_state_lanczos(&Diagonal(100), &LanczosConfig::default()).unwrap();
    assert!((g.eigenvalue - 1.0).abs() < 1e-12);
    assert!(g.residual_norm < 1e-10);
}

#[test]
fn lanczos_is_deterministic_for_a_seed() {
    let params = ModelParams::new(3).unwrap();
    let h = build_hamiltonian(&params, 5, 1 << 20).unwrap();
    let a = ground_state_lanczos(&h, &LanczosConfig::default()).unwrap();
    let b = ground_state_lanczos(&h, &LanczosConfig::default()).unwrap();
    assert_eq!(a.eigenvalue.to_bits(), b.eigenvalue.to_bits());
    assert_eq!(a.vector, b.vector);
}

#[test]
fn lanczos_reports_non_convergence() {
    let config = LanczosConfig {
        max_matvecs: 3,
        ..LanczosConfig::default()
    };
    assert!(matches!(
        ground_state_lanczos(&Diagonal(100), &config),
        Err(Error::NoConvergence { .. })
    ));
}

#[test]
fn lanczos_agrees_with_dense_diagonalization() {
    for (n, length) in [(3, 2), (3, 4), (3, 5), (4, 2), (4, 4), (5, 2), (5, 4), (6, 3), (7, 2), (8, 3)] {
        let params = ModelParams::new(n).unwrap();
        let h = build_hamiltonian(&params, length, 1 << 20).unwrap();
        if h.dim() > 1024 {
            continue;
        }
        let dense = ground_state_dense(&h.to_dense(), DENSE_CAP).unwrap();
        let lanczos = ground_state_lanczos(&h, &LanczosConfig::default()).unwrap();
        assert!(
            (dense.eigenvalue - lanczos.eigenvalue).abs() < 1e-10,
            "n={n} L={length}: {} vs {}",
            dense.eigenvalue,
            lanczos.eigenvalue
        );
    }
}
