use on_qkz::algebra::{basis_ops, ModelParams};
use on_qkz::chain::{
    alpha_at_zero, big_omega2_from_omega2, build_hamiltonian, ground_space, ground_space_density_matrix,
    omega2_from_big_omega2, omega_observables, rho_coefficients, row_from_observables, table_row,
    ChainLength, EdOptions, EigenSolver, Omega2Kind, TableRow, DEFAULT_MAX_DIM,
};
use on_qkz::linalg::max_abs;
use on_qkz::Error;

fn params(n: usize) -> ModelParams {
    ModelParams::new(n).unwrap()
}

fn assert_row(row: &TableRow, expected: [f64; 5], tol: f64) {
    for (i, (got, want)) in row.columns().iter().zip(expected).enumerate() {
        assert!((got - want).abs() <= tol, "column {i}: {got} vs {want}");
    }
}

#[test]
fn two_site_energies() {
    for n in 3..=8 {
        let omegas = omega_observables(&params(n), 2, &EdOptions::default()).unwrap();
        let expected = -2.0 * n as f64 / (n as f64 - 2.0);
        assert!((omegas.energy_per_site - expected).abs() < 1e-12, "n={n}");
    }
    let o3 = omega_observables(&params(3), 2, &EdOptions::default()).unwrap();
    assert!((o3.omega1_0 + 6.0).abs() < 1e-12);
    let o7 = omega_observables(&params(7), 2, &EdOptions::default()).unwrap();
    assert!((o7.omega1_0 + 2.8).abs() < 1e-12);
}

#[test]
fn o4_four_sites() {
    let omegas = omega_observables(&params(4), 4, &EdOptions::default()).unwrap();
    assert!((omegas.omega1_0 + 3.0).abs() < 1e-12);
    assert!((omegas.omega2_tilde - 2.25).abs() < 1e-12);
    assert_eq!(omegas.omega2_kind, Omega2Kind::Value);
}

#[test]
fn two_site_ground_state_is_the_singlet() {
    for n in 3..=8 {
        let omegas = omega_observables(&params(n), 2, &EdOptions::default()).unwrap();
        assert!((omegas.big_omega1 - 1.0).abs() < 1e-12);
        assert!((omegas.big_omega2 - n as f64).abs() < 1e-12);
        assert_eq!(omegas.degeneracy, 1);
    }
}

#[test]
fn branch_map_for_small_n() {
    let o3 = omega_observables(&params(3), 2, &EdOptions::default()).unwrap();
    assert!((o3.omega2_tilde + 3.0).abs() < 1e-12);
    assert_eq!(o3.omega2_kind, Omega2Kind::Value);
}

#[test]
fn branch_map_derivative_for_o5() {
    let p = params(5);
    assert!((alpha_at_zero(&p) + 2.967_546_389_470_19).abs() < 1e-13);
    let omegas = omega_observables(&p, 2, &EdOptions::default()).unwrap();
    assert_eq!(omegas.omega2_kind, Omega2Kind::Derivative);
    assert!((omegas.omega2_tilde - 6.594547532155967).abs() < 1e-12);
    assert!((omegas.omega2_tilde + alpha_at_zero(&p) * 5.0 / 2.25).abs() < 1e-12);
}

#[test]
fn branch_map_round_trip() {
    for n in 3..=8 {
        let p = params(n);
        for big in [0.3, 1.7, n as f64] {
            let back = big_omega2_from_omega2(&p, omega2_from_big_omega2(&p, big));
            assert!((back - big).abs() < 1e-13);
        }
    }
}

#[test]
fn rho_from_o3_thermodynamic_omegas() {
    let rho = rho_coefficients(&params(3), 0.439648, 1.719824);
    for (got, want) in rho.iter().zip([0.0613509, -0.0320410, 0.1813216]) {
        assert!((got - want).abs() < 5e-7, "{got} vs {want}");
    }
}

#[test]
fn rho_of_the_singlet_and_of_the_mixed_state() {
    for n in 3..=8 {
        let p = params(n);
        let nf = n as f64;
        let singlet = rho_coefficients(&p, 1.0, nf);
        assert!(singlet[0].abs() < 1e-15 && singlet[1].abs() < 1e-15);
        assert!((singlet[2] - 1.0 / nf).abs() < 1e-15);
        let mixed = rho_coefficients(&p, 1.0 / nf, 1.0 / nf);
        assert!((mixed[0] - 1.0 / (nf * nf)).abs() < 1e-15);
        assert!(mixed[1].abs() < 1e-15 && mixed[2].abs() < 1e-15);
    }
}

#[test]
fn rho_solves_the_linear_system() {
    let p = params(6);
    let (o1, o2) = (0.37, 1.21);
    let [r1, r2, r3] = rho_coefficients(&p, o1, o2);
    let n = 6.0;
    assert!((n * n * r1 + n * r2 + n * r3 - 1.0).abs() < 1e-14);
    assert!((n * r1 + n * n * r2 + n * r3 - o1).abs() < 1e-14);
    assert!((n * r1 + n * r2 + n * n * r3 - o2).abs() < 1e-14);
}

#[test]
fn o3_six_site_row() {
    let row = table_row(&params(3), 6, &EdOptions::default()).unwrap();
    assert_row(
        &row,
        [-4.146234978548967, -1.809210082780898, 0.057286824340209, -0.030682311157652, 0.19215517147035],
        1e-13,
    );
    assert_eq!(row.length, ChainLength::Finite(6));
}

#[test]
fn o6_four_site_row() {
    let row = table_row(&params(6), 4, &EdOptions::default()).unwrap();
    assert_row(&row, [-2.42539, 1.40209, 0.0175797, -0.0165304, 0.0777188], 1e-5);
    for (got, want) in row.rho().iter().zip([0.0175797, -0.0165304, 0.0777188]) {
        assert!((got - want).abs() <= 1e-7);
    }
}

#[test]
fn o8_two_site_row() {
    let row = table_row(&params(8), 2, &EdOptions::default()).unwrap();
    assert_row(&row, [-2.66667, 1.347915, 0.0, 0.0, 0.125], 5e-6);
}

#[test]
fn omega_set_identities_on_every_small_run() {
    for n in 3..=8 {
        let p = params(n);
        for length in [2, 3, 4] {
            if n.pow(length as u32) > 4096 {
                continue;
            }
            let o = omega_observables(&p, length, &EdOptions::default()).unwrap();
            let identity = o.big_omega1 - 1.0 - o.big_omega2 / p.delta();
            assert!((o.omega1_0 - identity).abs() < 1e-12);
            assert!((o.omega1_0 - o.energy_per_site).abs() < 1e-10, "n={n} L={length}");
            let row = table_row(&p, length, &EdOptions::default()).unwrap();
            assert!((row.normalization() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn density_matrix_is_translation_invariant_and_positive() {
    for (n, length) in [(3, 4), (3, 6), (4, 4), (5, 4)] {
        let p = params(n);
        let space = ground_space(&p, length, &EdOptions::default()).unwrap();
        let d12 = ground_space_density_matrix(&space, n, length, 1, 2).unwrap();
        let d23 = ground_space_density_matrix(&space, n, length, 2, 3).unwrap();
        let dl1 = ground_space_density_matrix(&space, n, length, length, 1).unwrap();
        assert!(max_abs(&(&d12 - &d23)) < 1e-10, "n={n} L={length}");
        assert!(max_abs(&(&d12 - &dl1)) < 1e-10);
        assert!((d12.trace().re - 1.0).abs() < 1e-12);
        assert!(d12.clone().symmetric_eigen().eigenvalues.min() > -1e-12);
        // O(n) invariance: the density matrix lies in span{I, P, E}.
        let ops = basis_ops(&p);
        let rho = table_row(&p, length, &EdOptions::default()).unwrap().rho();
        let fit = ops.combine(rho[0].into(), rho[1].into(), rho[2].into());
        assert!(max_abs(&(d12 - fit)) < 1e-10);
    }
}

#[test]
fn dense_and_lanczos_rows_agree() {
    for (n, length) in [(3, 4), (4, 4), (5, 4), (3, 6)] {
        let p = params(n);
        let dense = EdOptions {
            solver: EigenSolver::Dense,
            ..EdOptions::default()
        };
        let lanczos = EdOptions {
            solver: EigenSolver::Lanczos,
            ..EdOptions::default()
        };
        let a = table_row(&p, length, &dense).unwrap();
        let b = table_row(&p, length, &lanczos).unwrap();
        for (x, y) in a.columns().iter().zip(b.columns()) {
            assert!((x - y).abs() < 1e-10, "n={n} L={length}: {x} vs {y}");
        }
    }
}

#[test]
fn row_from_observables_matches_ed() {
    let p = params(5);
    let o = omega_observables(&p, 4, &EdOptions::default()).unwrap();
    let row = row_from_observables(&p, ChainLength::Finite(4), o.omega1_0, o.big_omega2);
    let direct = table_row(&p, 4, &EdOptions::default()).unwrap();
    for (x, y) in row.columns().iter().zip(direct.columns()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn invalid_chains_are_rejected() {
    let p = params(3);
    assert!(matches!(build_hamiltonian(&p, 1, DEFAULT_MAX_DIM), Err(Error::Invalid(_))));
    assert!(matches!(build_hamiltonian(&p, 13, DEFAULT_MAX_DIM), Err(Error::DimensionCap { .. })));
    let h = build_hamiltonian(&p, 4, DEFAULT_MAX_DIM).unwrap();
    assert_eq!(h.length(), 4);
    assert_eq!(h.params().n(), 3);
}

#[test]
fn hamiltonian_is_hermitian() {
    let p = params(4);
    let h = build_hamiltonian(&p, 3, DEFAULT_MAX_DIM).unwrap().to_dense();
    assert!(max_abs(&(&h - h.adjoint())) < 1e-14);
}

#[test]
fn chain_length_serialization() {
    let finite: ChainLength = serde_json::from_str("6").unwrap();
    let infinite: ChainLength = serde_json::from_str("\"inf\"").unwrap();
    assert_eq!(finite, ChainLength::Finite(6));
    assert_eq!(infinite, ChainLength::Infinite);
    assert_eq!(serde_json::to_string(&infinite).unwrap(), "\"inf\"");
    assert_eq!(infinite.to_string(), "inf");
    assert!(ChainLength::Finite(6) < ChainLength::Infinite);
}
