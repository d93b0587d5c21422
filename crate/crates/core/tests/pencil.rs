use faer::Mat;
use proptest::prelude::*;
use specpencil::pencil::{
    check_assumption, evaluate_prediction, predict_diagonal_spectrum, solve_gep, solve_gep_values, track_modes,
    AxisSweep, BranchKind, ParametricPencil, SweepAxis, SymmetricMatrix, DEFAULT_MIN_OVERLAP, DEFAULT_TOL,
};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() }
}

/// Orthonormal columns by modified Gram–Schmidt on a generic square matrix.
fn orthonormal(n: usize, entries: &[f64]) -> Mat<f64> {
    let mut q = Mat::from_fn(n, n, |i, j| entries[i * n + j] + if i == j { 2.0 } else { 0.0 });
    for j in 0..n {
        for k in 0..j {
            let dot: f64 = (0..n).map(|i| q[(i, j)] * q[(i, k)]).sum();
            for i in 0..n {
                q[(i, j)] -= dot * q[(i, k)];
            }
        }
        let norm = (0..n).map(|i| q[(i, j)] * q[(i, j)]).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    q
}

/// `Sᵀ Q diag(d) Qᵀ S` as a symmetric matrix.
fn congruent(s: &Mat<f64>, q: &Mat<f64>, d: &[f64]) -> SymmetricMatrix {
    let n = d.len();
    let diag = Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 });
    let m = s.transpose() * q * diag * q.transpose() * s;
    SymmetricMatrix::from_upper_fn(n, |i, j| m[(i, j)])
}

fn symmetric_from(n: usize, entries: &[f64], shift: f64) -> SymmetricMatrix {
    SymmetricMatrix::from_upper_fn(n, |i, j| entries[i * n + j] + entries[j * n + i] + if i == j { shift } else { 0.0 })
}

fn residual(a: &SymmetricMatrix, b: &SymmetricMatrix, lambda: f64, v: faer::ColRef<'_, f64>) -> f64 {
    let x: Vec<f64> = v.iter().copied().collect();
    let (av, bv) = (a.mul_vec(&x), b.mul_vec(&x));
    av.iter().zip(&bv).map(|(p, q)| (p - lambda * q).abs()).fold(0.0, f64::max)
}

/// Diagonal pencil satisfying the branch preconditions: at each index one
/// side of each splitting is nonzero.
fn diagonal_pencil() -> impl Strategy<Value = ParametricPencil> {
    (1usize..=8).prop_flat_map(|n| {
        (prop::collection::vec((any::<bool>(), any::<bool>(), 0.1..10.0f64, 0.1..10.0f64), n))
            .prop_map(|rows| {
                let mut d = [vec![0.0; rows.len()], vec![0.0; rows.len()], vec![0.0; rows.len()], vec![0.0; rows.len()]];
                for (i, &(in_ka, in_kb, x, y)) in rows.iter().enumerate() {
                    d[if in_ka { 1 } else { 0 }][i] = x;
                    d[if in_kb { 3 } else { 2 }][i] = y;
                }
                ParametricPencil::diagonal(&d[0], &d[1], &d[2], &d[3], 1.0, 1.0).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn prediction_matches_solver(p in diagonal_pencil(), alpha in 0.01..100.0f64, beta in 0.01..100.0f64) {
        let predicted = evaluate_prediction(&predict_diagonal_spectrum(&p).unwrap(), alpha, beta).unwrap();
        let q = p.with_params(alpha, beta).unwrap();
        let computed = solve_gep_values(&q.a(), &q.b(), DEFAULT_TOL).unwrap();
        prop_assert_eq!(predicted.infinite_count, computed.infinite_count);
        for (x, y) in predicted.finite.iter().zip(&computed.finite) {
            prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(y.abs()));
        }
    }

    #[test]
    fn branch_counts_and_coefficients(p in diagonal_pencil()) {
        let pred = predict_diagonal_spectrum(&p).unwrap();
        prop_assert_eq!(pred.branches.len(), p.dim());
        for b in &pred.branches {
            if b.kind != BranchKind::Constant && b.kind != BranchKind::Infinite {
                prop_assert!(b.coefficient > 0.0);
            }
        }
    }

    #[test]
    fn identity_b_is_plain_eigendecomposition(n in 1usize..8, entries in prop::collection::vec(-1.0..1.0f64, 64)) {
        let a = symmetric_from(n, &entries, 0.0);
        let s = solve_gep(&a, &SymmetricMatrix::identity(n), DEFAULT_TOL).unwrap();
        let plain = a.eigenvalues().unwrap();
        prop_assert_eq!(s.finite.len(), n);
        for (x, y) in s.finite.iter().zip(&plain) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn spectrum_invariants_and_residuals(
        n in 2usize..8,
        rank in 0usize..8,
        e1 in prop::collection::vec(-1.0..1.0f64, 64),
        e2 in prop::collection::vec(-1.0..1.0f64, 64),
        d in prop::collection::vec(0.1..5.0f64, 8),
    ) {
        // a positive definite, b PSD of rank ≤ n
        let rank = rank.min(n);
        let s = orthonormal(n, &e1);
        let a = symmetric_from(n, &e2, 0.0);
        let a = SymmetricMatrix::from_upper_fn(n, |i, j| {
            (0..n).map(|k| a.get(i, k) * a.get(j, k)).sum::<f64>() + if i == j { 0.5 } else { 0.0 }
        });
        let bd: Vec<f64> = (0..n).map(|i| if i < rank { d[i] } else { 0.0 }).collect();
        let b = congruent(&Mat::identity(n, n), &s, &bd);
        let spectrum = solve_gep(&a, &b, DEFAULT_TOL).unwrap();
        prop_assert_eq!(spectrum.dim(), n);
        prop_assert_eq!(spectrum.infinite_count, n - rank);
        prop_assert_eq!(spectrum.infinite_count, b.kernel_dim(DEFAULT_TOL).unwrap());
        prop_assert!(spectrum.finite.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(spectrum.finite.iter().all(|&l| l >= -DEFAULT_TOL));
        let x = spectrum.vectors.as_ref().unwrap();
        let (na, nb) = (a.max_abs() * n as f64, b.max_abs() * n as f64);
        for (j, &l) in spectrum.finite.iter().enumerate() {
            let norm = x.col(j).iter().map(|v| v.abs()).fold(0.0, f64::max);
            prop_assert!(residual(&a, &b, l, x.col(j)) <= 1e-10 * (na + l.abs() * nb) * norm);
        }
        // reciprocal consistency with the swapped pencil
        let swapped = solve_gep_values(&b, &a, DEFAULT_TOL).unwrap();
        let mut recips: Vec<f64> = swapped.finite.iter().rev().take(rank).map(|m| 1.0 / m).collect();
        recips.sort_by(f64::total_cmp);
        for (x, y) in spectrum.finite.iter().zip(&recips) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs());
        }
    }

    #[test]
    fn assumption_report_is_consistent(
        n in 1usize..7,
        e in prop::collection::vec(-1.0..1.0f64, 49),
        d1 in prop::collection::vec(prop_oneof![Just(0.0), 0.5..3.0f64], 7),
        d2 in prop::collection::vec(prop_oneof![Just(0.0), 0.5..3.0f64], 7),
    ) {
        let q = orthonormal(n, &e);
        let id = Mat::identity(n, n);
        let c1 = congruent(&id, &q, &d1[..n]);
        let c2 = congruent(&id, &q, &d2[..n]);
        let r = check_assumption(&c1, &c2, 1e-9).unwrap();
        let kernel = d1[..n].iter().filter(|&&v| v == 0.0).count();
        let both = d1[..n].iter().zip(&d2[..n]).filter(|(a, b)| **a == 0.0 && **b == 0.0).count();
        let leak = d1[..n].iter().zip(&d2[..n]).any(|(a, b)| *a != 0.0 && *b != 0.0);
        prop_assert_eq!(r.kernel_dim_c1, kernel);
        prop_assert_eq!(r.intersection_dim, both);
        prop_assert!(r.intersection_dim <= r.kernel_dim_c1);
        prop_assert_eq!(r.c2_pd_on_kernel, both == 0);
        prop_assert_eq!(r.c2_vanishes_on_complement, !leak);
    }

    #[test]
    fn flat_branches_do_not_move_with_alpha(
        n in 3usize..8,
        e in prop::collection::vec(-1.0..1.0f64, 64),
        f in prop::collection::vec(-0.3..0.3f64, 64),
        d in prop::collection::vec(0.5..5.0f64, 8),
        kernel in 1usize..3,
    ) {
        // B = SᵀS definite, A₁ = Sᵀ Q diag(d, 0) Qᵀ S, A₂ supported on the kernel
        let s = Mat::from_fn(n, n, |i, j| f[i * n + j] + if i == j { 1.0 } else { 0.0 });
        let q = orthonormal(n, &e);
        let kernel = kernel.min(n - 1);
        let d1: Vec<f64> = (0..n).map(|i| if i < n - kernel { d[i] } else { 0.0 }).collect();
        let d2: Vec<f64> = (0..n).map(|i| if i < n - kernel { 0.0 } else { d[i] }).collect();
        let b = congruent(&s, &Mat::identity(n, n), &vec![1.0; n]);
        let p = ParametricPencil::new(congruent(&s, &q, &d1), congruent(&s, &q, &d2), b, SymmetricMatrix::zeros(n), 0.0, 1.0).unwrap();
        let sweep = AxisSweep::new(&p, SweepAxis::Alpha, 1.0, DEFAULT_TOL).unwrap();
        for &flat in &d1[..n - kernel] {
            let mut seen = Vec::new();
            for i in 0..=20 {
                let alpha = 10f64.powf(-1.0 + i as f64 / 10.0);
                let s = sweep.spectrum_at(alpha).unwrap();
                let nearest = s.finite.iter().copied().min_by(|x, y| (x - flat).abs().total_cmp(&(y - flat).abs())).unwrap();
                seen.push(nearest);
            }
            let (lo, hi) = seen.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
            prop_assert!(hi - lo <= 1e-9 * flat);
            prop_assert!((seen[0] - flat).abs() <= 1e-9 * flat);
        }
    }

    #[test]
    fn tracking_recovers_permutations(n in 2usize..7, e in prop::collection::vec(-1.0..1.0f64, 36), perm_seed in any::<u64>(), flips in any::<u8>()) {
        let q = orthonormal(n, &e);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = perm_seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let moved = Mat::from_fn(n, n, |r, c| {
            let sign = if (flips >> (c % 8)) & 1 == 1 { -1.0 } else { 1.0 };
            sign * q[(r, perm[c])]
        });
        let curves = track_modes(&[q, moved], DEFAULT_MIN_OVERLAP);
        prop_assert_eq!(curves.len(), n);
        for c in &curves {
            prop_assert_eq!(c.len(), 2);
            prop_assert_eq!(perm[c.indices[1]], c.indices[0]);
        }
    }
}

#[test]
fn sweep_run_matches_pointwise_solves() {
    let p = ParametricPencil::diagonal(&[3., 4., 5., 6., 0., 0.], &[0., 0., 0., 0., 1., 2.], &[1.; 6], &[0.; 6], 0.0, 1.0).unwrap();
    let sweep = AxisSweep::new(&p, SweepAxis::Alpha, 1.0, DEFAULT_TOL).unwrap();
    let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.37).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let parallel = pool.install(|| sweep.run(&grid));
    for (r, &v) in parallel.iter().zip(&grid) {
        let direct = sweep.spectrum_at(v).unwrap();
        assert_eq!(r.as_ref().unwrap().finite, direct.finite);
    }
}

#[test]
fn symmetric_storage_is_exact() {
    let m = SymmetricMatrix::from_upper_fn(5, |i, j| (i * 7 + j) as f64 * 0.1);
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(m.get(i, j).to_bits(), m.get(j, i).to_bits());
        }
    }
}

#[test]
fn spec_examples() {
    let s = solve_gep(&SymmetricMatrix::from_diagonal(&[2., 3.]), &SymmetricMatrix::identity(2), DEFAULT_TOL).unwrap();
    assert_eq!((s.finite.clone(), s.infinite_count), (vec![2.0, 3.0], 0));
    let s = solve_gep(&SymmetricMatrix::identity(2), &SymmetricMatrix::from_diagonal(&[1., 0.]), DEFAULT_TOL).unwrap();
    assert_eq!(s.infinite_count, 1);
    assert!((s.finite[0] - 1.0).abs() < 1e-15);
    let r = check_assumption(&SymmetricMatrix::from_diagonal(&[1., 0., 0.]), &SymmetricMatrix::from_diagonal(&[0., 1., 0.]), DEFAULT_TOL).unwrap();
    assert_eq!((r.kernel_dim_c1, r.c2_pd_on_kernel, r.intersection_dim), (2, false, 1));
}
