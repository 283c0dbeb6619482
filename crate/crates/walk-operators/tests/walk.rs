use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use qmh_circuits::{boxtimes_circuit, target_state, walk_layout, WalkRegisters, CHECK_REGISTERS};
use qmh_markov::{
    build_double_well, build_ising, discriminant, discriminant_spectrum, gibbs_distribution, mh_kernel, spectral_gap,
    ProblemInstance,
};
use qmh_sim::{Circuit, CompiledCircuit, QuantumState, SparseState, Statevector};
use qmh_walk::*;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

#[allow(clippy::approx_constant)]
const VARPHI: f64 = 1.0472;

fn c(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn grid2() -> ProblemInstance {
    build_double_well(2, 1.0).unwrap()
}

fn real_to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(c)
}

fn disc(inst: &ProblemInstance) -> DMatrix<f64> {
    let pi = gibbs_distribution(inst);
    let d = discriminant(&mh_kernel(inst), &pi).unwrap().matrix;
    (&d + d.transpose()) * 0.5
}

fn lcg(seed: u64) -> impl FnMut() -> f64 {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

/// Expected walk phases: `±arccos v` per eigenvalue `v`, doubled fixed points at `v = ±1`.
fn expected_walk_phases(vals: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for &v in vals {
        if (v - 1.0).abs() < 1e-12 {
            out.extend([0.0, 0.0]);
        } else if (v + 1.0).abs() < 1e-12 {
            out.extend([PI, PI]);
        } else {
            let g = v.clamp(-1.0, 1.0).acos();
            out.extend([g, -g]);
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

fn assert_phases_match(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < tol, "phase {g} vs {w}");
    }
}

#[test]
fn identity_dilation_is_reflection_block() {
    let (u, sq) = synthetic_spue_of_discriminant(&DMatrix::identity(3, 3)).unwrap();
    let m = u.matrix().unwrap();
    let mut want = DMatrix::<C64>::identity(6, 6);
    for k in 3..6 {
        want[(k, k)] = c(-1.0);
    }
    assert!((m - want).camax() < 1e-15);
    assert_eq!((sq.domain_dim(), sq.codomain_dim()), (3, 6));
}

#[test]
fn dilation_compresses_to_discriminant() {
    for inst in [build_double_well(4, 1.0).unwrap(), build_ising(4, 1.0, 0.0, 0.8).unwrap()] {
        let d = disc(&inst);
        let (u, sq) = synthetic_spue_of_discriminant(&d).unwrap();
        let um = u.matrix().unwrap();
        let s = sq.matrix().unwrap();
        let block = s.adjoint() * &um * &s;
        assert!((block - real_to_complex(&d)).camax() < 1e-12);
        let n = um.nrows();
        assert!((um.adjoint() * &um - DMatrix::<C64>::identity(n, n)).camax() < 1e-12);
        // □†□ is a Hermitian idempotent.
        let p = s.adjoint() * &s;
        assert!((&p * &p - &p).camax() < 1e-12);
        assert!((&p - p.adjoint()).camax() < 1e-12);
    }
}

#[test]
fn dilation_rejects_bad_inputs() {
    let big = DMatrix::from_diagonal_element(2, 2, 1.5);
    assert!(matches!(synthetic_spue_of_discriminant(&big), Err(WalkError::NormTooLarge(_))));
    let skew = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.1, 0.0]);
    assert!(matches!(synthetic_spue_of_discriminant(&skew), Err(WalkError::NotSymmetric(_))));
}

#[test]
fn qubitized_walk_phases_are_arccos_pairs() {
    for inst in [grid2(), build_double_well(4, 1.0).unwrap(), build_ising(4, 1.0, 0.0, 1.3).unwrap()] {
        let pi = gibbs_distribution(&inst);
        let vals = discriminant_spectrum(&mh_kernel(&inst), &pi).unwrap();
        let (u, sq) = synthetic_spue_of_discriminant(&disc(&inst)).unwrap();
        let w = qubitized_walk(&u, &sq).unwrap();
        let report = spectral_report(&w, None).unwrap();
        assert_phases_match(&report.eigenphases, &expected_walk_phases(&vals), 1e-9);
        // Fixed point □|√π⟩.
        let root = DVector::from_iterator(pi.len(), pi.probs.iter().map(|p| c(p.sqrt())));
        let v = sq.apply(&root).unwrap();
        assert!((w.apply(&v).unwrap() - &v).norm() < 1e-10);
        let r = spectral_report(&w, Some(&v)).unwrap();
        assert_abs_diff_eq!(r.target_overlap.unwrap(), 1.0, epsilon = 1e-10);
        // Angular gap equals arccos of the second eigenvalue.
        let (_, lambda2) = spectral_gap(&mh_kernel(&inst), &pi).unwrap();
        assert_abs_diff_eq!(report.angular_gap.unwrap(), lambda2.acos(), epsilon = 1e-9);
    }
}

#[test]
fn zero_eigenvalue_gives_quarter_turns() {
    let (u, sq) = synthetic_spue_of_discriminant(&DMatrix::zeros(1, 1)).unwrap();
    let r = spectral_report(&qubitized_walk(&u, &sq).unwrap(), None).unwrap();
    assert_phases_match(&r.eigenphases, &[-FRAC_PI_2, FRAC_PI_2], 1e-12);
}

#[test]
fn angular_gap_dominates_root_of_spectral_gap() {
    for n_spins in [2, 4] {
        for k in 1..=40 {
            let beta = 0.1 * k as f64;
            let inst = build_ising(n_spins, 1.0, 0.0, beta).unwrap();
            let pi = gibbs_distribution(&inst);
            let (delta, lambda2) = spectral_gap(&mh_kernel(&inst), &pi).unwrap();
            let (u, sq) = synthetic_spue_of_discriminant(&disc(&inst)).unwrap();
            let gap = spectral_report(&qubitized_walk(&u, &sq).unwrap(), None).unwrap().angular_gap.unwrap();
            assert_abs_diff_eq!(gap, lambda2.acos(), epsilon = 1e-9);
            assert!(gap >= delta.sqrt(), "beta {beta}: {gap} < sqrt({delta})");
        }
    }
}

#[test]
fn hermitianization_of_scalar_identity_is_pauli_x() {
    let u = LinearOperatorHandle::dense("i", DMatrix::identity(1, 1)).unwrap();
    let e = PartialIsometryHandle::dense("e", DMatrix::identity(1, 1));
    let (bar, sq) = hermitianize(&u, &e, &e).unwrap();
    let s = sq.matrix().unwrap();
    let a = s.adjoint() * bar.matrix().unwrap() * &s;
    let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    assert!((a - x).camax() < 1e-15);
    let r = spectral_report(&bar, None).unwrap();
    assert_phases_match(&r.eigenphases, &[0.0, PI], 1e-12);
}

/// Unitary dilation `[[A, √(I-AA†)], [√(I-A†A), -A†]]` of a contraction.
fn dilate(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let id = DMatrix::<C64>::identity(n, n);
    let root = |h: DMatrix<C64>| {
        let e = nalgebra::SymmetricEigen::new(h);
        let d = DMatrix::from_diagonal(&e.eigenvalues.map(|v| c(v.max(0.0).sqrt())));
        &e.eigenvectors * d * e.eigenvectors.adjoint()
    };
    let mut u = DMatrix::zeros(2 * n, 2 * n);
    u.view_mut((0, 0), (n, n)).copy_from(a);
    u.view_mut((0, n), (n, n)).copy_from(&root(&id - a * a.adjoint()));
    u.view_mut((n, 0), (n, n)).copy_from(&root(&id - a.adjoint() * a));
    u.view_mut((n, n), (n, n)).copy_from(&(-a.adjoint()));
    u
}

fn random_contraction(n: usize, seed: u64, hermitian: bool) -> DMatrix<C64> {
    let mut r = lcg(seed);
    let mut a = DMatrix::from_fn(n, n, |_, _| C64::new(r(), r()));
    if hermitian {
        a = (&a + a.adjoint()).scale(0.5);
    }
    let s = a.clone().svd(false, false).singular_values.max();
    a.unscale(1.1 * s)
}

fn check_hermitianization(a: &DMatrix<C64>) {
    let n = a.nrows();
    let u = LinearOperatorHandle::dense("u", dilate(a)).unwrap();
    let mut e = DMatrix::zeros(2 * n, n);
    e.view_mut((0, 0), (n, n)).fill_with_identity();
    let e = PartialIsometryHandle::dense("e", e);
    let (bar, sq) = hermitianize(&u, &e, &e).unwrap();
    let bm = bar.matrix().unwrap();
    assert!((&bm - bm.adjoint()).camax() < 1e-12);
    let s = sq.matrix().unwrap();
    let abar = s.adjoint() * &bm * &s;
    let eig = nalgebra::SymmetricEigen::new((&abar + abar.adjoint()).scale(0.5));
    let mut got: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    got.sort_by(|x, y| x.total_cmp(y));
    let sv = a.clone().svd(false, false).singular_values;
    let mut want: Vec<f64> = sv.iter().flat_map(|&v| [v, -v]).collect();
    want.sort_by(|x, y| x.total_cmp(y));
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-10, "{g} vs {w}");
    }
}

#[test]
fn hermitianization_recovers_singular_values() {
    check_hermitianization(&random_contraction(4, 7, false));
    check_hermitianization(&random_contraction(4, 8, true));
}

#[test]
fn hermitianization_rejects_mismatched_codomains() {
    let u = LinearOperatorHandle::dense("u", DMatrix::identity(2, 2)).unwrap();
    let l = PartialIsometryHandle::dense("l", DMatrix::identity(2, 1));
    let r = PartialIsometryHandle::dense("r", DMatrix::identity(3, 1));
    assert!(matches!(hermitianize(&u, &l, &r), Err(WalkError::Dimension { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_eigenphase_pairs(seed in 0u64..1000, n in 1usize..6) {
        let mut r = lcg(seed);
        let a = DMatrix::from_fn(n, n, |_, _| r());
        let a = (&a + a.transpose()) * 0.5;
        let norm = nalgebra::SymmetricEigen::new(a.clone()).eigenvalues.amax().max(1e-3);
        let d = a / (norm * 1.05);
        let vals: Vec<f64> = nalgebra::SymmetricEigen::new(d.clone()).eigenvalues.iter().copied().collect();
        let (u, sq) = synthetic_spue_of_discriminant(&d).unwrap();
        let rep = spectral_report(&qubitized_walk(&u, &sq).unwrap(), None).unwrap();
        let want = expected_walk_phases(&vals);
        prop_assert_eq!(rep.eigenphases.len(), want.len());
        for (g, w) in rep.eigenphases.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-9);
        }
    }

    #[test]
    fn prop_hermitianization(seed in 0u64..1000, n in 1usize..5) {
        check_hermitianization(&random_contraction(n, seed, false));
    }
}

fn grid_box() -> (ProblemInstance, PartialIsometryHandle) {
    let inst = grid2();
    let layout = walk_layout(&inst, 0).unwrap();
    let b = boxtimes_from_circuits(&inst, layout).unwrap();
    (inst, b)
}

fn random_vector(dim: usize, seed: u64) -> DVector<C64> {
    let mut r = lcg(seed);
    let v = DVector::from_fn(dim, |_, _| C64::new(r(), r()));
    v.unscale(v.norm())
}

#[test]
fn boxtimes_is_partial_isometry() {
    let (_, b) = grid_box();
    let m = b.matrix().unwrap();
    let gram = m.adjoint() * &m;
    assert!((&gram * &gram - &gram).camax() < 1e-10);
    assert!((&gram - DMatrix::<C64>::identity(32, 32)).camax() < 1e-10);
    for seed in 0..5 {
        let u = random_vector(b.codomain_dim(), seed);
        let v = random_vector(b.codomain_dim(), seed + 100);
        let pu = b.project(&u).unwrap();
        let pv = b.project(&v).unwrap();
        assert!((u.dotc(&pv) - pu.dotc(&v)).norm() < 1e-10);
        assert!((b.project(&pv).unwrap() - &pv).norm() < 1e-10);
    }
    // Seed-style input |+⟩|√ν⟩|0⟩ maps to a unit vector.
    let inst = grid2();
    let nu = qmh_markov::dual_stationary(&gibbs_distribution(&inst), &inst);
    let pairs = nu.len();
    let amp = DVector::from_fn(2 * pairs, |k, _| c((nu.probs[k % pairs] / 2.0).sqrt()));
    assert_abs_diff_eq!(b.apply(&amp).unwrap().norm(), 1.0, epsilon = 1e-12);
}

#[test]
fn handles_are_unitary() {
    let (_, b) = grid_box();
    let w = dual_walk(&b).unwrap();
    let v = penalise(&w, &b, VARPHI).unwrap();
    let (u, sq) = synthetic_spue_of_discriminant(&disc(&grid2())).unwrap();
    let q = qubitized_walk(&u, &sq).unwrap();
    for h in [&w, &v, &u, &q, &w.adjoint().unwrap()] {
        assert!(h.unitarity_error(100, 1).unwrap() < 1e-10, "{}", h.label());
    }
    assert!(w.adjoint().unwrap().is_adjoint());
    assert_eq!(w.dimension(), 1 << 13);
}

fn project_image(b: &PartialIsometryHandle, inst: &ProblemInstance, s: &mut SparseState) {
    let layout = b.layout().unwrap().clone();
    let regs = WalkRegisters::new(&layout).unwrap();
    let circ = boxtimes_circuit(inst, &layout).unwrap();
    s.run(&circ.inverse()).unwrap();
    let keep: Vec<(u64, C64)> = s
        .entries()
        .into_iter()
        .filter(|(i, _)| CHECK_REGISTERS.iter().all(|r| regs.by_name(r).value_of(*i) == 0))
        .collect();
    *s = SparseState::from_entries(layout, keep);
    s.run(&circ).unwrap();
}

#[test]
fn walk_fixes_target_and_does_not_commute_with_projector() {
    let (inst, b) = grid_box();
    let layout = b.layout().unwrap().clone();
    let target = target_state(&inst, layout.clone()).unwrap();
    let w = dual_walk(&b).unwrap();
    let mut s = target.clone();
    w.apply_sparse(&mut s).unwrap();
    let mut d = s.clone();
    d.axpy(c(-1.0), &target);
    assert!(d.norm_sqr().sqrt() < 1e-9);
    let report = walk_spectral_report(&b, WalkKind::Walk, Some(&target)).unwrap();
    assert!(report.zero_multiplicity > 1, "{}", report.zero_multiplicity);
    assert_eq!(report.eigenphases.len(), 1 << 12);
    // [Π⊠, 𝒲] restricted to K, where both act.
    let k = restricted_walk(&b, WalkKind::Walk).unwrap();
    let (pk, res) = k.restrict(|s| {
        project_image(&b, &inst, s);
        Ok(())
    })
    .unwrap();
    assert!(res < 1e-9);
    let comm = &pk * &k.matrix - &k.matrix * &pk;
    let norm = comm.svd(false, false).singular_values.max();
    assert!(norm > 0.01, "commutator norm {norm}");
}

#[test]
fn penalty_lifts_degeneracy_and_keeps_target() {
    let (inst, b) = grid_box();
    let layout = b.layout().unwrap().clone();
    let target = target_state(&inst, layout.clone()).unwrap();
    let w = dual_walk(&b).unwrap();
    for phi in [0.5, VARPHI, 2.0] {
        let v = penalise(&w, &b, phi).unwrap();
        let mut s = target.clone();
        v.apply_sparse(&mut s).unwrap();
        s.axpy(c(-1.0), &target);
        assert!(s.norm_sqr().sqrt() < 1e-9);
    }
    let report = walk_spectral_report(&b, WalkKind::Penalised(VARPHI), Some(&target)).unwrap();
    assert_eq!(report.zero_multiplicity, 1);
    assert_abs_diff_eq!(report.target_overlap.unwrap(), 1.0, epsilon = 1e-9);
    let walk = walk_spectral_report(&b, WalkKind::Walk, None).unwrap();
    eprintln!(
        "2x2 grid: angular gap W = {:?}, V = {:?}",
        walk.angular_gap, report.angular_gap
    );
}

#[test]
fn zero_penalty_returns_walk() {
    let (_, b) = grid_box();
    let w = dual_walk(&b).unwrap();
    let v = penalise(&w, &b, 0.0).unwrap();
    assert_eq!(v.circuit_ref().unwrap().gates.len(), w.circuit_ref().unwrap().gates.len());
    assert!(matches!(penalise(&w, &b, -0.1), Err(WalkError::Varphi(_))));
    assert!(matches!(penalise(&w, &b, 7.0), Err(WalkError::Varphi(_))));
}

#[test]
fn complement_acts_as_negated_swap() {
    let (inst, b) = grid_box();
    let layout = b.layout().unwrap().clone();
    let regs = WalkRegisters::new(&layout).unwrap();
    let mut xs = Circuit::new(layout.num_qubits());
    xs.x(regs.b.qubit(0));
    for k in 0..regs.x.width {
        xs.swap(regs.x.qubit(k), regs.z.qubit(k));
        xs.swap(regs.y.qubit(k), regs.xc.qubit(k));
    }
    let xs = CompiledCircuit::new(&xs);
    for kind in [WalkKind::Walk, WalkKind::Penalised(VARPHI)] {
        let k = restricted_walk(&b, kind).unwrap();
        assert!(k.residual < 1e-10);
        let op = match kind {
            WalkKind::Walk => dual_walk(&b).unwrap(),
            WalkKind::Penalised(phi) => penalise(&dual_walk(&b).unwrap(), &b, phi).unwrap(),
        };
        let phase = match kind {
            WalkKind::Walk => c(-1.0),
            WalkKind::Penalised(phi) => -C64::from_polar(1.0, phi),
        };
        for seed in 0..3 {
            // Random flag-clean vector with its K component removed.
            let mut v = random_vector(1 << layout.num_qubits(), seed);
            for i in 0..v.len() {
                if regs.flag.value_of(i as u64) != 0 {
                    v[i] = c(0.0);
                }
            }
            let sv = Statevector::from_amplitudes(layout.clone(), v.as_slice().to_vec()).unwrap();
            let mut s = SparseState::from_dense(&sv);
            let inside = k.lift(&k.project(&s));
            s.axpy(c(-1.0), &inside);
            let mut lhs = s.clone();
            op.apply_sparse(&mut lhs).unwrap();
            let mut rhs = s.clone();
            rhs.run_compiled(&xs);
            rhs.scale(phase);
            lhs.axpy(c(-1.0), &rhs);
            assert!(lhs.norm_sqr().sqrt() < 1e-9 * s.norm_sqr().sqrt().max(1.0));
        }
    }
    let _ = inst;
}

#[test]
fn identity_report_has_no_gap() {
    let id = LinearOperatorHandle::dense("id", DMatrix::identity(4, 4)).unwrap();
    let r = spectral_report(&id, None).unwrap();
    assert_eq!(r.zero_multiplicity, 4);
    assert_eq!(r.angular_gap, None);
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"angular_gap\":null"));
    let back: SpectralReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn dense_cap_is_enforced() {
    let inst = build_double_well(4, 1.0).unwrap();
    let b = boxtimes_from_circuits(&inst, walk_layout(&inst, 0).unwrap()).unwrap();
    assert!(matches!(b.matrix(), Err(WalkError::DenseCap { .. })));
    let w = dual_walk(&b).unwrap();
    assert!(matches!(w.matrix(), Err(WalkError::DenseCap { .. })));
    let with_p = walk_layout(&grid2(), 1).unwrap();
    let b = boxtimes_from_circuits(&grid2(), with_p).unwrap();
    assert!(matches!(walk_spectral_report(&b, WalkKind::Walk, None), Err(WalkError::PhaseRegister)));
}

#[test]
fn unitary_eigen_reconstructs_matrix() {
    let (u, sq) = synthetic_spue_of_discriminant(&disc(&grid2())).unwrap();
    let w = qubitized_walk(&u, &sq).unwrap().matrix().unwrap();
    let e = unitary_eigen(&w);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(e.phases.len(), e.phases.iter().map(|t| C64::from_polar(1.0, *t))));
    let rec = &e.vectors * d * e.vectors.adjoint();
    assert!((rec - &w).camax() < 1e-10);
    let _ = Arc::new(());
}


#[test]
fn level_edges_on_four_cycle_leave_two_fixed_directions() {
    // Two adjacent wells on the 2x2 torus: both level edges accept with
    // probability one in each direction, and Im(⊠) holds a second fixed vector
    // that no penalty phase can lift.
    let mut inst = grid2();
    inst.energy = vec![1.0, 1.0, 0.0, 0.0];
    inst.minima = vec![2, 3];
    let b = boxtimes_from_circuits(&inst, walk_layout(&inst, 0).unwrap()).unwrap();
    let target = target_state(&inst, b.layout().unwrap().clone()).unwrap();
    let report = walk_spectral_report(&b, WalkKind::Penalised(VARPHI), Some(&target)).unwrap();
    assert_eq!(report.zero_multiplicity, 2);
    assert_abs_diff_eq!(report.target_overlap.unwrap(), 1.0, epsilon = 1e-9);
}
