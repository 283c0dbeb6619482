use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qmh_circuits::{target_state, walk_layout};
use qmh_filter::*;
use qmh_markov::{build_double_well, build_ising, gibbs_distribution, ProblemInstance};
use qmh_metrics::{fidelity, tv_distance};
use qmh_sim::{Circuit, GateKind, QuantumState, RegisterLayout, SparseState};
use qmh_walk::{unitary_eigen, LinearOperatorHandle};
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

#[allow(clippy::approx_constant)]
const VARPHI: f64 = 1.0472;

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn double_well() -> ProblemInstance {
    build_double_well(4, 1.0).unwrap()
}

fn ising() -> ProblemInstance {
    build_ising(4, 1.0, 0.0, 1.0).unwrap()
}

#[test]
fn dirichlet_examples() {
    for m in 1..8 {
        assert_eq!(dirichlet_weight(0.0, m), 1.0);
        assert!(dirichlet_weight(TAU / (1u64 << m) as f64, m).abs() < 1e-15);
        assert_abs_diff_eq!(dirichlet_weight(TAU, m).abs(), 1.0, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(dirichlet_weight(PI / 2.0, 1), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_abs_diff_eq!(dirichlet_weight(1e-9, 4), 1.0, epsilon = 1e-12);
}

#[test]
fn survival_examples() {
    assert_abs_diff_eq!(survival_probability(0.6, 0.0, 3), 0.36, epsilon = 1e-15);
    assert!(survival_probability(0.6, TAU / 8.0, 3) < 1e-30);
}

#[test]
fn required_precision_examples() {
    assert_eq!(required_precision(1.0).unwrap(), 3);
    assert_eq!(required_precision(4.0 * PI * PI / 1024.0).unwrap(), 5);
    assert!(required_precision(0.0).is_err());
    assert!(required_precision(-1.0).is_err());
    assert!(required_precision(1.5).is_err());
}

proptest! {
    #[test]
    fn prop_precision_halving_adds_at_most_one(delta in 1e-8f64..1.0) {
        let a = required_precision(delta).unwrap();
        let b = required_precision(delta / 2.0).unwrap();
        prop_assert!(b == a || b == a + 1);
        prop_assert!(TAU / (1u64 << a) as f64 <= delta.sqrt());
        prop_assert!(a == 1 || TAU / (1u64 << (a - 1)) as f64 > delta.sqrt());
    }

    #[test]
    fn prop_dirichlet_bounded(phi in -10.0f64..10.0, m in 1usize..10) {
        prop_assert!(dirichlet_weight(phi, m).abs() <= 1.0 + 1e-12);
    }
}

#[test]
fn spec_validation() {
    assert!(matches!(FilterSpec::new(0, VARPHI, FilterMode::Oracle), Err(FilterError::Precision)));
    assert!(matches!(FilterSpec::new(2, TAU, FilterMode::Oracle), Err(FilterError::Varphi(_))));
    assert!(matches!(FilterSpec::new(2, -0.1, FilterMode::Oracle), Err(FilterError::Varphi(_))));
    assert_eq!("power-sum-oracle".parse::<FilterMode>().unwrap(), FilterMode::Oracle);
    assert_eq!("coherent".parse::<FilterMode>().unwrap(), FilterMode::Coherent);
    assert!("bogus".parse::<FilterMode>().is_err());
}

fn phase_flip() -> (LinearOperatorHandle, Arc<RegisterLayout>) {
    let layout = Arc::new(RegisterLayout::new().with("q", 1).unwrap());
    let mut circ = Circuit::new(1);
    circ.add(GateKind::Phase(0, PI), &[]);
    (LinearOperatorHandle::circuit("z", circ, layout.clone()).unwrap(), layout)
}

#[test]
fn power_sum_on_eigenstates() {
    let (z, layout) = phase_flip();
    let (out, prob) = power_sum_filter(&z, &SparseState::basis(layout.clone(), 0), 3).unwrap();
    assert_abs_diff_eq!(prob, 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(out.amplitude(0).re, 1.0, epsilon = 1e-15);
    assert!(matches!(power_sum_filter(&z, &SparseState::basis(layout, 1), 1), Err(FilterError::EmptyBranch(_))));

    let inst = build_double_well(2, 1.0).unwrap();
    let layout = walk_layout(&inst, 0).unwrap();
    let v = LinearOperatorHandle::circuit("v", pipeline_operator(&inst, &layout, VARPHI, true).unwrap(), layout.clone()).unwrap();
    let target = target_state(&inst, layout).unwrap();
    let (out, prob) = power_sum_filter(&v, &target, 3).unwrap();
    assert_abs_diff_eq!(prob, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(out.inner(&target).norm(), 1.0, epsilon = 1e-12);
}

fn assert_modes_agree(inst: &ProblemInstance, varphi: f64, m: usize) {
    let penalised = varphi != 0.0;
    let oracle = run_oracle_sweep(inst, varphi, penalised, &[m]).unwrap().remove(0);
    for mode in [FilterMode::Coherent, FilterMode::Semiclassical] {
        let r = run_pipeline(inst, &FilterSpec::new(m, varphi, mode).unwrap(), penalised).unwrap();
        let gap = linf(&r.p_x, &oracle.p_x);
        let dp = (r.success_probability - oracle.success_probability).abs();
        assert!(gap <= 1e-9, "{} {mode} m={m} varphi={varphi}: p_X gap {gap:e}", inst.label());
        assert!(dp <= 1e-10, "{} {mode} m={m} varphi={varphi}: probability gap {dp:e}", inst.label());
    }
}

#[test]
fn modes_agree_on_double_well() {
    for m in 1..=4 {
        for varphi in [0.0, VARPHI] {
            assert_modes_agree(&double_well(), varphi, m);
        }
    }
}

#[test]
fn modes_agree_on_ising() {
    for m in 1..=4 {
        for varphi in [0.0, VARPHI] {
            assert_modes_agree(&ising(), varphi, m);
        }
    }
}

#[test]
fn krylov_oracle_matches_full_space_power_sum() {
    let inst = double_well();
    let layout = walk_layout(&inst, 0).unwrap();
    let v = LinearOperatorHandle::circuit("v", pipeline_operator(&inst, &layout, VARPHI, true).unwrap(), layout.clone()).unwrap();
    let mut seed = SparseState::basis(layout.clone(), 0);
    seed.run(&qmh_circuits::seed_circuit(&inst, &layout).unwrap()).unwrap();
    let (_, prob) = power_sum_filter(&v, &seed, 3).unwrap();
    let oracle = run_oracle_sweep(&inst, VARPHI, true, &[3]).unwrap();
    assert_abs_diff_eq!(prob, oracle[0].success_probability, epsilon = 1e-10);
}

#[test]
fn semiclassical_rounds_multiply_to_success() {
    let r = run_pipeline(&double_well(), &FilterSpec::new(3, VARPHI, FilterMode::Semiclassical).unwrap(), true).unwrap();
    assert_eq!(r.round_probs.len(), 3);
    assert_abs_diff_eq!(r.round_probs.iter().product::<f64>(), r.success_probability, epsilon = 1e-15);
    assert_abs_diff_eq!(r.p_x.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
}

#[test]
fn survival_sum_matches_success_probability() {
    let inst = build_double_well(2, 1.0).unwrap();
    let layout = walk_layout(&inst, 0).unwrap();
    let krylov = seed_krylov(&inst, &layout, VARPHI, true).unwrap();
    let eig = unitary_eigen(&krylov.matrix);
    let results = run_oracle_sweep(&inst, VARPHI, true, &[1, 2, 3, 4, 5]).unwrap();
    for r in results {
        let total: f64 = eig
            .phases
            .iter()
            .enumerate()
            .map(|(j, &phi)| survival_probability(eig.vectors[(0, j)].norm(), phi, r.m))
            .sum();
        assert_abs_diff_eq!(total, r.success_probability, epsilon = 1e-9);
    }
}

#[test]
fn filtering_improves_monotonically_with_precision() {
    let inst = double_well();
    let pi = gibbs_distribution(&inst).probs;
    let rows = run_oracle_sweep(&inst, VARPHI, true, &[1, 2, 3, 4]).unwrap();
    let f: Vec<f64> = rows.iter().map(|r| fidelity(&r.p_x, &pi).unwrap()).collect();
    let d: Vec<f64> = rows.iter().map(|r| tv_distance(&r.p_x, &pi).unwrap()).collect();
    for k in 1..4 {
        assert!(f[k] >= f[k - 1], "{f:?}");
        assert!(d[k] <= d[k - 1], "{d:?}");
        assert!(rows[k].success_probability <= rows[k - 1].success_probability);
    }
}

#[test]
fn exact_filter_recovers_target() {
    for inst in [build_double_well(2, 1.0).unwrap(), double_well()] {
        let pi = gibbs_distribution(&inst).probs;
        let (p, weight) = exact_filter(&inst, VARPHI, true).unwrap();
        assert!(linf(&p.probs, &pi) <= 1e-9, "{}: {:e}", inst.label(), linf(&p.probs, &pi));
        assert!(weight > 0.0 && weight <= 1.0 + 1e-12);
    }
}

#[test]
fn near_zero_beta_ising_gives_uniform() {
    let inst = build_ising(4, 1.0, 0.0, 1e-9).unwrap();
    for r in run_oracle_sweep(&inst, VARPHI, true, &[3, 4, 5, 6]).unwrap() {
        let gap = r.p_x.iter().map(|p| (p - 1.0 / 16.0).abs()).fold(0.0, f64::max);
        assert!(gap <= 1e-6, "m={}: {gap:e}", r.m);
    }
}

#[test]
fn coherent_mode_rejects_oversized_register() {
    let err = run_pipeline(&double_well(), &FilterSpec::new(6, VARPHI, FilterMode::Coherent).unwrap(), true).unwrap_err();
    assert!(matches!(err, FilterError::Cap { needed: 29, cap: 28 }), "{err}");
    assert!(err.to_string().contains("semiclassical"));
}

#[test]
fn result_json_schema() {
    let r = run_pipeline(&ising(), &FilterSpec::new(2, VARPHI, FilterMode::Semiclassical).unwrap(), true).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    for key in ["instance", "mode", "m", "varphi", "penalised", "success_probability", "p_X", "round_probs"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["mode"], "semiclassical");
    assert_eq!(json["p_X"].as_array().unwrap().len(), 16);
    let back: PipelineResult = serde_json::from_value(json).unwrap();
    assert_eq!(back, r);
}
