use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64 as C;
use proptest::prelude::*;
use seqpe_core::circuit::{Circuit, EvolutionStep};
use seqpe_core::ethylene::PppParams;
use seqpe_core::experiment::{Experiment, InputState, Variant};
use seqpe_core::pauli::{DenseState, Pauli, PauliWord};
use seqpe_core::post::distribution_distance;
use seqpe_core::qpe::{
    canonical_qpe, cswap_gadget, se_qpe, BlockChoice, GadgetSpec, QpeProblem, ReferencePhase,
    VariantPolicy,
};
use seqpe_core::sim::{evolve, phase_marginal, sample};

fn rz_step(alpha: f64) -> EvolutionStep {
    let mut s = EvolutionStep::new(1);
    s.push(PauliWord::single(0, Pauli::Z), alpha / 2.0).unwrap();
    s
}

fn experiment(m: usize, tau: f64) -> Experiment {
    Experiment::new(PppParams::default(), m, tau, InputState::MeanField).unwrap()
}

/// Control `|+>`, lane A `|1>` (eigenphase `+α/4π`), lane B `|0>` (eigenphase `-α/4π`).
#[test]
fn single_qubit_gadget_kicks_back_relative_phase() {
    for alpha in [0.3, 1.7, -2.2] {
        let step = rz_step(alpha);
        let phi = alpha / (2.0 * TAU);
        let phi_ref = (-phi).rem_euclid(1.0);
        let g = cswap_gadget(&GadgetSpec {
            ua: Circuit::new(1),
            ub: step.circuit(),
            theta: phi_ref,
            use_cat: false,
            measure_reset: false,
        })
        .unwrap();
        let mut amps = vec![C::new(0.0, 0.0); 8];
        amps[0b010] = C::new(FRAC_1_SQRT_2, 0.0);
        amps[0b011] = C::new(FRAC_1_SQRT_2, 0.0);
        let out = evolve(&g, DenseState::from_amplitudes(3, amps).unwrap()).unwrap();
        let a = out.amplitudes();
        assert!((a[0b010].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((a[0b011].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        let rel = a[0b011] / a[0b010];
        assert!(
            (rel - C::from_polar(1.0, TAU * phi)).norm() < 1e-12,
            "alpha = {alpha}"
        );
    }
}

#[test]
fn gadget_equals_controlled_step_on_eigenstates() {
    let alpha = 0.9;
    let step = rz_step(alpha);
    let reference = ReferencePhase {
        theta: (-alpha / (2.0 * TAU)).rem_euclid(1.0),
        e_vac: 0.0,
        tau: 1.0,
    };
    let mut prep = Circuit::new(1);
    prep.x(0);
    for m in 1..=4 {
        let p = QpeProblem {
            m,
            step: step.clone(),
            psi_prep: prep.clone(),
            ref_prep: Circuit::new(1),
            reference,
            hadamards: true,
        };
        let qpe = phase_marginal::<f64>(&canonical_qpe(&p).unwrap()).unwrap();
        let se = phase_marginal::<f64>(
            &se_qpe(&p, &VariantPolicy::all_gadget(m, false, false)).unwrap(),
        )
        .unwrap();
        assert!(distribution_distance(&qpe, &se).unwrap() < 1e-10, "m = {m}");
    }
}

#[test]
fn idle_control_kicks_back_nothing() {
    let e = experiment(3, 10.0);
    let mut p = e.problem.clone();
    p.hadamards = false;
    let c = se_qpe(&p, &VariantPolicy::all_gadget(3, true, false)).unwrap();
    let d = phase_marginal::<f64>(&c).unwrap();
    assert!(d.iter().all(|p| (p - 0.125).abs() < 1e-10));
}

#[test]
fn register_widths_per_variant() {
    for (m, tau, plain, cat) in [(5, 10.0, 13, 16), (6, 8.0, 14, 17)] {
        let e = experiment(m, tau);
        assert_eq!(e.circuit(&Variant::Qpe).unwrap().n_qubits(), m + 4);
        assert_eq!(e.circuit(&Variant::SeQpe).unwrap().n_qubits(), plain);
        assert_eq!(e.circuit(&Variant::CatSeQpe).unwrap().n_qubits(), cat);
        assert_eq!(e.circuit(&Variant::CatSeQpeMr).unwrap().n_qubits(), cat);
        assert_eq!(e.circuit(&Variant::CuQpe).unwrap().n_qubits(), m + 4);
    }
}

#[test]
fn ed_register_sizes() {
    let e = experiment(5, 10.0);
    assert_eq!(e.circuit(&Variant::Qpe).unwrap().n_cbits(), 5);
    assert_eq!(e.circuit(&Variant::SeQpe).unwrap().n_cbits(), 5 + 4);
    assert_eq!(e.circuit(&Variant::CatSeQpe).unwrap().n_cbits(), 5 + 7);
    assert_eq!(
        e.circuit(&Variant::CatSeQpeMr).unwrap().n_cbits(),
        5 + 5 * 7
    );
    assert_eq!(e.circuit(&Variant::Mixed).unwrap().n_cbits(), 5 + 4);
}

#[test]
fn measure_reset_outcomes_are_deterministic() {
    let e = experiment(5, 10.0);
    let recs = e.sample(&Variant::CatSeQpeMr, 300, None, 11).unwrap();
    assert!(recs.iter().all(|r| !r.flagged()));
    assert_eq!(recs[0].ed.len(), 35);
}

#[test]
fn bit_thetas_double_modulo_one() {
    let r = ReferencePhase::from_energy(0.344282, 10.0).unwrap();
    let want = (-10.0 * 0.344282 / TAU).rem_euclid(1.0);
    assert!((r.theta - want).abs() < 1e-15);
    for j in 0..8 {
        let direct = (want * (1u64 << j) as f64).rem_euclid(1.0);
        assert!((r.bit_theta(j) - direct).abs() < 1e-12);
    }
    assert!(ReferencePhase::from_energy(0.1, 0.0).is_err());
}

#[test]
fn policy_strings_round_trip() {
    let p = VariantPolicy::parse("cGgc", true, false).unwrap();
    assert_eq!(p.m(), 4);
    assert_eq!(p.gadget_rounds(), 2);
    assert_eq!(p.choices[1], BlockChoice::Gadget);
    assert_eq!(p.policy_string(), "cggc");
    assert!(VariantPolicy::parse("", false, false).is_err());
    assert!(VariantPolicy::parse("cx", false, false).is_err());
    let v: Variant = "policy:gcg+cat+mr".parse().unwrap();
    let pol = v.policy(3).unwrap();
    assert!(pol.cat && pol.measure_reset);
    for name in Variant::NAMED {
        assert_eq!(name.parse::<Variant>().unwrap().to_string(), name);
    }
    assert!("qpe2".parse::<Variant>().is_err());
}

#[test]
fn builders_reject_bad_inputs() {
    let e = experiment(3, 10.0);
    assert!(se_qpe(&e.problem, &VariantPolicy::all_gadget(4, false, false)).is_err());
    assert!(QpeProblem::new(
        0,
        e.problem.step.clone(),
        e.problem.psi_prep.clone(),
        e.problem.reference
    )
    .is_err());
    assert!(QpeProblem::new(
        3,
        e.problem.step.clone(),
        Circuit::new(3),
        e.problem.reference
    )
    .is_err());
    let bad = GadgetSpec {
        ua: Circuit::new(2),
        ub: Circuit::new(3),
        theta: 0.0,
        use_cat: false,
        measure_reset: false,
    };
    assert!(cswap_gadget(&bad).is_err());
    assert!(Experiment::new(PppParams::default(), 3, -1.0, InputState::MeanField).is_err());
}

#[test]
fn noisy_mr_rounds_flag_some_shots() {
    let e = experiment(3, 10.0);
    let noise = seqpe_core::sim::NoiseConfig { p2: 0.02, pm: 0.02 };
    let c = e.circuit(&Variant::CatSeQpeMr).unwrap();
    let recs = sample(&c, 200, Some(&noise), 5).unwrap();
    assert!(recs.iter().any(|r| r.flagged()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn any_policy_reproduces_canonical_distribution(
        choices in prop::collection::vec(any::<bool>(), 3),
        cat in any::<bool>(),
        mr in any::<bool>(),
        theta in 0.0..1.5f64,
    ) {
        let e = Experiment::new(PppParams::default(), 3, 10.0, InputState::Angle(theta)).unwrap();
        let qpe = e.exact_distribution(&Variant::Qpe).unwrap();
        let policy = VariantPolicy {
            choices: choices.iter().map(|&g| if g { BlockChoice::Gadget } else { BlockChoice::Controlled }).collect(),
            cat,
            measure_reset: mr,
        };
        let d = e.exact_distribution(&Variant::Policy(policy)).unwrap();
        prop_assert!(distribution_distance(&qpe, &d).unwrap() < 1e-9);
    }
}
