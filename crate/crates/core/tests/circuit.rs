use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use seqpe_core::circuit::{
    cat_fanout, controlled_pauli_exp, count, depth, givens, inverse_qft, pauli_exp, Circuit,
    CostSummary, EvolutionStep, Gate, GateClass, GateKind,
};
use seqpe_core::pauli::{evolution_matrix, Pauli, PauliSum, PauliWord};
use seqpe_core::sim::unitary;
use seqpe_core::Error;

fn close(a: &DMatrix<C>, b: &DMatrix<C>, tol: f64) -> bool {
    a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= tol)
}

fn block_diag(a: &DMatrix<C>, b: &DMatrix<C>) -> DMatrix<C> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

fn arb_word(n: usize) -> impl Strategy<Value = PauliWord> {
    prop::collection::vec(0u8..4, n)
        .prop_map(|codes| {
            PauliWord::new(codes.into_iter().enumerate().filter_map(|(q, c)| match c {
                1 => Some((q, Pauli::X)),
                2 => Some((q, Pauli::Y)),
                3 => Some((q, Pauli::Z)),
                _ => None,
            }))
        })
        .prop_filter("non-identity", |w| !w.is_identity())
}

fn exp_oracle(w: &PauliWord, n: usize, angle: f64) -> DMatrix<C> {
    evolution_matrix(&PauliSum::from_real([(w.clone(), 1.0)]), n, angle).unwrap()
}

proptest! {
    #[test]
    fn pauli_exponential_matches_matrix_exponential(w in arb_word(3), angle in -3.0..3.0f64) {
        let mut c = Circuit::new(3);
        c.append_mapped(&pauli_exp(&w, angle).unwrap(), &(0..w.max_qubit().unwrap() + 1).collect::<Vec<_>>(), &[]).unwrap();
        prop_assert!(close(&unitary::<f64>(&c).unwrap(), &exp_oracle(&w, 3, angle), 1e-10));
    }

    #[test]
    fn controlled_exponential_is_block_diagonal(w in arb_word(3), angle in -3.0..3.0f64) {
        let mut c = Circuit::new(4);
        let inner = controlled_pauli_exp(&w, angle, 3).unwrap();
        c.append_mapped(&inner, &(0..inner.n_qubits()).collect::<Vec<_>>(), &[]).unwrap();
        let want = block_diag(&DMatrix::identity(8, 8), &exp_oracle(&w, 3, angle));
        prop_assert!(close(&unitary::<f64>(&c).unwrap(), &want, 1e-10));
    }

    #[test]
    fn step_inverse_undoes_step(ws in prop::collection::vec((arb_word(3), -1.0..1.0f64), 1..5)) {
        let mut step = EvolutionStep::new(3);
        for (w, a) in ws {
            step.push(w, a).unwrap();
        }
        let u = unitary::<f64>(&step.circuit()).unwrap();
        let v = unitary::<f64>(&step.inverse().circuit()).unwrap();
        prop_assert!(close(&(v * u), &DMatrix::identity(8, 8), 1e-10));
    }
}

#[test]
fn identity_word_controlled_is_a_phase_on_the_control() {
    let c = controlled_pauli_exp(&PauliWord::identity(), 0.4, 0).unwrap();
    let u = unitary::<f64>(&c).unwrap();
    assert!((u[(0, 0)] - C::new(1.0, 0.0)).norm() < 1e-12);
    assert!((u[(1, 1)] - C::from_polar(1.0, -0.4)).norm() < 1e-12);
    assert!(controlled_pauli_exp(&PauliWord::zz(0, 1), 0.1, 1).is_err());
    assert!(matches!(
        pauli_exp(&PauliWord::identity(), 0.1),
        Err(Error::EmptyPauli)
    ));
}

#[test]
fn evolution_step_matches_ordered_product() {
    let mut step = EvolutionStep::new(2);
    step.push(PauliWord::zz(0, 1), 0.3).unwrap();
    step.push(PauliWord::new([(0, Pauli::X), (1, Pauli::Y)]), -0.7)
        .unwrap();
    let first = exp_oracle(&PauliWord::zz(0, 1), 2, 0.3);
    let second = exp_oracle(&PauliWord::new([(0, Pauli::X), (1, Pauli::Y)]), 2, -0.7);
    assert!(close(
        &unitary::<f64>(&step.circuit()).unwrap(),
        &(&second * &first),
        1e-10
    ));
    let cu = unitary::<f64>(&step.controlled_circuit()).unwrap();
    assert!(close(
        &cu,
        &block_diag(&DMatrix::identity(4, 4), &(second * first)),
        1e-10
    ));
}

#[test]
fn givens_rotation_mixes_single_excitations_only() {
    let theta = 0.37;
    let u = unitary::<f64>(&givens(0, theta)).unwrap();
    assert!((u[(0, 0)] - C::new(1.0, 0.0)).norm() < 1e-12);
    assert!((u[(3, 3)] - C::new(1.0, 0.0)).norm() < 1e-12);
    for (r, c) in [(0, 1), (0, 2), (3, 1), (3, 2), (1, 0), (2, 3)] {
        assert!(u[(r, c)].norm() < 1e-12);
    }
    assert!((u[(1, 1)].norm() - theta.cos().abs()).abs() < 1e-12);
    assert!((u[(2, 1)].norm() - theta.sin().abs()).abs() < 1e-12);
    assert!(u.iter().all(|z| z.im.abs() < 1e-12));
}

#[test]
fn inverse_qft_reads_out_fourier_phase() {
    let m = 4;
    let d = 1usize << m;
    let u = unitary::<f64>(&inverse_qft(m)).unwrap();
    for x in 0..d {
        let phi = DMatrix::from_fn(d, 1, |k, _| {
            C::from_polar(
                1.0 / (d as f64).sqrt(),
                2.0 * PI * (x * k) as f64 / d as f64,
            )
        });
        let out = &u * phi;
        let reversed = (0..m).fold(0, |acc, k| acc | ((x >> k & 1) << (m - 1 - k)));
        assert!((out[(reversed, 0)].norm() - 1.0).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn cat_fanout_reaches_every_target_in_log_depth() {
    for len in [0usize, 1, 2, 3, 5, 7, 8, 15] {
        let targets: Vec<usize> = (1..=len).collect();
        let pairs = cat_fanout(0, &targets);
        assert_eq!(pairs.len(), len);
        let mut c = Circuit::new(len + 1);
        let mut have = vec![0usize];
        for &(a, b) in &pairs {
            assert!(have.contains(&a) && !have.contains(&b));
            have.push(b);
            c.cx(a, b);
        }
        let want = (usize::BITS - len.leading_zeros()) as u64;
        assert_eq!(depth(&c, GateClass::Cx), want, "len = {len}");
    }
}

#[test]
fn inverse_and_control_round_trip() {
    let mut c = Circuit::new(2);
    c.h(0)
        .s(1)
        .cx(0, 1)
        .ry(1, 0.4)
        .rz(0, -0.2)
        .phase(1, 0.125)
        .x(0)
        .sdg(0);
    let u = unitary::<f64>(&c).unwrap();
    let v = unitary::<f64>(&c.inverse().unwrap()).unwrap();
    assert!(close(&(&v * &u), &DMatrix::identity(4, 4), 1e-12));
    let cu = unitary::<f64>(&c.controlled().unwrap()).unwrap();
    assert!(close(&cu, &block_diag(&DMatrix::identity(4, 4), &u), 1e-12));

    let mut bad = Circuit::new(3);
    bad.cswap(0, 1, 2);
    assert!(bad.controlled().is_err());
    let mut meas = Circuit::new(1);
    meas.add_creg("c", 1);
    meas.measure(0, 0);
    assert!(meas.inverse().is_err());
}

#[test]
fn invalid_gates_are_rejected() {
    let mut c = Circuit::new(2);
    assert!(matches!(
        c.try_push(Gate::new(GateKind::H, &[2])),
        Err(Error::QubitOutOfRange { .. })
    ));
    assert!(c.try_push(Gate::new(GateKind::CX, &[0, 0])).is_err());
    assert!(c.try_push(Gate::new(GateKind::CX, &[0])).is_err());
    assert!(c.try_push(Gate::new(GateKind::Rz(f64::NAN), &[0])).is_err());
    assert!(c.try_push(Gate::new(GateKind::Measure, &[0])).is_err());
    assert!(c.is_empty());
}

#[test]
fn text_form_round_trips() {
    let mut c = Circuit::empty();
    let a = c.add_qreg("phase", 2);
    let b = c.add_qreg("sys", 3);
    let bits = c.add_creg("phase", 2);
    c.h(a.get(0))
        .cswap(a.get(1), b.get(0), b.get(2))
        .rz(b.get(1), 0.1234567890123);
    c.push(Gate::new(GateKind::Phase(-0.25), &[a.get(0)]).controlled_by(a.get(1)));
    c.barrier(&[0, 1])
        .reset(b.get(0))
        .measure(a.get(0), bits.get(1));
    let back = Circuit::from_text(&c.to_text()).unwrap();
    assert_eq!(back, c);
    match Circuit::from_text("QUBITS 1\nCBITS 0\nFOO 0\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn metric_weights_follow_decomposition_constants() {
    let mut c = Circuit::new(3);
    c.cswap(0, 1, 2).cswap(0, 1, 2);
    let s = CostSummary::of(&c, 10);
    assert_eq!((s.cx_count, s.cx_depth), (14, 14));
    assert_eq!((s.t_count, s.t_depth), (14, 8));
    assert_eq!((s.two_qubit_count, s.rz_count), (2, 0));

    let mut r = Circuit::new(3);
    r.rz(0, 0.1).rz(1, 0.2).cx(0, 1).rz(1, 0.3).h(2);
    assert_eq!(count(&r, GateClass::Rz), 3);
    assert_eq!(depth(&r, GateClass::Rz), 2);
    assert_eq!(count(&r, GateClass::T { t_eps: 5 }), 15);
    assert_eq!(depth(&r, GateClass::Cx), 1);

    let mut b = Circuit::new(2);
    b.cx(0, 1).barrier(&[0, 1]).cx(0, 1);
    assert_eq!(depth(&b, GateClass::Cx), 2);
}
