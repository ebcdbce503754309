use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use seqpe_core::post::{
    bitstring, distribution_distance, ed_failure_by_round, energy_to_phase, peak_stats,
    phase_to_energy, resolution, select_branch, RunStats,
};
use seqpe_core::sim::ShotRecord;

#[test]
fn reference_grid_points() {
    let e = phase_to_energy(0b01100, 5, 10.0, 0).unwrap();
    assert!((e.energy - -0.235619449).abs() < 1e-8);
    assert!((e.phi - 12.0 / 32.0).abs() < 1e-15);
    assert!((e.resolution * 1e3 - 9.817477).abs() < 1e-6);
    let wrapped = phase_to_energy(0b010011, 6, 8.0, -1).unwrap();
    assert!(wrapped.energy > 0.5);
    let b = select_branch(-0.234282, 8.0, 19.0 / 64.0).unwrap();
    assert_eq!(b, 0);
    let e = phase_to_energy(0b010011, 6, 8.0, b).unwrap();
    assert!((e.energy - -0.233165080).abs() < 1e-8);
    assert!((resolution(6, 8.0) * 1e3 - 6.135923).abs() < 1e-6);
}

#[test]
fn invalid_phase_inputs() {
    assert!(phase_to_energy(32, 5, 10.0, 0).is_err());
    assert!(phase_to_energy(1, 5, 0.0, 0).is_err());
    assert!(select_branch(0.1, -1.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn branch_recovers_energy_within_half_period(e in -0.3..0.3f64, tau in 1.0..10.0f64, m in 3usize..9) {
        let x = energy_to_phase(e, m, tau);
        let phi = x as f64 / (1u64 << m) as f64;
        let b = select_branch(e, tau, phi).unwrap();
        let est = phase_to_energy(x, m, tau, b).unwrap();
        prop_assert!((est.energy - e).abs() <= est.resolution + 1e-12);
        prop_assert!((est.resolution - PI / ((1u64 << m) as f64 * tau)).abs() < 1e-15);
    }

    #[test]
    fn phase_energy_round_trip(x in 0usize..64, tau in 0.5..10.0f64, b in -3i64..3) {
        let e = phase_to_energy(x, 6, tau, b).unwrap();
        prop_assert_eq!(energy_to_phase(e.energy, 6, tau), x);
        prop_assert!((e.energy + TAU / tau * (e.phi + b as f64)).abs() < 1e-12);
    }

    #[test]
    fn tvd_is_a_metric(raw in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64), 2..16)) {
        let norm = |v: Vec<f64>| { let s: f64 = v.iter().sum(); v.into_iter().map(|x| x / s).collect::<Vec<_>>() };
        let p = norm(raw.iter().map(|t| t.0 + 1e-3).collect());
        let q = norm(raw.iter().map(|t| t.1 + 1e-3).collect());
        let r = norm(raw.iter().map(|t| t.2 + 1e-3).collect());
        let pq = distribution_distance(&p, &q).unwrap();
        prop_assert!(pq.abs() < 1e-15 || pq > 0.0);
        prop_assert!(pq <= 1.0 + 1e-12);
        prop_assert!((pq - distribution_distance(&q, &p).unwrap()).abs() < 1e-15);
        prop_assert!(distribution_distance(&p, &p).unwrap() == 0.0);
        let pr = distribution_distance(&p, &r).unwrap();
        let rq = distribution_distance(&r, &q).unwrap();
        prop_assert!(pq <= pr + rq + 1e-12);
    }
}

#[test]
fn tvd_rejects_mismatched_inputs() {
    assert!(distribution_distance(&[1.0], &[0.5, 0.5]).is_err());
    assert!(distribution_distance(&[0.6, 0.6], &[0.5, 0.5]).is_err());
    assert!((distribution_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn peak_window_wraps_cyclically() {
    let d = [0.3, 0.1, 0.0, 0.1, 0.2, 0.3];
    let s = peak_stats(&d, Some(0)).unwrap();
    assert_eq!(s.modal, 0);
    assert!((s.modal_share - 0.3).abs() < 1e-15);
    assert!((s.window_share.unwrap() - 0.7).abs() < 1e-15);
    assert!(peak_stats(&[], None).is_err());
    assert!(peak_stats(&[0.0, 0.0], None).is_err());
}

#[test]
fn run_stats_from_distribution() {
    let mut d = vec![0.0; 32];
    d[12] = 0.9;
    d[13] = 0.1;
    let s = RunStats::from_distribution(&d, 5, 10.0, Some(-0.234282)).unwrap();
    assert_eq!(s.modal, "01100");
    assert!((s.energy - -0.235619449).abs() < 1e-8);
    assert_eq!(s.retention, 1.0);
    assert_eq!(bitstring(3, 5), "00011");
}

#[test]
fn ed_failures_split_by_round() {
    let rec = |ed: [bool; 4]| ShotRecord {
        shot: 0,
        phase: 0,
        n_phase: 1,
        ed: ed.to_vec(),
    };
    let recs = [
        rec([false, false, false, true]),
        rec([true, false, false, false]),
        rec([false, false, false, false]),
        rec([false, false, true, true]),
    ];
    assert_eq!(ed_failure_by_round(&recs, 2).unwrap(), vec![0.25, 0.5]);
    assert_eq!(
        ed_failure_by_round(&recs, 4).unwrap(),
        vec![0.25, 0.0, 0.25, 0.5]
    );
    assert!(ed_failure_by_round(&recs, 3).is_err());
    assert!(ed_failure_by_round(&[], 1).is_err());
}
