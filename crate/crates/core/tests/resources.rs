use num_rational::Ratio;
use proptest::prelude::*;
use seqpe_core::circuit::CostSummary;
use seqpe_core::resources::{
    block_cost, breakeven_bit, closed_form_step_cost, lambda_norm, overhead_ratios,
    primitive_costs, reports_csv, round_robin, scan, step_cost, swap_pair_circuit, t_per_rotation,
    totals_and_gains, u0_circuit, ul_circuit, w_circuit, CostVector, DfSpec, Method, Metric, Order,
    ScanConfig, StepCosts, SyntheticSpec,
};
use seqpe_core::{CostVectorF, CostVectorQ};

type Q = Ratio<i64>;

fn q(v: i64) -> Q {
    Q::from_integer(v)
}

/// CX count and depth of the per-step polynomials, evaluated directly.
fn cx_poly(order: u32, controlled: bool, n: i64, l: i64) -> (i64, i64) {
    match (order, controlled) {
        (1, false) => (
            2 * l * n * n + 2 * n * n - 2 * l * n - 2 * n,
            6 * l * n + 8 * n - 8 * l - 12,
        ),
        (1, true) => (
            3 * l * n * n + 2 * n * n - 3 * l * n,
            l * n * n + 5 * l * n + 10 * n - 8 * l - 12,
        ),
        (2, false) => (
            4 * l * n * n + n * n - 4 * l * n - n,
            12 * l * n + 6 * n - 16 * l - 10,
        ),
        _ => (
            6 * l * n * n - 6 * l * n + 4 * n,
            2 * l * n * n - n * n + 10 * l * n + 11 * n - 16 * l - 10,
        ),
    }
}

fn steps(order: Order, n: usize, l: usize, spin: bool) -> StepCosts<f64> {
    StepCosts {
        plain: step_cost(order, n, l, false, spin, 1.0).unwrap(),
        controlled: step_cost(order, n, l, true, spin, 1.0).unwrap(),
    }
}

#[test]
fn step_cost_reference_values() {
    let t = q(1);
    let a = step_cost(Order::First, 6, 10, false, false, t).unwrap();
    assert_eq!((a.cx_count, a.cx_depth), (q(660), q(316)));
    assert_eq!(
        step_cost(Order::First, 6, 10, true, false, t)
            .unwrap()
            .cx_count,
        q(972)
    );
    assert_eq!(
        step_cost(Order::Second, 6, 10, false, false, t)
            .unwrap()
            .cx_count,
        q(1230)
    );
    assert!(step_cost::<i64>(Order::First, 6, 0, false, false, 1).is_err());
    assert!(Order::from_int(3).is_err());
}

#[test]
fn primitive_rows_at_six_orbitals() {
    let p = primitive_costs::<i64>(6, false, 1).unwrap();
    assert_eq!(
        (p.ul.cx_count, p.ul.cx_depth, p.ul.rz_count, p.ul.rz_depth),
        (30, 10, 15, 5)
    );
    assert_eq!(
        (
            p.cu0.cx_count,
            p.cu0.cx_depth,
            p.cu0.rz_count,
            p.cu0.rz_depth
        ),
        (12, 12, 12, 2)
    );
    let s = primitive_costs::<i64>(6, true, 1).unwrap();
    assert_eq!((s.w.cx_count, s.w.cx_depth), (12, 6));
    assert_eq!(p.swap_pair_cat.cx_count, 94);
    assert_eq!(p.swap_pair_cat.cx_depth, 14 + 2 * 3);
    assert_eq!(p.swap_pair_serial.cx_count, 84);
    assert!(primitive_costs::<i64>(5, false, 1).is_err());
    assert!(primitive_costs::<i64>(2, true, 1).is_err());
    let t = primitive_costs::<i64>(6, false, 11).unwrap();
    assert_eq!(t.ul.t_count, 15 * 11);
    assert_eq!(t.swap_pair_serial.t_count, 84);
}

#[test]
fn compiled_primitives_match_rows() {
    for n in [4usize, 6] {
        let p = primitive_costs::<i64>(n, false, 1).unwrap();
        let spin = primitive_costs::<i64>(n, true, 1).unwrap();
        let rows = [
            (u0_circuit(n, &[], false).unwrap(), p.u0, true),
            (ul_circuit(n, &[], false).unwrap(), p.ul, true),
            (u0_circuit(n, &[], true).unwrap(), p.cu0, false),
            (ul_circuit(n, &[], true).unwrap(), p.cul, false),
            (w_circuit(n, false, &[]).unwrap(), p.w, true),
            (w_circuit(n, true, &[]).unwrap(), spin.w, true),
            (
                swap_pair_circuit(n, false).unwrap(),
                p.swap_pair_serial,
                false,
            ),
            (swap_pair_circuit(n, true).unwrap(), p.swap_pair_cat, false),
        ];
        for (k, (c, want, exact)) in rows.into_iter().enumerate() {
            let s = CostSummary::of(&c, 1);
            assert_eq!(
                (s.cx_count as i64, s.rz_count as i64),
                (want.cx_count, want.rz_count),
                "n={n} row {k}"
            );
            if exact {
                assert_eq!(
                    (s.cx_depth as i64, s.rz_depth as i64),
                    (want.cx_depth, want.rz_depth),
                    "n={n} row {k}"
                );
            } else {
                assert!(
                    s.cx_depth as i64 <= want.cx_depth && s.rz_depth as i64 <= want.rz_depth,
                    "n={n} row {k}"
                );
            }
        }
    }
}

#[test]
fn round_robin_pairs_every_orbital_once() {
    for n in [2usize, 4, 6, 10] {
        let rounds = round_robin(n);
        assert_eq!(rounds.len(), n - 1);
        let mut seen = std::collections::BTreeSet::new();
        for r in &rounds {
            assert_eq!(r.len(), n / 2);
            let mut used: Vec<usize> = r.iter().flat_map(|&(a, b)| [a, b]).collect();
            used.sort();
            assert_eq!(used, (0..n).collect::<Vec<_>>());
            for &(a, b) in r {
                assert!(seen.insert((a.min(b), a.max(b))));
            }
        }
        assert_eq!(seen.len(), n * (n - 1) / 2);
    }
}

proptest! {
    #[test]
    fn composition_equals_polynomials(half in 1usize..21, l in 1usize..64, second in any::<bool>(), controlled in any::<bool>()) {
        let n = 2 * half;
        let order = if second { Order::Second } else { Order::First };
        let t = Q::new(17, 3);
        let a: CostVectorQ = step_cost(order, n, l, controlled, false, t).unwrap();
        let b = closed_form_step_cost(order, n, l, controlled, t).unwrap();
        prop_assert_eq!(a, b);
        let (cx, cxd) = cx_poly(if second { 2 } else { 1 }, controlled, n as i64, l as i64);
        prop_assert_eq!((a.cx_count, a.cx_depth), (q(cx), q(cxd)));
        prop_assert_eq!(a.t_count, a.rz_count * t);
        prop_assert!(a.is_nonnegative());
    }

    #[test]
    fn gains_shrink_with_more_bits(half in 2usize..10, l in 5usize..30, m in 1u32..30) {
        let s = steps(Order::First, 2 * half, l, false);
        let swap = primitive_costs::<f64>(2 * half, false, 1.0).unwrap().swap_pair_cat;
        let a = totals_and_gains(m, &s, &swap).unwrap();
        let b = totals_and_gains(m + 1, &s, &swap).unwrap();
        for metric in Metric::ALL {
            prop_assert!(b.gains.get(metric) <= a.gains.get(metric) + 1e-12, "{:?}", metric);
            prop_assert!(b.gains_closed_form.get(metric) <= a.gains_closed_form.get(metric) + 1e-12);
        }
    }

    #[test]
    fn lambda_norm_is_monotone(seed in 0u64..500, half in 1usize..5) {
        let spec = SyntheticSpec { n: 2 * half, l: 8, seed, ..SyntheticSpec::default() }.generate().unwrap();
        let mut last = lambda_norm(&spec, 0).unwrap();
        for l in 1..=8 {
            let v = lambda_norm(&spec, l).unwrap();
            prop_assert!(v >= last);
            last = v;
        }
    }
}

#[test]
fn overhead_ratios_small_model_exact() {
    let r = overhead_ratios(Order::First, 4, 5).unwrap();
    let (c, cd) = cx_poly(1, true, 4, 5);
    let (p, pd) = cx_poly(1, false, 4, 5);
    assert_eq!(r.r_cx_count, Q::new(c, p));
    assert_eq!(r.r_cx_depth, Q::new(cd, pd));
    assert_eq!(r.r_cx_count, Q::new(212, 144));
    assert_eq!(
        r.r_rz_depth,
        Q::new(4 * 5 * 4 + 16 - 25 - 4, 3 * 5 * 4 + 16 - 20 - 5)
    );
}

#[test]
fn overhead_ratios_large_model_count_asymptotes() {
    let r = overhead_ratios(Order::First, 30, 120).unwrap().to_f64();
    assert!((r.r_cx_count / 1.5 - 1.0).abs() < 0.05, "{}", r.r_cx_count);
    assert!(
        (r.r_rz_count / (4.0 / 3.0) - 1.0).abs() < 0.05,
        "{}",
        r.r_rz_count
    );
    assert!(
        (r.r_rz_depth / (4.0 / 3.0) - 1.0).abs() < 0.05,
        "{}",
        r.r_rz_depth
    );
}

#[test]
fn overhead_ratio_cx_depth_near_n_over_six() {
    let r = overhead_ratios(Order::First, 30, 120).unwrap().to_f64();
    assert!(
        (r.r_cx_depth / 5.0 - 1.0).abs() < 0.10,
        "r_CX = {} against N/6 = 5",
        r.r_cx_depth
    );
}

#[test]
fn overhead_ratio_cx_depth_finite_n_limit() {
    let r = overhead_ratios(Order::First, 30, 120).unwrap();
    let (c, p) = (cx_poly(1, true, 30, 120).1, cx_poly(1, false, 30, 120).1);
    assert_eq!(r.r_cx_depth, Q::new(c, p));
    for n in [10usize, 30, 100] {
        let big = overhead_ratios(Order::First, n, 100_000).unwrap().to_f64();
        let nf = n as f64;
        let limit = (nf * nf + 5.0 * nf - 8.0) / (6.0 * nf - 8.0);
        assert!((big.r_cx_depth / limit - 1.0).abs() < 1e-3, "n={n}");
    }
}

#[test]
fn block_costs_per_bit() {
    let s = steps(Order::First, 6, 10, false);
    let swap = primitive_costs::<f64>(6, false, 1.0).unwrap().swap_pair_cat;
    let b0 = block_cost(0, Method::SeQpe, &s, &swap);
    assert_eq!(b0.cx_count, 660.0 + 94.0);
    assert_eq!(b0.cx_depth, 316.0 + 20.0);
    let b3 = block_cost(3, Method::SeQpe, &s, &swap);
    assert_eq!(b3.cx_depth, 4.0 * 316.0 + 20.0);
    assert_eq!(b3.cx_count, 8.0 * 660.0 + 94.0);
    assert_eq!(block_cost(3, Method::Qpe, &s, &swap).cx_count, 8.0 * 972.0);
    assert_eq!(block_cost(3, Method::CatSeQpe, &s, &swap), b3);
}

#[test]
fn totals_reference_example() {
    let s = steps(Order::First, 6, 10, false);
    let swap = primitive_costs::<f64>(6, false, 1.0).unwrap().swap_pair_cat;
    let t = totals_and_gains(5, &s, &swap).unwrap();
    assert_eq!(t.k, 31);
    assert_eq!(t.qpe.cx_count, 30132.0);
    assert_eq!(t.se_qpe.cx_count, 20930.0);
    assert!((t.gains.cx_count - 0.6946).abs() < 1e-4);
    assert_eq!(t.qpe_closed_form.cx_count, 30132.0);
    assert_eq!(t.se_qpe_closed_form.cx_count, 20930.0);
    assert!((t.gains_closed_form.cx_count - t.gains.cx_count).abs() < 1e-12);
    assert!(totals_and_gains(0, &s, &swap).is_err());
    assert!(totals_and_gains(63, &s, &swap).is_err());
}

#[test]
fn summed_totals_approach_closed_forms() {
    let s = steps(Order::Second, 8, 12, false);
    let swap = primitive_costs::<f64>(8, false, 1.0)
        .unwrap()
        .swap_pair_serial;
    for m in [3u32, 6, 10, 20] {
        let t = totals_and_gains(m, &s, &swap).unwrap();
        let bound = m as f64 / t.k as f64 * (swap.cx_depth / s.plain.cx_depth).max(1.0);
        for metric in Metric::ALL {
            let (a, b) = (t.se_qpe.get(metric), t.se_qpe_closed_form.get(metric));
            assert!((a - b).abs() / a <= bound, "m={m} {metric:?}");
            assert!((t.qpe.get(metric) - t.qpe_closed_form.get(metric)).abs() < 1e-6);
        }
    }
}

#[test]
fn breakeven_trivial_cases() {
    let s = steps(Order::First, 6, 10, false);
    let zero = CostVectorF::zero();
    for metric in [Metric::CxCount, Metric::RzCount, Metric::CxDepth] {
        assert_eq!(breakeven_bit(&s, &zero, metric), Some(0));
    }
    let flat = StepCosts {
        plain: s.plain,
        controlled: s.plain,
    };
    assert_eq!(breakeven_bit(&flat, &zero, Metric::CxCount), None);
    let huge = CostVector {
        cx_count: 1e300,
        ..CostVectorF::zero()
    };
    assert_eq!(breakeven_bit(&s, &huge, Metric::CxCount), None);
}

#[test]
fn breakeven_matches_exhaustive_block_scan() {
    let s = steps(Order::First, 6, 10, false);
    let swap = primitive_costs::<f64>(6, false, 1.0)
        .unwrap()
        .swap_pair_serial;
    for metric in [
        Metric::CxCount,
        Metric::RzCount,
        Metric::CxDepth,
        Metric::RzDepth,
    ] {
        let j = breakeven_bit(&s, &swap, metric).unwrap();
        let cheaper = |j: u32| {
            block_cost(j, Method::SeQpe, &s, &swap).get(metric)
                < block_cost(j, Method::Qpe, &s, &swap).get(metric)
        };
        let from = if metric.is_depth() { 1 } else { 0 };
        let first = (from..=40).find(|&k| cheaper(k)).unwrap();
        assert_eq!(j.max(from), first, "{metric:?}");
        assert!((first..=40).all(cheaper));
    }
}

#[test]
fn lambda_norm_hand_cases() {
    let zero = DfSpec {
        n: 2,
        alphas: vec![0.0, 0.0],
        betas: vec![vec![vec![0.0; 2]; 2]],
        spin_block: false,
    };
    assert_eq!(lambda_norm(&zero, 1).unwrap(), 0.0);
    let one = DfSpec {
        alphas: vec![-2.0, 0.0],
        ..zero.clone()
    };
    assert_eq!(lambda_norm(&one, 1).unwrap(), 2.0);
    let spec = DfSpec {
        n: 2,
        alphas: vec![0.5, -0.25],
        betas: vec![
            vec![vec![9.0, -0.3], vec![-0.3, 9.0]],
            vec![vec![0.0, 0.1], vec![0.1, 0.0]],
        ],
        spin_block: false,
    };
    assert!((lambda_norm(&spec, 1).unwrap() - 1.05).abs() < 1e-15);
    assert!((lambda_norm(&spec, 2).unwrap() - 1.15).abs() < 1e-15);
    assert!(lambda_norm(&spec, 3).is_err());
}

#[test]
fn scan_constants() {
    let cfg = ScanConfig::default();
    assert!((cfg.c_ts() / 0.00187 - 1.0).abs() < 0.02);
    assert_eq!(t_per_rotation(1e-10).unwrap(), 110);
    assert!(t_per_rotation(0.0).is_err());
    assert!((cfg.eps_share() - 4e-4).abs() < 1e-18);
    let bad = ScanConfig {
        trotter_order: 3,
        ..ScanConfig::default()
    };
    assert!(bad.validate().is_err());
}

#[test]
fn synthetic_scan_report() {
    let spec = SyntheticSpec::default().generate().unwrap();
    assert_eq!((spec.n, spec.l()), (12, 40));
    assert_eq!(spec, SyntheticSpec::default().generate().unwrap());
    let r = scan(&spec, &ScanConfig::default()).unwrap();
    assert_eq!(r.k, (1u64 << r.m) - 1);
    assert!(r.lambda_full - r.lambda_l <= ScanConfig::default().eps_share());
    assert!(
        r.l_retained == 1 || r.lambda_full - lambda_norm(&spec, r.l_retained - 1).unwrap() > 4e-4
    );
    assert!((r.tau - std::f64::consts::PI / r.lambda_l).abs() < 1e-15);
    assert!(r.gains.cx_count < 1.0);
    assert!(r.gains.cx_depth < 3.0 / 12.0 * 1.5);
    assert!(r.n_trot >= 1);
    assert!(r.qpe_synthesis.t_eps >= 10 && r.se_qpe_synthesis.t_eps >= 10);
    let csv = reports_csv(&[r.clone(), r]);
    assert_eq!(
        csv.lines().next(),
        Some("n,method,metric,total,gain_vs_qpe")
    );
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 6);
}

#[test]
fn df_spec_validation() {
    let ok = r#"{"n": 2, "alphas": [0.1, 0.2], "betas": [[[0, 0.3], [0.3, 0]]]}"#;
    assert_eq!(DfSpec::from_json(ok).unwrap().l(), 1);
    assert!(DfSpec::from_json(
        r#"{"n": 3, "alphas": [0, 0, 0], "betas": [[[0,0,0],[0,0,0],[0,0,0]]]}"#
    )
    .is_err());
    assert!(
        DfSpec::from_json(r#"{"n": 2, "alphas": [0.1], "betas": [[[0, 0], [0, 0]]]}"#).is_err()
    );
    assert!(DfSpec::from_json(r#"{"n": 2, "alphas": [0.1, 0.2], "betas": []}"#).is_err());
    assert!(
        DfSpec::from_json(r#"{"n": 2, "alphas": [0.1, 0.2], "betas": [[[0], [0, 0]]]}"#).is_err()
    );
    assert!(DfSpec::from_json(
        r#"{"n": 2, "alphas": [0.1, 0.2], "betas": [[[0, 0], [0, 0]]], "x": 1}"#
    )
    .is_err());
    assert!(SyntheticSpec {
        decay: 0.0,
        ..SyntheticSpec::default()
    }
    .generate()
    .is_err());
}
