use seqpe_core::verify::{run_check, VerifyConfig};

fn gate(id: u32) {
    let r = run_check(id, &VerifyConfig::default()).expect("check runs");
    println!(
        "criterion {:>2} {}: {} | {}",
        r.id,
        if r.passed { "PASS" } else { "FAIL" },
        r.title,
        r.detail
    );
    assert!(r.passed, "criterion {id} failed: {}", r.detail);
}

#[test]
fn criterion_01_exact_spectrum() {
    gate(1);
}

#[test]
fn criterion_02_mean_field_overlap() {
    gate(2);
}

#[test]
fn criterion_03_bias_correction_schedule() {
    gate(3);
}

#[test]
fn criterion_04_noiseless_modal_energies() {
    gate(4);
}

#[test]
fn criterion_05_substitution_equivalence() {
    gate(5);
}

#[test]
fn criterion_06_compute_uncompute_inequivalence() {
    gate(6);
}

#[test]
fn criterion_07_composition_closed_forms() {
    gate(7);
}

#[test]
fn criterion_08_compiled_primitives() {
    gate(8);
}

#[test]
fn criterion_09_asymptotic_gains() {
    gate(9);
}

#[test]
fn criterion_10_trotter_calibration() {
    gate(10);
}

#[test]
fn criterion_11_per_bit_crossover() {
    gate(11);
}

#[test]
fn criterion_12_noise_filtering() {
    gate(12);
}

#[test]
fn criterion_13_determinism() {
    gate(13);
}
