//! Transform properties: round trip, Plancherel, linearity,
//! translation-modulation, and agreement with the textbook summation.

mod common;

use common::*;
use energy_recover_core::group::{character, dft, idft, DftPlan, Signal};
use num_complex::Complex64;
use rand::Rng;

#[test]
fn round_trip_500_random_signals() {
    let small: Vec<_> = group_samples(1024);
    let large: Vec<_> = group_samples(4096)
        .into_iter()
        .filter(|g| g.size() > 1024)
        .collect();
    assert!(!large.is_empty());
    let mut rng = rng_for(0xA11CE, 0);
    let mut done = 0;
    // 491 signals on small groups, 9 on the full-size ones.
    while done < 500 {
        let g = if done < 491 {
            small[done % small.len()]
        } else {
            large[done % large.len()]
        };
        let f = random_dense_signal(g, &mut rng);
        let back = idft(&dft(&f).unwrap()).unwrap();
        let err = max_abs_diff(back.values(), f.values());
        assert!(err <= 1e-10 * f.max_abs(), "round trip error {err} on {g}");
        done += 1;
    }
}

#[test]
fn plancherel_identity() {
    let mut rng = rng_for(0xA11CE, 1);
    for &g in &group_samples(2048) {
        let f = random_dense_signal(g, &mut rng);
        let hat = dft(&f).unwrap();
        let freq_side: f64 = hat.values().iter().map(|v| v.norm_sqr()).sum();
        let space_side: f64 =
            f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / g.size_f64();
        assert!(
            (freq_side - space_side).abs() <= 1e-10 * space_side,
            "plancherel mismatch on {g}: {freq_side} vs {space_side}"
        );
    }
}

#[test]
fn linearity() {
    let mut rng = rng_for(0xA11CE, 2);
    for &g in &group_samples(512) {
        let f = random_dense_signal(g, &mut rng);
        let h = random_dense_signal(g, &mut rng);
        let a = random_complex(&mut rng);
        let b = random_complex(&mut rng);
        let combo = Signal::new(
            g,
            f.values()
                .iter()
                .zip(h.values())
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
        .unwrap();
        let lhs = dft(&combo).unwrap();
        let fh = dft(&f).unwrap();
        let hh = dft(&h).unwrap();
        let rhs: Vec<Complex64> = fh
            .values()
            .iter()
            .zip(hh.values())
            .map(|(x, y)| a * x + b * y)
            .collect();
        assert!(max_abs_diff(lhs.values(), &rhs) <= 1e-10);
    }
}

#[test]
fn translation_multiplies_by_character() {
    let mut rng = rng_for(0xA11CE, 3);
    for &g in &group_samples(256) {
        let f = random_dense_signal(g, &mut rng);
        let y = rng.random_range(0..g.size());
        let shifted = f.translate(y);
        let hat = dft(&f).unwrap();
        let shifted_hat = dft(&shifted).unwrap();
        for m in 0..g.size() {
            let phase = character(&g, (g.modulus() - g.dot_mod(y, m)) % g.modulus());
            let expect = phase * hat.values()[m];
            assert!(
                (shifted_hat.values()[m] - expect).norm() <= 1e-10,
                "translation-modulation failed on {g} at m={m}"
            );
        }
    }
}

#[test]
fn transform_matches_textbook_summation() {
    let mut rng = rng_for(0xA11CE, 4);
    for &g in &group_samples(512) {
        let f = random_dense_signal(g, &mut rng);
        let fast = dft(&f).unwrap();
        let reference = reference_dft(&f);
        assert!(
            max_abs_diff(fast.values(), &reference) <= 1e-10,
            "transform deviates from reference on {g}"
        );
    }
}

#[test]
fn indicator_path_matches_dense_path() {
    let mut rng = rng_for(0xA11CE, 5);
    for &g in &group_samples(512) {
        let k = 1 + rng.random_range(0..g.size().min(9));
        let set = random_set(g, k, &mut rng);
        let plan = DftPlan::new(g);
        let sparse = plan.dft_indicator(&set).unwrap();
        let dense = plan.dft(&Signal::indicator(&set)).unwrap();
        assert_eq!(sparse.values(), dense.values());
    }
}
