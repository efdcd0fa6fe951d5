//! Shared helpers for the property suites: seeded generation and independent
//! reference computations (kept free of the library's optimized paths).

#![allow(dead_code)]

use energy_recover_core::ensembles::RngSeed;
use energy_recover_core::group::{GroupSpec, IndexSet, Signal};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    RngSeed::new(seed, stream).rng()
}

/// A spread of group shapes with size at most `max_size`, cycling through
/// one- and multi-dimensional cases.
pub fn group_samples(max_size: usize) -> Vec<GroupSpec> {
    let mut groups = Vec::new();
    for (n, d) in [
        (2u64, 1u32),
        (3, 1),
        (4, 1),
        (5, 1),
        (8, 1),
        (12, 1),
        (16, 1),
        (25, 1),
        (32, 1),
        (64, 1),
        (100, 1),
        (128, 1),
        (256, 1),
        (3, 2),
        (4, 2),
        (5, 2),
        (8, 2),
        (10, 2),
        (16, 2),
        (2, 3),
        (3, 3),
        (4, 3),
        (2, 5),
        (4096, 1),
        (64, 2),
        (16, 3),
    ] {
        let g = GroupSpec::new(n, d).unwrap();
        if g.size() <= max_size {
            groups.push(g);
        }
    }
    groups
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Dense random signal with entries in the unit box.
pub fn random_dense_signal(group: GroupSpec, rng: &mut impl Rng) -> Signal {
    let values = (0..group.size()).map(|_| random_complex(rng)).collect();
    Signal::new(group, values).unwrap()
}

/// Random k-subset drawn directly (independent of the ensembles module).
pub fn random_set(group: GroupSpec, k: usize, rng: &mut impl Rng) -> IndexSet {
    let mut indices: Vec<usize> = (0..group.size()).collect();
    for i in 0..k {
        let j = i + rng.random_range(0..group.size() - i);
        indices.swap(i, j);
    }
    indices.truncate(k);
    IndexSet::from_flat_indices(group, indices).unwrap()
}

/// Signal supported on a random set with values of modulus in [0.5, 1.5].
pub fn random_sparse_signal(
    group: GroupSpec,
    support_size: usize,
    rng: &mut impl Rng,
) -> (Signal, IndexSet) {
    let support = random_set(group, support_size, rng);
    let mut f = Signal::zero(group);
    for &x in support.flat_indices() {
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let mag: f64 = rng.random_range(0.5..1.5);
        f.values_mut()[x] = Complex64::new(mag * angle.cos(), mag * angle.sin());
    }
    (f, support)
}

/// Cubic-time additive-energy oracle: enumerate (x1, x2, x3) and test
/// membership of x1 + x2 - x3. Independent of the sum-multiplicity path.
pub fn oracle_energy(a: &IndexSet) -> u64 {
    let g = a.group();
    let mut count = 0u64;
    for &x1 in a.flat_indices() {
        for &x2 in a.flat_indices() {
            let s = g.add_flat(x1, x2);
            for &x3 in a.flat_indices() {
                if a.contains(g.sub_flat(s, x3)) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Quartic-time mixed-energy oracle.
pub fn oracle_mixed_energy(
    u: &IndexSet,
    v: &IndexSet,
    u2: &IndexSet,
    v2: &IndexSet,
) -> u64 {
    let g = u.group();
    let mut count = 0u64;
    for &m in u.flat_indices() {
        for &l in v.flat_indices() {
            let s = g.add_flat(m, l);
            for &m2 in u2.flat_indices() {
                for &l2 in v2.flat_indices() {
                    if g.add_flat(m2, l2) == s {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Textbook forward transform with no zero-skipping, summing over every x in
/// index order. Reference for the library's transform.
pub fn reference_dft(f: &Signal) -> Vec<Complex64> {
    let g = f.group();
    let n = g.modulus();
    let scale = 1.0 / g.size_f64();
    (0..g.size())
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..g.size() {
                let t = g.dot_mod(x, m);
                let angle = -std::f64::consts::TAU * (t as f64) / (n as f64);
                acc += Complex64::new(angle.cos(), angle.sin()) * f.values()[x];
            }
            acc * scale
        })
        .collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
