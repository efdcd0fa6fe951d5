//! Energy properties: sum-multiplicity vs cubic-loop oracle, the Fourier
//! identity, the square/cube bounds, the mixed-energy bound, the
//! disjoint-union bound, and translation invariance.

mod common;

use common::*;
use energy_recover_core::energy::{
    additive_energy_exact, additive_energy_fourier, mixed_energy, union_energy_bound, Partition,
};
use energy_recover_core::group::{GroupSpec, IndexSet};
use rand::Rng;

#[test]
fn oracle_equivalence_and_fourier_identity_300_sets() {
    let groups = group_samples(4096);
    let mut rng = rng_for(0xE4E, 0);
    for trial in 0..300 {
        let g = groups[trial % groups.len()];
        let k = 1 + rng.random_range(0..30.min(g.size()));
        let a = random_set(g, k, &mut rng);
        let fast = additive_energy_exact(&a).unwrap();
        assert_eq!(fast, oracle_energy(&a), "oracle mismatch on {g}, |A|={k}");
        let fourier = additive_energy_fourier(&a).unwrap();
        assert!(
            (fourier - fast as f64).abs() <= 1e-9 * (fast as f64).max(1.0),
            "fourier identity off on {g}: {fourier} vs {fast}"
        );
    }
}

#[test]
fn square_and_cube_bounds() {
    let mut rng = rng_for(0xE4E, 1);
    for trial in 0..200 {
        let groups = group_samples(1024);
        let g = groups[trial % groups.len()];
        let k = 1 + rng.random_range(0..20.min(g.size()));
        let a = random_set(g, k, &mut rng);
        let lambda = additive_energy_exact(&a).unwrap();
        let k = a.len() as u64;
        assert!(k * k <= lambda, "lower bound violated");
        assert!(lambda <= k * k * k, "upper bound violated");
    }
}

#[test]
fn mixed_energy_matches_quartic_oracle() {
    let mut rng = rng_for(0xE4E, 2);
    for trial in 0..60 {
        let groups = group_samples(256);
        let g = groups[trial % groups.len()];
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = 1 + rng.random_range(0..6.min(g.size()));
            random_set(g, k, rng)
        };
        let (u, v, u2, v2) = (
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
        );
        assert_eq!(
            mixed_energy(&u, &v, &u2, &v2).unwrap(),
            oracle_mixed_energy(&u, &v, &u2, &v2)
        );
    }
}

#[test]
fn mixed_energy_quadrifactor_bound_200_quadruples() {
    let mut rng = rng_for(0xE4E, 3);
    let groups = group_samples(512);
    for trial in 0..200 {
        let g = groups[trial % groups.len()];
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = 1 + rng.random_range(0..10.min(g.size()));
            random_set(g, k, rng)
        };
        let (u, v, u2, v2) = (
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
        );
        let lhs = mixed_energy(&u, &v, &u2, &v2).unwrap() as f64;
        let rhs = (additive_energy_exact(&u).unwrap() as f64
            * additive_energy_exact(&v).unwrap() as f64
            * additive_energy_exact(&u2).unwrap() as f64
            * additive_energy_exact(&v2).unwrap() as f64)
            .powf(0.25);
        assert!(
            lhs <= rhs + 1e-6,
            "mixed-energy bound violated on {g}: {lhs} > {rhs}"
        );
    }
}

#[test]
fn union_bound_200_random_partitions() {
    let mut rng = rng_for(0xE4E, 4);
    let groups = group_samples(512);
    for trial in 0..200 {
        let g = groups[trial % groups.len()];
        let total = 1 + rng.random_range(0..16.min(g.size()));
        let s = random_set(g, total, &mut rng);
        // split into up to 4 random nonempty parts
        let n_parts = 1 + rng.random_range(0..4.min(s.len()));
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n_parts];
        for (i, &x) in s.flat_indices().iter().enumerate() {
            if i < n_parts {
                buckets[i].push(x); // keep every part nonempty
            } else {
                buckets[rng.random_range(0..n_parts)].push(x);
            }
        }
        let parts: Vec<IndexSet> = buckets
            .into_iter()
            .map(|b| IndexSet::from_flat_indices(g, b).unwrap())
            .collect();
        let partition = Partition::new(parts).unwrap();
        let bound = union_energy_bound(&partition).unwrap();
        let lambda = additive_energy_exact(&s).unwrap();
        assert!(
            lambda <= bound,
            "union bound violated on {g}: {lambda} > {bound}"
        );
    }
}

#[test]
fn union_bound_seeded_ap_plus_random_in_z200() {
    let g = GroupSpec::new(200, 1).unwrap();
    let ap = IndexSet::from_flat_indices(g, (0..10).collect()).unwrap();
    let mut rng = rng_for(0xE4E, 5);
    // a shifted random 10-set disjoint from the progression
    let random_part = loop {
        let c = random_set(g, 10, &mut rng);
        let shifted = c.translate(100);
        if shifted.is_disjoint(&ap) {
            break shifted;
        }
    };
    let partition = Partition::new(vec![ap.clone(), random_part.clone()]).unwrap();
    let union = partition.union().clone();
    let bound = union_energy_bound(&partition).unwrap();
    let expected =
        8 * (additive_energy_exact(&ap).unwrap() + additive_energy_exact(&random_part).unwrap());
    assert_eq!(bound, expected);
    assert_eq!(additive_energy_exact(&ap).unwrap(), 670);
    assert!(additive_energy_exact(&union).unwrap() <= bound);
}

#[test]
fn dyadic_levels_bracket_and_partition() {
    use energy_recover_core::energy::dyadic_level_sets;
    use energy_recover_core::group::dft;

    let mut rng = rng_for(0xE4E, 7);
    let groups = group_samples(256);
    for trial in 0..60 {
        let g = groups[trial % groups.len()];
        let f = random_dense_signal(g, &mut rng);
        let hat = dft(&f).unwrap();
        let decomposition = dyadic_level_sets(&hat);
        assert_eq!(decomposition.scale, hat.max_abs());
        let mut seen = vec![false; g.size()];
        for (j, set) in &decomposition.levels {
            assert!(*j >= 1);
            for &m in set.flat_indices() {
                assert!(!seen[m], "level sets must be disjoint");
                seen[m] = true;
                let r = hat.values()[m].norm() / decomposition.scale;
                // two-sided bracket with the boundary-to-larger-j tie rule
                assert!(r <= 2f64.powi(-(*j as i32) + 1) + 1e-15, "upper bracket at m={m}");
                assert!(r > 2f64.powi(-(*j as i32)) - 1e-15, "lower bracket at m={m}");
            }
        }
        // everything above the floor is binned
        for m in 0..g.size() {
            let r = hat.values()[m].norm() / decomposition.scale;
            if r >= 2f64.powi(-40) {
                assert!(seen[m], "entry above the floor left unbinned at m={m}");
            }
        }
    }
}

#[test]
fn translation_invariance_random_translates() {
    let mut rng = rng_for(0xE4E, 6);
    let groups = group_samples(512);
    for trial in 0..100 {
        let g = groups[trial % groups.len()];
        let k = 1 + rng.random_range(0..12.min(g.size()));
        let a = random_set(g, k, &mut rng);
        let t = rng.random_range(0..g.size());
        assert_eq!(
            additive_energy_exact(&a).unwrap(),
            additive_energy_exact(&a.translate(t)).unwrap()
        );
    }
}
