//! Additive energy of subsets of Z_N^d and related combinatorial quantities.
//!
//! The additive energy of a set `A` counts ordered quadruples with
//! `x1 + x2 = x3 + x4`:
//!
//! ```text
//! L(A) = #{ (x1,x2,x3,x4) in A^4 : x1 + x2 = x3 + x4 }
//!      = sum_s r_A(s)^2,   r_A(s) = #{ (x1,x2) in A^2 : x1 + x2 = s }
//! ```
//!
//! It always satisfies `|A|^2 <= L(A) <= |A|^3` and equals the Fourier-side
//! quantity `N^{3d} * sum_m |Ahat(m)|^4` where `Ahat` is the transform of the
//! indicator of `A`.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{DftPlan, GroupSpec, IndexSet, Spectrum};

/// Largest set size accepted by the exact (exhaustive) subset scans.
pub const EXACT_SUBSET_LIMIT: usize = 20;

/// Level sets below `2^-DYADIC_FLOOR_EXP` of the peak modulus are dropped.
pub const DYADIC_FLOOR_EXP: i32 = 40;

// Heuristic subset-scan family sizes. The scan has no seed parameter, so the
// random draws use a fixed internal seed to keep results reproducible.
const GREEDY_PREFIX_CAP: usize = 64;
const RANDOM_SUBSET_DRAWS: usize = 200;
const RANDOM_SUBSET_SIZE_CAP: usize = 512;
const SAMPLED_SCAN_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Whether a subset scan enumerates every subset or samples a heuristic
/// family (the whole set, greedy prefixes, and seeded random subsets).
/// Sampled results are lower bounds on the true maximum, never certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetMode {
    Exact,
    LowerBound,
}

/// Digit-decomposed points of one set, so pair sums avoid per-pair division.
struct FlatAdder {
    modulus: u64,
    dimension: usize,
    /// digits[i*d..(i+1)*d], most significant first.
    digits: Vec<u64>,
}

impl FlatAdder {
    fn new(group: &GroupSpec, flats: &[usize]) -> Self {
        let d = group.dimension() as usize;
        let mut digits = Vec::with_capacity(flats.len() * d);
        for &f in flats {
            digits.extend_from_slice(&group.coords_of(f));
        }
        FlatAdder {
            modulus: group.modulus(),
            dimension: d,
            digits,
        }
    }

    /// Flat index of points[i] + points[j].
    #[inline]
    fn sum(&self, i: usize, j: usize) -> usize {
        let d = self.dimension;
        let n = self.modulus;
        let a = &self.digits[i * d..(i + 1) * d];
        let b = &self.digits[j * d..(j + 1) * d];
        let mut idx: usize = 0;
        for k in 0..d {
            let mut s = a[k] + b[k];
            if s >= n {
                s -= n;
            }
            idx = idx * n as usize + s as usize;
        }
        idx
    }
}

/// Counts indexed by flat group element, dense for small groups.
enum CountStore {
    Dense(Vec<u64>),
    Sparse(HashMap<usize, u64>),
}

const DENSE_COUNT_LIMIT: usize = 1 << 22;

impl CountStore {
    fn new(group: &GroupSpec) -> Self {
        if group.size() <= DENSE_COUNT_LIMIT {
            CountStore::Dense(vec![0; group.size()])
        } else {
            CountStore::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn add(&mut self, key: usize, by: u64) {
        match self {
            CountStore::Dense(v) => v[key] += by,
            CountStore::Sparse(m) => *m.entry(key).or_insert(0) += by,
        }
    }

    #[inline]
    fn get(&self, key: usize) -> u64 {
        match self {
            CountStore::Dense(v) => v[key],
            CountStore::Sparse(m) => m.get(&key).copied().unwrap_or(0),
        }
    }

    fn sum_of_squares(&self) -> u128 {
        match self {
            CountStore::Dense(v) => v
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| (c as u128) * (c as u128))
                .sum(),
            CountStore::Sparse(m) => m.values().map(|&c| (c as u128) * (c as u128)).sum(),
        }
    }
}

fn checked_u64(value: u128) -> Result<u64> {
    u64::try_from(value).map_err(|_| Error::EnergyOverflow)
}

/// Pair-sum multiplicities r_A(s) for all s, as a count store.
fn pair_sum_counts(set: &IndexSet) -> CountStore {
    let adder = FlatAdder::new(set.group(), set.flat_indices());
    let k = set.len();
    let mut counts = CountStore::new(set.group());
    for i in 0..k {
        for j in 0..k {
            counts.add(adder.sum(i, j), 1);
        }
    }
    counts
}

/// Exact additive energy via sum multiplicities, integer-exact.
///
/// The empty set has energy 0; a singleton has energy 1.
pub fn additive_energy_exact(set: &IndexSet) -> Result<u64> {
    if set.is_empty() {
        return Ok(0);
    }
    checked_u64(pair_sum_counts(set).sum_of_squares())
}

/// Fourier-side additive energy `N^{3d} * sum_m |Ahat(m)|^4`.
pub fn additive_energy_fourier(set: &IndexSet) -> Result<f64> {
    if set.is_empty() {
        return Ok(0.0);
    }
    let plan = DftPlan::new(*set.group());
    let hat = plan.dft_indicator(set)?;
    Ok(spectrum_fourth_power_sum(&hat) * set.group().size_f64().powi(3))
}

fn spectrum_fourth_power_sum(hat: &Spectrum) -> f64 {
    hat.values()
        .iter()
        .map(|v: &Complex64| {
            let sq = v.norm_sqr();
            sq * sq
        })
        .sum()
}

/// Exact count of (m, l, m', l') in U x V x U' x V' with m + l = m' + l'.
pub fn mixed_energy(
    u: &IndexSet,
    v: &IndexSet,
    u2: &IndexSet,
    v2: &IndexSet,
) -> Result<u64> {
    u.check_same_group(v)?;
    u.check_same_group(u2)?;
    u.check_same_group(v2)?;
    if u.is_empty() || v.is_empty() || u2.is_empty() || v2.is_empty() {
        return Ok(0);
    }
    let r1 = cross_sum_counts(u, v);
    let r2 = cross_sum_counts(u2, v2);
    let total: u128 = match (&r1, &r2) {
        (CountStore::Dense(a), CountStore::Dense(b)) => a
            .iter()
            .zip(b.iter())
            .map(|(&x, &y)| (x as u128) * (y as u128))
            .sum(),
        _ => sparse_dot(&r1, &r2),
    };
    checked_u64(total)
}

fn cross_sum_counts(a: &IndexSet, b: &IndexSet) -> CountStore {
    let group = a.group();
    let mut counts = CountStore::new(group);
    for &x in a.flat_indices() {
        for &y in b.flat_indices() {
            counts.add(group.add_flat(x, y), 1);
        }
    }
    counts
}

fn sparse_dot(a: &CountStore, b: &CountStore) -> u128 {
    match a {
        CountStore::Dense(v) => v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, &c)| (c as u128) * (b.get(s) as u128))
            .sum(),
        CountStore::Sparse(m) => m
            .iter()
            .map(|(&s, &c)| (c as u128) * (b.get(s) as u128))
            .sum(),
    }
}

/// Exact energy report for one set: cardinality, exact and Fourier-side
/// energies, and the normalized ratio L(A)/|A|^2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyReport {
    pub set_size: usize,
    pub energy_exact: Option<u64>,
    pub energy_fourier: Option<f64>,
    pub normalized_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_subset: Option<MaxSubsetReport>,
}

/// Result of a subset-maximum scan, attached to an [`EnergyReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaxSubsetReport {
    pub mode: SubsetMode,
    /// max over scanned nonempty U of L(U)/|U|^2 (a lower bound in
    /// `LowerBound` mode).
    pub ratio: f64,
    /// Witness subset attaining the reported maximum, as coordinate tuples.
    pub witness: Vec<Vec<u64>>,
    /// False when the scan sampled rather than enumerated.
    pub certifying: bool,
}

impl EnergyReport {
    /// Compute every field of the report (without a subset scan).
    pub fn full(set: &IndexSet) -> Result<Self> {
        let exact = additive_energy_exact(set)?;
        let fourier = additive_energy_fourier(set)?;
        let ratio = if set.is_empty() {
            None
        } else {
            Some(exact as f64 / (set.len() as f64).powi(2))
        };
        Ok(EnergyReport {
            set_size: set.len(),
            energy_exact: Some(exact),
            energy_fourier: Some(fourier),
            normalized_ratio: ratio,
            max_subset: None,
        })
    }
}

/// Incremental quadruple-count tracker over subsets of a fixed ground set.
///
/// Adding or removing one point updates the pair-sum multiplicities touching
/// that point and the running energy in O(|U|) integer operations.
struct IncrementalEnergy {
    /// slot_of[i][j]: dense id of the sum p_i + p_j among all pairwise sums.
    slot_of: Vec<Vec<u32>>,
    counts: Vec<u64>,
    in_set: Vec<bool>,
    lambda: u64,
    size: usize,
}

impl IncrementalEnergy {
    fn new(set: &IndexSet) -> Self {
        let k = set.len();
        let adder = FlatAdder::new(set.group(), set.flat_indices());
        let mut slot_ids: HashMap<usize, u32> = HashMap::new();
        let mut slot_of = vec![vec![0u32; k]; k];
        for i in 0..k {
            for j in 0..k {
                let s = adder.sum(i, j);
                let next = slot_ids.len() as u32;
                let id = *slot_ids.entry(s).or_insert(next);
                slot_of[i][j] = id;
            }
        }
        IncrementalEnergy {
            slot_of,
            counts: vec![0; slot_ids.len()],
            in_set: vec![false; k],
            lambda: 0,
            size: 0,
        }
    }

    fn add(&mut self, i: usize) {
        debug_assert!(!self.in_set[i]);
        for j in 0..self.in_set.len() {
            if self.in_set[j] {
                let slot = self.slot_of[i][j] as usize;
                let c = self.counts[slot];
                self.lambda += 4 * c + 4;
                self.counts[slot] = c + 2;
            }
        }
        let diag = self.slot_of[i][i] as usize;
        let c = self.counts[diag];
        self.lambda += 2 * c + 1;
        self.counts[diag] = c + 1;
        self.in_set[i] = true;
        self.size += 1;
    }

    fn remove(&mut self, i: usize) {
        debug_assert!(self.in_set[i]);
        self.in_set[i] = false;
        self.size -= 1;
        for j in 0..self.in_set.len() {
            if self.in_set[j] {
                let slot = self.slot_of[i][j] as usize;
                let c = self.counts[slot];
                self.lambda -= 4 * c - 4;
                self.counts[slot] = c - 2;
            }
        }
        let diag = self.slot_of[i][i] as usize;
        let c = self.counts[diag];
        self.lambda -= 2 * c - 1;
        self.counts[diag] = c - 1;
    }

    /// Energy gained by adding point i, without mutating state.
    fn gain_of_adding(&self, i: usize) -> u64 {
        let mut gain = 0u64;
        for j in 0..self.in_set.len() {
            if self.in_set[j] {
                gain += 4 * self.counts[self.slot_of[i][j] as usize] + 4;
            }
        }
        gain + 2 * self.counts[self.slot_of[i][i] as usize] + 1
    }
}

/// Exhaustive scan over all nonempty subsets of `set` in Gray-code order,
/// reporting the subset maximizing `score(lambda, size)`. Ties keep the
/// earliest subset visited.
fn exact_subset_scan<F>(set: &IndexSet, score: F) -> (f64, u64, IndexSet)
where
    F: Fn(u64, usize) -> f64,
{
    let k = set.len();
    debug_assert!(k >= 1 && k <= EXACT_SUBSET_LIMIT);
    let mut inc = IncrementalEnergy::new(set);
    let mut best_score = f64::NEG_INFINITY;
    let mut best_lambda = 0u64;
    let mut best_mask = 0u64;
    let mut prev_gray = 0u64;
    for step in 1u64..(1u64 << k) {
        let gray = step ^ (step >> 1);
        let bit = gray ^ prev_gray;
        let i = bit.trailing_zeros() as usize;
        if gray & bit != 0 {
            inc.add(i);
        } else {
            inc.remove(i);
        }
        prev_gray = gray;
        let s = score(inc.lambda, inc.size);
        if s > best_score {
            best_score = s;
            best_lambda = inc.lambda;
            best_mask = gray;
        }
    }
    let flats: Vec<usize> = set
        .flat_indices()
        .iter()
        .enumerate()
        .filter(|(i, _)| best_mask & (1u64 << i) != 0)
        .map(|(_, &f)| f)
        .collect();
    let witness = IndexSet::from_flat_indices(*set.group(), flats).expect("witness in group");
    (best_score, best_lambda, witness)
}

/// Heuristic scan: the whole set, prefixes of a greedy max-energy-gain
/// ordering, and a fixed-seed batch of random subsets. Lower bound only.
fn sampled_subset_scan<F>(set: &IndexSet, score: F) -> Result<(f64, u64, IndexSet)>
where
    F: Fn(u64, usize) -> f64,
{
    let k = set.len();
    let mut best_score = f64::NEG_INFINITY;
    let mut best_lambda = 0u64;
    let mut best_flats: Vec<usize> = Vec::new();

    let mut consider = |lambda: u64, flats: &[usize], best_score: &mut f64| {
        let s = score(lambda, flats.len());
        if s > *best_score {
            *best_score = s;
            best_lambda = lambda;
            best_flats = flats.to_vec();
        }
    };

    // The whole set.
    let lambda_full = additive_energy_exact(set)?;
    consider(lambda_full, set.flat_indices(), &mut best_score);

    // Greedy prefixes: repeatedly add the point with the largest energy gain.
    let mut inc = IncrementalEnergy::new(set);
    let mut chosen: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..k).collect();
    for _ in 0..k.min(GREEDY_PREFIX_CAP) {
        let (pos, &best_i) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(_, &i)| (inc.gain_of_adding(i), std::cmp::Reverse(i)))
            .expect("remaining nonempty");
        inc.add(best_i);
        remaining.swap_remove(pos);
        chosen.push(set.flat_indices()[best_i]);
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        consider(inc.lambda, &sorted, &mut best_score);
    }

    // Fixed-seed random subsets with sizes spread over [1, cap].
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLED_SCAN_SEED);
    let cap = k.min(RANDOM_SUBSET_SIZE_CAP);
    let mut pool: Vec<usize> = set.flat_indices().to_vec();
    for t in 0..RANDOM_SUBSET_DRAWS {
        let size = 1 + t * (cap - 1) / (RANDOM_SUBSET_DRAWS - 1).max(1);
        let (subset, _) = pool.partial_shuffle(&mut rng, size);
        let mut flats = subset.to_vec();
        flats.sort_unstable();
        let sub = IndexSet::from_flat_indices(*set.group(), flats.clone())?;
        let lambda = additive_energy_exact(&sub)?;
        consider(lambda, &flats, &mut best_score);
    }

    let witness = IndexSet::from_flat_indices(*set.group(), best_flats)?;
    Ok((best_score, best_lambda, witness))
}

fn run_subset_scan<F>(
    set: &IndexSet,
    mode: SubsetMode,
    score: F,
) -> Result<(f64, u64, IndexSet)>
where
    F: Fn(u64, usize) -> f64,
{
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    match mode {
        SubsetMode::Exact => {
            if set.len() > EXACT_SUBSET_LIMIT {
                return Err(Error::SubsetEnumerationTooLarge {
                    size: set.len(),
                    limit: EXACT_SUBSET_LIMIT,
                });
            }
            Ok(exact_subset_scan(set, score))
        }
        SubsetMode::LowerBound => sampled_subset_scan(set, score),
    }
}

/// max over nonempty U of L(U)/|U|^2, with a witness subset.
///
/// Exact mode enumerates all subsets (|set| <= 20); lower-bound mode scans
/// the heuristic family and the result is only a lower bound on the maximum.
/// The empty subset is excluded (the ratio is undefined there).
pub fn max_subset_energy_ratio(set: &IndexSet, mode: SubsetMode) -> Result<(f64, IndexSet)> {
    let ratio_table: Vec<f64> = (0..=set.len()).map(|s| (s as f64) * (s as f64)).collect();
    let (score, _, witness) =
        run_subset_scan(set, mode, |lambda, size| lambda as f64 / ratio_table[size])?;
    Ok((score, witness))
}

/// A list of pairwise-disjoint sets over one group, with their union.
#[derive(Debug, Clone)]
pub struct Partition {
    parts: Vec<IndexSet>,
    union: IndexSet,
}

impl Partition {
    /// Validate pairwise disjointness (reporting the first collision in scan
    /// order) and record the union.
    pub fn new(parts: Vec<IndexSet>) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptySet)?;
        let group = *first.group();
        let mut union = IndexSet::empty(group);
        for part in &parts {
            part.check_same_group(first)?;
            if let Some(common) = union.first_common(part) {
                return Err(Error::OverlappingParts {
                    point: group.coords_of(common),
                });
            }
            union = union.union(part)?;
        }
        Ok(Partition { parts, union })
    }

    pub fn parts(&self) -> &[IndexSet] {
        &self.parts
    }

    pub fn union(&self) -> &IndexSet {
        &self.union
    }

    pub fn n_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn group(&self) -> &GroupSpec {
        self.union.group()
    }
}

/// The disjoint-union energy bound `n^3 * sum_i L(S_i)`, exact integers.
///
/// The union's energy never exceeds this value.
pub fn union_energy_bound(partition: &Partition) -> Result<u64> {
    let n = partition.n_parts() as u128;
    let mut sum: u128 = 0;
    for part in partition.parts() {
        sum += additive_energy_exact(part)? as u128;
    }
    checked_u64(n * n * n * sum)
}

/// The smallest C with L(U) <= C |U|^alpha over the scanned subsets of S.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityFit {
    pub alpha: f64,
    /// Smallest admissible constant over the scanned family.
    pub c: f64,
    /// Subset attaining L(U)/|U|^alpha = C, as coordinate tuples.
    pub witness: Vec<Vec<u64>>,
    pub mode: SubsetMode,
    /// False when the scan sampled: the true constant may be larger.
    pub certifying: bool,
}

impl RegularityFit {
    pub fn witness_set(&self, group: &GroupSpec) -> Result<IndexSet> {
        let points: Result<Vec<usize>> = self
            .witness
            .iter()
            .map(|coords| group.index_of(coords))
            .collect();
        IndexSet::from_flat_indices(*group, points?)
    }
}

/// Fit the energy-regularity constant: smallest C with L(U) <= C |U|^alpha
/// for all nonempty U in the scanned family.
pub fn energy_regularity_fit(
    set: &IndexSet,
    alpha: f64,
    mode: SubsetMode,
) -> Result<RegularityFit> {
    if !(2.0..=3.0).contains(&alpha) {
        return Err(Error::RegularityExponentOutOfRange { alpha });
    }
    let pow_table: Vec<f64> = (0..=set.len()).map(|s| (s as f64).powf(alpha)).collect();
    let (c, _, witness) =
        run_subset_scan(set, mode, |lambda, size| lambda as f64 / pow_table[size])?;
    Ok(RegularityFit {
        alpha,
        c,
        witness: witness
            .flat_indices()
            .iter()
            .map(|&f| set.group().coords_of(f))
            .collect(),
        mode,
        certifying: mode == SubsetMode::Exact,
    })
}

/// Dyadic level decomposition of a spectrum: the recorded normalization
/// scale (the peak modulus) and the nonempty level sets.
#[derive(Debug, Clone)]
pub struct DyadicLevels {
    /// Peak modulus the spectrum was divided by before binning.
    pub scale: f64,
    /// (j, U_j) pairs in increasing j.
    pub levels: Vec<(u32, IndexSet)>,
}

/// Dyadic level sets of a spectrum, after normalizing the peak modulus to 1:
/// U_j collects the m with 2^-j <= |H(m)| <= 2^-j+1. A modulus exactly on a
/// boundary 2^-j goes to the bucket with the larger j (the lower-magnitude
/// bin). Entries below 2^-40 of the peak are dropped; an all-zero spectrum
/// yields no levels.
pub fn dyadic_level_sets(spectrum: &Spectrum) -> DyadicLevels {
    let peak = spectrum.max_abs();
    if peak == 0.0 {
        return DyadicLevels {
            scale: 0.0,
            levels: Vec::new(),
        };
    }
    let floor = 2f64.powi(-DYADIC_FLOOR_EXP);
    let mut buckets: HashMap<u32, Vec<usize>> = HashMap::new();
    for (m, v) in spectrum.values().iter().enumerate() {
        let r = v.norm() / peak;
        if r < floor {
            continue;
        }
        // Smallest j >= 1 with 2^-j < r <= 2^-(j-1).
        let mut j = (-r.log2()).floor() as i32 + 1;
        // Guard the float log against boundary rounding.
        while j > 1 && r > 2f64.powi(-(j - 1)) {
            j -= 1;
        }
        while r <= 2f64.powi(-j) {
            j += 1;
        }
        buckets.entry(j as u32).or_default().push(m);
    }
    let mut levels: Vec<(u32, IndexSet)> = buckets
        .into_iter()
        .map(|(j, flats)| {
            (
                j,
                IndexSet::from_flat_indices(*spectrum.group(), flats).expect("indices in range"),
            )
        })
        .collect();
    levels.sort_by_key(|(j, _)| *j);
    DyadicLevels {
        scale: peak,
        levels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Signal;

    fn set(g: &GroupSpec, flats: &[usize]) -> IndexSet {
        IndexSet::from_flat_indices(*g, flats.to_vec()).unwrap()
    }

    /// Independent cubic-time oracle: enumerate (x1, x2, x3), test x1+x2-x3.
    fn oracle_energy(a: &IndexSet) -> u64 {
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

    #[test]
    fn singleton_energy_is_one() {
        let g = GroupSpec::new(7, 1).unwrap();
        let a = set(&g, &[3]);
        assert_eq!(additive_energy_exact(&a).unwrap(), 1);
    }

    #[test]
    fn empty_energy_is_zero() {
        let g = GroupSpec::new(7, 1).unwrap();
        let a = IndexSet::empty(g);
        assert_eq!(additive_energy_exact(&a).unwrap(), 0);
        assert_eq!(additive_energy_fourier(&a).unwrap(), 0.0);
    }

    #[test]
    fn ap_of_length_ten_in_z100() {
        let g = GroupSpec::new(100, 1).unwrap();
        let a = set(&g, &(0..10).collect::<Vec<_>>());
        let exact = additive_energy_exact(&a).unwrap();
        assert_eq!(exact, 670);
        assert_eq!(exact, oracle_energy(&a));
        // wrap-free APs of length k have energy (2k^3 + k)/3
        assert_eq!(exact, (2 * 1000 + 10) / 3);
    }

    #[test]
    fn wraparound_pair_in_z4() {
        // {0,2} in Z_4: 2+2 = 0+0, so the energy is 8, not the generic 6.
        let g = GroupSpec::new(4, 1).unwrap();
        let a = set(&g, &[0, 2]);
        assert_eq!(additive_energy_exact(&a).unwrap(), 8);
        assert_eq!(oracle_energy(&a), 8);
    }

    #[test]
    fn planar_difference_set_is_sidon() {
        // {0,1,3,9} in Z_13 has all pairwise differences distinct.
        let g = GroupSpec::new(13, 1).unwrap();
        let a = set(&g, &[0, 1, 3, 9]);
        let k = 4u64;
        assert_eq!(additive_energy_exact(&a).unwrap(), 2 * k * k - k);
        assert_eq!(oracle_energy(&a), 2 * k * k - k);
    }

    #[test]
    fn full_group_energy() {
        for n in [2u64, 5, 8, 16] {
            let g = GroupSpec::new(n, 1).unwrap();
            let a = IndexSet::full(g);
            assert_eq!(additive_energy_exact(&a).unwrap(), n * n * n);
        }
        let g = GroupSpec::new(4, 2).unwrap();
        let a = IndexSet::full(g);
        assert_eq!(additive_energy_exact(&a).unwrap(), 16 * 16 * 16);
    }

    #[test]
    fn fourier_identity_matches_exact() {
        let g = GroupSpec::new(100, 1).unwrap();
        let a = set(&g, &(0..10).collect::<Vec<_>>());
        let exact = additive_energy_exact(&a).unwrap() as f64;
        let fourier = additive_energy_fourier(&a).unwrap();
        assert!((fourier - exact).abs() < 1e-6, "fourier={fourier}");

        let full = IndexSet::full(GroupSpec::new(8, 1).unwrap());
        let f = additive_energy_fourier(&full).unwrap();
        assert!((f - 512.0).abs() < 1e-9 * 512.0);
    }

    #[test]
    fn mixed_energy_examples() {
        let g = GroupSpec::new(4, 1).unwrap();
        let a = set(&g, &[0, 1, 3]);
        // all four sets equal collapses to the additive energy
        assert_eq!(
            mixed_energy(&a, &a, &a, &a).unwrap(),
            additive_energy_exact(&a).unwrap()
        );
        let z = set(&g, &[0]);
        let o = set(&g, &[1]);
        assert_eq!(mixed_energy(&z, &o, &o, &z).unwrap(), 1);
        assert_eq!(mixed_energy(&z, &z, &o, &o).unwrap(), 0);
    }

    #[test]
    fn max_ratio_singleton() {
        let g = GroupSpec::new(10, 1).unwrap();
        let a = set(&g, &[4]);
        let (ratio, witness) = max_subset_energy_ratio(&a, SubsetMode::Exact).unwrap();
        assert_eq!(ratio, 1.0);
        assert_eq!(witness.flat_indices(), &[4]);
    }

    #[test]
    fn max_ratio_ap4_in_z100() {
        let g = GroupSpec::new(100, 1).unwrap();
        let a = set(&g, &[0, 1, 2, 3]);
        assert_eq!(additive_energy_exact(&a).unwrap(), 44);
        let (ratio, witness) = max_subset_energy_ratio(&a, SubsetMode::Exact).unwrap();
        assert!((ratio - 2.75).abs() < 1e-12);
        assert_eq!(witness.flat_indices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn max_ratio_full_group_z4() {
        let g = GroupSpec::new(4, 1).unwrap();
        let a = IndexSet::full(g);
        let (ratio, witness) = max_subset_energy_ratio(&a, SubsetMode::Exact).unwrap();
        assert!((ratio - 4.0).abs() < 1e-12);
        assert_eq!(witness.len(), 4);
    }

    #[test]
    fn exact_scan_rejects_large_sets() {
        let g = GroupSpec::new(100, 1).unwrap();
        let a = set(&g, &(0..21).collect::<Vec<_>>());
        let err = max_subset_energy_ratio(&a, SubsetMode::Exact).unwrap_err();
        assert!(matches!(err, Error::SubsetEnumerationTooLarge { .. }));
        // lower-bound mode accepts it
        let (ratio, _) = max_subset_energy_ratio(&a, SubsetMode::LowerBound).unwrap();
        assert!(ratio >= 1.0);
    }

    #[test]
    fn lower_bound_never_exceeds_exact_max() {
        let g = GroupSpec::new(50, 1).unwrap();
        let a = set(&g, &[0, 1, 2, 5, 9, 14, 30]);
        let (exact, _) = max_subset_energy_ratio(&a, SubsetMode::Exact).unwrap();
        let (lower, _) = max_subset_energy_ratio(&a, SubsetMode::LowerBound).unwrap();
        assert!(lower <= exact + 1e-12);
    }

    #[test]
    fn partition_rejects_overlap() {
        let g = GroupSpec::new(10, 1).unwrap();
        let p = Partition::new(vec![set(&g, &[0, 1]), set(&g, &[1, 2])]);
        match p {
            Err(Error::OverlappingParts { point }) => assert_eq!(point, vec![1]),
            other => panic!("expected overlap error, got {other:?}"),
        }
    }

    #[test]
    fn union_bound_examples() {
        let g = GroupSpec::new(8, 1).unwrap();
        // single part: bound equals the part's own energy
        let s = set(&g, &[0, 1, 5]);
        let p = Partition::new(vec![s.clone()]).unwrap();
        assert_eq!(
            union_energy_bound(&p).unwrap(),
            additive_energy_exact(&s).unwrap()
        );
        // {0,1} split into singletons: 8 * (1 + 1) = 16 >= L({0,1}) = 6
        let p2 = Partition::new(vec![set(&g, &[0]), set(&g, &[1])]).unwrap();
        assert_eq!(union_energy_bound(&p2).unwrap(), 16);
        assert_eq!(additive_energy_exact(&set(&g, &[0, 1])).unwrap(), 6);
    }

    #[test]
    fn regularity_fit_examples() {
        let g = GroupSpec::new(100, 1).unwrap();
        let single = set(&g, &[7]);
        let fit = energy_regularity_fit(&single, 2.0, SubsetMode::Exact).unwrap();
        assert_eq!(fit.c, 1.0);

        let a = set(&g, &[0, 1, 2, 3]);
        let fit2 = energy_regularity_fit(&a, 2.0, SubsetMode::Exact).unwrap();
        assert!((fit2.c - 2.75).abs() < 1e-12);
        assert_eq!(fit2.witness.len(), 4);

        let fit3 = energy_regularity_fit(&a, 3.0, SubsetMode::Exact).unwrap();
        assert!((fit3.c - 1.0).abs() < 1e-12);
        assert_eq!(fit3.witness.len(), 1);

        assert!(energy_regularity_fit(&a, 1.5, SubsetMode::Exact).is_err());
    }

    #[test]
    fn dyadic_binning() {
        let g = GroupSpec::new(4, 1).unwrap();
        let f = Signal::new(
            g,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.25, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        // reuse the signal buffer as a spectrum
        let h = Spectrum::new(g, f.values().to_vec()).unwrap();
        let decomposition = dyadic_level_sets(&h);
        assert_eq!(decomposition.scale, 1.0);
        let levels = decomposition.levels;
        assert_eq!(levels.len(), 3);
        assert_eq!(levels[0].0, 1);
        assert_eq!(levels[0].1.flat_indices(), &[0]);
        assert_eq!(levels[1].0, 2);
        assert_eq!(levels[1].1.flat_indices(), &[1]);
        assert_eq!(levels[2].0, 3);
        assert_eq!(levels[2].1.flat_indices(), &[2]);
    }

    #[test]
    fn dyadic_all_equal_and_zero() {
        let g = GroupSpec::new(5, 1).unwrap();
        let ones = Spectrum::new(g, vec![Complex64::new(0.0, -0.3); 5]).unwrap();
        let decomposition = dyadic_level_sets(&ones);
        assert!((decomposition.scale - 0.3).abs() < 1e-15);
        assert_eq!(decomposition.levels.len(), 1);
        assert_eq!(decomposition.levels[0].0, 1);
        assert_eq!(decomposition.levels[0].1.len(), 5);

        let empty = dyadic_level_sets(&Spectrum::zero(g));
        assert!(empty.levels.is_empty());
        assert_eq!(empty.scale, 0.0);
    }

    #[test]
    fn translation_invariance() {
        let g = GroupSpec::new(30, 1).unwrap();
        let a = set(&g, &[0, 3, 7, 11, 26]);
        let base = additive_energy_exact(&a).unwrap();
        for t in [1usize, 9, 17] {
            assert_eq!(additive_energy_exact(&a.translate(t)).unwrap(), base);
        }
    }
}
