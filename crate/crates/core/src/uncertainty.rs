//! Support/energy uncertainty principles, evaluated and certified on
//! concrete signals or support pairs.
//!
//! Every checker records the two sides of its inequality exactly as compared,
//! together with the named intermediate quantities, so a report can be
//! audited without rerunning the computation. Inequalities are compared with
//! a 1e-9 relative slack to absorb floating-point roundoff at equality cases;
//! the integer quantities feeding the sides are exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::energy::{
    additive_energy_exact, max_subset_energy_ratio, union_energy_bound, Partition, SubsetMode,
};
use crate::error::{Error, Result};
use crate::group::{dft, GroupSpec, IndexSet, Signal};

/// Relative slack used when comparing the two sides of a principle.
pub const COMPARISON_REL_SLACK: f64 = 1e-9;

/// Default support threshold, relative to the peak modulus of each side.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-9;

/// Which uncertainty inequality a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principle {
    Classical,
    AdditiveI,
    AdditiveII,
    Partitioned,
    Restriction,
}

/// Evaluation record of one principle on one input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UPReport {
    pub principle: Principle,
    /// Left side of the inequality `lhs <= rhs`, exactly as compared.
    pub lhs: f64,
    pub rhs: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    pub holds: bool,
    /// False when a sampled subset maximum leaves the verdict inconclusive:
    /// a lower bound on the right side can certify that the inequality
    /// holds, never that it fails.
    pub certifying: bool,
    pub components: BTreeMap<String, f64>,
}

fn holds_with_slack(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs || (lhs - rhs) <= COMPARISON_REL_SLACK * lhs.abs()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    Ok(())
}

/// Geometric interpolation rhs(0)^{1-alpha} * rhs(1)^{alpha} with exact
/// endpoints.
fn interpolate(f0: f64, f1: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        f0
    } else if alpha == 1.0 {
        f1
    } else {
        f0.powf(1.0 - alpha) * f1.powf(alpha)
    }
}

/// Support pair (E, Sigma) of a nonzero signal, thresholded at
/// `tol * peak modulus` on each side.
pub fn support_pair(f: &Signal, tol: f64) -> Result<(IndexSet, IndexSet)> {
    if f.is_zero() {
        return Err(Error::ZeroSignal);
    }
    let hat = dft(f)?;
    let e = f.support(tol * f.max_abs());
    let sigma = hat.support(tol * hat.max_abs());
    Ok((e, sigma))
}

/// The classical principle: |supp f| * |supp fhat| >= N^d for nonzero f.
pub fn classical_up(f: &Signal, tol: f64) -> Result<UPReport> {
    let (e, sigma) = support_pair(f, tol)?;
    let lhs = f.group().size_f64();
    let rhs = (e.len() as f64) * (sigma.len() as f64);
    let mut components = BTreeMap::new();
    components.insert("e_size".into(), e.len() as f64);
    components.insert("sigma_size".into(), sigma.len() as f64);
    components.insert("support_tol".into(), tol);
    Ok(UPReport {
        principle: Principle::Classical,
        lhs,
        rhs,
        alpha: None,
        holds: holds_with_slack(lhs, rhs),
        certifying: true,
        components,
    })
}

/// Energy-weighted principle, first form:
/// `N^d <= (|E| L(Sigma)^{1/3})^{1-alpha} * (L(E)^{1/3} |Sigma|)^{alpha}`.
///
/// The caller asserts that (E, Sigma) arise as the supports of some nonzero
/// signal; [`additive_up_i_signal`] derives and checks them.
pub fn additive_up_i(e: &IndexSet, sigma: &IndexSet, alpha: f64) -> Result<UPReport> {
    check_alpha(alpha)?;
    e.check_same_group(sigma)?;
    if e.is_empty() || sigma.is_empty() {
        return Err(Error::EmptySet);
    }
    let energy_e = additive_energy_exact(e)?;
    let energy_sigma = additive_energy_exact(sigma)?;
    let f0 = (e.len() as f64) * (energy_sigma as f64).cbrt();
    let f1 = (energy_e as f64).cbrt() * (sigma.len() as f64);
    let lhs = e.group().size_f64();
    let rhs = interpolate(f0, f1, alpha);
    let mut components = BTreeMap::new();
    components.insert("e_size".into(), e.len() as f64);
    components.insert("sigma_size".into(), sigma.len() as f64);
    components.insert("energy_e".into(), energy_e as f64);
    components.insert("energy_sigma".into(), energy_sigma as f64);
    components.insert("rhs_alpha0".into(), f0);
    components.insert("rhs_alpha1".into(), f1);
    Ok(UPReport {
        principle: Principle::AdditiveI,
        lhs,
        rhs,
        alpha: Some(alpha),
        holds: holds_with_slack(lhs, rhs),
        certifying: true,
        components,
    })
}

/// [`additive_up_i`] on the supports of a concrete nonzero signal.
pub fn additive_up_i_signal(f: &Signal, tol: f64, alpha: f64) -> Result<UPReport> {
    let (e, sigma) = support_pair(f, tol)?;
    additive_up_i(&e, &sigma, alpha)
}

/// Energy-weighted principle, second form, using subset-maximal normalized
/// energies on each side:
/// `N^d <= (|E| max_{U in Sigma} L(U)/|U|^2)^{1-alpha} * (|Sigma| max_{F in E} L(F)/|F|^2)^{alpha}`.
///
/// A side whose exponent vanishes is not scanned. In lower-bound mode the
/// right side is only a lower bound, so `certifying` is true only when the
/// inequality is confirmed to hold.
pub fn additive_up_ii(
    e: &IndexSet,
    sigma: &IndexSet,
    alpha: f64,
    mode: SubsetMode,
) -> Result<UPReport> {
    check_alpha(alpha)?;
    e.check_same_group(sigma)?;
    if e.is_empty() || sigma.is_empty() {
        return Err(Error::EmptySet);
    }
    let lhs = e.group().size_f64();
    let mut components = BTreeMap::new();
    components.insert("e_size".into(), e.len() as f64);
    components.insert("sigma_size".into(), sigma.len() as f64);

    let mut f0 = 1.0;
    if alpha < 1.0 {
        let (ratio_sigma, witness) = max_subset_energy_ratio(sigma, mode)?;
        f0 = (e.len() as f64) * ratio_sigma;
        components.insert("max_ratio_sigma".into(), ratio_sigma);
        components.insert("max_ratio_sigma_witness_size".into(), witness.len() as f64);
        components.insert("rhs_alpha0".into(), f0);
    }
    let mut f1 = 1.0;
    if alpha > 0.0 {
        let (ratio_e, witness) = max_subset_energy_ratio(e, mode)?;
        f1 = (sigma.len() as f64) * ratio_e;
        components.insert("max_ratio_e".into(), ratio_e);
        components.insert("max_ratio_e_witness_size".into(), witness.len() as f64);
        components.insert("rhs_alpha1".into(), f1);
    }
    let rhs = interpolate(f0, f1, alpha);
    let holds = holds_with_slack(lhs, rhs);
    Ok(UPReport {
        principle: Principle::AdditiveII,
        lhs,
        rhs,
        alpha: Some(alpha),
        holds,
        certifying: mode == SubsetMode::Exact || holds,
        components,
    })
}

/// [`additive_up_ii`] on the supports of a concrete nonzero signal.
pub fn additive_up_ii_signal(
    f: &Signal,
    tol: f64,
    alpha: f64,
    mode: SubsetMode,
) -> Result<UPReport> {
    let (e, sigma) = support_pair(f, tol)?;
    additive_up_ii(&e, &sigma, alpha, mode)
}

/// Disjoint-union form: `|E| * n^3 * sum_i L(S_i) >= N^d` where the
/// partition's parts cover the frequency support of the signal whose space
/// support is E. Calling it with roles swapped (frequency support size and a
/// partition of E) gives the dual form.
pub fn partitioned_up(e: &IndexSet, freq_partition: &Partition) -> Result<UPReport> {
    e.check_same_group(freq_partition.union())?;
    if e.is_empty() || freq_partition.union().is_empty() {
        return Err(Error::EmptySet);
    }
    let bound = union_energy_bound(freq_partition)?;
    let lhs = e.group().size_f64();
    let rhs = (e.len() as f64) * bound as f64;
    let mut components = BTreeMap::new();
    components.insert("e_size".into(), e.len() as f64);
    components.insert("n_parts".into(), freq_partition.n_parts() as f64);
    components.insert("weighted_energy_sum".into(), bound as f64);
    let mut sum_energies: u64 = 0;
    for part in freq_partition.parts() {
        sum_energies += additive_energy_exact(part)?;
    }
    components.insert("sum_part_energies".into(), sum_energies as f64);
    Ok(UPReport {
        principle: Principle::Partitioned,
        lhs,
        rhs,
        alpha: None,
        holds: holds_with_slack(lhs, rhs),
        certifying: true,
        components,
    })
}

/// [`partitioned_up`] on a concrete signal: derives E = supp(f), checks the
/// partition covers supp(fhat), then evaluates the bound.
pub fn partitioned_up_signal(
    f: &Signal,
    tol: f64,
    freq_partition: &Partition,
) -> Result<UPReport> {
    let (e, sigma) = support_pair(f, tol)?;
    if !sigma.is_subset_of(freq_partition.union()) {
        let uncovered = sigma
            .flat_indices()
            .iter()
            .find(|&&m| !freq_partition.union().contains(m))
            .copied()
            .expect("subset check failed, so a point is uncovered");
        return Err(Error::PartitionDoesNotCover {
            point: f.group().coords_of(uncovered),
        });
    }
    partitioned_up(&e, freq_partition)
}

/// Restriction inequality on an arbitrary frequency set Sigma:
///
/// ```text
/// ((1/|Sigma|) sum_{m in Sigma} |fhat(m)|^2)^{1/2}
///   <= (|Sigma|/N^{d/2})^{-1/2} (max_{U in Sigma} L(U)/|U|^2)^{1/4}
///      N^{-d} (sum_x |f(x)|^{4/3})^{3/4}
/// ```
///
/// Holds for every f (both sides vanish when f = 0).
pub fn restriction_inequality_check(
    f: &Signal,
    sigma: &IndexSet,
    mode: SubsetMode,
) -> Result<UPReport> {
    f.group().eq(sigma.group()).then_some(()).ok_or_else(|| {
        Error::GroupMismatch {
            a_modulus: f.group().modulus(),
            a_dimension: f.group().dimension(),
            b_modulus: sigma.group().modulus(),
            b_dimension: sigma.group().dimension(),
        }
    })?;
    if sigma.is_empty() {
        return Err(Error::EmptySet);
    }
    let group = f.group();
    let hat = dft(f)?;
    let sigma_size = sigma.len() as f64;
    let mean_square: f64 = sigma
        .flat_indices()
        .iter()
        .map(|&m| hat.values()[m].norm_sqr())
        .sum::<f64>()
        / sigma_size;
    let lhs = mean_square.sqrt();

    let (max_ratio, _) = max_subset_energy_ratio(sigma, mode)?;
    let density_factor = (sigma_size / group.size_f64().sqrt()).powf(-0.5);
    let four_thirds: f64 = f
        .values()
        .iter()
        .map(|v| v.norm().powf(4.0 / 3.0))
        .sum::<f64>()
        .powf(0.75);
    let rhs = density_factor * max_ratio.powf(0.25) / group.size_f64() * four_thirds;

    let mut components = BTreeMap::new();
    components.insert("sigma_size".into(), sigma_size);
    components.insert("max_ratio_sigma".into(), max_ratio);
    components.insert("density_factor".into(), density_factor);
    components.insert("l43_sum_pow34".into(), four_thirds);
    let holds = holds_with_slack(lhs, rhs);
    Ok(UPReport {
        principle: Principle::Restriction,
        lhs,
        rhs,
        alpha: None,
        holds,
        certifying: mode == SubsetMode::Exact || holds,
        components,
    })
}

/// Empirical ratio ||f||_{L^q(mu)} / ||f||_{L^2(mu)} for q > 2.
///
/// Exploratory probe for spectra supported on sampled generic sets; no
/// pass/fail threshold is attached.
pub fn generic_qnorm_probe(f: &Signal, q: f64) -> Result<f64> {
    if !(q > 2.0) || !q.is_finite() {
        return Err(Error::QOutOfRange { q });
    }
    if f.is_zero() {
        return Err(Error::ZeroSignal);
    }
    Ok(f.lp_norm_mu(q) / f.lp_norm_mu(2.0))
}

/// Self-bound factor of the sup-norm chain behind [`additive_up_i`]:
/// `c = |Sigma|^{3/4} N^{-3d/4} L(E)^{1/4}` satisfies
/// `||f||_inf <= c ||f||_inf` for any nonzero f with supports (E, Sigma),
/// so c >= 1, with equality attained by a point mass.
pub fn supnorm_chain_factor(sigma_size: usize, energy_e: u64, group: &GroupSpec) -> f64 {
    (sigma_size as f64).powf(0.75) * group.size_f64().powf(-0.75) * (energy_e as f64).powf(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_on_delta_is_equality() {
        let g = GroupSpec::new(16, 1).unwrap();
        let f = Signal::delta(g, 0, c(1.0, 0.0));
        let r = classical_up(&f, DEFAULT_SUPPORT_TOL).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, 16.0);
        assert_eq!(r.rhs, 16.0);
    }

    #[test]
    fn classical_on_even_indicator_z4_is_equality() {
        let g = GroupSpec::new(4, 1).unwrap();
        let set = IndexSet::from_flat_indices(g, vec![0, 2]).unwrap();
        let f = Signal::indicator(&set);
        let r = classical_up(&f, DEFAULT_SUPPORT_TOL).unwrap();
        assert_eq!(r.components["e_size"], 2.0);
        assert_eq!(r.components["sigma_size"], 2.0);
        assert!(r.holds);
        assert_eq!(r.rhs, 4.0);
    }

    #[test]
    fn classical_rejects_zero_signal() {
        let g = GroupSpec::new(8, 1).unwrap();
        assert!(matches!(
            classical_up(&Signal::zero(g), 1e-9),
            Err(Error::ZeroSignal)
        ));
    }

    #[test]
    fn additive_i_delta_and_constant_are_equalities() {
        let g = GroupSpec::new(16, 1).unwrap();
        // delta: E = {0}, Sigma = Z_N, alpha = 0
        let f = Signal::delta(g, 0, c(2.0, -1.0));
        let r = additive_up_i_signal(&f, DEFAULT_SUPPORT_TOL, 0.0).unwrap();
        assert!(r.holds);
        assert!((r.rhs - 16.0).abs() < 1e-9 * 16.0);
        // constant: E = Z_N, Sigma = {0}, alpha = 0
        let ones = Signal::new(g, vec![c(1.0, 0.0); 16]).unwrap();
        let r2 = additive_up_i_signal(&ones, DEFAULT_SUPPORT_TOL, 0.0).unwrap();
        assert!(r2.holds);
        assert!((r2.rhs - 16.0).abs() < 1e-9 * 16.0);
    }

    #[test]
    fn additive_i_subgroup_pair_at_half_alpha() {
        // E = Sigma = {0,2} in Z_4, energies 8; both factors are 2 * 8^{1/3},
        // so the interpolated right side is exactly 4 = N.
        let g = GroupSpec::new(4, 1).unwrap();
        let s = IndexSet::from_flat_indices(g, vec![0, 2]).unwrap();
        let r = additive_up_i(&s, &s, 0.5).unwrap();
        assert!(r.holds);
        assert!((r.rhs - 4.0).abs() < 1e-9 * 4.0);
        assert_eq!(r.components["energy_e"], 8.0);
        assert_eq!(r.components["energy_sigma"], 8.0);
    }

    #[test]
    fn additive_i_interpolation_identity() {
        let g = GroupSpec::new(12, 1).unwrap();
        let e = IndexSet::from_flat_indices(g, vec![0, 1, 5]).unwrap();
        let sigma = IndexSet::from_flat_indices(g, vec![0, 2, 4, 6, 8, 10]).unwrap();
        let r0 = additive_up_i(&e, &sigma, 0.0).unwrap().rhs;
        let r1 = additive_up_i(&e, &sigma, 1.0).unwrap().rhs;
        for alpha in [0.25, 0.5, 0.75] {
            let r = additive_up_i(&e, &sigma, alpha).unwrap().rhs;
            let expected = r0.powf(1.0 - alpha) * r1.powf(alpha);
            assert!((r - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn additive_ii_delta_case() {
        let g = GroupSpec::new(8, 1).unwrap();
        let f = Signal::delta(g, 3, c(1.0, 1.0));
        let r = additive_up_ii_signal(&f, DEFAULT_SUPPORT_TOL, 0.0, SubsetMode::Exact).unwrap();
        // |E| = 1, max ratio over Z_8 is attained by the full group: ratio N.
        assert!(r.holds);
        assert!((r.rhs - 8.0).abs() < 1e-9 * 8.0);
        assert!(r.certifying);
    }

    #[test]
    fn additive_ii_subgroup_pair() {
        let g = GroupSpec::new(4, 1).unwrap();
        let s = IndexSet::from_flat_indices(g, vec![0, 2]).unwrap();
        let r0 = additive_up_ii(&s, &s, 0.0, SubsetMode::Exact).unwrap();
        assert!((r0.rhs - 4.0).abs() < 1e-12);
        assert!(r0.holds);
        let r1 = additive_up_ii(&s, &s, 1.0, SubsetMode::Exact).unwrap();
        assert!((r1.rhs - 4.0).abs() < 1e-12);
    }

    #[test]
    fn partitioned_up_examples() {
        let g = GroupSpec::new(8, 1).unwrap();
        // constant signal: E = Z_8, fhat supported on {0}
        let ones = Signal::new(g, vec![c(1.0, 0.0); 8]).unwrap();
        let part = Partition::new(vec![IndexSet::from_flat_indices(g, vec![0]).unwrap()]).unwrap();
        let r = partitioned_up_signal(&ones, DEFAULT_SUPPORT_TOL, &part).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs, 8.0);

        // delta signal, n = 1 partition of the full spectrum: 1 * N^3 >= N
        let f = Signal::delta(g, 0, c(1.0, 0.0));
        let full = Partition::new(vec![IndexSet::full(g)]).unwrap();
        let r2 = partitioned_up_signal(&f, DEFAULT_SUPPORT_TOL, &full).unwrap();
        assert!(r2.holds);
        assert_eq!(r2.rhs, 512.0);
    }

    #[test]
    fn partition_must_cover_spectrum_support() {
        let g = GroupSpec::new(8, 1).unwrap();
        let f = Signal::delta(g, 0, c(1.0, 0.0)); // spectrum everywhere nonzero
        let small = Partition::new(vec![IndexSet::from_flat_indices(g, vec![0]).unwrap()]).unwrap();
        assert!(matches!(
            partitioned_up_signal(&f, DEFAULT_SUPPORT_TOL, &small),
            Err(Error::PartitionDoesNotCover { .. })
        ));
    }

    #[test]
    fn restriction_delta_sigma_zero() {
        let g = GroupSpec::new(4, 1).unwrap();
        let f = Signal::delta(g, 0, c(1.0, 0.0));
        let sigma = IndexSet::from_flat_indices(g, vec![0]).unwrap();
        let r = restriction_inequality_check(&f, &sigma, SubsetMode::Exact).unwrap();
        assert!((r.lhs - 0.25).abs() < 1e-12);
        assert!((r.rhs - std::f64::consts::SQRT_2 / 4.0).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn restriction_zero_signal_degenerates() {
        let g = GroupSpec::new(4, 1).unwrap();
        let sigma = IndexSet::from_flat_indices(g, vec![1, 2]).unwrap();
        let r = restriction_inequality_check(&Signal::zero(g), &sigma, SubsetMode::Exact).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn qnorm_probe_values() {
        let g = GroupSpec::new(16, 1).unwrap();
        let ones = Signal::new(g, vec![c(1.0, 0.0); 16]).unwrap();
        assert!((generic_qnorm_probe(&ones, 4.0).unwrap() - 1.0).abs() < 1e-12);
        let delta = Signal::delta(g, 0, c(1.0, 0.0));
        assert!((generic_qnorm_probe(&delta, 4.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(generic_qnorm_probe(&delta, 2.0).is_err());
        assert!(generic_qnorm_probe(&Signal::zero(g), 4.0).is_err());
    }

    #[test]
    fn chain_factor_certifies_delta_equality() {
        // Point mass: Sigma is the whole group, L(E) = 1, factor exactly 1.
        // With the sign of the group-size exponent flipped the factor would
        // be N^{3d/2}, which cannot certify the equality case.
        let g = GroupSpec::new(16, 1).unwrap();
        let factor = supnorm_chain_factor(16, 1, &g);
        assert!((factor - 1.0).abs() < 1e-9);
        let flipped =
            (16f64).powf(0.75) * g.size_f64().powf(0.75) * 1f64.powf(0.25);
        assert!((flipped - 1.0).abs() > 1.0);
    }
}
