//! Minimization-based recovery: the constrained L1 minimizer and the
//! support-constrained L2 minimizer.
//!
//! The L1 problem is
//!
//! ```text
//! minimize sum_x |u(x)|   subject to   uhat(m) = fhat(m) for all m not in S,
//! ```
//!
//! a sum-of-moduli objective over complex signals with an affine frequency
//! constraint. It is solved by operator splitting: alternate the exact
//! projection onto the constraint set (replace the observed coefficients,
//! keep the free ones on S) with complex magnitude soft-thresholding in the
//! space domain, plus a running dual correction. The forward map is a scaled
//! isometry, so coefficient replacement is the exact Euclidean projection.
//!
//! The L2 problem fixes the support size and asks for the smallest-norm
//! feasible completion; at the supported scales it is solved exhaustively
//! over candidate supports with one small linear solve per support.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{DftPlan, IndexSet, Signal, Spectrum};
use crate::recovery::CorruptedSpectrum;

/// Iteration limits and tolerances for the minimizers.
#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Successive-iterate max-change threshold.
    pub primal_tol: f64,
    /// Consensus gap threshold between the feasible and thresholded iterates.
    pub dual_tol: f64,
    /// Splitting coupling parameter; the shrinkage threshold is 1/penalty.
    pub penalty: f64,
    /// Max allowed |uhat(m) - fhat(m)| over observed m.
    pub feasibility_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 200_000,
            primal_tol: 1e-9,
            dual_tol: 1e-9,
            penalty: 1.0,
            feasibility_tol: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("primal_tol", self.primal_tol),
            ("dual_tol", self.dual_tol),
            ("penalty", self.penalty),
            ("feasibility_tol", self.feasibility_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidSolverConfig {
                    reason: format!("{name} must be positive and finite, got {v}"),
                });
            }
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidSolverConfig {
                reason: "max_iters must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Outcome of a minimization run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub minimizer: Signal,
    /// Objective value at the minimizer (unnormalized l1 or l2 sum).
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// max over observed m of |dft(minimizer)(m) - fhat(m)|.
    pub constraint_residual: f64,
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Complex magnitude soft-thresholding: shrink |v| by `threshold`, keep phase.
fn soft_threshold(v: Complex64, threshold: f64) -> Complex64 {
    let mag = v.norm();
    if mag <= threshold {
        Complex64::new(0.0, 0.0)
    } else {
        v * ((mag - threshold) / mag)
    }
}

/// Residual of the frequency equality constraints at `u`.
fn constraint_residual(plan: &DftPlan, u: &Signal, c: &CorruptedSpectrum) -> Result<f64> {
    let hat = plan.dft(u)?;
    Ok(hat
        .values()
        .iter()
        .zip(c.observed_values())
        .enumerate()
        .filter(|(m, _)| !c.is_missing(*m))
        .map(|(_, (got, want))| (got - want).norm())
        .fold(0.0, f64::max))
}

/// Coefficients of `values` at the listed frequencies only.
fn dft_at(plan: &DftPlan, values: &[Complex64], freqs: &[usize]) -> Vec<Complex64> {
    let group = plan.group();
    let n = group.modulus();
    let scale = 1.0 / group.size_f64();
    freqs
        .iter()
        .map(|&m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, v) in values.iter().enumerate() {
                if v.re != 0.0 || v.im != 0.0 {
                    let t = group.dot_mod(x, m);
                    acc += plan.chi((n - t) % n) * v;
                }
            }
            acc * scale
        })
        .collect()
}

/// Accumulate `sum_m chi(x.m) coeff_m` over the listed frequencies into `out`.
fn accumulate_idft(plan: &DftPlan, freqs: &[usize], coeffs: &[Complex64], out: &mut [Complex64]) {
    let group = plan.group();
    for (slot, value) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&m, &c) in freqs.iter().zip(coeffs) {
            acc += plan.chi(group.dot_mod(slot, m)) * c;
        }
        *value += acc;
    }
}

/// Approximate the minimizer of `sum_x |u(x)|` subject to the observed
/// frequency equalities.
///
/// Non-convergence within `max_iters` yields `converged = false` in the
/// result, not an error. The returned minimizer is the projected (exactly
/// feasible) iterate.
pub fn l1_minimize(c: &CorruptedSpectrum, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let group = *c.group();
    let size = group.size();
    let plan = DftPlan::new(group);
    let missing: Vec<usize> = c.missing().flat_indices().to_vec();

    // Reconstruction from the observed coefficients alone; the projection of
    // any v is base + (inverse transform of v's coefficients on S).
    let observed = Spectrum::new(group, c.observed_values().to_vec())?;
    let base = plan.idft(&observed)?;

    let project = |v: &[Complex64]| -> Vec<Complex64> {
        let mut out = base.values().to_vec();
        if !missing.is_empty() {
            let free = dft_at(&plan, v, &missing);
            accumulate_idft(&plan, &missing, &free, &mut out);
        }
        out
    };

    let threshold = 1.0 / cfg.penalty;
    let mut z = vec![Complex64::new(0.0, 0.0); size];
    let mut w = vec![Complex64::new(0.0, 0.0); size];
    let mut u = project(&z);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iters {
        iterations += 1;
        let v: Vec<Complex64> = z.iter().zip(&w).map(|(zi, wi)| zi - wi).collect();
        u = project(&v);
        let z_new: Vec<Complex64> = u
            .iter()
            .zip(&w)
            .map(|(ui, wi)| soft_threshold(ui + wi, threshold))
            .collect();
        for ((wi, ui), zi) in w.iter_mut().zip(&u).zip(&z_new) {
            *wi += ui - zi;
        }
        let iterate_change = max_abs_diff(&z_new, &z);
        let consensus_gap = max_abs_diff(&u, &z_new);
        z = z_new;
        if iterate_change < cfg.primal_tol && consensus_gap < cfg.dual_tol {
            converged = true;
            break;
        }
    }

    let minimizer = Signal::new(group, u)?;
    let residual = constraint_residual(&plan, &minimizer, c)?;
    let objective = minimizer.lp_norm(1.0);
    Ok(SolveResult {
        minimizer,
        objective,
        iterations,
        converged: converged && residual <= cfg.feasibility_tol,
        constraint_residual: residual,
    })
}

/// Work budget for the exhaustive L2 scan, in constraint-matrix entries
/// visited: C(N^d, k) * rows * k. Covers every desk-scale shape (the whole
/// 24-element group at k = 4, or the whole support at small N^d).
pub const L2_WORK_BUDGET: u128 = 2_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

/// One feasible support from the exhaustive scan.
#[derive(Debug, Clone)]
pub struct SupportCandidate {
    pub support: IndexSet,
    pub values: Vec<Complex64>,
    /// Unnormalized l2 norm of the completion.
    pub norm: f64,
    pub residual: f64,
}

/// Solve the dense complex system `a x = b` by Gaussian elimination with
/// partial pivoting. Returns None when a pivot collapses.
fn solve_dense(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = a.len();
    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pivot_mag < 1e-300 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in (col + 1)..n {
            let factor = a[r][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[r][k] -= factor * v;
            }
            let bv = b[col];
            b[r] -= factor * bv;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for k in (i + 1)..n {
            acc -= a[i][k] * x[k];
        }
        x[i] = acc / a[i][i];
    }
    Some(x)
}

/// All supports of the given size admitting a feasible completion, with the
/// minimal-norm completion for each. Supports are scanned in lexicographic
/// order.
pub fn l2_support_survey(
    c: &CorruptedSpectrum,
    support_size: usize,
    cfg: &SolverConfig,
) -> Result<Vec<SupportCandidate>> {
    cfg.validate()?;
    let group = *c.group();
    let size = group.size();
    if support_size > size {
        return Err(Error::SubsetSizeOutOfRange {
            k: support_size,
            size,
        });
    }
    let plan = DftPlan::new(group);
    let n_mod = group.modulus();
    let observed: Vec<usize> = (0..size).filter(|&m| !c.is_missing(m)).collect();
    let count = binomial(size, support_size);
    let work = count * observed.len() as u128 * support_size.max(1) as u128;
    if work > L2_WORK_BUDGET {
        return Err(Error::SupportBudgetExceeded {
            n: size,
            k: support_size,
            count,
            limit: L2_WORK_BUDGET,
        });
    }
    let b: Vec<Complex64> = observed.iter().map(|&m| c.observed_values()[m]).collect();
    let rows = observed.len();
    let scale = 1.0 / group.size_f64();

    let mut found = Vec::new();
    let mut combo: Vec<usize> = (0..support_size).collect();
    loop {
        // Constraint matrix restricted to the candidate support:
        // A[r][j] = N^{-d} chi(-t_j . m_r).
        let a: Vec<Vec<Complex64>> = observed
            .iter()
            .map(|&m| {
                combo
                    .iter()
                    .map(|&t| plan.chi((n_mod - group.dot_mod(t, m)) % n_mod) * scale)
                    .collect()
            })
            .collect();

        let solution: Option<Vec<Complex64>> = if support_size == 0 {
            Some(Vec::new())
        } else if support_size <= rows {
            // Overdetermined: least squares via the normal equations.
            let mut gram = vec![vec![Complex64::new(0.0, 0.0); support_size]; support_size];
            let mut rhs = vec![Complex64::new(0.0, 0.0); support_size];
            for i in 0..support_size {
                for j in 0..support_size {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for r in 0..rows {
                        acc += a[r][i].conj() * a[r][j];
                    }
                    gram[i][j] = acc;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    acc += a[r][i].conj() * b[r];
                }
                rhs[i] = acc;
            }
            solve_dense(gram, rhs)
        } else {
            // Underdetermined: minimum-norm solution u = A^H (A A^H)^{-1} b.
            let mut gram = vec![vec![Complex64::new(0.0, 0.0); rows]; rows];
            for i in 0..rows {
                for j in 0..rows {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..support_size {
                        acc += a[i][k] * a[j][k].conj();
                    }
                    gram[i][j] = acc;
                }
            }
            solve_dense(gram, b.clone()).map(|y| {
                (0..support_size)
                    .map(|k| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for i in 0..rows {
                            acc += a[i][k].conj() * y[i];
                        }
                        acc
                    })
                    .collect()
            })
        };

        if let Some(x) = solution {
            let residual = (0..rows)
                .map(|r| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, &xk) in x.iter().enumerate() {
                        acc += a[r][k] * xk;
                    }
                    (acc - b[r]).norm()
                })
                .fold(0.0, f64::max);
            if residual < cfg.feasibility_tol {
                let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                found.push(SupportCandidate {
                    support: IndexSet::from_flat_indices(group, combo.clone())?,
                    values: x,
                    norm,
                    residual,
                });
            }
        }

        if !advance_combination(&mut combo, size) {
            break;
        }
    }
    Ok(found)
}

/// Step to the next lexicographic k-combination of 0..n; false when done.
fn advance_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if combo[i] != i + n - k {
            break;
        }
    }
    combo[i] += 1;
    for j in (i + 1)..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

/// Exhaustive support-constrained L2 minimizer: among all supports of the
/// exact given size whose completion satisfies the observed frequencies,
/// return the completion of minimal l2 norm (ties keep the lexicographically
/// smallest support).
pub fn l2_support_minimize(
    c: &CorruptedSpectrum,
    support_size: usize,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let candidates = l2_support_survey(c, support_size, cfg)?;
    let scanned = candidates.len();
    let best = candidates
        .into_iter()
        .min_by(|a, b| a.norm.total_cmp(&b.norm))
        .ok_or(Error::NoFeasibleSupport {
            k: support_size,
            tol: cfg.feasibility_tol,
        })?;
    let mut minimizer = Signal::zero(*c.group());
    for (&t, &v) in best.support.flat_indices().iter().zip(&best.values) {
        minimizer.values_mut()[t] = v;
    }
    Ok(SolveResult {
        minimizer,
        objective: best.norm,
        iterations: scanned,
        converged: true,
        constraint_residual: best.residual,
    })
}

/// True iff the candidate matches the truth entrywise within `tol`.
pub fn verify_recovery(candidate: &Signal, truth: &Signal, tol: f64) -> Result<bool> {
    if candidate.group() != truth.group() {
        return Err(Error::GroupMismatch {
            a_modulus: candidate.group().modulus(),
            a_dimension: candidate.group().dimension(),
            b_modulus: truth.group().modulus(),
            b_dimension: truth.group().dimension(),
        });
    }
    Ok(max_abs_diff(candidate.values(), truth.values()) <= tol)
}
