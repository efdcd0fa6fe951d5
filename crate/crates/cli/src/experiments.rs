//! Seeded recovery sweeps: generate (support, missing set, signal) per
//! trial, evaluate the requested certificates, run the requested recovery
//! methods against ground truth, and aggregate.
//!
//! A sweep is a pure function of its spec. Trials run concurrently on
//! per-trial substreams and aggregation is order-independent, so reports are
//! byte-identical across thread counts. Wall-clock time is kept out of the
//! serialized form for the same reason.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use energy_recover_core::energy::SubsetMode;
use energy_recover_core::ensembles::{
    arithmetic_progression, generic_subset, low_energy_set, random_grid_signal, random_subset,
    RngSeed,
};
use energy_recover_core::error::{Error, Result};
use energy_recover_core::group::{dft, GroupSpec, IndexSet, Point, Signal};
use energy_recover_core::recovery::{
    check_corollary_min, check_direct_binary, check_direct_delta_grid, check_direct_energy,
    check_donoho_stark, direct_recover, l1_threshold, l2_threshold, CorruptedSpectrum,
    RecoveryCertificate,
};
use energy_recover_core::solvers::{
    l1_minimize, l2_support_minimize, verify_recovery, SolverConfig,
};

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "ENERGY_RECOVER_THREADS";

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GroupConfig {
    pub modulus: u64,
    pub dimension: u32,
}

impl GroupConfig {
    pub fn to_group(self) -> Result<GroupSpec> {
        GroupSpec::new(self.modulus, self.dimension)
    }
}

/// How one index set of a trial is generated.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetFamily {
    Random {
        size: usize,
    },
    Ap {
        start: Vec<u64>,
        step: Vec<u64>,
        length: usize,
    },
    LowEnergy {
        size: usize,
        target: u64,
        max_tries: usize,
    },
    Generic {
        q: f64,
    },
}

impl SetFamily {
    fn generate(&self, group: &GroupSpec, seed: RngSeed) -> Result<IndexSet> {
        match self {
            SetFamily::Random { size } => random_subset(group, *size, seed),
            SetFamily::Ap {
                start,
                step,
                length,
            } => arithmetic_progression(
                group,
                &Point::new(start.clone(), group)?,
                &Point::new(step.clone(), group)?,
                *length,
            ),
            SetFamily::LowEnergy {
                size,
                target,
                max_tries,
            } => Ok(low_energy_set(group, *size, *target, *max_tries, seed)?.set),
            SetFamily::Generic { q } => Ok(generic_subset(group, *q, seed)?.set),
        }
    }
}

/// How the trial's ground-truth signal is built on the generated support.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalFamily {
    /// The indicator of the support (grid spacing 1).
    Indicator,
    Grid { delta: f64, value_range: u32 },
}

impl SignalFamily {
    fn grid_delta(&self) -> f64 {
        match self {
            SignalFamily::Indicator => 1.0,
            SignalFamily::Grid { delta, .. } => *delta,
        }
    }

    fn generate(&self, support: &IndexSet, seed: RngSeed) -> Result<Signal> {
        match self {
            SignalFamily::Indicator => Ok(Signal::indicator(support)),
            SignalFamily::Grid { delta, value_range } => {
                random_grid_signal(support, *delta, *value_range, seed)
            }
        }
    }
}

/// Which recovery conditions to certify per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    Ds,
    DirectBinary,
    DirectDeltaGrid,
    Energy,
    Min,
    L1,
    L2,
}

impl ConditionKind {
    pub fn key(&self) -> &'static str {
        match self {
            ConditionKind::Ds => "ds",
            ConditionKind::DirectBinary => "direct_binary",
            ConditionKind::DirectDeltaGrid => "direct_delta_grid",
            ConditionKind::Energy => "energy",
            ConditionKind::Min => "min",
            ConditionKind::L1 => "l1",
            ConditionKind::L2 => "l2",
        }
    }
}

/// Regularity parameters feeding the l2 threshold certificate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct L2Params {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

/// Which recovery methods to run per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    L1Min,
    L2Min,
}

impl Method {
    pub fn key(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::L1Min => "l1_min",
            Method::L2Min => "l2_min",
        }
    }
}

/// Full description of a sweep; sweeps are pure functions of this value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub group: GroupConfig,
    pub trials: usize,
    pub seed: RngSeed,
    pub support_family: SetFamily,
    pub missing_family: SetFamily,
    pub signal: SignalFamily,
    pub conditions: Vec<ConditionKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l2_params: Option<L2Params>,
    pub methods: Vec<Method>,
    /// Where the CLI drops reports; environmental, not part of the result.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Parse {
                what: "experiment spec",
                reason: "trials must be at least 1".into(),
            });
        }
        self.group.to_group()?;
        if self.conditions.contains(&ConditionKind::L2) && self.l2_params.is_none() {
            return Err(Error::Parse {
                what: "experiment spec",
                reason: "the l2 condition needs l2_params (alpha, beta, c)".into(),
            });
        }
        Ok(())
    }
}

/// Everything recorded about one trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub e_size: usize,
    pub s_size: usize,
    /// condition key -> satisfied
    pub certificates: BTreeMap<String, bool>,
    /// condition key . quantity -> value
    pub quantities: BTreeMap<String, f64>,
    /// method key -> recovered ground truth
    pub successes: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregates {
    /// condition key -> fraction of trials satisfied
    pub condition_rates: BTreeMap<String, f64>,
    /// method key -> fraction of trials recovered exactly
    pub success_rates: BTreeMap<String, f64>,
    pub trials_with_errors: usize,
}

/// Sweep outcome. `wall_clock_ms` is measured but never serialized, so the
/// JSON report depends only on the spec.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: ExperimentSpec,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    #[serde(skip)]
    pub wall_clock_ms: u128,
}

const STREAMS_PER_TRIAL: u64 = 8;

fn record_certificate(
    record: &mut TrialRecord,
    kind: ConditionKind,
    cert: &RecoveryCertificate,
) {
    record
        .certificates
        .insert(kind.key().to_string(), cert.satisfied);
    for (k, v) in &cert.quantities {
        record
            .quantities
            .insert(format!("{}.{}", kind.key(), k), *v);
    }
}

fn run_trial(spec: &ExperimentSpec, trial: usize) -> TrialRecord {
    let mut record = TrialRecord {
        trial,
        e_size: 0,
        s_size: 0,
        certificates: BTreeMap::new(),
        quantities: BTreeMap::new(),
        successes: BTreeMap::new(),
        error: None,
    };
    if let Err(e) = run_trial_inner(spec, trial, &mut record) {
        record.error = Some(e.to_string());
        for method in &spec.methods {
            record.successes.entry(method.key().into()).or_insert(false);
        }
    }
    record
}

fn run_trial_inner(
    spec: &ExperimentSpec,
    trial: usize,
    record: &mut TrialRecord,
) -> Result<()> {
    let group = spec.group.to_group()?;
    let base = spec.seed.substream(trial as u64 * STREAMS_PER_TRIAL);
    let e = spec.support_family.generate(&group, base)?;
    let s = spec.missing_family.generate(&group, base.substream(1))?;
    let truth = spec.signal.generate(&e, base.substream(2))?;
    let delta = spec.signal.grid_delta();
    record.e_size = e.len();
    record.s_size = s.len();

    for kind in &spec.conditions {
        let cert = match kind {
            ConditionKind::Ds => check_donoho_stark(e.len(), s.len(), &group),
            ConditionKind::DirectBinary => check_direct_binary(e.len(), s.len(), &group),
            ConditionKind::DirectDeltaGrid => check_direct_delta_grid(&truth, &s, delta)?,
            ConditionKind::Energy => check_direct_energy(&e, &s)?,
            ConditionKind::Min => check_corollary_min(&e, &s, SubsetMode::LowerBound)?,
            ConditionKind::L1 => l1_threshold(&e, &s, None)?,
            ConditionKind::L2 => {
                let p = spec.l2_params.expect("validated");
                l2_threshold(&e, &s, p.alpha, p.beta, p.c)?
            }
        };
        record_certificate(record, *kind, &cert);
    }

    if spec.methods.is_empty() {
        return Ok(());
    }
    let corrupted = CorruptedSpectrum::erase(&dft(&truth)?, &s)?;
    for method in &spec.methods {
        let outcome = match method {
            Method::Direct => {
                let rec = direct_recover(&corrupted, delta)?;
                rec.values() == truth.values()
            }
            Method::L1Min => {
                let result = l1_minimize(&corrupted, &SolverConfig::default())?;
                result.converged && verify_recovery(&result.minimizer, &truth, 1e-6)?
            }
            Method::L2Min => {
                match l2_support_minimize(&corrupted, e.len(), &SolverConfig::default()) {
                    Ok(result) => verify_recovery(&result.minimizer, &truth, 1e-8)?,
                    Err(Error::NoFeasibleSupport { .. }) => false,
                    Err(e) => return Err(e),
                }
            }
        };
        record.successes.insert(method.key().into(), outcome);
    }
    Ok(())
}

fn aggregate(spec: &ExperimentSpec, records: &[TrialRecord]) -> Aggregates {
    let trials = records.len() as f64;
    let mut condition_rates = BTreeMap::new();
    for kind in &spec.conditions {
        let count = records
            .iter()
            .filter(|r| r.certificates.get(kind.key()).copied().unwrap_or(false))
            .count();
        condition_rates.insert(kind.key().to_string(), count as f64 / trials);
    }
    let mut success_rates = BTreeMap::new();
    for method in &spec.methods {
        let count = records
            .iter()
            .filter(|r| r.successes.get(method.key()).copied().unwrap_or(false))
            .count();
        success_rates.insert(method.key().to_string(), count as f64 / trials);
    }
    Aggregates {
        condition_rates,
        success_rates,
        trials_with_errors: records.iter().filter(|r| r.error.is_some()).count(),
    }
}

/// Run every trial of the spec (concurrently, deterministically) and
/// aggregate. Per-trial errors are recorded, never fatal.
pub fn sweep(spec: &ExperimentSpec) -> Result<SweepResult> {
    spec.validate()?;
    let start = Instant::now();
    let records: Vec<TrialRecord> = match thread_cap() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Parse {
                what: "thread pool",
                reason: e.to_string(),
            })?
            .install(|| run_all(spec)),
        None => run_all(spec),
    };
    let aggregates = aggregate(spec, &records);
    Ok(SweepResult {
        spec: spec.clone(),
        records,
        aggregates,
        wall_clock_ms: start.elapsed().as_millis(),
    })
}

fn run_all(spec: &ExperimentSpec) -> Vec<TrialRecord> {
    (0..spec.trials)
        .into_par_iter()
        .map(|trial| run_trial(spec, trial))
        .collect()
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
}

/// Report rendering formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

/// Render a sweep result. JSON is lossless (minus wall clock); CSV is one
/// row per trial; markdown gives the aggregates plus a table of mean
/// certificate quantities.
pub fn render_report(result: &SweepResult, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(format!("{}\n", serde_json::to_string_pretty(result)?)),
        ReportFormat::Csv => {
            let mut out = String::from("trial,e_size,s_size");
            for kind in &result.spec.conditions {
                let _ = write!(out, ",{}", kind.key());
            }
            for method in &result.spec.methods {
                let _ = write!(out, ",{}", method.key());
            }
            out.push_str(",error\n");
            for r in &result.records {
                let _ = write!(out, "{},{},{}", r.trial, r.e_size, r.s_size);
                for kind in &result.spec.conditions {
                    let _ = write!(
                        out,
                        ",{}",
                        r.certificates.get(kind.key()).copied().unwrap_or(false)
                    );
                }
                for method in &result.spec.methods {
                    let _ = write!(
                        out,
                        ",{}",
                        r.successes.get(method.key()).copied().unwrap_or(false)
                    );
                }
                let _ = writeln!(out, ",{}", r.error.clone().unwrap_or_default());
            }
            Ok(out)
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            let _ = writeln!(out, "# Sweep `{}`", result.spec.name);
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "- group: Z_{}^{}",
                result.spec.group.modulus, result.spec.group.dimension
            );
            let _ = writeln!(out, "- trials: {}", result.spec.trials);
            let _ = writeln!(
                out,
                "- seed: {} / stream {}",
                result.spec.seed.seed, result.spec.seed.stream
            );
            let _ = writeln!(
                out,
                "- trials with errors: {}",
                result.aggregates.trials_with_errors
            );
            let _ = writeln!(out);
            let _ = writeln!(out, "## Rates");
            let _ = writeln!(out);
            let _ = writeln!(out, "| kind | key | rate |");
            let _ = writeln!(out, "|------|-----|------|");
            for (k, v) in &result.aggregates.condition_rates {
                let _ = writeln!(out, "| condition | {k} | {v} |");
            }
            for (k, v) in &result.aggregates.success_rates {
                let _ = writeln!(out, "| method | {k} | {v} |");
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "## Mean certificate quantities");
            let _ = writeln!(out);
            let _ = writeln!(out, "| quantity | mean |");
            let _ = writeln!(out, "|----------|------|");
            let mut sums: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
            for r in &result.records {
                for (k, v) in &r.quantities {
                    let entry = sums.entry(k).or_insert((0.0, 0));
                    entry.0 += v;
                    entry.1 += 1;
                }
            }
            for (k, (sum, count)) in sums {
                let _ = writeln!(out, "| {k} | {} |", sum / count as f64);
            }
            Ok(out)
        }
    }
}
