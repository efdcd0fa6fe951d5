//! `energy-recover`: generators, energy reports, uncertainty checks,
//! recovery certificates, recovery solvers, sweeps, and figure reproduction.
//!
//! Exit codes: 0 success; 2 usage or precondition error; 3 sweep completed
//! but some trials recorded errors; 4 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use energy_recover::experiments::{self, ExperimentSpec, ReportFormat, SweepResult};
use energy_recover::figures;
use energy_recover_core::energy::{
    additive_energy_exact, additive_energy_fourier, max_subset_energy_ratio, EnergyReport,
    MaxSubsetReport, Partition, SubsetMode,
};
use energy_recover_core::ensembles::{
    arithmetic_progression, disjoint_union, generic_subset, low_energy_set, random_grid_signal,
    random_subset, RngSeed,
};
use energy_recover_core::error::Error;
use energy_recover_core::group::{GroupSpec, IndexSet, Point, Signal};
use energy_recover_core::io;
use energy_recover_core::recovery::{
    check_corollary_min, check_direct_energy, check_donoho_stark, direct_recover,
    direct_recover_binary, l1_threshold, l2_threshold, BinaryRule, CorruptedSpectrum,
};
use energy_recover_core::solvers::{l1_minimize, l2_support_minimize, SolveResult, SolverConfig};
use energy_recover_core::uncertainty::{
    additive_up_i_signal, additive_up_ii_signal, classical_up, partitioned_up_signal,
    restriction_inequality_check, DEFAULT_SUPPORT_TOL,
};

#[derive(Parser)]
#[command(name = "energy-recover", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct GroupArgs {
    /// Modulus N of Z_N^d.
    #[arg(long)]
    modulus: u64,
    /// Dimension d of Z_N^d.
    #[arg(long, default_value_t = 1)]
    dimension: u32,
}

impl GroupArgs {
    fn to_group(self) -> Result<GroupSpec, Error> {
        GroupSpec::new(self.modulus, self.dimension)
    }
}

#[derive(Args, Clone, Copy)]
struct SeedArgs {
    /// Base seed for the deterministic generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Substream id.
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl SeedArgs {
    fn to_seed(self) -> RngSeed {
        RngSeed::new(self.seed, self.stream)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate index sets and signals.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Additive-energy report for an index set.
    Energy {
        /// Index set JSON file.
        #[arg(long = "set")]
        set: PathBuf,
        /// Compute the exact quadruple count.
        #[arg(long)]
        exact: bool,
        /// Compute the Fourier-side energy.
        #[arg(long)]
        fourier: bool,
        /// Also scan subsets for the maximal normalized energy.
        #[arg(long = "max-subset", value_enum)]
        max_subset: Option<ModeArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an uncertainty principle on a signal.
    UpCheck {
        /// Signal CSV file.
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, value_enum)]
        principle: PrincipleArg,
        /// Interpolation exponent for the energy-weighted forms.
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Subset-maximum mode where one is needed.
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Support threshold relative to each side's peak modulus.
        #[arg(long, default_value_t = DEFAULT_SUPPORT_TOL)]
        tol: f64,
        /// Partition parts (index set JSON files) for the partition form.
        #[arg(long = "partition", num_args = 1..)]
        partition: Vec<PathBuf>,
        /// Frequency set (index set JSON) for the restriction form.
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a recovery condition for a support/missing-set pair.
    Certify {
        /// Support index set JSON.
        #[arg(long = "e")]
        e: PathBuf,
        /// Missing-frequency index set JSON.
        #[arg(long = "s")]
        s: PathBuf,
        #[arg(long, value_enum)]
        condition: ConditionArg,
        /// Regularity exponent (l2 condition).
        #[arg(long)]
        alpha: Option<f64>,
        /// Summability exponent (l2 condition).
        #[arg(long)]
        beta: Option<f64>,
        /// Regularity constant (l2 condition).
        #[arg(long = "bigc")]
        big_c: Option<f64>,
        /// Subset-maximum mode (min condition).
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a signal from a corrupted spectrum.
    Recover {
        #[command(subcommand)]
        method: RecoverCommand,
    },
    /// Apply the forward or inverse transform to a CSV file.
    Transform {
        /// Input signal CSV (or spectrum CSV with --inverse).
        #[arg(long)]
        input: PathBuf,
        /// Invert instead of transforming forward.
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a seeded experiment sweep from a JSON spec.
    Sweep {
        /// ExperimentSpec JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the spec's).
        #[arg(long = "output-dir")]
        output_dir: Option<PathBuf>,
    },
    /// Reproduce one of the four spectrum figures.
    Figure {
        /// Figure number, 1 through 4.
        #[arg(long)]
        n: u8,
        #[command(flatten)]
        seed: SeedArgs,
        /// Output directory for figure<n>.csv and figure<n>.svg.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-render a sweep result (JSON) as json, csv, or markdown.
    Report {
        /// SweepResult JSON file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Uniform random k-subset.
    Random {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arithmetic progression start + j*step.
    Ap {
        #[command(flatten)]
        group: GroupArgs,
        /// Start point, comma-separated coordinates.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        start: Vec<u64>,
        /// Step point, comma-separated coordinates.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        step: Vec<u64>,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random search for a low-additive-energy (Sidon-type) set.
    Sidon {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        size: usize,
        /// Energy target; defaults to the Sidon floor 2k^2 - k.
        #[arg(long)]
        target: Option<u64>,
        #[arg(long = "max-tries", default_value_t = 1000)]
        max_tries: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled generic set (inclusion probability n^{2/q-1}).
    Generic {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Disjoint union of index sets.
    Union {
        /// Index set JSON files.
        #[arg(long, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-valued signal supported on a given set.
    Signal {
        /// Support index set JSON.
        #[arg(long)]
        support: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long = "value-range", default_value_t = 1)]
        value_range: u32,
        #[command(flatten)]
        seed: SeedArgs,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum RecoverCommand {
    /// Partial inverse transform plus grid rounding.
    Direct {
        /// Corrupted spectrum CSV (rows on the missing set are ignored).
        #[arg(long)]
        spectrum: PathBuf,
        /// Missing-frequency index set JSON.
        #[arg(long)]
        missing: PathBuf,
        /// Value-grid spacing of the original signal.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Use binary {0,1} rounding instead of the delta grid.
        #[arg(long)]
        binary: bool,
        /// Binary rounding rule.
        #[arg(long, value_enum, default_value_t = RuleArg::Modulus)]
        rule: RuleArg,
        /// Recovered signal CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Constrained l1 minimization.
    L1 {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        missing: PathBuf,
        /// Convergence tolerance (primal, dual, and feasibility).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long = "max-iters", default_value_t = 200_000)]
        max_iters: usize,
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON path for the solve summary.
        #[arg(long)]
        result: Option<PathBuf>,
    },
    /// Exhaustive support-constrained l2 minimization.
    L2 {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        missing: PathBuf,
        #[arg(long = "support-size")]
        support_size: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        result: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Lower,
}

impl From<ModeArg> for SubsetMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => SubsetMode::Exact,
            ModeArg::Lower => SubsetMode::LowerBound,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PrincipleArg {
    Classical,
    AddI,
    AddIi,
    Partition,
    Restriction,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditionArg {
    Ds,
    Energy,
    Min,
    L1,
    L2,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Modulus,
    Real,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Markdown => ReportFormat::Markdown,
        }
    }
}

/// Failures grouped by exit code.
enum CliError {
    Precondition(String),
    Io(String),
    TrialFailures,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) => CliError::Io(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_set(set: &IndexSet, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = io::index_set_to_json(set)?;
    text.push('\n');
    emit(&text, out)
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(value).map_err(Error::from)?
    );
    emit(&text, out)
}

fn read_corrupted(spectrum: &Path, missing: &Path) -> Result<CorruptedSpectrum, CliError> {
    let spec = io::read_spectrum_csv(spectrum)?;
    let missing = io::read_index_set_json(missing)?;
    Ok(CorruptedSpectrum::erase(&spec, &missing)?)
}

#[derive(serde::Serialize)]
struct SolveSummary {
    objective: f64,
    iterations: usize,
    converged: bool,
    constraint_residual: f64,
}

impl From<&SolveResult> for SolveSummary {
    fn from(r: &SolveResult) -> Self {
        SolveSummary {
            objective: r.objective,
            iterations: r.iterations,
            converged: r.converged,
            constraint_residual: r.constraint_residual,
        }
    }
}

fn write_solve_outputs(
    result: &SolveResult,
    out: &Path,
    summary_path: Option<&Path>,
) -> Result<(), CliError> {
    io::write_signal_csv(out, &result.minimizer)?;
    if let Some(path) = summary_path {
        emit_json(&SolveSummary::from(result), Some(path))?;
    } else {
        emit_json(&SolveSummary::from(result), None)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { what } => run_gen(what),
        Command::Energy {
            set,
            exact,
            fourier,
            max_subset,
            out,
        } => {
            let set = io::read_index_set_json(&set)?;
            // With neither flag, compute both energies.
            let want_exact = exact || !fourier;
            let energy_exact = want_exact
                .then(|| additive_energy_exact(&set))
                .transpose()?;
            let energy_fourier = (fourier || !exact)
                .then(|| additive_energy_fourier(&set))
                .transpose()?;
            let normalized_ratio = energy_exact
                .filter(|_| !set.is_empty())
                .map(|l| l as f64 / (set.len() as f64).powi(2));
            let max_subset = match max_subset {
                Some(mode) if !set.is_empty() => {
                    let mode: SubsetMode = mode.into();
                    let (ratio, witness) = max_subset_energy_ratio(&set, mode)?;
                    Some(MaxSubsetReport {
                        mode,
                        ratio,
                        witness: witness
                            .flat_indices()
                            .iter()
                            .map(|&f| set.group().coords_of(f))
                            .collect(),
                        certifying: mode == SubsetMode::Exact,
                    })
                }
                _ => None,
            };
            let report = EnergyReport {
                set_size: set.len(),
                energy_exact,
                energy_fourier,
                normalized_ratio,
                max_subset,
            };
            emit_json(&report, out.as_deref())
        }
        Command::UpCheck {
            signal,
            principle,
            alpha,
            mode,
            tol,
            partition,
            sigma,
            out,
        } => {
            let f = io::read_signal_csv(&signal)?;
            let report = match principle {
                PrincipleArg::Classical => classical_up(&f, tol)?,
                PrincipleArg::AddI => additive_up_i_signal(&f, tol, alpha)?,
                PrincipleArg::AddIi => additive_up_ii_signal(&f, tol, alpha, mode.into())?,
                PrincipleArg::Partition => {
                    if partition.is_empty() {
                        return Err(CliError::Precondition(
                            "--partition needs at least one index set file".into(),
                        ));
                    }
                    let parts: Result<Vec<IndexSet>, Error> = partition
                        .iter()
                        .map(|p| io::read_index_set_json(p))
                        .collect();
                    partitioned_up_signal(&f, tol, &Partition::new(parts?)?)?
                }
                PrincipleArg::Restriction => {
                    let sigma_path = sigma.ok_or_else(|| {
                        CliError::Precondition(
                            "--sigma <indexset.json> is required for the restriction form".into(),
                        )
                    })?;
                    let sigma = io::read_index_set_json(&sigma_path)?;
                    restriction_inequality_check(&f, &sigma, mode.into())?
                }
            };
            emit_json(&report, out.as_deref())
        }
        Command::Certify {
            e,
            s,
            condition,
            alpha,
            beta,
            big_c,
            mode,
            out,
        } => {
            let e = io::read_index_set_json(&e)?;
            let s = io::read_index_set_json(&s)?;
            let cert = match condition {
                ConditionArg::Ds => check_donoho_stark(e.len(), s.len(), e.group()),
                ConditionArg::Energy => check_direct_energy(&e, &s)?,
                ConditionArg::Min => check_corollary_min(&e, &s, mode.into())?,
                ConditionArg::L1 => {
                    let premise = match (big_c, alpha) {
                        (Some(c), Some(a)) => Some((c, a)),
                        _ => None,
                    };
                    l1_threshold(&e, &s, premise)?
                }
                ConditionArg::L2 => {
                    let (alpha, beta, c) = match (alpha, beta, big_c) {
                        (Some(a), Some(b), Some(c)) => (a, b, c),
                        _ => {
                            return Err(CliError::Precondition(
                                "the l2 condition needs --alpha, --beta, and --bigc".into(),
                            ))
                        }
                    };
                    l2_threshold(&e, &s, alpha, beta, c)?
                }
            };
            emit_json(&cert, out.as_deref())
        }
        Command::Transform {
            input,
            inverse,
            out,
        } => {
            if inverse {
                let spectrum = io::read_spectrum_csv(&input)?;
                let signal = energy_recover_core::group::idft(&spectrum)?;
                io::write_signal_csv(&out, &signal)?;
            } else {
                let signal = io::read_signal_csv(&input)?;
                let spectrum = energy_recover_core::group::dft(&signal)?;
                io::write_spectrum_csv(&out, &spectrum)?;
            }
            Ok(())
        }
        Command::Recover { method } => run_recover(method),
        Command::Sweep { config, output_dir } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Io(format!("{}: {e}", config.display())))?;
            let spec: ExperimentSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Precondition(e.to_string()))?;
            let result = experiments::sweep(&spec)?;
            // The destination is environmental; it never enters the report.
            let dir = output_dir
                .or_else(|| spec.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)
                .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            let json_path = dir.join(format!("{}.json", spec.name));
            emit(
                &experiments::render_report(&result, ReportFormat::Json)?,
                Some(&json_path),
            )?;
            let md_path = dir.join(format!("{}.md", spec.name));
            emit(
                &experiments::render_report(&result, ReportFormat::Markdown)?,
                Some(&md_path),
            )?;
            println!(
                "sweep `{}`: {} trials, {} with errors, reports in {}",
                spec.name,
                spec.trials,
                result.aggregates.trials_with_errors,
                dir.display()
            );
            if result.aggregates.trials_with_errors > 0 {
                return Err(CliError::TrialFailures);
            }
            Ok(())
        }
        Command::Figure { n, seed, out } => {
            let (_, files) = figures::write_figure(n, seed.to_seed(), &out)?;
            println!("{}", files.csv.display());
            println!("{}", files.svg.display());
            Ok(())
        }
        Command::Report { input, format, out } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let result: SweepResult =
                serde_json::from_str(&text).map_err(|e| CliError::Precondition(e.to_string()))?;
            let rendered = experiments::render_report(&result, format.into())?;
            emit(&rendered, out.as_deref())
        }
    }
}

fn run_gen(what: GenCommand) -> Result<(), CliError> {
    match what {
        GenCommand::Random {
            group,
            size,
            seed,
            out,
        } => {
            let set = random_subset(&group.to_group()?, size, seed.to_seed())?;
            emit_set(&set, out.as_deref())
        }
        GenCommand::Ap {
            group,
            start,
            step,
            length,
            out,
        } => {
            let g = group.to_group()?;
            let set = arithmetic_progression(
                &g,
                &Point::new(start, &g)?,
                &Point::new(step, &g)?,
                length,
            )?;
            emit_set(&set, out.as_deref())
        }
        GenCommand::Sidon {
            group,
            size,
            target,
            max_tries,
            seed,
            out,
        } => {
            let g = group.to_group()?;
            let k = size as u64;
            let target = target.unwrap_or(2 * k * k - k);
            let search = low_energy_set(&g, size, target, max_tries, seed.to_seed())?;
            eprintln!(
                "energy {} (target {target}), met_target {}, tries {}",
                search.energy, search.met_target, search.tries_used
            );
            emit_set(&search.set, out.as_deref())
        }
        GenCommand::Generic {
            group,
            q,
            seed,
            out,
        } => {
            let sample = generic_subset(&group.to_group()?, q, seed.to_seed())?;
            eprintln!(
                "sampled-generic set: size {}, inclusion probability {:.6}, expected size {:.2}",
                sample.set.len(),
                sample.inclusion_probability,
                sample.expected_size
            );
            emit_set(&sample.set, out.as_deref())
        }
        GenCommand::Union { inputs, out } => {
            let parts: Result<Vec<IndexSet>, Error> =
                inputs.iter().map(|p| io::read_index_set_json(p)).collect();
            let (union, _) = disjoint_union(&parts?)?;
            emit_set(&union, out.as_deref())
        }
        GenCommand::Signal {
            support,
            delta,
            value_range,
            seed,
            out,
        } => {
            let e = io::read_index_set_json(&support)?;
            let signal = random_grid_signal(&e, delta, value_range, seed.to_seed())?;
            io::write_signal_csv(&out, &signal)?;
            Ok(())
        }
    }
}

fn run_recover(method: RecoverCommand) -> Result<(), CliError> {
    match method {
        RecoverCommand::Direct {
            spectrum,
            missing,
            delta,
            binary,
            rule,
            out,
        } => {
            let corrupted = read_corrupted(&spectrum, &missing)?;
            let recovered: Signal = if binary {
                let rule = match rule {
                    RuleArg::Modulus => BinaryRule::Modulus,
                    RuleArg::Real => BinaryRule::RealPart,
                };
                direct_recover_binary(&corrupted, rule)?
            } else {
                direct_recover(&corrupted, delta)?
            };
            io::write_signal_csv(&out, &recovered)?;
            Ok(())
        }
        RecoverCommand::L1 {
            spectrum,
            missing,
            tol,
            max_iters,
            out,
            result,
        } => {
            let corrupted = read_corrupted(&spectrum, &missing)?;
            let cfg = SolverConfig {
                max_iters,
                primal_tol: tol,
                dual_tol: tol,
                feasibility_tol: tol,
                ..SolverConfig::default()
            };
            let solve = l1_minimize(&corrupted, &cfg)?;
            write_solve_outputs(&solve, &out, result.as_deref())
        }
        RecoverCommand::L2 {
            spectrum,
            missing,
            support_size,
            tol,
            out,
            result,
        } => {
            let corrupted = read_corrupted(&spectrum, &missing)?;
            let cfg = SolverConfig {
                feasibility_tol: tol,
                ..SolverConfig::default()
            };
            let solve = l2_support_minimize(&corrupted, support_size, &cfg)?;
            write_solve_outputs(&solve, &out, result.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::TrialFailures) => ExitCode::from(3),
        Err(CliError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(4)
        }
    }
}
