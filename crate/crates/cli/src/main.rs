use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use stabinit_core::counting::CountReport;
use stabinit_core::oracle::{fmt_value, ground_state, term_expectations, SpsaConfig, DENSE_QUBIT_CAP};
use stabinit_core::Error as CoreError;

mod problem;
mod record;
mod sweep;

use problem::{build_ansatz, AnnealArgs, AnsatzArgs, Source, SourceArgs};
use record::{exact_ground, parallel_map, run_id, run_seed, trajectory_lines, RunRecord, SeedOutcome};

/// Bad flag combinations the parser itself cannot see; exits with status 2.
#[derive(Debug)]
pub struct UsageError(String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        UsageError(msg.into())
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(name = "stabinit", version, about = "Clifford-point pre-optimisation for VQE ansatz circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Anneal over the Clifford lattice and print a run record.
    Anneal(AnnealCmd),
    /// Anneal over a grid of models or fixture files; prints CSV.
    Sweep(sweep::SweepArgs),
    /// Per-term exact vs best-stabilizer expectations; prints CSV.
    CompareTerms(CompareCmd),
    /// Stabilizer-state counts and the nonzero-signal bound; prints JSON.
    Count(CountCmd),
    /// SPSA-refine the best points of a saved run record.
    Refine(RefineCmd),
}

#[derive(Args)]
struct AnnealCmd {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    ansatz: AnsatzArgs,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[command(flatten)]
    anneal: AnnealArgs,
    /// Write every iteration as JSON lines.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Skip dense diagonalization.
    #[arg(long = "skip-exact")]
    skip_exact: bool,
    /// Record wall-clock seconds (makes output time-dependent).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareCmd {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    ansatz: AnsatzArgs,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[command(flatten)]
    anneal: AnnealArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountCmd {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "hamiltonian")]
    model: Option<String>,
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    j: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gx: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gz: f64,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RefineCmd {
    /// Run record written by `anneal`.
    #[arg(long)]
    record: PathBuf,
    #[arg(long = "spsa-rounds", default_value_t = 200)]
    spsa_rounds: usize,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

struct Assembled {
    record: RunRecord,
    outcomes: Vec<SeedOutcome>,
}

/// Anneals every seed and folds the results into a record.
fn anneal_record(
    command: &str,
    source: &Source,
    selector: &str,
    depth: usize,
    anneal: &AnnealArgs,
    record_trajectory: bool,
    skip_exact: bool,
) -> Result<Assembled> {
    let (h, source) = source.build()?;
    let (ansatz, ansatz_echo) = build_ansatz(selector, &h, depth)?;
    let base = anneal.config(anneal.seed, record_trajectory);
    base.validate()?;
    let spsa = anneal.spsa_rounds.map(|rounds| SpsaConfig { rounds, ..SpsaConfig::default() });
    if let Some(s) = &spsa {
        s.validate()?;
    }
    let seeds: Vec<u64> = (0..anneal.seeds).map(|i| anneal.seed + i).collect();
    let outcomes = parallel_map(anneal.threads, &seeds, |&seed| run_seed(&ansatz, &h, &anneal.config(seed, record_trajectory), spsa.as_ref()))?;
    let exact = if skip_exact { None } else { exact_ground(&h)? };
    let record = fold_record(command, source, &h, ansatz_echo, base, spsa, outcomes.iter().map(|o| o.run.clone()).collect(), exact)?;
    Ok(Assembled { record, outcomes })
}

#[allow(clippy::too_many_arguments)]
fn fold_record(
    command: &str,
    source: Source,
    h: &stabinit_core::Hamiltonian,
    ansatz: problem::AnsatzEcho,
    anneal: stabinit_core::AnnealConfig,
    spsa: Option<SpsaConfig>,
    runs: Vec<record::SeedRun>,
    exact: Option<f64>,
) -> Result<RunRecord> {
    let best = runs.iter().min_by(|a, b| a.best_energy.total_cmp(&b.best_energy)).expect("at least one seed");
    let refined_energy = runs.iter().filter_map(|r| r.refined.as_ref().map(|s| s.energy)).min_by(f64::total_cmp);
    let id = run_id(&(command, &source, &ansatz, &anneal, runs.len(), &spsa));
    Ok(RunRecord {
        run_id: id,
        command: command.to_string(),
        cut_value: source.cut_value(best.best_energy)?,
        n_qubits: h.n_qubits(),
        n_terms: h.len(),
        ansatz,
        anneal,
        seeds: runs.len() as u64,
        spsa,
        best_seed: best.seed,
        best_energy: best.best_energy,
        best_point: best.best_point.clone(),
        exact_ground_energy: exact,
        refined_energy,
        energy_evaluations: runs.iter().map(|r| r.energy_evaluations).sum(),
        wall_clock_s: None,
        source,
        runs,
    })
}

fn cmd_anneal(c: &AnnealCmd) -> Result<()> {
    let start = Instant::now();
    let a = anneal_record("anneal", &c.source.source()?, &c.ansatz.ansatz, c.depth, &c.anneal, c.trajectory.is_some(), c.skip_exact)?;
    let mut record = a.record;
    if c.timing {
        record.wall_clock_s = Some(start.elapsed().as_secs_f64());
    }
    if let Some(path) = &c.trajectory {
        emit(Some(path), &trajectory_lines(&a.outcomes))?;
    }
    emit(c.out.as_deref(), &record.to_json())
}

fn cmd_compare(c: &CompareCmd) -> Result<()> {
    let source = c.source.source()?;
    let (h, _) = source.build()?;
    if h.n_qubits() > DENSE_QUBIT_CAP {
        return Err(CoreError::QubitCap { n_qubits: h.n_qubits(), cap: DENSE_QUBIT_CAP, what: "compare-terms (exact ground state)" }.into());
    }
    let a = anneal_record("compare-terms", &source, &c.ansatz.ansatz, c.depth, &c.anneal, false, true)?;
    let (ansatz, _) = build_ansatz(&c.ansatz.ansatz, &h, c.depth)?;
    let tableau = ansatz.clifford_state(&a.record.best_point)?;
    let (_, psi) = ground_state(&h)?;
    let exact = term_expectations(&psi, &h)?;
    let stab = term_expectations(&tableau, &h)?;
    let mut out = String::from("term_index,coefficient,pauli,exact,stabilizer\n");
    for ((i, e), (_, s)) in exact.iter().zip(&stab) {
        let t = &h.terms()[*i];
        out.push_str(&format!("{i},{:?},{},{},{}\n", t.coeff, t.pauli.letters(), fmt_value(*e), fmt_value(*s)));
    }
    emit(c.out.as_deref(), &out)
}

fn cmd_count(c: &CountCmd) -> Result<()> {
    let source = match (&c.model, &c.hamiltonian) {
        (_, Some(path)) => Some(Source::file(path)),
        (Some(name), None) => Some(Source::model(name, Some(c.n), c.j, c.gx, c.gz, c.graph.clone())),
        (None, None) => None,
    };
    let h = source.map(|s| s.build().map(|(h, _)| h)).transpose()?;
    let report = CountReport::new(c.n, h.as_ref())?;
    emit(c.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn cmd_refine(c: &RefineCmd) -> Result<()> {
    let text = std::fs::read_to_string(&c.record).with_context(|| format!("reading {}", c.record.display()))?;
    let prior: RunRecord = serde_json::from_str(&text).with_context(|| format!("parsing {}", c.record.display()))?;
    let (h, source) = prior.source.build()?;
    let (ansatz, echo) = build_ansatz(&prior.ansatz.selector, &h, prior.ansatz.depth)?;
    if echo.n_params != prior.best_point.len() {
        return Err(CoreError::ParamLength { expected: echo.n_params, found: prior.best_point.len() }.into());
    }
    let spsa = SpsaConfig { rounds: c.spsa_rounds, ..SpsaConfig::default() };
    spsa.validate()?;
    let runs = parallel_map(c.threads, &prior.runs, |run| {
        let refined = stabinit_core::oracle::spsa_refine(&ansatz, &run.best_point, &h, &SpsaConfig { seed: run.seed, ..spsa })?;
        let mut run = run.clone();
        run.energy_evaluations += refined.evaluations;
        run.refined = Some(refined);
        Ok(run)
    })?;
    let record = fold_record("refine", source, &h, echo, prior.anneal, Some(spsa), runs, prior.exact_ground_energy)?;
    emit(c.out.as_deref(), &record.to_json())
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Anneal(c) => cmd_anneal(c),
        Command::Sweep(s) => {
            let rows = sweep::run_sweep(s)?;
            sweep::write_outputs(s, &rows)
        }
        Command::CompareTerms(c) => cmd_compare(c),
        Command::Count(c) => cmd_count(c),
        Command::Refine(c) => cmd_refine(c),
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<UsageError>().is_some()
            || matches!(c.downcast_ref::<CoreError>(), Some(CoreError::UnknownStrategy { .. }))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                eprintln!("\nFor more information, try '--help'.");
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
