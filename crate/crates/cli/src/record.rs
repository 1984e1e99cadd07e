use anyhow::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stabinit_core::anneal::{anneal_run, AnnealConfig, TrajectoryPoint};
use stabinit_core::oracle::{exact_diagonalize, spsa_refine, SpsaConfig, SpsaResult, DENSE_QUBIT_CAP};
use stabinit_core::{Ansatz, Hamiltonian, QuarterTurns};

use crate::problem::{AnsatzEcho, Source};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub best_energy: f64,
    pub best_point: QuarterTurns,
    pub iterations_run: usize,
    pub n_resets: usize,
    pub energy_evaluations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refined: Option<SpsaResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub command: String,
    pub source: Source,
    pub n_qubits: usize,
    pub n_terms: usize,
    pub ansatz: AnsatzEcho,
    /// `seed` here is the base seed.
    pub anneal: AnnealConfig,
    pub seeds: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spsa: Option<SpsaConfig>,
    pub runs: Vec<SeedRun>,
    pub best_seed: u64,
    pub best_energy: f64,
    pub best_point: QuarterTurns,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut_value: Option<f64>,
    pub exact_ground_energy: Option<f64>,
    pub refined_energy: Option<f64>,
    pub energy_evaluations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }
}

/// One seed's anneal, optionally followed by SPSA from the best point.
pub struct SeedOutcome {
    pub run: SeedRun,
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

pub fn run_seed(ansatz: &Ansatz, h: &Hamiltonian, cfg: &AnnealConfig, spsa: Option<&SpsaConfig>) -> Result<SeedOutcome> {
    let r = anneal_run(ansatz, h, cfg)?;
    let refined = match spsa {
        Some(s) => Some(spsa_refine(ansatz, &r.best_point, h, &SpsaConfig { seed: cfg.seed, ..*s })?),
        None => None,
    };
    let evaluations = r.energy_evaluations + refined.as_ref().map_or(0, |s| s.evaluations);
    Ok(SeedOutcome {
        run: SeedRun {
            seed: cfg.seed,
            best_energy: r.best_energy,
            best_point: r.best_point,
            iterations_run: r.iterations_run,
            n_resets: r.n_resets,
            energy_evaluations: evaluations,
            refined,
        },
        trajectory: r.trajectory,
    })
}

/// Runs `jobs` on a pool of `threads` workers, returning results in input order.
pub fn parallel_map<T, R, F>(threads: Option<usize>, jobs: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder.build()?;
    pool.install(|| jobs.par_iter().map(&f).collect())
}

/// Lowest eigenvalue when the dense solver can handle the register.
pub fn exact_ground(h: &Hamiltonian) -> Result<Option<f64>> {
    if h.n_qubits() > DENSE_QUBIT_CAP {
        return Ok(None);
    }
    Ok(Some(exact_diagonalize(h, 1)?[0]))
}

/// Stable identifier for a configuration: FNV-1a over its JSON echo.
pub fn run_id<T: Serialize>(config: &T) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

#[derive(Serialize)]
struct TrajectoryLine<'a> {
    seed: u64,
    #[serde(flatten)]
    point: &'a TrajectoryPoint,
}

/// JSONL with one line per iteration, each tagged with its seed.
pub fn trajectory_lines(outcomes: &[SeedOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        for point in o.trajectory.iter().flatten() {
            out.push_str(&serde_json::to_string(&TrajectoryLine { seed: o.run.seed, point }).expect("points serialize"));
            out.push('\n');
        }
    }
    out
}
