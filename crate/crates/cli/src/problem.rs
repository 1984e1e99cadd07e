//! Turning command-line flags into a Hamiltonian and an ansatz, and echoing
//! where they came from so a record can be replayed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use stabinit_core::anneal::{parse_beta, AnnealConfig};
use stabinit_core::models::{cut_from_energy, load_chemistry_fixture, Graph};
use stabinit_core::{Ansatz, AnsatzFamily, AnsatzRegistry, Hamiltonian, ModelRegistry, ModelRequest};

use crate::UsageError;

/// Where a Hamiltonian came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Model {
        name: String,
        n: Option<usize>,
        #[serde(rename = "J")]
        j: f64,
        gx: f64,
        gz: f64,
        graph: Option<PathBuf>,
    },
    File {
        path: PathBuf,
        metadata: BTreeMap<String, String>,
    },
}

impl Source {
    pub fn model(name: &str, n: Option<usize>, j: f64, gx: f64, gz: f64, graph: Option<PathBuf>) -> Self {
        Source::Model { name: name.to_string(), n, j, gx, gz, graph }
    }

    /// Loads a Hamiltonian file; metadata is filled in by [`Source::build`].
    pub fn file(path: &Path) -> Self {
        Source::File { path: path.to_path_buf(), metadata: BTreeMap::new() }
    }

    /// Builds the Hamiltonian and returns the echo with file metadata filled in.
    pub fn build(&self) -> Result<(Hamiltonian, Source)> {
        match self {
            Source::Model { name, n, j, gx, gz, graph } => {
                let req = ModelRequest { n: *n, j: *j, gx: *gx, gz: *gz, graph: graph.clone() };
                let h = ModelRegistry::default().build(name, &req)?;
                Ok((h, self.clone()))
            }
            Source::File { path, .. } => {
                let f = load_chemistry_fixture(path).with_context(|| format!("loading {}", path.display()))?;
                let metadata = f.metadata.into_iter().collect();
                Ok((f.hamiltonian, Source::File { path: path.clone(), metadata }))
            }
        }
    }

    /// `(W − E)/2` for MAXCUT sources.
    pub fn cut_value(&self, energy: f64) -> Result<Option<f64>> {
        match self {
            Source::Model { name, graph: Some(path), .. } if name == "maxcut" => {
                let g = Graph::parse(&std::fs::read_to_string(path)?)?;
                Ok(Some(cut_from_energy(&g, energy)))
            }
            _ => Ok(None),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        match self {
            Source::File { metadata, .. } => metadata.get(key).map(String::as_str),
            Source::Model { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzEcho {
    pub selector: String,
    pub family: AnsatzFamily,
    pub depth: usize,
    pub n_params: usize,
}

pub fn build_ansatz(selector: &str, h: &Hamiltonian, depth: usize) -> Result<(Ansatz, AnsatzEcho)> {
    let a = AnsatzRegistry::default().build(selector, h, depth)?;
    let echo = AnsatzEcho { selector: selector.to_string(), family: a.family(), depth, n_params: a.n_params() };
    Ok((a, echo))
}

/// `--model` / `--hamiltonian` with scalar model parameters.
#[derive(Args, Clone, Debug)]
#[group(id = "source", required = true, multiple = false, args = ["model", "hamiltonian"])]
pub struct SourceArgs {
    /// Built-in model: tfim or maxcut.
    #[arg(long)]
    pub model: Option<String>,
    /// Hamiltonian file (`coeff LETTERS` per line).
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    #[command(flatten)]
    pub params: ModelParams,
}

#[derive(Args, Clone, Debug)]
pub struct ModelParams {
    /// Number of qubits (TFIM chain length).
    #[arg(long)]
    pub n: Option<usize>,
    /// Nearest-neighbour ZZ coupling.
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    /// Transverse field.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gx: f64,
    /// Longitudinal field.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gz: f64,
    /// Edge list for maxcut: `i j [w]` per line.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

impl SourceArgs {
    pub fn source(&self) -> Result<Source> {
        if let Some(path) = &self.hamiltonian {
            return Ok(Source::file(path));
        }
        let name = self.model.as_deref().ok_or_else(|| UsageError::new("one of --model or --hamiltonian is required"))?;
        let p = &self.params;
        Ok(Source::model(name, p.n, p.j, p.gx, p.gz, p.graph.clone()))
    }
}

/// Ansatz selection.
#[derive(Args, Clone, Debug)]
pub struct AnsatzArgs {
    /// real, trotter, qaoa or custom:<file.json>.
    #[arg(long, default_value = "real")]
    pub ansatz: String,
}

/// Annealing knobs shared by every command that anneals.
#[derive(Args, Clone, Debug)]
pub struct AnnealArgs {
    /// Annealing iterations per seed.
    #[arg(long, default_value_t = 10_000)]
    pub iters: usize,
    /// Inverse temperature, a positive number or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_beta)]
    pub beta: f64,
    /// Restart after this many candidates without strict improvement.
    #[arg(long = "reset-k", default_value_t = 500)]
    pub reset_k: usize,
    /// Base seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent seeds per point.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub seeds: u64,
    /// SPSA rounds to refine each annealed point with.
    #[arg(long = "spsa-rounds")]
    pub spsa_rounds: Option<usize>,
    /// Worker threads (default: all cores). Never changes output.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl AnnealArgs {
    pub fn config(&self, seed: u64, record_trajectory: bool) -> AnnealConfig {
        AnnealConfig { max_iterations: self.iters, beta: self.beta, reset_threshold_k: self.reset_k, seed, record_trajectory }
    }
}
