//! Simulated annealing on the Clifford lattice with threshold resetting.
//!
//! Each iteration changes exactly two distinct parameters to different
//! quarter turns, accepts by the Metropolis rule, and restarts from a fresh
//! uniform point after `reset_threshold_k` consecutive candidates that fail
//! to strictly beat the best energy seen since the last restart. The best
//! point is kept across restarts.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{Ansatz, QuarterTurns};
use crate::error::{invalid, Result};
use crate::pauli::Hamiltonian;
use crate::rng::{self, StreamRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub max_iterations: usize,
    /// Inverse temperature; `f64::INFINITY` never accepts uphill moves.
    #[serde(with = "beta_serde")]
    pub beta: f64,
    pub reset_threshold_k: usize,
    pub seed: u64,
    #[serde(default)]
    pub record_trajectory: bool,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig { max_iterations: 10_000, beta: f64::INFINITY, reset_threshold_k: 500, seed: 0, record_trajectory: false }
    }
}

impl AnnealConfig {
    pub fn with_seed(seed: u64) -> Self {
        AnnealConfig { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations must be at least 1"));
        }
        if self.reset_threshold_k == 0 {
            return Err(invalid("reset threshold k must be at least 1"));
        }
        if !(self.beta > 0.0) {
            return Err(invalid(format!("beta must be positive or infinite, got {}", self.beta)));
        }
        Ok(())
    }
}

/// `beta` is written as a number, or the string `"inf"` when infinite.
mod beta_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(beta: &f64, s: S) -> Result<S::Ok, S::Error> {
        if beta.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*beta)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => super::parse_beta(&t).map_err(serde::de::Error::custom),
        }
    }
}

/// Parses a beta value: a positive number or `inf`.
pub fn parse_beta(text: &str) -> std::result::Result<f64, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|b| *b > 0.0)
            .ok_or_else(|| format!("beta must be a positive number or `inf`, got {text:?}")),
    }
}

/// One annealing iteration, exported as a JSON line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub it: usize,
    /// Candidate energy.
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "acc")]
    pub accepted: bool,
    pub reset: bool,
    /// Best energy seen so far, across resets.
    pub best: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealResult {
    pub best_point: QuarterTurns,
    pub best_energy: f64,
    pub iterations_run: usize,
    pub n_resets: usize,
    /// `iterations_run + 1 + n_resets`.
    pub energy_evaluations: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

/// Changes two distinct uniformly chosen entries, each to one of the three
/// other quarter turns.
pub fn propose_move(q: &QuarterTurns, rng: &mut StreamRng) -> Result<QuarterTurns> {
    let len = q.len();
    if len < 2 {
        return Err(invalid(format!("pair moves need at least 2 parameters, got {len}")));
    }
    let i = rng::index(rng, len);
    let mut j = rng::index(rng, len - 1);
    if j >= i {
        j += 1;
    }
    let mut next = q.clone();
    for k in [i, j] {
        let step = 1 + rng.gen_range(0..3u32) as u8;
        next.set(k, (q.get(k) + step) & 3);
    }
    Ok(next)
}

/// Metropolis rule: downhill (or flat) always, uphill with `exp(-β ΔE)`.
/// Draws from `rng` only for uphill moves at finite `beta`.
pub fn metropolis_accept(delta_e: f64, beta: f64, rng: &mut StreamRng) -> bool {
    if delta_e <= 0.0 {
        return true;
    }
    if beta.is_infinite() {
        return false;
    }
    rng.gen::<f64>() < (-beta * delta_e).exp()
}

fn random_point(n: usize, rng: &mut StreamRng) -> QuarterTurns {
    QuarterTurns::new((0..n).map(|_| rng.gen_range(0..4u32) as u8).collect()).expect("values in 0..4")
}

/// Anneals `ansatz` against `h` using tableau energies.
pub fn anneal_run(ansatz: &Ansatz, h: &Hamiltonian, cfg: &AnnealConfig) -> Result<AnnealResult> {
    if h.n_qubits() != ansatz.n_qubits() {
        return Err(crate::Error::SizeMismatch { expected: ansatz.n_qubits(), found: h.n_qubits() });
    }
    anneal_with(ansatz.n_params(), cfg, |q| ansatz.clifford_energy(q, h))
}

/// The annealing loop over an arbitrary lattice energy.
pub fn anneal_with<F>(n_params: usize, cfg: &AnnealConfig, mut energy: F) -> Result<AnnealResult>
where
    F: FnMut(&QuarterTurns) -> Result<f64>,
{
    cfg.validate()?;
    if n_params < 2 {
        return Err(invalid(format!("annealing needs at least 2 parameters, got {n_params}")));
    }
    let mut rng = rng::stream(cfg.seed);
    let mut current = random_point(n_params, &mut rng);
    let mut current_e = energy(&current)?;
    let mut evaluations = 1;
    let mut best_point = current.clone();
    let mut best_e = current_e;
    let mut best_since_reset = current_e;
    let mut stagnant = 0;
    let mut n_resets = 0;
    let mut trajectory = cfg.record_trajectory.then(|| Vec::with_capacity(cfg.max_iterations));

    for it in 0..cfg.max_iterations {
        let candidate = propose_move(&current, &mut rng)?;
        let candidate_e = energy(&candidate)?;
        evaluations += 1;

        if candidate_e < best_since_reset {
            best_since_reset = candidate_e;
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if candidate_e < best_e {
            best_e = candidate_e;
            best_point = candidate.clone();
        }
        let accepted = metropolis_accept(candidate_e - current_e, cfg.beta, &mut rng);
        if accepted {
            current = candidate;
            current_e = candidate_e;
        }

        let reset = stagnant >= cfg.reset_threshold_k;
        if reset {
            current = random_point(n_params, &mut rng);
            current_e = energy(&current)?;
            evaluations += 1;
            n_resets += 1;
            best_since_reset = current_e;
            stagnant = 0;
            if current_e < best_e {
                best_e = current_e;
                best_point = current.clone();
            }
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(TrajectoryPoint { it, energy: candidate_e, accepted, reset, best: best_e });
        }
    }

    Ok(AnnealResult {
        best_point,
        best_energy: best_e,
        iterations_run: cfg.max_iterations,
        n_resets,
        energy_evaluations: evaluations,
        trajectory,
    })
}

/// Writes a trajectory as JSON lines `{"it","E","acc","reset","best"}`.
pub fn trajectory_jsonl(points: &[TrajectoryPoint]) -> String {
    let mut out = String::with_capacity(points.len() * 64);
    for p in points {
        out.push_str(&serde_json::to_string(p).expect("trajectory point serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_moves() {
        let mut rng = rng::stream(3);
        let q = QuarterTurns::new(vec![0, 3]).unwrap();
        for _ in 0..200 {
            let next = propose_move(&q, &mut rng).unwrap();
            assert_eq!(next.hamming_distance(&q), 2);
        }
        let q = QuarterTurns::new(vec![1, 2, 3, 0, 1, 2]).unwrap();
        for _ in 0..500 {
            assert_eq!(propose_move(&q, &mut rng).unwrap().hamming_distance(&q), 2);
        }
        assert!(propose_move(&QuarterTurns::zeros(1), &mut rng).is_err());
    }

    #[test]
    fn pair_moves_are_uniform() {
        let mut rng = rng::stream(5);
        let q = QuarterTurns::zeros(4);
        let mut index_hits = [0usize; 4];
        let mut value_hits = [0usize; 4];
        let trials = 60_000;
        for _ in 0..trials {
            let next = propose_move(&q, &mut rng).unwrap();
            for (k, &v) in next.as_slice().iter().enumerate() {
                if v != 0 {
                    index_hits[k] += 1;
                    value_hits[v as usize] += 1;
                }
            }
        }
        // each index changes with probability 1/2, each new value has probability 1/3
        for hits in index_hits {
            assert!((hits as f64 / trials as f64 - 0.5).abs() < 0.01);
        }
        for &hits in &value_hits[1..] {
            assert!((hits as f64 / (2 * trials) as f64 - 1.0 / 3.0).abs() < 0.01);
        }
    }

    #[test]
    fn metropolis_rules() {
        let mut rng = rng::stream(1);
        assert!(metropolis_accept(-0.5, 1.0, &mut rng));
        assert!(metropolis_accept(-0.5, f64::INFINITY, &mut rng));
        assert!(metropolis_accept(0.0, f64::INFINITY, &mut rng));
        assert!(!metropolis_accept(0.5, f64::INFINITY, &mut rng));
        let trials = 100_000;
        let accepted = (0..trials).filter(|_| metropolis_accept(0.5, 1.0, &mut rng)).count();
        let freq = accepted as f64 / trials as f64;
        assert!((freq - 0.6065).abs() < 0.01, "acceptance frequency {freq}");
    }

    #[test]
    fn config_validation() {
        assert!(AnnealConfig::default().validate().is_ok());
        assert!(AnnealConfig { max_iterations: 0, ..Default::default() }.validate().is_err());
        assert!(AnnealConfig { reset_threshold_k: 0, ..Default::default() }.validate().is_err());
        assert!(AnnealConfig { beta: 0.0, ..Default::default() }.validate().is_err());
        assert!(AnnealConfig { beta: f64::NAN, ..Default::default() }.validate().is_err());
        assert_eq!(parse_beta("inf"), Ok(f64::INFINITY));
        assert_eq!(parse_beta("2.5"), Ok(2.5));
        assert!(parse_beta("-1").is_err());
        let json = serde_json::to_string(&AnnealConfig::default()).unwrap();
        assert!(json.contains("\"beta\":\"inf\""));
        let back: AnnealConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, AnnealConfig::default());
    }

    #[test]
    fn reset_bookkeeping_on_flat_landscape() {
        // Nothing ever strictly improves, so a reset fires every k iterations.
        let cfg = AnnealConfig { max_iterations: 1000, reset_threshold_k: 100, record_trajectory: true, ..Default::default() };
        let r = anneal_with(3, &cfg, |_| Ok(1.0)).unwrap();
        assert_eq!(r.n_resets, 10);
        assert_eq!(r.energy_evaluations, 1000 + 1 + 10);
        let t = r.trajectory.unwrap();
        assert_eq!(t.iter().filter(|p| p.reset).count(), 10);
        assert!(t[99].reset && !t[98].reset);
        // flat moves are accepted
        assert!(t.iter().all(|p| p.accepted));
    }

    #[test]
    fn greedy_finds_separable_minimum() {
        // E = Σ (q_i - 2)^2 has a unique minimum at all 2s.
        let cfg = AnnealConfig { max_iterations: 3000, seed: 9, ..Default::default() };
        let r = anneal_with(6, &cfg, |q| Ok(q.as_slice().iter().map(|&m| (m as f64 - 2.0).powi(2)).sum())).unwrap();
        assert_eq!(r.best_energy, 0.0);
        assert_eq!(r.best_point.as_slice(), &[2; 6]);
    }

    #[test]
    fn trajectory_jsonl_format() {
        let line = trajectory_jsonl(&[TrajectoryPoint { it: 3, energy: -1.5, accepted: true, reset: false, best: -2.0 }]);
        assert_eq!(line, "{\"it\":3,\"E\":-1.5,\"acc\":true,\"reset\":false,\"best\":-2.0}\n");
    }

    #[test]
    fn too_few_parameters() {
        assert!(anneal_with(1, &AnnealConfig::default(), |_| Ok(0.0)).is_err());
    }
}
