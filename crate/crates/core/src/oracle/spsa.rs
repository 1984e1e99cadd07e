use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{Ansatz, QuarterTurns};
use crate::error::{invalid, Error, Result};
use crate::pauli::Hamiltonian;
use crate::rng;

use super::statevector_energy;

/// Gains for `a_k = a / (A + k + 1)^alpha` and `c_k = c / (k + 1)^gamma`.
///
/// `a = None` calibrates `a` from a few gradient estimates at the start so
/// the first step has magnitude about `first_step` radians; `big_a = None`
/// uses `rounds / 10`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpsaConfig {
    pub rounds: usize,
    pub a: Option<f64>,
    pub c: f64,
    pub big_a: Option<f64>,
    pub alpha: f64,
    pub gamma: f64,
    pub first_step: f64,
    pub calibration_samples: usize,
    pub seed: u64,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        SpsaConfig {
            rounds: 200,
            a: None,
            c: 0.1,
            big_a: None,
            alpha: 0.602,
            gamma: 0.101,
            first_step: 0.1,
            calibration_samples: 10,
            seed: 0,
        }
    }
}

impl SpsaConfig {
    pub fn with_seed(seed: u64) -> Self {
        SpsaConfig { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(invalid("SPSA needs at least one round"));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("SPSA gain {name} must be positive, got {v}")))
            }
        };
        positive("c", self.c)?;
        positive("alpha", self.alpha)?;
        positive("gamma", self.gamma)?;
        positive("first_step", self.first_step)?;
        if let Some(a) = self.a {
            positive("a", a)?;
        }
        if let Some(big_a) = self.big_a {
            positive("A", big_a)?;
        }
        if self.a.is_none() && self.calibration_samples == 0 {
            return Err(invalid("calibrating `a` needs at least one sample"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpsaResult {
    /// Best evaluated parameter vector, radians.
    pub theta: Vec<f64>,
    pub energy: f64,
    pub start_energy: f64,
    /// The `a` actually used (after calibration).
    pub a: f64,
    pub evaluations: usize,
}

/// Two-evaluation SPSA on an arbitrary objective, returning the best
/// evaluated point. Every energy reported was measured at the returned
/// parameters, so the result never lies above the start.
pub fn spsa_minimize<F>(start: &[f64], cfg: &SpsaConfig, mut f: F) -> Result<SpsaResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    cfg.validate()?;
    let n = start.len();
    let mut rng = rng::stream(cfg.seed);
    let big_a = cfg.big_a.unwrap_or(cfg.rounds as f64 / 10.0);
    let mut theta = start.to_vec();
    let start_energy = f(&theta)?;
    let mut evaluations = 1;
    let mut best = (theta.clone(), start_energy);

    let mut perturbed = vec![0.0; n];
    let mut delta = vec![0.0; n];
    let track = |point: &[f64], e: f64, best: &mut (Vec<f64>, f64)| {
        if e < best.1 {
            *best = (point.to_vec(), e);
        }
    };

    let a = match cfg.a {
        Some(a) => a,
        None => {
            let mut mean = 0.0;
            for _ in 0..cfg.calibration_samples {
                delta.iter_mut().for_each(|d| *d = if rng.gen::<bool>() { 1.0 } else { -1.0 });
                let mut diff = 0.0;
                for sign in [1.0, -1.0] {
                    for i in 0..n {
                        perturbed[i] = theta[i] + sign * cfg.c * delta[i];
                    }
                    let e = f(&perturbed)?;
                    evaluations += 1;
                    track(&perturbed, e, &mut best);
                    diff += sign * e;
                }
                mean += diff.abs() / (2.0 * cfg.c);
            }
            mean /= cfg.calibration_samples as f64;
            let scale = (big_a + 1.0).powf(cfg.alpha);
            if mean > 1e-12 {
                cfg.first_step * scale / mean
            } else {
                cfg.first_step * scale
            }
        }
    };

    for k in 0..cfg.rounds {
        let ak = a / (big_a + k as f64 + 1.0).powf(cfg.alpha);
        let ck = cfg.c / (k as f64 + 1.0).powf(cfg.gamma);
        delta.iter_mut().for_each(|d| *d = if rng.gen::<bool>() { 1.0 } else { -1.0 });
        let mut ys = [0.0; 2];
        for (slot, sign) in [1.0, -1.0].into_iter().enumerate() {
            for i in 0..n {
                perturbed[i] = theta[i] + sign * ck * delta[i];
            }
            ys[slot] = f(&perturbed)?;
            evaluations += 1;
            track(&perturbed, ys[slot], &mut best);
        }
        let g = (ys[0] - ys[1]) / (2.0 * ck);
        for i in 0..n {
            theta[i] -= ak * g / delta[i];
        }
    }
    let final_e = f(&theta)?;
    evaluations += 1;
    track(&theta, final_e, &mut best);

    Ok(SpsaResult { theta: best.0, energy: best.1, start_energy, a, evaluations })
}

/// Continuous refinement of a Clifford point on the statevector energy.
pub fn spsa_refine(ansatz: &Ansatz, start: &QuarterTurns, h: &Hamiltonian, cfg: &SpsaConfig) -> Result<SpsaResult> {
    if start.len() != ansatz.n_params() {
        return Err(Error::ParamLength { expected: ansatz.n_params(), found: start.len() });
    }
    if h.n_qubits() != ansatz.n_qubits() {
        return Err(Error::SizeMismatch { expected: ansatz.n_qubits(), found: h.n_qubits() });
    }
    spsa_minimize(&start.to_radians(), cfg, |theta| statevector_energy(ansatz, theta, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{AnsatzFamily, GateSlot, RotationAxis};

    fn ry() -> Ansatz {
        Ansatz::new(1, 1, vec![GateSlot::Rotation { axis: RotationAxis::RY, qubits: [0, 0], param: 0 }], AnsatzFamily::Custom)
            .unwrap()
    }

    #[test]
    fn descends_cosine() {
        let h = Hamiltonian::parse("1.0 Z".as_bytes()).unwrap();
        for seed in 0..5 {
            let r = spsa_refine(&ry(), &QuarterTurns::new(vec![1]).unwrap(), &h, &SpsaConfig::with_seed(seed)).unwrap();
            assert!(r.start_energy.abs() < 1e-12);
            assert!(r.energy <= -0.9, "seed {seed}: {}", r.energy);
        }
    }

    #[test]
    fn never_regresses_from_ground() {
        let h = Hamiltonian::parse("1.0 Z".as_bytes()).unwrap();
        let r = spsa_refine(&ry(), &QuarterTurns::new(vec![2]).unwrap(), &h, &SpsaConfig::with_seed(3)).unwrap();
        assert_eq!(r.energy, r.start_energy);
        assert_eq!(r.energy, -1.0);
    }

    #[test]
    fn default_rounds() {
        assert_eq!(SpsaConfig::default().rounds, 200);
    }

    #[test]
    fn quadratic_bowl() {
        let cfg = SpsaConfig { rounds: 500, ..SpsaConfig::with_seed(1) };
        let r = spsa_minimize(&[1.0, -0.5, 0.25], &cfg, |x| Ok(x.iter().map(|v| v * v).sum())).unwrap();
        assert!(r.energy < 1e-3, "{}", r.energy);
        assert_eq!(r.evaluations, 1 + 2 * cfg.calibration_samples + 2 * cfg.rounds + 1);
    }

    #[test]
    fn validation() {
        assert!(SpsaConfig { rounds: 0, ..Default::default() }.validate().is_err());
        assert!(SpsaConfig { c: 0.0, ..Default::default() }.validate().is_err());
        assert!(SpsaConfig { a: Some(-1.0), ..Default::default() }.validate().is_err());
        let h = Hamiltonian::parse("1.0 Z".as_bytes()).unwrap();
        assert!(spsa_refine(&ry(), &QuarterTurns::zeros(2), &h, &SpsaConfig::default()).is_err());
    }
}
