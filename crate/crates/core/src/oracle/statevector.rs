use num_complex::Complex64;

use crate::ansatz::{Ansatz, GateSlot, RotationAxis};
use crate::error::{Error, Result};
use crate::pauli::{Hamiltonian, PauliString};
use crate::stabilizer::{CliffordGate, GateKind};

/// Largest register the dense simulator accepts.
pub const STATEVECTOR_QUBIT_CAP: usize = 16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

type Mat2 = [[Complex64; 2]; 2];

/// Dense `2^n` amplitude vector; qubit `j` is bit `j` of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        check_cap(n_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        Ok(StateVector { n: n_qubits, amps })
    }

    /// Normalizes the given amplitudes; fails on a zero vector or a length
    /// that is not `2^n_qubits`.
    pub fn from_amplitudes(n_qubits: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_cap(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!("expected {} amplitudes, got {}", 1usize << n_qubits, amps.len())));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("state has zero or non-finite norm".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { n: n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: self.n });
        }
        Ok(())
    }

    fn apply_single(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    pub fn apply_clifford(&mut self, g: &CliffordGate) -> Result<()> {
        for &q in g.qubits() {
            self.check_qubit(q)?;
        }
        let q = g.qubits()[0];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let h = Complex64::new(h, 0.0);
        match g.kind() {
            GateKind::H => self.apply_single(q, &[[h, h], [h, -h]]),
            GateKind::S => self.apply_single(q, &[[ONE, ZERO], [ZERO, I]]),
            GateKind::Sdg => self.apply_single(q, &[[ONE, ZERO], [ZERO, -I]]),
            GateKind::X => self.apply_single(q, &[[ZERO, ONE], [ONE, ZERO]]),
            GateKind::Y => self.apply_single(q, &[[ZERO, -I], [I, ZERO]]),
            GateKind::Z => self.apply_single(q, &[[ONE, ZERO], [ZERO, -ONE]]),
            GateKind::CX => self.apply_cx(q, g.qubits()[1]),
            GateKind::CZ => self.apply_cz(q, g.qubits()[1]),
        }
        Ok(())
    }

    /// `exp(-iθA/2)` for the rotation's Pauli generator `A`.
    pub fn apply_rotation(&mut self, axis: RotationAxis, qubits: &[usize], theta: f64) -> Result<()> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let cc = Complex64::new(c, 0.0);
        match axis {
            RotationAxis::RX => {
                let mis = Complex64::new(0.0, -s);
                self.apply_single(qubits[0], &[[cc, mis], [mis, cc]]);
            }
            RotationAxis::RY => {
                let ss = Complex64::new(s, 0.0);
                self.apply_single(qubits[0], &[[cc, -ss], [ss, cc]]);
            }
            RotationAxis::RZ => {
                self.apply_single(qubits[0], &[[Complex64::new(c, -s), ZERO], [ZERO, Complex64::new(c, s)]]);
            }
            RotationAxis::RZZ => {
                let (a, b) = (qubits[0], qubits[1]);
                let even = Complex64::new(c, -s);
                let odd = Complex64::new(c, s);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    let parity = ((i >> a) ^ (i >> b)) & 1;
                    *amp *= if parity == 0 { even } else { odd };
                }
            }
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩` including the string's own phase.
    pub fn expectation_complex(&self, p: &PauliString) -> Result<Complex64> {
        if p.n_qubits() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: p.n_qubits() });
        }
        let (x, z) = p.masks_u64();
        let (x, z) = (x as usize, z as usize);
        // P|b⟩ = i^{#Y} (-1)^{|b ∧ z|} |b ⊕ x⟩
        let y_phase = I.powu((p.y_count() + p.phase_exp() as usize) as u32 % 4);
        let mut acc = ZERO;
        for (b, amp) in self.amps.iter().enumerate() {
            let term = self.amps[b ^ x].conj() * amp;
            if (b & z).count_ones() % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Ok(y_phase * acc)
    }

    /// Real part of `⟨ψ|P|ψ⟩` for a phase-free (Hermitian) string.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.phase_exp() != 0 {
            return Err(Error::NonZeroPhase(p.phase_exp()));
        }
        Ok(self.expectation_complex(p)?.re)
    }

    /// `Σ cᵢ ⟨Pᵢ⟩`, summed in term order.
    pub fn energy(&self, h: &Hamiltonian) -> Result<f64> {
        if h.n_qubits() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: h.n_qubits() });
        }
        let mut e = 0.0;
        for t in h.terms() {
            e += t.coeff * self.expectation(&t.pauli)?;
        }
        Ok(e)
    }

    /// Overlap `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > STATEVECTOR_QUBIT_CAP {
        return Err(Error::QubitCap { n_qubits: n, cap: STATEVECTOR_QUBIT_CAP, what: "statevector simulation" });
    }
    Ok(())
}

/// Runs every slot of `ansatz` at angles `theta` (radians) on `|0…0⟩`.
pub fn simulate_statevector(ansatz: &Ansatz, theta: &[f64]) -> Result<StateVector> {
    if theta.len() != ansatz.n_params() {
        return Err(Error::ParamLength { expected: ansatz.n_params(), found: theta.len() });
    }
    let mut s = StateVector::zero_state(ansatz.n_qubits())?;
    for slot in ansatz.slots() {
        match slot {
            GateSlot::Fixed(g) => s.apply_clifford(g)?,
            GateSlot::Rotation { axis, qubits, param } => {
                s.apply_rotation(*axis, &qubits[..axis.arity()], theta[*param])?;
            }
        }
    }
    Ok(s)
}

/// Statevector energy of the ansatz at continuous angles.
pub fn statevector_energy(ansatz: &Ansatz, theta: &[f64], h: &Hamiltonian) -> Result<f64> {
    simulate_statevector(ansatz, theta)?.energy(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{AnsatzFamily, QuarterTurns};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn real_ansatz_at_zero_is_zero_state() {
        let a = Ansatz::real(2, 1).unwrap();
        let s = simulate_statevector(&a, &[0.0, 0.0]).unwrap();
        assert_eq!(s, StateVector::zero_state(2).unwrap());
    }

    #[test]
    fn ry_half_pi() {
        let a = Ansatz::new(1, 1, vec![GateSlot::Rotation { axis: RotationAxis::RY, qubits: [0, 0], param: 0 }], AnsatzFamily::Custom)
            .unwrap();
        let s = simulate_statevector(&a, &[std::f64::consts::FRAC_PI_2]).unwrap();
        let c = std::f64::consts::FRAC_PI_4.cos();
        assert!(close(s.amplitudes()[0], Complex64::new(c, 0.0)));
        assert!(close(s.amplitudes()[1], Complex64::new(c, 0.0)));
    }

    #[test]
    fn pauli_expectations_on_simple_states() {
        let s = StateVector::zero_state(2).unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        assert_eq!(s.expectation(&zz).unwrap(), 1.0);
        let mut plus_i = StateVector::zero_state(1).unwrap();
        plus_i.apply_clifford(&CliffordGate::h(0)).unwrap();
        plus_i.apply_clifford(&CliffordGate::s(0)).unwrap();
        assert!((plus_i.expectation(&"Y".parse().unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!(plus_i.expectation(&"X".parse().unwrap()).unwrap().abs() < 1e-12);
        // phased string: ⟨iY⟩ = i
        let iy = "Y".parse::<PauliString>().unwrap().with_phase(1);
        assert!(close(plus_i.expectation_complex(&iy).unwrap(), I));
        assert!(plus_i.expectation(&iy).is_err());
    }

    #[test]
    fn plus_state_tfim_energy() {
        use crate::models::{tfim_hamiltonian, TfimParams};
        let mut s = StateVector::zero_state(4).unwrap();
        for q in 0..4 {
            s.apply_clifford(&CliffordGate::h(q)).unwrap();
        }
        let h = tfim_hamiltonian(&TfimParams { n: 4, j: 1.0, gx: 0.85, gz: 0.85 }).unwrap();
        // +1 for ⟨X⟩ on each site
        assert!((s.energy(&h).unwrap() - 3.4).abs() < 1e-12);
        let mut minus = s.clone();
        for q in 0..4 {
            minus.apply_clifford(&CliffordGate::z(q)).unwrap();
        }
        assert!((minus.energy(&h).unwrap() + 3.4).abs() < 1e-12);
    }

    #[test]
    fn cap_and_size_errors() {
        assert!(matches!(StateVector::zero_state(17), Err(Error::QubitCap { .. })));
        let a = Ansatz::real(2, 1).unwrap();
        assert!(matches!(simulate_statevector(&a, &[0.0]), Err(Error::ParamLength { .. })));
        let s = StateVector::zero_state(2).unwrap();
        assert!(s.expectation(&"Z".parse().unwrap()).is_err());
        assert!(StateVector::from_amplitudes(1, vec![ZERO, ZERO]).is_err());
        assert!(StateVector::from_amplitudes(1, vec![ONE]).is_err());
    }

    #[test]
    fn normalization_over_long_circuits() {
        let a = Ansatz::trotter(6, 12).unwrap();
        assert!(a.slots().len() >= 200);
        let theta: Vec<f64> = (0..a.n_params()).map(|i| 0.37 * i as f64 - 1.1).collect();
        let s = simulate_statevector(&a, &theta).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_pi_rotation_is_global_phase() {
        let a = Ansatz::trotter(3, 1).unwrap();
        let q = QuarterTurns::new(vec![1, 2, 3, 0, 1, 2, 3, 1]).unwrap();
        let base = q.to_radians();
        let s0 = simulate_statevector(&a, &base).unwrap();
        for i in 0..a.n_params() {
            let mut shifted = base.clone();
            shifted[i] += 2.0 * std::f64::consts::PI;
            let s1 = simulate_statevector(&a, &shifted).unwrap();
            assert!((s0.fidelity(&s1) - 1.0).abs() < 1e-12);
        }
    }
}
