//! Dense reference computations for checking Clifford-point results:
//! statevector simulation, exact diagonalization, SPSA refinement, and
//! per-term expectation reports.

mod diag;
mod spsa;
mod statevector;

pub use diag::{exact_diagonalize, ground_state, DENSE_QUBIT_CAP};
pub use spsa::{spsa_minimize, spsa_refine, SpsaConfig, SpsaResult};
pub use statevector::{simulate_statevector, statevector_energy, StateVector, STATEVECTOR_QUBIT_CAP};

use crate::error::{Error, Result};
use crate::pauli::{Hamiltonian, PauliString};
use crate::stabilizer::Tableau;

/// Anything that can report `⟨P⟩` for a phase-free Pauli string.
pub trait PauliExpectation {
    fn n_qubits(&self) -> usize;
    fn pauli_expectation(&self, p: &PauliString) -> Result<f64>;
}

impl PauliExpectation for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        self.expectation(p)
    }
}

impl PauliExpectation for Tableau {
    fn n_qubits(&self) -> usize {
        Tableau::n_qubits(self)
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        Ok(f64::from(self.expectation(p)?))
    }
}

/// `(term index, ⟨Pᵢ⟩)` in Hamiltonian term order.
pub fn term_expectations<S: PauliExpectation + ?Sized>(state: &S, h: &Hamiltonian) -> Result<Vec<(usize, f64)>> {
    if state.n_qubits() != h.n_qubits() {
        return Err(Error::SizeMismatch { expected: h.n_qubits(), found: state.n_qubits() });
    }
    h.terms().iter().enumerate().map(|(i, t)| Ok((i, state.pauli_expectation(&t.pauli)?))).collect()
}

/// Formats a float for reports: fixed 10 decimals, with `-0` folded to `0`.
pub fn fmt_value(v: f64) -> String {
    let v = if v.abs() < 5e-11 { 0.0 } else { v };
    format!("{v:.10}")
}

/// CSV with header `term_index,coefficient,pauli,expectation`.
pub fn term_report_csv(h: &Hamiltonian, values: &[(usize, f64)]) -> String {
    let mut out = String::from("term_index,coefficient,pauli,expectation\n");
    for &(i, v) in values {
        let t = &h.terms()[i];
        out.push_str(&format!("{i},{:?},{},{}\n", t.coeff, t.pauli.letters(), fmt_value(v)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::CliffordGate;

    #[test]
    fn bell_term_expectations() {
        let h = Hamiltonian::parse("1 ZZ\n1 XX\n1 ZI".as_bytes()).unwrap();
        let gates = [CliffordGate::h(0), CliffordGate::cx(0, 1)];
        let t = Tableau::from_gates(2, &gates).unwrap();
        let from_tableau = term_expectations(&t, &h).unwrap();
        assert_eq!(from_tableau, vec![(0, 1.0), (1, 1.0), (2, 0.0)]);
        let mut s = StateVector::zero_state(2).unwrap();
        for g in &gates {
            s.apply_clifford(g).unwrap();
        }
        let from_state = term_expectations(&s, &h).unwrap();
        for (a, b) in from_tableau.iter().zip(&from_state) {
            assert!((a.1 - b.1).abs() < 1e-12);
        }
        let csv = term_report_csv(&h, &from_tableau);
        assert_eq!(csv, "term_index,coefficient,pauli,expectation\n0,1.0,ZZ,1.0000000000\n1,1.0,XX,1.0000000000\n2,1.0,ZI,0.0000000000\n");
    }

    #[test]
    fn size_mismatch() {
        let h = Hamiltonian::parse("1 ZZZ".as_bytes()).unwrap();
        let t = Tableau::new(2).unwrap();
        assert!(term_expectations(&t, &h).is_err());
    }

    #[test]
    fn negative_zero_is_folded() {
        assert_eq!(fmt_value(-1e-15), "0.0000000000");
        assert_eq!(fmt_value(-0.5), "-0.5000000000");
    }
}
