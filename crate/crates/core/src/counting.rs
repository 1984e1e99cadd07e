//! Exact stabilizer-state counts.
//!
//! `S(n) = 2^n ∏_{k=1}^{n} (2^k + 1)` is the number of `n`-qubit
//! stabilizer states. A fixed non-identity Pauli string has `S(n-1)` of
//! them as `+1` eigenstates, and two independent commuting strings share
//! `S(n-2)` common `+1` eigenstates.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::oracle::StateVector;
use crate::pauli::Hamiltonian;
use crate::stabilizer::CliffordGate;

/// `S(n)`; `S(0) = 1`.
pub fn stabilizer_total(n: usize) -> BigUint {
    let mut total = BigUint::one() << n;
    for k in 1..=n {
        total *= (BigUint::one() << k) + 1u32;
    }
    total
}

/// Stabilizer states that are `+1` eigenstates of one non-identity string.
pub fn pauli_stabilized_count(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(invalid("pauli_stabilized_count needs n >= 1"));
    }
    Ok(stabilizer_total(n - 1))
}

/// Common `+1` eigenstates of two independent commuting strings.
pub fn common_stabilizer_count(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(invalid("common_stabilizer_count needs n >= 2"));
    }
    Ok(stabilizer_total(n - 2))
}

/// Upper bound on the fraction of stabilizer states with a nonzero energy
/// signal: `min(1, 2·S(n-1)·M / S(n))`, where `M` counts non-identity terms
/// and the factor 2 covers both eigenvalue signs.
pub fn nonzero_bound(h: &Hamiltonian) -> Result<BigRational> {
    if h.is_empty() {
        return Err(Error::EmptyHamiltonian);
    }
    let n = h.n_qubits();
    let m = h.non_identity_count();
    let num = BigUint::from(2u32) * stabilizer_total(n - 1) * BigUint::from(m);
    let bound = BigRational::new(num.into(), stabilizer_total(n).into());
    Ok(bound.min(BigRational::one()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub n_qubits: usize,
    /// `S(n)` as a decimal string.
    pub total_states: String,
    pub per_pauli: Option<String>,
    pub common_pair: Option<String>,
    pub term_count: Option<usize>,
    /// `"num/den"`.
    pub nonzero_bound: Option<String>,
}

impl CountReport {
    pub fn new(n: usize, h: Option<&Hamiltonian>) -> Result<Self> {
        let (term_count, bound) = match h {
            Some(h) => {
                if h.n_qubits() != n {
                    return Err(Error::SizeMismatch { expected: n, found: h.n_qubits() });
                }
                let b = nonzero_bound(h)?;
                (Some(h.non_identity_count()), Some(format!("{}/{}", b.numer(), b.denom())))
            }
            None => (None, None),
        };
        Ok(CountReport {
            n_qubits: n,
            total_states: stabilizer_total(n).to_string(),
            per_pauli: pauli_stabilized_count(n).ok().map(|v| v.to_string()),
            common_pair: common_stabilizer_count(n).ok().map(|v| v.to_string()),
            term_count,
            nonzero_bound: bound,
        })
    }
}

/// Largest register [`enumerate_stabilizer_states`] handles.
pub const ENUMERATION_QUBIT_CAP: usize = 3;

/// Every `n`-qubit stabilizer state (up to global phase), found as the
/// orbit of `|0…0⟩` under `H`, `S` and `CX`. States are returned with the
/// first nonzero amplitude made real and positive.
pub fn enumerate_stabilizer_states(n: usize) -> Result<Vec<StateVector>> {
    if n > ENUMERATION_QUBIT_CAP {
        return Err(Error::QubitCap { n_qubits: n, cap: ENUMERATION_QUBIT_CAP, what: "stabilizer enumeration" });
    }
    let start = canonical(StateVector::zero_state(n)?);
    if n == 0 {
        return Ok(vec![start]);
    }
    let mut generators = Vec::new();
    for q in 0..n {
        generators.push(CliffordGate::h(q));
        generators.push(CliffordGate::s(q));
        for t in 0..n {
            if t != q {
                generators.push(CliffordGate::cx(q, t));
            }
        }
    }
    let mut seen = HashSet::new();
    seen.insert(key(&start));
    let mut states = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for g in &generators {
            let mut next = s.clone();
            next.apply_clifford(g)?;
            let next = canonical(next);
            if seen.insert(key(&next)) {
                states.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(states)
}

fn canonical(s: StateVector) -> StateVector {
    let amps = s.amplitudes();
    let lead = amps.iter().find(|a| a.norm() > 1e-9).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    let amps = amps.iter().map(|a| a * phase).collect();
    StateVector::from_amplitudes(s.n_qubits(), amps).expect("rotating by a phase keeps the norm")
}

fn key(s: &StateVector) -> Vec<(i64, i64)> {
    let round = |v: f64| (v * 1e6).round().to_i64().unwrap_or(0);
    s.amplitudes().iter().map(|a| (round(a.re), round(a.im))).collect()
}
