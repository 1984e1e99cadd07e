//! Stabilizer states as destabilizer/stabilizer generator tableaux.
//!
//! Rows `0..n` are destabilizers and rows `n..2n` stabilizers. Each row is
//! a Hermitian Pauli string with a sign bit, stored row-major in packed
//! words. Gates act by conjugation (Heisenberg picture) with the standard
//! Aaronson-Gottesman sign updates.

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::pauli::{anticommute_words, product_phase, words_for, Hamiltonian, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    CX,
    CZ,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::CX | GateKind::CZ => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Sdg => "Sdg",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::CX => "CX",
            GateKind::CZ => "CZ",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "H" => GateKind::H,
            "S" => GateKind::S,
            "Sdg" => GateKind::Sdg,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "CX" => GateKind::CX,
            "CZ" => GateKind::CZ,
            _ => return None,
        })
    }
}

/// A gate from the Clifford alphabet on one or two qubits.
///
/// For `CX` the first qubit is the control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CliffordGate {
    kind: GateKind,
    qubits: [usize; 2],
}

impl CliffordGate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidArgument(format!(
                "{} takes {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                qubits.len()
            )));
        }
        if kind.arity() == 2 {
            if qubits[0] == qubits[1] {
                return Err(Error::RepeatedQubit(qubits[0]));
            }
            Ok(CliffordGate { kind, qubits: [qubits[0], qubits[1]] })
        } else {
            Ok(CliffordGate { kind, qubits: [qubits[0], qubits[0]] })
        }
    }

    pub fn h(q: usize) -> Self {
        CliffordGate { kind: GateKind::H, qubits: [q, q] }
    }
    pub fn s(q: usize) -> Self {
        CliffordGate { kind: GateKind::S, qubits: [q, q] }
    }
    pub fn sdg(q: usize) -> Self {
        CliffordGate { kind: GateKind::Sdg, qubits: [q, q] }
    }
    pub fn x(q: usize) -> Self {
        CliffordGate { kind: GateKind::X, qubits: [q, q] }
    }
    pub fn y(q: usize) -> Self {
        CliffordGate { kind: GateKind::Y, qubits: [q, q] }
    }
    pub fn z(q: usize) -> Self {
        CliffordGate { kind: GateKind::Z, qubits: [q, q] }
    }

    /// Panics if `control == target`; use [`CliffordGate::new`] for unchecked input.
    pub fn cx(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "CX needs distinct qubits");
        CliffordGate { kind: GateKind::CX, qubits: [control, target] }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "CZ needs distinct qubits");
        CliffordGate { kind: GateKind::CZ, qubits: [a, b] }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn max_qubit(&self) -> usize {
        self.qubits[0].max(self.qubits[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

impl Tableau {
    /// The all-zero state: destabilizer `i` is `X_i`, stabilizer `i` is `+Z_i`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("tableau needs at least one qubit".into()));
        }
        let words = words_for(n_qubits);
        let mut t = Tableau {
            n: n_qubits,
            words,
            xs: vec![0; 2 * n_qubits * words],
            zs: vec![0; 2 * n_qubits * words],
            signs: vec![false; 2 * n_qubits],
        };
        for q in 0..n_qubits {
            let (w, m) = (q / 64, 1u64 << (q % 64));
            t.xs[q * words + w] |= m;
            t.zs[(n_qubits + q) * words + w] |= m;
        }
        Ok(t)
    }

    /// The state prepared by `gates` acting on `|0…0⟩`.
    pub fn from_gates<'a, I>(n_qubits: usize, gates: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a CliffordGate>,
    {
        let mut t = Tableau::new(n_qubits)?;
        for g in gates {
            t.apply(g)?;
        }
        Ok(t)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    fn row_x(&self, r: usize) -> &[u64] {
        &self.xs[r * self.words..(r + 1) * self.words]
    }

    fn row_z(&self, r: usize) -> &[u64] {
        &self.zs[r * self.words..(r + 1) * self.words]
    }

    fn row(&self, r: usize) -> PauliString {
        let phase = if self.signs[r] { 2 } else { 0 };
        PauliString::from_parts(self.n, self.row_x(r).to_vec(), self.row_z(r).to_vec(), phase)
    }

    /// Stabilizer generators with their signs (phase exponent 0 or 2).
    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|r| self.row(r)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|r| self.row(r)).collect()
    }

    /// Value-in/value-out form of [`Tableau::apply`].
    pub fn applied(mut self, gate: &CliffordGate) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    /// Conjugates every row by `gate`.
    pub fn apply(&mut self, gate: &CliffordGate) -> Result<()> {
        let n = self.n;
        for &q in gate.qubits() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
            }
        }
        let words = self.words;
        let [a, b] = gate.qubits;
        let (wa, ma) = (a / 64, 1u64 << (a % 64));
        let (wb, mb) = (b / 64, 1u64 << (b % 64));
        let rows = 2 * n;
        let xs = &mut self.xs;
        let zs = &mut self.zs;
        let signs = &mut self.signs;
        match gate.kind {
            GateKind::H => {
                for r in 0..rows {
                    let i = r * words + wa;
                    let (x, z) = (xs[i] & ma != 0, zs[i] & ma != 0);
                    signs[r] ^= x & z;
                    if x != z {
                        xs[i] ^= ma;
                        zs[i] ^= ma;
                    }
                }
            }
            GateKind::S => {
                for r in 0..rows {
                    let i = r * words + wa;
                    let (x, z) = (xs[i] & ma != 0, zs[i] & ma != 0);
                    signs[r] ^= x & z;
                    if x {
                        zs[i] ^= ma;
                    }
                }
            }
            GateKind::Sdg => {
                for r in 0..rows {
                    let i = r * words + wa;
                    let (x, z) = (xs[i] & ma != 0, zs[i] & ma != 0);
                    signs[r] ^= x & !z;
                    if x {
                        zs[i] ^= ma;
                    }
                }
            }
            GateKind::X => {
                for r in 0..rows {
                    signs[r] ^= zs[r * words + wa] & ma != 0;
                }
            }
            GateKind::Z => {
                for r in 0..rows {
                    signs[r] ^= xs[r * words + wa] & ma != 0;
                }
            }
            GateKind::Y => {
                for r in 0..rows {
                    let i = r * words + wa;
                    signs[r] ^= (xs[i] & ma != 0) ^ (zs[i] & ma != 0);
                }
            }
            GateKind::CX => {
                for r in 0..rows {
                    let (ia, ib) = (r * words + wa, r * words + wb);
                    let xa = xs[ia] & ma != 0;
                    let za = zs[ia] & ma != 0;
                    let xb = xs[ib] & mb != 0;
                    let zb = zs[ib] & mb != 0;
                    signs[r] ^= xa & zb & !(xb ^ za);
                    if xa {
                        xs[ib] ^= mb;
                    }
                    if zb {
                        zs[ia] ^= ma;
                    }
                }
            }
            GateKind::CZ => {
                for r in 0..rows {
                    let (ia, ib) = (r * words + wa, r * words + wb);
                    let xa = xs[ia] & ma != 0;
                    let za = zs[ia] & ma != 0;
                    let xb = xs[ib] & mb != 0;
                    let zb = zs[ib] & mb != 0;
                    signs[r] ^= xa & xb & (za ^ zb);
                    if xb {
                        zs[ia] ^= ma;
                    }
                    if xa {
                        zs[ib] ^= mb;
                    }
                }
            }
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩ ∈ {-1, 0, +1}` for a phase-free Pauli string `P`.
    ///
    /// Zero when `P` anticommutes with some stabilizer generator. Otherwise
    /// `±P` is the product of the stabilizers whose destabilizer partner
    /// anticommutes with `P`, and the sign of that product is the answer.
    pub fn expectation(&self, p: &PauliString) -> Result<i8> {
        if p.n_qubits() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: p.n_qubits() });
        }
        if p.phase_exp() != 0 {
            return Err(Error::NonZeroPhase(p.phase_exp()));
        }
        Ok(self.expectation_words(p.x_words(), p.z_words()))
    }

    pub(crate) fn expectation_words(&self, px: &[u64], pz: &[u64]) -> i8 {
        let n = self.n;
        for r in n..2 * n {
            if anticommute_words(self.row_x(r), self.row_z(r), px, pz) {
                return 0;
            }
        }
        let mut acc_x: SmallVec<[u64; 4]> = smallvec![0; self.words];
        let mut acc_z: SmallVec<[u64; 4]> = smallvec![0; self.words];
        let mut phase = 0u8;
        for i in 0..n {
            if !anticommute_words(self.row_x(i), self.row_z(i), px, pz) {
                continue;
            }
            let r = n + i;
            let (rx, rz) = (self.row_x(r), self.row_z(r));
            phase += product_phase(&acc_x, &acc_z, rx, rz) + if self.signs[r] { 2 } else { 0 };
            for w in 0..self.words {
                acc_x[w] ^= rx[w];
                acc_z[w] ^= rz[w];
            }
        }
        debug_assert!(acc_x.as_slice() == px && acc_z.as_slice() == pz);
        match phase % 4 {
            0 => 1,
            2 => -1,
            // a product of commuting Hermitian generators is Hermitian
            _ => unreachable!("imaginary phase in stabilizer product"),
        }
    }

    /// `Σ cᵢ ⟨Pᵢ⟩` over the Hamiltonian's terms.
    pub fn energy(&self, h: &Hamiltonian) -> Result<f64> {
        if h.n_qubits() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: h.n_qubits() });
        }
        let mut e = 0.0;
        for t in h.terms() {
            match self.expectation_words(t.pauli.x_words(), t.pauli.z_words()) {
                1 => e += t.coeff,
                -1 => e -= t.coeff,
                _ => {}
            }
        }
        Ok(e)
    }

    /// Checks the tableau invariants, returning a description of the first
    /// violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.n;
        for i in 0..2 * n {
            for j in 0..2 * n {
                let anti = anticommute_words(self.row_x(i), self.row_z(i), self.row_x(j), self.row_z(j));
                // only destabilizer i and stabilizer i (i.e. rows i and i+n) anticommute
                let expected = i.abs_diff(j) == n;
                if anti != expected {
                    return Err(format!("rows {i} and {j}: anticommute={anti}, expected {expected}"));
                }
            }
        }
        // Symplectic full rank over GF(2).
        let mut rows: Vec<Vec<u64>> =
            (0..2 * n).map(|r| self.row_x(r).iter().chain(self.row_z(r)).copied().collect()).collect();
        let mut rank = 0;
        for col in 0..2 * n {
            let (w, m) = if col < n { (col / 64, 1u64 << (col % 64)) } else { (self.words + (col - n) / 64, 1u64 << ((col - n) % 64)) };
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & m != 0) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row[w] & m != 0 {
                        row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                    }
                }
                rank += 1;
            }
        }
        if rank != 2 * n {
            return Err(format!("rank {rank} < {}", 2 * n));
        }
        Ok(())
    }
}
