//! Parameterized circuits and their Clifford points.
//!
//! Every rotation slot uses `R_A(θ) = exp(-iθA/2)`. At `θ = m·π/2` the
//! rotation is Clifford and compiles to the gate alphabet of
//! [`crate::stabilizer`], up to a global phase.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::pauli::Hamiltonian;
use crate::stabilizer::{CliffordGate, GateKind, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RotationAxis {
    RX,
    RY,
    RZ,
    RZZ,
}

impl RotationAxis {
    pub fn arity(self) -> usize {
        if self == RotationAxis::RZZ {
            2
        } else {
            1
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "RX" => RotationAxis::RX,
            "RY" => RotationAxis::RY,
            "RZ" => RotationAxis::RZ,
            "RZZ" => RotationAxis::RZZ,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            RotationAxis::RX => "RX",
            RotationAxis::RY => "RY",
            RotationAxis::RZ => "RZ",
            RotationAxis::RZZ => "RZZ",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateSlot {
    Fixed(CliffordGate),
    Rotation { axis: RotationAxis, qubits: [usize; 2], param: usize },
}

impl GateSlot {
    pub fn rotation(axis: RotationAxis, qubits: &[usize], param: usize) -> Result<Self> {
        if qubits.len() != axis.arity() {
            return Err(invalid(format!("{} takes {} qubit(s), got {}", axis.name(), axis.arity(), qubits.len())));
        }
        if axis.arity() == 2 && qubits[0] == qubits[1] {
            return Err(Error::RepeatedQubit(qubits[0]));
        }
        let q = [qubits[0], *qubits.last().unwrap()];
        Ok(GateSlot::Rotation { axis, qubits: q, param })
    }

    fn qubit_list(&self) -> &[usize] {
        match self {
            GateSlot::Fixed(g) => g.qubits(),
            GateSlot::Rotation { axis, qubits, .. } => &qubits[..axis.arity()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnsatzFamily {
    Real,
    Trotter,
    Qaoa,
    Custom,
}

impl fmt::Display for AnsatzFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnsatzFamily::Real => "real",
            AnsatzFamily::Trotter => "trotter",
            AnsatzFamily::Qaoa => "qaoa",
            AnsatzFamily::Custom => "custom",
        })
    }
}

/// A point on the Clifford lattice: entry `m` stands for the angle `m·π/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct QuarterTurns(Vec<u8>);

impl QuarterTurns {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v > 3) {
            return Err(invalid(format!("quarter-turn value {v} outside 0..=3")));
        }
        Ok(QuarterTurns(values))
    }

    /// Reduces arbitrary integers mod 4.
    pub fn from_ints(values: &[i64]) -> Self {
        QuarterTurns(values.iter().map(|v| v.rem_euclid(4) as u8).collect())
    }

    pub fn zeros(len: usize) -> Self {
        QuarterTurns(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, m: u8) {
        self.0[i] = m & 3;
    }

    pub fn to_radians(&self) -> Vec<f64> {
        self.0.iter().map(|&m| f64::from(m) * std::f64::consts::FRAC_PI_2).collect()
    }

    pub fn hamming_distance(&self, other: &QuarterTurns) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl TryFrom<Vec<u8>> for QuarterTurns {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        QuarterTurns::new(v)
    }
}

impl From<QuarterTurns> for Vec<u8> {
    fn from(q: QuarterTurns) -> Self {
        q.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    n_qubits: usize,
    n_params: usize,
    slots: Vec<GateSlot>,
    family: AnsatzFamily,
}

impl Ansatz {
    pub fn new(n_qubits: usize, n_params: usize, slots: Vec<GateSlot>, family: AnsatzFamily) -> Result<Self> {
        if n_qubits == 0 {
            return Err(invalid("ansatz needs at least one qubit"));
        }
        let mut uses = vec![0usize; n_params];
        for slot in &slots {
            for &q in slot.qubit_list() {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange { index: q, n_qubits });
                }
            }
            if let GateSlot::Rotation { param, .. } = *slot {
                if param >= n_params {
                    return Err(invalid(format!("parameter index {param} >= n_params {n_params}")));
                }
                uses[param] += 1;
            }
        }
        if let Some(p) = uses.iter().position(|&u| u == 0) {
            return Err(invalid(format!("parameter {p} is not used by any slot")));
        }
        if matches!(family, AnsatzFamily::Real | AnsatzFamily::Trotter) {
            if let Some(p) = uses.iter().position(|&u| u > 1) {
                return Err(invalid(format!("{family} ansatz uses parameter {p} more than once")));
            }
        }
        Ok(Ansatz { n_qubits, n_params, slots, family })
    }

    /// `depth` layers of one `RY` per qubit followed by the CX chain
    /// `CX(0,1), CX(1,2), …`. Amplitudes stay real at every parameter value.
    pub fn real(n_qubits: usize, depth: usize) -> Result<Self> {
        check_layers(n_qubits, depth)?;
        let mut slots = Vec::new();
        let mut param = 0;
        for _ in 0..depth {
            for q in 0..n_qubits {
                slots.push(GateSlot::Rotation { axis: RotationAxis::RY, qubits: [q, q], param });
                param += 1;
            }
            for q in 0..n_qubits - 1 {
                slots.push(GateSlot::Fixed(CliffordGate::cx(q, q + 1)));
            }
        }
        Ansatz::new(n_qubits, param, slots, AnsatzFamily::Real)
    }

    /// `depth` layers of independent `RZ` on every qubit, `RX` on every
    /// qubit and `RZZ` on each nearest-neighbour pair.
    pub fn trotter(n_qubits: usize, depth: usize) -> Result<Self> {
        check_layers(n_qubits, depth)?;
        let mut slots = Vec::new();
        let mut param = 0;
        let mut push = |axis, qubits| {
            slots.push(GateSlot::Rotation { axis, qubits, param });
            param += 1;
        };
        for _ in 0..depth {
            for q in 0..n_qubits {
                push(RotationAxis::RZ, [q, q]);
            }
            for q in 0..n_qubits {
                push(RotationAxis::RX, [q, q]);
            }
            for q in 0..n_qubits - 1 {
                push(RotationAxis::RZZ, [q, q + 1]);
            }
        }
        Ansatz::new(n_qubits, param, slots, AnsatzFamily::Trotter)
    }

    /// QAOA for a diagonal cost of one- and two-body `Z` terms with integer
    /// weights. Layer `l` uses parameter `2l` for the cost unitary and
    /// `2l+1` for the `RX` mixer. A weight `w` becomes `|w|` repeated slots
    /// sharing the layer's cost parameter; negative weights are conjugated
    /// by `X` on the first qubit of the term.
    pub fn qaoa(h: &Hamiltonian, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(invalid("depth must be at least 1"));
        }
        let n = h.n_qubits();
        let mut cost_terms = Vec::new();
        for t in h.terms() {
            if !t.pauli.is_z_type() {
                return Err(invalid(format!("QAOA needs a diagonal cost, found term {}", t.pauli.letters())));
            }
            let support = t.pauli.support();
            if support.is_empty() {
                continue;
            }
            if support.len() > 2 {
                return Err(invalid(format!("QAOA cost term {} has weight > 2", t.pauli.letters())));
            }
            if t.coeff.fract() != 0.0 {
                return Err(invalid(format!(
                    "QAOA needs integer weights so quarter turns stay Clifford, found {}",
                    t.coeff
                )));
            }
            cost_terms.push((support, t.coeff as i64));
        }
        let mut slots: Vec<GateSlot> = (0..n).map(|q| GateSlot::Fixed(CliffordGate::h(q))).collect();
        for layer in 0..depth {
            let gamma = 2 * layer;
            for (support, w) in &cost_terms {
                let flip = *w < 0;
                if flip {
                    slots.push(GateSlot::Fixed(CliffordGate::x(support[0])));
                }
                for _ in 0..w.unsigned_abs() {
                    let slot = match support.as_slice() {
                        [a] => GateSlot::Rotation { axis: RotationAxis::RZ, qubits: [*a, *a], param: gamma },
                        [a, b] => GateSlot::Rotation { axis: RotationAxis::RZZ, qubits: [*a, *b], param: gamma },
                        _ => unreachable!(),
                    };
                    slots.push(slot);
                }
                if flip {
                    slots.push(GateSlot::Fixed(CliffordGate::x(support[0])));
                }
            }
            for q in 0..n {
                slots.push(GateSlot::Rotation { axis: RotationAxis::RX, qubits: [q, q], param: gamma + 1 });
            }
        }
        Ansatz::new(n, 2 * depth, slots, AnsatzFamily::Qaoa)
    }

    /// Reads a gate-list file: either a JSON array of slot records or an
    /// object `{"n_qubits": n, "slots": [...]}`. Records are
    /// `{"fixed": {"kind": "CX", "qubits": [0, 1]}}` or
    /// `{"rot": {"axis": "RY", "qubits": [0], "param": 0}}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: CustomFile = serde_json::from_str(text)?;
        let (declared, records) = match file {
            CustomFile::Bare(slots) => (None, slots),
            CustomFile::WithHeader { n_qubits, slots } => (n_qubits, slots),
        };
        let mut slots = Vec::with_capacity(records.len());
        let mut max_qubit = 0;
        let mut n_params = 0;
        for r in records {
            let slot = match r {
                SlotRecord::Fixed { kind, qubits } => {
                    let kind = GateKind::from_name(&kind).ok_or_else(|| invalid(format!("unknown gate kind {kind:?}")))?;
                    GateSlot::Fixed(CliffordGate::new(kind, &qubits)?)
                }
                SlotRecord::Rot { axis, qubits, param } => {
                    let axis = RotationAxis::from_name(&axis).ok_or_else(|| invalid(format!("unknown rotation axis {axis:?}")))?;
                    n_params = n_params.max(param + 1);
                    GateSlot::rotation(axis, &qubits, param)?
                }
            };
            max_qubit = max_qubit.max(slot.qubit_list().iter().copied().max().unwrap_or(0));
            slots.push(slot);
        }
        if slots.is_empty() {
            return Err(invalid("custom ansatz has no slots"));
        }
        let n_qubits = declared.unwrap_or(max_qubit + 1);
        Ansatz::new(n_qubits, n_params, slots, AnsatzFamily::Custom)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ansatz::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let records: Vec<SlotRecord> = self
            .slots
            .iter()
            .map(|s| match s {
                GateSlot::Fixed(g) => SlotRecord::Fixed { kind: g.kind().name().to_string(), qubits: g.qubits().to_vec() },
                GateSlot::Rotation { axis, qubits, param } => SlotRecord::Rot {
                    axis: axis.name().to_string(),
                    qubits: qubits[..axis.arity()].to_vec(),
                    param: *param,
                },
            })
            .collect();
        serde_json::to_string(&CustomFile::WithHeader { n_qubits: Some(self.n_qubits), slots: records })
            .expect("slot records serialize")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn slots(&self) -> &[GateSlot] {
        &self.slots
    }

    pub fn family(&self) -> AnsatzFamily {
        self.family
    }

    pub fn rotation_count(&self) -> usize {
        self.slots.iter().filter(|s| matches!(s, GateSlot::Rotation { .. })).count()
    }

    fn check_point(&self, q: &QuarterTurns) -> Result<()> {
        if q.len() != self.n_params {
            return Err(Error::ParamLength { expected: self.n_params, found: q.len() });
        }
        Ok(())
    }

    /// The Clifford gate list (in time order) for the point `q`; identity
    /// rotations are omitted.
    pub fn compile_clifford(&self, q: &QuarterTurns) -> Result<Vec<CliffordGate>> {
        self.check_point(q)?;
        let mut out = Vec::with_capacity(self.slots.len());
        self.emit(q, None, |g| out.push(g));
        Ok(out)
    }

    /// Walks the compiled gates; `override_slot` replaces the quarter turn
    /// of one slot (used by the parameter-shift rule).
    fn emit(&self, q: &QuarterTurns, override_slot: Option<(usize, u8)>, mut f: impl FnMut(CliffordGate)) {
        for (i, slot) in self.slots.iter().enumerate() {
            match *slot {
                GateSlot::Fixed(g) => f(g),
                GateSlot::Rotation { axis, qubits: [a, b], param } => {
                    let m = match override_slot {
                        Some((s, m)) if s == i => m,
                        _ => q.get(param),
                    };
                    compile_rotation(axis, a, b, m, &mut f);
                }
            }
        }
    }

    fn energy_at(&self, q: &QuarterTurns, override_slot: Option<(usize, u8)>, h: &Hamiltonian) -> Result<f64> {
        let mut t = Tableau::new(self.n_qubits)?;
        let mut err = None;
        self.emit(q, override_slot, |g| {
            if err.is_none() {
                if let Err(e) = t.apply(&g) {
                    err = Some(e);
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        t.energy(h)
    }

    fn check_hamiltonian(&self, h: &Hamiltonian) -> Result<()> {
        if h.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: h.n_qubits() });
        }
        Ok(())
    }

    /// Prepared stabilizer state at `q`.
    pub fn clifford_state(&self, q: &QuarterTurns) -> Result<Tableau> {
        self.check_point(q)?;
        Tableau::from_gates(self.n_qubits, &self.compile_clifford(q)?)
    }

    /// `⟨ψ(q)|H|ψ(q)⟩` via the stabilizer tableau.
    pub fn clifford_energy(&self, q: &QuarterTurns, h: &Hamiltonian) -> Result<f64> {
        self.check_point(q)?;
        self.check_hamiltonian(h)?;
        self.energy_at(q, None, h)
    }

    /// Parameter-shift gradient at a Clifford point. Shifting one slot by
    /// `±π/2` lands on another Clifford point; shared parameters sum their
    /// per-slot contributions.
    pub fn clifford_gradient(&self, q: &QuarterTurns, h: &Hamiltonian) -> Result<Vec<f64>> {
        self.check_point(q)?;
        self.check_hamiltonian(h)?;
        let mut grad = vec![0.0; self.n_params];
        for (i, slot) in self.slots.iter().enumerate() {
            if let GateSlot::Rotation { param, .. } = *slot {
                let m = q.get(param);
                let plus = self.energy_at(q, Some((i, (m + 1) & 3)), h)?;
                let minus = self.energy_at(q, Some((i, (m + 3) & 3)), h)?;
                grad[param] += (plus - minus) / 2.0;
            }
        }
        Ok(grad)
    }
}

fn check_layers(n_qubits: usize, depth: usize) -> Result<()> {
    if n_qubits < 2 {
        return Err(invalid(format!("layered ansatz needs at least 2 qubits, got {n_qubits}")));
    }
    if depth == 0 {
        return Err(invalid("depth must be at least 1"));
    }
    Ok(())
}

/// `RZ(mπ/2) ∝ {I, S, Z, Sdg}`; `RX = H·RZ·H`; `RY = S·RX·Sdg` (so `Sdg`
/// acts first); `RZZ = CX·(I⊗RZ)·CX`.
fn compile_rotation(axis: RotationAxis, a: usize, b: usize, m: u8, f: &mut impl FnMut(CliffordGate)) {
    let rz = match m & 3 {
        0 => return,
        1 => CliffordGate::s,
        2 => CliffordGate::z,
        _ => CliffordGate::sdg,
    };
    match axis {
        RotationAxis::RZ => f(rz(a)),
        RotationAxis::RX => {
            f(CliffordGate::h(a));
            f(rz(a));
            f(CliffordGate::h(a));
        }
        RotationAxis::RY => {
            f(CliffordGate::sdg(a));
            f(CliffordGate::h(a));
            f(rz(a));
            f(CliffordGate::h(a));
            f(CliffordGate::s(a));
        }
        RotationAxis::RZZ => {
            f(CliffordGate::cx(a, b));
            f(rz(b));
            f(CliffordGate::cx(a, b));
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SlotRecord {
    Fixed { kind: String, qubits: Vec<usize> },
    Rot { axis: String, qubits: Vec<usize>, param: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CustomFile {
    Bare(Vec<SlotRecord>),
    WithHeader {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n_qubits: Option<usize>,
        slots: Vec<SlotRecord>,
    },
}
