//! Pauli strings in symplectic form and weighted sums of them.
//!
//! A [`PauliString`] stores one X bit and one Z bit per qubit, packed into
//! 64-bit words, plus a phase exponent `k` so that the operator is
//! `i^k · σ_0 ⊗ σ_1 ⊗ …` where the letter on qubit `j` is `I, X, Z, Y` for
//! `(x, z) = (0,0), (1,0), (0,1), (1,1)`. Letters are Hermitian, so a parsed
//! `Y` carries no stored phase; the `i` in `Y = iXZ` only shows up as a
//! phase when two strings are multiplied.
//!
//! Character `j` of a letter string addresses qubit `j`.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn words_for(n_qubits: usize) -> usize {
    n_qubits.div_ceil(64)
}

/// Exponent `g` (mod 4) with `σ(x1,z1)·σ(x2,z2) = i^g · σ(x1⊕x2, z1⊕z2)`.
///
/// Per qubit the cyclic products `XY, YZ, ZX` contribute `+i` and the
/// anti-cyclic ones `YX, ZY, XZ` contribute `-i`.
#[inline]
pub(crate) fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u8 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for w in 0..x1.len() {
        let (ax, az, bx, bz) = (x1[w], z1[w], x2[w], z2[w]);
        let a_x = ax & !az;
        let a_y = ax & az;
        let a_z = !ax & az;
        let b_x = bx & !bz;
        let b_y = bx & bz;
        let b_z = !bx & bz;
        plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones();
        minus += ((a_y & b_x) | (a_z & b_y) | (a_x & b_z)).count_ones();
    }
    ((plus + 3 * minus) % 4) as u8
}

/// Parity of the symplectic inner product.
#[inline]
pub(crate) fn anticommute_words(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> bool {
    let mut acc = 0u64;
    for w in 0..x1.len() {
        acc ^= (x1[w] & z2[w]) ^ (z1[w] & x2[w]);
    }
    acc.count_ones() & 1 == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    /// The identity on `n_qubits` qubits.
    pub fn identity(n_qubits: usize) -> Self {
        let words = words_for(n_qubits);
        PauliString { n_qubits, x: vec![0; words], z: vec![0; words], phase: 0 }
    }

    /// Parses a letter string over `{I, X, Y, Z}` of exactly `n_qubits`
    /// characters into a phase-free string.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let count = text.chars().count();
        if count != n_qubits {
            return Err(Error::PauliLength { expected: n_qubits, found: count });
        }
        let mut p = PauliString::identity(n_qubits);
        for (position, ch) in text.chars().enumerate() {
            let letter = PauliLetter::from_char(ch).ok_or(Error::InvalidPauliChar { ch, position })?;
            p.set(position, letter);
        }
        Ok(p)
    }

    /// Builds a phase-free string from `(qubit, letter)` pairs; unlisted qubits are `I`.
    pub fn from_sparse(n_qubits: usize, letters: &[(usize, PauliLetter)]) -> Result<Self> {
        let mut p = PauliString::identity(n_qubits);
        for &(q, letter) in letters {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            p.set(q, letter);
        }
        Ok(p)
    }

    pub(crate) fn from_parts(n_qubits: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        debug_assert_eq!(x.len(), words_for(n_qubits));
        PauliString { n_qubits, x, z, phase: phase & 3 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase_exp: u8) -> Self {
        self.phase = phase_exp & 3;
        self
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x_bit(q), self.z_bit(q))
    }

    pub fn set(&mut self, q: usize, letter: PauliLetter) {
        let (xb, zb) = letter.bits();
        let (w, b) = (q / 64, q % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    /// Letters without the phase prefix.
    pub fn letters(&self) -> String {
        (0..self.n_qubits).map(|q| self.letter(q).as_char()).collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn y_count(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(x, z)| (x & z).count_ones() as usize).sum()
    }

    /// True when every letter is `I` (phase ignored).
    pub fn is_identity_letters(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// True when no letter is `X` or `Y`.
    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|&q| self.x_bit(q) || self.z_bit(q)).collect()
    }

    /// Bit masks `(x, z)` for strings of at most 64 qubits, qubit `j` at bit `j`.
    pub(crate) fn masks_u64(&self) -> (u64, u64) {
        (self.x.first().copied().unwrap_or(0), self.z.first().copied().unwrap_or(0))
    }

    fn check_size(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(())
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_size(other)?;
        Ok(!anticommute_words(&self.x, &self.z, &other.x, &other.z))
    }

    /// The operator product `self · other`, with the phase carried exactly.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_size(other)?;
        let g = product_phase(&self.x, &self.z, &other.x, &other.z);
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        Ok(PauliString { n_qubits: self.n_qubits, x, z, phase: (self.phase + other.phase + g) & 3 })
    }

    /// Key used for duplicate detection: the bits, not the phase.
    fn bits_key(&self) -> (Vec<u64>, Vec<u64>) {
        (self.x.clone(), self.z.clone())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.letters())
    }
}

/// Parses a letter string; the qubit count is the string length.
impl std::str::FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::parse(s, s.chars().count())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub pauli: PauliString,
}

/// `H = Σ cᵢ Pᵢ` with real coefficients and phase-free, pairwise distinct strings.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl Hamiltonian {
    /// Builds a canonical Hamiltonian: duplicates merged (first occurrence
    /// keeps its position), exact zeros dropped.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("Hamiltonian needs at least one qubit".into()));
        }
        let mut index: HashMap<(Vec<u64>, Vec<u64>), usize> = HashMap::new();
        let mut merged: Vec<Term> = Vec::new();
        for (coeff, pauli) in terms {
            if pauli.n_qubits() != n_qubits {
                return Err(Error::SizeMismatch { expected: n_qubits, found: pauli.n_qubits() });
            }
            if pauli.phase_exp() != 0 {
                return Err(Error::NonZeroPhase(pauli.phase_exp()));
            }
            if !coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient {coeff}")));
            }
            match index.get(&pauli.bits_key()) {
                Some(&i) => merged[i].coeff += coeff,
                None => {
                    index.insert(pauli.bits_key(), merged.len());
                    merged.push(Term { coeff, pauli });
                }
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        Ok(Hamiltonian { n_qubits, terms: merged })
    }

    /// Parses the line-oriented `<coefficient> <letters>` format.
    pub fn parse<R: BufRead>(source: R) -> Result<Self> {
        Ok(parse_with_metadata(source)?.0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms that are not the identity; these are the `M` of the counting bound.
    pub fn non_identity_count(&self) -> usize {
        self.terms.iter().filter(|t| !t.pauli.is_identity_letters()).count()
    }

    /// Coefficient of the identity term, if any.
    pub fn constant(&self) -> f64 {
        self.terms.iter().filter(|t| t.pauli.is_identity_letters()).map(|t| t.coeff).sum()
    }

    /// True when every term has an even number of `Y` letters, i.e. the
    /// matrix in the computational basis is real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.pauli.y_count() % 2 == 0)
    }

    /// Serializes in the same format `parse` reads. Coefficients use the
    /// shortest round-tripping representation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&format!("{:?} {}\n", t.coeff, t.pauli.letters()));
        }
        out
    }
}

/// Parses a Hamiltonian file and returns `key=value` pairs found in `#` comment lines.
pub fn parse_with_metadata<R: BufRead>(source: R) -> Result<(Hamiltonian, Vec<(String, String)>)> {
    let mut metadata = Vec::new();
    let mut n_qubits: Option<usize> = None;
    let mut terms = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some((k, v)) = comment.trim().split_once('=') {
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let coeff_text = fields.next().unwrap_or_default();
        let letters = fields.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected `<coefficient> <pauli-letters>`".into(),
        })?;
        if fields.next().is_some() {
            return Err(Error::Parse { line: line_no, message: "trailing fields after Pauli string".into() });
        }
        let coeff: f64 = coeff_text.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("unparsable coefficient {coeff_text:?}"),
        })?;
        if !coeff.is_finite() {
            return Err(Error::Parse { line: line_no, message: format!("non-finite coefficient {coeff_text:?}") });
        }
        let len = letters.chars().count();
        let n = *n_qubits.get_or_insert(len);
        if len != n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("inconsistent string length {len}, expected {n}"),
            });
        }
        let pauli = PauliString::parse(letters, n).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        terms.push((coeff, pauli));
    }
    let n = n_qubits.ok_or(Error::EmptyHamiltonian)?;
    Ok((Hamiltonian::from_terms(n, terms)?, metadata))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Reference single-qubit table: σa·σb = i^g σc.
    fn letter_product(a: PauliLetter, b: PauliLetter) -> (u8, PauliLetter) {
        use PauliLetter::*;
        match (a, b) {
            (I, l) | (l, I) => (0, l),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    #[test]
    fn parse_maps_letters() {
        let s = PauliString::parse("ZI", 2).unwrap();
        assert!(!s.x_bit(0) && s.z_bit(0));
        assert!(!s.x_bit(1) && !s.z_bit(1));
        assert_eq!(s.phase_exp(), 0);
        assert_eq!(PauliString::parse("IIII", 4).unwrap(), PauliString::identity(4));
        assert!(matches!(PauliString::parse("ZA", 2), Err(Error::InvalidPauliChar { ch: 'A', position: 1 })));
        assert!(matches!(PauliString::parse("ZZZ", 2), Err(Error::PauliLength { .. })));
        let y = p("Y");
        assert!(y.x_bit(0) && y.z_bit(0) && y.phase_exp() == 0);
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("ZZI").commutes(&p("IZZ")).unwrap());
        assert!(p("X").commutes(&p("ZZ")).is_err());
    }

    #[test]
    fn multiply_examples() {
        let r = p("X").multiply(&p("Z")).unwrap();
        assert_eq!((r.letters().as_str(), r.phase_exp()), ("Y", 3));
        let r = p("X").multiply(&p("X")).unwrap();
        assert_eq!(r, PauliString::identity(1));
        let r = p("XI").multiply(&p("IZ")).unwrap();
        assert_eq!((r.letters().as_str(), r.phase_exp()), ("XZ", 0));
    }

    #[test]
    fn multiply_matches_letter_table() {
        use PauliLetter::*;
        for a in [I, X, Y, Z] {
            for b in [I, X, Y, Z] {
                let pa = PauliString::from_sparse(1, &[(0, a)]).unwrap();
                let pb = PauliString::from_sparse(1, &[(0, b)]).unwrap();
                let r = pa.multiply(&pb).unwrap();
                assert_eq!((r.phase_exp(), r.letter(0)), letter_product(a, b), "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn multiply_across_word_boundary() {
        let mut a = PauliString::identity(130);
        let mut b = PauliString::identity(130);
        a.set(0, PauliLetter::X);
        a.set(70, PauliLetter::Y);
        a.set(129, PauliLetter::Z);
        b.set(0, PauliLetter::Z);
        b.set(70, PauliLetter::Z);
        b.set(129, PauliLetter::X);
        // XZ -> -iY, YZ -> iX, ZX -> iY: total i^(3+1+1) = i
        let r = a.multiply(&b).unwrap();
        assert_eq!(r.phase_exp(), 1);
        assert_eq!(r.letter(0), PauliLetter::Y);
        assert_eq!(r.letter(70), PauliLetter::X);
        assert_eq!(r.letter(129), PauliLetter::Y);
        assert!(!a.commutes(&b).unwrap());
    }

    #[test]
    fn hamiltonian_parse_examples() {
        let h = Hamiltonian::parse("1.0 ZZ\n0.5 XI".as_bytes()).unwrap();
        assert_eq!((h.len(), h.n_qubits()), (2, 2));
        let h = Hamiltonian::parse("1.0 ZZ\n-1.0 ZZ".as_bytes()).unwrap();
        assert_eq!(h.len(), 0);
        match Hamiltonian::parse("0.5 ZZZ\n0.5 XI".as_bytes()) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hamiltonian_parse_errors_and_comments() {
        assert!(matches!(Hamiltonian::parse("".as_bytes()), Err(Error::EmptyHamiltonian)));
        assert!(matches!(Hamiltonian::parse("# only\n\n".as_bytes()), Err(Error::EmptyHamiltonian)));
        assert!(matches!(Hamiltonian::parse("abc ZZ".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Hamiltonian::parse("1.0 ZQ".as_bytes()), Err(Error::Parse { line: 1, .. })));
        let (h, meta) = parse_with_metadata("# molecule=h2\n\n  2.5e-1 XY\n-1E0 ZZ\n0.25 XY\n".as_bytes()).unwrap();
        assert_eq!(meta, vec![("molecule".to_string(), "h2".to_string())]);
        assert_eq!(h.len(), 2);
        assert_eq!(h.terms()[0].coeff, 0.5);
        assert_eq!(h.terms()[0].pauli.letters(), "XY");
    }

    #[test]
    fn text_round_trip() {
        let h = Hamiltonian::parse("0.1 XYZ\n-2 IIZ\n3e-5 YYI".as_bytes()).unwrap();
        let again = Hamiltonian::parse(h.to_text().as_bytes()).unwrap();
        assert_eq!(h, again);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        proptest::collection::vec(0u8..4, n).prop_map(move |v| {
            let letters: String = v.iter().map(|&k| ['I', 'X', 'Y', 'Z'][k as usize]).collect();
            PauliString::parse(&letters, n).unwrap()
        })
    }

    fn arb_triple() -> impl Strategy<Value = (PauliString, PauliString, PauliString)> {
        (1usize..=6).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
    }

    proptest! {
        #[test]
        fn commutation_is_symmetric((a, b, _) in arb_triple()) {
            prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
        }

        #[test]
        fn multiplication_is_associative((a, b, c) in arb_triple()) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn hermitian_strings_square_to_identity((a, _, _) in arb_triple()) {
            let sq = a.multiply(&a).unwrap();
            prop_assert!(sq.is_identity_letters());
            prop_assert_eq!(sq.phase_exp(), 0);
        }

        #[test]
        fn commutation_matches_product_phases((a, b, _) in arb_triple()) {
            let ab = a.multiply(&b).unwrap();
            let ba = b.multiply(&a).unwrap();
            prop_assert_eq!(a.commutes(&b).unwrap(), ab.phase_exp() == ba.phase_exp());
        }

        #[test]
        fn letters_round_trip(s in "[IXYZ]{1,80}") {
            let parsed: PauliString = s.parse().unwrap();
            prop_assert_eq!(parsed.letters(), s);
        }
    }
}
