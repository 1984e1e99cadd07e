//! Benchmark Hamiltonians: the open-chain transverse-field Ising model,
//! MAXCUT on integer-weighted graphs, and pre-transformed chemistry files.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pauli::{parse_with_metadata, Hamiltonian, PauliLetter, PauliString};

/// `H = J Σ Z_i Z_{i+1} + Σ (g_x X_i + g_z Z_i)` on an open chain of `n` sites.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfimParams {
    pub n: usize,
    pub j: f64,
    pub gx: f64,
    pub gz: f64,
}

pub fn tfim_hamiltonian(p: &TfimParams) -> Result<Hamiltonian> {
    if p.n < 2 {
        return Err(invalid(format!("TFIM chain needs at least 2 sites, got {}", p.n)));
    }
    let n = p.n;
    let mut terms = Vec::with_capacity(3 * n);
    let site = |letters: &[(usize, PauliLetter)]| PauliString::from_sparse(n, letters);
    if p.j != 0.0 {
        for i in 0..n - 1 {
            terms.push((p.j, site(&[(i, PauliLetter::Z), (i + 1, PauliLetter::Z)])?));
        }
    }
    if p.gx != 0.0 {
        for i in 0..n {
            terms.push((p.gx, site(&[(i, PauliLetter::X)])?));
        }
    }
    if p.gz != 0.0 {
        for i in 0..n {
            terms.push((p.gz, site(&[(i, PauliLetter::Z)])?));
        }
    }
    Hamiltonian::from_terms(n, terms)
}

/// Undirected graph with integer edge weights, stored with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self> {
        let mut out: Vec<(usize, usize, i64)> = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(invalid(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(invalid(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            let (i, j) = (a.min(b), a.max(b));
            if out.iter().any(|&(x, y, _)| (x, y) == (i, j)) {
                return Err(invalid(format!("duplicate edge ({i}, {j})")));
            }
            out.push((i, j, w));
        }
        Ok(Graph { n, edges: out })
    }

    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new(n, edges.iter().map(|&(a, b)| (a, b, 1)))
    }

    /// Edge list text: one `i j [w]` per line, `#` comments allowed. The
    /// vertex count is one more than the largest index seen.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || invalid(format!("graph line {}: expected `i j [weight]`", line_no + 1));
            if !(2..=3).contains(&fields.len()) {
                return Err(bad());
            }
            let a: usize = fields[0].parse().map_err(|_| bad())?;
            let b: usize = fields[1].parse().map_err(|_| bad())?;
            let w: i64 = match fields.get(2) {
                Some(s) => s.parse().map_err(|_| bad())?,
                None => 1,
            };
            edges.push((a, b, w));
        }
        let n = edges.iter().map(|&(a, b, _)| a.max(b) + 1).max().unwrap_or(0);
        Graph::new(n, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Total weight of edges whose endpoints differ; bit `i` of `assignment` is vertex `i`'s side.
    pub fn cut_value(&self, assignment: u64) -> i64 {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| ((assignment >> a) ^ (assignment >> b)) & 1 == 1)
            .map(|e| e.2)
            .sum()
    }
}

/// `Σ w_ij Z_i Z_j`; a cut of value `C` has energy `W − 2C`.
pub fn maxcut_hamiltonian(g: &Graph) -> Result<Hamiltonian> {
    if g.edges.is_empty() {
        return Err(invalid("MAXCUT graph has no edges"));
    }
    let terms = g
        .edges
        .iter()
        .map(|&(a, b, w)| Ok((w as f64, PauliString::from_sparse(g.n, &[(a, PauliLetter::Z), (b, PauliLetter::Z)])?)))
        .collect::<Result<Vec<_>>>()?;
    Hamiltonian::from_terms(g.n, terms)
}

/// Cut value implied by a MAXCUT energy.
pub fn cut_from_energy(g: &Graph, energy: f64) -> f64 {
    (g.total_weight() as f64 - energy) / 2.0
}

/// A Hamiltonian file together with its `# key=value` header lines.
#[derive(Clone, Debug)]
pub struct ChemistryFixture {
    pub path: PathBuf,
    pub hamiltonian: Hamiltonian,
    pub metadata: Vec<(String, String)>,
}

impl ChemistryFixture {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Ground energy recorded by the external generator, if present.
    pub fn header_ground_energy(&self) -> Option<f64> {
        self.meta("ground_energy").and_then(|v| v.parse().ok())
    }
}

pub fn load_chemistry_fixture(path: &Path) -> Result<ChemistryFixture> {
    let file = File::open(path)?;
    let (hamiltonian, metadata) = parse_with_metadata(BufReader::new(file))?;
    Ok(ChemistryFixture { path: path.to_path_buf(), hamiltonian, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(h: &Hamiltonian) -> Vec<(String, f64)> {
        h.terms().iter().map(|t| (t.pauli.letters(), t.coeff)).collect()
    }

    #[test]
    fn tfim_examples() {
        let h = tfim_hamiltonian(&TfimParams { n: 2, j: 1.0, gx: 0.0, gz: 0.0 }).unwrap();
        assert_eq!(letters(&h), vec![("ZZ".to_string(), 1.0)]);
        let h = tfim_hamiltonian(&TfimParams { n: 3, j: 1.0, gx: 0.5, gz: 0.25 }).unwrap();
        let expect = [
            ("ZZI", 1.0),
            ("IZZ", 1.0),
            ("XII", 0.5),
            ("IXI", 0.5),
            ("IIX", 0.5),
            ("ZII", 0.25),
            ("IZI", 0.25),
            ("IIZ", 0.25),
        ];
        assert_eq!(letters(&h), expect.iter().map(|(s, c)| (s.to_string(), *c)).collect::<Vec<_>>());
        assert!(tfim_hamiltonian(&TfimParams { n: 1, j: 1.0, gx: 0.0, gz: 0.0 }).is_err());
    }

    #[test]
    fn tfim_term_count_formula() {
        for n in 2..8 {
            for (j, gx, gz) in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (1.0, 2.0, 0.0), (1.0, 1.0, 1.0), (0.0, 0.0, 0.0)] {
                let h = tfim_hamiltonian(&TfimParams { n, j, gx, gz }).unwrap();
                let expected =
                    (n - 1) * (j != 0.0) as usize + n * (gx != 0.0) as usize + n * (gz != 0.0) as usize;
                assert_eq!(h.len(), expected);
            }
        }
    }

    #[test]
    fn fig7_hamiltonian() {
        let h = tfim_hamiltonian(&TfimParams { n: 9, j: 1.0, gx: 2.0, gz: 2.0 }).unwrap();
        assert_eq!(h.len(), 8 + 9 + 9);
        assert!(h.terms().iter().filter(|t| t.pauli.weight() == 1).all(|t| t.coeff == 2.0));
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::unweighted(3, &[(0, 0)]).is_err());
        assert!(Graph::unweighted(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::unweighted(2, &[(0, 2)]).is_err());
        let g = Graph::parse("# triangle\n0 1\n1 2 2\n0 2\n").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1, 1), (1, 2, 2), (0, 2, 1)]);
        assert!(Graph::parse("0 x").is_err());
        assert!(maxcut_hamiltonian(&Graph::new(2, []).unwrap()).is_err());
    }

    fn brute_min(h: &Hamiltonian) -> f64 {
        let n = h.n_qubits();
        (0..1u64 << n)
            .map(|b| {
                h.terms()
                    .iter()
                    .map(|t| {
                        let (_, z) = t.pauli.masks_u64();
                        t.coeff * if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 }
                    })
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn maxcut_examples() {
        let tri = maxcut_hamiltonian(&Graph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()).unwrap();
        assert_eq!(tri.len(), 3);
        assert_eq!(brute_min(&tri), -1.0);
        let edge = maxcut_hamiltonian(&Graph::unweighted(2, &[(0, 1)]).unwrap()).unwrap();
        assert_eq!(brute_min(&edge), -1.0);
        let square = maxcut_hamiltonian(&Graph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()).unwrap();
        assert_eq!(brute_min(&square), -4.0);
    }

    #[test]
    fn maxcut_energy_matches_cut_counting() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(2..=10usize);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((a, b, rng.gen_range(1..4i64)));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Graph::new(n, edges).unwrap();
            let h = maxcut_hamiltonian(&g).unwrap();
            for assignment in 0..1u64 << n {
                let energy: f64 = h
                    .terms()
                    .iter()
                    .map(|t| {
                        let (_, z) = t.pauli.masks_u64();
                        t.coeff * if (assignment & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 }
                    })
                    .sum();
                let cut = g.cut_value(assignment) as f64;
                assert_eq!(cut_from_energy(&g, energy), cut);
            }
        }
    }
}
