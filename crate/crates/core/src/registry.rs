//! Name-keyed registries for ansatz families and model Hamiltonians.
//!
//! Both are trait objects so a front end can list what is available and
//! select by string, e.g. `--ansatz trotter` or `--model tfim`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::ansatz::Ansatz;
use crate::error::{invalid, Error, Result};
use crate::models::{maxcut_hamiltonian, tfim_hamiltonian, Graph, TfimParams};
use crate::pauli::Hamiltonian;

/// Everything an ansatz builder may look at.
#[derive(Clone, Copy, Debug)]
pub struct AnsatzRequest<'a> {
    pub hamiltonian: &'a Hamiltonian,
    pub depth: usize,
    /// Argument after the colon in `name:arg` (e.g. a file for `custom`).
    pub arg: Option<&'a str>,
}

pub trait AnsatzBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, req: &AnsatzRequest<'_>) -> Result<Ansatz>;
}

struct RealBuilder;
struct TrotterBuilder;
struct QaoaBuilder;
struct CustomBuilder;

fn no_arg(name: &str, req: &AnsatzRequest<'_>) -> Result<()> {
    match req.arg {
        Some(a) => Err(invalid(format!("ansatz `{name}` takes no argument, got `{a}`"))),
        None => Ok(()),
    }
}

impl AnsatzBuilder for RealBuilder {
    fn name(&self) -> &'static str {
        "real"
    }
    fn build(&self, req: &AnsatzRequest<'_>) -> Result<Ansatz> {
        no_arg(self.name(), req)?;
        Ansatz::real(req.hamiltonian.n_qubits(), req.depth)
    }
}

impl AnsatzBuilder for TrotterBuilder {
    fn name(&self) -> &'static str {
        "trotter"
    }
    fn build(&self, req: &AnsatzRequest<'_>) -> Result<Ansatz> {
        no_arg(self.name(), req)?;
        Ansatz::trotter(req.hamiltonian.n_qubits(), req.depth)
    }
}

impl AnsatzBuilder for QaoaBuilder {
    fn name(&self) -> &'static str {
        "qaoa"
    }
    fn build(&self, req: &AnsatzRequest<'_>) -> Result<Ansatz> {
        no_arg(self.name(), req)?;
        Ansatz::qaoa(req.hamiltonian, req.depth)
    }
}

impl AnsatzBuilder for CustomBuilder {
    fn name(&self) -> &'static str {
        "custom"
    }
    fn build(&self, req: &AnsatzRequest<'_>) -> Result<Ansatz> {
        let path = req.arg.ok_or_else(|| invalid("ansatz `custom` needs a file: custom:<path>"))?;
        let a = Ansatz::from_json_file(Path::new(path))?;
        if a.n_qubits() != req.hamiltonian.n_qubits() {
            return Err(Error::SizeMismatch { expected: req.hamiltonian.n_qubits(), found: a.n_qubits() });
        }
        Ok(a)
    }
}

pub struct AnsatzRegistry {
    builders: BTreeMap<&'static str, Box<dyn AnsatzBuilder>>,
}

impl AnsatzRegistry {
    pub fn empty() -> Self {
        AnsatzRegistry { builders: BTreeMap::new() }
    }

    pub fn register(&mut self, b: Box<dyn AnsatzBuilder>) {
        self.builders.insert(b.name(), b);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.builders.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn AnsatzBuilder> {
        self.builders.get(name).map(|b| b.as_ref()).ok_or_else(|| Error::UnknownStrategy {
            kind: "ansatz",
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    /// Builds from a selector such as `trotter` or `custom:gates.json`.
    pub fn build(&self, selector: &str, hamiltonian: &Hamiltonian, depth: usize) -> Result<Ansatz> {
        let (name, arg) = match selector.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (selector, None),
        };
        self.get(name)?.build(&AnsatzRequest { hamiltonian, depth, arg })
    }
}

impl Default for AnsatzRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(RealBuilder));
        r.register(Box::new(TrotterBuilder));
        r.register(Box::new(QaoaBuilder));
        r.register(Box::new(CustomBuilder));
        r
    }
}

/// Parameters a model builder may read; unused fields are ignored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelRequest {
    pub n: Option<usize>,
    pub j: f64,
    pub gx: f64,
    pub gz: f64,
    pub graph: Option<PathBuf>,
}

pub trait ModelBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, req: &ModelRequest) -> Result<Hamiltonian>;
}

struct TfimBuilder;
struct MaxcutBuilder;

impl ModelBuilder for TfimBuilder {
    fn name(&self) -> &'static str {
        "tfim"
    }
    fn build(&self, req: &ModelRequest) -> Result<Hamiltonian> {
        let n = req.n.ok_or_else(|| invalid("model `tfim` needs --n"))?;
        tfim_hamiltonian(&TfimParams { n, j: req.j, gx: req.gx, gz: req.gz })
    }
}

impl ModelBuilder for MaxcutBuilder {
    fn name(&self) -> &'static str {
        "maxcut"
    }
    fn build(&self, req: &ModelRequest) -> Result<Hamiltonian> {
        let path = req.graph.as_ref().ok_or_else(|| invalid("model `maxcut` needs --graph <file>"))?;
        let g = Graph::parse(&std::fs::read_to_string(path)?)?;
        if let Some(n) = req.n {
            if n != g.n_vertices() {
                return Err(Error::SizeMismatch { expected: n, found: g.n_vertices() });
            }
        }
        maxcut_hamiltonian(&g)
    }
}

pub struct ModelRegistry {
    builders: BTreeMap<&'static str, Box<dyn ModelBuilder>>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry { builders: BTreeMap::new() }
    }

    pub fn register(&mut self, b: Box<dyn ModelBuilder>) {
        self.builders.insert(b.name(), b);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.builders.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn ModelBuilder> {
        self.builders.get(name).map(|b| b.as_ref()).ok_or_else(|| Error::UnknownStrategy {
            kind: "model",
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn build(&self, name: &str, req: &ModelRequest) -> Result<Hamiltonian> {
        self.get(name)?.build(req)
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(TfimBuilder));
        r.register(Box::new(MaxcutBuilder));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzFamily;

    #[test]
    fn ansatz_lookup() {
        let reg = AnsatzRegistry::default();
        assert_eq!(reg.names(), vec!["custom", "qaoa", "real", "trotter"]);
        let h = Hamiltonian::parse("1 ZZI\n1 IZZ".as_bytes()).unwrap();
        let a = reg.build("trotter", &h, 2).unwrap();
        assert_eq!((a.family(), a.n_params()), (AnsatzFamily::Trotter, 16));
        assert_eq!(reg.build("real", &h, 1).unwrap().n_params(), 3);
        assert_eq!(reg.build("qaoa", &h, 1).unwrap().family(), AnsatzFamily::Qaoa);
        assert!(matches!(reg.build("hea", &h, 1), Err(Error::UnknownStrategy { .. })));
        assert!(reg.build("custom", &h, 1).is_err());
        assert!(reg.build("real:x", &h, 1).is_err());
    }

    #[test]
    fn model_lookup() {
        let reg = ModelRegistry::default();
        assert_eq!(reg.names(), vec!["maxcut", "tfim"]);
        let req = ModelRequest { n: Some(3), j: 1.0, gx: 0.5, gz: 0.25, graph: None };
        assert_eq!(reg.build("tfim", &req).unwrap().len(), 8);
        assert!(reg.build("maxcut", &req).is_err());
        assert!(reg.build("heisenberg", &req).is_err());
        assert!(reg.build("tfim", &ModelRequest::default()).is_err());
    }
}
