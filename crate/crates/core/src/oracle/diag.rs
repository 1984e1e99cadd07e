use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::pauli::Hamiltonian;

use super::StateVector;

/// Largest Hamiltonian the dense eigensolver accepts.
pub const DENSE_QUBIT_CAP: usize = 12;

fn check_cap(h: &Hamiltonian) -> Result<()> {
    if h.n_qubits() > DENSE_QUBIT_CAP {
        return Err(Error::QubitCap { n_qubits: h.n_qubits(), cap: DENSE_QUBIT_CAP, what: "exact diagonalization" });
    }
    Ok(())
}

/// Calls `f(row, col, value)` for every nonzero contribution of every term.
fn for_each_element(h: &Hamiltonian, mut f: impl FnMut(usize, usize, Complex64)) {
    let dim = 1usize << h.n_qubits();
    for t in h.terms() {
        let (x, z) = t.pauli.masks_u64();
        let (x, z) = (x as usize, z as usize);
        let y_phase = Complex64::new(0.0, 1.0).powu(t.pauli.y_count() as u32 % 4) * t.coeff;
        for b in 0..dim {
            let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            f(b ^ x, b, y_phase * sign);
        }
    }
}

fn real_matrix(h: &Hamiltonian) -> DMatrix<f64> {
    let dim = 1usize << h.n_qubits();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for_each_element(h, |r, c, v| m[(r, c)] += v.re);
    m
}

fn complex_matrix(h: &Hamiltonian) -> DMatrix<Complex64> {
    let dim = 1usize << h.n_qubits();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for_each_element(h, |r, c, v| m[(r, c)] += v);
    m
}

/// The `n_lowest` smallest eigenvalues of `h`, ascending.
///
/// Hamiltonians whose terms all carry an even number of `Y` letters are
/// real symmetric and go through the cheaper real solver.
pub fn exact_diagonalize(h: &Hamiltonian, n_lowest: usize) -> Result<Vec<f64>> {
    check_cap(h)?;
    let dim = 1usize << h.n_qubits();
    if n_lowest == 0 || n_lowest > dim {
        return Err(invalid(format!("n_lowest must be in 1..={dim}, got {n_lowest}")));
    }
    let mut values: Vec<f64> = if h.is_real() {
        real_matrix(h).symmetric_eigenvalues().iter().copied().collect()
    } else {
        complex_matrix(h).symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(f64::total_cmp);
    values.truncate(n_lowest);
    Ok(values)
}

/// Lowest eigenvalue with a normalized eigenvector. For degenerate ground
/// spaces the returned vector is an arbitrary member of that space.
pub fn ground_state(h: &Hamiltonian) -> Result<(f64, StateVector)> {
    check_cap(h)?;
    let n = h.n_qubits();
    let (energy, amps) = if h.is_real() {
        let eig = SymmetricEigen::new(real_matrix(h));
        let k = argmin(eig.eigenvalues.as_slice());
        (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().map(|&v| Complex64::new(v, 0.0)).collect())
    } else {
        let eig = SymmetricEigen::new(complex_matrix(h));
        let k = argmin(eig.eigenvalues.as_slice());
        (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
    };
    Ok((energy, StateVector::from_amplitudes(n, amps)?))
}

fn argmin(values: &[f64]) -> usize {
    values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).expect("nonempty spectrum")
}
