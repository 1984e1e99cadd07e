#!/usr/bin/env python3
"""Regenerate the bundled qubit Hamiltonian fixtures.

Requires pyscf and openfermion (not needed to build or test the Rust crates).
Each fixture is written to fixtures/<molecule>/<transform>/<geometry-tag>.ham
in the plain `<coefficient> <pauli-letters>` format, with provenance headers.
Qubit j of the Hamiltonian is spin-orbital j in OpenFermion's interleaved
(alpha, beta) ordering.

    python3 fixtures/generate.py            # everything
    python3 fixtures/generate.py h2         # one molecule
"""

import os
import sys

import numpy as np
import openfermion as of
from scipy.sparse.linalg import LinearOperator, eigsh
from openfermion.chem.molecular_data import spinorb_from_spatial
from pyscf import ao2mo, fci, gto, scf

ROOT = os.path.dirname(os.path.abspath(__file__))
BASIS = "sto-3g"
INTER_DIMER = 1.5  # angstrom, fixed spacing between H2 units in the chains


def h2(bond):
    return [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, bond))]


def hydrogen_chain(n_atoms, dimer):
    atoms = []
    z = 0.0
    for k in range(n_atoms // 2):
        atoms.append(("H", (0.0, 0.0, z)))
        atoms.append(("H", (0.0, 0.0, z + dimer)))
        z += dimer + INTER_DIMER
    return atoms


def water(bond, angle_deg):
    half = np.radians(angle_deg) / 2.0
    return [
        ("O", (0.0, 0.0, 0.0)),
        ("H", (bond * np.sin(half), 0.0, bond * np.cos(half))),
        ("H", (-bond * np.sin(half), 0.0, bond * np.cos(half))),
    ]


MOLECULES = {
    "h2": [(f"{b:.3f}", f"bond={b:.3f}A", h2(b)) for b in (0.5, 0.735, 1.0, 1.5, 2.0)],
    "h4": [
        (f"d{d:.2f}", f"dimer={d:.2f}A inter_dimer={INTER_DIMER:.2f}A", hydrogen_chain(4, d))
        for d in (0.6, 0.8, 1.0, 1.2)
    ],
    "h6": [
        (f"d{d:.2f}", f"dimer={d:.2f}A inter_dimer={INTER_DIMER:.2f}A", hydrogen_chain(6, d))
        for d in (0.6, 0.8, 1.0)
    ],
    "h8": [
        (f"d{d:.2f}", f"dimer={d:.2f}A inter_dimer={INTER_DIMER:.2f}A", hydrogen_chain(8, d))
        for d in (0.6, 0.8, 1.0)
    ],
    "h2o": [
        (f"r{r:.2f}_a{a:.1f}", f"oh={r:.2f}A hoh={a:.1f}deg", water(r, a))
        for (r, a) in ((0.96, 104.5), (1.2, 104.5), (0.96, 120.0))
    ],
}

TRANSFORMS = {
    "jw": lambda op, n: of.jordan_wigner(op),
    "bk": lambda op, n: of.bravyi_kitaev(op, n_qubits=n),
    "parity": lambda op, n: of.binary_code_transform(op, of.parity_code(n)),
}


def fermion_hamiltonian(atoms):
    mol = gto.M(atom=atoms, basis=BASIS, unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    mo = mf.mo_coeff
    nmo = mo.shape[1]
    h1 = mo.T @ mf.get_hcore() @ mo
    eri = ao2mo.restore(1, ao2mo.kernel(mol, mo), nmo)
    two_body = np.asarray(eri.transpose(0, 2, 3, 1), order="C")
    one_so, two_so = spinorb_from_spatial(h1, two_body)
    interaction = of.InteractionOperator(mol.energy_nuc(), one_so, 0.5 * two_so)
    e_fci = fci.FCI(mf).kernel()[0]
    return of.get_fermion_operator(interaction), 2 * nmo, e_fci


def ground_energy(qubit_op, n):
    """Lowest eigenvalue over the full 2^n space, applying terms matrix-free."""
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    terms = []
    for term, coeff in qubit_op.terms.items():
        xmask = zmask = ny = 0
        for q, p in term:
            if p in "XY":
                xmask |= 1 << q
            if p in "ZY":
                zmask |= 1 << q
            ny += p == "Y"
        terms.append((coeff * (1j ** ny), xmask, zmask))

    def matvec(v):
        v = np.asarray(v).ravel()
        out = np.zeros(dim, dtype=complex)
        for coeff, xmask, zmask in terms:
            masked = idx & zmask
            sign = np.ones(dim)
            for q in range(n):
                if (zmask >> q) & 1:
                    sign *= 1 - 2 * ((masked >> q) & 1)
            out[idx ^ xmask] += coeff * sign * v
        return out

    op = LinearOperator((dim, dim), matvec=matvec, dtype=complex)
    return float(eigsh(op, k=1, which="SA", tol=1e-12)[0][0].real)


def letters(term, n):
    out = ["I"] * n
    for q, p in term:
        out[q] = p
    return "".join(out)


def write_fixture(molecule, transform, tag, geometry, qubit_op, n, e_fci):
    qubit_op.compress(1e-12)
    if n <= 14:
        ground = of.get_ground_state(of.get_sparse_operator(qubit_op, n_qubits=n))[0]
    else:
        ground = ground_energy(qubit_op, n)
    path = os.path.join(ROOT, molecule, transform, f"{tag}.ham")
    os.makedirs(os.path.dirname(path), exist_ok=True)
    terms = sorted(qubit_op.terms.items(), key=lambda kv: letters(kv[0], n))
    with open(path, "w") as f:
        f.write(f"# molecule={molecule}\n")
        f.write(f"# transform={transform}\n")
        f.write(f"# geometry={geometry}\n")
        f.write(f"# basis={BASIS}\n")
        f.write(f"# n_qubits={n}\n")
        f.write(f"# ground_energy={ground:.12f}\n")
        f.write(f"# fci_energy={e_fci:.12f}\n")
        f.write("# generator=pyscf+openfermion (fixtures/generate.py)\n")
        for term, coeff in terms:
            if abs(coeff.imag) > 1e-9:
                raise ValueError(f"complex coefficient {coeff} in {path}")
            if abs(coeff.real) < 1e-12:
                continue
            f.write(f"{coeff.real:.15e} {letters(term, n)}\n")
    print(f"{path}: {len(terms)} terms, ground {ground:.8f}, fci {e_fci:.8f}")


def main():
    wanted = sys.argv[1:] or list(MOLECULES)
    for molecule in wanted:
        for tag, geometry, atoms in MOLECULES[molecule]:
            todo = [t for t in TRANSFORMS if not os.path.exists(os.path.join(ROOT, molecule, t, f"{tag}.ham"))]
            if not todo:
                continue
            fop, n, e_fci = fermion_hamiltonian(atoms)
            for transform in todo:
                fn = TRANSFORMS[transform]
                write_fixture(molecule, transform, tag, geometry, fn(fop, n), n, e_fci)


if __name__ == "__main__":
    main()
