use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabinit_core::oracle::{simulate_statevector, statevector_energy, StateVector};
use stabinit_core::{Ansatz, CliffordGate, GateKind, Hamiltonian, PauliLetter, PauliString, QuarterTurns, Tableau};

const KINDS: [GateKind; 8] =
    [GateKind::H, GateKind::S, GateKind::Sdg, GateKind::X, GateKind::Y, GateKind::Z, GateKind::CX, GateKind::CZ];

fn random_gate(n: usize, rng: &mut ChaCha8Rng) -> CliffordGate {
    loop {
        let kind = KINDS[rng.gen_range(0..KINDS.len())];
        if kind.arity() == 2 && n < 2 {
            continue;
        }
        let a = rng.gen_range(0..n);
        if kind.arity() == 1 {
            return CliffordGate::new(kind, &[a]).unwrap();
        }
        let b = rng.gen_range(0..n);
        if a != b {
            return CliffordGate::new(kind, &[a, b]).unwrap();
        }
    }
}

fn random_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliString {
    let letters: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect();
    letters.parse().unwrap()
}

#[test]
fn tableau_matches_statevector_on_random_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let gates: Vec<_> = (0..rng.gen_range(0..=60)).map(|_| random_gate(n, &mut rng)).collect();
        let t = Tableau::from_gates(n, &gates).unwrap();
        t.check_invariants().unwrap();
        let mut s = StateVector::zero_state(n).unwrap();
        for g in &gates {
            s.apply_clifford(g).unwrap();
        }
        for _ in 0..30 {
            let p = random_pauli(n, &mut rng);
            let exact = s.expectation(&p).unwrap();
            let stab = t.expectation(&p).unwrap();
            assert!((exact - f64::from(stab)).abs() < 1e-9, "{p}: {exact} vs {stab}");
        }
    }
}

fn same_state(a: &Tableau, b: &Tableau) -> bool {
    // Equal stabilizer groups iff every generator of one has ⟨P⟩ = +1 on the other.
    a.stabilizers().into_iter().all(|p| {
        let sign = if p.phase_exp() == 2 { -1 } else { 1 };
        b.expectation(&p.with_phase(0)).unwrap() == sign
    })
}

#[test]
fn gate_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let n = 3;
        let prep: Vec<_> = (0..20).map(|_| random_gate(n, &mut rng)).collect();
        let base = Tableau::from_gates(n, &prep).unwrap();
        let with = |extra: &[CliffordGate]| {
            let mut t = base.clone();
            for g in extra {
                t.apply(g).unwrap();
            }
            t
        };
        let (h, s, sdg) = (CliffordGate::h(1), CliffordGate::s(1), CliffordGate::sdg(1));
        assert!(same_state(&with(&[h.clone(), h.clone()]), &base));
        assert!(same_state(&with(&[s.clone(), sdg.clone()]), &base));
        assert!(same_state(&with(&[s.clone(), s.clone()]), &with(&[CliffordGate::z(1)])));
        assert!(same_state(&with(&[CliffordGate::cx(0, 2), CliffordGate::cx(0, 2)]), &base));
        // CZ = (I⊗H) CX (I⊗H)
        let hcxh = with(&[CliffordGate::h(2), CliffordGate::cx(0, 2), CliffordGate::h(2)]);
        assert!(same_state(&with(&[CliffordGate::cz(0, 2)]), &hcxh));
        assert!(same_state(&with(&[CliffordGate::cz(0, 2)]), &with(&[CliffordGate::cz(2, 0)])));
        // Y = iXZ, so up to phase Y·state = X·Z·state
        assert!(same_state(&with(&[CliffordGate::y(0)]), &with(&[CliffordGate::z(0), CliffordGate::x(0)])));
    }
}

#[test]
fn clifford_points_agree_with_statevector() {
    let h = stabinit_core::models::tfim_hamiltonian(&stabinit_core::models::TfimParams { n: 4, j: 1.0, gx: 0.7, gz: -0.3 })
        .unwrap();
    let ansatze = [Ansatz::real(4, 2).unwrap(), Ansatz::trotter(4, 2).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in &ansatze {
        for _ in 0..25 {
            let q = QuarterTurns::new((0..a.n_params()).map(|_| rng.gen_range(0..4u8)).collect()).unwrap();
            let stab = a.clifford_energy(&q, &h).unwrap();
            let exact = statevector_energy(a, &q.to_radians(), &h).unwrap();
            assert!((stab - exact).abs() < 1e-9, "{:?}: {stab} vs {exact}", a.family());
            let t = a.clifford_state(&q).unwrap();
            let s = simulate_statevector(a, &q.to_radians()).unwrap();
            for _ in 0..50 {
                let p = random_pauli(4, &mut rng);
                assert!((s.expectation(&p).unwrap() - f64::from(t.expectation(&p).unwrap())).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn qaoa_clifford_points_agree_with_statevector() {
    let h = Hamiltonian::parse("1 ZZI\n-2 IZZ\n1 ZIZ\n3 IIZ".as_bytes()).unwrap();
    let a = Ansatz::qaoa(&h, 2).unwrap();
    for code in 0..256u32 {
        let q = QuarterTurns::new((0..4).map(|i| ((code >> (2 * i)) & 3) as u8).collect()).unwrap();
        let stab = a.clifford_energy(&q, &h).unwrap();
        let exact = statevector_energy(&a, &q.to_radians(), &h).unwrap();
        assert!((stab - exact).abs() < 1e-9);
    }
}

#[test]
fn real_family_amplitudes_are_real() {
    let a = Ansatz::real(4, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let q = QuarterTurns::new((0..a.n_params()).map(|_| rng.gen_range(0..4u8)).collect()).unwrap();
        let s = simulate_statevector(&a, &q.to_radians()).unwrap();
        let lead = *s.amplitudes().iter().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
        let phase = lead.conj() / lead.norm();
        for amp in s.amplitudes() {
            assert!((amp * phase).im.abs() < 1e-9);
        }
    }
}

#[test]
fn two_pi_periodicity() {
    let h = stabinit_core::models::tfim_hamiltonian(&stabinit_core::models::TfimParams { n: 3, j: 1.0, gx: 0.5, gz: 0.5 })
        .unwrap();
    let a = Ansatz::trotter(3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let theta: Vec<f64> = (0..a.n_params()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let e = statevector_energy(&a, &theta, &h).unwrap();
        for i in 0..theta.len() {
            let mut shifted = theta.clone();
            shifted[i] += 2.0 * std::f64::consts::PI;
            assert!((statevector_energy(&a, &shifted, &h).unwrap() - e).abs() < 1e-10);
        }
    }
}

#[test]
fn word_boundary_pauli_letters() {
    // 130 qubits spans three u64 words; letters at the boundaries survive.
    let mut p = PauliString::identity(130);
    for (q, l) in [(63, PauliLetter::Y), (64, PauliLetter::X), (129, PauliLetter::Z)] {
        p.set(q, l);
    }
    let t = Tableau::from_gates(130, &[CliffordGate::h(64), CliffordGate::h(63), CliffordGate::s(63)]).unwrap();
    assert_eq!(t.expectation(&p).unwrap(), 1);
    assert_eq!(p.weight(), 3);
}
