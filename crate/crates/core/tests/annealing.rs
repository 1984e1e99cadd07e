use stabinit_core::anneal::{anneal_run, trajectory_jsonl, AnnealConfig};
use stabinit_core::models::{tfim_hamiltonian, TfimParams};
use stabinit_core::oracle::exact_diagonalize;
use stabinit_core::{Ansatz, QuarterTurns};

// Exhaustive minimum of the n=4 REAL depth-1 lattice at J=1, g_x=g_z=0.5,
// computed independently with numpy dense matrices (256 points).
const REAL_D1_N4_MIN: f64 = -3.0;

fn tfim4() -> stabinit_core::Hamiltonian {
    tfim_hamiltonian(&TfimParams { n: 4, j: 1.0, gx: 0.5, gz: 0.5 }).unwrap()
}

fn exhaustive_min(a: &Ansatz, h: &stabinit_core::Hamiltonian) -> f64 {
    let n = a.n_params();
    (0..4u64.pow(n as u32))
        .map(|code| {
            let q = QuarterTurns::new((0..n).map(|i| ((code >> (2 * i)) & 3) as u8).collect()).unwrap();
            a.clifford_energy(&q, h).unwrap()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn exhaustive_minimum_matches_independent_oracle() {
    let a = Ansatz::real(4, 1).unwrap();
    assert!((exhaustive_min(&a, &tfim4()) - REAL_D1_N4_MIN).abs() < 1e-12);
}

#[test]
fn anneal_finds_lattice_minimum() {
    let (a, h) = (Ansatz::real(4, 1).unwrap(), tfim4());
    let hits = (0..10)
        .filter(|&seed| {
            let r = anneal_run(&a, &h, &AnnealConfig { max_iterations: 2000, ..AnnealConfig::with_seed(seed) }).unwrap();
            (r.best_energy - REAL_D1_N4_MIN).abs() < 1e-9
        })
        .count();
    assert!(hits >= 9, "{hits}/10");
}

#[test]
fn best_energy_is_reproducible_and_variational() {
    let h = tfim4();
    let ground = exact_diagonalize(&h, 1).unwrap()[0];
    let a = Ansatz::trotter(4, 2).unwrap();
    let cfg = AnnealConfig { max_iterations: 1500, beta: 4.0, record_trajectory: true, ..AnnealConfig::with_seed(21) };
    let r1 = anneal_run(&a, &h, &cfg).unwrap();
    let r2 = anneal_run(&a, &h, &cfg).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(trajectory_jsonl(r1.trajectory.as_ref().unwrap()), trajectory_jsonl(r2.trajectory.as_ref().unwrap()));
    assert_eq!(a.clifford_energy(&r1.best_point, &h).unwrap(), r1.best_energy);
    assert!(r1.best_energy >= ground - 1e-9);
    assert_eq!(r1.energy_evaluations, r1.iterations_run + 1 + r1.n_resets);
    let other = anneal_run(&a, &h, &AnnealConfig { seed: 22, ..cfg }).unwrap();
    assert_ne!(r1.trajectory, other.trajectory);
}
