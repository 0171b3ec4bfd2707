use camps_core::analysis::kramers_wannier_dual;
use camps_core::camps::{run, run_hamiltonian, CampsConfig};
use camps_core::clifford::GateSetMode;
use camps_core::diagnostics::{
    distinct_levels, fit_central_charge, normalize_spectrum, relative_energy_error,
};
use camps_core::exact::{exact_entanglement, exact_ground_state};
use camps_core::pauli::{build_model, Model};

fn config(model: Model, g: f64, length: usize, mode: GateSetMode) -> CampsConfig {
    CampsConfig {
        model,
        g,
        length,
        max_bond: 64,
        gate_mode: mode,
        ..CampsConfig::default()
    }
}

#[test]
fn energies_match_exact_diagonalization() {
    for (model, g) in [(Model::Ising, 1.0), (Model::Xxz, 0.5)] {
        let reference = exact_ground_state(&build_model(model, 10, g).unwrap())
            .unwrap()
            .energy;
        for mode in [GateSetMode::LocalRepresentatives, GateSetMode::IdentityOnly] {
            let r = run(&config(model, g, 10, mode)).unwrap();
            let err = relative_energy_error(r.energy, reference).unwrap();
            assert!(err < 1e-8, "{model:?} {mode}: {err:e}");
            assert!(r.energy >= reference - 1e-10);
        }
    }
}

#[test]
fn plain_dmrg_profile_matches_exact_entropies() {
    let h = build_model(Model::Ising, 12, 1.0).unwrap();
    let exact = exact_ground_state(&h).unwrap();
    let r = run(&config(Model::Ising, 1.0, 12, GateSetMode::IdentityOnly)).unwrap();
    assert!(r.circuit.is_empty());
    for p in 1..12 {
        let s = exact_entanglement(&exact, p).unwrap().entropy;
        assert!((r.profile[p - 1].entropy - s).abs() < 1e-8, "cut {p}");
    }
}

#[test]
fn camps_profile_is_the_exact_profile_of_the_conjugated_model() {
    let r = run(&config(
        Model::Ising,
        1.0,
        10,
        GateSetMode::LocalRepresentatives,
    ))
    .unwrap();
    let exact = exact_ground_state(&r.hamiltonian).unwrap();
    assert!(!exact.degenerate);
    for p in 1..10 {
        let s = exact_entanglement(&exact, p).unwrap().entropy;
        assert!((r.profile[p - 1].entropy - s).abs() < 1e-7, "cut {p}");
    }
    // the disentangled state is less entangled than the original one
    let plain = exact_ground_state(&build_model(Model::Ising, 10, 1.0).unwrap()).unwrap();
    assert!(r.profile[4].entropy < exact_entanglement(&plain, 5).unwrap().entropy - 0.2);
}

#[test]
fn custom_hamiltonian_runs_match() {
    let h = kramers_wannier_dual(8, 0.7).unwrap();
    let cfg = config(Model::Ising, 0.7, 8, GateSetMode::IdentityOnly);
    let r = run_hamiltonian(&h, &cfg).unwrap();
    let e = exact_ground_state(&h).unwrap().energy;
    assert!(relative_energy_error(r.energy, e).unwrap() < 1e-9);
    // the dual shares its spectrum with the Ising chain
    let ising = exact_ground_state(&build_model(Model::Ising, 8, 0.7).unwrap())
        .unwrap()
        .energy;
    assert!((e - ising).abs() < 1e-10);
}

#[test]
fn exact_entropies_give_ising_central_charge() {
    let points: Vec<(f64, f64)> = (6..=12)
        .step_by(2)
        .map(|l| {
            let s = exact_ground_state(&build_model(Model::Ising, l, 1.0).unwrap()).unwrap();
            (l as f64, exact_entanglement(&s, l / 2).unwrap().entropy)
        })
        .collect();
    let fit = fit_central_charge(&points).unwrap();
    assert!((0.4..=0.6).contains(&fit.c), "{fit:?}");
}

#[test]
fn dual_ground_state_shows_the_sigma_tower() {
    let exact = exact_ground_state(&kramers_wannier_dual(12, 1.0).unwrap()).unwrap();
    let spectrum = exact_entanglement(&exact, 6).unwrap().spectrum;
    let normalized = normalize_spectrum(&spectrum, 1.0 / 16.0, 1.0 + 1.0 / 16.0).unwrap();
    let levels = distinct_levels(&normalized, 1e-3);
    let target = 2.0 + 1.0 / 16.0;
    assert!((levels[2] - target).abs() < 0.25 * target, "{levels:?}");
}
