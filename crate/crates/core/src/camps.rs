//! Two-site DMRG with Clifford disentanglers inserted before each truncation.
//!
//! At every bond the two-site ground tensor Θ is found, the gate `U` that
//! minimizes the entanglement of `U·Θ` across the bond is chosen, and the
//! Hamiltonian is conjugated `H → U H U†` so that the represented state
//! `U†|φ⟩` and the energy are unchanged. The gates accumulate into a circuit
//! `C` with `|ψ⟩ = C†|φ⟩`.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, Array3, Array4, Axis};
use rayon::prelude::*;

use crate::clifford::{CliffordTableau, GateSet, GateSetMode};
use crate::engine::{
    compile_mpo, entanglement_profile, expectation, Direction, EntanglementData, LanczosOptions,
    MpsState, SweepEngine,
};
use crate::error::{argument, Error, Result};
use crate::format::{fmt12, Table};
use crate::linalg::{dense_eigvalsh, normalized_probabilities, von_neumann_entropy, Standard};
use crate::pauli::{build_model, Model, PauliString, PauliSum};
use crate::C64;

/// Entropy margin by which a gate must beat the identity.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Settings for one ground-state run.
#[derive(Clone, Debug, PartialEq)]
pub struct CampsConfig {
    pub model: Model,
    pub g: f64,
    pub length: usize,
    pub max_bond: usize,
    /// Relative singular-value cutoff.
    pub cutoff: f64,
    pub max_sweeps: usize,
    /// Lanczos residual tolerance.
    pub eigen_tol: f64,
    pub eigen_max_iterations: usize,
    /// Sweep-to-sweep energy change that counts as converged.
    pub energy_tol: f64,
    pub gate_mode: GateSetMode,
    /// Plain DMRG sweeps before the gate search starts.
    pub warmup_sweeps: usize,
    /// Number of sweeps, after warm-up, in which gates are searched.
    pub gate_search_sweeps: usize,
    pub seed: u64,
}

impl Default for CampsConfig {
    fn default() -> Self {
        Self {
            model: Model::Ising,
            g: 1.0,
            length: 16,
            max_bond: 64,
            cutoff: 1e-10,
            max_sweeps: 100,
            eigen_tol: 1e-9,
            eigen_max_iterations: 200,
            energy_tol: 1e-10,
            gate_mode: GateSetMode::LocalRepresentatives,
            warmup_sweeps: 4,
            gate_search_sweeps: 64,
            seed: 1,
        }
    }
}

impl CampsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return argument("length must be at least 2");
        }
        if self.max_bond == 0 {
            return argument("max_bond must be positive");
        }
        for (name, v) in [
            ("cutoff", self.cutoff),
            ("eigen_tol", self.eigen_tol),
            ("energy_tol", self.energy_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return argument(format!("{name} must be positive, got {v}"));
            }
        }
        if self.max_sweeps == 0 {
            return argument("max_sweeps must be positive");
        }
        Ok(())
    }

    fn lanczos(&self) -> LanczosOptions {
        LanczosOptions {
            tol: self.eigen_tol,
            max_iterations: self.eigen_max_iterations,
            ..LanczosOptions::default()
        }
    }
}

/// One accepted non-identity gate.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitEntry {
    pub sweep: usize,
    /// Cut index: the gate acts on sites `bond` and `bond + 1` (1-based).
    pub bond: usize,
    pub gate: CliffordTableau,
    pub entropy_before: f64,
    pub entropy_after: f64,
}

impl fmt::Display for CircuitEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sweep={} bond={} gate={} S_before={} S_after={}",
            self.sweep,
            self.bond,
            self.gate.encode(),
            fmt12(self.entropy_before),
            fmt12(self.entropy_after)
        )
    }
}

impl FromStr for CircuitEntry {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse {
            line: 0,
            message: m,
        };
        let mut fields = std::collections::HashMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("field {tok:?} lacks '='")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| bad(format!("missing field {k}")))
        };
        let num =
            |k: &str| -> Result<f64> { get(k)?.parse().map_err(|e| bad(format!("{k}: {e}"))) };
        let int =
            |k: &str| -> Result<usize> { get(k)?.parse().map_err(|e| bad(format!("{k}: {e}"))) };
        Ok(Self {
            sweep: int("sweep")?,
            bond: int("bond")?,
            gate: get("gate")?.parse()?,
            entropy_before: num("S_before")?,
            entropy_after: num("S_after")?,
        })
    }
}

/// Ordered record of accepted gates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircuitLog {
    pub entries: Vec<CircuitEntry>,
}

impl CircuitLog {
    pub fn to_text(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }

    /// Parses one entry per line; blank lines and `#` lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            entries.push(line.parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    line: i + 1,
                    message,
                },
                other => Error::Parse {
                    line: i + 1,
                    message: other.to_string(),
                },
            })?);
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Summary of one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub sweep: usize,
    /// Ritz energy of the last bond update.
    pub energy: f64,
    pub max_discarded_weight: f64,
    pub gates_accepted: usize,
    pub gate_search: bool,
}

#[derive(Clone, Debug)]
pub struct CampsResult {
    /// `⟨φ|H'|φ⟩` of the final MPS against the conjugated Hamiltonian.
    pub energy: f64,
    /// The disentangled factor `|φ⟩`.
    pub mps: MpsState,
    /// `H' = C H C†`.
    pub hamiltonian: PauliSum,
    pub circuit: CircuitLog,
    pub history: Vec<SweepRecord>,
    /// Entanglement of `|φ⟩` at every cut.
    pub profile: Vec<EntanglementData>,
    pub converged: bool,
}

impl CampsResult {
    pub fn sweeps(&self) -> usize {
        self.history.len()
    }

    /// Key-value summary: energy, sweeps, bond dimension and the entropy at
    /// every cut.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k}={v}\n"));
        line("energy", fmt12(self.energy));
        line("sweeps", self.sweeps().to_string());
        line("converged", self.converged.to_string());
        line("max_bond", self.mps.max_bond().to_string());
        line(
            "bond_dims",
            format!("{:?}", self.mps.bond_dims()).replace(' ', ""),
        );
        line("gates", self.circuit.len().to_string());
        line("hamiltonian_terms", self.hamiltonian.len().to_string());
        for e in &self.profile {
            line(&format!("S_{}", e.cut), fmt12(e.entropy));
        }
        out
    }

    /// `cut<TAB>S` rows.
    pub fn profile_table(&self) -> Table {
        let mut t = Table::new();
        t.header("cut\tS");
        for e in &self.profile {
            t.row([e.cut.to_string(), fmt12(e.entropy)]);
        }
        t
    }
}

/// The winner of a disentangler search.
#[derive(Clone, Debug)]
pub struct Disentangler {
    pub gate: CliffordTableau,
    /// `U·Θ`.
    pub theta: Array4<C64>,
    pub entropy: f64,
    /// Entropy of `Θ` itself.
    pub entropy_before: f64,
}

/// Candidate gates with their unitaries, prepared once per run.
#[derive(Clone, Debug)]
pub struct GateSearch {
    gates: Vec<CliffordTableau>,
    unitaries: Vec<Array2<C64>>,
    identity: usize,
}

impl GateSearch {
    pub fn new(gates: &GateSet) -> Result<Self> {
        if gates.is_empty() {
            return argument("empty gate set");
        }
        let mut sorted = gates.tableaux.clone();
        sorted.push(CliffordTableau::identity());
        sorted.sort_by_key(|t| (t.entangling_class(), *t));
        sorted.dedup();
        let identity = sorted
            .iter()
            .position(|t| t.is_identity())
            .expect("inserted");
        let unitaries = sorted
            .iter()
            .map(|t| t.to_unitary())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            gates: sorted,
            unitaries,
            identity,
        })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Entropy across the central cut of `U·Θ` for every candidate, in
    /// candidate order.
    pub fn entropies(&self, theta: &Array4<C64>) -> Result<Vec<f64>> {
        let grams = Grams::new(theta);
        self.unitaries
            .par_iter()
            .map(|u| grams.entropy(u))
            .collect::<Result<Vec<_>>>()
    }

    /// Lowest-entropy candidate. Within [`TIE_TOLERANCE`] the identity wins
    /// ties, then the least entangling class, then the least tableau.
    pub fn select(&self, theta: &Array4<C64>) -> Result<Disentangler> {
        let entropies = self.entropies(theta)?;
        let before = entropies[self.identity];
        let min = entropies.iter().copied().fold(f64::INFINITY, f64::min);
        let winner = if min >= before - TIE_TOLERANCE {
            self.identity
        } else {
            (0..self.gates.len())
                .find(|&i| entropies[i] <= min + TIE_TOLERANCE)
                .expect("minimum is attained")
        };
        Ok(Disentangler {
            gate: self.gates[winner],
            theta: apply_gate(theta, &self.unitaries[winner]),
            entropy: entropies[winner],
            entropy_before: before,
        })
    }
}

/// The 16 blocks `Θ_s Θ_t†` (or their right-side analogue) from which the
/// reduced density matrix of any gated tensor is a linear combination.
struct Grams {
    blocks: Vec<Array2<C64>>,
    left_side: bool,
    dim: usize,
}

impl Grams {
    fn new(theta: &Array4<C64>) -> Self {
        let (dl, _, _, dr) = theta.dim();
        let t3 = theta
            .clone()
            .standard()
            .into_shape_with_order((dl, 4, dr))
            .expect("reshape");
        let slices: Vec<_> = (0..4).map(|s| t3.index_axis(Axis(1), s)).collect();
        let left_side = dl <= dr;
        let mut blocks = Vec::with_capacity(16);
        for s in 0..4 {
            for t in 0..4 {
                blocks.push(if left_side {
                    slices[s].dot(&slices[t].t().mapv(|z| z.conj()))
                } else {
                    slices[s].t().dot(&slices[t].mapv(|z| z.conj()))
                });
            }
        }
        Self {
            blocks,
            left_side,
            dim: if left_side { dl } else { dr },
        }
    }

    fn entropy(&self, u: &Array2<C64>) -> Result<f64> {
        let d = self.dim;
        let mut rho = Array2::<C64>::zeros((2 * d, 2 * d));
        for a in 0..2 {
            for a2 in 0..2 {
                let mut block =
                    rho.slice_mut(ndarray::s![a * d..(a + 1) * d, a2 * d..(a2 + 1) * d]);
                for s in 0..4 {
                    for t in 0..4 {
                        let mut c = C64::new(0.0, 0.0);
                        for other in 0..2 {
                            let (row, row2) = if self.left_side {
                                (2 * a + other, 2 * a2 + other)
                            } else {
                                (2 * other + a, 2 * other + a2)
                            };
                            c += u[(row, s)] * u[(row2, t)].conj();
                        }
                        if c.norm() > 1e-15 {
                            block.scaled_add(c, &self.blocks[4 * s + t]);
                        }
                    }
                }
            }
        }
        let probs = normalized_probabilities(dense_eigvalsh(&rho)?);
        Ok(von_neumann_entropy(&probs))
    }
}

/// `U·Θ` with `U` acting on the two physical legs (site `j` most significant).
pub fn apply_gate(theta: &Array4<C64>, u: &Array2<C64>) -> Array4<C64> {
    let (dl, _, _, dr) = theta.dim();
    let t3 = theta
        .clone()
        .standard()
        .into_shape_with_order((dl, 4, dr))
        .expect("reshape");
    let mut out = Array3::<C64>::zeros((dl, 4, dr));
    for s2 in 0..4 {
        let mut target = out.index_axis_mut(Axis(1), s2);
        for s in 0..4 {
            let c = u[(s2, s)];
            if c.norm() > 0.0 {
                target.scaled_add(c, &t3.index_axis(Axis(1), s));
            }
        }
    }
    out.into_shape_with_order((dl, 2, 2, dr)).expect("reshape")
}

/// Minimum-entropy gate for `theta` among `gates`.
pub fn select_disentangler(theta: &Array4<C64>, gates: &GateSet) -> Result<Disentangler> {
    GateSearch::new(gates)?.select(theta)
}

/// `U H U†` with the gate on sites `bond`, `bond + 1` (1-based), canonicalized.
pub fn apply_disentangler(h: &PauliSum, gate: &CliffordTableau, bond: usize) -> Result<PauliSum> {
    let n = h.n_sites();
    if bond == 0 || bond >= n {
        return argument(format!("bond {bond} out of range for {n} sites"));
    }
    if gate.is_identity() {
        return Ok(h.canonical_form());
    }
    let (j, k) = (bond - 1, bond);
    let mut out = PauliSum::new(n);
    for term in h.terms() {
        let (a, b) = (term.string.get(j), term.string.get(k));
        let (c, d, phase) = gate.conjugate_letters(a, b);
        let mut s: PauliString = term.string.clone();
        s.set(j, c);
        s.set(k, d);
        let coefficient = match phase {
            0 => term.coefficient,
            2 => -term.coefficient,
            _ => {
                return Err(Error::InvalidTableau(
                    "conjugation produced a non-Hermitian term".into(),
                ))
            }
        };
        out.push(coefficient, s)?;
    }
    Ok(out.canonical_form())
}

/// Runs the configured model.
pub fn run(config: &CampsConfig) -> Result<CampsResult> {
    config.validate()?;
    let h = build_model(config.model, config.length, config.g)?;
    run_hamiltonian(&h, config)
}

/// Runs the sweep on an arbitrary Hamiltonian; `config.model`, `g` and
/// `length` are ignored.
pub fn run_hamiltonian(h: &PauliSum, config: &CampsConfig) -> Result<CampsResult> {
    config.validate()?;
    let n = h.n_sites();
    if n < 2 {
        return argument("sweeps need at least two sites");
    }
    let mut h = h.canonical_form();
    let search = match config.gate_mode {
        GateSetMode::IdentityOnly => None,
        mode => Some(GateSearch::new(&GateSet::for_mode(mode))?),
    };
    let mps = MpsState::random_product(n, config.max_bond, config.seed)?;
    let mut engine = SweepEngine::new(mps, compile_mpo(&h), config.lanczos(), config.cutoff)?;

    let mut circuit = CircuitLog::default();
    let mut history: Vec<SweepRecord> = Vec::new();
    let mut searching = false;
    let mut converged = false;

    for sweep in 0..config.max_sweeps {
        let direction = if sweep % 2 == 0 {
            Direction::Right
        } else {
            Direction::Left
        };
        let bonds: Vec<usize> = match direction {
            Direction::Right => (0..n - 1).collect(),
            Direction::Left => (0..n - 1).rev().collect(),
        };
        if sweep == config.warmup_sweeps && search.is_some() && config.gate_search_sweeps > 0 {
            searching = true;
        }
        let mut record = SweepRecord {
            sweep,
            energy: f64::NAN,
            max_discarded_weight: 0.0,
            gates_accepted: 0,
            gate_search: searching,
        };
        for j in bonds {
            let sol = engine.solve_pair(j)?;
            record.energy = sol.energy;
            let mut theta = sol.theta;
            if let (true, Some(search)) = (searching, search.as_ref()) {
                let pick = search.select(&theta)?;
                if !pick.gate.is_identity() {
                    h = apply_disentangler(&h, &pick.gate, j + 1)?;
                    engine.replace_mpo(compile_mpo(&h), j)?;
                    circuit.entries.push(CircuitEntry {
                        sweep,
                        bond: j + 1,
                        gate: pick.gate,
                        entropy_before: pick.entropy_before,
                        entropy_after: pick.entropy,
                    });
                    record.gates_accepted += 1;
                    theta = pick.theta;
                }
            }
            let t = engine.commit_pair(j, &theta, direction)?;
            record.max_discarded_weight = record.max_discarded_weight.max(t.discarded_weight);
        }
        let previous = history.last().map(|r| r.energy);
        let was_searching = searching;
        if searching
            && (record.gates_accepted == 0
                || sweep + 1 >= config.warmup_sweeps + config.gate_search_sweeps)
        {
            searching = false;
        }
        history.push(record);
        if !was_searching && sweep >= config.warmup_sweeps {
            if let Some(prev) = previous {
                let last = history.last().expect("pushed").energy;
                if (last - prev).abs() < config.energy_tol {
                    converged = true;
                    break;
                }
            }
        }
    }

    let (mut mps, mpo) = engine.into_parts();
    mps.normalize()?;
    let energy = expectation(&mps, &mpo)?;
    let profile = entanglement_profile(&mps)?;
    Ok(CampsResult {
        energy,
        mps,
        hamiltonian: h,
        circuit,
        history,
        profile,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::enumerate_two_qubit_cliffords;
    use crate::exact::exact_ground_state;
    use crate::linalg::singular_values;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn theta_from(v: [f64; 4]) -> Array4<C64> {
        Array4::from_shape_vec((1, 2, 2, 1), v.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap()
    }

    fn svd_entropy(theta: &Array4<C64>) -> f64 {
        let (dl, _, _, dr) = theta.dim();
        let m = theta
            .clone()
            .into_shape_with_order((dl * 2, 2 * dr))
            .unwrap();
        let s = singular_values(&m.view()).unwrap();
        von_neumann_entropy(&normalized_probabilities(s.iter().map(|x| x * x)))
    }

    fn random_theta(dl: usize, dr: usize, seed: u64) -> Array4<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Array4::from_shape_fn((dl, 2, 2, dr), |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let n = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        t / C64::new(n, 0.0)
    }

    #[test]
    fn product_state_keeps_identity() {
        let gates = GateSet::for_mode(GateSetMode::LocalRepresentatives);
        let d = select_disentangler(&theta_from([1.0, 0.0, 0.0, 0.0]), &gates).unwrap();
        assert!(d.gate.is_identity());
        assert!(d.entropy.abs() < 1e-14);
    }

    #[test]
    fn singlet_is_disentangled() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = theta_from([0.0, h, -h, 0.0]);
        for mode in [GateSetMode::FullGroup, GateSetMode::LocalRepresentatives] {
            let d = select_disentangler(&singlet, &GateSet::for_mode(mode)).unwrap();
            assert!((d.entropy_before - 2f64.ln()).abs() < 1e-12);
            assert!(d.entropy.abs() < 1e-12);
            assert!(svd_entropy(&d.theta) < 1e-12);
        }
    }

    #[test]
    fn gram_entropy_matches_svd_for_both_sides() {
        let search = GateSearch::new(&enumerate_two_qubit_cliffords()).unwrap();
        for (dl, dr, seed) in [(3, 5, 1), (5, 3, 2), (1, 1, 3)] {
            let theta = random_theta(dl, dr, seed);
            let e = search.entropies(&theta).unwrap();
            for i in (0..search.len()).step_by(397) {
                let direct = svd_entropy(&apply_gate(&theta, &search.unitaries[i]));
                assert!(
                    (e[i] - direct).abs() < 1e-10,
                    "gate {i}: {} vs {direct}",
                    e[i]
                );
            }
        }
    }

    #[test]
    fn representatives_reach_the_full_group_minimum() {
        let full = GateSearch::new(&GateSet::for_mode(GateSetMode::FullGroup)).unwrap();
        let reps = GateSearch::new(&GateSet::for_mode(GateSetMode::LocalRepresentatives)).unwrap();
        for seed in 0..3 {
            let theta = random_theta(2, 2, 10 + seed);
            let a = full.select(&theta).unwrap();
            let b = reps.select(&theta).unwrap();
            assert!((a.entropy - b.entropy).abs() < 1e-10);
            assert!(b.entropy <= b.entropy_before + 1e-12);
        }
        assert!(GateSearch::new(&GateSet {
            tableaux: vec![],
            mode: GateSetMode::FullGroup
        })
        .is_err());
    }

    #[test]
    fn conjugation_examples() {
        let h = build_model(Model::Ising, 2, 1.0).unwrap();
        assert_eq!(
            apply_disentangler(&h, &CliffordTableau::identity(), 1).unwrap(),
            h.canonical_form()
        );
        let c = apply_disentangler(&h, &CliffordTableau::cnot(0, 1), 1).unwrap();
        let a = crate::exact::exact_spectrum(&h).unwrap();
        let b = crate::exact::exact_spectrum(&c).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
        assert!(apply_disentangler(&h, &CliffordTableau::cnot(0, 1), 2).is_err());

        // gate away from a term's support leaves it alone
        let h6 = build_model(Model::Ising, 6, 0.5).unwrap();
        let c6 = apply_disentangler(&h6, &CliffordTableau::cnot(1, 0), 4).unwrap();
        for t in h6
            .terms()
            .iter()
            .filter(|t| t.string.support().iter().all(|&s| s < 3))
        {
            assert!(c6.terms().iter().any(|u| u == t));
        }
        assert!(c6.len() <= h6.len());
    }

    #[test]
    fn circuit_log_round_trip() {
        let log = CircuitLog {
            entries: vec![CircuitEntry {
                sweep: 2,
                bond: 5,
                gate: CliffordTableau::cnot(1, 0),
                entropy_before: 0.75,
                entropy_after: 0.125,
            }],
        };
        let text = log.to_text();
        assert!(text.starts_with("sweep=2 bond=5 gate=X1->"));
        assert!(text.trim_end().ends_with("S_before=0.75 S_after=0.125"));
        assert_eq!(CircuitLog::from_text(&text).unwrap(), log);
        assert!(CircuitLog::from_text("sweep=1 bond=x").is_err());
    }

    #[test]
    fn small_runs_reach_exact_energy() {
        for (model, g) in [(Model::Ising, 1.0), (Model::Xxz, 0.5)] {
            let h = build_model(model, 8, g).unwrap();
            let exact = exact_ground_state(&h).unwrap().energy;
            for mode in [GateSetMode::IdentityOnly, GateSetMode::LocalRepresentatives] {
                let config = CampsConfig {
                    model,
                    g,
                    length: 8,
                    max_bond: 16,
                    gate_mode: mode,
                    ..CampsConfig::default()
                };
                let r = run(&config).unwrap();
                assert!(r.converged);
                assert!(
                    (r.energy - exact).abs() < 1e-8 * exact.abs(),
                    "{mode}: {} vs {exact}",
                    r.energy
                );
                for e in &r.circuit.entries {
                    assert!(e.entropy_after <= e.entropy_before + 1e-12);
                }
                let spec_a = crate::exact::exact_spectrum(&h).unwrap();
                let spec_b = crate::exact::exact_spectrum(&r.hamiltonian).unwrap();
                assert!(spec_a
                    .iter()
                    .zip(&spec_b)
                    .all(|(x, y)| (x - y).abs() < 1e-9));
                let direct = expectation(&r.mps, &compile_mpo(&r.hamiltonian)).unwrap();
                assert!((direct - r.energy).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn identity_mode_is_reproducible() {
        let config = CampsConfig {
            length: 6,
            max_bond: 8,
            gate_mode: GateSetMode::IdentityOnly,
            ..CampsConfig::default()
        };
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.mps, b.mps);
        assert!(a.circuit.is_empty());
    }
}
