//! Experiment configuration: a TOML file with flat sections, resolved into an
//! [`ExperimentSpec`] with every default filled in.

use std::fmt;
use std::path::{Path, PathBuf};

use camps_core::clifford::GateSetMode;
use camps_core::format::fmt12;
use camps_core::pauli::Model;
use camps_core::CampsConfig;
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobKind {
    Dmrg,
    Camps,
    Ed,
    Analyze,
    Circuit,
}

impl JobKind {
    pub fn name(self) -> &'static str {
        match self {
            JobKind::Dmrg => "dmrg",
            JobKind::Camps => "camps",
            JobKind::Ed => "ed",
            JobKind::Analyze => "analyze",
            JobKind::Circuit => "circuit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutChoice {
    Center,
    Quarter,
}

impl CutChoice {
    pub fn cut(self, length: usize) -> usize {
        match self {
            CutChoice::Center => length / 2,
            CutChoice::Quarter => (length / 4).max(1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitSource {
    /// The circuit log written by an earlier `camps` run of the same grid.
    Log,
    Staircase,
    ReferenceXxz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualTarget {
    /// Kramers–Wannier for Ising, Ashkin–Teller for XXZ.
    Auto,
    KramersWannier,
    AshkinTeller,
    None,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    job: RawJob,
    model: RawModel,
    grid: RawGrid,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    analyze: RawAnalyze,
    #[serde(default)]
    circuit: RawCircuit,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    kind: Option<JobKind>,
    output: Option<PathBuf>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    g: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    lengths: Vec<usize>,
    #[serde(default)]
    bond_dims: Vec<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    cutoff: Option<f64>,
    eigen_tol: Option<f64>,
    eigen_max_iterations: Option<usize>,
    energy_tol: Option<f64>,
    max_sweeps: Option<usize>,
    warmup_sweeps: Option<usize>,
    gate_search_sweeps: Option<usize>,
    gate_mode: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalyze {
    cut: Option<CutChoice>,
    spectrum_lowest: Option<f64>,
    spectrum_second: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    source: Option<CircuitSource>,
    target: Option<DualTarget>,
}

/// Solver knobs shared by every grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    pub cutoff: f64,
    pub eigen_tol: f64,
    pub eigen_max_iterations: usize,
    pub energy_tol: f64,
    pub max_sweeps: usize,
    pub warmup_sweeps: usize,
    pub gate_search_sweeps: usize,
    pub gate_mode: GateSetMode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeSettings {
    pub cut: CutChoice,
    pub spectrum_lowest: f64,
    pub spectrum_second: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSettings {
    pub source: CircuitSource,
    pub target: DualTarget,
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub kind: JobKind,
    pub model: Model,
    pub g: f64,
    pub lengths: Vec<usize>,
    pub bond_dims: Vec<usize>,
    pub solver: SolverSettings,
    pub analyze: AnalyzeSettings,
    pub circuit: CircuitSettings,
    pub output: PathBuf,
    pub seed: u64,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn field_error(field: &str, msg: impl fmt::Display) -> ConfigError {
    ConfigError(format!("invalid field {field}: {msg}"))
}

/// Overrides given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ExperimentSpec {
    pub fn load(
        path: &Path,
        default_kind: JobKind,
        overrides: &Overrides,
    ) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, default_kind, overrides)
    }

    pub fn parse(
        text: &str,
        default_kind: JobKind,
        overrides: &Overrides,
    ) -> Result<Self, ConfigError> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| ConfigError(format!("parse error: {e}")))?;
        let defaults = CampsConfig::default();

        let model: Model = raw
            .model
            .name
            .parse()
            .map_err(|e| field_error("model.name", e))?;
        if !raw.model.g.is_finite() {
            return Err(field_error("model.g", "must be finite"));
        }
        if raw.grid.lengths.is_empty() {
            return Err(field_error("grid.lengths", "must be nonempty"));
        }
        if let Some(&l) = raw.grid.lengths.iter().find(|&&l| l < 2) {
            return Err(field_error(
                "grid.lengths",
                format!("length {l} is below 2"),
            ));
        }
        let bond_dims = if raw.grid.bond_dims.is_empty() {
            vec![defaults.max_bond]
        } else {
            raw.grid.bond_dims
        };
        if bond_dims.contains(&0) {
            return Err(field_error(
                "grid.bond_dims",
                "bond dimensions must be positive",
            ));
        }

        let s = raw.solver;
        let gate_mode = match s.gate_mode {
            Some(m) => m.parse().map_err(|e| field_error("solver.gate_mode", e))?,
            None => defaults.gate_mode,
        };
        let solver = SolverSettings {
            cutoff: s.cutoff.unwrap_or(defaults.cutoff),
            eigen_tol: s.eigen_tol.unwrap_or(defaults.eigen_tol),
            eigen_max_iterations: s
                .eigen_max_iterations
                .unwrap_or(defaults.eigen_max_iterations),
            energy_tol: s.energy_tol.unwrap_or(defaults.energy_tol),
            max_sweeps: s.max_sweeps.unwrap_or(defaults.max_sweeps),
            warmup_sweeps: s.warmup_sweeps.unwrap_or(defaults.warmup_sweeps),
            gate_search_sweeps: s.gate_search_sweeps.unwrap_or(defaults.gate_search_sweeps),
            gate_mode,
        };
        for (name, v) in [
            ("solver.cutoff", solver.cutoff),
            ("solver.eigen_tol", solver.eigen_tol),
            ("solver.energy_tol", solver.energy_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(field_error(name, "must be positive"));
            }
        }
        if solver.max_sweeps == 0 {
            return Err(field_error("solver.max_sweeps", "must be positive"));
        }

        let spectrum_lowest = raw.analyze.spectrum_lowest.unwrap_or(1.0 / 16.0);
        let analyze = AnalyzeSettings {
            cut: raw.analyze.cut.unwrap_or(CutChoice::Center),
            spectrum_lowest,
            spectrum_second: raw.analyze.spectrum_second.unwrap_or(spectrum_lowest + 1.0),
        };
        if analyze.spectrum_second == analyze.spectrum_lowest {
            return Err(field_error(
                "analyze.spectrum_second",
                "must differ from spectrum_lowest",
            ));
        }
        let circuit = CircuitSettings {
            source: raw.circuit.source.unwrap_or(CircuitSource::Log),
            target: raw.circuit.target.unwrap_or(DualTarget::Auto),
        };

        Ok(Self {
            kind: raw.job.kind.unwrap_or(default_kind),
            model,
            g: raw.model.g,
            lengths: raw.grid.lengths,
            bond_dims,
            solver,
            analyze,
            circuit,
            output: overrides
                .output
                .clone()
                .or(raw.job.output)
                .unwrap_or_else(|| PathBuf::from("out")),
            seed: overrides.seed.or(raw.job.seed).unwrap_or(defaults.seed),
        })
    }

    pub fn camps_config(&self, length: usize, max_bond: usize) -> CampsConfig {
        let s = &self.solver;
        CampsConfig {
            model: self.model,
            g: self.g,
            length,
            max_bond,
            cutoff: s.cutoff,
            max_sweeps: s.max_sweeps,
            eigen_tol: s.eigen_tol,
            eigen_max_iterations: s.eigen_max_iterations,
            energy_tol: s.energy_tol,
            gate_mode: if self.kind == JobKind::Dmrg {
                GateSetMode::IdentityOnly
            } else {
                s.gate_mode
            },
            warmup_sweeps: s.warmup_sweeps,
            gate_search_sweeps: s.gate_search_sweeps,
            seed: self.seed,
        }
    }

    /// Every resolved setting except the output location, one per line.
    pub fn canonical_text(&self) -> String {
        let s = &self.solver;
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        [
            format!("kind={}", self.kind.name()),
            format!("model={}", self.model.name()),
            format!("g={}", fmt12(self.g)),
            format!("lengths={}", list(&self.lengths)),
            format!("bond_dims={}", list(&self.bond_dims)),
            format!("cutoff={}", fmt12(s.cutoff)),
            format!("eigen_tol={}", fmt12(s.eigen_tol)),
            format!("eigen_max_iterations={}", s.eigen_max_iterations),
            format!("energy_tol={}", fmt12(s.energy_tol)),
            format!("max_sweeps={}", s.max_sweeps),
            format!("warmup_sweeps={}", s.warmup_sweeps),
            format!("gate_search_sweeps={}", s.gate_search_sweeps),
            format!("gate_mode={}", s.gate_mode),
            format!("cut={:?}", self.analyze.cut),
            format!("spectrum_lowest={}", fmt12(self.analyze.spectrum_lowest)),
            format!("spectrum_second={}", fmt12(self.analyze.spectrum_second)),
            format!("circuit_source={:?}", self.circuit.source),
            format!("circuit_target={:?}", self.circuit.target),
            format!("seed={}", self.seed),
        ]
        .join("\n")
    }

    /// SHA-256 of [`Self::canonical_text`], hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical_text().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str =
        "[job]\nkind = \"camps\"\n[model]\nname = \"ising\"\ng = 1.0\n[grid]\nlengths = [8]\n";

    #[test]
    fn minimal_config_takes_defaults() {
        let spec = ExperimentSpec::parse(MINIMAL, JobKind::Dmrg, &Overrides::default()).unwrap();
        assert_eq!(spec.kind, JobKind::Camps);
        assert_eq!(spec.bond_dims, vec![64]);
        assert_eq!(spec.analyze.spectrum_second, 1.0 + 1.0 / 16.0);
        assert_eq!(
            spec.camps_config(8, 64).gate_mode,
            GateSetMode::LocalRepresentatives
        );
    }

    #[test]
    fn overrides_change_the_hash_but_not_the_output_dir() {
        let base = ExperimentSpec::parse(MINIMAL, JobKind::Camps, &Overrides::default()).unwrap();
        let moved = ExperimentSpec::parse(
            MINIMAL,
            JobKind::Camps,
            &Overrides {
                output: Some("elsewhere".into()),
                seed: None,
            },
        )
        .unwrap();
        let reseeded = ExperimentSpec::parse(
            MINIMAL,
            JobKind::Camps,
            &Overrides {
                output: None,
                seed: Some(99),
            },
        )
        .unwrap();
        assert_eq!(base.hash(), moved.hash());
        assert_ne!(base.hash(), reseeded.hash());
        assert_eq!(base.hash().len(), 64);
    }

    #[test]
    fn bad_fields_are_named() {
        let e = ExperimentSpec::parse(
            &MINIMAL.replace("[8]", "[]"),
            JobKind::Camps,
            &Overrides::default(),
        )
        .unwrap_err();
        assert!(e.0.contains("grid.lengths"), "{e}");
        let e = ExperimentSpec::parse(
            &MINIMAL.replace("ising", "potts"),
            JobKind::Camps,
            &Overrides::default(),
        )
        .unwrap_err();
        assert!(e.0.contains("model.name"), "{e}");
        let e = ExperimentSpec::parse(
            &format!("{MINIMAL}[solver]\nbogus = 1\n"),
            JobKind::Camps,
            &Overrides::default(),
        )
        .unwrap_err();
        assert!(e.0.contains("line"), "{e}");
    }
}
