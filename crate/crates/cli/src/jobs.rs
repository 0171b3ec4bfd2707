//! Job execution: every grid point becomes one job that writes its own
//! artifacts, so jobs can run in any order or in parallel.

use std::fs;
use std::path::{Path, PathBuf};

use camps_core::analysis::{
    ashkin_teller_dual, circuit_to_mpo, cnot_staircase, conjugate_full_hamiltonian, detect_pattern,
    kramers_wannier_dual, match_dual_model, reference_xxz_circuit, Circuit,
};
use camps_core::diagnostics::{
    fit_central_charge, fit_entropy_reduction, normalize_spectrum, relative_energy_error,
};
use camps_core::exact::{exact_entanglement, exact_ground_state};
use camps_core::format::{fmt12, parse_key_values, Table};
use camps_core::pauli::{build_model, Model, PauliSum};
use camps_core::{run_hamiltonian, CircuitLog};
use rayon::prelude::*;

use crate::config::{CircuitSource, DualTarget, ExperimentSpec, JobKind};

/// What one job left on disk.
#[derive(Debug)]
pub struct JobOutcome {
    pub name: String,
    pub files: Vec<PathBuf>,
    pub error: Option<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    hash: String,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(spec: &'a ExperimentSpec) -> Self {
        Self {
            dir: &spec.output,
            hash: spec.hash(),
            files: Vec::new(),
        }
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), String> {
        let path = self.dir.join(name);
        fs::write(&path, format!("# spec_hash={}\n{body}", self.hash))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        self.files.push(path);
        Ok(())
    }

    fn table(&mut self, name: &str, table: &Table) -> Result<(), String> {
        self.text(name, &table.to_text())
    }
}

fn g_label(g: f64) -> String {
    fmt12(g)
}

pub fn run_stem(kind: JobKind, model: Model, g: f64, length: usize, bond: usize) -> String {
    format!(
        "{}_{}_g{}_L{length}_D{bond}",
        kind.name(),
        model.name(),
        g_label(g)
    )
}

pub fn ed_stem(model: Model, g: f64, length: usize) -> String {
    format!("ed_{}_g{}_L{length}", model.name(), g_label(g))
}

fn spectrum_table(spectrum: &[f64]) -> Table {
    let mut t = Table::new();
    t.header("index\tDelta");
    for (i, x) in spectrum.iter().enumerate() {
        t.row([i.to_string(), fmt12(*x)]);
    }
    t
}

fn solver_job(spec: &ExperimentSpec, length: usize, bond: usize) -> Result<Vec<PathBuf>, String> {
    let stem = run_stem(spec.kind, spec.model, spec.g, length, bond);
    let cfg = spec.camps_config(length, bond);
    let h = build_model(spec.model, length, spec.g).map_err(|e| e.to_string())?;
    let result = run_hamiltonian(&h, &cfg).map_err(|e| e.to_string())?;
    let mut w = Writer::new(spec);
    w.text(&format!("{stem}.summary"), &result.summary())?;
    w.table(&format!("{stem}.profile.tsv"), &result.profile_table())?;
    let center = &result.profile[length / 2 - 1];
    w.table(
        &format!("{stem}.spectrum.tsv"),
        &spectrum_table(&center.spectrum),
    )?;
    if spec.kind == JobKind::Camps {
        w.text(&format!("{stem}.circuit.log"), &result.circuit.to_text())?;
        w.text(
            &format!("{stem}.hamiltonian.txt"),
            &result.hamiltonian.to_text(),
        )?;
    }
    Ok(w.files)
}

fn oracle_job(spec: &ExperimentSpec, length: usize) -> Result<Vec<PathBuf>, String> {
    let stem = ed_stem(spec.model, spec.g, length);
    let h = build_model(spec.model, length, spec.g).map_err(|e| e.to_string())?;
    let exact = exact_ground_state(&h).map_err(|e| e.to_string())?;
    let mut summary = format!("energy={}\n", fmt12(exact.energy));
    if let Some(e1) = exact.gap_energy {
        summary.push_str(&format!("first_excited={}\n", fmt12(e1)));
    }
    summary.push_str(&format!("degenerate={}\n", exact.degenerate));
    let mut profile = Table::new();
    profile.header("cut\tS");
    let mut center = Vec::new();
    for p in 1..length {
        let data = exact_entanglement(&exact, p).map_err(|e| e.to_string())?;
        summary.push_str(&format!("S_{p}={}\n", fmt12(data.entropy)));
        profile.row([p.to_string(), fmt12(data.entropy)]);
        if p == length / 2 {
            center = data.spectrum;
        }
    }
    let mut w = Writer::new(spec);
    w.text(&format!("{stem}.summary"), &summary)?;
    w.table(&format!("{stem}.profile.tsv"), &profile)?;
    w.table(&format!("{stem}.spectrum.tsv"), &spectrum_table(&center))?;
    Ok(w.files)
}

fn read_summary(dir: &Path, stem: &str) -> Option<Vec<(String, String)>> {
    fs::read_to_string(dir.join(format!("{stem}.summary")))
        .ok()
        .map(|t| parse_key_values(&t))
}

fn summary_value(kv: &[(String, String)], key: &str) -> Option<f64> {
    kv.iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| v.parse().ok())
}

fn analyze_job(spec: &ExperimentSpec, bond: usize) -> Result<Vec<PathBuf>, String> {
    let dir = &spec.output;
    let mut w = Writer::new(spec);
    let mut notes = Vec::new();
    let base = format!("analyze_{}_g{}_D{bond}", spec.model.name(), g_label(spec.g));
    let mut lengths = spec.lengths.clone();
    lengths.sort_unstable();

    for kind in [JobKind::Dmrg, JobKind::Camps] {
        let mut scaling = Table::new();
        scaling.header(format!("L\tS (cut {:?})", spec.analyze.cut).to_lowercase());
        let mut points = Vec::new();
        for &l in &lengths {
            let stem = run_stem(kind, spec.model, spec.g, l, bond);
            let key = format!("S_{}", spec.analyze.cut.cut(l));
            if let Some(s) = read_summary(dir, &stem).and_then(|kv| summary_value(&kv, &key)) {
                points.push((l as f64, s));
                scaling.row([l.to_string(), fmt12(s)]);
            }
            // normalized entanglement spectra for every available run
            if let Ok(text) = fs::read_to_string(dir.join(format!("{stem}.spectrum.tsv"))) {
                let raw: Vec<f64> = Table::parse(&text)
                    .numeric_pairs()
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|p| p.1)
                    .collect();
                match normalize_spectrum(
                    &raw,
                    spec.analyze.spectrum_lowest,
                    spec.analyze.spectrum_second,
                ) {
                    Ok(levels) => {
                        w.table(&format!("{stem}.normalized.tsv"), &spectrum_table(&levels))?
                    }
                    Err(e) => notes.push(format!("{stem}: {e}")),
                }
            }
        }
        if points.is_empty() {
            continue;
        }
        w.table(&format!("{base}_{}.scaling.tsv", kind.name()), &scaling)?;
        match fit_central_charge(&points) {
            Ok(fit) => w.text(
                &format!("{base}_{}.central_charge", kind.name()),
                &fit.to_string(),
            )?,
            Err(e) => notes.push(format!("{} central charge: {e}", kind.name())),
        }
    }

    let mut delta = Table::new();
    delta.header("L\tdelta_S");
    let mut delta_points = Vec::new();
    let mut energy = Table::new();
    energy.header("L\tkind\tE\tE_ref\trelative_error");
    for &l in &lengths {
        let center = format!("S_{}", l / 2);
        let dmrg = read_summary(dir, &run_stem(JobKind::Dmrg, spec.model, spec.g, l, bond));
        let camps = read_summary(dir, &run_stem(JobKind::Camps, spec.model, spec.g, l, bond));
        if let (Some(a), Some(b)) = (
            dmrg.as_ref().and_then(|kv| summary_value(kv, &center)),
            camps.as_ref().and_then(|kv| summary_value(kv, &center)),
        ) {
            delta_points.push((l as f64, a - b));
            delta.row([l.to_string(), fmt12(a - b)]);
        }
        let reference = read_summary(dir, &ed_stem(spec.model, spec.g, l))
            .and_then(|kv| summary_value(&kv, "energy"));
        if let Some(e_ref) = reference {
            for (kind, kv) in [(JobKind::Dmrg, &dmrg), (JobKind::Camps, &camps)] {
                if let Some(e) = kv.as_ref().and_then(|kv| summary_value(kv, "energy")) {
                    let err = relative_energy_error(e, e_ref).map_err(|e| e.to_string())?;
                    energy.row([
                        l.to_string(),
                        kind.name().into(),
                        fmt12(e),
                        fmt12(e_ref),
                        fmt12(err),
                    ]);
                }
            }
        }
    }
    if !delta_points.is_empty() {
        w.table(&format!("{base}.delta_s.tsv"), &delta)?;
        match fit_entropy_reduction(&delta_points) {
            Ok(fit) => w.text(&format!("{base}.entropy_reduction"), &fit.to_string())?,
            Err(e) => notes.push(format!("entropy reduction: {e}")),
        }
    }
    if !energy.rows.is_empty() {
        w.table(&format!("{base}.energy.tsv"), &energy)?;
    }
    let mut report = format!("artifacts={}\n", w.files.len());
    for n in &notes {
        report.push_str(&format!("note={n}\n"));
    }
    w.text(&format!("{base}.report"), &report)?;
    Ok(w.files)
}

fn dual_target(spec: &ExperimentSpec, length: usize) -> Option<Result<PauliSum, String>> {
    let target = match (spec.circuit.target, spec.model) {
        (DualTarget::None, _) => return None,
        (DualTarget::KramersWannier, _) | (DualTarget::Auto, Model::Ising) => {
            kramers_wannier_dual(length, spec.g)
        }
        (DualTarget::AshkinTeller, _) | (DualTarget::Auto, Model::Xxz) => {
            ashkin_teller_dual(length, spec.g)
        }
    };
    Some(target.map_err(|e| e.to_string()))
}

fn circuit_job(
    spec: &ExperimentSpec,
    length: usize,
    bond: Option<usize>,
) -> Result<Vec<PathBuf>, String> {
    let (circuit, stem) = match spec.circuit.source {
        CircuitSource::Log => {
            let bond = bond.expect("log source iterates bond dimensions");
            let run = run_stem(JobKind::Camps, spec.model, spec.g, length, bond);
            let path = spec.output.join(format!("{run}.circuit.log"));
            let text = fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let log = CircuitLog::from_text(&text).map_err(|e| e.to_string())?;
            (
                Circuit::from_log(length, &log).map_err(|e| e.to_string())?,
                format!("circuit_{run}"),
            )
        }
        CircuitSource::Staircase => (
            cnot_staircase(length).map_err(|e| e.to_string())?,
            format!(
                "circuit_staircase_{}_g{}_L{length}",
                spec.model.name(),
                g_label(spec.g)
            ),
        ),
        CircuitSource::ReferenceXxz => (
            reference_xxz_circuit(length).map_err(|e| e.to_string())?,
            format!(
                "circuit_reference_xxz_{}_g{}_L{length}",
                spec.model.name(),
                g_label(spec.g)
            ),
        ),
    };
    let canonical = circuit.canonicalize();
    let mut w = Writer::new(spec);

    let mut gates = Table::new();
    gates.header("layer\tbond\tclass\tgate");
    for ((b, g), layer) in canonical.gates().iter().zip(canonical.layers()) {
        gates.row([
            layer.to_string(),
            b.to_string(),
            g.entangling_class().to_string(),
            g.encode(),
        ]);
    }
    w.table(&format!("{stem}.canonical.tsv"), &gates)?;
    w.text(
        &format!("{stem}.pattern"),
        &detect_pattern(&canonical).to_string(),
    )?;

    let h = build_model(spec.model, length, spec.g).map_err(|e| e.to_string())?;
    let conjugated = conjugate_full_hamiltonian(&h, &canonical).map_err(|e| e.to_string())?;
    w.text(&format!("{stem}.conjugated.txt"), &conjugated.to_text())?;
    if let Some(target) = dual_target(spec, length) {
        let report = match_dual_model(&conjugated, &target?).map_err(|e| e.to_string())?;
        w.text(&format!("{stem}.match"), &report.to_string())?;
    }
    if length <= 12 {
        let mpo = circuit_to_mpo(&canonical).map_err(|e| e.to_string())?;
        let dims = mpo
            .bond_dims()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",");
        w.text(
            &format!("{stem}.mpo"),
            &format!("max_bond_dim={}\nbond_dims={dims}\n", mpo.max_bond_dim()),
        )?;
    }
    Ok(w.files)
}

/// Runs every grid point of `spec` on the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<JobOutcome>, String> {
    fs::create_dir_all(&spec.output)
        .map_err(|e| format!("cannot create {}: {e}", spec.output.display()))?;
    let mut points: Vec<(String, usize, Option<usize>)> = Vec::new();
    for &l in &spec.lengths {
        match spec.kind {
            JobKind::Dmrg | JobKind::Camps => {
                for &d in &spec.bond_dims {
                    points.push((run_stem(spec.kind, spec.model, spec.g, l, d), l, Some(d)));
                }
            }
            JobKind::Ed => points.push((ed_stem(spec.model, spec.g, l), l, None)),
            JobKind::Circuit => match spec.circuit.source {
                CircuitSource::Log => {
                    for &d in &spec.bond_dims {
                        points.push((format!("circuit_L{l}_D{d}"), l, Some(d)));
                    }
                }
                _ => points.push((format!("circuit_L{l}"), l, None)),
            },
            JobKind::Analyze => {}
        }
    }
    if spec.kind == JobKind::Analyze {
        for &d in &spec.bond_dims {
            points.push((format!("analyze_D{d}"), 0, Some(d)));
        }
    }

    let outcomes: Vec<JobOutcome> = points
        .into_par_iter()
        .map(|(name, length, bond)| {
            let result = match spec.kind {
                JobKind::Dmrg | JobKind::Camps => solver_job(spec, length, bond.expect("bond")),
                JobKind::Ed => oracle_job(spec, length),
                JobKind::Analyze => analyze_job(spec, bond.expect("bond")),
                JobKind::Circuit => circuit_job(spec, length, bond),
            };
            match result {
                Ok(files) => JobOutcome {
                    name,
                    files,
                    error: None,
                },
                Err(e) => {
                    let marker = spec.output.join(format!("{name}.FAILED"));
                    let _ = fs::write(&marker, format!("# spec_hash={}\nerror={e}\n", spec.hash()));
                    JobOutcome {
                        name,
                        files: vec![marker],
                        error: Some(e),
                    }
                }
            }
        })
        .collect();
    Ok(outcomes)
}
