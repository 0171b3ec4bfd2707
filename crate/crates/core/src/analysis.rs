//! Structure of optimized circuits: canonical form, gate patterns, symbolic
//! conjugation of whole Hamiltonians, and matching against dual models.

use std::collections::{HashMap, HashSet};
use std::fmt;

use ndarray::{Array2, Array4, ArrayD, IxDyn};

use crate::camps::{apply_disentangler, CircuitLog};
use crate::clifford::{compose, CliffordTableau, GateClass, LocalClifford};
use crate::engine::MpoOperator;
use crate::error::{argument, Error, Result};
use crate::linalg::{svd_thin, Standard};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::C64;

/// An ordered list of two-qubit Cliffords on nearest-neighbour bonds.
///
/// Bond `j` (1-based) couples sites `j - 1` and `j` (0-based). The first gate
/// acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n_sites: usize,
    gates: Vec<(usize, CliffordTableau)>,
}

impl Circuit {
    pub fn new(n_sites: usize) -> Self {
        Self {
            n_sites,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(
        n_sites: usize,
        gates: impl IntoIterator<Item = (usize, CliffordTableau)>,
    ) -> Result<Self> {
        let mut c = Self::new(n_sites);
        for (bond, gate) in gates {
            c.push(bond, gate)?;
        }
        Ok(c)
    }

    /// The gates of a circuit log, in log order.
    pub fn from_log(n_sites: usize, log: &CircuitLog) -> Result<Self> {
        Self::from_gates(n_sites, log.entries.iter().map(|e| (e.bond, e.gate)))
    }

    pub fn push(&mut self, bond: usize, gate: CliffordTableau) -> Result<()> {
        if bond == 0 || bond >= self.n_sites {
            return argument(format!(
                "bond {bond} out of range for {} sites",
                self.n_sites
            ));
        }
        self.gates.push((bond, gate));
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn gates(&self) -> &[(usize, CliffordTableau)] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Layer index of every gate under as-soon-as-possible scheduling.
    pub fn layers(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.n_sites];
        self.gates
            .iter()
            .map(|&(b, _)| {
                let layer = depth[b - 1].max(depth[b]);
                depth[b - 1] = layer + 1;
                depth[b] = layer + 1;
                layer
            })
            .collect()
    }

    /// Equivalent circuit in a fixed form.
    ///
    /// Gates on the same bond with nothing in between on either site are
    /// multiplied together, identities are dropped, and the survivors are
    /// listed layer by layer, bonds ascending within a layer.
    pub fn canonicalize(&self) -> Circuit {
        let mut current = self.merge_pass();
        loop {
            let next = current.merge_pass();
            if next.gates.len() == current.gates.len() {
                break;
            }
            current = next;
        }
        let layers = current.layers();
        let mut order: Vec<usize> = (0..current.gates.len()).collect();
        order.sort_by_key(|&i| (layers[i], current.gates[i].0));
        Circuit {
            n_sites: self.n_sites,
            gates: order.into_iter().map(|i| current.gates[i]).collect(),
        }
    }

    fn merge_pass(&self) -> Circuit {
        // Last surviving gate on each site, as an index into `merged`.
        let mut last: Vec<Option<usize>> = vec![None; self.n_sites];
        let mut merged: Vec<Option<(usize, CliffordTableau)>> = Vec::new();
        for &(b, g) in &self.gates {
            let (p, q) = (b - 1, b);
            match (last[p], last[q]) {
                (Some(i), Some(k)) if i == k => {
                    let (_, prev) = merged[i].expect("live gate");
                    let product = compose(&g, &prev);
                    if product.is_identity() {
                        merged[i] = None;
                        last[p] = None;
                        last[q] = None;
                    } else {
                        merged[i] = Some((b, product));
                    }
                }
                _ => {
                    if g.is_identity() {
                        continue;
                    }
                    merged.push(Some((b, g)));
                    last[p] = Some(merged.len() - 1);
                    last[q] = Some(merged.len() - 1);
                }
            }
        }
        Circuit {
            n_sites: self.n_sites,
            gates: merged.into_iter().flatten().collect(),
        }
    }
}

/// `U H U†` for the whole circuit, gates applied in order.
pub fn conjugate_full_hamiltonian(h: &PauliSum, circuit: &Circuit) -> Result<PauliSum> {
    if h.n_sites() != circuit.n_sites {
        return argument(format!(
            "Hamiltonian has {} sites but circuit has {}",
            h.n_sites(),
            circuit.n_sites
        ));
    }
    let mut out = h.canonical_form();
    for (bond, gate) in &circuit.gates {
        out = apply_disentangler(&out, gate, *bond)?;
    }
    Ok(out)
}

/// `∏ r_j H ∏ r_j†` with one single-qubit Clifford per site.
pub fn rotate_hamiltonian(h: &PauliSum, rotation: &[LocalClifford]) -> Result<PauliSum> {
    if rotation.len() != h.n_sites() {
        return argument(format!(
            "{} rotations for {} sites",
            rotation.len(),
            h.n_sites()
        ));
    }
    let mut out = PauliSum::new(h.n_sites());
    for term in h.terms() {
        let (string, sign) = rotate_string(&term.string, rotation);
        out.push(sign * term.coefficient, string)?;
    }
    Ok(out.canonical_form())
}

fn rotate_string(p: &PauliString, rotation: &[LocalClifford]) -> (PauliString, f64) {
    let mut out = PauliString::identity(p.n_sites());
    let mut k = 0u8;
    for site in p.support() {
        let (letter, phase) = rotation[site].apply(p.get(site));
        out.set(site, letter);
        k = (k + phase) % 4;
    }
    (out, if k == 0 { 1.0 } else { -1.0 })
}

/// Outcome of [`match_dual_model`].
#[derive(Clone, Debug)]
pub struct MatchReport {
    pub matched: bool,
    /// Per-site rotation taking the input onto the target, when matched.
    pub local_rotation: Option<Vec<LocalClifford>>,
    /// `input - target` after the found rotation, or unrotated if no match.
    pub residual_terms: PauliSum,
}

impl fmt::Display for MatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matched={}", self.matched)?;
        if let Some(r) = &self.local_rotation {
            for (site, u) in r.iter().enumerate() {
                writeln!(f, "rotation site={} {}", site + 1, u.encode())?;
            }
        }
        writeln!(f, "residual_terms={}", self.residual_terms.len())?;
        write!(f, "{}", self.residual_terms.to_text())
    }
}

const MATCH_TOLERANCE: f64 = 1e-9;
const SEARCH_BUDGET: usize = 2_000_000;

/// Searches for single-qubit Cliffords `r_j` with `r h r† = target` term by term.
///
/// Sites are assigned left to right; a partial assignment survives only if
/// every term it has fully rotated exists in the target with the same
/// coefficient and every partially rotated term agrees with some target term
/// of the same support on the assigned sites.
pub fn match_dual_model(h: &PauliSum, target: &PauliSum) -> Result<MatchReport> {
    let n = h.n_sites();
    if target.n_sites() != n {
        return argument(format!(
            "{n} sites against a {}-site target",
            target.n_sites()
        ));
    }
    let h = h.canonical_form();
    let target = target.canonical_form();
    let unmatched = |h: &PauliSum| -> Result<MatchReport> {
        Ok(MatchReport {
            matched: false,
            local_rotation: None,
            residual_terms: h.difference(&target)?,
        })
    };
    let mut h_supports: Vec<Vec<usize>> = h.terms().iter().map(|t| t.string.support()).collect();
    let mut t_supports: Vec<Vec<usize>> =
        target.terms().iter().map(|t| t.string.support()).collect();
    h_supports.sort();
    t_supports.sort();
    if h_supports != t_supports {
        return unmatched(&h);
    }

    let mut full: HashMap<PauliString, f64> = HashMap::new();
    let mut prefixes: HashSet<(Vec<usize>, Vec<Pauli>)> = HashSet::new();
    for t in target.terms() {
        full.insert(t.string.clone(), t.coefficient);
        let support = t.string.support();
        for k in 1..support.len() {
            let letters = support[..k].iter().map(|&s| t.string.get(s)).collect();
            prefixes.insert((support.clone(), letters));
        }
    }
    // Terms of `h` grouped by the sites they touch.
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, t) in h.terms().iter().enumerate() {
        for s in t.string.support() {
            touching[s].push(i);
        }
    }
    let candidates = {
        let mut all = LocalClifford::all();
        all.sort_by_key(|u| *u != LocalClifford::identity());
        all
    };

    let mut search = RotationSearch {
        h: &h,
        full: &full,
        prefixes: &prefixes,
        touching: &touching,
        candidates: &candidates,
        rotation: vec![LocalClifford::identity(); n],
        visited: 0,
    };
    if search.assign(0) {
        let rotation = search.rotation;
        let residual = rotate_hamiltonian(&h, &rotation)?.difference(&target)?;
        return Ok(MatchReport {
            matched: residual.is_empty(),
            local_rotation: Some(rotation),
            residual_terms: residual,
        });
    }
    unmatched(&h)
}

struct RotationSearch<'a> {
    h: &'a PauliSum,
    full: &'a HashMap<PauliString, f64>,
    prefixes: &'a HashSet<(Vec<usize>, Vec<Pauli>)>,
    touching: &'a [Vec<usize>],
    candidates: &'a [LocalClifford],
    rotation: Vec<LocalClifford>,
    visited: usize,
}

impl RotationSearch<'_> {
    fn assign(&mut self, site: usize) -> bool {
        if site == self.rotation.len() {
            return true;
        }
        for &u in self.candidates {
            self.visited += 1;
            if self.visited > SEARCH_BUDGET {
                return false;
            }
            self.rotation[site] = u;
            if self.consistent(site) && self.assign(site + 1) {
                return true;
            }
        }
        false
    }

    fn consistent(&self, site: usize) -> bool {
        for &i in &self.touching[site] {
            let term = &self.h.terms()[i];
            let support = term.string.support();
            let last = *support.last().expect("non-identity term");
            if last == site {
                let (rotated, sign) = rotate_string(&term.string, &self.rotation);
                match self.full.get(&rotated) {
                    Some(c) if (c - sign * term.coefficient).abs() < MATCH_TOLERANCE => {}
                    _ => return false,
                }
            } else {
                let letters: Vec<Pauli> = support
                    .iter()
                    .take_while(|&&s| s <= site)
                    .map(|&s| self.rotation[s].apply(term.string.get(s)).0)
                    .collect();
                if !self.prefixes.contains(&(support, letters)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Structural reading of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternKind {
    CnotStaircase,
    SwapPyramidPresent,
    Other,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CnotStaircase => "cnot_staircase",
            Self::SwapPyramidPresent => "swap_pyramid_present",
            Self::Other => "other",
        })
    }
}

/// A run of consecutive CNOT-class gates on ascending bonds
/// `first_bond..=last_bond`, starting at `start` in the canonical circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseSegment {
    pub start: usize,
    pub first_bond: usize,
    pub last_bond: usize,
}

/// A triangle of swap-class gates; `rows[k]` lists the bonds of its k-th layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PyramidSegment {
    pub rows: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternReport {
    pub kind: PatternKind,
    pub staircases: Vec<StaircaseSegment>,
    pub pyramids: Vec<PyramidSegment>,
}

impl fmt::Display for PatternReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pattern={}", self.kind)?;
        for s in &self.staircases {
            writeln!(
                f,
                "staircase start={} bonds={}..{}",
                s.start, s.first_bond, s.last_bond
            )?;
        }
        for p in &self.pyramids {
            let rows: Vec<String> = p
                .rows
                .iter()
                .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                .collect();
            writeln!(
                f,
                "pyramid height={} rows={}",
                p.rows.len(),
                rows.join(" | ")
            )?;
        }
        Ok(())
    }
}

/// Classifies the canonical form of `circuit` using entangling classes only.
///
/// It is a staircase when the whole canonical circuit is one CNOT-class gate
/// on each bond `1..L-1` in ascending order. A pyramid is reported when the
/// swap-class gates contain at least two stacked brickwork rows, each row
/// one gate shorter than the one before it (in either direction), with every
/// gate of the shorter row sitting between two gates of the longer one.
pub fn detect_pattern(circuit: &Circuit) -> PatternReport {
    let c = circuit.canonicalize();
    let classes: Vec<GateClass> = c.gates.iter().map(|(_, g)| g.entangling_class()).collect();

    let mut staircases = Vec::new();
    let mut i = 0;
    while i < c.gates.len() {
        if classes[i] != GateClass::Cnot {
            i += 1;
            continue;
        }
        let mut k = i;
        while k + 1 < c.gates.len()
            && classes[k + 1] == GateClass::Cnot
            && c.gates[k + 1].0 == c.gates[k].0 + 1
        {
            k += 1;
        }
        if k > i {
            staircases.push(StaircaseSegment {
                start: i,
                first_bond: c.gates[i].0,
                last_bond: c.gates[k].0,
            });
        }
        i = k + 1;
    }

    let pyramids = find_pyramids(&c, &classes);
    let full_staircase = c.n_sites >= 2
        && c.gates.len() == c.n_sites - 1
        && staircases
            .iter()
            .any(|s| s.start == 0 && s.first_bond == 1 && s.last_bond == c.n_sites - 1);
    let kind = if !pyramids.is_empty() {
        PatternKind::SwapPyramidPresent
    } else if full_staircase {
        PatternKind::CnotStaircase
    } else {
        PatternKind::Other
    };
    PatternReport {
        kind,
        staircases,
        pyramids,
    }
}

fn find_pyramids(c: &Circuit, classes: &[GateClass]) -> Vec<PyramidSegment> {
    // Rows of swap gates, scheduled among themselves.
    let swaps: Vec<usize> = c
        .gates
        .iter()
        .enumerate()
        .filter(|(i, _)| classes[*i] == GateClass::Swap)
        .map(|(_, (b, _))| *b)
        .collect();
    let mut depth = vec![0usize; c.n_sites];
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for b in swaps {
        let layer = depth[b - 1].max(depth[b]);
        depth[b - 1] = layer + 1;
        depth[b] = layer + 1;
        if rows.len() <= layer {
            rows.resize(layer + 1, Vec::new());
        }
        rows[layer].push(b);
    }
    for r in &mut rows {
        r.sort_unstable();
    }
    // Split every row into maximal brickwork runs (bonds two apart).
    let runs: Vec<Vec<Vec<usize>>> = rows
        .iter()
        .map(|r| {
            let mut out: Vec<Vec<usize>> = Vec::new();
            for &b in r {
                match out.last_mut() {
                    Some(run) if *run.last().expect("nonempty") + 2 == b => run.push(b),
                    _ => out.push(vec![b]),
                }
            }
            out
        })
        .collect();

    let nested = |wide: &[usize], narrow: &[usize]| {
        narrow.len() + 1 == wide.len() && narrow.iter().zip(wide).all(|(n, w)| *n == w + 1)
    };
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut found = Vec::new();
    for layer in 0..runs.len() {
        for (ri, run) in runs[layer].iter().enumerate() {
            if used.contains(&(layer, ri)) {
                continue;
            }
            // Shrinking downward or growing downward from this run.
            for shrinking in [true, false] {
                let mut chain = vec![(layer, ri)];
                let mut current = run.clone();
                let mut next_layer = layer + 1;
                while next_layer < runs.len() {
                    let hit = runs[next_layer].iter().position(|cand| {
                        if shrinking {
                            nested(&current, cand)
                        } else {
                            nested(cand, &current)
                        }
                    });
                    match hit {
                        Some(k) => {
                            chain.push((next_layer, k));
                            current = runs[next_layer][k].clone();
                            next_layer += 1;
                        }
                        None => break,
                    }
                }
                if chain.len() >= 2 {
                    used.extend(chain.iter().copied());
                    found.push(PyramidSegment {
                        rows: chain.iter().map(|&(l, k)| runs[l][k].clone()).collect(),
                    });
                    break;
                }
            }
        }
    }
    found
}

const CIRCUIT_MPO_LIMIT: usize = 12;
const CIRCUIT_MPO_CUTOFF: f64 = 1e-12;

/// Dense `2^L × 2^L` unitary of the circuit (site 0 most significant).
pub fn circuit_unitary(circuit: &Circuit) -> Result<Array2<C64>> {
    let n = circuit.n_sites;
    if n > CIRCUIT_MPO_LIMIT {
        return Err(Error::Size {
            sites: n,
            limit: CIRCUIT_MPO_LIMIT,
        });
    }
    let dim = 1usize << n;
    let mut u = Array2::<C64>::eye(dim);
    for (bond, gate) in &circuit.gates {
        let g = gate.to_unitary()?;
        let j = bond - 1;
        let outer = 1usize << j;
        let inner = 1usize << (n - j - 2);
        let data = u.as_slice_mut().expect("standard layout");
        // Row index = (a, s, b) with s the two-site index; columns are untouched.
        for a in 0..outer {
            for b in 0..inner {
                let rows: [usize; 4] = std::array::from_fn(|s| ((a * 4 + s) * inner + b) * dim);
                for col in 0..dim {
                    let v: [C64; 4] = std::array::from_fn(|s| data[rows[s] + col]);
                    for s in 0..4 {
                        data[rows[s] + col] = (0..4).map(|t| g[(s, t)] * v[t]).sum();
                    }
                }
            }
        }
    }
    Ok(u)
}

/// Exact MPO of the circuit unitary by sequential SVD of the dense operator.
pub fn circuit_to_mpo(circuit: &Circuit) -> Result<MpoOperator> {
    let n = circuit.n_sites;
    if n == 0 {
        return argument("empty chain");
    }
    let u = circuit_unitary(circuit)?;
    // (o_0..o_{n-1}, i_0..i_{n-1}) → (o_0, i_0, o_1, i_1, ...)
    let t = u
        .into_shape_with_order(IxDyn(&vec![2; 2 * n]))
        .expect("reshape");
    let perm: Vec<usize> = (0..n).flat_map(|k| [k, n + k]).collect();
    let t: ArrayD<C64> = t.permuted_axes(IxDyn(&perm)).standard();
    let mut rest = t
        .into_shape_with_order((1, 1usize << (2 * n)))
        .expect("reshape");
    let mut tensors = Vec::with_capacity(n);
    for site in 0..n {
        let dl = rest.nrows();
        let cols = rest.len() / (dl * 4);
        let m = rest
            .standard()
            .into_shape_with_order((dl * 4, cols))
            .expect("reshape");
        if site == n - 1 {
            tensors.push(m.into_shape_with_order((dl, 2, 2, 1)).expect("reshape"));
            break;
        }
        let (a, s, vt) = svd_thin(&m.view())?;
        let smax = s.iter().copied().fold(0.0, f64::max);
        let keep = s
            .iter()
            .filter(|&&x| x > CIRCUIT_MPO_CUTOFF * smax.max(1.0))
            .count()
            .max(1);
        let w = a.slice(ndarray::s![.., ..keep]).to_owned();
        tensors.push(
            w.standard()
                .into_shape_with_order((dl, 2, 2, keep))
                .expect("reshape"),
        );
        let mut next = vt.slice(ndarray::s![..keep, ..]).to_owned();
        for (mut row, &sv) in next.rows_mut().into_iter().zip(s.iter()) {
            row.mapv_inplace(|z| z * sv);
        }
        rest = next;
    }
    let tensors: Vec<Array4<C64>> = tensors;
    MpoOperator::from_tensors(&tensors)
}

/// `∏_{i=1}^{L-1} CNOT_{i+1,i}` applied bond by bond from the left; the
/// control is the right site of each pair.
pub fn cnot_staircase(n_sites: usize) -> Result<Circuit> {
    if n_sites < 2 {
        return argument("staircase needs at least two sites");
    }
    Circuit::from_gates(
        n_sites,
        (1..n_sites).map(|b| (b, CliffordTableau::cnot(1, 0))),
    )
}

/// Triangle of swaps `rows[k] = {apex - h + k + 1, ..., apex + h - k - 1}`
/// in steps of two, widest row first.
pub fn swap_pyramid(n_sites: usize, apex: usize, height: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n_sites);
    for k in 0..height {
        let half = height - 1 - k;
        for step in 0..=half {
            let b = apex + 2 * step;
            c.push(
                b.checked_sub(half)
                    .ok_or_else(|| Error::Argument("pyramid leaves the chain".into()))?,
                CliffordTableau::swap(),
            )?;
        }
    }
    Ok(c)
}

/// The labelled gates of the reference XXZ circuit, as images of
/// `XI, IX, ZI, IZ`.
pub fn reference_gate(label: char) -> Result<CliffordTableau> {
    let images: [&str; 4] = match label.to_ascii_uppercase() {
        'A' => ["+ZZ", "+IZ", "+YZ", "+XX"],
        'B' => ["+XZ", "+ZX", "+XY", "+YX"],
        'C' => ["+XI", "+XX", "+ZZ", "+IZ"],
        'D' => ["-IX", "+YI", "-IZ", "+XI"],
        'E' => ["+XI", "-XZ", "+ZX", "+IX"],
        'F' => ["+ZI", "-ZZ", "+XX", "+IX"],
        'S' => ["+IX", "+XI", "+IZ", "+ZI"],
        other => return argument(format!("no reference gate labelled {other:?}")),
    };
    // Tableau order is X1, Z1, X2, Z2.
    CliffordTableau::from_strs([images[0], images[2], images[1], images[3]])
}

/// Two-layer circuit taking the open XXZ chain to its Ashkin–Teller form:
/// `A` on bonds `1..L-1` left to right, then from bond `L-2` down to 1 `D` on
/// even bonds and `C` on odd ones. `E` or `F` in place of `C` give the same
/// conjugated Hamiltonian.
pub fn reference_xxz_circuit(n_sites: usize) -> Result<Circuit> {
    if n_sites < 3 {
        return argument("reference circuit needs at least three sites");
    }
    let (a, c, d) = (
        reference_gate('A')?,
        reference_gate('C')?,
        reference_gate('D')?,
    );
    let mut circuit = Circuit::new(n_sites);
    for b in 1..n_sites {
        circuit.push(b, a)?;
    }
    for b in (1..n_sites - 1).rev() {
        circuit.push(b, if b % 2 == 0 { d } else { c })?;
    }
    Ok(circuit)
}

pub const REFERENCE_GATE_LABELS: [char; 7] = ['A', 'B', 'C', 'D', 'E', 'F', 'S'];

/// Dual of the transverse-field Ising chain:
/// `−g Σ_{j<L} Z_j Z_{j+1} − Σ_{j<L} X_j − g Z_1` (1-based sites).
pub fn kramers_wannier_dual(n_sites: usize, g: f64) -> Result<PauliSum> {
    if n_sites < 2 {
        return argument("dual chain needs at least two sites");
    }
    let mut h = PauliSum::new(n_sites);
    for j in 0..n_sites - 1 {
        h.add(-g, &[(j, Pauli::Z), (j + 1, Pauli::Z)])?;
        h.add(-1.0, &[(j, Pauli::X)])?;
    }
    h.add(-g, &[(0, Pauli::Z)])?;
    Ok(h.canonical_form())
}

/// Ashkin–Teller image of the open XXZ chain, for even `L ≥ 6`. Written with
/// 1-based sites:
///
/// ```text
/// Σ_{j=2}^{L−3} X_j X_{j+2} + Σ_{j=2}^{L−1} Y_j
///   − g Σ_{l=1}^{L/2−2} X_{2l} X_{2l+1} X_{2l+2} X_{2l+3}
///   − g Σ_{l=1}^{L/2−1} Y_{2l} Y_{2l+1}
///   + X_1 X_2 + X_3 + X_{L−2} + X_{L−1} X_L
///   − g (X_1 X_2 X_3 + X_{L−2} X_{L−1} X_L)
/// ```
pub fn ashkin_teller_dual(n_sites: usize, g: f64) -> Result<PauliSum> {
    let l = n_sites;
    if !l.is_multiple_of(2) {
        return argument(format!("Ashkin-Teller target needs even L, got {l}"));
    }
    if l < 6 {
        return argument(format!("Ashkin-Teller target needs L >= 6, got {l}"));
    }
    let mut h = PauliSum::new(l);
    let x = |j: usize| (j - 1, Pauli::X);
    let y = |j: usize| (j - 1, Pauli::Y);
    for j in 2..=l - 3 {
        h.add(1.0, &[x(j), x(j + 2)])?;
    }
    for j in 2..=l - 1 {
        h.add(1.0, &[y(j)])?;
    }
    for m in 1..=l / 2 - 2 {
        h.add(-g, &[x(2 * m), x(2 * m + 1), x(2 * m + 2), x(2 * m + 3)])?;
    }
    for m in 1..=l / 2 - 1 {
        h.add(-g, &[y(2 * m), y(2 * m + 1)])?;
    }
    h.add(1.0, &[x(1), x(2)])?;
    h.add(1.0, &[x(3)])?;
    h.add(1.0, &[x(l - 2)])?;
    h.add(1.0, &[x(l - 1), x(l)])?;
    h.add(-g, &[x(1), x(2), x(3)])?;
    h.add(-g, &[x(l - 2), x(l - 1), x(l)])?;
    Ok(h.canonical_form())
}

/// Groups of sites connected through shared terms, each with its terms.
pub fn term_components(h: &PauliSum) -> Vec<(Vec<usize>, PauliSum)> {
    let n = h.n_sites();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    let mut active = vec![false; n];
    for t in h.terms() {
        let support = t.string.support();
        for &s in &support {
            active[s] = true;
        }
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for s in (0..n).filter(|&s| active[s]) {
        let r = find(&mut parent, s);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, sites)) => sites.push(s),
            None => groups.push((r, vec![s])),
        }
    }
    groups
        .into_iter()
        .map(|(r, sites)| {
            let mut part = PauliSum::new(n);
            for t in h.terms() {
                let s0 = t.string.support()[0];
                if find(&mut parent, s0) == r {
                    part.push(t.coefficient, t.string.clone())
                        .expect("same size");
                }
            }
            (sites, part)
        })
        .collect()
}

/// Every term is a one-body field or a two-body coupling, all couplings
/// use the same letter on both sites, and the coupled sites form a path.
pub fn is_ising_like(h: &PauliSum) -> bool {
    let mut coupling: Option<Pauli> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for t in h.terms() {
        let support = t.string.support();
        match support.as_slice() {
            [_] => {}
            [a, b] => {
                let (p, q) = (t.string.get(*a), t.string.get(*b));
                if p != q || *coupling.get_or_insert(p) != p {
                    return false;
                }
                edges.push((*a, *b));
            }
            _ => return false,
        }
    }
    // A path: every vertex has degree ≤ 2 and there are no cycles.
    let mut degree: HashMap<usize, usize> = HashMap::new();
    for &(a, b) in &edges {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    degree.values().all(|&d| d <= 2) && edges.len() < degree.len().max(1)
}
