//! Multi-site Pauli strings in symplectic form and real-weighted Pauli sums.
//!
//! A [`PauliString`] stores an X mask, a Z mask and a phase exponent `k`; the
//! operator it denotes is `i^k · P_1 ⊗ … ⊗ P_n` where every `P_j` is the
//! literal matrix I, X, Y or Z. Hermitian strings are exactly those with a
//! real phase.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{argument, Error, Result};
use crate::format::fmt12;
use crate::C64;

/// Largest chain handled by the dense routines.
pub const DENSE_SITE_LIMIT: usize = 14;

/// Coefficients below this magnitude are dropped by [`PauliSum::canonical_form`].
pub const ZERO_COEFFICIENT: f64 = 1e-12;

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// `(x, z)` symplectic bits.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Packed code `x | z << 1`: I=0, X=1, Z=2, Y=3.
    pub fn code(self) -> u8 {
        let (x, z) = self.bits();
        x as u8 | (z as u8) << 1
    }

    pub fn from_code(code: u8) -> Self {
        Self::from_bits(code & 1 != 0, code & 2 != 0)
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// `i^k` as a complex number.
pub fn phase_value(k: u8) -> C64 {
    match k & 3 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// An n-site Pauli operator with a phase in {+1, +i, -1, -i}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_sites: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n_sites: usize) -> Self {
        Self {
            n_sites,
            x: vec![0; words(n_sites)],
            z: vec![0; words(n_sites)],
            phase: 0,
        }
    }

    pub fn single(n_sites: usize, site: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n_sites);
        s.set(site, p);
        s
    }

    /// A string with the given letters placed at the given sites.
    pub fn from_sites(n_sites: usize, sites: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n_sites);
        for &(site, p) in sites {
            s.set(site, p);
        }
        s
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut s = Self::identity(letters.len());
        for (j, &p) in letters.iter().enumerate() {
            s.set(j, p);
        }
        s
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Phase exponent `k` of `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_value(&self) -> C64 {
        phase_value(self.phase)
    }

    pub fn with_phase(mut self, k: u8) -> Self {
        self.phase = k & 3;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn get(&self, site: usize) -> Pauli {
        assert!(site < self.n_sites, "site {site} out of range");
        let (w, b) = (site / 64, site % 64);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, site: usize, p: Pauli) {
        assert!(site < self.n_sites, "site {site} out of range");
        let (w, b) = (site / 64, site % 64);
        let (x, z) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | (x as u64) << b;
        self.z[w] = (self.z[w] & !(1 << b)) | (z as u64) << b;
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n_sites).map(|j| self.get(j)).collect()
    }

    pub fn letter_string(&self) -> String {
        self.letters().into_iter().map(Pauli::to_char).collect()
    }

    /// Sites carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_sites)
            .filter(|&j| self.get(j) != Pauli::I)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    /// The matrix product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        pauli_multiply(self, other)
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        pauli_commutes(self, other)
    }

    /// Dense `2^n × 2^n` matrix; site 0 is the most significant tensor factor.
    pub fn to_dense(&self) -> Result<Array2<C64>> {
        if self.n_sites > DENSE_SITE_LIMIT {
            return Err(Error::Size {
                sites: self.n_sites,
                limit: DENSE_SITE_LIMIT,
            });
        }
        let dim = 1usize << self.n_sites;
        let mut m = Array2::zeros((dim, dim));
        let action = BasisAction::new(self, C64::new(1.0, 0.0));
        for col in 0..dim {
            let (row, amp) = action.apply(col);
            m[(row, col)] += amp;
        }
        Ok(m)
    }

    fn letter_cmp(&self, other: &PauliString) -> Ordering {
        self.n_sites.cmp(&other.n_sites).then_with(|| {
            for j in 0..self.n_sites {
                match self.get(j).cmp(&other.get(j)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

/// Total order: letters site by site (I < X < Y < Z), then phase.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letter_cmp(other).then(self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.letter_string())
    }
}

/// Parses `XZI`, optionally prefixed by `+`, `-`, `+i`, `-i` or `i`.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i'))
        {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s.strip_prefix('+').unwrap_or(s))
        };
        if body.is_empty() {
            return argument("empty Pauli string");
        }
        let letters = body
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| Error::Argument(format!("bad Pauli letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters).with_phase(phase))
    }
}

fn check_sizes(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.n_sites != b.n_sites {
        return argument(format!(
            "Pauli strings act on {} and {} sites",
            a.n_sites, b.n_sites
        ));
    }
    Ok(())
}

/// Product `a · b` with the accumulated phase.
///
/// Writing each literal letter as `i^{xz} X^x Z^z`, the product picks up
/// `i^{x_a z_a + x_b z_b - x_c z_c} (-1)^{z_a x_b}` per site.
pub fn pauli_multiply(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    check_sizes(a, b)?;
    let mut out = PauliString::identity(a.n_sites);
    let mut anti = 0u32;
    for w in 0..a.x.len() {
        out.x[w] = a.x[w] ^ b.x[w];
        out.z[w] = a.z[w] ^ b.z[w];
        anti += (a.z[w] & b.x[w]).count_ones();
    }
    let k =
        a.phase as i64 + b.phase as i64 + a.y_count() as i64 + b.y_count() as i64 + 2 * anti as i64
            - out.y_count() as i64;
    out.phase = k.rem_euclid(4) as u8;
    Ok(out)
}

/// Whether `a` and `b` commute, from the symplectic inner product.
pub fn pauli_commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    check_sizes(a, b)?;
    let form: u32 = (0..a.x.len())
        .map(|w| (a.x[w] & b.z[w]).count_ones() + (a.z[w] & b.x[w]).count_ones())
        .sum();
    Ok(form.is_multiple_of(2))
}

/// Action of `coefficient · string` on computational basis states, for dense
/// and matrix-free routines. Site 0 is the most significant bit.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BasisAction {
    flip: usize,
    zmask: usize,
    amplitude: C64,
}

impl BasisAction {
    pub(crate) fn new(s: &PauliString, coefficient: C64) -> Self {
        let n = s.n_sites;
        let (mut flip, mut zmask) = (0usize, 0usize);
        for j in 0..n {
            let (x, z) = s.get(j).bits();
            let bit = 1usize << (n - 1 - j);
            if x {
                flip |= bit;
            }
            if z {
                zmask |= bit;
            }
        }
        let amplitude = coefficient * phase_value(s.phase + (s.y_count() % 4) as u8);
        Self {
            flip,
            zmask,
            amplitude,
        }
    }

    /// Returns `(row, amplitude)` with `P|col⟩ = amplitude |row⟩`.
    #[inline]
    pub(crate) fn apply(&self, col: usize) -> (usize, C64) {
        let sign = (self.zmask & col).count_ones() % 2 == 1;
        let amp = if sign {
            -self.amplitude
        } else {
            self.amplitude
        };
        (col ^ self.flip, amp)
    }
}

/// A real-weighted Hermitian Pauli term; the string always carries phase +1.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    /// Folds a real phase of `string` into the coefficient.
    pub fn new(coefficient: f64, string: PauliString) -> Result<Self> {
        if !coefficient.is_finite() {
            return argument(format!("non-finite coefficient {coefficient}"));
        }
        match string.phase {
            0 => Ok(Self {
                coefficient,
                string,
            }),
            2 => Ok(Self {
                coefficient: -coefficient,
                string: string.with_phase(0),
            }),
            _ => argument(format!("non-Hermitian term {string}")),
        }
    }
}

/// A Hamiltonian `Σ_k c_k P_k` on an open chain.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_sites: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(n_sites: usize) -> Self {
        Self {
            n_sites,
            terms: Vec::new(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coefficient: f64, string: PauliString) -> Result<()> {
        if string.n_sites != self.n_sites {
            return argument(format!(
                "term on {} sites added to a {}-site sum",
                string.n_sites, self.n_sites
            ));
        }
        self.terms.push(PauliTerm::new(coefficient, string)?);
        Ok(())
    }

    /// Convenience for builders: `coefficient · ⊗_{(site, letter)}`.
    pub fn add(&mut self, coefficient: f64, sites: &[(usize, Pauli)]) -> Result<()> {
        if let Some(&(s, _)) = sites.iter().find(|(s, _)| *s >= self.n_sites) {
            return argument(format!("site {s} outside a {}-site chain", self.n_sites));
        }
        self.push(coefficient, PauliString::from_sites(self.n_sites, sites))
    }

    pub fn from_terms(
        n_sites: usize,
        terms: impl IntoIterator<Item = (f64, PauliString)>,
    ) -> Result<Self> {
        let mut h = Self::new(n_sites);
        for (c, s) in terms {
            h.push(c, s)?;
        }
        Ok(h)
    }

    /// Sorted by string, duplicates merged, near-zero coefficients dropped.
    pub fn canonical_form(&self) -> PauliSum {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.string.cmp(&b.string));
        let mut merged: Vec<PauliTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.string == t.string => last.coefficient += t.coefficient,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coefficient.abs() >= ZERO_COEFFICIENT);
        PauliSum {
            n_sites: self.n_sites,
            terms: merged,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].string < w[1].string)
            && self
                .terms
                .iter()
                .all(|t| t.coefficient.abs() >= ZERO_COEFFICIENT)
    }

    /// Canonical difference `self - other`.
    pub fn difference(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_sites != other.n_sites {
            return argument("Pauli sums on different chain lengths");
        }
        let mut d = self.clone();
        d.terms.extend(other.terms.iter().map(|t| PauliTerm {
            coefficient: -t.coefficient,
            string: t.string.clone(),
        }));
        Ok(d.canonical_form())
    }

    /// Term-for-term equality of canonical forms, coefficients within `tol`.
    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        let (a, b) = (self.canonical_form(), other.canonical_form());
        a.n_sites == b.n_sites
            && a.terms.len() == b.terms.len()
            && a.terms
                .iter()
                .zip(&b.terms)
                .all(|(s, t)| s.string == t.string && (s.coefficient - t.coefficient).abs() <= tol)
    }

    pub fn to_dense(&self) -> Result<Array2<C64>> {
        if self.n_sites > DENSE_SITE_LIMIT {
            return Err(Error::Size {
                sites: self.n_sites,
                limit: DENSE_SITE_LIMIT,
            });
        }
        let dim = 1usize << self.n_sites;
        let mut m = Array2::zeros((dim, dim));
        for t in &self.terms {
            let action = BasisAction::new(&t.string, C64::new(t.coefficient, 0.0));
            for col in 0..dim {
                let (row, amp) = action.apply(col);
                m[(row, col)] += amp;
            }
        }
        Ok(m)
    }

    /// Matrix-free `H v` on the full `2^n` space.
    pub fn apply_dense_vector(&self, v: &[C64]) -> Result<Vec<C64>> {
        let dim = 1usize << self.n_sites;
        if v.len() != dim {
            return argument(format!(
                "vector of length {} for a {dim}-dimensional space",
                v.len()
            ));
        }
        let actions: Vec<BasisAction> = self
            .terms
            .iter()
            .map(|t| BasisAction::new(&t.string, C64::new(t.coefficient, 0.0)))
            .collect();
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (col, &amp) in v.iter().enumerate() {
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            for a in &actions {
                let (row, m) = a.apply(col);
                out[row] += m * amp;
            }
        }
        Ok(out)
    }

    /// Text form: one `<coeff> <letters>` line per term.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&fmt12(t.coefficient));
            out.push(' ');
            out.push_str(&t.string.letter_string());
            out.push('\n');
        }
        out
    }

    /// Parses the text form; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<PauliSum> {
        let mut n_sites = None;
        let mut terms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(c), Some(letters), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(perr("expected `<coeff> <letters>`".into()));
            };
            let c: f64 = c
                .parse()
                .map_err(|e| perr(format!("coefficient {c:?}: {e}")))?;
            let s: PauliString = letters.parse().map_err(|e: Error| perr(e.to_string()))?;
            if s.phase != 0 {
                return Err(perr("letters must not carry a phase".into()));
            }
            match n_sites {
                None => n_sites = Some(s.n_sites),
                Some(n) if n != s.n_sites => {
                    return Err(perr(format!("term has {} sites, expected {n}", s.n_sites)))
                }
                _ => {}
            }
            terms.push((c, s));
        }
        let n = n_sites.ok_or_else(|| Error::Parse {
            line: 0,
            message: "no terms".into(),
        })?;
        PauliSum::from_terms(n, terms)
    }
}

/// Spin-chain models with a builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// `-Σ Z_j Z_{j+1} - g Σ X_j`
    Ising,
    /// `Σ (X_j X_{j+1} + Y_j Y_{j+1} + g Z_j Z_{j+1})`
    Xxz,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Ising => "ising",
            Model::Xxz => "xxz",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ising" | "tfim" => Ok(Model::Ising),
            "xxz" | "heisenberg" | "xx" => Ok(Model::Xxz),
            other => argument(format!("unknown model {other:?}")),
        }
    }
}

/// Open-boundary Ising or XXZ chain of `length` sites.
pub fn build_model(model: Model, length: usize, g: f64) -> Result<PauliSum> {
    use Pauli::*;
    if length < 2 {
        return argument(format!("chain length {length} < 2"));
    }
    if !g.is_finite() {
        return argument("non-finite coupling");
    }
    let mut h = PauliSum::new(length);
    match model {
        Model::Ising => {
            for j in 0..length - 1 {
                h.add(-1.0, &[(j, Z), (j + 1, Z)])?;
            }
            if g != 0.0 {
                for j in 0..length {
                    h.add(-g, &[(j, X)])?;
                }
            }
        }
        Model::Xxz => {
            for j in 0..length - 1 {
                h.add(1.0, &[(j, X), (j + 1, X)])?;
                h.add(1.0, &[(j, Y), (j + 1, Y)])?;
                if g != 0.0 {
                    h.add(g, &[(j, Z), (j + 1, Z)])?;
                }
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dense_commutator_norm, dense_eigvalsh, matmul};
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_site_products() {
        let p = pauli_multiply(&ps("XI"), &ps("YI")).unwrap();
        assert_eq!(p, ps("+iZI"));
        for s in ["XI", "YZ", "ZY", "IX", "YY"] {
            let sq = pauli_multiply(&ps(s), &ps(s)).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase(), 0);
        }
    }

    #[test]
    fn product_matches_dense_matrices() {
        let (a, b) = (ps("XZ"), ps("ZZ"));
        let p = pauli_multiply(&a, &b).unwrap();
        assert_eq!(p, ps("-iYI"));
        let dense = matmul(&a.to_dense().unwrap(), &b.to_dense().unwrap());
        let diff = &dense - &p.to_dense().unwrap();
        assert!(diff.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn commutation_examples() {
        assert!(pauli_commutes(&ps("XI"), &ps("IZ")).unwrap());
        assert!(!pauli_commutes(&ps("XI"), &ps("ZI")).unwrap());
        assert!(pauli_commutes(&ps("XX"), &ps("ZZ")).unwrap());
        assert!(pauli_commutes(&ps("XI"), &ps("ZZZ")).is_err());
    }

    #[test]
    fn commutation_agrees_with_dense_commutator_exhaustively() {
        let all: Vec<PauliString> = Pauli::ALL
            .iter()
            .flat_map(|&a| {
                Pauli::ALL
                    .iter()
                    .map(move |&b| PauliString::from_letters(&[a, b]))
            })
            .collect();
        for a in &all {
            for b in &all {
                let dense = dense_commutator_norm(&a.to_dense().unwrap(), &b.to_dense().unwrap());
                assert_eq!(pauli_commutes(a, b).unwrap(), dense < 1e-12, "{a} {b}");
            }
        }
    }

    #[test]
    fn model_builders() {
        let h = build_model(Model::Ising, 2, 1.0).unwrap();
        let expected =
            PauliSum::from_terms(2, [(-1.0, ps("ZZ")), (-1.0, ps("XI")), (-1.0, ps("IX"))])
                .unwrap();
        assert!(h.approx_eq(&expected, 0.0));

        let h = build_model(Model::Xxz, 2, 0.0).unwrap();
        let expected = PauliSum::from_terms(2, [(1.0, ps("XX")), (1.0, ps("YY"))]).unwrap();
        assert!(h.approx_eq(&expected, 0.0));

        let h = build_model(Model::Ising, 3, 0.0).unwrap();
        assert_eq!(h.len(), 2);
        assert!(build_model(Model::Ising, 1, 1.0).is_err());

        for l in 2..9 {
            assert_eq!(build_model(Model::Ising, l, 0.7).unwrap().len(), 2 * l - 1);
            assert_eq!(build_model(Model::Xxz, l, 0.5).unwrap().len(), 3 * (l - 1));
            assert_eq!(build_model(Model::Xxz, l, 0.0).unwrap().len(), 2 * (l - 1));
        }
    }

    #[test]
    fn canonical_form_merges_and_cancels() {
        let h = PauliSum::from_terms(2, [(1.0, ps("ZZ")), (-1.0, ps("ZZ"))]).unwrap();
        assert!(h.canonical_form().is_empty());
        let h = PauliSum::from_terms(2, [(-1.0, ps("IX")), (-1.0, ps("ZZ"))]).unwrap();
        let c = h.canonical_form();
        assert_eq!(c.len(), 2);
        assert_eq!(c.canonical_form(), c);
        assert!(c.is_canonical());
    }

    #[test]
    fn single_site_dense_and_spectrum() {
        let h = PauliSum::from_terms(1, [(-1.0, ps("X"))]).unwrap();
        let m = h.to_dense().unwrap();
        assert_eq!(m[(0, 1)], C64::new(-1.0, 0.0));
        assert_eq!(m[(0, 0)], C64::new(0.0, 0.0));

        // -ZZ - X1 - X2: characteristic polynomial gives ±√5 and ±1.
        let m = build_model(Model::Ising, 2, 1.0)
            .unwrap()
            .to_dense()
            .unwrap();
        let ev = dense_eigvalsh(&m).unwrap();
        let expected = [-(5f64.sqrt()), -1.0, 1.0, 5f64.sqrt()];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn ising_commutes_with_global_spin_flip() {
        for l in 2..=8 {
            let h = build_model(Model::Ising, l, 0.8)
                .unwrap()
                .to_dense()
                .unwrap();
            let eta = PauliString::from_letters(&vec![Pauli::X; l])
                .to_dense()
                .unwrap();
            assert!(dense_commutator_norm(&h, &eta) < 1e-12);
        }
    }

    #[test]
    fn dense_size_guard() {
        let h = build_model(Model::Ising, 15, 1.0).unwrap();
        assert!(matches!(h.to_dense(), Err(Error::Size { .. })));
    }

    #[test]
    fn text_format_round_trip() {
        let h = build_model(Model::Xxz, 4, 0.5).unwrap();
        let text = h.to_text();
        assert!(text.starts_with("1 XXII\n"));
        let back = PauliSum::from_text(&text).unwrap();
        assert_eq!(back, h);
        let parsed = PauliSum::from_text("# c\n-1.0 ZZI\n-0.5 IIX\n").unwrap();
        assert_eq!(parsed.n_sites(), 3);
        assert!(PauliSum::from_text("-1.0 ZZ\n1 XXX\n").is_err());
        assert!(PauliSum::from_text("abc ZZ\n").is_err());
    }

    fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
        (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(|(codes, k)| {
            let letters: Vec<Pauli> = codes.into_iter().map(Pauli::from_code).collect();
            PauliString::from_letters(&letters).with_phase(k)
        })
    }

    fn arb_sum(n: usize) -> impl Strategy<Value = PauliSum> {
        proptest::collection::vec((-3i32..=3, arb_string(n)), 0..12).prop_map(move |terms| {
            PauliSum::from_terms(
                n,
                terms
                    .into_iter()
                    .map(|(c, s)| (c as f64 * 0.5, s.with_phase(0))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in arb_string(70), b in arb_string(70), c in arb_string(70)) {
            let ab_c = pauli_multiply(&pauli_multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = pauli_multiply(&a, &pauli_multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }

        #[test]
        fn product_matches_dense_on_three_sites(a in arb_string(3), b in arb_string(3)) {
            let p = pauli_multiply(&a, &b).unwrap();
            let dense = matmul(&a.to_dense().unwrap(), &b.to_dense().unwrap());
            let diff = &dense - &p.to_dense().unwrap();
            prop_assert!(diff.iter().all(|z| z.norm() < 1e-14));
        }

        #[test]
        fn canonical_form_is_idempotent(h in arb_sum(4)) {
            let c = h.canonical_form();
            prop_assert_eq!(c.canonical_form(), c.clone());
            prop_assert!(c.len() <= h.len());
            let diff = &h.to_dense().unwrap() - &c.to_dense().unwrap();
            prop_assert!(diff.iter().all(|z| z.norm() < 1e-12));
        }

        #[test]
        fn parse_display_round_trip(s in arb_string(9)) {
            let back: PauliString = s.to_string().parse().unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
