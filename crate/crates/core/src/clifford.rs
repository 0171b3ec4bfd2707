//! Two-qubit Clifford tableaux.
//!
//! A tableau records the conjugation images `U P U†` of the generators
//! X₁, Z₁, X₂, Z₂; global phase is not represented. The full group has
//! 11520 elements, and modulo output-side single-qubit gates it splits into
//! 20 left classes, which is all a disentangler search has to visit.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use ndarray::Array2;

use crate::error::{argument, Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::C64;

/// Two-site Pauli in symplectic bits: bit 0 is site 1, bit 1 is site 2.
/// The operator is `i^k` times the literal letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct P2 {
    x: u8,
    z: u8,
    k: u8,
}

impl P2 {
    const IDENTITY: P2 = P2 { x: 0, z: 0, k: 0 };

    fn from_code(code: u8) -> Self {
        P2 {
            x: code & 3,
            z: code >> 2,
            k: 0,
        }
    }

    fn code(self) -> u8 {
        self.x | self.z << 2
    }

    fn letter(self, site: usize) -> Pauli {
        Pauli::from_bits(self.x >> site & 1 == 1, self.z >> site & 1 == 1)
    }

    fn from_letters(a: Pauli, b: Pauli, negative: bool) -> Self {
        let (xa, za) = a.bits();
        let (xb, zb) = b.bits();
        P2 {
            x: xa as u8 | (xb as u8) << 1,
            z: za as u8 | (zb as u8) << 1,
            k: if negative { 2 } else { 0 },
        }
    }

    fn ys(self) -> u32 {
        (self.x & self.z).count_ones()
    }

    fn mul(self, o: P2) -> P2 {
        let x = self.x ^ o.x;
        let z = self.z ^ o.z;
        let out = P2 { x, z, k: 0 };
        let k = self.k as i32
            + o.k as i32
            + self.ys() as i32
            + o.ys() as i32
            + 2 * (self.z & o.x).count_ones() as i32
            - out.ys() as i32;
        P2 {
            k: k.rem_euclid(4) as u8,
            ..out
        }
    }

    fn commutes(self, o: P2) -> bool {
        ((self.x & o.z).count_ones() + (self.z & o.x).count_ones()).is_multiple_of(2)
    }

    fn to_string_signed(self) -> String {
        let sign = match self.k {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        format!(
            "{sign}{}{}",
            self.letter(0).to_char(),
            self.letter(1).to_char()
        )
    }

    /// Sort key with letter rank I < X < Z < Y (the packed symplectic code),
    /// so the identity tableau is the least element of its left class.
    fn order_key(self) -> (u8, u8, u8) {
        (self.letter(0).code(), self.letter(1).code(), self.k)
    }
}

/// Generator labels in tableau order.
pub const GENERATORS: [&str; 4] = ["X1", "Z1", "X2", "Z2"];

/// A two-qubit Clifford gate as the images of X₁, Z₁, X₂, Z₂.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    images: [P2; 4],
}

/// Generator image: two letters and a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedPauli2 {
    pub letters: [Pauli; 2],
    pub negative: bool,
}

impl SignedPauli2 {
    pub fn new(a: Pauli, b: Pauli, negative: bool) -> Self {
        Self {
            letters: [a, b],
            negative,
        }
    }

    pub fn to_pauli_string(self) -> PauliString {
        PauliString::from_letters(&self.letters).with_phase(if self.negative { 2 } else { 0 })
    }
}

impl CliffordTableau {
    pub fn identity() -> Self {
        Self {
            images: [
                P2::from_letters(Pauli::X, Pauli::I, false),
                P2::from_letters(Pauli::Z, Pauli::I, false),
                P2::from_letters(Pauli::I, Pauli::X, false),
                P2::from_letters(Pauli::I, Pauli::Z, false),
            ],
        }
    }

    /// Builds a tableau from generator images, checking the symplectic condition.
    pub fn from_images(images: [SignedPauli2; 4]) -> Result<Self> {
        let t = Self {
            images: images.map(|s| P2::from_letters(s.letters[0], s.letters[1], s.negative)),
        };
        t.validate()?;
        Ok(t)
    }

    /// From `(letters, sign)` pairs written like the text encoding, e.g. `("+XX", ...)`.
    pub fn from_strs(images: [&str; 4]) -> Result<Self> {
        let mut out = [SignedPauli2::new(Pauli::I, Pauli::I, false); 4];
        for (slot, s) in out.iter_mut().zip(images) {
            *slot = parse_signed(s)?;
        }
        Self::from_images(out)
    }

    pub fn images(&self) -> [SignedPauli2; 4] {
        self.images.map(|p| SignedPauli2 {
            letters: [p.letter(0), p.letter(1)],
            negative: p.k == 2,
        })
    }

    /// Checks Hermitian images and the canonical commutation relations.
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.images.iter().enumerate() {
            if p.k % 2 != 0 {
                return Err(Error::InvalidTableau(format!(
                    "image of {} is not Hermitian",
                    GENERATORS[i]
                )));
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                let should_anticommute = (i, j) == (0, 1) || (i, j) == (2, 3);
                if self.images[i].commutes(self.images[j]) == should_anticommute {
                    return Err(Error::InvalidTableau(format!(
                        "images of {} and {} violate the symplectic form",
                        GENERATORS[i], GENERATORS[j]
                    )));
                }
            }
        }
        Ok(())
    }

    fn conj_p2(&self, p: P2) -> P2 {
        let mut out = P2 {
            k: (p.k as u32 + p.ys()) as u8 % 4,
            ..P2::IDENTITY
        };
        let factors = [
            (p.x & 1, 0),
            (p.z & 1, 1),
            (p.x >> 1 & 1, 2),
            (p.z >> 1 & 1, 3),
        ];
        for (bit, g) in factors {
            if bit == 1 {
                out = out.mul(self.images[g]);
            }
        }
        out
    }

    /// `(image code, phase exponent)` for each literal two-site Pauli code,
    /// with code = x bits | z bits << 2.
    pub(crate) fn conjugation_table(&self) -> [(u8, u8); 16] {
        let mut table = [(0, 0); 16];
        for (code, slot) in table.iter_mut().enumerate() {
            let img = self.conj_p2(P2::from_code(code as u8));
            *slot = (img.code(), img.k);
        }
        table
    }

    /// Conjugation action on one letter pair: `U (a⊗b) U† = i^k (c⊗d)`.
    pub(crate) fn conjugate_letters(&self, a: Pauli, b: Pauli) -> (Pauli, Pauli, u8) {
        let img = self.conj_p2(P2::from_letters(a, b, false));
        (img.letter(0), img.letter(1), img.k)
    }

    /// Inverse element: `inverse(t)` undoes `t`.
    pub fn inverse(&self) -> Self {
        let table = self.conjugation_table();
        let mut images = [P2::IDENTITY; 4];
        for (g, slot) in images.iter_mut().enumerate() {
            let target = CliffordTableau::identity().images[g];
            let (code, k) = table
                .iter()
                .enumerate()
                .find(|(_, (c, _))| *c == target.code())
                .map(|(code, &(_, k))| (code as u8, k))
                .expect("a Clifford permutes the Pauli group");
            // U P U† = i^k g  ⇒  U† g U = i^{-k} P
            *slot = P2 {
                k: (4 - k) % 4,
                ..P2::from_code(code)
            };
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Hadamard on qubit `q` (0 or 1).
    pub fn hadamard(q: usize) -> Self {
        Self::single_qubit(q, LocalClifford::hadamard())
    }

    /// Phase gate S on qubit `q`.
    pub fn phase(q: usize) -> Self {
        Self::single_qubit(q, LocalClifford::phase())
    }

    pub fn single_qubit(q: usize, u: LocalClifford) -> Self {
        if q == 0 {
            Self::local(u, LocalClifford::identity())
        } else {
            Self::local(LocalClifford::identity(), u)
        }
    }

    /// `u0 ⊗ u1`.
    pub fn local(u0: LocalClifford, u1: LocalClifford) -> Self {
        let (x0, z0) = (u0.x_image, u0.z_image);
        let (x1, z1) = (u1.x_image, u1.z_image);
        Self {
            images: [
                P2::from_letters(x0.0, Pauli::I, x0.1),
                P2::from_letters(z0.0, Pauli::I, z0.1),
                P2::from_letters(Pauli::I, x1.0, x1.1),
                P2::from_letters(Pauli::I, z1.0, z1.1),
            ],
        }
    }

    /// Single-qubit factors when the gate is a product `u0 ⊗ u1`.
    pub fn local_factors(&self) -> Option<(LocalClifford, LocalClifford)> {
        let [x0, z0, x1, z1] = self.images;
        let on_site0 = |p: P2| p.letter(1) == Pauli::I;
        let on_site1 = |p: P2| p.letter(0) == Pauli::I;
        if !(on_site0(x0) && on_site0(z0) && on_site1(x1) && on_site1(z1)) {
            return None;
        }
        Some((
            LocalClifford {
                x_image: (x0.letter(0), x0.k == 2),
                z_image: (z0.letter(0), z0.k == 2),
            },
            LocalClifford {
                x_image: (x1.letter(1), x1.k == 2),
                z_image: (z1.letter(1), z1.k == 2),
            },
        ))
    }

    /// CNOT with the given control and target qubits (0 or 1).
    pub fn cnot(control: usize, target: usize) -> Self {
        assert!(control < 2 && target < 2 && control != target);
        if control == 0 {
            Self::from_strs(["+XX", "+ZI", "+IX", "+ZZ"]).expect("valid")
        } else {
            Self::from_strs(["+XI", "+ZZ", "+XX", "+IZ"]).expect("valid")
        }
    }

    pub fn cz() -> Self {
        Self::from_strs(["+XZ", "+ZI", "+ZX", "+IZ"]).expect("valid")
    }

    pub fn swap() -> Self {
        Self::from_strs(["+IX", "+IZ", "+XI", "+ZI"]).expect("valid")
    }

    /// Text encoding `X1->±LL;Z1->±LL;X2->±LL;Z2->±LL`.
    pub fn encode(&self) -> String {
        GENERATORS
            .iter()
            .zip(self.images)
            .map(|(g, p)| format!("{g}->{}", p.to_string_signed()))
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Symplectic block ranks `(rank A, rank C)`, where A maps site-1 generators
    /// to site-1 letters and C maps site-1 generators to site-2 letters.
    fn block_ranks(&self) -> (u32, u32) {
        let col = |p: P2, site: usize| (p.x >> site & 1) | (p.z >> site & 1) << 1;
        let rank2 = |a: u8, b: u8| -> u32 {
            match (a, b) {
                (0, 0) => 0,
                (a, b) if a == 0 || b == 0 || a == b => 1,
                _ => 2,
            }
        };
        let a = rank2(col(self.images[0], 0), col(self.images[1], 0));
        let c = rank2(col(self.images[0], 1), col(self.images[1], 1));
        (a, c)
    }

    /// Class under single-qubit gates on both sides.
    pub fn entangling_class(&self) -> GateClass {
        match self.block_ranks() {
            (_, 0) => GateClass::Local,
            (_, 1) => GateClass::Cnot,
            (0, _) => GateClass::Swap,
            _ => GateClass::Iswap,
        }
    }

    /// 4×4 unitary realising the tableau, phase fixed so the first non-zero
    /// entry (row-major) is real and positive. Basis `|q1 q2⟩`, qubit 1 most
    /// significant.
    pub fn to_unitary(&self) -> Result<Array2<C64>> {
        self.validate()?;
        let dense = |p: P2| -> Array2<C64> {
            PauliString::from_letters(&[p.letter(0), p.letter(1)])
                .with_phase(p.k)
                .to_dense()
                .expect("two sites")
        };
        let id = Array2::<C64>::eye(4);
        let g1 = dense(self.images[1]);
        let g2 = dense(self.images[3]);
        // U|00⟩ spans the joint +1 eigenspace of the images of Z₁ and Z₂.
        let proj = (&id + &g1).dot(&(&id + &g2));
        let col = (0..4)
            .max_by(|&a, &b| {
                let na: f64 = proj.column(a).iter().map(|z| z.norm_sqr()).sum();
                let nb: f64 = proj.column(b).iter().map(|z| z.norm_sqr()).sum();
                na.total_cmp(&nb)
            })
            .expect("four columns");
        let mut v0 = proj.column(col).to_owned();
        let norm = v0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v0.mapv_inplace(|z| z / norm);

        let x1 = dense(self.images[0]);
        let x2 = dense(self.images[2]);
        let mut u = Array2::<C64>::zeros((4, 4));
        for b in 0..4usize {
            let mut v = v0.clone();
            if b & 1 == 1 {
                v = x2.dot(&v);
            }
            if b & 2 == 2 {
                v = x1.dot(&v);
            }
            u.column_mut(b).assign(&v);
        }
        if let Some(&z) = u.iter().find(|z| z.norm() > 1e-12) {
            let phase = z.conj() / z.norm();
            u.mapv_inplace(|w| w * phase);
        }
        Ok(u)
    }

    /// Reads a tableau back from a 4×4 Clifford unitary.
    pub fn from_unitary(u: &Array2<C64>) -> Result<Self> {
        if u.dim() != (4, 4) {
            return argument("expected a 4x4 matrix");
        }
        let ud = u.t().mapv(|z| z.conj());
        let mut images = [P2::IDENTITY; 4];
        for (g, slot) in images.iter_mut().enumerate() {
            let gen = CliffordTableau::identity().images[g];
            let gd = PauliString::from_letters(&[gen.letter(0), gen.letter(1)]).to_dense()?;
            let m = u.dot(&gd).dot(&ud);
            let mut found = None;
            for code in 0..16u8 {
                let p = P2::from_code(code);
                let pd = PauliString::from_letters(&[p.letter(0), p.letter(1)]).to_dense()?;
                // Tr(P M) / 4 is the P-coefficient since Pauli matrices are Hermitian.
                let c: C64 = pd.t().iter().zip(m.iter()).map(|(a, b)| a * b).sum::<C64>() / 4.0;
                if (c.norm() - 1.0).abs() < 1e-9 {
                    if c.im.abs() > 1e-9 {
                        return Err(Error::InvalidTableau("non-Hermitian image".into()));
                    }
                    found = Some(P2 {
                        k: if c.re < 0.0 { 2 } else { 0 },
                        ..p
                    });
                }
            }
            *slot =
                found.ok_or_else(|| Error::InvalidTableau("matrix is not a Clifford".into()))?;
        }
        let t = Self { images };
        t.validate()?;
        Ok(t)
    }
}

/// Order on the encoding, image by image, with letters ranked I < X < Z < Y
/// and `+` before `-`.
impl Ord for CliffordTableau {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images
            .iter()
            .map(|p| p.order_key())
            .cmp(other.images.iter().map(|p| p.order_key()))
    }
}

impl PartialOrd for CliffordTableau {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Clifford({})", self.encode())
    }
}

fn parse_signed(s: &str) -> Result<SignedPauli2> {
    let bad = || Error::Argument(format!("bad signed two-site Pauli {s:?}"));
    let mut chars = s.chars();
    let negative = match chars.next() {
        Some('+') => false,
        Some('-') => true,
        _ => return Err(bad()),
    };
    let letters: Vec<Pauli> = chars
        .map(Pauli::from_char)
        .collect::<Option<_>>()
        .ok_or_else(bad)?;
    if letters.len() != 2 {
        return Err(bad());
    }
    Ok(SignedPauli2::new(letters[0], letters[1], negative))
}

impl FromStr for CliffordTableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(';').collect();
        if parts.len() != 4 {
            return argument(format!("tableau needs four images, got {s:?}"));
        }
        let mut images = [""; 4];
        for (i, (part, gen)) in parts.iter().zip(GENERATORS).enumerate() {
            let (lhs, rhs) = part
                .split_once("->")
                .ok_or_else(|| Error::Argument(format!("missing `->` in {part:?}")))?;
            if lhs != gen {
                return argument(format!("expected generator {gen}, found {lhs:?}"));
            }
            images[i] = rhs;
        }
        Self::from_strs(images)
    }
}

/// `U P U†` for a two-site Pauli string.
pub fn conjugate_pauli(t: &CliffordTableau, p: &PauliString) -> Result<PauliString> {
    if p.n_sites() != 2 {
        return argument(format!(
            "expected a 2-site Pauli, got {} sites",
            p.n_sites()
        ));
    }
    let img = t.conj_p2(P2 {
        k: p.phase(),
        ..P2::from_letters(p.get(0), p.get(1), false)
    });
    Ok(PauliString::from_letters(&[img.letter(0), img.letter(1)]).with_phase(img.k))
}

/// The gate `a ∘ b`: apply `b` first, then `a`.
pub fn compose(a: &CliffordTableau, b: &CliffordTableau) -> CliffordTableau {
    CliffordTableau {
        images: b.images.map(|p| a.conj_p2(p)),
    }
}

/// Entangling class of a gate modulo single-qubit gates on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateClass {
    Local,
    Cnot,
    Iswap,
    Swap,
}

impl fmt::Display for GateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Local => "local",
            Self::Cnot => "cnot",
            Self::Iswap => "iswap",
            Self::Swap => "swap",
        })
    }
}

/// Single-qubit Clifford as the images of X and Z (letter, negative sign).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClifford {
    pub x_image: (Pauli, bool),
    pub z_image: (Pauli, bool),
}

impl LocalClifford {
    pub fn identity() -> Self {
        Self {
            x_image: (Pauli::X, false),
            z_image: (Pauli::Z, false),
        }
    }

    pub fn hadamard() -> Self {
        Self {
            x_image: (Pauli::Z, false),
            z_image: (Pauli::X, false),
        }
    }

    pub fn phase() -> Self {
        Self {
            x_image: (Pauli::Y, false),
            z_image: (Pauli::Z, false),
        }
    }

    /// All 24 single-qubit Cliffords modulo phase.
    pub fn all() -> Vec<LocalClifford> {
        let letters = [Pauli::X, Pauli::Y, Pauli::Z];
        let mut out = Vec::with_capacity(24);
        for &xl in &letters {
            for &zl in &letters {
                if xl == zl {
                    continue;
                }
                for xs in [false, true] {
                    for zs in [false, true] {
                        out.push(LocalClifford {
                            x_image: (xl, xs),
                            z_image: (zl, zs),
                        });
                    }
                }
            }
        }
        out
    }

    /// `u P u† = i^k · letter` for a single-site letter `P`.
    pub fn apply(&self, p: Pauli) -> (Pauli, u8) {
        let sign = |neg: bool| if neg { 2u8 } else { 0 };
        match p {
            Pauli::I => (Pauli::I, 0),
            Pauli::X => (self.x_image.0, sign(self.x_image.1)),
            Pauli::Z => (self.z_image.0, sign(self.z_image.1)),
            Pauli::Y => {
                // Y = i X Z
                let img = CliffordTableau::local(*self, LocalClifford::identity());
                let (a, _, k) = img.conjugate_letters(Pauli::Y, Pauli::I);
                (a, k)
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LocalClifford) -> LocalClifford {
        let t = compose(
            &CliffordTableau::local(*self, LocalClifford::identity()),
            &CliffordTableau::local(*other, LocalClifford::identity()),
        );
        t.local_factors().expect("product of locals is local").0
    }

    pub fn inverse(&self) -> LocalClifford {
        CliffordTableau::local(*self, LocalClifford::identity())
            .inverse()
            .local_factors()
            .expect("inverse of a local is local")
            .0
    }

    pub fn encode(&self) -> String {
        let s = |(p, neg): (Pauli, bool)| format!("{}{}", if neg { '-' } else { '+' }, p.to_char());
        format!("X->{};Z->{}", s(self.x_image), s(self.z_image))
    }
}

/// Which candidates a disentangler search visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateSetMode {
    FullGroup,
    LocalRepresentatives,
    IdentityOnly,
}

impl FromStr for GateSetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_group" | "full" => Ok(Self::FullGroup),
            "local_representatives" | "representatives" => Ok(Self::LocalRepresentatives),
            "identity_only" | "identity" | "none" => Ok(Self::IdentityOnly),
            _ => argument(format!("unknown gate-set mode {s:?}")),
        }
    }
}

impl fmt::Display for GateSetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FullGroup => "full_group",
            Self::LocalRepresentatives => "local_representatives",
            Self::IdentityOnly => "identity_only",
        })
    }
}

/// Candidate disentanglers, sorted by tableau order.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSet {
    pub tableaux: Vec<CliffordTableau>,
    pub mode: GateSetMode,
}

impl GateSet {
    pub fn for_mode(mode: GateSetMode) -> GateSet {
        match mode {
            GateSetMode::FullGroup => enumerate_two_qubit_cliffords(),
            GateSetMode::LocalRepresentatives => {
                reduce_by_local_equivalence(&enumerate_two_qubit_cliffords())
            }
            GateSetMode::IdentityOnly => GateSet {
                tableaux: vec![CliffordTableau::identity()],
                mode,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.tableaux.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tableaux.is_empty()
    }
}

/// Breadth-first closure of `start` under left multiplication by `generators`.
pub fn closure(start: CliffordTableau, generators: &[CliffordTableau]) -> Vec<CliffordTableau> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for g in generators {
            let n = compose(g, &t);
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    let mut all: Vec<_> = seen.into_iter().collect();
    all.sort();
    all
}

fn full_group() -> &'static Vec<CliffordTableau> {
    static GROUP: OnceLock<Vec<CliffordTableau>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let generators = [
            CliffordTableau::hadamard(0),
            CliffordTableau::hadamard(1),
            CliffordTableau::phase(0),
            CliffordTableau::phase(1),
            CliffordTableau::cnot(0, 1),
            CliffordTableau::cnot(1, 0),
        ];
        closure(CliffordTableau::identity(), &generators)
    })
}

/// The whole two-qubit Clifford group modulo global phase.
pub fn enumerate_two_qubit_cliffords() -> GateSet {
    GateSet {
        tableaux: full_group().clone(),
        mode: GateSetMode::FullGroup,
    }
}

/// All 576 products `u₀ ⊗ u₁` of single-qubit Cliffords.
pub fn local_group() -> Vec<CliffordTableau> {
    let singles = LocalClifford::all();
    let mut out: Vec<_> = singles
        .iter()
        .flat_map(|&a| singles.iter().map(move |&b| CliffordTableau::local(a, b)))
        .collect();
    out.sort();
    out
}

/// Splits `gs` into classes `{(u₀⊗u₁)·U}` and keeps the least element of
/// each. Output-side single-qubit gates never change the Schmidt spectrum of
/// `U·Θ`, so one representative per class suffices for the search.
pub fn reduce_by_local_equivalence(gs: &GateSet) -> GateSet {
    let locals = local_group();
    let mut assigned: HashSet<CliffordTableau> = HashSet::with_capacity(gs.len());
    let mut reps = Vec::new();
    for &t in &gs.tableaux {
        if assigned.contains(&t) {
            continue;
        }
        let class: Vec<CliffordTableau> = locals.iter().map(|l| compose(l, &t)).collect();
        reps.push(*class.iter().min().expect("nonempty class"));
        assigned.extend(class);
    }
    reps.sort();
    GateSet {
        tableaux: reps,
        mode: GateSetMode::LocalRepresentatives,
    }
}

/// Splits `t` as `(u₀ ⊗ u₁) · r` with `r` the least element of its left class.
pub fn left_class_decomposition(
    t: &CliffordTableau,
) -> (LocalClifford, LocalClifford, CliffordTableau) {
    static LOCALS: OnceLock<Vec<CliffordTableau>> = OnceLock::new();
    let locals = LOCALS.get_or_init(local_group);
    let (l, r) = locals
        .iter()
        .map(|l| (l, compose(&l.inverse(), t)))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("nonempty local group");
    let (u0, u1) = l.local_factors().expect("local");
    (u0, u1, r)
}

/// Index from tableau to its left-class representative, for reporting.
pub fn left_class_map() -> &'static HashMap<CliffordTableau, CliffordTableau> {
    static MAP: OnceLock<HashMap<CliffordTableau, CliffordTableau>> = OnceLock::new();
    MAP.get_or_init(|| {
        let locals = local_group();
        let mut map = HashMap::with_capacity(11520);
        for &t in full_group() {
            if map.contains_key(&t) {
                continue;
            }
            let class: Vec<_> = locals.iter().map(|l| compose(l, &t)).collect();
            let rep = *class.iter().min().expect("nonempty");
            for c in class {
                map.insert(c, rep);
            }
        }
        map
    })
}
