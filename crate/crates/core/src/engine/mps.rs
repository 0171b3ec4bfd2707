//! Open-boundary matrix product states.

use std::io::{Read, Write};

use ndarray::{s, Array1, Array2, Array3, Array4, Axis};
use ndarray_linalg::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::env::{boundary_env, left_env_step};
use super::mpo::MpoOperator;
use crate::error::{argument, Error, Result};
use crate::linalg::Standard;
use crate::linalg::{svd_thin, von_neumann_entropy};
use crate::pauli::DENSE_SITE_LIMIT;
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Schmidt data across one cut of a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementData {
    /// Number of sites on the left of the cut.
    pub cut: usize,
    /// Descending Schmidt probabilities summing to one.
    pub schmidt_probs: Vec<f64>,
    pub entropy: f64,
    /// `-ln p` for every positive probability, ascending.
    pub spectrum: Vec<f64>,
}

impl EntanglementData {
    pub fn from_probabilities(cut: usize, probs: Vec<f64>) -> Self {
        let entropy = von_neumann_entropy(&probs);
        let spectrum = probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|p| -p.ln())
            .collect();
        Self {
            cut,
            schmidt_probs: probs,
            entropy,
            spectrum,
        }
    }

    pub fn from_singular_values(cut: usize, s: &[f64]) -> Self {
        Self::from_probabilities(
            cut,
            crate::linalg::normalized_probabilities(s.iter().map(|x| x * x)),
        )
    }
}

/// Tensor-train state with tensors indexed `(left, physical, right)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpsState {
    tensors: Vec<Array3<C64>>,
    center: Option<usize>,
    max_bond: usize,
}

/// Output of [`svd_truncate`].
#[derive(Clone, Debug)]
pub struct Truncation {
    /// Left isometry `(Dl, 2, k)`.
    pub left: Array3<C64>,
    /// Kept singular values, rescaled so their squares sum to one.
    pub singular_values: Vec<f64>,
    /// Right isometry `(k, 2, Dr)`.
    pub right: Array3<C64>,
    pub discarded_weight: f64,
}

impl MpsState {
    pub fn from_tensors(tensors: Vec<Array3<C64>>, max_bond: usize) -> Result<Self> {
        if tensors.is_empty() {
            return argument("MPS needs at least one site");
        }
        for (i, a) in tensors.iter().enumerate() {
            if a.dim().1 != 2 {
                return argument(format!("site {i} has physical dimension {}", a.dim().1));
            }
            if i + 1 < tensors.len() && a.dim().2 != tensors[i + 1].dim().0 {
                return argument(format!("bond mismatch between sites {i} and {}", i + 1));
            }
        }
        if tensors[0].dim().0 != 1 || tensors[tensors.len() - 1].dim().2 != 1 {
            return argument("boundary bonds must have dimension 1");
        }
        Ok(Self {
            tensors,
            center: None,
            max_bond: max_bond.max(1),
        })
    }

    /// Product state from per-site amplitudes `(⟨0|φ⟩, ⟨1|φ⟩)`.
    pub fn product(sites: &[[C64; 2]], max_bond: usize) -> Result<Self> {
        let tensors = sites
            .iter()
            .map(|amp| Array3::from_shape_vec((1, 2, 1), amp.to_vec()).expect("shape"))
            .collect();
        let mut mps = Self::from_tensors(tensors, max_bond)?;
        mps.normalize()?;
        Ok(mps)
    }

    /// Random normalized product state, reproducible from `seed`.
    pub fn random_product(n_sites: usize, max_bond: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sites: Vec<[C64; 2]> = (0..n_sites)
            .map(|_| {
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                [
                    C64::new((theta / 2.0).cos(), 0.0),
                    C64::from_polar((theta / 2.0).sin(), phi),
                ]
            })
            .collect();
        let mut mps = Self::product(&sites, max_bond)?;
        mps.center = Some(0);
        Ok(mps)
    }

    /// Random MPS with bond dimensions `min(2^p, 2^(L-p), bond)`, normalized.
    pub fn random(n_sites: usize, bond: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = |p: usize| -> usize {
            let cap = |k: usize| if k >= 30 { usize::MAX } else { 1 << k };
            cap(p).min(cap(n_sites - p)).min(bond.max(1))
        };
        let tensors = (0..n_sites)
            .map(|i| {
                Array3::from_shape_fn((dim(i), 2, dim(i + 1)), |_| {
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
            })
            .collect();
        let mut mps = Self::from_tensors(tensors, bond)?;
        mps.normalize()?;
        Ok(mps)
    }

    /// Exact MPS of a dense vector (site 0 most significant) by sequential SVD.
    pub fn from_dense(v: &[C64], n_sites: usize, max_bond: usize) -> Result<Self> {
        if v.len() != 1usize << n_sites {
            return argument(format!("vector length {} is not 2^{n_sites}", v.len()));
        }
        let mut tensors = Vec::with_capacity(n_sites);
        let mut rest = Array2::from_shape_vec((1, v.len()), v.to_vec()).expect("shape");
        for _ in 0..n_sites - 1 {
            let (dl, cols) = rest.dim();
            let m = rest
                .standard()
                .into_shape_with_order((dl * 2, cols / 2))
                .expect("reshape");
            let (u, sv, vt) = svd_thin(&m.view())?;
            let k = sv.iter().filter(|&&x| x > 1e-14 * sv[0]).count().max(1);
            tensors.push(
                u.slice(s![.., ..k])
                    .to_owned()
                    .standard()
                    .into_shape_with_order((dl, 2, k))
                    .expect("reshape"),
            );
            let sv = sv.slice(s![..k]).mapv(|x| C64::new(x, 0.0));
            rest = &vt.slice(s![..k, ..]) * &sv.insert_axis(Axis(1));
        }
        let dl = rest.nrows();
        tensors.push(
            rest.standard()
                .into_shape_with_order((dl, 2, 1))
                .expect("reshape"),
        );
        let mut mps = Self::from_tensors(tensors, max_bond)?;
        mps.center = Some(n_sites - 1);
        Ok(mps)
    }

    pub fn n_sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn max_bond(&self) -> usize {
        self.max_bond
    }

    pub fn set_max_bond(&mut self, d: usize) {
        self.max_bond = d.max(1);
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    pub fn tensor(&self, i: usize) -> &Array3<C64> {
        &self.tensors[i]
    }

    pub fn tensors(&self) -> &[Array3<C64>] {
        &self.tensors
    }

    pub(crate) fn set_tensor(&mut self, i: usize, a: Array3<C64>) {
        self.tensors[i] = a;
    }

    pub(crate) fn set_center(&mut self, c: Option<usize>) {
        self.center = c;
    }

    /// Dimensions of bonds 0..=L.
    pub fn bond_dims(&self) -> Vec<usize> {
        std::iter::once(self.tensors[0].dim().0)
            .chain(self.tensors.iter().map(|a| a.dim().2))
            .collect()
    }

    /// `⟨ψ|ψ⟩` by transfer-matrix contraction.
    pub fn norm_sqr(&self) -> f64 {
        let mut e = Array2::from_elem((1, 1), C64::new(1.0, 0.0));
        for a in &self.tensors {
            let mut next = Array2::<C64>::zeros((a.dim().2, a.dim().2));
            for sidx in 0..2 {
                let m = a.index_axis(Axis(1), sidx);
                let t = e.dot(&m);
                next += &m.t().mapv(|z| z.conj()).dot(&t);
            }
            e = next;
        }
        e[(0, 0)].re
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateInput(
                "state has zero or non-finite norm".into(),
            ));
        }
        let i = self.center.unwrap_or(0);
        self.tensors[i].mapv_inplace(|z| z / n);
        Ok(())
    }

    /// Moves the orthogonality center to `center` by QR sweeps from both ends.
    pub fn canonicalize(&mut self, center: usize) -> Result<()> {
        let n = self.n_sites();
        if center >= n {
            return argument(format!("center {center} out of range for {n} sites"));
        }
        let (lo, hi) = match self.center {
            Some(c) => (c.min(center), c.max(center)),
            None => (0, n - 1),
        };
        let start_left = if self.center.is_some() { lo } else { 0 };
        for i in start_left..center {
            self.shift_right(i)?;
        }
        let start_right = if self.center.is_some() { hi } else { n - 1 };
        for i in (center + 1..=start_right).rev() {
            self.shift_left(i)?;
        }
        self.center = Some(center);
        Ok(())
    }

    /// Makes site `i` a left isometry and pushes the remainder into `i + 1`.
    fn shift_right(&mut self, i: usize) -> Result<()> {
        let (dl, _, dr) = self.tensors[i].dim();
        let m = self.tensors[i]
            .to_owned()
            .standard()
            .into_shape_with_order((dl * 2, dr))
            .expect("reshape");
        let (q, r) = m.qr()?;
        let k = q.ncols();
        self.tensors[i] = q
            .standard()
            .into_shape_with_order((dl, 2, k))
            .expect("reshape");
        self.tensors[i + 1] = contract_left(&r, &self.tensors[i + 1]);
        Ok(())
    }

    /// Makes site `i` a right isometry and pushes the remainder into `i - 1`.
    fn shift_left(&mut self, i: usize) -> Result<()> {
        let (dl, _, dr) = self.tensors[i].dim();
        let m = self.tensors[i]
            .to_owned()
            .standard()
            .into_shape_with_order((dl, 2 * dr))
            .expect("reshape");
        let mh = m.t().mapv(|z| z.conj());
        let (q, r) = mh.qr()?;
        let k = q.ncols();
        let qh = q.t().mapv(|z| z.conj());
        self.tensors[i] = qh
            .standard()
            .into_shape_with_order((k, 2, dr))
            .expect("reshape");
        let rh = r.t().mapv(|z| z.conj());
        self.tensors[i - 1] = contract_right(&self.tensors[i - 1], &rh);
        Ok(())
    }

    /// Dense state vector, site 0 most significant.
    pub fn to_dense(&self) -> Result<Vec<C64>> {
        if self.n_sites() > DENSE_SITE_LIMIT {
            return Err(Error::Size {
                sites: self.n_sites(),
                limit: DENSE_SITE_LIMIT,
            });
        }
        let mut acc = Array2::from_elem((1, 1), C64::new(1.0, 0.0));
        for a in &self.tensors {
            let (dl, _, dr) = a.dim();
            let m = a
                .to_owned()
                .standard()
                .into_shape_with_order((dl, 2 * dr))
                .expect("reshape");
            let rows = acc.nrows();
            acc = acc
                .dot(&m)
                .standard()
                .into_shape_with_order((rows * 2, dr))
                .expect("reshape");
        }
        Ok(acc.into_iter().collect())
    }

    /// Two-site tensor `(Dl, 2, 2, Dr)` on sites `j, j + 1`.
    pub fn two_site(&self, j: usize) -> Array4<C64> {
        let (a, b) = (&self.tensors[j], &self.tensors[j + 1]);
        let (dl, _, dm) = a.dim();
        let dr = b.dim().2;
        let am = a
            .to_owned()
            .standard()
            .into_shape_with_order((dl * 2, dm))
            .expect("reshape");
        let bm = b
            .to_owned()
            .standard()
            .into_shape_with_order((dm, 2 * dr))
            .expect("reshape");
        am.dot(&bm)
            .standard()
            .into_shape_with_order((dl, 2, 2, dr))
            .expect("reshape")
    }

    /// Writes the checkpoint container described in the crate docs.
    pub fn write_checkpoint<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CHECKPOINT_MAGIC)?;
        w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
        w.write_all(&(self.n_sites() as u64).to_le_bytes())?;
        w.write_all(&(self.max_bond as u64).to_le_bytes())?;
        let center = self.center.map(|c| c as i64).unwrap_or(-1);
        w.write_all(&center.to_le_bytes())?;
        for a in &self.tensors {
            let (dl, d, dr) = a.dim();
            for x in [dl, d, dr] {
                w.write_all(&(x as u64).to_le_bytes())?;
            }
            for z in a.iter() {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(Error::Parse {
                line: 0,
                message: "not an MPS checkpoint".into(),
            });
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != CHECKPOINT_VERSION {
            return Err(Error::Parse {
                line: 0,
                message: format!("unsupported checkpoint version {version}"),
            });
        }
        let read_u64 = |r: &mut R| -> Result<u64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Ok(u64::from_le_bytes(b))
        };
        let n = read_u64(&mut r)? as usize;
        let max_bond = read_u64(&mut r)? as usize;
        let center = read_u64(&mut r)? as i64;
        let mut tensors = Vec::with_capacity(n);
        for _ in 0..n {
            let dl = read_u64(&mut r)? as usize;
            let d = read_u64(&mut r)? as usize;
            let dr = read_u64(&mut r)? as usize;
            let mut data = Vec::with_capacity(dl * d * dr);
            for _ in 0..dl * d * dr {
                let re = f64::from_bits(read_u64(&mut r)?);
                let im = f64::from_bits(read_u64(&mut r)?);
                data.push(C64::new(re, im));
            }
            tensors.push(
                Array3::from_shape_vec((dl, d, dr), data).map_err(|e| Error::Parse {
                    line: 0,
                    message: e.to_string(),
                })?,
            );
        }
        let mut mps = Self::from_tensors(tensors, max_bond)?;
        mps.center = usize::try_from(center).ok();
        Ok(mps)
    }
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"CAMPSMPS";
const CHECKPOINT_VERSION: u32 = 1;

/// `r · A` contracting `r`'s column with `A`'s left bond.
fn contract_left(r: &Array2<C64>, a: &Array3<C64>) -> Array3<C64> {
    let (dl, _, dr) = a.dim();
    let m = a
        .to_owned()
        .standard()
        .into_shape_with_order((dl, 2 * dr))
        .expect("reshape");
    let k = r.nrows();
    r.dot(&m)
        .standard()
        .into_shape_with_order((k, 2, dr))
        .expect("reshape")
}

/// `A · r` contracting `A`'s right bond with `r`'s row.
fn contract_right(a: &Array3<C64>, r: &Array2<C64>) -> Array3<C64> {
    let (dl, _, dr) = a.dim();
    let m = a
        .to_owned()
        .standard()
        .into_shape_with_order((dl * 2, dr))
        .expect("reshape");
    let k = r.ncols();
    m.dot(r)
        .standard()
        .into_shape_with_order((dl, 2, k))
        .expect("reshape")
}

/// Canonical copy of `mps` with its center at `center`.
pub fn canonicalize(mps: &MpsState, center: usize) -> Result<MpsState> {
    let mut out = mps.clone();
    out.canonicalize(center)?;
    Ok(out)
}

/// Splits a two-site tensor `(Dl, 2, 2, Dr)` by SVD keeping at most
/// `max_bond` values and none below `cutoff · s_max`.
pub fn svd_truncate(theta: &Array4<C64>, max_bond: usize, cutoff: f64) -> Result<Truncation> {
    let (dl, _, _, dr) = theta.dim();
    if theta.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::DegenerateInput(
            "two-site tensor is not finite".into(),
        ));
    }
    let m = theta
        .to_owned()
        .standard()
        .into_shape_with_order((dl * 2, 2 * dr))
        .expect("reshape");
    let (u, sv, vt) = svd_thin(&m.view())?;
    let total: f64 = sv.iter().map(|x| x * x).sum();
    if sv.is_empty() || total == 0.0 {
        return Err(Error::DegenerateInput("two-site tensor is zero".into()));
    }
    let floor = cutoff * sv[0];
    let k = sv
        .iter()
        .take_while(|&&x| x >= floor)
        .count()
        .min(max_bond.max(1))
        .max(1);
    let kept: f64 = sv.iter().take(k).map(|x| x * x).sum();
    let scale = kept.sqrt();
    Ok(Truncation {
        left: u
            .slice(s![.., ..k])
            .to_owned()
            .standard()
            .into_shape_with_order((dl, 2, k))
            .expect("reshape"),
        singular_values: sv.iter().take(k).map(|x| x / scale).collect(),
        right: vt
            .slice(s![..k, ..])
            .to_owned()
            .standard()
            .into_shape_with_order((k, 2, dr))
            .expect("reshape"),
        discarded_weight: ((total - kept) / total).max(0.0),
    })
}

/// Entanglement data at every cut `1..L`, from a canonical sweep.
pub fn entanglement_profile(mps: &MpsState) -> Result<Vec<EntanglementData>> {
    let n = mps.n_sites();
    let mut work = mps.clone();
    work.canonicalize(0)?;
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for p in 1..n {
        let a = &work.tensors[p - 1];
        let (dl, _, dr) = a.dim();
        let m = a
            .to_owned()
            .standard()
            .into_shape_with_order((dl * 2, dr))
            .expect("reshape");
        let (u, sv, vt) = svd_thin(&m.view())?;
        out.push(EntanglementData::from_singular_values(
            p,
            sv.as_slice().expect("contiguous"),
        ));
        let k = sv.len();
        work.tensors[p - 1] = u
            .standard()
            .into_shape_with_order((dl, 2, k))
            .expect("reshape");
        let svt = &vt * &sv.mapv(|x| C64::new(x, 0.0)).insert_axis(Axis(1));
        work.tensors[p] = contract_left(&svt, &work.tensors[p]);
    }
    Ok(out)
}

/// `⟨ψ|W|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn expectation(mps: &MpsState, mpo: &MpoOperator) -> Result<f64> {
    if mps.n_sites() != mpo.n_sites() {
        return argument(format!(
            "MPS has {} sites but MPO has {}",
            mps.n_sites(),
            mpo.n_sites()
        ));
    }
    let mut env = boundary_env();
    for i in 0..mps.n_sites() {
        env = left_env_step(&env, &mps.tensors[i], mpo.site(i));
    }
    let norm = mps.norm_sqr();
    if norm == 0.0 {
        return Err(Error::DegenerateInput("state has zero norm".into()));
    }
    Ok(env[0][(0, 0)].re / norm)
}

/// Left-isometry defect `‖A†A − 1‖_max` of site `i`.
pub fn left_isometry_error(a: &Array3<C64>) -> f64 {
    let (dl, _, dr) = a.dim();
    let m = a
        .to_owned()
        .standard()
        .into_shape_with_order((dl * 2, dr))
        .expect("reshape");
    let g = m.t().mapv(|z| z.conj()).dot(&m);
    identity_defect(&g)
}

/// Right-isometry defect `‖BB† − 1‖_max`.
pub fn right_isometry_error(b: &Array3<C64>) -> f64 {
    let (dl, _, dr) = b.dim();
    let m = b
        .to_owned()
        .standard()
        .into_shape_with_order((dl, 2 * dr))
        .expect("reshape");
    let g = m.dot(&m.t().mapv(|z| z.conj()));
    identity_defect(&g)
}

fn identity_defect(g: &Array2<C64>) -> f64 {
    let mut worst: f64 = 0.0;
    for ((i, j), z) in g.indexed_iter() {
        let target = if i == j { C64::new(1.0, 0.0) } else { ZERO };
        worst = worst.max((z - target).norm());
    }
    worst
}

pub(crate) fn diag_scale_rows(sv: &[f64], right: &Array3<C64>) -> Array3<C64> {
    let w = Array1::from_iter(sv.iter().map(|&x| C64::new(x, 0.0)));
    right * &w.insert_axis(Axis(1)).insert_axis(Axis(2))
}

pub(crate) fn diag_scale_cols(left: &Array3<C64>, sv: &[f64]) -> Array3<C64> {
    let w = Array1::from_iter(sv.iter().map(|&x| C64::new(x, 0.0)));
    left * &w
}
