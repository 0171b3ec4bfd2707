//! Environment contractions and the two-site effective Hamiltonian.
//!
//! An environment is one `D × D` block per MPO bond state, indexed
//! `(bra, ket)`.

use ndarray::{Array2, Array3, ArrayView2, Axis};

use super::mpo::MpoSite;
use crate::linalg::Standard;
use crate::C64;

pub(crate) type Env = Vec<Array2<C64>>;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub(crate) fn boundary_env() -> Env {
    vec![Array2::from_elem((1, 1), C64::new(1.0, 0.0))]
}

/// Extends a left environment over site tensor `a`.
///
/// `E'[b](r, r') = Σ conj(A[l, s, r]) W[a, s, t, b] E[a](l, l') A[l', t, r']`.
pub(crate) fn left_env_step(env: &Env, a: &Array3<C64>, w: &MpoSite) -> Env {
    let (_, _, dr) = a.dim();
    let a_conj = a.mapv(|z| z.conj());
    // T[a][t] = E[a] · A_t
    let t: Vec<Option<[Array2<C64>; 2]>> = (0..w.left_dim)
        .map(|ai| {
            if w.entries.iter().any(|e| e.left == ai) {
                Some([0, 1].map(|s| env[ai].dot(&a.index_axis(Axis(1), s))))
            } else {
                None
            }
        })
        .collect();
    let mut x: Vec<Option<[Array2<C64>; 2]>> = vec![None; w.right_dim];
    for e in &w.entries {
        let ta = t[e.left].as_ref().expect("used state");
        let slot = x[e.right].get_or_insert_with(|| [0, 1].map(|_| Array2::zeros(ta[0].raw_dim())));
        for s in 0..2 {
            for tt in 0..2 {
                let c = e.op[s][tt];
                if c != ZERO {
                    slot[s].scaled_add(c, &ta[tt]);
                }
            }
        }
    }
    x.into_iter()
        .map(|xb| match xb {
            None => Array2::zeros((dr, dr)),
            Some(xb) => {
                let mut out = Array2::zeros((dr, dr));
                for (s, xs) in xb.iter().enumerate() {
                    out += &a_conj.index_axis(Axis(1), s).t().dot(xs);
                }
                out
            }
        })
        .collect()
}

/// Extends a right environment over site tensor `b`.
///
/// `E'[a](l, l') = Σ conj(B[l, s, r]) W[a, s, t, c] E[c](r, r') B[l', t, r']`.
pub(crate) fn right_env_step(env: &Env, b: &Array3<C64>, w: &MpoSite) -> Env {
    let (dl, _, _) = b.dim();
    let b_conj = b.mapv(|z| z.conj());
    // T[c][t](l', r) = Σ_r' B_t(l', r') E[c](r, r')
    let t: Vec<Option<[Array2<C64>; 2]>> = (0..w.right_dim)
        .map(|ci| {
            if w.entries.iter().any(|e| e.right == ci) {
                Some([0, 1].map(|s| b.index_axis(Axis(1), s).dot(&env[ci].t())))
            } else {
                None
            }
        })
        .collect();
    let mut x: Vec<Option<[Array2<C64>; 2]>> = vec![None; w.left_dim];
    for e in &w.entries {
        let tc = t[e.right].as_ref().expect("used state");
        let slot = x[e.left].get_or_insert_with(|| [0, 1].map(|_| Array2::zeros(tc[0].raw_dim())));
        for s in 0..2 {
            for tt in 0..2 {
                let c = e.op[s][tt];
                if c != ZERO {
                    slot[s].scaled_add(c, &tc[tt]);
                }
            }
        }
    }
    x.into_iter()
        .map(|xa| match xa {
            None => Array2::zeros((dl, dl)),
            Some(xa) => {
                let mut out = Array2::zeros((dl, dl));
                for (s, xs) in xa.iter().enumerate() {
                    out += &b_conj.index_axis(Axis(1), s).dot(&xs.t());
                }
                out
            }
        })
        .collect()
}

/// Effective Hamiltonian on a two-site tensor `(Dl, 2, 2, Dr)`, stored flat.
pub(crate) struct TwoSiteOperator<'a> {
    left: &'a Env,
    right: &'a Env,
    /// `(a, c, O)` with `O[(s1 s2), (t1 t2)] = Σ_b W1[a,s1,t1,b] W2[b,s2,t2,c]`.
    blocks: Vec<(usize, usize, [[C64; 4]; 4])>,
    used_left: Vec<usize>,
    dl: usize,
    dr: usize,
}

impl<'a> TwoSiteOperator<'a> {
    pub(crate) fn new(left: &'a Env, right: &'a Env, w1: &MpoSite, w2: &MpoSite) -> Self {
        let mut map: std::collections::BTreeMap<(usize, usize), [[C64; 4]; 4]> = Default::default();
        for e1 in &w1.entries {
            for e2 in w2.entries.iter().filter(|e2| e2.left == e1.right) {
                let o = map.entry((e1.left, e2.right)).or_insert([[ZERO; 4]; 4]);
                for s1 in 0..2 {
                    for t1 in 0..2 {
                        let c1 = e1.op[s1][t1];
                        if c1 == ZERO {
                            continue;
                        }
                        for s2 in 0..2 {
                            for t2 in 0..2 {
                                o[2 * s1 + s2][2 * t1 + t2] += c1 * e2.op[s2][t2];
                            }
                        }
                    }
                }
            }
        }
        let blocks: Vec<_> = map
            .into_iter()
            .filter(|(_, o)| o.iter().flatten().any(|z| *z != ZERO))
            .map(|((a, c), o)| (a, c, o))
            .collect();
        let mut used_left: Vec<usize> = blocks.iter().map(|b| b.0).collect();
        used_left.dedup();
        Self {
            dl: left[0].nrows(),
            dr: right[0].nrows(),
            left,
            right,
            blocks,
            used_left,
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dl * 4 * self.dr
    }

    pub(crate) fn apply(&self, v: &[C64]) -> Vec<C64> {
        let (dl, dr) = (self.dl, self.dr);
        let theta = ArrayView2::from_shape((dl, 4 * dr), v).expect("shape");
        let mut t: Vec<Option<Array2<C64>>> = vec![None; self.left.len()];
        for &a in &self.used_left {
            t[a] = Some(self.left[a].dot(&theta).standard());
        }
        // Row `l` of every block is laid out as four contiguous runs of `dr`.
        let row = 4 * dr;
        let mut u: Vec<Option<Vec<C64>>> = vec![None; self.right.len()];
        for (a, c, o) in &self.blocks {
            let ta = t[*a]
                .as_ref()
                .expect("used state")
                .as_slice()
                .expect("standard layout");
            let uc = u[*c].get_or_insert_with(|| vec![ZERO; dl * row]);
            for (src, dst) in ta.chunks_exact(row).zip(uc.chunks_exact_mut(row)) {
                for (s, orow) in o.iter().enumerate() {
                    let target = &mut dst[s * dr..(s + 1) * dr];
                    for (tt, coef) in orow.iter().enumerate() {
                        if *coef != ZERO {
                            let source = &src[tt * dr..(tt + 1) * dr];
                            target
                                .iter_mut()
                                .zip(source)
                                .for_each(|(y, x)| *y += coef * x);
                        }
                    }
                }
            }
        }
        let mut out = Array2::<C64>::zeros((dl * 4, dr));
        for (c, uc) in u.into_iter().enumerate() {
            if let Some(uc) = uc {
                let m = ArrayView2::from_shape((dl * 4, dr), &uc).expect("shape");
                out += &m.dot(&self.right[c].t());
            }
        }
        out.into_iter().collect()
    }
}
