//! Matrix product operators compiled from Pauli sums.
//!
//! The compiler builds a finite-state automaton over bonds: every bond carries
//! a "nothing placed yet" state, a "term finished" state, and one state per
//! distinct pending prefix. Terms that share a prefix share the states along
//! it, and each term's coefficient sits on the transition that completes it.

use std::collections::HashMap;

use ndarray::{Array2, Array4};

use crate::error::{argument, Error, Result};
use crate::pauli::{Pauli, PauliSum};
use crate::C64;

/// 2×2 operator indexed `[out][in]`.
pub type LocalOp = [[C64; 2]; 2];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// One non-zero block `W[left, :, :, right]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoEntry {
    pub left: usize,
    pub right: usize,
    pub op: LocalOp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpoSite {
    pub left_dim: usize,
    pub right_dim: usize,
    pub entries: Vec<MpoEntry>,
}

impl MpoSite {
    /// Dense tensor `(left, out, in, right)`.
    pub fn tensor(&self) -> Array4<C64> {
        let mut w = Array4::zeros((self.left_dim, 2, 2, self.right_dim));
        for e in &self.entries {
            for s in 0..2 {
                for t in 0..2 {
                    w[(e.left, s, t, e.right)] += e.op[s][t];
                }
            }
        }
        w
    }

    fn from_tensor(w: &Array4<C64>) -> Self {
        let (wl, _, _, wr) = w.dim();
        let mut entries = Vec::new();
        for a in 0..wl {
            for b in 0..wr {
                let op = [
                    [w[(a, 0, 0, b)], w[(a, 0, 1, b)]],
                    [w[(a, 1, 0, b)], w[(a, 1, 1, b)]],
                ];
                if op.iter().flatten().any(|z| *z != ZERO) {
                    entries.push(MpoEntry {
                        left: a,
                        right: b,
                        op,
                    });
                }
            }
        }
        MpoSite {
            left_dim: wl,
            right_dim: wr,
            entries,
        }
    }
}

/// Open-boundary MPO; bond 0 and bond L have dimension 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoOperator {
    sites: Vec<MpoSite>,
}

impl MpoOperator {
    pub fn from_tensors(tensors: &[Array4<C64>]) -> Result<Self> {
        if tensors.is_empty() {
            return argument("MPO needs at least one site");
        }
        for (i, w) in tensors.iter().enumerate() {
            let (_, d1, d2, _) = w.dim();
            if d1 != 2 || d2 != 2 {
                return argument(format!("site {i} has physical dims {d1}x{d2}"));
            }
            if i + 1 < tensors.len() && w.dim().3 != tensors[i + 1].dim().0 {
                return argument(format!("bond mismatch between sites {i} and {}", i + 1));
            }
        }
        if tensors[0].dim().0 != 1 || tensors[tensors.len() - 1].dim().3 != 1 {
            return argument("boundary MPO bonds must have dimension 1");
        }
        Ok(Self {
            sites: tensors.iter().map(MpoSite::from_tensor).collect(),
        })
    }

    pub fn identity(n_sites: usize) -> Self {
        let one = C64::new(1.0, 0.0);
        Self {
            sites: (0..n_sites)
                .map(|_| MpoSite {
                    left_dim: 1,
                    right_dim: 1,
                    entries: vec![MpoEntry {
                        left: 0,
                        right: 0,
                        op: [[one, ZERO], [ZERO, one]],
                    }],
                })
                .collect(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn site(&self, i: usize) -> &MpoSite {
        &self.sites[i]
    }

    pub fn tensor(&self, i: usize) -> Array4<C64> {
        self.sites[i].tensor()
    }

    /// Dimensions of bonds 0..=L.
    pub fn bond_dims(&self) -> Vec<usize> {
        std::iter::once(self.sites[0].left_dim)
            .chain(self.sites.iter().map(|s| s.right_dim))
            .collect()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Full contraction to a `2^L × 2^L` matrix (site 0 most significant).
    pub fn to_dense(&self) -> Result<Array2<C64>> {
        const LIMIT: usize = 12;
        if self.n_sites() > LIMIT {
            return Err(Error::Size {
                sites: self.n_sites(),
                limit: LIMIT,
            });
        }
        let mut blocks = vec![Array2::from_elem((1, 1), C64::new(1.0, 0.0))];
        for site in &self.sites {
            let dim = blocks[0].nrows() * 2;
            let mut next = vec![Array2::<C64>::zeros((dim, dim)); site.right_dim];
            for e in &site.entries {
                let prev = &blocks[e.left];
                let n = prev.nrows();
                let target = &mut next[e.right];
                for s in 0..2 {
                    for t in 0..2 {
                        let c = e.op[s][t];
                        if c == ZERO {
                            continue;
                        }
                        for i in 0..n {
                            for j in 0..n {
                                target[(2 * i + s, 2 * j + t)] += c * prev[(i, j)];
                            }
                        }
                    }
                }
            }
            blocks = next;
        }
        Ok(blocks.swap_remove(0))
    }
}

fn letter_op(p: Pauli, scale: f64) -> LocalOp {
    p.matrix().map(|row| row.map(|z| z * scale))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum State {
    Start,
    Done,
    Pending(Vec<u8>),
}

/// Exact MPO for `h` by prefix-sharing automaton construction.
pub fn compile_mpo(h: &PauliSum) -> MpoOperator {
    let h = h.canonical_form();
    let n = h.n_sites();
    if h.is_empty() {
        return MpoOperator {
            sites: (0..n)
                .map(|_| MpoSite {
                    left_dim: 1,
                    right_dim: 1,
                    entries: Vec::new(),
                })
                .collect(),
        };
    }

    struct Term {
        codes: Vec<u8>,
        first: usize,
        last: usize,
        coefficient: f64,
    }
    let terms: Vec<Term> = h
        .terms()
        .iter()
        .map(|t| {
            let support = t.string.support();
            Term {
                codes: t.string.letters().iter().map(|p| p.code()).collect(),
                first: support.first().copied().unwrap_or(0),
                last: support.last().copied().unwrap_or(0),
                coefficient: t.coefficient,
            }
        })
        .collect();

    // State tables for bonds 0..=n. Indices depend only on the states present
    // at a bond, nearest letters first, so a local edit of `h` leaves distant
    // site tensors bit-identical.
    let mut bonds: Vec<HashMap<State, usize>> = Vec::with_capacity(n + 1);
    for b in 0..=n {
        let mut states: Vec<State> = Vec::new();
        if b < n && terms.iter().any(|t| t.first >= b) {
            states.push(State::Start);
        }
        if b > 0 && terms.iter().any(|t| t.last < b) {
            states.push(State::Done);
        }
        if b > 0 && b < n {
            let mut pending: Vec<Vec<u8>> = terms
                .iter()
                .filter(|t| t.first < b && b <= t.last)
                .map(|t| t.codes[..b].to_vec())
                .collect();
            pending.sort_by(|x, y| x.iter().rev().cmp(y.iter().rev()));
            pending.dedup();
            states.extend(pending.into_iter().map(State::Pending));
        }
        bonds.push(
            states
                .into_iter()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect(),
        );
    }

    let one = C64::new(1.0, 0.0);
    let identity: LocalOp = [[one, ZERO], [ZERO, one]];
    let mut sites = Vec::with_capacity(n);
    for s in 0..n {
        let (lb, rb) = (&bonds[s], &bonds[s + 1]);
        let mut blocks: HashMap<(usize, usize), LocalOp> = HashMap::new();
        let mut add = |from: usize, to: usize, op: LocalOp, accumulate: bool| {
            let slot = blocks.entry((from, to)).or_insert([[ZERO; 2]; 2]);
            if accumulate {
                for i in 0..2 {
                    for j in 0..2 {
                        slot[i][j] += op[i][j];
                    }
                }
            } else {
                *slot = op;
            }
        };
        if let (Some(&a), Some(&b)) = (lb.get(&State::Start), rb.get(&State::Start)) {
            add(a, b, identity, false);
        }
        if let (Some(&a), Some(&b)) = (lb.get(&State::Done), rb.get(&State::Done)) {
            add(a, b, identity, false);
        }
        for t in terms.iter().filter(|t| t.first <= s && s <= t.last) {
            let from = if s == t.first {
                lb[&State::Start]
            } else {
                lb[&State::Pending(t.codes[..s].to_vec())]
            };
            let letter = Pauli::from_code(t.codes[s]);
            if s == t.last {
                add(
                    from,
                    rb[&State::Done],
                    letter_op(letter, t.coefficient),
                    true,
                );
            } else {
                // the target prefix fixes both the source and the letter
                add(
                    from,
                    rb[&State::Pending(t.codes[..=s].to_vec())],
                    letter_op(letter, 1.0),
                    false,
                );
            }
        }
        let mut entries: Vec<MpoEntry> = blocks
            .into_iter()
            .map(|((left, right), op)| MpoEntry { left, right, op })
            .collect();
        entries.sort_by_key(|e| (e.left, e.right));
        sites.push(MpoSite {
            left_dim: lb.len(),
            right_dim: rb.len(),
            entries,
        });
    }
    MpoOperator { sites }
}
