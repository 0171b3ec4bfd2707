//! Two-site sweep machinery with cached environments.

use ndarray::Array4;

use super::env::{boundary_env, left_env_step, right_env_step, Env, TwoSiteOperator};
use super::lanczos::{lowest_eigenpair, LanczosOptions};
use super::mpo::MpoOperator;
use super::mps::{diag_scale_cols, diag_scale_rows, svd_truncate, MpsState, Truncation};
use crate::error::{argument, Error, Result};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
}

/// Lowest eigenvector of one two-site effective Hamiltonian.
#[derive(Clone, Debug)]
pub struct TwoSiteSolution {
    pub theta: Array4<C64>,
    pub energy: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A state, an MPO, and the environment blocks needed to update any bond.
///
/// `left[i]` contracts sites `0..i`, `right[i]` contracts sites `i..L`.
#[derive(Clone, Debug)]
pub struct SweepEngine {
    mps: MpsState,
    mpo: MpoOperator,
    left: Vec<Option<Env>>,
    right: Vec<Option<Env>>,
    pub lanczos: LanczosOptions,
    pub cutoff: f64,
}

impl SweepEngine {
    /// Puts the center at site 0 and builds every right environment.
    pub fn new(
        mut mps: MpsState,
        mpo: MpoOperator,
        lanczos: LanczosOptions,
        cutoff: f64,
    ) -> Result<Self> {
        let n = mps.n_sites();
        if n < 2 {
            return argument("sweeps need at least two sites");
        }
        if mpo.n_sites() != n {
            return argument(format!("MPS has {n} sites but MPO has {}", mpo.n_sites()));
        }
        mps.canonicalize(0)?;
        let mut engine = Self {
            mps,
            mpo,
            left: vec![None; n + 1],
            right: vec![None; n + 1],
            lanczos,
            cutoff,
        };
        engine.rebuild_environments(0);
        Ok(engine)
    }

    pub fn mps(&self) -> &MpsState {
        &self.mps
    }

    pub fn mpo(&self) -> &MpoOperator {
        &self.mpo
    }

    pub fn into_parts(self) -> (MpsState, MpoOperator) {
        (self.mps, self.mpo)
    }

    pub fn n_sites(&self) -> usize {
        self.mps.n_sites()
    }

    /// Swaps in a new Hamiltonian and rebuilds the environments around the
    /// pair `(j, j + 1)`. Environments over site tensors that did not change
    /// are kept.
    pub fn replace_mpo(&mut self, mpo: MpoOperator, j: usize) -> Result<()> {
        let n = self.n_sites();
        if mpo.n_sites() != n {
            return argument("MPO size changed");
        }
        let same = |i: usize| self.mpo.site(i) == mpo.site(i);
        let prefix = (0..n).take_while(|&i| same(i)).count();
        let suffix = n - (0..n).rev().take_while(|&i| same(i)).count();
        for k in prefix + 1..=n {
            self.left[k] = None;
        }
        for k in 0..suffix {
            self.right[k] = None;
        }
        self.mpo = mpo;
        self.extend_environments(j);
        Ok(())
    }

    fn rebuild_environments(&mut self, j: usize) {
        self.left.iter_mut().for_each(|e| *e = None);
        self.right.iter_mut().for_each(|e| *e = None);
        self.extend_environments(j);
    }

    /// Builds whatever is missing of `left[0..=j]` and `right[j + 2..=n]`.
    fn extend_environments(&mut self, j: usize) {
        let n = self.n_sites();
        if self.left[0].is_none() {
            self.left[0] = Some(boundary_env());
        }
        for i in 0..j {
            if self.left[i + 1].is_none() {
                let next = left_env_step(
                    self.left[i].as_ref().expect("built"),
                    self.mps.tensor(i),
                    self.mpo.site(i),
                );
                self.left[i + 1] = Some(next);
            }
        }
        if self.right[n].is_none() {
            self.right[n] = Some(boundary_env());
        }
        for i in (j + 2..n).rev() {
            if self.right[i].is_none() {
                let next = right_env_step(
                    self.right[i + 1].as_ref().expect("built"),
                    self.mps.tensor(i),
                    self.mpo.site(i),
                );
                self.right[i] = Some(next);
            }
        }
    }

    fn check_pair(&self, j: usize) -> Result<()> {
        if j + 1 >= self.n_sites() {
            return argument(format!("pair ({j}, {}) out of range", j + 1));
        }
        match self.mps.center() {
            Some(c) if c == j || c == j + 1 => Ok(()),
            c => argument(format!("center {c:?} is not on pair ({j}, {})", j + 1)),
        }
    }

    /// Lowest eigenvector of the effective Hamiltonian on sites `(j, j + 1)`,
    /// warm-started from the current two-site tensor.
    pub fn solve_pair(&self, j: usize) -> Result<TwoSiteSolution> {
        self.check_pair(j)?;
        let (Some(left), Some(right)) = (self.left[j].as_ref(), self.right[j + 2].as_ref()) else {
            return argument(format!("environments around pair {j} are not built"));
        };
        let op = TwoSiteOperator::new(left, right, self.mpo.site(j), self.mpo.site(j + 1));
        let start = self.mps.two_site(j);
        let shape = start.raw_dim();
        debug_assert_eq!(start.len(), op.dim());
        let flat: Vec<C64> = start.into_iter().collect();
        let out = lowest_eigenpair(|v| op.apply(v), &flat, self.lanczos);
        Ok(TwoSiteSolution {
            theta: Array4::from_shape_vec(shape, out.vector).expect("shape"),
            energy: out.value,
            residual: out.residual,
            iterations: out.iterations,
            converged: out.converged,
        })
    }

    /// Truncates `theta` into sites `(j, j + 1)` and moves the center one step
    /// in `direction`, extending the matching environment.
    pub fn commit_pair(
        &mut self,
        j: usize,
        theta: &Array4<C64>,
        direction: Direction,
    ) -> Result<Truncation> {
        self.check_pair(j)?;
        let t = svd_truncate(theta, self.mps.max_bond(), self.cutoff)?;
        match direction {
            Direction::Right => {
                self.mps.set_tensor(j, t.left.clone());
                self.mps
                    .set_tensor(j + 1, diag_scale_rows(&t.singular_values, &t.right));
                self.mps.set_center(Some(j + 1));
                let next = left_env_step(
                    self.left[j].as_ref().expect("built"),
                    self.mps.tensor(j),
                    self.mpo.site(j),
                );
                self.left[j + 1] = Some(next);
            }
            Direction::Left => {
                self.mps
                    .set_tensor(j, diag_scale_cols(&t.left, &t.singular_values));
                self.mps.set_tensor(j + 1, t.right.clone());
                self.mps.set_center(Some(j));
                let next = right_env_step(
                    self.right[j + 2].as_ref().expect("built"),
                    self.mps.tensor(j + 1),
                    self.mpo.site(j + 1),
                );
                self.right[j + 1] = Some(next);
            }
        }
        Ok(t)
    }

    /// One eigensolve and truncation per bond, left to right or right to left.
    /// Returns the last Ritz energy.
    pub fn sweep(&mut self, direction: Direction) -> Result<f64> {
        let n = self.n_sites();
        let order: Vec<usize> = match direction {
            Direction::Right => (0..n - 1).collect(),
            Direction::Left => (0..n - 1).rev().collect(),
        };
        let mut energy = f64::NAN;
        for j in order {
            let sol = self.solve_pair(j)?;
            energy = sol.energy;
            self.commit_pair(j, &sol.theta, direction)?;
        }
        Ok(energy)
    }
}

/// Lowest two-site eigenvector on the bond `bond` (cut after `bond` sites,
/// `1 ≤ bond < L`) with environments built from `mps`.
pub fn two_site_eigensolve(
    mps: &MpsState,
    mpo: &MpoOperator,
    bond: usize,
    tol: f64,
) -> Result<TwoSiteSolution> {
    let n = mps.n_sites();
    if bond == 0 || bond >= n {
        return argument(format!("bond {bond} out of range for {n} sites"));
    }
    let j = bond - 1;
    let mut state = mps.clone();
    if !matches!(state.center(), Some(c) if c == j || c == j + 1) {
        state.canonicalize(j)?;
    }
    let mut engine = SweepEngine::new(
        state.clone(),
        mpo.clone(),
        LanczosOptions {
            tol,
            ..Default::default()
        },
        0.0,
    )?;
    engine.mps = state;
    engine.rebuild_environments(j);
    let sol = engine.solve_pair(j)?;
    if !sol.converged {
        return Err(Error::Solver {
            iterations: sol.iterations,
            residual: sol.residual,
        });
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::mpo::compile_mpo;
    use crate::engine::mps::expectation;
    use crate::linalg::dense_eigvalsh;
    use crate::pauli::{build_model, Model};

    #[test]
    fn two_sites_reach_dense_ground_energy() {
        let h = build_model(Model::Ising, 2, 1.0).unwrap();
        let mps = MpsState::random_product(2, 4, 1).unwrap();
        let sol = two_site_eigensolve(&mps, &compile_mpo(&h), 1, 1e-9).unwrap();
        assert!((sol.energy + 5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn identity_operator_keeps_state() {
        let mps = MpsState::random(5, 4, 2).unwrap();
        let sol = two_site_eigensolve(&mps, &MpoOperator::identity(5), 2, 1e-9).unwrap();
        assert!((sol.energy - 1.0).abs() < 1e-12);
        let mut c = mps.clone();
        c.canonicalize(1).unwrap();
        let before = c.two_site(1);
        let overlap: C64 = before
            .iter()
            .zip(sol.theta.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bond_out_of_range() {
        let mps = MpsState::random_product(3, 4, 1).unwrap();
        let mpo = MpoOperator::identity(3);
        assert!(two_site_eigensolve(&mps, &mpo, 0, 1e-9).is_err());
        assert!(two_site_eigensolve(&mps, &mpo, 3, 1e-9).is_err());
    }

    #[test]
    fn sweeps_converge_to_dense_ground_energy() {
        let h = build_model(Model::Xxz, 8, 0.5).unwrap();
        let exact = dense_eigvalsh(&h.to_dense().unwrap()).unwrap()[0];
        let mpo = compile_mpo(&h);
        let mps = MpsState::random_product(8, 16, 7).unwrap();
        let mut engine =
            SweepEngine::new(mps, mpo.clone(), LanczosOptions::default(), 1e-12).unwrap();
        let mut last = f64::INFINITY;
        for k in 0..8 {
            let dir = if k % 2 == 0 {
                Direction::Right
            } else {
                Direction::Left
            };
            let e = engine.sweep(dir).unwrap();
            assert!(e <= last + 1e-9, "energy rose from {last} to {e}");
            last = e;
        }
        assert!((last - exact).abs() < 1e-9, "{last} vs {exact}");
        let e = expectation(engine.mps(), &mpo).unwrap();
        assert!((e - exact).abs() < 1e-9);
    }
}
