//! Dense exact diagonalization for short chains.

use ndarray::ArrayView2;

use crate::engine::EntanglementData;
use crate::error::{argument, Error, Result};
use crate::linalg::{dense_eigvalsh, lowest_eigenvector, singular_values};
use crate::pauli::{PauliSum, DENSE_SITE_LIMIT};
use crate::C64;

/// Ground state of a dense Hamiltonian.
#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub n_sites: usize,
    pub energy: f64,
    /// First excited level, when the Hilbert space has more than one state.
    pub gap_energy: Option<f64>,
    pub vector: Vec<C64>,
    /// The two lowest eigenvalues differ by less than `1e-10`.
    pub degenerate: bool,
}

pub fn exact_ground_state(h: &PauliSum) -> Result<ExactSolution> {
    let n = h.n_sites();
    if n > DENSE_SITE_LIMIT {
        return Err(Error::Size {
            sites: n,
            limit: DENSE_SITE_LIMIT,
        });
    }
    let dense = h.to_dense()?;
    let values = dense_eigvalsh(&dense)?;
    let mut vector = lowest_eigenvector(&dense, values[0])?;
    // Fix the gauge: the largest-magnitude amplitude is real and positive.
    let pivot = vector
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty");
    let phase = pivot.conj() / pivot.norm();
    vector.iter_mut().for_each(|z| *z *= phase);
    let gap_energy = values.get(1).copied();
    Ok(ExactSolution {
        n_sites: n,
        energy: values[0],
        gap_energy,
        degenerate: gap_energy.is_some_and(|e1| e1 - values[0] < 1e-10),
        vector,
    })
}

/// Every eigenvalue of `h`, ascending.
pub fn exact_spectrum(h: &PauliSum) -> Result<Vec<f64>> {
    crate::linalg::dense_eigvalsh(&h.to_dense()?)
}

/// Schmidt data of the ground vector across the cut after `cut` sites.
pub fn exact_entanglement(state: &ExactSolution, cut: usize) -> Result<EntanglementData> {
    vector_entanglement(&state.vector, state.n_sites, cut)
}

/// Schmidt data of a dense vector (site 0 most significant).
pub fn vector_entanglement(v: &[C64], n_sites: usize, cut: usize) -> Result<EntanglementData> {
    if cut == 0 || cut >= n_sites {
        return argument(format!("cut {cut} out of range for {n_sites} sites"));
    }
    if v.len() != 1 << n_sites {
        return argument("vector length does not match the chain");
    }
    let m = ArrayView2::from_shape((1 << cut, 1 << (n_sites - cut)), v).expect("shape");
    let s = singular_values(&m)?;
    Ok(EntanglementData::from_singular_values(
        cut,
        s.as_slice().expect("contiguous"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{build_model, Model, PauliString};

    #[test]
    fn single_site_field() {
        let h = PauliSum::from_terms(1, [(-1.0, "X".parse::<PauliString>().unwrap())]).unwrap();
        let s = exact_ground_state(&h).unwrap();
        assert!((s.energy + 1.0).abs() < 1e-14);
        assert!(!s.degenerate);
    }

    #[test]
    fn two_site_ising() {
        let s = exact_ground_state(&build_model(Model::Ising, 2, 1.0).unwrap()).unwrap();
        assert!((s.energy + 5f64.sqrt()).abs() < 1e-12);
        let norm: f64 = s.vector.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_site_heisenberg_is_the_singlet() {
        // XX + YY + ZZ on two sites: singlet at -3, triplet at +1.
        let h = build_model(Model::Xxz, 2, 1.0).unwrap();
        let s = exact_ground_state(&h).unwrap();
        assert!((s.energy + 3.0).abs() < 1e-12);
        assert_eq!(s.gap_energy.map(|e| (e - 1.0).abs() < 1e-12), Some(true));
        let data = exact_entanglement(&s, 1).unwrap();
        assert!((data.entropy - 2f64.ln()).abs() < 1e-12);
        assert!(exact_entanglement(&s, 2).is_err());
    }

    #[test]
    fn residual_and_symmetric_cuts() {
        let h = build_model(Model::Ising, 8, 0.9).unwrap();
        let s = exact_ground_state(&h).unwrap();
        let hv = h.apply_dense_vector(&s.vector).unwrap();
        let r: f64 = hv
            .iter()
            .zip(&s.vector)
            .map(|(a, b)| (a - b * s.energy).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(r < 1e-10);
        // reflection symmetry of the open chain
        for p in 1..8 {
            let a = exact_entanglement(&s, p).unwrap().entropy;
            let b = exact_entanglement(&s, 8 - p).unwrap().entropy;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn product_state_has_no_entanglement() {
        let mut v = vec![C64::new(0.0, 0.0); 8];
        v[5] = C64::new(1.0, 0.0);
        assert_eq!(vector_entanglement(&v, 3, 1).unwrap().entropy, 0.0);
    }
}
