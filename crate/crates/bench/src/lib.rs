//! Fixtures shared by the benchmarks.

use camps_core::engine::{compile_mpo, MpoOperator, MpsState};
use camps_core::pauli::{build_model, Model};
use camps_core::C64;
use ndarray::Array4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Normalized random two-site tensor `(bond, 2, 2, bond)`.
pub fn random_theta(bond: usize, seed: u64) -> Array4<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Array4::from_shape_fn((bond, 2, 2, bond), |_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let norm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    t.mapv_inplace(|z| z / norm);
    t
}

/// Random MPS and the MPO of a model on the same chain.
pub fn chain(model: Model, length: usize, bond: usize) -> (MpsState, MpoOperator) {
    let mps = MpsState::random(length, bond, 7).expect("random MPS");
    let mpo = compile_mpo(&build_model(model, length, 1.0).expect("model"));
    (mps, mpo)
}
