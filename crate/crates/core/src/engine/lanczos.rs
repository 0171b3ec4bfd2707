//! Lanczos with full reorthogonalization for the lowest eigenpair of a
//! Hermitian operator given only as a matrix-vector product.

use ndarray::Array2;

use crate::linalg::dense_eigh;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosOptions {
    /// Residual norm `‖Hv − λv‖` at which the iteration stops.
    pub tol: f64,
    /// Total matrix-vector products allowed, across restarts.
    pub max_iterations: usize,
    /// Krylov dimension before a thick restart from the current Ritz vector.
    pub krylov_dim: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iterations: 200,
            krylov_dim: 40,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LanczosOutcome {
    pub value: f64,
    pub vector: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], alpha: C64, x: &[C64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn scale(x: &mut [C64], s: f64) {
    x.iter_mut().for_each(|z| *z *= s);
}

/// Lowest eigenpair of `apply`, warm-started from `start`.
///
/// The returned vector is normalized. If `start` is zero a fixed
/// deterministic vector is used instead.
pub fn lowest_eigenpair<F>(mut apply: F, start: &[C64], opts: LanczosOptions) -> LanczosOutcome
where
    F: FnMut(&[C64]) -> Vec<C64>,
{
    let n = start.len();
    let mut x: Vec<C64> = start.to_vec();
    let nx = norm(&x);
    if nx == 0.0 || !nx.is_finite() {
        x = (0..n)
            .map(|i| C64::new(1.0 + (i % 7) as f64 * 0.1, 0.0))
            .collect();
    }
    let nx = norm(&x);
    scale(&mut x, 1.0 / nx);

    let mut hx = apply(&x);
    let mut matvecs = 1;
    let mut value = dot(&x, &hx).re;
    let mut residual = residual_norm(&hx, &x, value);
    let krylov = opts.krylov_dim.clamp(2, n.max(2));

    while residual > opts.tol && matvecs < opts.max_iterations {
        // One restart cycle seeded with the current Ritz vector.
        let mut basis: Vec<Vec<C64>> = vec![x.clone()];
        let mut images: Vec<Vec<C64>> = vec![hx.clone()];
        let mut alpha: Vec<f64> = vec![value];
        let mut beta: Vec<f64> = Vec::new();
        let best = loop {
            let k = basis.len();
            let mut w = images[k - 1].clone();
            axpy(&mut w, C64::new(-alpha[k - 1], 0.0), &basis[k - 1]);
            if k >= 2 {
                axpy(&mut w, C64::new(-beta[k - 2], 0.0), &basis[k - 2]);
            }
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    axpy(&mut w, -c, b);
                }
            }
            let b_next = norm(&w);
            let (_, y) = tridiagonal_lowest(&alpha, &beta);
            // ‖H r − θ r‖ = β_k |y_k| for the Ritz pair of the current basis.
            let estimate = b_next * y[k - 1].abs();
            let exhausted =
                b_next < 1e-14 * (1.0 + alpha.iter().map(|a| a.abs()).fold(0.0, f64::max));
            if estimate > opts.tol && !exhausted && k < krylov && matvecs < opts.max_iterations {
                scale(&mut w, 1.0 / b_next);
                let hw = apply(&w);
                matvecs += 1;
                beta.push(b_next);
                alpha.push(dot(&w, &hw).re);
                basis.push(w);
                images.push(hw);
                continue;
            }
            let mut ritz = vec![C64::new(0.0, 0.0); n];
            let mut hritz = vec![C64::new(0.0, 0.0); n];
            for (j, c) in y.iter().enumerate() {
                axpy(&mut ritz, C64::new(*c, 0.0), &basis[j]);
                axpy(&mut hritz, C64::new(*c, 0.0), &images[j]);
            }
            let nr = norm(&ritz);
            scale(&mut ritz, 1.0 / nr);
            scale(&mut hritz, 1.0 / nr);
            break (ritz, hritz);
        };
        (x, hx) = best;
        // A fresh Rayleigh quotient guards against drift in the recurrences.
        value = dot(&x, &hx).re;
        residual = residual_norm(&hx, &x, value);
        if basis.len() < 2 {
            break;
        }
    }

    LanczosOutcome {
        value,
        vector: x,
        residual,
        iterations: matvecs,
        converged: residual <= opts.tol,
    }
}

fn residual_norm(hx: &[C64], x: &[C64], value: f64) -> f64 {
    hx.iter()
        .zip(x)
        .map(|(h, v)| (h - v * value).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let mut t = Array2::<C64>::zeros((k, k));
    for i in 0..k {
        t[(i, i)] = C64::new(alpha[i], 0.0);
        if i + 1 < k {
            t[(i, i + 1)] = C64::new(beta[i], 0.0);
            t[(i + 1, i)] = C64::new(beta[i], 0.0);
        }
    }
    let (e, v) = dense_eigh(&t).expect("tridiagonal eigensolve");
    (e[0], v.column(0).iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense_eigvalsh;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> Array2<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Array2::from_shape_fn((n, n), |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        &a + &a.t().mapv(|z| z.conj())
    }

    #[test]
    fn matches_dense_lowest_eigenvalue() {
        for seed in 0..4 {
            let h = random_hermitian(120, seed);
            let exact = dense_eigvalsh(&h).unwrap()[0];
            let start = vec![C64::new(1.0, 0.0); 120];
            let out = lowest_eigenpair(
                |v| h.dot(&ndarray::ArrayView1::from(v)).to_vec(),
                &start,
                LanczosOptions::default(),
            );
            assert!(out.converged, "residual {}", out.residual);
            assert!((out.value - exact).abs() < 1e-9);
            assert!((norm(&out.vector) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_start_needs_one_product() {
        let h = Array2::from_diag(&ndarray::arr1(&[-2.0, 1.0, 3.0]).mapv(|x| C64::new(x, 0.0)));
        let start = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let out = lowest_eigenpair(
            |v| h.dot(&ndarray::ArrayView1::from(v)).to_vec(),
            &start,
            LanczosOptions::default(),
        );
        assert_eq!(out.iterations, 1);
        assert_eq!(out.value, -2.0);
    }

    #[test]
    fn tiny_space() {
        let h = ndarray::array![[C64::new(1.0, 0.0)]];
        let out = lowest_eigenpair(
            |v| h.dot(&ndarray::ArrayView1::from(v)).to_vec(),
            &[C64::new(0.0, 0.0)],
            LanczosOptions::default(),
        );
        assert!(out.converged);
        assert!((out.value - 1.0).abs() < 1e-15);
    }
}
