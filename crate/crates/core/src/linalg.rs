//! Thin wrappers over LAPACK for the dense kernels used throughout.

use ndarray::{Array1, Array2, ArrayView2};
use ndarray_linalg::{Eigh, FactorizeC, JobSvd, Lapack, Norm, Scalar, SolveC, SVD, SVDDC, UPLO};

use crate::error::{Error, Result};
use crate::C64;

/// Row-major copy when needed, so reshapes see the logical element order.
pub trait Standard {
    fn standard(self) -> Self;
}

impl<D: ndarray::Dimension> Standard for ndarray::Array<C64, D> {
    fn standard(self) -> Self {
        if self.is_standard_layout() {
            self
        } else {
            self.as_standard_layout().into_owned()
        }
    }
}

pub fn matmul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    a.dot(b)
}

/// Conjugate transpose.
pub fn adjoint(a: &ArrayView2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

/// Largest entry magnitude of `ab - ba`.
pub fn dense_commutator_norm(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let c = a.dot(b) - b.dot(a);
    c.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn is_real(m: &Array2<C64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Ascending eigenvalues of a Hermitian matrix, by the divide-and-conquer
/// LAPACK driver (much faster than the QR driver at a few thousand rows).
pub fn dense_eigvalsh(m: &Array2<C64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Linalg(format!(
            "{}x{} matrix is not square",
            n,
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // A Hermitian matrix read in the transposed layout is its conjugate,
    // which has the same eigenvalues, so the storage order does not matter.
    let dim = i32::try_from(n).map_err(|_| Error::Linalg("matrix too large".into()))?;
    let (job, uplo) = (b'N' as std::ffi::c_char, b'L' as std::ffi::c_char);
    let mut w = vec![0.0f64; n];
    let mut info = 0;
    let (mut lwork, mut lrwork, mut liwork) = (-1i32, -1i32, -1i32);
    if is_real(m) {
        let mut a: Vec<f64> = m.iter().map(|z| z.re).collect();
        let (mut wq, mut iq) = ([0.0f64], [0i32]);
        // SAFETY: workspace query followed by the call with buffers of the queried sizes.
        unsafe {
            lapack_sys::dsyevd_(
                &job,
                &uplo,
                &dim,
                a.as_mut_ptr(),
                &dim,
                w.as_mut_ptr(),
                wq.as_mut_ptr(),
                &lwork,
                iq.as_mut_ptr(),
                &liwork,
                &mut info,
            );
            lwork = wq[0] as i32;
            liwork = iq[0];
            let mut work = vec![0.0f64; lwork as usize];
            let mut iwork = vec![0i32; liwork as usize];
            lapack_sys::dsyevd_(
                &job,
                &uplo,
                &dim,
                a.as_mut_ptr(),
                &dim,
                w.as_mut_ptr(),
                work.as_mut_ptr(),
                &lwork,
                iwork.as_mut_ptr(),
                &liwork,
                &mut info,
            );
        }
    } else {
        let mut a: Vec<lapack_sys::__BindgenComplex<f64>> = m
            .iter()
            .map(|z| lapack_sys::__BindgenComplex { re: z.re, im: z.im })
            .collect();
        let (mut wq, mut rq, mut iq) = (
            [lapack_sys::__BindgenComplex { re: 0.0, im: 0.0 }],
            [0.0f64],
            [0i32],
        );
        // SAFETY: as above.
        unsafe {
            lapack_sys::zheevd_(
                &job,
                &uplo,
                &dim,
                a.as_mut_ptr(),
                &dim,
                w.as_mut_ptr(),
                wq.as_mut_ptr(),
                &lwork,
                rq.as_mut_ptr(),
                &lrwork,
                iq.as_mut_ptr(),
                &liwork,
                &mut info,
            );
            lwork = wq[0].re as i32;
            lrwork = rq[0] as i32;
            liwork = iq[0];
            let mut work = vec![lapack_sys::__BindgenComplex { re: 0.0, im: 0.0 }; lwork as usize];
            let mut rwork = vec![0.0f64; lrwork as usize];
            let mut iwork = vec![0i32; liwork as usize];
            lapack_sys::zheevd_(
                &job,
                &uplo,
                &dim,
                a.as_mut_ptr(),
                &dim,
                w.as_mut_ptr(),
                work.as_mut_ptr(),
                &lwork,
                rwork.as_mut_ptr(),
                &lrwork,
                iwork.as_mut_ptr(),
                &liwork,
                &mut info,
            );
        }
    }
    if info != 0 {
        return Err(Error::Linalg(format!(
            "eigenvalue driver returned info={info}"
        )));
    }
    Ok(w)
}

/// Ascending eigenvalues and eigenvectors (columns) of a Hermitian matrix.
/// Real symmetric input takes the cheaper real LAPACK path.
pub fn dense_eigh(m: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>)> {
    if is_real(m) {
        let r = m.mapv(|z| z.re);
        let (e, v) = r.eigh(UPLO::Lower)?;
        Ok((e.to_vec(), v.mapv(|x| C64::new(x, 0.0))))
    } else {
        let (e, v) = m.eigh(UPLO::Lower)?;
        Ok((e.to_vec(), v))
    }
}

/// Eigenvector for the eigenvalue `e0`, assumed lowest, by inverse iteration
/// on a Cholesky factor of `m - σ`. Deterministic start vector; unit norm.
pub fn lowest_eigenvector(m: &Array2<C64>, e0: f64) -> Result<Vec<C64>> {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let sigma = e0 - 1e-9 * scale;
    let residual = |v: &[C64]| -> f64 {
        let mv = m.dot(&ndarray::ArrayView1::from(v));
        mv.iter()
            .zip(v)
            .map(|(a, b)| (a - b * e0).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let start: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + ((i * 7919) % 101) as f64 / 101.0, 0.0))
        .collect();
    let v = if is_real(m) {
        let r = m.mapv(|z| z.re);
        let x = inverse_iteration(&r, sigma, start.iter().map(|z| z.re).collect())?;
        x.into_iter().map(|x| C64::new(x, 0.0)).collect()
    } else {
        inverse_iteration(m, sigma, start)?
    };
    let r = residual(&v);
    if r > 1e-8 * scale {
        return Err(Error::Linalg(format!("inverse iteration residual {r:e}")));
    }
    Ok(v)
}

fn inverse_iteration<A: Scalar + Lapack>(
    m: &Array2<A>,
    sigma: f64,
    start: Vec<A>,
) -> Result<Vec<A>> {
    let mut shifted = m.clone();
    for i in 0..m.nrows() {
        shifted[(i, i)] -= A::from_real(A::real(sigma));
    }
    let factor = shifted.factorizec(UPLO::Lower)?;
    let mut x = Array1::from(start);
    for _ in 0..4 {
        x = factor.solvec(&x)?;
        let norm = x.norm_l2();
        x.mapv_inplace(|z| z / A::from_real(norm));
    }
    Ok(x.to_vec())
}

/// Thin SVD `m = u · diag(s) · vt` with descending `s`.
pub fn svd_thin(m: &ArrayView2<C64>) -> Result<(Array2<C64>, Array1<f64>, Array2<C64>)> {
    match m.svddc(JobSvd::Some) {
        Ok((Some(u), s, Some(vt))) => Ok((u, s, vt)),
        _ => {
            // gesdd occasionally fails on badly scaled input; gesvd is slower but sturdier.
            let (u, s, vt) = m.svd(true, true)?;
            let k = s.len();
            let (u, vt) = (
                u.ok_or_else(|| missing("U"))?,
                vt.ok_or_else(|| missing("Vt"))?,
            );
            Ok((
                u.slice(ndarray::s![.., ..k]).to_owned(),
                s,
                vt.slice(ndarray::s![..k, ..]).to_owned(),
            ))
        }
    }
}

/// Singular values only, descending.
pub fn singular_values(m: &ArrayView2<C64>) -> Result<Array1<f64>> {
    let (_, s, _) = m.svddc(JobSvd::None)?;
    Ok(s)
}

fn missing(what: &str) -> Error {
    Error::Linalg(format!("SVD returned no {what}"))
}

/// `-Σ p ln p` over strictly positive entries.
pub fn von_neumann_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Normalized, descending probabilities from (unnormalized) eigenvalues of a
/// reduced density matrix; tiny negative roundoff is clamped to zero.
pub fn normalized_probabilities(weights: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut p: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|x| *x /= total);
    }
    p.sort_by(|a, b| b.total_cmp(a));
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn svd_reconstructs() {
        let m = array![
            [C64::new(1.0, 0.5), C64::new(2.0, 0.0), C64::new(0.0, -1.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 1.0), C64::new(3.0, 0.0)]
        ];
        let (u, s, vt) = svd_thin(&m.view()).unwrap();
        let us = &u * &s.mapv(|x| C64::new(x, 0.0));
        let back = us.dot(&vt);
        assert!((&back - &m).iter().all(|z| z.norm() < 1e-12));
        assert!(s[0] >= s[1]);
    }

    #[test]
    fn entropy_of_uniform_distribution() {
        assert!((von_neumann_entropy(&[0.5, 0.5]) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(von_neumann_entropy(&[1.0, 0.0]), 0.0);
        assert_eq!(
            normalized_probabilities([1.0, 3.0, -1e-18]),
            vec![0.75, 0.25, 0.0]
        );
    }
}
