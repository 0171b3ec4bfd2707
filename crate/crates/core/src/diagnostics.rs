//! Scalar analyses over solver output: entropy scaling fits, entanglement
//! spectrum rescaling and energy errors.

use std::fmt;

use crate::error::{argument, Error, Result};

/// Result of fitting `S = (c/6) ln L + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub c: f64,
    pub b: f64,
    /// Root-mean-square deviation of the fitted line.
    pub residual: f64,
}

impl fmt::Display for FitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::format::fmt12;
        writeln!(f, "c={}", fmt12(self.c))?;
        writeln!(f, "b={}", fmt12(self.b))?;
        writeln!(f, "residual={}", fmt12(self.residual))
    }
}

/// Result of fitting `ΔS = α L^(-β) + γ` with `β > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaSFit {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub residual: f64,
}

impl fmt::Display for DeltaSFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::format::fmt12;
        writeln!(f, "alpha={}", fmt12(self.alpha))?;
        writeln!(f, "beta={}", fmt12(self.beta))?;
        writeln!(f, "gamma={}", fmt12(self.gamma))?;
        writeln!(f, "residual={}", fmt12(self.residual))
    }
}

/// Levels closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Ordinary least squares `y = m x + q`; returns `(m, q, rms)`.
fn line_fit(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let scale = points.iter().map(|p| p.0.abs()).fold(1.0, f64::max);
    if !(sxx > 1e-24 * scale * scale * n) {
        return None;
    }
    let m = sxy / sxx;
    let q = my - m * mx;
    let rms = (points
        .iter()
        .map(|p| (p.1 - m * p.0 - q).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Some((m, q, rms))
}

/// Least-squares central charge from `(L, S)` pairs.
pub fn fit_central_charge(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let mut lengths: Vec<f64> = points.iter().map(|p| p.0).collect();
    lengths.sort_by(f64::total_cmp);
    if lengths.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Fit("chain lengths must be distinct".into()));
    }
    if points.iter().any(|p| !(p.0 > 0.0) || !p.1.is_finite()) {
        return Err(Error::Fit(
            "lengths must be positive and entropies finite".into(),
        ));
    }
    let design: Vec<(f64, f64)> = points.iter().map(|&(l, s)| (l.ln() / 6.0, s)).collect();
    let (c, b, residual) =
        line_fit(&design).ok_or_else(|| Error::Fit("degenerate design matrix".into()))?;
    Ok(FitResult { c, b, residual })
}

/// For fixed `β`, the best `(α, γ, rms)`.
fn profile_beta(points: &[(f64, f64)], beta: f64) -> Option<(f64, f64, f64)> {
    let design: Vec<(f64, f64)> = points.iter().map(|&(l, d)| (l.powf(-beta), d)).collect();
    line_fit(&design)
}

/// Nonlinear fit of `ΔS = α L^(-β) + γ` by variable projection: `α, γ` are
/// solved linearly and `β` is optimised over `(0, 20]` on a log grid followed
/// by golden-section refinement.
pub fn fit_entropy_reduction(points: &[(f64, f64)]) -> Result<DeltaSFit> {
    if points.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    for &(l, d) in points {
        if !(l > 1.0) || !d.is_finite() {
            return Err(Error::Fit(format!("invalid point ({l}, {d})")));
        }
        if d < 0.0 {
            return argument(format!(
                "entropy reduction must be non-negative, got {d} at L={l}"
            ));
        }
    }
    let objective =
        |log_beta: f64| profile_beta(points, log_beta.exp()).map_or(f64::INFINITY, |r| r.2);

    let (lo, hi, steps) = ((1e-3f64).ln(), 20f64.ln(), 400);
    let grid: Vec<f64> = (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| objective(x)).collect();
    let best = (0..values.len())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty grid");
    if !values[best].is_finite() {
        return Err(Error::Fit(
            "objective is not finite anywhere on the beta grid".into(),
        ));
    }
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(steps)]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    let mut trace = Vec::new();
    for _ in 0..200 {
        if (b - a).abs() < 1e-12 {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = objective(x2);
        }
        trace.push(f1.min(f2));
    }
    let beta = (0.5 * (a + b)).exp();
    let (alpha, gamma, residual) = profile_beta(points, beta)
        .filter(|r| r.2.is_finite())
        .ok_or_else(|| {
            Error::Fit(format!(
                "no convergence; residual trace {:?}",
                &trace[trace.len().saturating_sub(5)..]
            ))
        })?;
    Ok(DeltaSFit {
        alpha,
        beta,
        gamma,
        residual,
    })
}

/// Ascending distinct levels of a sorted spectrum, merged within `tol`.
pub fn distinct_levels(spec: &[f64], tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &x in spec {
        if out.last().is_none_or(|&y| x - y > tol) {
            out.push(x);
        }
    }
    out
}

/// Affine map sending the lowest level to `target_lowest` and the second
/// distinct level to `target_second`.
pub fn normalize_spectrum(
    spec: &[f64],
    target_lowest: f64,
    target_second: f64,
) -> Result<Vec<f64>> {
    normalize_spectrum_with_tol(spec, target_lowest, target_second, DEGENERACY_TOL)
}

pub fn normalize_spectrum_with_tol(
    spec: &[f64],
    target_lowest: f64,
    target_second: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    if spec.is_empty() {
        return Err(Error::Normalization("empty spectrum".into()));
    }
    if spec.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Normalization(
            "spectrum must be sorted ascending".into(),
        ));
    }
    let levels = distinct_levels(spec, tol);
    if levels.len() < 2 {
        return Err(Error::Normalization(
            "fewer than two distinct levels".into(),
        ));
    }
    let scale = (target_second - target_lowest) / (levels[1] - levels[0]);
    Ok(spec
        .iter()
        .map(|&x| target_lowest + scale * (x - levels[0]))
        .collect())
}

/// `|e - e_ref| / |e_ref|`.
pub fn relative_energy_error(e: f64, e_ref: f64) -> Result<f64> {
    if e_ref == 0.0 {
        return argument("reference energy is zero");
    }
    Ok((e - e_ref).abs() / e_ref.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_charge_is_exact_on_synthetic_data() {
        let pts: Vec<(f64, f64)> = [16.0, 32.0, 64.0]
            .iter()
            .map(|&l: &f64| (l, 0.5 / 6.0 * l.ln() + 0.7))
            .collect();
        let fit = fit_central_charge(&pts).unwrap();
        assert!((fit.c - 0.5).abs() < 1e-12);
        assert!((fit.b - 0.7).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn central_charge_rejects_bad_input() {
        assert!(fit_central_charge(&[(8.0, 0.1), (16.0, 0.2)]).is_err());
        assert!(fit_central_charge(&[(8.0, 0.1), (8.0, 0.2), (16.0, 0.3)]).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn entropy_reduction_synthetic() {
        let pts: Vec<(f64, f64)> = [16.0, 24.0, 32.0, 48.0, 64.0, 96.0]
            .iter()
            .map(|&l: &f64| (l, 0.5 / l + 0.6931))
            .collect();
        let fit = fit_entropy_reduction(&pts).unwrap();
        assert!((fit.gamma - 0.6931).abs() < 1e-6, "{fit:?}");
        assert!((fit.beta - 1.0).abs() < 1e-4);
        assert!(fit.beta > 0.0);
    }

    #[test]
    fn entropy_reduction_rejects_negative_delta() {
        let pts = [(16.0, 0.3), (24.0, 0.3), (32.0, -0.1), (48.0, 0.3)];
        assert!(fit_entropy_reduction(&pts).is_err());
        assert!(fit_entropy_reduction(&pts[..3]).is_err());
    }

    #[test]
    fn normalization_examples() {
        let out = normalize_spectrum(&[0.2, 1.2, 2.2], 0.0, 1.0).unwrap();
        for (a, b) in out.iter().zip([0.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(
            normalize_spectrum(&[5.0, 5.0, 7.0], 0.0, 1.0).unwrap(),
            vec![0.0, 0.0, 1.0]
        );
        assert!(normalize_spectrum(&[1.0, 1.0], 0.0, 1.0).is_err());
        assert!(normalize_spectrum(&[], 0.0, 1.0).is_err());
    }

    #[test]
    fn normalization_is_idempotent() {
        let once = normalize_spectrum(&[0.3, 0.9, 1.4, 2.0], 1.0 / 16.0, 1.0 + 1.0 / 16.0).unwrap();
        let twice = normalize_spectrum(&once, 1.0 / 16.0, 1.0 + 1.0 / 16.0).unwrap();
        for (a, b) in once.iter().zip(&twice) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_error() {
        assert_eq!(relative_energy_error(-10.0, -10.0).unwrap(), 0.0);
        assert!((relative_energy_error(-9.9, -10.0).unwrap() - 0.01).abs() < 1e-15);
        assert!(relative_energy_error(1.0, 0.0).is_err());
    }
}
