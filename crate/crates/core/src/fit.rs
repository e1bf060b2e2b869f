//! Least-squares fits used by the scaling-law checks.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("power-law fit requires strictly positive inputs")]
    NonPositiveInput,
    #[error("abscissae are degenerate")]
    Degenerate,
    #[error("input lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the residuals.
    pub residual: f64,
}

/// Ordinary least squares y ≈ slope·x + intercept; needs two distinct x values.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit, FitError> {
    if xs.len() != ys.len() {
        return Err(FitError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(FitError::InsufficientPoints { needed: 2, got: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(FitError::Degenerate);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok(LineFit { slope, intercept, residual: (ss / n).sqrt() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Intercept of the fit in log space, ln c for y = c·x^p.
    pub intercept: f64,
    /// RMS residual in log space.
    pub residual: f64,
}

/// Fits y = c·x^p by least squares on (ln x, ln y).
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit, FitError> {
    if xs.len() != ys.len() {
        return Err(FitError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(FitError::InsufficientPoints { needed: 3, got: xs.len() });
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(FitError::NonPositiveInput);
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let line = fit_line(&lx, &ly)?;
    Ok(PowerLawFit { exponent: line.slope, intercept: line.intercept, residual: line.residual })
}

/// Least-squares c for y ≈ c·x² (a quadratic through the origin).
pub fn fit_quadratic_coefficient(xs: &[f64], ys: &[f64]) -> Result<f64, FitError> {
    if xs.len() != ys.len() {
        return Err(FitError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.is_empty() {
        return Err(FitError::InsufficientPoints { needed: 1, got: 0 });
    }
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| x * x * y).sum();
    let den: f64 = xs.iter().map(|x| x.powi(4)).sum();
    if den == 0.0 {
        return Err(FitError::Degenerate);
    }
    Ok(num / den)
}
