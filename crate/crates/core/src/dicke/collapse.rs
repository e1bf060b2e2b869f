use super::{one_minus_cos, DickeError, DickeParams};
use crate::fit::{fit_power_law, FitError, PowerLawFit};
use crate::table::ResultTable;

/// e^{−(Ng/ω)²(1 − cos ωt)}, the modulus of ⟨U_F⟩ for the vacuum in the fully
/// polarized sector.
pub fn envelope(t: f64, p: &DickeParams) -> f64 {
    let beta = p.n_atoms as f64 * p.g / p.omega;
    (-beta * beta * one_minus_cos(p.omega * t)).exp()
}

/// Characteristic revival-peak width 1/(Ng).
pub fn recurrence_width(p: &DickeParams) -> f64 {
    1.0 / (p.n_atoms as f64 * p.g)
}

/// Full width at half maximum of the envelope peak at t = 2π/ω, found by
/// linear interpolation on a grid aligned with the peak. The grid step is
/// 1/(10Ng), capped at 1/200 of the period.
pub fn revival_fwhm(p: &DickeParams) -> Result<f64, DickeError> {
    p.validate()?;
    let period = p.period();
    let step = (0.1 * recurrence_width(p)).min(period / 200.0);
    let peak = period;
    let max_k = (0.5 * period / step).floor() as i64;
    let crossing = |dir: f64| -> Option<f64> {
        let mut prev = envelope(peak, p);
        for k in 1..=max_k {
            let t = peak + dir * k as f64 * step;
            let cur = envelope(t, p);
            if cur < 0.5 {
                let frac = (prev - 0.5) / (prev - cur);
                return Some(dir * (k as f64 - 1.0 + frac) * step);
            }
            prev = cur;
        }
        None
    };
    match (crossing(-1.0), crossing(1.0)) {
        (Some(left), Some(right)) => Ok(right - left),
        _ => Err(DickeError::NoHalfMaximum { n_atoms: p.n_atoms }),
    }
}

/// Revival-peak widths across atom numbers and their log-log fit.
#[derive(Clone, Debug)]
pub struct CollapseStudy {
    /// Columns: n_atoms, fwhm, recurrence_width, gaussian_fwhm.
    pub table: ResultTable,
    pub fit: PowerLawFit,
    /// Whether |exponent + 1| ≤ the caller's tolerance.
    pub slope_ok: bool,
}

/// Measures the revival FWHM for each N (analytic envelope only) and fits
/// width ∝ N^p. Needs at least three strictly increasing N values.
pub fn collapse_study(base: &DickeParams, n_list: &[usize], tolerance: f64) -> Result<CollapseStudy, DickeError> {
    if n_list.len() < 3 {
        return Err(FitError::InsufficientPoints { needed: 3, got: n_list.len() }.into());
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DickeError::InvalidParams("n_atoms list must be strictly increasing".into()));
    }
    let gauss = 2.0 * (2.0 * std::f64::consts::LN_2).sqrt();
    let mut table = ResultTable::new(&[
        ("n_atoms", "1"),
        ("fwhm", "time"),
        ("recurrence_width", "time"),
        ("gaussian_fwhm", "time"),
    ]);
    let mut widths = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let p = base.with_atoms(n);
        let w = revival_fwhm(&p)?;
        let r = recurrence_width(&p);
        table.push(vec![n as f64, w, r, gauss * r])?;
        widths.push(w);
    }
    let ns: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let fit = fit_power_law(&ns, &widths)?;
    Ok(CollapseStudy { table, slope_ok: (fit.exponent + 1.0).abs() <= tolerance, fit })
}
