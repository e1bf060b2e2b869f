use super::vlasov::{PhaseGrid, PhaseSpaceDistribution, VlasovSolver};
use super::{PhysicalConstants, TfError};
use crate::fit::fit_line;
use crate::table::ResultTable;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialProfile {
    /// Unit-temperature Maxwellian.
    Maxwellian,
    /// Two unit-temperature beams at ±drift, half the density each.
    TwoStream { drift: f64 },
}

impl InitialProfile {
    fn f0(&self, v: f64) -> f64 {
        let g = |u: f64| (-0.5 * u * u).exp() / (2.0 * PI).sqrt();
        match *self {
            InitialProfile::Maxwellian => g(v),
            InitialProfile::TwoStream { drift } => 0.5 * (g(v - drift) + g(v + drift)),
        }
    }
}

/// A perturbed-equilibrium run in plasma units (unit density, m = 1, 4πe² = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LandauConfig {
    pub epsilon: f64,
    pub k_mode: f64,
    pub nx: usize,
    pub nv: usize,
    pub v_max: f64,
    pub t_final: f64,
    pub profile: InitialProfile,
    pub fermi_term: bool,
    /// ħ for the Fermi term; irrelevant otherwise.
    pub hbar: f64,
    /// Record every `sample_every` steps.
    pub sample_every: usize,
}

impl LandauConfig {
    /// The standard benchmark: k = 0.5, 128 × 256 grid, v_max = 6, 50 plasma periods.
    pub fn benchmark(epsilon: f64) -> Self {
        Self {
            epsilon,
            k_mode: 0.5,
            nx: 128,
            nv: 256,
            v_max: 6.0,
            t_final: 100.0 * PI,
            profile: InitialProfile::Maxwellian,
            fermi_term: false,
            hbar: 1.0,
            sample_every: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LandauRun {
    /// Columns: t, field_energy, mass, momentum.
    pub table: ResultTable,
    pub dt: f64,
    /// max |M(t) − M(0)| / M(0).
    pub mass_drift: f64,
    /// max |P(t) − P(0)|.
    pub momentum_drift: f64,
}

/// Evolves W₀(v)(1 + ε cos kx) on a box of one wavelength with the largest
/// step allowed by v_max·dt ≤ Δx.
pub fn landau_run(cfg: &LandauConfig) -> Result<LandauRun, TfError> {
    if !(0.0..=0.01).contains(&cfg.epsilon) {
        return Err(TfError::InvalidInput(format!("ε = {} is outside the linear regime [0, 0.01]", cfg.epsilon)));
    }
    if !(cfg.k_mode > 0.0 && cfg.t_final > 0.0 && cfg.hbar > 0.0) || cfg.sample_every == 0 {
        return Err(TfError::InvalidInput("k_mode, t_final, hbar and sample_every must be positive".into()));
    }
    let consts = PhysicalConstants { hbar: cfg.hbar, ..PhysicalConstants::plasma() };
    let grid = PhaseGrid::new(cfg.nx, cfg.nv, 2.0 * PI / cfg.k_mode, cfg.v_max)?;
    let (eps, k, profile) = (cfg.epsilon, cfg.k_mode, cfg.profile);
    let mut w = PhaseSpaceDistribution::from_fn(grid, |x, v| profile.f0(v) * (1.0 + eps * (k * x).cos()))?;
    let solver = VlasovSolver::new(grid, consts);
    let steps = (cfg.t_final * grid.v_max / grid.dx()).ceil() as usize;
    let dt = cfg.t_final / steps as f64;

    let mut table = ResultTable::new(&[("t", "1/omega_p"), ("field_energy", "energy"), ("mass", "1"), ("momentum", "1")]);
    let (m0, p0) = (w.mass(), w.momentum());
    let (mut mass_drift, mut momentum_drift) = (0.0f64, 0.0f64);
    for n in 0..=steps {
        if n > 0 {
            solver.step(&mut w, dt, cfg.fermi_term)?;
        }
        let (m, p) = (w.mass(), w.momentum());
        mass_drift = mass_drift.max(((m - m0) / m0).abs());
        momentum_drift = momentum_drift.max((p - p0).abs());
        if n % cfg.sample_every == 0 || n == steps {
            table.push(vec![n as f64 * dt, solver.field_energy(&w)?, m, p])?;
        }
    }
    Ok(LandauRun { table, dt, mass_drift, momentum_drift })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DampingFit {
    /// Amplitude rate: field energy ∝ e^{2γt}.
    pub gamma: f64,
    /// RMS residual of ln(peak energy) about the fitted line.
    pub residual: f64,
    /// (t, energy) of each refined peak.
    pub peaks: Vec<(f64, f64)>,
}

/// Fits the envelope through the local maxima of the field energy that fall
/// inside `window`. Each peak is refined by a parabola through ln E at the
/// three samples around it.
pub fn fit_damping(table: &ResultTable, window: (f64, f64)) -> Result<DampingFit, TfError> {
    let column = |name: &str| table.column(name).ok_or_else(|| TfError::InvalidInput(format!("table has no `{name}` column")));
    let t = column("t")?;
    let e = column("field_energy")?;
    let mut peaks = Vec::new();
    for i in 1..e.len().saturating_sub(1) {
        if e[i] > e[i - 1] && e[i] >= e[i + 1] && e[i] > 0.0 && e[i - 1] > 0.0 && e[i + 1] > 0.0 {
            let (a, b, c) = (e[i - 1].ln(), e[i].ln(), e[i + 1].ln());
            let denom = a - 2.0 * b + c;
            let off = if denom < 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            let h = t[i + 1] - t[i];
            let tp = t[i] + off * h;
            if tp >= window.0 && tp <= window.1 {
                peaks.push((tp, (b - 0.25 * (a - c) * off).exp()));
            }
        }
    }
    if peaks.len() < 4 {
        return Err(TfError::FitFailed(peaks.len()));
    }
    let ts: Vec<f64> = peaks.iter().map(|p| p.0).collect();
    let ls: Vec<f64> = peaks.iter().map(|p| p.1.ln()).collect();
    let line = fit_line(&ts, &ls)?;
    Ok(DampingFit { gamma: 0.5 * line.slope, residual: line.residual, peaks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Damped,
    Undamped,
    NoSignal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Damped => "DAMPED",
            Verdict::Undamped => "UNDAMPED",
            Verdict::NoSignal => "NO_SIGNAL",
        })
    }
}

/// Thresholds for the damping verdict. No published values exist; these are
/// choices of this implementation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerdictConfig {
    pub window: (f64, f64),
    /// Largest log-space RMS residual accepted as a confident fit.
    pub max_residual: f64,
    /// Field energies never exceeding this count as no signal.
    pub signal_floor: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self { window: (0.0, 40.0), max_residual: 0.25, signal_floor: 1e-20 }
    }
}

/// DAMPED when the peak envelope decays with a confident fit, NO_SIGNAL when
/// the field never leaves the numerical floor, UNDAMPED otherwise (including
/// growth without oscillation, where no envelope can be fitted).
pub fn stability_verdict(table: &ResultTable, cfg: &VerdictConfig) -> Verdict {
    let peak = table.column("field_energy").map(|e| e.iter().fold(0.0f64, |m, &v| m.max(v))).unwrap_or(0.0);
    if peak < cfg.signal_floor {
        return Verdict::NoSignal;
    }
    match fit_damping(table, cfg.window) {
        Ok(fit) if fit.gamma < 0.0 && fit.residual < cfg.max_residual => Verdict::Damped,
        _ => Verdict::Undamped,
    }
}
