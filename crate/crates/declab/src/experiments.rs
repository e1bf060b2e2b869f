//! Experiment catalogue: parameter schemas, output columns, and how each
//! config point becomes a run of the core library.

use declab_core::dicke::{
    analytic_series, collapse_study, envelope, exact_series_converged, DickeError, DickeParams, PolarizationSector, Propagation,
    RadiationState,
};
use declab_core::fit::{fit_power_law, fit_quadratic_coefficient};
use declab_core::qcore::C64;
use declab_core::rng::SplitMix64;
use declab_core::spinfid::{check_hypotheses, variance, FidelityCurve, ModelFamily, ProductState, SpinError};
use declab_core::table::{ResultTable, TableError};
use declab_core::tfvlasov::{
    fit_damping, landau_root, landau_run, stability_verdict, tf_energy_scaling, wigner_kirkwood_factor, Grid, InitialProfile,
    LandauConfig, PhysicalConstants, PotentialField, TfError, Verdict, VerdictConfig,
};
use thiserror::Error;

use crate::config::{ConfigError, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Bool,
    Choice(&'static [&'static str]),
    Path,
    IntList,
    FloatList,
}

impl Kind {
    pub fn is_list(self) -> bool {
        matches!(self, Kind::IntList | Kind::FloatList)
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Kind::Float | Kind::Int)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: Kind,
    pub required: bool,
    pub default: Option<&'static str>,
    pub unit: &'static str,
}

const fn req(key: &'static str, kind: Kind, unit: &'static str) -> ParamSpec {
    ParamSpec { key, kind, required: true, default: None, unit }
}

const fn opt(key: &'static str, kind: Kind, default: &'static str, unit: &'static str) -> ParamSpec {
    ParamSpec { key, kind, required: false, default: Some(default), unit }
}

const COMMON: [ParamSpec; 2] = [
    ParamSpec { key: "output", kind: Kind::Path, required: false, default: None, unit: "" },
    opt("seed", Kind::Int, "0", "1"),
];

const MODELS: &[&str] = &["independent-field", "transverse-ising"];

const DICKE_ENVELOPE: &[ParamSpec] = &[
    req("omega", Kind::Float, "1/time"),
    req("g", Kind::Float, "1/time"),
    req("n_atoms", Kind::Int, "1"),
    req("t_max", Kind::Float, "time"),
    req("n_points", Kind::Int, "1"),
];

const DICKE_EXACT: &[ParamSpec] = &[
    req("omega", Kind::Float, "1/time"),
    req("g", Kind::Float, "1/time"),
    req("n_atoms", Kind::Int, "1"),
    opt("fock_cutoff", Kind::Int, "64", "1"),
    opt("state", Kind::Choice(&["vacuum", "number", "coherent"]), "vacuum", ""),
    opt("photon_number", Kind::Int, "1", "1"),
    opt("coherent_re", Kind::Float, "0", "1"),
    opt("coherent_im", Kind::Float, "0", "1"),
    opt("n_points", Kind::Int, "50", "1"),
];

const DICKE_COLLAPSE: &[ParamSpec] = &[
    req("omega", Kind::Float, "1/time"),
    req("g", Kind::Float, "1/time"),
    req("n_atoms", Kind::IntList, "1"),
    opt("tolerance", Kind::Float, "0.05", "1"),
];

const SPIN_GAUSSIAN: &[ParamSpec] = &[
    req("model", Kind::Choice(MODELS), ""),
    req("n_sites", Kind::Int, "1"),
    req("t_max", Kind::Float, "time"),
    opt("n_points", Kind::Int, "200", "1"),
    opt("delta", Kind::Float, "1", "energy"),
    opt("j", Kind::Float, "1", "energy"),
    opt("h", Kind::Float, "0.7", "energy"),
    opt("theta", Kind::Float, "1.1", "rad"),
    opt("phi", Kind::Float, "0.4", "rad"),
    opt("state", Kind::Choice(&["reference", "random"]), "reference", ""),
];

const SPIN_HYPOTHESES: &[ParamSpec] = &[
    req("model", Kind::Choice(MODELS), ""),
    req("n_sites", Kind::IntList, "1"),
    opt("c", Kind::Float, "0.1", "energy^2"),
    opt("c_prime", Kind::Float, "1", "energy"),
    opt("tau_max", Kind::Float, "3", "1"),
    opt("n_tau", Kind::Int, "61", "1"),
    opt("delta", Kind::Float, "1", "energy"),
    opt("j", Kind::Float, "1", "energy"),
    opt("h", Kind::Float, "0.7", "energy"),
    opt("theta", Kind::Float, "1.1", "rad"),
    opt("phi", Kind::Float, "0.4", "rad"),
    opt("state", Kind::Choice(&["reference", "random"]), "reference", ""),
];

const LANDAU: &[ParamSpec] = &[
    opt("epsilon", Kind::Float, "0.001", "1"),
    opt("k_mode", Kind::Float, "0.5", "1/debye_length"),
    opt("nx", Kind::Int, "128", "1"),
    opt("nv", Kind::Int, "256", "1"),
    opt("v_max", Kind::Float, "6", "v_th"),
    opt("t_final", Kind::Float, "314.1592653589793", "1/omega_p"),
    opt("profile", Kind::Choice(&["maxwellian", "two-stream"]), "maxwellian", ""),
    opt("drift", Kind::Float, "2.4", "v_th"),
    opt("fermi_term", Kind::Bool, "false", ""),
    opt("hbar", Kind::Float, "1", "1"),
    opt("sample_every", Kind::Int, "1", "1"),
    opt("fit_start", Kind::Float, "0", "1/omega_p"),
    opt("fit_end", Kind::Float, "40", "1/omega_p"),
    opt("max_residual", Kind::Float, "0.25", "1"),
    opt("rate_tolerance", Kind::Float, "0.05", "1"),
];

const TF_SCALING: &[ParamSpec] = &[
    req("z", Kind::IntList, "1"),
    opt("hbar", Kind::Float, "1", "1"),
    opt("mass", Kind::Float, "1", "1"),
    opt("charge", Kind::Float, "1", "1"),
];

const WK: &[ParamSpec] = &[
    req("potential", Kind::Choice(&["harmonic", "constant"]), ""),
    opt("spring", Kind::Float, "1", "energy/length^2"),
    opt("level", Kind::Float, "0", "energy"),
    opt("x", Kind::Float, "0.5", "length"),
    opt("half_width", Kind::Float, "2", "length"),
    opt("grid_points", Kind::Int, "81", "1"),
    opt("t_min", Kind::Float, "0.001", "time"),
    opt("t_max", Kind::Float, "0.1", "time"),
    opt("n_points", Kind::Int, "21", "1"),
    opt("hbar", Kind::Float, "1", "1"),
    opt("mass", Kind::Float, "1", "1"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    DickeEnvelope,
    DickeExactVsAnalytic,
    DickeCollapseScaling,
    SpinGaussian,
    SpinHypotheses,
    LandauDamping,
    TfEnergyScaling,
    WkDiagnostic,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::DickeEnvelope,
        Experiment::DickeExactVsAnalytic,
        Experiment::DickeCollapseScaling,
        Experiment::SpinGaussian,
        Experiment::SpinHypotheses,
        Experiment::LandauDamping,
        Experiment::TfEnergyScaling,
        Experiment::WkDiagnostic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::DickeEnvelope => "dicke-envelope",
            Experiment::DickeExactVsAnalytic => "dicke-exact-vs-analytic",
            Experiment::DickeCollapseScaling => "dicke-collapse-scaling",
            Experiment::SpinGaussian => "spin-gaussian",
            Experiment::SpinHypotheses => "spin-hypotheses",
            Experiment::LandauDamping => "landau-damping",
            Experiment::TfEnergyScaling => "tf-energy-scaling",
            Experiment::WkDiagnostic => "wk-diagnostic",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::DickeEnvelope => "collapse/revival envelope |<U_F(t)>| for the vacuum field",
            Experiment::DickeExactVsAnalytic => "analytic <U_F(t)> against exact propagation over one period",
            Experiment::DickeCollapseScaling => "revival-peak FWHM against atom number, with log-log fit",
            Experiment::SpinGaussian => "exact product-state fidelity against the Gaussian limit",
            Experiment::SpinHypotheses => "variance bounds and rescaled-time Gaussian convergence across N",
            Experiment::LandauDamping => "1D1V Vlasov-Poisson run with damping-rate fit and verdict",
            Experiment::TfEnergyScaling => "minimized Thomas-Fermi energy against nuclear charge",
            Experiment::WkDiagnostic => "Wigner-Kirkwood correction |factor - 1| against time",
        }
    }

    fn own_params(self) -> &'static [ParamSpec] {
        match self {
            Experiment::DickeEnvelope => DICKE_ENVELOPE,
            Experiment::DickeExactVsAnalytic => DICKE_EXACT,
            Experiment::DickeCollapseScaling => DICKE_COLLAPSE,
            Experiment::SpinGaussian => SPIN_GAUSSIAN,
            Experiment::SpinHypotheses => SPIN_HYPOTHESES,
            Experiment::LandauDamping => LANDAU,
            Experiment::TfEnergyScaling => TF_SCALING,
            Experiment::WkDiagnostic => WK,
        }
    }

    /// Experiment parameters followed by the keys every experiment accepts.
    pub fn params(self) -> impl Iterator<Item = &'static ParamSpec> {
        self.own_params().iter().chain(COMMON.iter())
    }

    pub fn param(self, key: &str) -> Option<&'static ParamSpec> {
        self.params().find(|p| p.key == key)
    }

    /// Output columns as (name, unit); fixed per experiment.
    pub fn columns(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Experiment::DickeEnvelope => &[("t", "time"), ("envelope", "1")],
            Experiment::DickeExactVsAnalytic => &[
                ("t", "time"),
                ("analytic_re", "1"),
                ("analytic_im", "1"),
                ("exact_re", "1"),
                ("exact_im", "1"),
                ("abs_deviation", "1"),
            ],
            Experiment::DickeCollapseScaling => {
                &[("n_atoms", "1"), ("fwhm", "time"), ("recurrence_width", "time"), ("gaussian_fwhm", "time")]
            }
            Experiment::SpinGaussian => {
                &[("t", "time"), ("fidelity_exact", "1"), ("gaussian_prediction", "1"), ("abs_deviation", "1")]
            }
            Experiment::SpinHypotheses => &[
                ("n_sites", "1"),
                ("sigma_sq", "energy^2"),
                ("c_lower", "energy^2"),
                ("c_prime", "energy"),
                ("hypotheses_met", "1"),
                ("sup_deviation", "1"),
            ],
            Experiment::LandauDamping => &[("t", "1/omega_p"), ("field_energy", "energy"), ("mass", "1"), ("momentum", "1")],
            Experiment::TfEnergyScaling => &[("z", "1"), ("energy", "energy"), ("scale_length", "length"), ("cusp_exponent", "1")],
            Experiment::WkDiagnostic => &[("t", "time"), ("factor_re", "1"), ("factor_im", "1"), ("abs_deviation", "1")],
        }
    }

    pub fn empty_table(self) -> ResultTable {
        ResultTable::new(self.columns())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Dicke(#[from] DickeError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Kinetic(#[from] TfError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{0}")]
    Other(String),
}

/// One named acceptance check and its outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_owned(), passed, detail }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub table: ResultTable,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    IndependentField,
    TransverseIsing,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WkPotential {
    Harmonic { spring: f64 },
    Constant { level: f64 },
}

/// A validated config point, ready to run.
#[derive(Clone, Debug)]
pub enum Job {
    DickeEnvelope { p: DickeParams, t_max: f64, n_points: usize },
    DickeExact { p: DickeParams, state: RadiationState, n_points: usize },
    DickeCollapse { base: DickeParams, n_list: Vec<usize>, tolerance: f64 },
    SpinGaussian { model: Model, family: ModelFamily, n_sites: usize, random_state: bool, seed: u64, t_max: f64, n_points: usize },
    SpinHypotheses { model: Model, family: ModelFamily, n_list: Vec<usize>, c: f64, c_prime: f64, tau: Vec<f64>, random_state: bool, seed: u64 },
    Landau { cfg: LandauConfig, verdict: VerdictConfig, rate_tolerance: f64 },
    TfScaling { base: PhysicalConstants, z_list: Vec<u32> },
    Wk { potential: WkPotential, consts: PhysicalConstants, grid: Grid, x_index: usize, times: Vec<f64> },
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Validation(msg.into())
}

fn positive(p: &Params, key: &str) -> Result<f64, ConfigError> {
    let v = p.f64(key);
    if v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("{key} must be positive")))
    }
}

fn at_least(p: &Params, key: &str, min: usize) -> Result<usize, ConfigError> {
    let v = p.usize(key);
    if v >= min {
        Ok(v)
    } else {
        Err(invalid(format!("{key} must be at least {min}")))
    }
}

fn dicke_params(p: &Params, n_atoms: usize, cutoff: usize) -> Result<DickeParams, ConfigError> {
    DickeParams::new(p.f64("omega"), 0.0, p.f64("g"), n_atoms, cutoff).map_err(|e| invalid(e.to_string()))
}

fn model_family(p: &Params) -> Result<(Model, ModelFamily), ConfigError> {
    Ok(match p.word("model").as_str() {
        "independent-field" => (Model::IndependentField, ModelFamily::IndependentField { delta: p.f64("delta") }),
        _ => (
            Model::TransverseIsing,
            ModelFamily::TransverseIsing { j: p.f64("j"), h: p.f64("h"), theta: p.f64("theta"), phi: p.f64("phi") },
        ),
    })
}

fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![start];
    }
    (0..n).map(|k| start + (end - start) * k as f64 / (n - 1) as f64).collect()
}

/// Validates one config point and builds its job.
pub fn prepare(experiment: Experiment, p: &Params) -> Result<Job, ConfigError> {
    Ok(match experiment {
        Experiment::DickeEnvelope => {
            let n = at_least(p, "n_atoms", 1)?;
            Job::DickeEnvelope { p: dicke_params(p, n, 1)?, t_max: positive(p, "t_max")?, n_points: at_least(p, "n_points", 2)? }
        }
        Experiment::DickeExactVsAnalytic => {
            let n = at_least(p, "n_atoms", 1)?;
            let cutoff = at_least(p, "fock_cutoff", 2)?;
            let params = dicke_params(p, n, cutoff)?;
            let state = match p.word("state").as_str() {
                "vacuum" => RadiationState::vacuum(cutoff),
                "number" => {
                    let k = p.usize("photon_number");
                    if k + 2 > cutoff {
                        return Err(invalid(format!("photon_number {k} needs fock_cutoff of at least {}", k + 2)));
                    }
                    RadiationState::number(k, cutoff)
                }
                _ => RadiationState::coherent(C64::new(p.f64("coherent_re"), p.f64("coherent_im")), cutoff),
            };
            if state.support_max() + 2 > cutoff {
                return Err(invalid(format!("the field state needs fock_cutoff of at least {}", state.support_max() + 2)));
            }
            Job::DickeExact { p: params, state, n_points: at_least(p, "n_points", 2)? }
        }
        Experiment::DickeCollapseScaling => {
            let n_list = p.usize_list("n_atoms");
            if n_list.len() < 3 || n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
                return Err(invalid("n_atoms must list at least 3 strictly increasing positive values"));
            }
            Job::DickeCollapse { base: dicke_params(p, n_list[0], 1)?, n_list, tolerance: positive(p, "tolerance")? }
        }
        Experiment::SpinGaussian => {
            let (model, family) = model_family(p)?;
            Job::SpinGaussian {
                model,
                family,
                n_sites: at_least(p, "n_sites", 1)?,
                random_state: p.word("state") == "random",
                seed: p.seed(),
                t_max: positive(p, "t_max")?,
                n_points: at_least(p, "n_points", 2)?,
            }
        }
        Experiment::SpinHypotheses => {
            let (model, family) = model_family(p)?;
            let n_list = p.usize_list("n_sites");
            if n_list.is_empty() || n_list.contains(&0) {
                return Err(invalid("n_sites must list at least one positive value"));
            }
            Job::SpinHypotheses {
                model,
                family,
                n_list,
                c: positive(p, "c")?,
                c_prime: positive(p, "c_prime")?,
                tau: linspace(0.0, positive(p, "tau_max")?, at_least(p, "n_tau", 2)?),
                random_state: p.word("state") == "random",
                seed: p.seed(),
            }
        }
        Experiment::LandauDamping => {
            let epsilon = p.f64("epsilon");
            if !(0.0..=0.01).contains(&epsilon) {
                return Err(invalid("epsilon must lie in [0, 0.01] (linear regime)"));
            }
            let profile = match p.word("profile").as_str() {
                "maxwellian" => InitialProfile::Maxwellian,
                _ => InitialProfile::TwoStream { drift: positive(p, "drift")? },
            };
            let cfg = LandauConfig {
                epsilon,
                k_mode: positive(p, "k_mode")?,
                nx: at_least(p, "nx", 4)?,
                nv: at_least(p, "nv", 4)?,
                v_max: positive(p, "v_max")?,
                t_final: positive(p, "t_final")?,
                profile,
                fermi_term: p.bool("fermi_term"),
                hbar: positive(p, "hbar")?,
                sample_every: at_least(p, "sample_every", 1)?,
            };
            let window = (p.f64("fit_start"), p.f64("fit_end"));
            if !(window.1 > window.0) {
                return Err(invalid("fit_end must exceed fit_start"));
            }
            let verdict = VerdictConfig { window, max_residual: positive(p, "max_residual")?, ..VerdictConfig::default() };
            Job::Landau { cfg, verdict, rate_tolerance: positive(p, "rate_tolerance")? }
        }
        Experiment::TfEnergyScaling => {
            let z_list = p.usize_list("z");
            if z_list.iter().any(|&z| z == 0 || z > u32::MAX as usize) {
                return Err(invalid("z values must be positive"));
            }
            let base = PhysicalConstants::new(positive(p, "hbar")?, positive(p, "mass")?, positive(p, "charge")?, 1)
                .map_err(|e| invalid(e.to_string()))?;
            Job::TfScaling { base, z_list: z_list.into_iter().map(|z| z as u32).collect() }
        }
        Experiment::WkDiagnostic => {
            let potential = match p.word("potential").as_str() {
                "harmonic" => WkPotential::Harmonic { spring: p.f64("spring") },
                _ => WkPotential::Constant { level: p.f64("level") },
            };
            let half = positive(p, "half_width")?;
            let n = at_least(p, "grid_points", 4)?;
            let grid = Grid::line(-half, 2.0 * half / (n - 1) as f64, n);
            let x = p.f64("x");
            if x.abs() > half {
                return Err(invalid("x must lie inside [-half_width, half_width]"));
            }
            let x_index = ((x + half) / grid.spacing).round() as usize;
            let (t_min, t_max) = (positive(p, "t_min")?, positive(p, "t_max")?);
            if t_max <= t_min {
                return Err(invalid("t_max must exceed t_min"));
            }
            let n_t = at_least(p, "n_points", 2)?;
            let times = linspace(t_min.ln(), t_max.ln(), n_t).into_iter().map(f64::exp).collect();
            let consts = PhysicalConstants::new(positive(p, "hbar")?, positive(p, "mass")?, 1.0, 1).map_err(|e| invalid(e.to_string()))?;
            Job::Wk { potential, consts, grid, x_index, times }
        }
    })
}

/// Thresholds embedded for `--check`.
pub mod thresholds {
    pub const REVIVAL: f64 = 1e-10;
    pub const ORACLE: f64 = 1e-8;
    pub const CLOSED_FORM: f64 = 1e-12;
    pub const QUADRATIC_FIT: f64 = 1e-3;
    pub const ISING_SLACK: f64 = 0.05;
    pub const MASS_DRIFT: f64 = 1e-8;
    pub const MOMENTUM_DRIFT: f64 = 1e-6;
    pub const TF_EXPONENT: f64 = 0.01;
    pub const WK_EXPONENT: f64 = 0.05;
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

impl Job {
    pub fn run(&self, check: bool) -> Result<Outcome, RunError> {
        match self {
            Job::DickeEnvelope { p, t_max, n_points } => {
                let mut table = Experiment::DickeEnvelope.empty_table();
                for t in linspace(0.0, *t_max, *n_points) {
                    table.push(vec![t, envelope(t, p)])?;
                }
                let mut checks = Vec::new();
                if check {
                    let start = envelope(0.0, p);
                    let revival = envelope(p.period(), p);
                    let ok = start == 1.0 && (revival - 1.0).abs() < thresholds::REVIVAL;
                    checks.push(Check::new("envelope-revival", ok, format!("envelope(0) = {start}, envelope(2π/ω) = {revival}")));
                }
                Ok(Outcome { table, checks })
            }
            Job::DickeExact { p, state, n_points } => {
                let s = PolarizationSector::fully_polarized(p.n_atoms);
                let times = linspace(0.0, p.period(), *n_points);
                let analytic = analytic_series(&times, state, p, s)?;
                let exact = exact_series_converged(p, Propagation::Integrable, state, s, &times)?;
                let mut table = Experiment::DickeExactVsAnalytic.empty_table();
                let mut worst = 0.0f64;
                for ((t, a), e) in times.iter().zip(&analytic).zip(&exact.values) {
                    let dev = (a - e).norm();
                    worst = worst.max(dev);
                    table.push(vec![*t, a.re, a.im, e.re, e.im, dev])?;
                }
                let mut checks = Vec::new();
                if check {
                    checks.push(Check::new(
                        "oracle-equivalence",
                        worst < thresholds::ORACLE,
                        format!("max |analytic - exact| = {worst:.3e} (fock cutoff {})", exact.fock_cutoff),
                    ));
                    let revival = analytic.last().map(|a| a.norm()).unwrap_or(0.0);
                    checks.push(Check::new(
                        "revival-modulus",
                        (revival - 1.0).abs() < thresholds::REVIVAL,
                        format!("|<U_F(2π/ω)>| - 1 = {:.3e}", revival - 1.0),
                    ));
                }
                Ok(Outcome { table, checks })
            }
            Job::DickeCollapse { base, n_list, tolerance } => {
                let study = collapse_study(base, n_list, *tolerance)?;
                let checks = if check {
                    vec![Check::new("collapse-exponent", study.slope_ok, format!("fitted exponent {:.4} (target -1 ± {tolerance})", study.fit.exponent))]
                } else {
                    Vec::new()
                };
                Ok(Outcome { table: study.table, checks })
            }
            Job::SpinGaussian { model, family, n_sites, random_state, seed, t_max, n_points } => {
                let ens = family.ensemble(*n_sites);
                let phi = if *random_state { ProductState::random(*n_sites, &mut SplitMix64::new(*seed)) } else { family.reference_state(*n_sites) };
                let s2 = variance(&ens, &phi)?;
                let curve = FidelityCurve::new(&ens, &phi)?;
                let mut table = Experiment::SpinGaussian.empty_table();
                let times = linspace(0.0, *t_max, *n_points);
                for &t in &times {
                    let f = curve.at(t);
                    let g = declab_core::spinfid::gaussian_prediction(s2, t);
                    table.push(vec![t, f, g, (f - g).abs()])?;
                }
                let mut checks = Vec::new();
                if check {
                    if let (Model::IndependentField, ModelFamily::IndependentField { delta }, false) = (model, family, random_state) {
                        let worst = times
                            .iter()
                            .map(|&t| (curve.at(t) - (0.5 * delta * t).cos().powi(2 * *n_sites as i32)).abs())
                            .fold(0.0, f64::max);
                        checks.push(Check::new("closed-form", worst < thresholds::CLOSED_FORM, format!("max |F - cos^2N(Δt/2)| = {worst:.3e}")));
                        let per_site = s2 / *n_sites as f64;
                        let anchor = (per_site - 0.25 * delta * delta).abs();
                        checks.push(Check::new("variance-anchor", anchor < thresholds::CLOSED_FORM, format!("σ²/N - Δ²/4 = {anchor:.3e}")));
                    }
                    if s2 > 0.0 {
                        let t_cap = 0.01 / s2.sqrt();
                        let ts: Vec<f64> = (1..=40).map(|k| t_cap * k as f64 / 40.0).collect();
                        let ys: Vec<f64> = ts.iter().map(|&t| -curve.amplitude(t).norm_sqr().ln()).collect();
                        let c = fit_quadratic_coefficient(&ts, &ys).map_err(|e| RunError::Other(e.to_string()))?;
                        let rel = (c / s2 - 1.0).abs();
                        checks.push(Check::new("short-time-quadratic", rel < thresholds::QUADRATIC_FIT, format!("fitted {c:.6e} vs σ² = {s2:.6e} (rel {rel:.2e})")));
                    }
                }
                Ok(Outcome { table, checks })
            }
            Job::SpinHypotheses { model, family, n_list, c, c_prime, tau, random_state, seed } => {
                let mut table = Experiment::SpinHypotheses.empty_table();
                let mut deviations = Vec::new();
                let mut all_met = true;
                for &n in n_list {
                    let ens = family.ensemble(n);
                    let phi = if *random_state {
                        ProductState::random(n, &mut SplitMix64::new(SplitMix64::at(*seed, n as u64)))
                    } else {
                        family.reference_state(n)
                    };
                    let report = check_hypotheses(&ens, &phi, *c, *c_prime)?;
                    if !(report.sigma_sq > 0.0) {
                        return Err(RunError::Other(format!("zero variance at N = {n}; rescaled time undefined")));
                    }
                    let sigma = report.sigma_sq.sqrt();
                    let curve = FidelityCurve::new(&ens, &phi)?;
                    let d = tau.iter().map(|&x| (curve.at(x / sigma) - (-x * x).exp()).abs()).fold(0.0, f64::max);
                    all_met &= report.hypotheses_met;
                    deviations.push(d);
                    table.push(vec![n as f64, report.sigma_sq, report.c_lower, report.c_prime, f64::from(u8::from(report.hypotheses_met)), d])?;
                }
                let mut checks = Vec::new();
                if check {
                    checks.push(Check::new("hypotheses", all_met, format!("σ²/N ≥ {c} and term bound ≤ {c_prime} for every N: {}", pass_fail(all_met))));
                    if deviations.len() >= 2 {
                        let (ok, rule) = match model {
                            Model::IndependentField => (deviations.windows(2).all(|w| w[1] < w[0]), "strictly decreasing"),
                            Model::TransverseIsing => {
                                (deviations.windows(2).all(|w| w[1] <= w[0] * (1.0 + thresholds::ISING_SLACK)), "non-increasing within 5%")
                            }
                        };
                        checks.push(Check::new("gaussian-convergence", ok, format!("D(N) = {deviations:.4?}, required {rule}")));
                    }
                }
                Ok(Outcome { table, checks })
            }
            Job::Landau { cfg, verdict, rate_tolerance } => {
                let run = landau_run(cfg)?;
                let mut checks = Vec::new();
                if check {
                    let v = stability_verdict(&run.table, verdict);
                    match cfg.profile {
                        InitialProfile::Maxwellian if cfg.epsilon > 0.0 => {
                            checks.push(Check::new("verdict", v == Verdict::Damped, format!("{v}, expected DAMPED")));
                            if !cfg.fermi_term {
                                let target = landau_root(cfg.k_mode)?.im;
                                match fit_damping(&run.table, verdict.window) {
                                    Ok(fit) => {
                                        let rel = (fit.gamma / target - 1.0).abs();
                                        checks.push(Check::new(
                                            "damping-rate",
                                            rel < *rate_tolerance,
                                            format!("γ = {:.5} vs dispersion root {target:.5} (rel {rel:.2e})", fit.gamma),
                                        ));
                                    }
                                    Err(e) => checks.push(Check::new("damping-rate", false, e.to_string())),
                                }
                            }
                        }
                        InitialProfile::Maxwellian => {
                            checks.push(Check::new("verdict", v == Verdict::NoSignal, format!("{v}, expected NO_SIGNAL")));
                        }
                        InitialProfile::TwoStream { .. } => {
                            checks.push(Check::new("verdict", v == Verdict::Undamped, format!("{v}, expected UNDAMPED")));
                        }
                    }
                    checks.push(Check::new("mass", run.mass_drift < thresholds::MASS_DRIFT, format!("relative drift {:.2e}", run.mass_drift)));
                    checks.push(Check::new(
                        "momentum",
                        run.momentum_drift < thresholds::MOMENTUM_DRIFT,
                        format!("drift {:.2e}", run.momentum_drift),
                    ));
                }
                Ok(Outcome { table: run.table, checks })
            }
            Job::TfScaling { base, z_list } => {
                let (table, fit) = tf_energy_scaling(base, z_list)?;
                let mut checks = Vec::new();
                if check {
                    let check = match fit {
                        Some(f) => {
                            let rel = (f.exponent / (7.0 / 3.0) - 1.0).abs();
                            Check::new("seven-thirds", rel < thresholds::TF_EXPONENT, format!("fitted exponent {:.6} (rel {rel:.2e})", f.exponent))
                        }
                        None => Check::new("seven-thirds", false, "need at least 3 values of z".into()),
                    };
                    checks.push(check);
                }
                Ok(Outcome { table, checks })
            }
            Job::Wk { potential, consts, grid, x_index, times } => {
                let field = match *potential {
                    WkPotential::Harmonic { spring } => PotentialField::from_fn(*grid, |x| 0.5 * spring * x * x)?,
                    WkPotential::Constant { level } => PotentialField::from_fn(*grid, |_| level)?,
                };
                let mut table = Experiment::WkDiagnostic.empty_table();
                let mut devs = Vec::with_capacity(times.len());
                for &t in times {
                    let f = wigner_kirkwood_factor(&field, *x_index, t, consts)?;
                    let d = (f - 1.0).norm();
                    devs.push(d);
                    table.push(vec![t, f.re, f.im, d])?;
                }
                let mut checks = Vec::new();
                if check {
                    match potential {
                        WkPotential::Harmonic { .. } => {
                            let check = match fit_power_law(times, &devs) {
                                Ok(fit) => Check::new(
                                    "quadratic-growth",
                                    (fit.exponent - 2.0).abs() < thresholds::WK_EXPONENT,
                                    format!("fitted exponent {:.4}", fit.exponent),
                                ),
                                Err(e) => Check::new("quadratic-growth", false, e.to_string()),
                            };
                            checks.push(check);
                        }
                        WkPotential::Constant { .. } => {
                            let ok = devs.iter().all(|&d| d == 0.0);
                            checks.push(Check::new("classical", ok, format!("max |factor - 1| = {:.3e}", devs.iter().fold(0.0f64, |m, d| m.max(*d)))));
                        }
                    }
                }
                Ok(Outcome { table, checks })
            }
        }
    }
}
