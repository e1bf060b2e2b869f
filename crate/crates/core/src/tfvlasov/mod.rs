//! Thomas-Fermi energy functional, Wigner–Kirkwood classicality diagnostic and
//! 1D1V Vlasov–Poisson kinetics with an optional Fermi-energy force.
//!
//! Sign convention: `V` is the potential energy of an electron, so the
//! periodic Poisson problem reads V″ = −4πe²(ρ − background) and a local
//! electron excess raises `V`, pushing electrons apart.

mod dispersion;
mod functional;
mod landau;
mod semiclassical;
mod vlasov;

pub use dispersion::{landau_root, plasma_z};
pub use functional::{
    fermi_energy, minimize_tf_energy, tf_energy, tf_energy_components, tf_energy_scaling, tf_kinetic_density, TfEnergy, TfMinimum, TfProfile,
};
pub use landau::{fit_damping, landau_run, stability_verdict, DampingFit, InitialProfile, LandauConfig, LandauRun, Verdict, VerdictConfig};
pub use semiclassical::{g_tf, wigner_kirkwood_factor};
pub use vlasov::{poisson_solve, potential_gradient, vlasov_step, PhaseGrid, PhaseSpaceDistribution, VlasovSolver};

use crate::fit::FitError;
use crate::table::TableError;
use thiserror::Error;

/// Relative tolerance on ∫ρ = Z.
pub const NEUTRALITY_TOL: f64 = 1e-6;

/// Largest tolerated mean of ρ − background in the periodic Poisson problem.
pub const NEUTRAL_SOURCE_TOL: f64 = 1e-10;

/// Fraction of the total mass allowed in the outermost velocity rows before a step is rejected.
pub const VELOCITY_LEAK_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TfError {
    #[error("density is negative ({value}) at index {index}")]
    NegativeDensity { index: usize, value: f64 },
    #[error("operation needs {expected:?} geometry, got {found:?}")]
    GeometryMismatch { expected: Geometry, found: Geometry },
    #[error("charge neutrality violated: ∫ρ = {charge}, Z = {z}")]
    NeutralityViolation { charge: f64, z: f64 },
    #[error("source mean {0:.3e} is not zero")]
    NonNeutralSource(f64),
    #[error("mass fraction {mass:.3e} reached the velocity boundary")]
    VelocityOverflow { mass: f64 },
    #[error("time must be nonzero")]
    SingularTime,
    #[error("fewer than 4 peaks ({0}) before the end of the fit window")]
    FitFailed(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// ħ, m, e and the nuclear charge Z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
    pub charge: f64,
    pub z: u32,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64, charge: f64, z: u32) -> Result<Self, TfError> {
        if !(hbar > 0.0 && mass > 0.0 && charge > 0.0) || z == 0 {
            return Err(TfError::InvalidInput("ħ, m, e and Z must be positive".into()));
        }
        Ok(Self { hbar, mass, charge, z })
    }

    /// Atomic units: ħ = m = e = 1.
    pub fn atomic(z: u32) -> Self {
        Self { hbar: 1.0, mass: 1.0, charge: 1.0, z }
    }

    /// Plasma units: m = 1 and 4πe² = 1, so a unit density has plasma frequency 1.
    pub fn plasma() -> Self {
        Self { hbar: 1.0, mass: 1.0, charge: (4.0 * std::f64::consts::PI).recip().sqrt(), z: 1 }
    }

    pub fn e2(&self) -> f64 {
        self.charge * self.charge
    }

    /// 4πe².
    pub fn coupling(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.e2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// Radial points with volume weights 4πr²dr.
    Radial3D,
    /// Points x_i = i·h on a ring of length n·h.
    Periodic1D,
    /// Points x_i = origin + i·h with open ends.
    Line1D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    /// x_i = origin + i·spacing.
    Uniform,
    /// x_i = origin·e^{i·spacing}; radial grids only.
    Logarithmic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub geometry: Geometry,
    pub spacing_kind: Spacing,
    pub origin: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Grid {
    /// Midpoints r_i = (i + ½)h.
    pub fn radial(spacing: f64, len: usize) -> Self {
        Self { geometry: Geometry::Radial3D, spacing_kind: Spacing::Uniform, origin: 0.5 * spacing, spacing, len }
    }

    /// Midpoints in ln r: r_i = r_0·e^{i·du}, each point carrying weight 4πr³du.
    pub fn radial_log(first: f64, du: f64, len: usize) -> Self {
        Self { geometry: Geometry::Radial3D, spacing_kind: Spacing::Logarithmic, origin: first, spacing: du, len }
    }

    pub fn periodic(length: f64, len: usize) -> Self {
        Self { geometry: Geometry::Periodic1D, spacing_kind: Spacing::Uniform, origin: 0.0, spacing: length / len as f64, len }
    }

    pub fn line(origin: f64, spacing: f64, len: usize) -> Self {
        Self { geometry: Geometry::Line1D, spacing_kind: Spacing::Uniform, origin, spacing, len }
    }

    pub fn point(&self, i: usize) -> f64 {
        match self.spacing_kind {
            Spacing::Uniform => self.origin + i as f64 * self.spacing,
            Spacing::Logarithmic => self.origin * (i as f64 * self.spacing).exp(),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    /// Quadrature weight of point i (volume element for radial grids).
    pub fn weight(&self, i: usize) -> f64 {
        match self.geometry {
            Geometry::Radial3D => {
                let r = self.point(i);
                let dr = match self.spacing_kind {
                    Spacing::Uniform => self.spacing,
                    Spacing::Logarithmic => r * self.spacing,
                };
                4.0 * std::f64::consts::PI * r * r * dr
            }
            _ => self.spacing,
        }
    }

    fn require(&self, geometry: Geometry) -> Result<(), TfError> {
        if self.geometry == geometry {
            Ok(())
        } else {
            Err(TfError::GeometryMismatch { expected: geometry, found: self.geometry })
        }
    }
}

/// Non-negative density on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityField {
    grid: Grid,
    values: Vec<f64>,
}

impl DensityField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, TfError> {
        if values.len() != grid.len {
            return Err(TfError::InvalidInput(format!("{} values for a grid of {}", values.len(), grid.len)));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(TfError::NegativeDensity { index, value });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self, TfError> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// ∫ρ with the grid's quadrature weights.
    pub fn total(&self) -> f64 {
        self.values.iter().enumerate().map(|(i, v)| v * self.grid.weight(i)).sum()
    }
}

/// Potential energy V on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField {
    grid: Grid,
    values: Vec<f64>,
}

impl PotentialField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, TfError> {
        if values.len() != grid.len {
            return Err(TfError::InvalidInput(format!("{} values for a grid of {}", values.len(), grid.len)));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(TfError::InvalidInput("potential must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self, TfError> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
