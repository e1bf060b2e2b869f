use super::{DensityField, Geometry, Grid, PhysicalConstants, TfError, NEUTRALITY_TOL};
use crate::fit::{fit_power_law, PowerLawFit};
use crate::table::ResultTable;
use std::f64::consts::PI;

fn fermi_constant(k: &PhysicalConstants) -> f64 {
    (3.0 * PI * PI).powf(2.0 / 3.0) * k.hbar * k.hbar / k.mass
}

/// τ_TF = (3/10)(ħ²/m)(3π²)^{2/3} ρ^{5/3}, pointwise.
pub fn tf_kinetic_density(rho: &DensityField, k: &PhysicalConstants) -> Vec<f64> {
    let c = 0.3 * fermi_constant(k);
    rho.values().iter().map(|r| c * r.powf(5.0 / 3.0)).collect()
}

/// E_F = (ħ²/2m)(3π²)^{2/3} ρ^{2/3}, pointwise.
pub fn fermi_energy(rho: &DensityField, k: &PhysicalConstants) -> Vec<f64> {
    let c = 0.5 * fermi_constant(k);
    rho.values().iter().map(|r| c * r.powf(2.0 / 3.0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfEnergy {
    pub kinetic: f64,
    /// −Ze²∫ρ/r.
    pub attraction: f64,
    /// (e²/2)∫∫ρρ′/|x − x′|.
    pub hartree: f64,
}

impl TfEnergy {
    pub fn total(&self) -> f64 {
        self.kinetic + self.attraction + self.hartree
    }
}

/// Kinetic, nuclear-attraction and Hartree parts of the functional on a radial grid.
///
/// The Hartree potential of shell i uses the shell theorem: charge inside r_i
/// acts from the centre, charge outside contributes q_j/r_j. Each shell sees
/// half of its own charge from either side, which reproduces the thin-shell
/// self-energy q²/2r.
pub fn tf_energy_components(rho: &DensityField, k: &PhysicalConstants) -> Result<TfEnergy, TfError> {
    let grid = rho.grid();
    grid.require(Geometry::Radial3D)?;
    if rho.values().iter().all(|&v| v == 0.0) {
        return Ok(TfEnergy { kinetic: 0.0, attraction: 0.0, hartree: 0.0 });
    }
    let z = k.z as f64;
    let charge = rho.total();
    if ((charge - z) / z).abs() > NEUTRALITY_TOL {
        return Err(TfError::NeutralityViolation { charge, z });
    }
    let tau = tf_kinetic_density(rho, k);
    let n = grid.len;
    let r: Vec<f64> = grid.points();
    let q: Vec<f64> = (0..n).map(|i| rho.values()[i] * grid.weight(i)).collect();
    let kinetic: f64 = (0..n).map(|i| tau[i] * grid.weight(i)).sum();
    let attraction = -z * k.e2() * (0..n).map(|i| q[i] / r[i]).sum::<f64>();

    let mut outer = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        outer[i] = acc + 0.5 * q[i] / r[i];
        acc += q[i] / r[i];
    }
    let mut inner = 0.0;
    let mut hartree = 0.0;
    for i in 0..n {
        let phi = (inner + 0.5 * q[i]) / r[i] + outer[i];
        hartree += q[i] * phi;
        inner += q[i];
    }
    Ok(TfEnergy { kinetic, attraction, hartree: 0.5 * k.e2() * hartree })
}

/// Thomas-Fermi energy of a neutral radial density.
pub fn tf_energy(rho: &DensityField, k: &PhysicalConstants) -> Result<f64, TfError> {
    Ok(tf_energy_components(rho, k)?.total())
}

/// ρ(r) = Z·c·s^{−q}(1 + s)^{q−6} with s = r/a and c fixing ∫ρ = Z on the
/// grid. The shape interpolates between an r^{−q} cusp at the nucleus and the
/// r^{−6} tail of the Thomas-Fermi atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfProfile {
    pub a: f64,
    pub q: f64,
}

/// Log-spaced grid in s = r/a: ln s from −14 to 12.
const PROFILE_POINTS: usize = 6000;
const PROFILE_LN_RANGE: (f64, f64) = (-14.0, 12.0);
/// Kinetic and nuclear terms stay finite for q < 9/5.
const Q_RANGE: (f64, f64) = (0.0, 1.75);

impl TfProfile {
    /// The grid scales with a, so changing a rescales every term exactly
    /// (T ∝ a⁻², potential terms ∝ a⁻¹).
    pub fn density(&self, z: u32) -> Result<DensityField, TfError> {
        if !(self.a > 0.0) || !(Q_RANGE.0..=Q_RANGE.1).contains(&self.q) {
            return Err(TfError::InvalidInput(format!("profile needs a > 0 and q in {Q_RANGE:?}")));
        }
        let du = (PROFILE_LN_RANGE.1 - PROFILE_LN_RANGE.0) / PROFILE_POINTS as f64;
        let grid = Grid::radial_log(self.a * (PROFILE_LN_RANGE.0 + 0.5 * du).exp(), du, PROFILE_POINTS);
        let shape: Vec<f64> = grid
            .points()
            .iter()
            .map(|r| {
                let s = r / self.a;
                s.powf(-self.q) * (1.0 + s).powf(self.q - 6.0)
            })
            .collect();
        let norm: f64 = shape.iter().enumerate().map(|(i, f)| f * grid.weight(i)).sum();
        let scale = z as f64 / norm;
        DensityField::new(grid, shape.into_iter().map(|f| f * scale).collect())
    }
}

fn golden_min(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv * (hi - lo);
    let mut x2 = lo + inv * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 { (x1, f1) } else { (x2, f2) }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfMinimum {
    pub z: u32,
    pub profile: TfProfile,
    pub energy: TfEnergy,
}

/// Minimizes the functional over the profile family: golden section in ln a
/// nested inside golden section in q.
pub fn minimize_tf_energy(k: &PhysicalConstants) -> Result<TfMinimum, TfError> {
    let z = k.z;
    // Natural length ħ²/(me²) Z^{-1/3}; the search spans four decades around it.
    let a0 = k.hbar * k.hbar / (k.mass * k.e2()) * (z as f64).powf(-1.0 / 3.0);
    let energy_at = |a: f64, q: f64| -> Result<TfEnergy, TfError> { tf_energy_components(&TfProfile { a, q }.density(z)?, k) };
    let mut failure = None;
    let mut inner = |q: f64| -> (f64, f64) {
        let mut f = |ln_a: f64| match energy_at(ln_a.exp(), q) {
            Ok(e) => e.total(),
            Err(err) => {
                failure.get_or_insert(err);
                f64::INFINITY
            }
        };
        golden_min(&mut f, (a0 / 100.0).ln(), (a0 * 100.0).ln(), 1e-9)
    };
    let (q, _) = golden_min(&mut |q| inner(q).1, Q_RANGE.0, Q_RANGE.1, 1e-6);
    let (ln_a, _) = inner(q);
    if let Some(err) = failure {
        return Err(err);
    }
    let profile = TfProfile { a: ln_a.exp(), q };
    Ok(TfMinimum { z, profile, energy: energy_at(profile.a, q)? })
}

/// Minimized energies for each Z and the power-law fit of |E| against Z.
/// Columns: z, energy, scale_length, cusp_exponent.
pub fn tf_energy_scaling(base: &PhysicalConstants, z_list: &[u32]) -> Result<(ResultTable, Option<PowerLawFit>), TfError> {
    let mut table = ResultTable::new(&[("z", "1"), ("energy", "energy"), ("scale_length", "length"), ("cusp_exponent", "1")]);
    let mut zs = Vec::new();
    let mut es = Vec::new();
    for &z in z_list {
        let k = PhysicalConstants { z, ..*base };
        let m = minimize_tf_energy(&k)?;
        table.push(vec![z as f64, m.energy.total(), m.profile.a, m.profile.q])?;
        zs.push(z as f64);
        es.push(-m.energy.total());
    }
    let fit = if zs.len() >= 3 { Some(fit_power_law(&zs, &es)?) } else { None };
    Ok((table, fit))
}
