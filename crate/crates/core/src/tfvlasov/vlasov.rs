use super::{DensityField, Geometry, Grid, PhysicalConstants, PotentialField, TfError, NEUTRAL_SOURCE_TOL, VELOCITY_LEAK_TOL};
use crate::qcore::C64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Periodic x ∈ [0, L) at x_i = iΔx; velocities at cell centres
/// v_j = −v_max + (j + ½)Δv, symmetric about zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    pub nx: usize,
    pub nv: usize,
    pub length: f64,
    pub v_max: f64,
}

impl PhaseGrid {
    pub fn new(nx: usize, nv: usize, length: f64, v_max: f64) -> Result<Self, TfError> {
        if nx < 4 || nv < 4 || !(length > 0.0) || !(v_max > 0.0) {
            return Err(TfError::InvalidInput("phase grid needs nx, nv ≥ 4 and positive extents".into()));
        }
        Ok(Self { nx, nv, length, v_max })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn dv(&self) -> f64 {
        2.0 * self.v_max / self.nv as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn v(&self, j: usize) -> f64 {
        -self.v_max + (j as f64 + 0.5) * self.dv()
    }

    pub fn space(&self) -> Grid {
        Grid::periodic(self.length, self.nx)
    }
}

/// W(x, v) stored row by row in velocity: index j·nx + i.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceDistribution {
    grid: PhaseGrid,
    values: Vec<f64>,
}

impl PhaseSpaceDistribution {
    pub fn new(grid: PhaseGrid, values: Vec<f64>) -> Result<Self, TfError> {
        if values.len() != grid.nx * grid.nv {
            return Err(TfError::InvalidInput(format!("{} values for a {}×{} grid", values.len(), grid.nx, grid.nv)));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(TfError::NegativeDensity { index, value });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self, TfError> {
        let mut values = Vec::with_capacity(grid.nx * grid.nv);
        for j in 0..grid.nv {
            for i in 0..grid.nx {
                values.push(f(grid.x(i), grid.v(j)));
            }
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    /// ρ(x) = ∫W dv.
    pub fn density(&self) -> Vec<f64> {
        let g = &self.grid;
        let mut rho = vec![0.0; g.nx];
        for row in self.values.chunks(g.nx) {
            for (r, w) in rho.iter_mut().zip(row) {
                *r += w;
            }
        }
        rho.iter_mut().for_each(|r| *r *= g.dv());
        rho
    }

    /// ∫∫W dx dv.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx() * self.grid.dv()
    }

    /// ∫∫vW dx dv.
    pub fn momentum(&self) -> f64 {
        let g = &self.grid;
        self.values.chunks(g.nx).enumerate().map(|(j, row)| g.v(j) * row.iter().sum::<f64>()).sum::<f64>() * g.dx() * g.dv()
    }
}

/// Cubic Lagrange weights for the nodes −1, 0, 1, 2 at offset f ∈ [0, 1).
fn cubic_weights(f: f64) -> [f64; 4] {
    [
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    ]
}

/// out[i] = src evaluated at i − shift (in cells), periodically.
fn shift_periodic(src: &[f64], shift: f64, out: &mut [f64]) {
    let n = src.len() as isize;
    let pos = -shift;
    let base = pos.floor();
    let w = cubic_weights(pos - base);
    let base = base as isize;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, wk) in w.iter().enumerate() {
            acc += wk * src[(i as isize + base + k as isize - 1).rem_euclid(n) as usize];
        }
        *o = acc;
    }
}

/// Wavenumbers of an n-point periodic grid of length L; the Nyquist mode maps to 0.
fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    (0..n)
        .map(|m| {
            if 2 * m == n {
                0.0
            } else {
                let m = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                2.0 * PI * m / length
            }
        })
        .collect()
}

/// Owns FFT plans and scratch for one (nx, nv) grid; single-threaded.
pub struct VlasovSolver {
    grid: PhaseGrid,
    consts: PhysicalConstants,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kappa: Vec<f64>,
}

impl std::fmt::Debug for VlasovSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VlasovSolver").field("grid", &self.grid).field("consts", &self.consts).finish()
    }
}

impl VlasovSolver {
    pub fn new(grid: PhaseGrid, consts: PhysicalConstants) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(grid.nx),
            inverse: planner.plan_fft_inverse(grid.nx),
            kappa: wavenumbers(grid.nx, grid.length),
            grid,
            consts,
        }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    fn spectrum(&self, f: &[f64]) -> Vec<C64> {
        let mut buf: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    fn real_inverse(&self, mut buf: Vec<C64>) -> Vec<f64> {
        self.inverse.process(&mut buf);
        let n = self.grid.nx as f64;
        buf.iter().map(|c| c.re / n).collect()
    }

    /// Solves V″ = −4πe²(ρ − background) with zero-mean V.
    pub fn potential(&self, rho: &[f64], background: f64) -> Result<Vec<f64>, TfError> {
        let mean = rho.iter().map(|r| r - background).sum::<f64>() / rho.len() as f64;
        if mean.abs() > NEUTRAL_SOURCE_TOL {
            return Err(TfError::NonNeutralSource(mean));
        }
        let mut s = self.spectrum(&rho.iter().map(|r| r - background).collect::<Vec<_>>());
        let c = self.consts.coupling();
        for (sm, &k) in s.iter_mut().zip(&self.kappa) {
            *sm = if k == 0.0 { C64::new(0.0, 0.0) } else { *sm * (c / (k * k)) };
        }
        Ok(self.real_inverse(s))
    }

    /// Spectral ∂f/∂x.
    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        let mut s = self.spectrum(f);
        for (sm, &k) in s.iter_mut().zip(&self.kappa) {
            *sm *= C64::new(0.0, k);
        }
        self.real_inverse(s)
    }

    /// Acceleration −∂x(V + E_F)/m.
    pub fn acceleration(&self, rho: &[f64], fermi_term: bool) -> Result<Vec<f64>, TfError> {
        let background = rho.iter().sum::<f64>() / rho.len() as f64;
        let mut phi = self.potential(rho, background)?;
        if fermi_term {
            let k = &self.consts;
            let c = 0.5 * (3.0 * PI * PI).powf(2.0 / 3.0) * k.hbar * k.hbar / k.mass;
            for (p, r) in phi.iter_mut().zip(rho) {
                *p += c * r.powf(2.0 / 3.0);
            }
        }
        let m = self.consts.mass;
        Ok(self.derivative(&phi).into_iter().map(|d| -d / m).collect())
    }

    /// ∫|∂xV|² dx for the self-consistent potential of W.
    pub fn field_energy(&self, w: &PhaseSpaceDistribution) -> Result<f64, TfError> {
        let rho = w.density();
        let background = rho.iter().sum::<f64>() / rho.len() as f64;
        let v = self.potential(&rho, background)?;
        Ok(self.derivative(&v).iter().map(|d| d * d).sum::<f64>() * self.grid.dx())
    }

    fn advect_x(&self, w: &mut PhaseSpaceDistribution, dt: f64) {
        let g = self.grid;
        let mut out = vec![0.0; g.nx];
        for (j, row) in w.values.chunks_mut(g.nx).enumerate() {
            shift_periodic(row, g.v(j) * dt / g.dx(), &mut out);
            row.copy_from_slice(&out);
        }
    }

    /// Shifts each velocity column by a(x)·dt; mass pushed past ±v_max is lost,
    /// so the edge rows are checked afterwards.
    fn kick_v(&self, w: &mut PhaseSpaceDistribution, accel: &[f64], dt: f64) -> Result<(), TfError> {
        let g = self.grid;
        let (nx, nv) = (g.nx, g.nv as isize);
        let mut col = vec![0.0; g.nv];
        for (i, a) in accel.iter().enumerate() {
            let pos = -a * dt / g.dv();
            let base = pos.floor();
            let wts = cubic_weights(pos - base);
            let base = base as isize;
            for (j, c) in col.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (k, wk) in wts.iter().enumerate() {
                    let src = j as isize + base + k as isize - 1;
                    if (0..nv).contains(&src) {
                        acc += wk * w.values[src as usize * nx + i];
                    }
                }
                *c = acc;
            }
            for (j, c) in col.iter().enumerate() {
                w.values[j * nx + i] = *c;
            }
        }
        let edge: f64 = (0..nx).map(|i| w.values[i].abs() + w.values[(g.nv - 1) * nx + i].abs()).sum::<f64>();
        let edge = edge / w.values.iter().sum::<f64>();
        if edge > VELOCITY_LEAK_TOL {
            return Err(TfError::VelocityOverflow { mass: edge });
        }
        Ok(())
    }

    /// One Strang step: half x-advection, Poisson solve and full velocity
    /// kick, half x-advection. Requires v_max·|dt| ≤ Δx and
    /// max|a|·|dt| ≤ Δv.
    pub fn step(&self, w: &mut PhaseSpaceDistribution, dt: f64, fermi_term: bool) -> Result<(), TfError> {
        let g = self.grid;
        if w.grid != g {
            return Err(TfError::InvalidInput("distribution grid differs from the solver grid".into()));
        }
        if g.v_max * dt.abs() > g.dx() * (1.0 + 1e-12) {
            return Err(TfError::InvalidInput(format!("dt = {dt} violates v_max·dt ≤ Δx = {}", g.dx())));
        }
        self.advect_x(w, 0.5 * dt);
        let accel = self.acceleration(&w.density(), fermi_term)?;
        let amax = accel.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if amax * dt.abs() > g.dv() * (1.0 + 1e-12) {
            return Err(TfError::InvalidInput(format!("dt = {dt} violates max|a|·dt ≤ Δv = {}", g.dv())));
        }
        self.kick_v(w, &accel, dt)?;
        self.advect_x(w, 0.5 * dt);
        Ok(())
    }
}

/// Periodic Poisson solve V″ = −4πe²(ρ − background), zero-mean gauge.
pub fn poisson_solve(rho: &DensityField, background: f64, k: &PhysicalConstants) -> Result<PotentialField, TfError> {
    let g = *rho.grid();
    g.require(Geometry::Periodic1D)?;
    let pg = PhaseGrid { nx: g.len, nv: 4, length: g.spacing * g.len as f64, v_max: 1.0 };
    let v = VlasovSolver::new(pg, *k).potential(rho.values(), background)?;
    PotentialField::new(g, v)
}

/// Spectral ∂xV of a periodic potential.
pub fn potential_gradient(v: &PotentialField, k: &PhysicalConstants) -> Result<Vec<f64>, TfError> {
    let g = *v.grid();
    g.require(Geometry::Periodic1D)?;
    let pg = PhaseGrid { nx: g.len, nv: 4, length: g.spacing * g.len as f64, v_max: 1.0 };
    Ok(VlasovSolver::new(pg, *k).derivative(v.values()))
}

/// One Strang-split step of the Vlasov–Poisson system; the force includes
/// −∂xE_F/m when `fermi_term` is set.
pub fn vlasov_step(w: &PhaseSpaceDistribution, dt: f64, k: &PhysicalConstants, fermi_term: bool) -> Result<PhaseSpaceDistribution, TfError> {
    let mut out = w.clone();
    VlasovSolver::new(w.grid, *k).step(&mut out, dt, fermi_term)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn maxwellian(v: f64) -> f64 {
        (-0.5 * v * v).exp() / (2.0 * PI).sqrt()
    }

    /// Naive DFT second derivative, independent of the FFT path.
    fn dft_second_derivative(f: &[f64], length: f64) -> Vec<f64> {
        let n = f.len();
        let kappa = wavenumbers(n, length);
        let coeffs: Vec<C64> = (0..n)
            .map(|m| (0..n).map(|i| f[i] * C64::from_polar(1.0, -2.0 * PI * (m * i) as f64 / n as f64)).sum())
            .collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|m| coeffs[m] * (-kappa[m] * kappa[m]) * C64::from_polar(1.0, 2.0 * PI * (m * i) as f64 / n as f64))
                    .sum::<C64>()
                    .re
                    / n as f64
            })
            .collect()
    }

    #[test]
    fn neutral_plasma_has_no_potential() {
        let k = PhysicalConstants::plasma();
        let rho = DensityField::new(Grid::periodic(4.0, 32), vec![1.3; 32]).unwrap();
        let v = poisson_solve(&rho, 1.3, &k).unwrap();
        assert!(v.values().iter().all(|x| x.abs() < 1e-15));
        assert!(matches!(poisson_solve(&rho, 1.0, &k), Err(TfError::NonNeutralSource(_))));
        let radial = DensityField::new(Grid::radial(0.1, 8), vec![0.0; 8]).unwrap();
        assert!(matches!(poisson_solve(&radial, 0.0, &k), Err(TfError::GeometryMismatch { .. })));
    }

    #[test]
    fn single_mode_inversion() {
        let k = PhysicalConstants::new(1.0, 1.0, 0.8, 1).unwrap();
        let (length, eps) = (4.0 * PI, 0.01);
        let kw = 2.0 * PI * 3.0 / length;
        let rho = DensityField::from_fn(Grid::periodic(length, 64), |x| 2.0 + eps * (kw * x).cos()).unwrap();
        let v = poisson_solve(&rho, 2.0, &k).unwrap();
        for (i, x) in rho.grid().points().iter().enumerate() {
            let expected = k.coupling() * eps * (kw * x).cos() / (kw * kw);
            assert!((v.values()[i] - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn random_source_residual() {
        let k = PhysicalConstants::plasma();
        let mut rng = SplitMix64::new(8);
        let n = 48;
        // Band-limited source (Nyquist mode removed) so the spectral inverse is exact.
        let amp: Vec<f64> = (0..n / 2).map(|_| rng.next_f64() - 0.5).collect();
        let mut src: Vec<f64> = (0..n)
            .map(|i| (1..n / 2).map(|m| amp[m] * (2.0 * PI * (m * i) as f64 / n as f64 + 1.0).cos()).sum::<f64>())
            .collect();
        let mean = src.iter().sum::<f64>() / n as f64;
        src.iter_mut().for_each(|s| *s -= mean);
        let rho = DensityField::new(Grid::periodic(3.0, n), src.iter().map(|s| s + 5.0).collect()).unwrap();
        let v = poisson_solve(&rho, 5.0, &k).unwrap();
        let lap = dft_second_derivative(v.values(), 3.0);
        for i in 0..n {
            assert!((lap[i] + k.coupling() * src[i]).abs() < 1e-10, "{} {}", lap[i], src[i]);
        }
        assert!(v.values().iter().sum::<f64>().abs() < 1e-12);
    }

    #[test]
    fn homogeneous_state_is_stationary() {
        let grid = PhaseGrid::new(16, 64, 2.0 * PI, 6.0).unwrap();
        let w = PhaseSpaceDistribution::from_fn(grid, |_, v| maxwellian(v)).unwrap();
        let next = vlasov_step(&w, grid.dx() / 6.0, &PhysicalConstants::plasma(), false).unwrap();
        for (a, b) in w.values().iter().zip(next.values()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn cfl_and_overflow_guards() {
        let grid = PhaseGrid::new(16, 32, 2.0 * PI, 3.0).unwrap();
        let k = PhysicalConstants::plasma();
        let w = PhaseSpaceDistribution::from_fn(grid, |_, v| maxwellian(v)).unwrap();
        assert!(matches!(vlasov_step(&w, 2.0 * grid.dx() / 3.0, &k, false), Err(TfError::InvalidInput(_))));
        assert!(matches!(vlasov_step(&w, grid.dx() / 3.0, &k, false), Err(TfError::VelocityOverflow { .. })));
    }

    fn ballistic_error(nx: usize) -> f64 {
        // With 4πe² → 0 the force vanishes and W streams freely.
        let k = PhysicalConstants::new(1.0, 1.0, 1e-300, 1).unwrap();
        let length = 2.0 * PI;
        let grid = PhaseGrid::new(nx, 16, length, 1.0).unwrap();
        let w0 = |x: f64, v: f64| (1.0 + 0.5 * x.sin()) * (1.0 - (v / 0.8).powi(2)).max(0.0).powi(4);
        let mut w = PhaseSpaceDistribution::from_fn(grid, w0).unwrap();
        let t_end = length / (2.0 * grid.v_max);
        let steps = (t_end / grid.dx()).ceil() as usize;
        let dt = t_end / steps as f64;
        let solver = VlasovSolver::new(grid, k);
        for _ in 0..steps {
            solver.step(&mut w, dt, false).unwrap();
        }
        let mut err = 0.0f64;
        for j in 0..grid.nv {
            for i in 0..grid.nx {
                let exact = w0(grid.x(i) - grid.v(j) * t_end, grid.v(j));
                err = err.max((w.get(i, j) - exact).abs());
            }
        }
        err
    }

    #[test]
    fn ballistic_convergence_order() {
        let errs: Vec<f64> = [16, 32, 64].iter().map(|&n| ballistic_error(n)).collect();
        for pair in errs.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!(order >= 2.5, "{errs:?}");
        }
    }

    #[test]
    fn reversible_to_interpolation_accuracy() {
        let k = PhysicalConstants::plasma();
        // Benchmark grid and amplitude; the residual is the O(Δv⁴) interpolation
        // error of the velocity kick, which does not cancel between ±dt.
        let grid = PhaseGrid::new(128, 256, 4.0 * PI, 6.0).unwrap();
        let w0 = PhaseSpaceDistribution::from_fn(grid, |x, v| maxwellian(v) * (1.0 + 0.001 * (0.5 * x).cos())).unwrap();
        let dt = grid.dx() / grid.v_max;
        let fwd = vlasov_step(&w0, dt, &k, false).unwrap();
        let back = vlasov_step(&fwd, -dt, &k, false).unwrap();
        let err = w0.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn conservation_over_short_run() {
        let k = PhysicalConstants::plasma();
        let grid = PhaseGrid::new(32, 128, 4.0 * PI, 6.0).unwrap();
        let mut w = PhaseSpaceDistribution::from_fn(grid, |x, v| maxwellian(v) * (1.0 + 0.01 * (0.5 * x).cos())).unwrap();
        let (m0, p0) = (w.mass(), w.momentum());
        let solver = VlasovSolver::new(grid, k);
        for _ in 0..200 {
            solver.step(&mut w, grid.dx() / grid.v_max, false).unwrap();
        }
        assert!(((w.mass() - m0) / m0).abs() < 1e-10, "{}", (w.mass() - m0) / m0);
        assert!((w.momentum() - p0).abs() < 1e-10, "{}", w.momentum() - p0);
    }

    #[test]
    fn fermi_term_changes_force() {
        let k = PhysicalConstants::plasma();
        let grid = PhaseGrid::new(32, 64, 4.0 * PI, 6.0).unwrap();
        let w = PhaseSpaceDistribution::from_fn(grid, |x, v| maxwellian(v) * (1.0 + 0.01 * (0.5 * x).cos())).unwrap();
        let solver = VlasovSolver::new(grid, k);
        let a0 = solver.acceleration(&w.density(), false).unwrap();
        let a1 = solver.acceleration(&w.density(), true).unwrap();
        // Both the field and the degeneracy pressure push away from the density peak at x = 0.
        let i = grid.nx / 8;
        assert!(a0[i] > 0.0 && a1[i] > a0[i]);
    }
}
