use super::{
    analytic_series, build_dicke_hamiltonian, polarized_spin_state, DickeError, DickeParams, PolarizationSector,
    RadiationState, TRUNCATION_THRESHOLD,
};
use crate::qcore::{top_level_population, Propagator, QError, C64, DEFAULT_EXACT_LIMIT};
use crate::table::ResultTable;

/// Which Hamiltonian the exact oracle propagates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// H with the given Δ.
    Full,
    /// H_F (Δ forced to zero).
    Integrable,
}

/// ⟨ψ0|e^{−iHt}|ψ0⟩ from exact diagonalization on the truncated space.
#[derive(Clone, Debug)]
pub struct ExactSeries {
    pub times: Vec<f64>,
    pub values: Vec<C64>,
    pub fock_cutoff: usize,
    /// Largest population of the top Fock level seen on the grid.
    pub max_top_population: f64,
}

impl ExactSeries {
    pub fn truncation_suspect(&self) -> bool {
        self.max_top_population > TRUNCATION_THRESHOLD
    }
}

/// Propagates |state⟩ ⊗ |s⟩ with the field cut at `p.fock_cutoff`.
pub fn exact_series(
    p: &DickeParams,
    kind: Propagation,
    state: &RadiationState,
    s: PolarizationSector,
    times: &[f64],
) -> Result<ExactSeries, DickeError> {
    let p = match kind {
        Propagation::Full => *p,
        Propagation::Integrable => p.with_delta(0.0),
    };
    let h = build_dicke_hamiltonian(&p)?;
    let prop = Propagator::new(&h)?;
    let spin = polarized_spin_state(p.n_atoms, s)?;
    let psi0 = state.to_state_vector(p.fock_cutoff).tensor(&spin);
    let (fock_dim, spin_dim) = (p.fock_cutoff + 1, p.n_atoms + 1);

    let mut values = Vec::with_capacity(times.len());
    let mut max_top = 0.0f64;
    for &t in times {
        let psi_t = prop.evolve(&psi0, t)?;
        values.push(psi0.inner(&psi_t)?);
        max_top = max_top.max(top_level_population(&psi_t, fock_dim, spin_dim)?);
    }
    Ok(ExactSeries { times: times.to_vec(), values, fock_cutoff: p.fock_cutoff, max_top_population: max_top })
}

/// [`exact_series`], doubling the cutoff until the top-level population stays
/// below the truncation threshold or the dimension limit is reached.
pub fn exact_series_converged(
    p: &DickeParams,
    kind: Propagation,
    state: &RadiationState,
    s: PolarizationSector,
    times: &[f64],
) -> Result<ExactSeries, DickeError> {
    let mut cutoff = p.fock_cutoff;
    loop {
        let series = exact_series(&p.with_cutoff(cutoff), kind, state, s, times)?;
        if !series.truncation_suspect() {
            return Ok(series);
        }
        let next = cutoff * 2;
        if (next + 1) * (p.n_atoms + 1) > DEFAULT_EXACT_LIMIT {
            return Err(QError::DimensionTooLarge { dim: (next + 1) * (p.n_atoms + 1), limit: DEFAULT_EXACT_LIMIT }.into());
        }
        cutoff = next;
    }
}

/// Compares exact propagation under the full Hamiltonian (Δ from `p`) with
/// H_F, starting from vacuum ⊗ fully polarized atoms.
///
/// Columns: t, abs_full, abs_hf, abs_deviation.
pub fn delta_robustness(p: &DickeParams, times: &[f64]) -> Result<ResultTable, DickeError> {
    let s = PolarizationSector::fully_polarized(p.n_atoms);
    let vac = RadiationState::vacuum(p.fock_cutoff);
    let full = exact_series(p, Propagation::Full, &vac, s, times)?;
    let hf = exact_series(p, Propagation::Integrable, &vac, s, times)?;
    let mut table = ResultTable::new(&[("t", "time"), ("abs_full", "1"), ("abs_hf", "1"), ("abs_deviation", "1")]);
    for ((&t, a), b) in times.iter().zip(&full.values).zip(&hf.values) {
        table.push(vec![t, a.norm(), b.norm(), (a.norm() - b.norm()).abs()])?;
    }
    Ok(table)
}

/// Largest |analytic − exact| on the grid, with the exact series used.
pub fn oracle_deviation(
    p: &DickeParams,
    state: &RadiationState,
    s: PolarizationSector,
    times: &[f64],
) -> Result<(f64, ExactSeries), DickeError> {
    let analytic = analytic_series(times, state, p, s)?;
    let exact = exact_series_converged(p, Propagation::Integrable, state, s, times)?;
    let worst = analytic.iter().zip(&exact.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok((worst, exact))
}
