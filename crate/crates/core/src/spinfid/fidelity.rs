use super::{LocalHamiltonianEnsemble, ModelFamily, ProductState, SpinError, Support, MOMENT_LIMIT};
use crate::qcore::{Operator, Propagator, QError, SpectralMeasure, C64};
use crate::table::ResultTable;

/// Embeds a term into the 2^len space of sites `start..start + len`.
fn embed(matrix: &Operator, support: Support, start: usize, len: usize) -> Operator {
    let before = support.first() - start;
    let after = start + len - 1 - support.last();
    let local = matrix.dim();
    let dim = 1usize << len;
    let shift = after;
    let mask = (local - 1) << shift;
    Operator::from_fn(dim, |r, c| {
        // Bits outside the support must match.
        if (r & !mask) != (c & !mask) {
            return C64::new(0.0, 0.0);
        }
        let _ = before;
        matrix.get((r & mask) >> shift, (c & mask) >> shift)
    })
}

fn local_mean(v: &[C64], op: &Operator) -> C64 {
    let av = op.apply(v).expect("dimensions agree");
    v.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
}

/// σ² = ⟨H²⟩ − ⟨H⟩² by the local covariance decomposition: only pairs of
/// terms with overlapping supports contribute, each evaluated on the product
/// state restricted to the union of the two supports.
pub fn variance(ens: &LocalHamiltonianEnsemble, phi: &ProductState) -> Result<f64, SpinError> {
    ens.check_state(phi)?;
    let terms = ens.terms();
    let mut total = 0.0;
    for a in terms {
        for b in terms.iter().filter(|b| a.support.overlaps(&b.support)) {
            let start = a.support.first().min(b.support.first());
            let len = a.support.last().max(b.support.last()) - start + 1;
            let v = phi.block(start, len);
            let ea = embed(&a.matrix, a.support, start, len);
            let eb = embed(&b.matrix, b.support, start, len);
            let cov = local_mean(&v, &(&ea * &eb)) - local_mean(&v, &ea) * local_mean(&v, &eb);
            total += cov.re;
        }
    }
    Ok(total)
}

/// Spectral data of |φ⟩ under H, reused for F(t) at any t.
#[derive(Clone, Debug)]
pub struct FidelityCurve {
    measure: SpectralMeasure,
}

impl FidelityCurve {
    /// Diagonalizes the dense full-space H once.
    pub fn new(ens: &LocalHamiltonianEnsemble, phi: &ProductState) -> Result<Self, SpinError> {
        ens.check_state(phi)?;
        let h = ens.dense()?;
        let prop = Propagator::new(&h)?;
        Ok(Self { measure: prop.spectral_measure(&phi.to_state_vector())? })
    }

    /// ⟨φ|e^{−iHt}|φ⟩.
    pub fn amplitude(&self, t: f64) -> C64 {
        self.measure.amplitude(t)
    }

    /// F(t) = |⟨φ|e^{−iHt}|φ⟩|², clamped into [0, 1] against rounding.
    pub fn at(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        self.amplitude(t).norm_sqr().clamp(0.0, 1.0)
    }
}

/// Exact F(t) = |⟨φ|e^{−iHt}|φ⟩|².
pub fn fidelity(ens: &LocalHamiltonianEnsemble, phi: &ProductState, t: f64) -> Result<f64, SpinError> {
    Ok(FidelityCurve::new(ens, phi)?.at(t))
}

/// e^{−σ²t²}.
pub fn gaussian_prediction(sigma_sq: f64, t: f64) -> f64 {
    (-sigma_sq * t * t).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoremReport {
    pub sigma_sq: f64,
    /// σ²/N.
    pub c_lower: f64,
    /// Largest spectral bound over the terms.
    pub c_prime: f64,
    pub hypotheses_met: bool,
}

/// Evaluates σ² ≥ NC and the term bound ≤ C′ for this instance.
pub fn check_hypotheses(
    ens: &LocalHamiltonianEnsemble,
    phi: &ProductState,
    c: f64,
    c_prime: f64,
) -> Result<TheoremReport, SpinError> {
    if !(c > 0.0) {
        return Err(SpinError::InvalidInput("C must be positive".into()));
    }
    let sigma_sq = variance(ens, phi)?;
    let c_lower = sigma_sq / ens.n_sites() as f64;
    let bound = ens.term_bound();
    Ok(TheoremReport { sigma_sq, c_lower, c_prime: bound, hypotheses_met: c_lower >= c && bound <= c_prime })
}

/// F(t) = 1 − σ²t² + q t⁴ + O(t⁶).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShortTimeCoefficients {
    pub sigma_sq: f64,
    /// q = (m₄ + 3m₂²)/12 from the central moments m₂ = σ², m₄.
    pub quartic: f64,
}

/// Short-time expansion coefficients of the fidelity from exact central
/// moments. |⟨e^{−i(H−μ)t}⟩|² = (1 − m₂t²/2 + m₄t⁴/24)² + (m₃t³/6)² + O(t⁶).
pub fn short_time_coefficients(
    ens: &LocalHamiltonianEnsemble,
    phi: &ProductState,
) -> Result<ShortTimeCoefficients, SpinError> {
    ens.check_state(phi)?;
    let sigma_sq = variance(ens, phi)?;
    let dim = ens.dim();
    if ens.n_sites() >= 32 || dim > MOMENT_LIMIT {
        return Err(QError::DimensionTooLarge { dim, limit: MOMENT_LIMIT }.into());
    }
    let v = phi.to_state_vector();
    let v = v.amplitudes();
    let hv = ens.apply(v)?;
    let mu: f64 = v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum();
    let centred: Vec<C64> = hv.iter().zip(v).map(|(h, x)| h - x * mu).collect();
    let h2 = ens.apply(&centred)?;
    let second: Vec<C64> = h2.iter().zip(&centred).map(|(h, x)| h - x * mu).collect();
    let m2: f64 = centred.iter().map(|c| c.norm_sqr()).sum();
    let m4: f64 = second.iter().map(|c| c.norm_sqr()).sum();
    let _ = m2;
    Ok(ShortTimeCoefficients { sigma_sq, quartic: (m4 + 3.0 * sigma_sq * sigma_sq) / 12.0 })
}

/// Rescaled-time deviations from the Gaussian limit across system sizes.
#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    /// Columns: n_sites, sigma_sq, sup_deviation.
    pub table: ResultTable,
    pub deviations: Vec<f64>,
}

impl ConvergenceStudy {
    /// Strictly decreasing D(N); `None` for fewer than two sizes.
    pub fn strictly_decreasing(&self) -> Option<bool> {
        (self.deviations.len() >= 2).then(|| self.deviations.windows(2).all(|w| w[1] < w[0]))
    }

    /// D(N_{k+1}) ≤ (1 + slack)·D(N_k) for every step; `None` for fewer than two sizes.
    pub fn non_increasing_within(&self, slack: f64) -> Option<bool> {
        (self.deviations.len() >= 2).then(|| self.deviations.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack)))
    }
}

/// D(N) = max_τ |F(τ/σ) − e^{−τ²}| for each N; time is rescaled by σ so the
/// Gaussian target does not depend on N.
pub fn convergence_study(family: &ModelFamily, n_list: &[usize], tau_grid: &[f64]) -> Result<ConvergenceStudy, SpinError> {
    let mut table = ResultTable::new(&[("n_sites", "1"), ("sigma_sq", "energy^2"), ("sup_deviation", "1")]);
    let mut deviations = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let ens = family.ensemble(n);
        let phi = family.reference_state(n);
        let sigma_sq = variance(&ens, &phi)?;
        if !(sigma_sq > 0.0) {
            return Err(SpinError::InvalidInput(format!("zero variance for N = {n}; rescaled time undefined")));
        }
        let sigma = sigma_sq.sqrt();
        let curve = FidelityCurve::new(&ens, &phi)?;
        let d = tau_grid
            .iter()
            .map(|&tau| (curve.at(tau / sigma) - (-tau * tau).exp()).abs())
            .fold(0.0, f64::max);
        table.push(vec![n as f64, sigma_sq, d])?;
        deviations.push(d);
    }
    Ok(ConvergenceStudy { table, deviations })
}
