use super::{one_minus_cos, DickeError, DickeParams, PolarizationSector};
use crate::qcore::{StateVector, C64, NORM_TOL};

/// Coefficients below this magnitude squared do not count as support.
const SUPPORT_EPS: f64 = 1e-20;

/// Field state Σ cₙ|n⟩ truncated at photon number `cutoff`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiationState {
    coeffs: Vec<C64>,
}

impl RadiationState {
    /// Validates Σ|cₙ|² = 1 within 1e-12.
    pub fn from_coefficients(coeffs: Vec<C64>) -> Result<Self, DickeError> {
        if coeffs.len() < 2 {
            return Err(DickeError::InvalidParams("radiation state needs a cutoff of at least 1".into()));
        }
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(DickeError::NotNormalized(norm_sq));
        }
        Ok(Self { coeffs })
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::number(0, cutoff)
    }

    pub fn number(n: usize, cutoff: usize) -> Self {
        assert!(n <= cutoff && cutoff >= 1, "number state |{n}⟩ outside cutoff {cutoff}");
        let mut coeffs = vec![C64::new(0.0, 0.0); cutoff + 1];
        coeffs[n] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// Coherent state |β⟩ restricted to n ≤ cutoff and renormalized.
    pub fn coherent(beta: C64, cutoff: usize) -> Self {
        let mut coeffs = Vec::with_capacity(cutoff + 1);
        let mut c = C64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
        for n in 0..=cutoff {
            if n > 0 {
                c = c * beta / (n as f64).sqrt();
            }
            coeffs.push(c);
        }
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Self { coeffs: coeffs.into_iter().map(|c| c / norm).collect() }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    /// Largest photon number carrying weight.
    pub fn support_max(&self) -> usize {
        self.coeffs.iter().rposition(|c| c.norm_sqr() > SUPPORT_EPS).unwrap_or(0)
    }

    /// Embeds into a (possibly larger) Fock space of the given cutoff.
    pub fn to_state_vector(&self, cutoff: usize) -> StateVector {
        assert!(cutoff >= self.support_max(), "cutoff {cutoff} below the state's support");
        let mut amps = vec![C64::new(0.0, 0.0); cutoff + 1];
        for (n, c) in self.coeffs.iter().enumerate().take(cutoff + 1) {
            amps[n] = *c;
        }
        StateVector::new(amps).expect("radiation state is normalized")
    }
}

/// ξ(t) = (s g/ω)² (ωt − sin ωt).
pub fn xi(t: f64, s: PolarizationSector, p: &DickeParams) -> f64 {
    let beta = s.value() as f64 * p.g / p.omega;
    let wt = p.omega * t;
    beta * beta * (wt - wt.sin())
}

/// α(t) = (s g/ω)(1 − e^{iωt}).
pub fn alpha(t: f64, s: PolarizationSector, p: &DickeParams) -> C64 {
    let beta = s.value() as f64 * p.g / p.omega;
    let wt = p.omega * t;
    // 1 − e^{iωt} = (1 − cos ωt) − i sin ωt
    C64::new(beta * one_minus_cos(wt), -beta * wt.sin())
}

/// Generalized Laguerre values: `table[k][j] = L_j^{(k)}(x)` for k ≤ `max_order`,
/// j ≤ `max_degree`, by upward recurrence in j.
pub fn laguerre_table(max_order: usize, max_degree: usize, x: f64) -> Vec<Vec<f64>> {
    (0..=max_order)
        .map(|k| {
            let k = k as f64;
            let mut row = Vec::with_capacity(max_degree + 1);
            row.push(1.0);
            if max_degree >= 1 {
                row.push(1.0 + k - x);
            }
            for j in 1..max_degree {
                let jf = j as f64;
                let next = ((2.0 * jf + 1.0 + k - x) * row[j] - (jf + k) * row[j - 1]) / (jf + 1.0);
                row.push(next);
            }
            row
        })
        .collect()
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// Displaced-number matrix element ⟨m|D(α)|n⟩, given L from [`laguerre_table`]
/// at x = |α|² and ln-factorials.
fn displaced_element(m: usize, n: usize, a: C64, lag: &[Vec<f64>], lnf: &[f64]) -> C64 {
    let x = a.norm_sqr();
    let (lo, hi) = (m.min(n), m.max(n));
    let k = hi - lo;
    let l = lag[k][lo];
    if k == 0 {
        return C64::new((-0.5 * x).exp() * l, 0.0);
    }
    if x == 0.0 {
        return C64::new(0.0, 0.0);
    }
    // |⟨m|D|n⟩| = sqrt(lo!/hi!) |α|^k e^{−|α|²/2} |L_lo^{(k)}(|α|²)|
    let log_mag = 0.5 * (lnf[lo] - lnf[hi]) + k as f64 * 0.5 * x.ln() - 0.5 * x;
    // Phase (α/|α|)^k below the diagonal, (−α*/|α|)^k above it.
    let unit = a / a.norm();
    let phase = if m >= n { unit.powi(k as i32) } else { (-unit.conj()).powi(k as i32) };
    phase * (log_mag.exp() * l)
}

/// ⟨m|D(α)|n⟩ with D(α) = exp(α a† − α* a).
pub fn displaced_number_element(m: usize, n: usize, a: C64) -> C64 {
    let hi = m.max(n);
    let lag = laguerre_table(hi - m.min(n), m.min(n), a.norm_sqr());
    displaced_element(m, n, a, &lag, &ln_factorials(hi))
}

/// ⟨U_F(t)⟩ = e^{iξ} Σ_{m,n} c_m* c_n e^{−imωt} ⟨m|D(α(t))|n⟩ for the field
/// state `state` with the atoms frozen in sector `s`.
pub fn analytic_expectation(
    t: f64,
    state: &RadiationState,
    p: &DickeParams,
    s: PolarizationSector,
) -> Result<C64, DickeError> {
    Ok(analytic_series(&[t], state, p, s)?[0])
}

/// [`analytic_expectation`] over a list of times.
pub fn analytic_series(
    times: &[f64],
    state: &RadiationState,
    p: &DickeParams,
    s: PolarizationSector,
) -> Result<Vec<C64>, DickeError> {
    p.validate()?;
    PolarizationSector::new(s.value(), p.n_atoms)?;
    let cutoff = state.cutoff();
    let top = state.support_max();
    if top + 2 > cutoff {
        return Err(DickeError::CutoffTooSmall { support: top, cutoff });
    }
    let support: Vec<(usize, C64)> = state
        .coefficients()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() > SUPPORT_EPS)
        .collect();
    let lnf = ln_factorials(top);

    Ok(times
        .iter()
        .map(|&t| {
            let a = alpha(t, s, p);
            let lag = laguerre_table(top, top, a.norm_sqr());
            let mut sum = C64::new(0.0, 0.0);
            for &(m, cm) in &support {
                let rotation = C64::from_polar(1.0, -(m as f64) * p.omega * t);
                for &(n, cn) in &support {
                    sum += cm.conj() * cn * rotation * displaced_element(m, n, a, &lag, &lnf);
                }
            }
            C64::from_polar(1.0, xi(t, s, p)) * sum
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::envelope;
    use std::f64::consts::PI;

    fn params(g: f64, n: usize, m: usize) -> DickeParams {
        DickeParams::new(1.0, 0.0, g, n, m).unwrap()
    }

    #[test]
    fn xi_values() {
        let p = DickeParams::new(2.0, 0.0, 0.3, 4, 8).unwrap();
        let s = PolarizationSector::fully_polarized(4);
        assert_eq!(xi(0.0, s, &p), 0.0);
        let beta2 = (4.0 * 0.3 / 2.0f64).powi(2);
        assert!((xi(PI, s, &p) - beta2 * 2.0 * PI).abs() < 1e-13);
        let half = PolarizationSector::new(2, 4).unwrap();
        for t in [0.1, 0.9, 2.2] {
            assert!((xi(t, s, &p) - 4.0 * xi(t, half, &p)).abs() < 1e-13);
        }
    }

    #[test]
    fn alpha_values() {
        let p = DickeParams::new(1.0, 0.0, 0.2, 3, 8).unwrap();
        let s = PolarizationSector::fully_polarized(3);
        assert_eq!(alpha(0.0, s, &p), C64::new(0.0, 0.0));
        assert!((alpha(PI, s, &p) - C64::new(2.0 * 3.0 * 0.2, 0.0)).norm() < 1e-15);
        let beta = 0.6;
        for k in 0..100 {
            let t = 0.0731 * k as f64;
            let expected = 2.0 * beta * beta * (1.0 - t.cos());
            assert!((alpha(t, s, &p).norm_sqr() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn laguerre_low_orders() {
        let x = 1.7;
        let t = laguerre_table(3, 3, x);
        assert!((t[0][2] - (x * x / 2.0 - 2.0 * x + 1.0)).abs() < 1e-14);
        // L_2^{(1)}(x) = x²/2 − 3x + 3
        assert!((t[1][2] - (x * x / 2.0 - 3.0 * x + 3.0)).abs() < 1e-14);
        // L_1^{(3)}(x) = 4 − x
        assert!((t[3][1] - (4.0 - x)).abs() < 1e-14);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let a = C64::new(0.8, -0.5);
        let coh = RadiationState::coherent(a, 40);
        for m in 0..10 {
            let d = displaced_number_element(m, 0, a);
            assert!((d - coh.coefficients()[m]).norm() < 1e-14);
        }
    }

    #[test]
    fn displaced_elements_unitary_rows() {
        // Σ_m |⟨m|D|n⟩|² = 1 for every n, summed far past the support.
        let a = C64::new(-1.3, 2.1);
        for n in [0usize, 3, 10] {
            let total: f64 = (0..120).map(|m| displaced_number_element(m, n, a).norm_sqr()).sum();
            assert!((total - 1.0).abs() < 1e-12, "n={n} total={total}");
        }
    }

    #[test]
    fn vacuum_modulus_is_envelope() {
        let p = params(0.2, 5, 16);
        let s = PolarizationSector::fully_polarized(5);
        let vac = RadiationState::vacuum(16);
        for k in 0..60 {
            let t = 0.11 * k as f64;
            let u = analytic_expectation(t, &vac, &p, s).unwrap();
            assert!((u.norm() - envelope(t, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn full_revival() {
        let p = params(0.3, 8, 40);
        let s = PolarizationSector::fully_polarized(8);
        for state in [
            RadiationState::vacuum(40),
            RadiationState::number(1, 40),
            RadiationState::number(5, 40),
            RadiationState::coherent(C64::new(1.0, 0.5), 40),
        ] {
            let u = analytic_expectation(2.0 * PI, &state, &p, s).unwrap();
            assert!((u.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cutoff_guard() {
        let p = params(0.3, 2, 6);
        let s = PolarizationSector::fully_polarized(2);
        let st = RadiationState::number(5, 6);
        assert!(matches!(
            analytic_expectation(1.0, &st, &p, s),
            Err(DickeError::CutoffTooSmall { support: 5, cutoff: 6 })
        ));
        assert!(analytic_expectation(1.0, &RadiationState::number(4, 6), &p, s).is_ok());
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            RadiationState::from_coefficients(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]),
            Err(DickeError::NotNormalized(_))
        ));
    }
}
