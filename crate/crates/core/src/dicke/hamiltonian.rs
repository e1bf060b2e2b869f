use super::{DickeError, DickeParams, PolarizationSector};
use crate::qcore::{
    collective_spin, fock_ladder, tensor_with_limit, CollectiveSpinSpace, Operator, Propagator, StateVector,
    TruncatedFockSpace, DEFAULT_EXACT_LIMIT,
};

/// H = ω a†a ⊗ I + Δ I ⊗ Jz + g (a + a†) ⊗ 2Jx, field factor first.
pub fn build_dicke_hamiltonian(p: &DickeParams) -> Result<Operator, DickeError> {
    p.validate()?;
    let fock = TruncatedFockSpace::new(p.fock_cutoff)?;
    let spin = CollectiveSpinSpace::new(p.n_atoms)?;
    let limit = DEFAULT_EXACT_LIMIT;
    let (a, adag) = fock_ladder(&fock);
    let (jx, jz) = collective_spin(&spin);
    let id_f = Operator::identity(fock.dim());
    let id_s = Operator::identity(spin.dim());

    let field = tensor_with_limit(&(&adag * &a).scale_real(p.omega), &id_s, limit)?;
    let coupling = tensor_with_limit(&(&a + &adag).scale_real(p.g), &jx.scale_real(2.0), limit)?;
    let mut h = &field + &coupling;
    if p.delta != 0.0 {
        h = &h + &tensor_with_limit(&id_f, &jz.scale_real(p.delta), limit)?;
    }
    Ok(h.into_hermitian()?)
}

/// H_F = ω a†a + g Σσ₁ᵢ (a† + a), the Δ → 0 Hamiltonian.
pub fn build_hf_hamiltonian(p: &DickeParams) -> Result<Operator, DickeError> {
    build_dicke_hamiltonian(&p.with_delta(0.0))
}

/// Symmetric-sector spin state with Σσ₁ᵢ = s.
pub fn polarized_spin_state(n_atoms: usize, s: PolarizationSector) -> Result<StateVector, DickeError> {
    let spin = CollectiveSpinSpace::new(n_atoms)?;
    let (jx, _) = collective_spin(&spin);
    let prop = Propagator::new(&jx.scale_real(2.0))?;
    // Eigenvalues of 2Jx ascend as −N, −N+2, …, N.
    let k = ((s.value() + n_atoms as i64) / 2) as usize;
    Ok(prop.eigenvector(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{expectation, QError};

    #[test]
    fn decoupled_spectrum() {
        // g is required positive, so decouple by a vanishing coupling.
        let p = DickeParams { omega: 1.5, delta: 0.0, g: 1e-300, n_atoms: 3, fock_cutoff: 5 };
        let prop = Propagator::new(&build_dicke_hamiltonian(&p).unwrap()).unwrap();
        let e = prop.energies();
        for n in 0..=5 {
            for k in 0..4 {
                assert!((e[n * 4 + k] - 1.5 * n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rabi_splitting_at_resonance() {
        let p = DickeParams::new(1.0, 1.0, 0.01, 1, 10).unwrap();
        let prop = Propagator::new(&build_dicke_hamiltonian(&p).unwrap()).unwrap();
        let e = prop.energies();
        // Ground state |0,↓⟩ at −1/2; the resonant doublet |1,↓⟩, |0,↑⟩ follows.
        assert!((e[0] + 0.5).abs() < 1e-3);
        let split = e[2] - e[1];
        assert!((split / 0.02 - 1.0).abs() < 1e-2, "split = {split}");
    }

    #[test]
    fn hermitian_for_assorted_params() {
        for (omega, delta, g, n, m) in [(1.0, 0.3, 0.2, 3, 6), (0.7, 0.0, 0.5, 5, 4), (2.0, 1.1, 0.05, 1, 9)] {
            let h = build_dicke_hamiltonian(&DickeParams::new(omega, delta, g, n, m).unwrap()).unwrap();
            assert!(h.hermiticity_residual() < 1e-12);
        }
    }

    #[test]
    fn hf_is_delta_zero() {
        let p = DickeParams::new(1.0, 0.7, 0.3, 3, 6).unwrap();
        let hf = build_hf_hamiltonian(&p).unwrap();
        let h0 = build_dicke_hamiltonian(&p.with_delta(0.0)).unwrap();
        assert_eq!((&hf - &h0).max_abs(), 0.0);
    }

    #[test]
    fn hf_conserves_polarization() {
        let p = DickeParams::new(1.0, 0.0, 0.3, 4, 10).unwrap();
        let hf = build_hf_hamiltonian(&p).unwrap();
        let (jx, _) = collective_spin(&CollectiveSpinSpace::new(4).unwrap());
        let sx = tensor_with_limit(&Operator::identity(11), &jx.scale_real(2.0), 4096).unwrap();
        assert!(hf.commutator(&sx).max_abs() < 1e-12);
        // The full model does not conserve it.
        let h = build_dicke_hamiltonian(&p.with_delta(0.5)).unwrap();
        assert!(h.commutator(&sx).max_abs() > 0.1);
    }

    #[test]
    fn hf_sector_spectrum_is_displaced_oscillator() {
        // E = nω − s²g²/ω in each sector s; compare the low-lying spectrum where
        // the cutoff is irrelevant.
        let (omega, g, n_atoms) = (1.0, 0.3, 2usize);
        let p = DickeParams::new(omega, 0.0, g, n_atoms, 60).unwrap();
        let prop = Propagator::new(&build_hf_hamiltonian(&p).unwrap()).unwrap();
        let e_cut = 7.5;
        let mut expected = Vec::new();
        for s in [-2i64, 0, 2] {
            for n in 0..20 {
                let e = n as f64 * omega - (s * s) as f64 * g * g / omega;
                if e < e_cut {
                    expected.push(e);
                }
            }
        }
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got: Vec<f64> = prop.energies().iter().copied().filter(|&e| e < e_cut).collect();
        assert_eq!(got.len(), expected.len());
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn polarized_state_is_eigenstate() {
        for n in [1usize, 4, 9] {
            let spin = CollectiveSpinSpace::new(n).unwrap();
            let (jx, _) = collective_spin(&spin);
            for s in (-(n as i64)..=n as i64).step_by(2) {
                let psi = polarized_spin_state(n, PolarizationSector::new(s, n).unwrap()).unwrap();
                let mean = expectation(&psi, &jx.scale_real(2.0)).unwrap();
                assert!((mean.re - s as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dimension_guard() {
        let p = DickeParams::new(1.0, 0.0, 0.1, 200, 100).unwrap();
        assert!(matches!(
            build_dicke_hamiltonian(&p),
            Err(DickeError::Quantum(QError::DimensionTooLarge { .. }))
        ));
    }
}
