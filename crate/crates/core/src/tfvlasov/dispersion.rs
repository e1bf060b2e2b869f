//! Linear Langmuir-wave dispersion of a Maxwellian plasma in normalized
//! units (ω_p = v_th = λ_D = 1).

use super::TfError;
use crate::qcore::C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::sync::OnceLock;

const WEIDEMAN_N: usize = 32;

/// Coefficients of Weideman's rational approximation (SIAM J. Numer. Anal.
/// 31, 1994) with N = 32 terms.
fn weideman_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let l = (n as f64 / 2f64.sqrt()).sqrt();
        // Samples at θ_k = kπ/M for k = −M+1..M−1, preceded by a zero, then
        // rotated so θ = 0 comes first.
        let mut f = vec![0.0; 2 * m];
        for k in -(m as isize) + 1..m as isize {
            let t = l * (k as f64 * PI / m as f64 / 2.0).tan();
            f[(k + m as isize) as usize] = (-t * t).exp() * (l * l + t * t);
        }
        f.rotate_left(m);
        let mut buf: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(2 * m).process(&mut buf);
        (1..=n).map(|j| buf[j].re / (2 * m) as f64).collect()
    })
}

/// Faddeeva function w(z) = e^{−z²} erfc(−iz).
fn faddeeva(z: C64) -> C64 {
    if z.im < 0.0 {
        return 2.0 * (-z * z).exp() - faddeeva(-z);
    }
    let l = (WEIDEMAN_N as f64 / 2f64.sqrt()).sqrt();
    let i = C64::new(0.0, 1.0);
    let denom = l - i * z;
    let zz = (l + i * z) / denom;
    let p = weideman_coefficients().iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * zz + a);
    2.0 * p / (denom * denom) + 1.0 / (PI.sqrt() * denom)
}

/// Plasma dispersion function Z(ζ) = i√π w(ζ), analytically continued into
/// the lower half plane.
pub fn plasma_z(zeta: C64) -> C64 {
    C64::new(0.0, PI.sqrt()) * faddeeva(zeta)
}

/// Least-damped root ω of 1 + (1 + ζZ(ζ))/k² = 0 with ζ = ω/(√2 k), by
/// Newton iteration from the Bohm–Gross frequency. Z′ = −2(1 + ζZ) gives the
/// derivative in closed form.
pub fn landau_root(k: f64) -> Result<C64, TfError> {
    if !(k > 0.0) {
        return Err(TfError::InvalidInput("wavenumber must be positive".into()));
    }
    let scale = 1.0 / (2f64.sqrt() * k);
    let mut omega = C64::new((1.0 + 3.0 * k * k).sqrt(), -0.01);
    for _ in 0..100 {
        let zeta = omega * scale;
        let zf = plasma_z(zeta);
        let chi = 1.0 + zeta * zf;
        let d = 1.0 + chi / (k * k);
        let dz = zf + zeta * (-2.0 * chi);
        let step = d / (dz * scale / (k * k));
        omega -= step;
        if step.norm() < 1e-13 * omega.norm() {
            return Ok(omega);
        }
    }
    Err(TfError::InvalidInput(format!("no dispersion root found for k = {k}")))
}
