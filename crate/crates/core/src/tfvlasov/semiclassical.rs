use super::{Geometry, PhysicalConstants, PotentialField, Spacing, TfError};
use crate::qcore::C64;
use std::f64::consts::PI;

/// (∇V, ΔV) at one grid point by second-order differences. Open ends fall
/// back to one-sided stencils of the same order.
fn derivatives(v: &PotentialField, i: usize) -> Result<(f64, f64), TfError> {
    let g = v.grid();
    let f = v.values();
    let n = g.len;
    let h = g.spacing;
    if i >= n {
        return Err(TfError::InvalidInput(format!("index {i} outside a grid of {n}")));
    }
    if g.spacing_kind != Spacing::Uniform {
        return Err(TfError::InvalidInput("finite differences need a uniform grid".into()));
    }
    if n < 4 {
        return Err(TfError::InvalidInput("need at least 4 grid points".into()));
    }
    let (d1, d2) = if g.geometry == Geometry::Periodic1D {
        let (l, r) = (f[(i + n - 1) % n], f[(i + 1) % n]);
        ((r - l) / (2.0 * h), (r - 2.0 * f[i] + l) / (h * h))
    } else if i == 0 {
        ((-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h), (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h))
    } else if i == n - 1 {
        (
            (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h),
            (2.0 * f[i] - 5.0 * f[i - 1] + 4.0 * f[i - 2] - f[i - 3]) / (h * h),
        )
    } else {
        ((f[i + 1] - f[i - 1]) / (2.0 * h), (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h))
    };
    let laplacian = match g.geometry {
        Geometry::Radial3D => d2 + 2.0 * d1 / g.point(i),
        _ => d2,
    };
    Ok((d1, laplacian))
}

/// Leading Wigner–Kirkwood bracket
/// 1 + (ħ²/12m)(t²ΔV/ħ² − i t³|∇V|²/ħ³) at grid point `x_index`.
/// |factor − 1| measures how far the dynamics is from classical.
pub fn wigner_kirkwood_factor(v: &PotentialField, x_index: usize, t: f64, k: &PhysicalConstants) -> Result<C64, TfError> {
    let (grad, lap) = derivatives(v, x_index)?;
    let h = k.hbar;
    let pref = h * h / (12.0 * k.mass);
    Ok(C64::new(1.0 + pref * t * t * lap / (h * h), -pref * t.powi(3) * grad * grad / h.powi(3)))
}

/// Leading-order semiclassical propagator in d = `x.len()` dimensions,
/// (m/2πiħt)^{d/2} exp[i m|x − x′|²/2ħt − i t V((x + x′)/2)/ħ].
///
/// The power uses the principal branch, so for t > 0 the prefactor carries the
/// phase e^{−iπd/4} and for t < 0 the phase e^{+iπd/4}.
pub fn g_tf(x: &[f64], x_prime: &[f64], t: f64, v: impl Fn(&[f64]) -> f64, k: &PhysicalConstants) -> Result<C64, TfError> {
    if t == 0.0 {
        return Err(TfError::SingularTime);
    }
    if x.len() != x_prime.len() || x.is_empty() {
        return Err(TfError::InvalidInput("x and x′ must have the same nonzero dimension".into()));
    }
    let d = x.len() as f64;
    let base = C64::new(0.0, -k.mass / (2.0 * PI * k.hbar * t));
    let pref = base.powf(0.5 * d);
    let dist2: f64 = x.iter().zip(x_prime).map(|(a, b)| (a - b) * (a - b)).sum();
    let mid: Vec<f64> = x.iter().zip(x_prime).map(|(a, b)| 0.5 * (a + b)).collect();
    let phase = k.mass * dist2 / (2.0 * k.hbar * t) - t * v(&mid) / k.hbar;
    Ok(pref * C64::from_polar(1.0, phase))
}
