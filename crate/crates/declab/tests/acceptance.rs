//! One PASS/FAIL line per acceptance criterion. Oracles here are written
//! independently of the library paths they check.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use declab_core::dicke::{
    analytic_series, collapse_study, exact_series_converged, DickeParams, PolarizationSector, Propagation, RadiationState,
};
use declab_core::qcore::C64;
use declab_core::rng::SplitMix64;
use declab_core::spinfid::{variance, FidelityCurve, LocalHamiltonianEnsemble, ModelFamily, ProductState};
use declab_core::tfvlasov::{
    fit_damping, landau_run, stability_verdict, tf_energy_scaling, wigner_kirkwood_factor, Grid, InitialProfile, LandauConfig,
    PhysicalConstants, PotentialField, Verdict, VerdictConfig,
};

const ORACLE_TOL: f64 = 1e-8;
const REVIVAL_TOL: f64 = 1e-10;
const COLLAPSE_SLOPE_TOL: f64 = 0.05;
const CLOSED_FORM_TOL: f64 = 1e-12;
const ISING_SLACK: f64 = 0.05;
const VARIANCE_TOL: f64 = 1e-10;
const QUADRATIC_FIT_TOL: f64 = 1e-3;
const DAMPING_TOL: f64 = 0.05;
const MASS_TOL: f64 = 1e-8;
const MOMENTUM_TOL: f64 = 1e-6;
const TF_EXPONENT_TOL: f64 = 0.01;
const WK_EXPONENT_TOL: f64 = 0.05;

type Verdicts = Result<String, String>;

fn within(elapsed: Duration, limit_s: u64, detail: String) -> Verdicts {
    if elapsed.as_secs_f64() < limit_s as f64 {
        Ok(format!("{detail}; {:.1} s", elapsed.as_secs_f64()))
    } else {
        Err(format!("{detail}; took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()))
    }
}

/// Least-squares slope of ln y against ln x.
fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn period_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / (n - 1) as f64).collect()
}

fn criterion_1() -> Verdicts {
    let start = Instant::now();
    let times = period_grid(50);
    let mut worst = (0.0f64, String::new());
    for n in [4usize, 8, 12] {
        for g in [0.1, 0.3] {
            let p = DickeParams::new(1.0, 0.0, g, n, 64).map_err(|e| e.to_string())?;
            let s = PolarizationSector::fully_polarized(n);
            for (label, state) in [("vacuum", RadiationState::vacuum(64)), ("|1>", RadiationState::number(1, 64))] {
                let a = analytic_series(&times, &state, &p, s).map_err(|e| e.to_string())?;
                let e = exact_series_converged(&p, Propagation::Integrable, &state, s, &times).map_err(|e| e.to_string())?;
                let dev = a.iter().zip(&e.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                if dev > worst.0 {
                    worst = (dev, format!("N={n} g={g} {label} M={}", e.fock_cutoff));
                }
            }
        }
    }
    let detail = format!("max deviation {:.2e} at {}", worst.0, worst.1);
    if worst.0 >= ORACLE_TOL {
        return Err(detail);
    }
    within(start.elapsed(), 120, detail)
}

fn criterion_2() -> Verdicts {
    let start = Instant::now();
    let base = DickeParams::new(1.0, 0.0, 0.5, 4, 1).map_err(|e| e.to_string())?;
    let study = collapse_study(&base, &[4, 8, 16, 32, 64], COLLAPSE_SLOPE_TOL).map_err(|e| e.to_string())?;
    let ns = study.table.column("n_atoms").unwrap();
    let widths = study.table.column("fwhm").unwrap();
    let slope = log_log_slope(&ns, &widths);
    let detail = format!("exponent {slope:.4}");
    if (slope + 1.0).abs() > COLLAPSE_SLOPE_TOL {
        return Err(detail);
    }
    within(start.elapsed(), 10, detail)
}

fn criterion_3() -> Verdicts {
    let mut worst = 0.0f64;
    let states = [
        RadiationState::vacuum(64),
        RadiationState::number(1, 64),
        RadiationState::number(3, 64),
        RadiationState::coherent(C64::new(0.5, -0.3), 64),
    ];
    for n in [1usize, 4, 8, 12, 64] {
        for g in [0.1, 0.3, 1.0] {
            for omega in [1.0, 2.5] {
                let p = DickeParams::new(omega, 0.0, g, n, 64).map_err(|e| e.to_string())?;
                for state in &states {
                    let v = analytic_series(&[2.0 * PI / omega], state, &p, PolarizationSector::fully_polarized(n)).map_err(|e| e.to_string())?;
                    worst = worst.max((v[0].norm() - 1.0).abs());
                }
            }
        }
    }
    let detail = format!("max ||<U_F(2π/ω)>| - 1| = {worst:.2e}");
    if worst < REVIVAL_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// ⟨H²⟩ − ⟨H⟩² from the full-space action of H on the product vector.
fn dense_variance(ens: &LocalHamiltonianEnsemble, phi: &ProductState) -> f64 {
    let v = phi.to_state_vector();
    let hv = ens.apply(v.amplitudes()).unwrap();
    let mean: C64 = v.amplitudes().iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
    hv.iter().map(|c| c.norm_sqr()).sum::<f64>() - mean.norm_sqr()
}

fn rescaled_deviation(ens: &LocalHamiltonianEnsemble, phi: &ProductState) -> Result<f64, String> {
    let sigma = dense_variance(ens, phi).sqrt();
    let curve = FidelityCurve::new(ens, phi).map_err(|e| e.to_string())?;
    Ok((0..=60).map(|k| 0.05 * k as f64).map(|tau| (curve.at(tau / sigma) - (-tau * tau).exp()).abs()).fold(0.0, f64::max))
}

fn criterion_4() -> Verdicts {
    let start = Instant::now();
    let delta = 1.0;
    let mut field = Vec::new();
    let mut closed = 0.0f64;
    for n in [2usize, 4, 8, 12] {
        let ens = LocalHamiltonianEnsemble::independent_field(n, delta);
        let phi = ProductState::all_plus(n);
        let curve = FidelityCurve::new(&ens, &phi).map_err(|e| e.to_string())?;
        for k in 0..=200 {
            let t = 0.05 * k as f64;
            closed = closed.max((curve.at(t) - (0.5 * delta * t).cos().powi(2 * n as i32)).abs());
        }
        field.push(rescaled_deviation(&ens, &phi)?);
    }
    let ising_family = ModelFamily::TransverseIsing { j: 1.0, h: 0.7, theta: 1.1, phi: 0.4 };
    let mut ising = Vec::new();
    for n in [4usize, 8, 12] {
        ising.push(rescaled_deviation(&ising_family.ensemble(n), &ising_family.reference_state(n))?);
    }
    let decreasing = field.windows(2).all(|w| w[1] < w[0]);
    let slack = ising.windows(2).all(|w| w[1] <= w[0] * (1.0 + ISING_SLACK));
    let detail = format!("field D = {field:.4?}, closed-form error {closed:.1e}, ising D = {ising:.4?}");
    if !(decreasing && slack && closed < CLOSED_FORM_TOL) {
        return Err(detail);
    }
    within(start.elapsed(), 300, detail)
}

fn criterion_5() -> Verdicts {
    let mut rng = SplitMix64::new(2024);
    let mut worst = 0.0f64;
    for k in 0..20 {
        let n = 2 + k % 11;
        let ens = LocalHamiltonianEnsemble::random(n, &mut rng);
        let phi = ProductState::random(n, &mut rng);
        let local = variance(&ens, &phi).map_err(|e| e.to_string())?;
        worst = worst.max((local - dense_variance(&ens, &phi)).abs());
    }
    let mut anchor = 0.0f64;
    for (n, d) in [(1usize, 1.0), (7, 0.3), (50, 2.0), (1000, 1.7)] {
        let s2 = variance(&LocalHamiltonianEnsemble::independent_field(n, d), &ProductState::all_plus(n)).map_err(|e| e.to_string())?;
        anchor = anchor.max((s2 / n as f64 - d * d / 4.0).abs());
    }
    let detail = format!("local vs dense {worst:.1e} over 20 models, σ²/N - Δ²/4 = {anchor:.1e}");
    if worst < VARIANCE_TOL && anchor < CLOSED_FORM_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_6() -> Verdicts {
    let mut rng = SplitMix64::new(99);
    let cases: Vec<(&str, LocalHamiltonianEnsemble, ProductState)> = vec![
        ("independent-field", LocalHamiltonianEnsemble::independent_field(8, 1.0), ProductState::all_plus(8)),
        ("transverse-ising", LocalHamiltonianEnsemble::transverse_ising(8, 1.0, 0.7), ProductState::uniform(8, 1.1, 0.4)),
        ("random-local", LocalHamiltonianEnsemble::random(7, &mut rng), ProductState::random(7, &mut rng)),
    ];
    let mut worst = (0.0f64, "");
    for (name, ens, phi) in &cases {
        let s2 = dense_variance(ens, phi);
        let curve = FidelityCurve::new(ens, phi).map_err(|e| e.to_string())?;
        let t_cap = 0.01 / s2.sqrt();
        // y ≈ c t² through the origin: c = Σ y t² / Σ t⁴.
        let (mut num, mut den) = (0.0, 0.0);
        for k in 1..=50 {
            let t = t_cap * k as f64 / 50.0;
            let y = -curve.amplitude(t).norm_sqr().ln();
            num += y * t * t;
            den += t.powi(4);
        }
        let rel = (num / den / s2 - 1.0).abs();
        if rel >= worst.0 {
            worst = (rel, name);
        }
    }
    let detail = format!("worst relative error {:.1e} ({})", worst.0, worst.1);
    if worst.0 < QUADRATIC_FIT_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Plasma dispersion function by trapezoid quadrature on the real line plus
/// the pole residue (valid for Im ζ < 0).
fn z_by_quadrature(zeta: C64) -> C64 {
    let h = 0.005;
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..=4800 {
        let x = -12.0 + h * k as f64;
        sum += (-x * x).exp() / (x - zeta);
    }
    sum * (h / PI.sqrt()) + C64::new(0.0, 2.0 * PI.sqrt()) * (-zeta * zeta).exp()
}

fn dispersion_root(k: f64) -> C64 {
    let d = |w: C64| 1.0 + (1.0 + w / (2f64.sqrt() * k) * z_by_quadrature(w / (2f64.sqrt() * k))) / (k * k);
    let (mut w0, mut w1) = (C64::new(1.4, -0.1), C64::new(1.42, -0.16));
    let (mut d0, mut d1) = (d(w0), d(w1));
    for _ in 0..60 {
        let w2 = w1 - d1 * (w1 - w0) / (d1 - d0);
        (w0, d0) = (w1, d1);
        w1 = w2;
        d1 = d(w1);
        if (w1 - w0).norm() < 1e-12 {
            break;
        }
    }
    w1
}

fn criterion_7() -> Verdicts {
    let start = Instant::now();
    let cfg = LandauConfig::benchmark(0.001);
    let run = landau_run(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let fit = fit_damping(&run.table, (0.0, 40.0)).map_err(|e| e.to_string())?;
    let root = dispersion_root(0.5);
    let rel = (fit.gamma.abs() / root.im.abs() - 1.0).abs();
    let two_stream = LandauConfig { k_mode: 0.2, v_max: 9.0, t_final: 60.0, profile: InitialProfile::TwoStream { drift: 2.4 }, ..cfg };
    let verdict = stability_verdict(&landau_run(&two_stream).map_err(|e| e.to_string())?.table, &VerdictConfig::default());
    let detail = format!(
        "γ = {:.5} vs root {:.5} (rel {rel:.1e}), mass drift {:.1e}, momentum drift {:.1e}, two-stream {verdict}",
        fit.gamma, root.im, run.mass_drift, run.momentum_drift
    );
    if !(rel < DAMPING_TOL && run.mass_drift < MASS_TOL && run.momentum_drift < MOMENTUM_TOL && verdict == Verdict::Undamped) {
        return Err(detail);
    }
    within(elapsed, 300, detail)
}

fn criterion_8() -> Verdicts {
    let zs = [10u32, 20, 40, 80];
    let (table, _) = tf_energy_scaling(&PhysicalConstants::atomic(1), &zs).map_err(|e| e.to_string())?;
    let energies: Vec<f64> = table.column("energy").unwrap().iter().map(|e| -e).collect();
    if energies.iter().any(|&e| e <= 0.0) {
        return Err(format!("non-negative energy in {energies:?}"));
    }
    let xs: Vec<f64> = zs.iter().map(|&z| z as f64).collect();
    let slope = log_log_slope(&xs, &energies);
    let rel = (slope / (7.0 / 3.0) - 1.0).abs();
    let detail = format!("exponent {slope:.6} (rel {rel:.1e}), E(10)/10^(7/3) = {:.4}", -energies[0] / 10f64.powf(7.0 / 3.0));
    if rel < TF_EXPONENT_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_9() -> Verdicts {
    let k = PhysicalConstants::new(1.0, 1.0, 1.0, 1).map_err(|e| e.to_string())?;
    let grid = Grid::line(-2.0, 0.05, 81);
    let harmonic = PotentialField::from_fn(grid, |x| 0.5 * x * x).map_err(|e| e.to_string())?;
    let flat = PotentialField::from_fn(grid, |_| 0.3).map_err(|e| e.to_string())?;
    let times: Vec<f64> = (0..21).map(|i| 1e-3 * 100f64.powf(i as f64 / 20.0)).collect();
    let mut devs = Vec::new();
    let mut flat_worst = 0.0f64;
    for &t in &times {
        for idx in [10, 40, 50] {
            let f = wigner_kirkwood_factor(&flat, idx, t, &k).map_err(|e| e.to_string())?;
            flat_worst = flat_worst.max((f - 1.0).norm());
        }
        devs.push((wigner_kirkwood_factor(&harmonic, 50, t, &k).map_err(|e| e.to_string())? - 1.0).norm());
    }
    let slope = log_log_slope(&times, &devs);
    let detail = format!("harmonic exponent {slope:.4}, constant-V max |factor - 1| = {flat_worst:.1e}");
    if (slope - 2.0).abs() < WK_EXPONENT_TOL && flat_worst == 0.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn declab(config: &Path, out: &Path, jobs: &str) -> std::io::Result<(Option<i32>, String)> {
    let o = Command::new(env!("CARGO_BIN_EXE_declab"))
        .args(["run", "--check", "--jobs", jobs, "--output"])
        .arg(out)
        .arg(config)
        .output()?;
    Ok((o.status.code(), String::from_utf8_lossy(&o.stderr).into_owned()))
}

fn criterion_10() -> Verdicts {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let configs_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut configs: Vec<PathBuf> = std::fs::read_dir(&configs_dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "conf"))
        .collect();
    configs.sort();
    let mut failures = Vec::new();
    for cfg in &configs {
        let out = dir.path().join(cfg.file_name().unwrap()).with_extension("csv");
        let (code, stderr) = declab(cfg, &out, "2").map_err(|e| e.to_string())?;
        if code != Some(0) {
            failures.push(format!("{} exited {code:?}: {}", cfg.display(), stderr.trim()));
        }
    }
    let mut identical = 0;
    for name in ["spin-gaussian-random.conf", "dicke-exact-number-g0.3.conf", "spin-hypotheses-ising.conf"] {
        let cfg = configs_dir.join(name);
        let first = std::fs::read(dir.path().join(name).with_extension("csv")).unwrap_or_default();
        let again = dir.path().join("again.csv");
        declab(&cfg, &again, "1").map_err(|e| e.to_string())?;
        if !first.is_empty() && std::fs::read(&again).unwrap_or_default() == first {
            identical += 1;
        } else {
            failures.push(format!("{name}: rerun differs"));
        }
    }
    let detail = format!("{} bundled configs, {identical}/3 reruns byte-identical", configs.len());
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", failures.join("; ")))
    }
}

fn main() {
    declab_core::qcore::pin_sequential_linear_algebra();
    let criteria: [(u32, fn() -> Verdicts); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {n}: PASS {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL {detail}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
