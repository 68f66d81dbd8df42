//! Config-driven experiments: each is a pure function from an
//! [`ExperimentConfig`] to a [`DecayReport`].

pub mod config;
mod convergence;
pub mod report;
mod schrodinger;
mod wave;

use faer::{c64, MatRef};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operators::HermitianOperator;

pub use config::{
    parse_config, parse_config_str, ConvergenceQuantity, Equation, ExperimentConfig, ExperimentKind, InitialData,
    InitialKind, WaveDirection,
};
pub use convergence::run_convergence_study;
pub use report::{cumulative_trapezoid, fmt_f64, trapezoid, Check, DecayReport, Monotonicity};
pub use schrodinger::{run_certificates, run_commutator, run_evolution, run_local_decay, run_monotonic_decay};
pub use wave::{run_ell_sweep, run_wave_local_decay};

/// Relative cutoff `e^{-18}` defining the support of initial data and of its
/// Fourier content.
pub const SUPPORT_CUTOFF: f64 = 1.522_997_974_471_263e-8;
/// Safety factor in `T_safe`.
pub const T_SAFE_FACTOR: f64 = 0.8;
/// Relative per-step increment that counts as a monotonicity violation.
pub const MONOTONE_TOL: f64 = 1e-6;

/// Dispatches on `experiment.kind`.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: usize) -> Result<DecayReport> {
    match cfg.kind {
        ExperimentKind::MonotonicDecay => run_monotonic_decay(cfg),
        ExperimentKind::LocalDecay => run_local_decay(cfg),
        ExperimentKind::WaveLocalDecay => run_wave_local_decay(cfg),
        ExperimentKind::EllSweep => run_ell_sweep(cfg, jobs),
        ExperimentKind::Commutator => run_commutator(cfg),
        ExperimentKind::Certify => run_certificates(cfg),
        ExperimentKind::Evolve => run_evolution(cfg),
    }
}

/// Runs the experiment once per value of `sweep.key`, or the internal
/// ℓ-sweep when no key is given.
pub fn run_sweep(cfg: &ExperimentConfig, jobs: usize) -> Result<DecayReport> {
    if cfg.sweep_key.is_empty() {
        if cfg.kind == ExperimentKind::EllSweep {
            return run_ell_sweep(cfg, jobs);
        }
        return Err(Error::Config(
            "sweep needs `sweep.key` and `sweep.values`, or experiment.kind=ell_sweep".into(),
        ));
    }
    let members: Vec<ExperimentConfig> = cfg
        .sweep_values
        .iter()
        .map(|v| {
            cfg.with_overrides(&[
                format!("{}={v}", cfg.sweep_key),
                "sweep.key=".into(),
                "sweep.values=".into(),
            ])
        })
        .collect::<Result<_>>()?;
    let results = parallel_map(&members, jobs, |m| run_experiment(m, 1));
    let mut rep = DecayReport::new("sweep", &cfg.hash(), &cfg.grid());
    let mut names: Vec<String> = Vec::new();
    for r in results.iter().flatten() {
        for (k, _) in r.integrals.iter().chain(&r.bounds).chain(&r.constants) {
            if !names.contains(k) {
                names.push(k.clone());
            }
        }
    }
    let mut cols = vec!["member".to_string(), "value".to_string(), "passed".to_string()];
    cols.extend(names.iter().cloned());
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    rep.set_columns(&col_refs);
    for (i, (value, res)) in cfg.sweep_values.iter().zip(results).enumerate() {
        let tag = format!("{}={value}", cfg.sweep_key);
        let res = res.map_err(|e| Error::Config(format!("sweep member {tag}: {e}")))?;
        let mut row = vec![
            i as f64,
            value.parse().unwrap_or(f64::NAN),
            if res.passed() { 1.0 } else { 0.0 },
        ];
        row.extend(names.iter().map(|n| res.lookup(n).unwrap_or(f64::NAN)));
        rep.push_row(row);
        for mut c in res.certificates.clone() {
            c.params = format!("{tag} {}", c.params);
            rep.certificates.push(c);
        }
        let failed: Vec<&str> = res
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        rep.check(&format!("member[{tag}]"), failed.is_empty(), failed.join(" "));
        if res.boundary_contaminated {
            rep.boundary_contaminated = true;
            rep.flag("boundary-contaminated");
        }
        for f in &res.flags {
            rep.flag(f);
        }
    }
    Ok(rep)
}

/// Order-preserving map over `items` on up to `jobs` threads.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let done = std::sync::Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                done.lock().expect("worker panicked").push((i, r));
            });
        }
    });
    for (i, r) in done.into_inner().expect("worker panicked") {
        slots[i] = Some(r);
    }
    slots.into_iter().map(|r| r.expect("every item mapped")).collect()
}

/// `(x_lo, x_hi)` of the points where `|v| >= SUPPORT_CUTOFF · max|v|`.
pub fn support_interval(grid: &Grid, magnitude: &[f64]) -> Option<(f64, f64)> {
    let top = magnitude.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return None;
    }
    let cut = SUPPORT_CUTOFF * top;
    let first = magnitude.iter().position(|&m| m >= cut)?;
    let last = magnitude.iter().rposition(|&m| m >= cut)?;
    Some((grid.x(first), grid.x(last)))
}

/// Largest `|k|` on the discrete frequency grid `2πm/(nh)` carrying at least
/// `SUPPORT_CUTOFF` of the peak Fourier magnitude.
pub fn max_wavenumber(grid: &Grid, psi: &[c64]) -> f64 {
    let n = grid.n();
    let h = grid.h();
    let spectrum: Vec<(f64, f64)> = (0..n)
        .map(|m| {
            let shifted = m as i64 - (n / 2) as i64;
            let k = 2.0 * std::f64::consts::PI * shifted as f64 / (n as f64 * h);
            let step = c64::new(0.0, -k * h).exp();
            let mut phase = c64::new(0.0, -k * grid.x_min()).exp();
            let mut acc = c64::new(0.0, 0.0);
            for &z in psi {
                acc += z * phase;
                phase *= step;
            }
            (k, acc.norm())
        })
        .collect();
    let top = spectrum.iter().map(|s| s.1).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    spectrum
        .iter()
        .filter(|s| s.1 >= SUPPORT_CUTOFF * top)
        .map(|s| s.0.abs())
        .fold(0.0, f64::max)
}

/// `0.8 · dist(support ψ₀, boundary) / (2 max|k|)`; infinite for zero data.
pub fn t_safe_schrodinger(grid: &Grid, psi0: &[c64]) -> f64 {
    let mags: Vec<f64> = psi0.iter().map(|z| z.norm()).collect();
    let Some((lo, hi)) = support_interval(grid, &mags) else {
        return f64::INFINITY;
    };
    let dist = (lo - grid.x_min()).min(grid.x_max() - hi).max(0.0);
    let vmax = 2.0 * max_wavenumber(grid, psi0);
    if vmax == 0.0 {
        return f64::INFINITY;
    }
    T_SAFE_FACTOR * dist / vmax
}

/// For unit-speed waves: `0.8 ·` the shortest path from the data support to
/// a wall and back into `window`.
pub fn t_safe_wave(grid: &Grid, f0: &[f64], g0: &[f64], window: (f64, f64)) -> f64 {
    let mags: Vec<f64> = f0.iter().zip(g0).map(|(a, b)| a.abs().max(b.abs())).collect();
    let Some((lo, hi)) = support_interval(grid, &mags) else {
        return f64::INFINITY;
    };
    let left = (lo - grid.x_min()).max(0.0) + (window.0 - grid.x_min()).max(0.0);
    let right = (grid.x_max() - hi).max(0.0) + (grid.x_max() - window.1).max(0.0);
    T_SAFE_FACTOR * left.min(right)
}

/// Resolves `time.T`: explicit value, else `T_safe`.
pub(crate) fn horizon(cfg: &ExperimentConfig, t_safe: f64, rep: &mut DecayReport) -> Result<f64> {
    rep.constant("T_safe", t_safe);
    let t = match cfg.time_t {
        Some(t) => t,
        None if t_safe.is_finite() && t_safe > 0.0 => t_safe,
        None => {
            return Err(Error::Config(format!(
                "key `time.T`: must be set explicitly, T_safe = {t_safe} is not usable"
            )))
        }
    };
    rep.constant("T", t);
    if t > t_safe * (1.0 + 1e-12) {
        rep.boundary_contaminated = true;
        rep.flag("boundary-contaminated");
    }
    Ok(t)
}

/// `h <ψ_k, B ψ_k>` for every column of `states`.
pub fn column_forms(op: &HermitianOperator, states: MatRef<'_, c64>) -> Vec<f64> {
    let bs = op.times_mat(states);
    let h = op.grid().h();
    (0..states.ncols())
        .map(|j| {
            h * (0..states.nrows())
                .map(|i| (states[(i, j)].conj() * bs[(i, j)]).re)
                .sum::<f64>()
        })
        .collect()
}

/// `h uᵀ B u` per column for real states and a real symmetric `B`.
pub fn real_column_forms(op: MatRef<'_, f64>, states: MatRef<'_, f64>, h: f64) -> Vec<f64> {
    let bs = op * states;
    (0..states.ncols())
        .map(|j| h * (0..states.nrows()).map(|i| states[(i, j)] * bs[(i, j)]).sum::<f64>())
        .collect()
}

/// `h Σ w_i |u_ij|²` per column.
pub fn diagonal_column_forms(weight: &[f64], states: MatRef<'_, f64>, h: f64) -> Vec<f64> {
    (0..states.ncols())
        .map(|j| {
            h * (0..states.nrows())
                .map(|i| weight[i] * states[(i, j)].powi(2))
                .sum::<f64>()
        })
        .collect()
}

pub(crate) fn column(m: MatRef<'_, c64>, j: usize) -> Vec<c64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

pub(crate) fn real_column(m: MatRef<'_, f64>, j: usize) -> Vec<f64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

/// `(πw²)^{-1/4} e^{-(x-x₀)²/2w² + ik₀x}`, times `scale`.
pub fn gaussian_state(grid: &Grid, x0: f64, width: f64, k0: f64, scale: f64) -> Vec<c64> {
    let norm = (std::f64::consts::PI * width * width).powf(-0.25) * scale;
    grid.points()
        .iter()
        .map(|&x| c64::new(0.0, k0 * x).exp() * (norm * (-(x - x0).powi(2) / (2.0 * width * width)).exp()))
        .collect()
}

/// Central difference `(f_{j+1} - f_{j-1}) / 2h` with zero walls.
pub fn central_difference(grid: &Grid, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let at = |j: isize| if j < 0 || j as usize >= n { 0.0 } else { f[j as usize] };
    (0..n as isize)
        .map(|j| (at(j + 1) - at(j - 1)) / (2.0 * grid.h()))
        .collect()
}

/// Picks column `mode` of a real eigenvector matrix, normalized in `h`-weighted L².
pub(crate) fn eigenmode(grid: &Grid, vectors: MatRef<'_, c64>, mode: usize) -> Vec<c64> {
    let s = grid.h().sqrt();
    (0..vectors.nrows()).map(|i| vectors[(i, mode)] / s).collect()
}

pub(crate) fn zeros_c(n: usize) -> Vec<c64> {
    vec![c64::new(0.0, 0.0); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn cutoff_is_exp_minus_18() {
        assert!((SUPPORT_CUTOFF - (-18.0f64).exp()).abs() < 1e-22);
    }

    #[test]
    fn gaussian_t_safe() {
        let g = make_grid(1024, 60.0).unwrap();
        let psi = gaussian_state(&g, 10.0, 1.0, -2.0, 1.0);
        let (lo, hi) = support_interval(&g, &psi.iter().map(|z| z.norm()).collect::<Vec<_>>()).unwrap();
        assert!((lo - 4.0).abs() < 0.2 && (hi - 16.0).abs() < 0.2, "{lo} {hi}");
        let k = max_wavenumber(&g, &psi);
        assert!((k - 8.0).abs() < 0.3, "{k}");
        let t = t_safe_schrodinger(&g, &psi);
        assert!((t - 2.2).abs() < 0.1, "{t}");
        assert_eq!(t_safe_schrodinger(&g, &zeros_c(1024)), f64::INFINITY);
    }

    #[test]
    fn parallel_map_keeps_order() {
        let items: Vec<u32> = (0..37).collect();
        let out = parallel_map(&items, 4, |x| x * x);
        assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
    }
}
