//! Wave-equation experiments: weighted local energy decay and the ℓ-sweep.

use faer::{c64, Mat};

use super::report::{cumulative_trapezoid, fmt_f64, DecayReport};
use super::{
    central_difference, diagonal_column_forms, horizon, parallel_map, real_column_forms, t_safe_wave, ExperimentConfig,
    InitialKind, WaveDirection,
};
use crate::certify::{check_analytic_repulsive, nonnegative_hamiltonian, Certificate};
use crate::error::{Error, Result};
use crate::evolve::{energy_of, heisenberg_bracket_i, uniform_times, WavePropagator, WaveState};
use crate::grid::Grid;
use crate::operators::{
    bracket_x_op, dilation_op, eigendecompose, momentum_op, smooth_step, Direction, HermitianOperator,
    SpectralDecomposition,
};
use crate::potentials::{self, PotentialKind, PotentialSpec};

/// Real wave data `(f₀, g₀)` from the initial-data descriptor.
pub(super) fn wave_initial(
    cfg: &ExperimentConfig,
    grid: &Grid,
    h: &SpectralDecomposition,
    ell: Option<u32>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = &cfg.initial;
    let xs = grid.points();
    let env = |x: f64| (-(x - d.x0).powi(2) / (2.0 * d.width * d.width)).exp();
    let f: Vec<f64> = match d.kind {
        InitialKind::Gaussian => xs.iter().map(|&x| env(x) * (d.k0 * x).cos()).collect(),
        InitialKind::Eigenmode => {
            let u = h
                .real_eigenvectors()
                .ok_or_else(|| Error::Evolution("wave data needs a real H".into()))?;
            let s = grid.h().sqrt();
            (0..grid.n()).map(|i| u[(i, d.mode)] / s).collect()
        }
        InitialKind::Zero => vec![0.0; grid.n()],
        InitialKind::EllPacket => {
            let l = ell.unwrap_or(cfg.schwarzschild_ell) as f64;
            let base = ell_base(&cfg.potential);
            let v0 = potentials::evaluate(base, 0.0)?;
            let vx = potentials::evaluate(base, d.x0)?;
            let k = l * (v0 - vx).max(0.0).sqrt();
            xs.iter().map(|&x| env(x) * (k * x).cos()).collect()
        }
    };
    let f: Vec<f64> = f.into_iter().map(|v| v * d.scale).collect();
    let g = match d.direction {
        WaveDirection::Rest => vec![0.0; grid.n()],
        WaveDirection::Right => central_difference(grid, &f).into_iter().map(|v| -v).collect(),
        WaveDirection::Left => central_difference(grid, &f),
    };
    Ok((f, g))
}

fn ell_base(spec: &PotentialSpec) -> &PotentialSpec {
    match spec.kind() {
        PotentialKind::ScaledRepulsive { base, .. } => base,
        _ => spec,
    }
}

/// `E((⟨p⟩⁻¹p) u₀)` for real data.
fn filtered_energy(grid: &Grid, v: &[f64], f0: &[f64], g0: &[f64]) -> Result<f64> {
    let pd = eigendecompose(&momentum_op(grid))?;
    let op = |u: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let z: Vec<c64> = u.iter().map(|&x| c64::new(x, 0.0)).collect();
        let w = pd.apply_to_vector(|p| p / (1.0 + p * p).sqrt(), &z)?;
        Ok((w.iter().map(|c| c.re).collect(), w.iter().map(|c| c.im).collect()))
    };
    let (fr, fi) = op(f0)?;
    let (gr, gi) = op(g0)?;
    Ok(energy_of(grid, v, &fr, &gr).value + energy_of(grid, v, &fi, &gi).value)
}

fn analytic_certificate(rep: &mut DecayReport, spec: &PotentialSpec, beta: f64, grid: &Grid, bulk: f64) -> Result<()> {
    if beta <= spec.beta_max() {
        rep.certificate(check_analytic_repulsive(spec, beta, grid, bulk)?);
    } else {
        rep.check(
            "analytic_repulsive",
            false,
            format!("beta={beta} exceeds beta_max={}", spec.beta_max()),
        );
    }
    Ok(())
}

/// Energy-weighted local decay for the wave equation.
pub fn run_wave_local_decay(cfg: &ExperimentConfig) -> Result<DecayReport> {
    let grid = cfg.grid();
    let mut rep = DecayReport::new("wave_local_decay", &cfg.hash(), &grid);
    let spec = &cfg.potential;
    analytic_certificate(&mut rep, spec, cfg.beta_value(), &grid, cfg.bulk_fraction)?;
    let h = potentials::hamiltonian(&grid, spec)?;
    rep.certificate(nonnegative_hamiltonian(&h)?);
    let hd = eigendecompose(&h)?;
    let prop = WavePropagator::from_decomposition(&hd)?;
    rep.constant("clamped_zero_modes", prop.clamped_modes() as f64);
    let (f0, g0) = wave_initial(cfg, &grid, &hd, None)?;
    if cfg.initial.kind == InitialKind::Eigenmode {
        rep.flag("eigenmode-data");
        rep.note(
            "eigenmode-data",
            "finite-grid artifact: the continuum operator has no eigenmodes",
        );
    }
    let t_end = horizon(
        cfg,
        t_safe_wave(&grid, &f0, &g0, (grid.x_min(), grid.x_max())),
        &mut rep,
    )?;
    let times = uniform_times(t_end, cfg.time_steps);
    let (u, ud) = prop.trajectory(&f0, &g0, &times)?;
    let v = potentials::samples(spec, &grid)?;
    let hh = grid.h();

    let energies: Vec<f64> = (0..times.len())
        .map(|j| {
            energy_of(
                &grid,
                &v,
                &super::real_column(u.as_ref(), j),
                &super::real_column(ud.as_ref(), j),
            )
            .value
        })
        .collect();
    let l2: Vec<f64> = diagonal_column_forms(&vec![1.0; grid.n()], u.as_ref(), hh)
        .into_iter()
        .map(f64::sqrt)
        .collect();

    let a = eigendecompose(&dilation_op(&grid)?)?;
    let (r, m) = (cfg.r, cfg.m_threshold);
    let w = bracket_x_op(&grid, -2.0);
    let weight = |dir: Direction, th: f64| -> Result<Mat<f64>> {
        let k = a.apply_function(
            move |l| (1.0 + l * l).sqrt() * smooth_step(l, th, dir, r).powi(2),
            "<A> F^2",
        )?;
        Ok(k.sandwich(&w)?.real_matrix())
    };
    let q_plus = weight(Direction::Above, m)?;
    let q_minus = weight(Direction::Below, -m)?;
    let i_plus = real_column_forms(q_plus.as_ref(), u.as_ref(), hh);
    let i_minus = real_column_forms(q_minus.as_ref(), u.as_ref(), hh);
    let ell = match spec.kind() {
        PotentialKind::Schwarzschild { ell, .. } => *ell,
        _ => 1,
    };
    let expo = if ell == 0 { -1.5 - cfg.delta } else { -0.5 - cfg.delta };
    let j2: Vec<f64> = grid.points().iter().map(|x| (1.0 + x * x).powf(2.0 * expo)).collect();
    let i_j = diagonal_column_forms(&j2, u.as_ref(), hh);

    rep.set_columns(&["t", "energy", "l2", "outgoing", "incoming", "weighted_J"]);
    for k in 0..times.len() {
        rep.push_row(vec![times[k], energies[k], l2[k], i_plus[k], i_minus[k], i_j[k]]);
    }
    let e0 = energies[0];
    let ep = filtered_energy(&grid, &v, &f0, &g0)?;
    rep.bound("energy", e0);
    rep.bound("energy_filtered", ep);
    let drift = energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
    if e0 > 0.0 {
        rep.constant("energy_drift", drift / e0);
        rep.check("energy_conservation", drift <= 1e-10 * e0, fmt_f64(drift / e0));
    }
    let last = times.len() - 1;
    let half = last / 2;
    let div = |x: f64, y: f64| if y > 0.0 { x / y } else { 0.0 };
    let rhs_j = (e0 * ep).sqrt();
    for (name, series, rhs) in [
        ("outgoing", &i_plus, e0),
        ("incoming", &i_minus, e0),
        ("weighted_J", &i_j, rhs_j),
    ] {
        let c = cumulative_trapezoid(&times, series);
        rep.integral(name, c[last]);
        rep.constant(&format!("{name}_constant"), div(c[last], rhs));
        rep.constant(&format!("{name}_constant_half"), div(c[half], rhs));
    }
    let growth = div(l2.iter().copied().fold(0.0, f64::max), l2[0]);
    rep.constant("l2_growth", growth);
    if growth > 2.0 {
        rep.flag("l2-growth");
    }
    // low-frequency part with the cutoff at 1/T
    let eps = 1.0 / t_end;
    let lf = |u: &[f64]| -> Result<Vec<f64>> {
        let z: Vec<c64> = u.iter().map(|&x| c64::new(x, 0.0)).collect();
        Ok(hd
            .apply_to_vector(|l| smooth_step(l, eps, Direction::Below, 0.05 * eps), &z)?
            .iter()
            .map(|c| c.re)
            .collect())
    };
    let e_low = energy_of(&grid, &v, &lf(&f0)?, &lf(&g0)?).value;
    rep.constant("low_frequency_rhs", e_low.sqrt() + l2[0]);
    Ok(rep)
}

struct EllResult {
    ell: u32,
    beta: f64,
    certificate: Certificate,
    integral: Option<f64>,
    energy: f64,
}

fn ell_member(cfg: &ExperimentConfig, grid: &Grid, ell: u32, t_end: Option<f64>) -> Result<(EllResult, f64)> {
    let beta = potentials::recommended_beta(ell, cfg.ell_beta0);
    let base = ell_base(&cfg.potential).clone();
    let spec = PotentialSpec::scaled(ell, base);
    let mut certificate = check_analytic_repulsive(&spec, beta, grid, cfg.bulk_fraction)?;
    certificate.name = format!("analytic_repulsive_ell{ell}");
    if !certificate.passed {
        return Ok((
            EllResult {
                ell,
                beta,
                certificate,
                integral: None,
                energy: 0.0,
            },
            f64::NAN,
        ));
    }
    let h = potentials::hamiltonian(grid, &spec)?;
    let hd = eigendecompose(&h)?;
    let prop = WavePropagator::from_decomposition(&hd)?;
    let (f0, g0) = wave_initial(cfg, grid, &hd, Some(ell))?;
    let v = potentials::samples(&spec, grid)?;
    let e = energy_of(grid, &v, &f0, &g0).value;
    if !(e > 0.0) {
        return Err(Error::Config("ell sweep initial data has zero energy".into()));
    }
    let s = e.sqrt();
    let f0: Vec<f64> = f0.iter().map(|x| x / s).collect();
    let g0: Vec<f64> = g0.iter().map(|x| x / s).collect();
    let r0 = cfg.ell_r0;
    let t_safe = t_safe_wave(grid, &f0, &g0, (-r0, r0));
    let t_end = t_end.unwrap_or(t_safe);
    let times = uniform_times(t_end, cfg.time_steps);
    let rows: Vec<usize> = (0..grid.n()).filter(|&j| grid.x(j).abs() <= r0).collect();
    let integral = if rows.is_empty() {
        0.0
    } else {
        let win = prop.window_trajectory(&f0, &g0, &times, rows[0]..rows[rows.len() - 1] + 1)?;
        let l2 = (ell as f64).powi(2);
        let dens = diagonal_column_forms(&vec![l2; rows.len()], win.as_ref(), grid.h());
        super::trapezoid(&times, &dens)
    };
    Ok((
        EllResult {
            ell,
            beta,
            certificate,
            integral: Some(integral),
            energy: 1.0,
        },
        t_safe,
    ))
}

/// `I(ℓ) = ∫ ‖F(|x| <= r₀) ℓ u‖² dt / E(u)` for `H = p² + ℓ²V`, one member per ℓ.
pub fn run_ell_sweep(cfg: &ExperimentConfig, jobs: usize) -> Result<DecayReport> {
    let grid = cfg.grid();
    let mut rep = DecayReport::new("ell_sweep", &cfg.hash(), &grid);
    let ells: Vec<u32> = cfg.ell_list.iter().copied().filter(|&l| l >= 2).collect();
    for &l in cfg.ell_list.iter().filter(|&&l| l < 2) {
        rep.note(&format!("ell_{l}"), "excluded: ln(ell) <= 0");
    }
    if ells.is_empty() {
        return Err(Error::Config("key `ell.list`: needs at least one ell >= 2".into()));
    }
    let results = parallel_map(&ells, jobs, |&l| ell_member(cfg, &grid, l, cfg.time_t));
    rep.set_columns(&["ell", "beta", "delta0", "integral", "integral_over_ln_ell"]);
    let mut ratios = Vec::new();
    let mut t_safe_min = f64::INFINITY;
    for res in results {
        let (r, t_safe) = res?;
        if t_safe.is_finite() {
            t_safe_min = t_safe_min.min(t_safe);
        }
        let delta0 = r.certificate.lambda_min;
        rep.certificate(r.certificate);
        match r.integral {
            Some(i) => {
                let ratio = i / (r.ell as f64).ln();
                ratios.push(ratio);
                rep.push_row(vec![r.ell as f64, r.beta, delta0, i / r.energy, ratio]);
            }
            None => {
                rep.note(&format!("ell_{}", r.ell), "aborted: certificate failed");
                rep.push_row(vec![r.ell as f64, r.beta, delta0, f64::NAN, f64::NAN]);
            }
        }
    }
    rep.constant("T_safe", t_safe_min);
    let t_used = cfg.time_t.unwrap_or(t_safe_min);
    rep.constant("T", t_used);
    if t_used > t_safe_min * (1.0 + 1e-12) {
        rep.boundary_contaminated = true;
        rep.flag("boundary-contaminated");
    }
    if ratios.is_empty() {
        rep.check("ell_bound", false, "no member completed");
        return Ok(rep);
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len();
    let median = if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    };
    let max = sorted[k - 1];
    rep.constant("ratio_max", max);
    rep.constant("ratio_median", median);
    rep.constant("max_over_median", max / median);
    rep.check(
        "ell_bound",
        max <= cfg.ell_slack * median,
        format!("max/median={} slack={}", fmt_f64(max / median), cfg.ell_slack),
    );
    Ok(rep)
}

/// Wave evolution with energy and Heisenberg-bracket diagnostics.
pub(super) fn run_wave_evolution(cfg: &ExperimentConfig) -> Result<DecayReport> {
    let grid = cfg.grid();
    let mut rep = DecayReport::new("evolve_wave", &cfg.hash(), &grid);
    let h = potentials::hamiltonian(&grid, &cfg.potential)?;
    let hd = eigendecompose(&h)?;
    let prop = WavePropagator::from_decomposition(&hd)?;
    let (f0, g0) = wave_initial(cfg, &grid, &hd, None)?;
    let t_end = horizon(
        cfg,
        t_safe_wave(&grid, &f0, &g0, (grid.x_min(), grid.x_max())),
        &mut rep,
    )?;
    let times = uniform_times(t_end, cfg.time_steps);
    let (u, ud) = prop.trajectory(&f0, &g0, &times)?;
    let v = potentials::samples(&cfg.potential, &grid)?;
    let ident = HermitianOperator::identity(grid);
    let xs = grid.points();
    let fx: Vec<f64> = xs.iter().map(|x| (-x * x / 16.0).exp()).collect();
    let fop = HermitianOperator::diagonal(grid, &fx, "exp(-x^2/16)")?;
    rep.set_columns(&["t", "energy", "l2", "heisenberg_identity", "heisenberg_fx"]);
    let mut worst_heis: f64 = 0.0;
    let mut energies = Vec::with_capacity(times.len());
    for (j, &t) in times.iter().enumerate() {
        let st = WaveState {
            u: super::real_column(u.as_ref(), j),
            u_dot: super::real_column(ud.as_ref(), j),
            t,
        };
        let e = energy_of(&grid, &v, &st.u, &st.u_dot).value;
        let l2 = (grid.h() * st.u.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let hi = heisenberg_bracket_i(&st, &ident);
        let hf = heisenberg_bracket_i(&st, &fop);
        worst_heis = worst_heis.max(hi.abs()).max(hf.abs());
        energies.push(e);
        rep.push_row(vec![t, e, l2, hi, hf]);
    }
    let e0 = energies[0];
    let drift = energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
    if e0 > 0.0 {
        rep.constant("energy_drift", drift / e0);
        rep.check("energy_conservation", drift <= 1e-10 * e0, fmt_f64(drift / e0));
    }
    rep.constant("heisenberg_max", worst_heis);
    rep.check(
        "heisenberg_real_symmetric",
        worst_heis <= 1e-12 * e0.max(1.0),
        fmt_f64(worst_heis),
    );
    Ok(rep)
}
