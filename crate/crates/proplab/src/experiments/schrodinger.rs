//! Schrödinger-flow experiments and the certificate battery.

use faer::c64;

use super::report::{cumulative_trapezoid, fmt_f64, trapezoid, DecayReport, Monotonicity};
use super::{
    column, column_forms, eigenmode, gaussian_state, horizon, t_safe_schrodinger, zeros_c, Equation, ExperimentConfig,
    InitialKind, MONOTONE_TOL,
};
use crate::certify::{
    self, check_analytic_repulsive, nonnegative_hamiltonian, resolved_min_eig_certificate, RESOLVED_BAND,
};
use crate::error::{Error, Result};
use crate::evolve::{uniform_times, ExactSchrodinger};
use crate::grid::Grid;
use crate::operators::{
    self, bracket_x_op, dilation_op, eigendecompose, incoming_projection, laplacian_op, momentum_op,
    outgoing_projection, position_op, HermitianOperator, SpectralDecomposition,
};
use crate::potentials::{self, PotentialSpec};

pub(super) fn schrodinger_initial(cfg: &ExperimentConfig, grid: &Grid, h: &SpectralDecomposition) -> Result<Vec<c64>> {
    let d = &cfg.initial;
    let psi = match d.kind {
        InitialKind::Gaussian => gaussian_state(grid, d.x0, d.width, d.k0, 1.0),
        InitialKind::Eigenmode => eigenmode(grid, h.eigenvectors(), d.mode),
        InitialKind::Zero => zeros_c(grid.n()),
        InitialKind::EllPacket => {
            return Err(Error::Config("key `initial.kind`: ell_packet is wave data".into()));
        }
    };
    let factor = c64::from_polar(d.scale, d.phase);
    Ok(psi.into_iter().map(|z| z * factor).collect())
}

fn dilation(grid: &Grid) -> Result<SpectralDecomposition> {
    eigendecompose(&dilation_op(grid)?)
}

fn norms(grid: &Grid, states: faer::MatRef<'_, c64>) -> Vec<f64> {
    (0..states.ncols())
        .map(|j| grid.h() * (0..states.nrows()).map(|i| states[(i, j)].norm_sqr()).sum::<f64>())
        .collect()
}

/// Records `Ṽ_β >= 0`, or a failed check when β is outside the continuation range.
fn hypothesis(rep: &mut DecayReport, spec: &PotentialSpec, beta: f64, grid: &Grid, bulk: f64) -> Result<bool> {
    if beta > spec.beta_max() {
        rep.check(
            "v_beta_nonnegative",
            false,
            format!("beta={beta} exceeds beta_max={}", spec.beta_max()),
        );
        return Ok(false);
    }
    let c = certify::repulsive_hypothesis(spec, beta, grid, bulk)?;
    let ok = c.passed;
    rep.certificate(c);
    Ok(ok)
}

/// Lower-bound weight `2(1-ε) g p² g + sech Ṽ_β sech` for the shifted tanh.
fn lower_bound_weight(
    a: &SpectralDecomposition,
    spec: &PotentialSpec,
    r: f64,
    shift: f64,
    epsilon: f64,
) -> Result<HermitianOperator> {
    let grid = *a.grid();
    let g = operators::g_observable(a, r, shift)?;
    let glg = laplacian_op(&grid).sandwich(&g)?.scaled(2.0 * (1.0 - epsilon));
    if spec.is_zero() {
        return Ok(glg);
    }
    let vt = potentials::v_beta_samples(spec, &grid, 1.0 / r)?;
    let s = operators::sech_observable(a, r, shift)?;
    let svs = HermitianOperator::diagonal(grid, &vt, "V_beta")?.sandwich(&s)?;
    glg.add_scaled(&svs, 1.0)
}

/// Monotone decay of `m(t) = <ψ(t), F⁻_M ψ(t)>` and the integrated
/// lower-bound weight against `2 m(0)`.
pub fn run_monotonic_decay(cfg: &ExperimentConfig) -> Result<DecayReport> {
    let grid = cfg.grid();
    let mut rep = DecayReport::new("monotonic_decay", &cfg.hash(), &grid);
    let spec = &cfg.potential;
    let beta = cfg.beta_value();
    if !hypothesis(&mut rep, spec, beta, &grid, cfg.bulk_fraction)? {
        rep.flag("hypothesis-violated");
    }
    let h = potentials::hamiltonian(&grid, spec)?;
    let prop = ExactSchrodinger::new(&h)?;
    let psi0 = schrodinger_initial(cfg, &grid, prop.decomposition())?;
    let t_end = horizon(cfg, t_safe_schrodinger(&grid, &psi0), &mut rep)?;
    let times = uniform_times(t_end, cfg.time_steps);
    let states = prop.trajectory(&psi0, &times)?;

    let a = dilation(&grid)?;
    let fm = incoming_projection(&a, cfg.m_threshold, cfg.r)?;
    let q = lower_bound_weight(&a, spec, cfg.r, cfg.m_threshold, cfg.epsilon)?;
    let m = column_forms(&fm, states.as_ref());
    let integrand = column_forms(&q, states.as_ref());
    let norm = norms(&grid, states.as_ref());
    let running = cumulative_trapezoid(&times, &integrand);

    rep.set_columns(&["t", "m", "integrand", "integral", "norm"]);
    for k in 0..times.len() {
        rep.push_row(vec![times[k], m[k], integrand[k], running[k], norm[k]]);
    }
    let mono = Monotonicity::of(&m, MONOTONE_TOL);
    rep.check(
        "monotone",
        mono.violations == 0,
        format!("violations={} worst={}", mono.violations, fmt_f64(mono.worst_increment)),
    );
    rep.monotonicity = Some(mono);
    let integral = trapezoid(&times, &integrand);
    let bound = 2.0 * m[0];
    rep.integral("lower_bound_weight", integral);
    rep.bound("two_m0", bound);
    rep.check(
        "integral_bound",
        integral <= bound * (1.0 + 1e-2),
        format!("{} <= {}", fmt_f64(integral), fmt_f64(bound * (1.0 + 1e-2))),
    );
    rep.constant("sharp_constant", if m[0] > 0.0 { integral / m[0] } else { 0.0 });
    rep.constant("m0", m[0]);
    rep.constant("m_final", m[m.len() - 1]);
    let tanh = operators::tanh_observable(&a, cfg.r)?;
    rep.constant("tanh_expectation_t0", grid.h() * tanh.quadratic_form(&psi0));
    rep.constant(
        "norm_drift",
        norm.iter().map(|x| (x - norm[0]).abs()).fold(0.0, f64::max),
    );
    rep.note(
        "weight",
        "2(1-epsilon) g p^2 g + sech V_beta sech at shift M, beta = 1/R",
    );
    Ok(rep)
}

/// Weighted local decay for outgoing, incoming and combined weights.
pub fn run_local_decay(cfg: &ExperimentConfig) -> Result<DecayReport> {
    let grid = cfg.grid();
    let mut rep = DecayReport::new("local_decay", &cfg.hash(), &grid);
    let spec = &cfg.potential;
    let beta = cfg.beta_value();
    if beta <= spec.beta_max() {
        rep.certificate(check_analytic_repulsive(spec, beta, &grid, cfg.bulk_fraction)?);
    } else {
        rep.check(
            "analytic_repulsive",
            false,
            format!("beta={beta} exceeds beta_max={}", spec.beta_max()),
        );
    }
    let h = potentials::hamiltonian(&grid, spec)?;
    rep.certificate(nonnegative_hamiltonian(&h)?);
    if !rep.passed() {
        rep.flag("hypothesis-violated");
    }
    let prop = ExactSchrodinger::new(&h)?;
    let psi0 = schrodinger_initial(cfg, &grid, prop.decomposition())?;
    let t_end = horizon(cfg, t_safe_schrodinger(&grid, &psi0), &mut rep)?;
    let times = uniform_times(t_end, cfg.time_steps);
    let states = prop.trajectory(&psi0, &times)?;

    let a = dilation(&grid)?;
    let (r, m) = (cfg.r, cfg.m_threshold);
    let bracket = |l: f64| (1.0 + l * l).sqrt();
    let plus = a.apply_function(
        move |l| bracket(l) * operators::smooth_step(l, m, operators::Direction::Above, r).powi(2),
        "<A> (F+)^2",
    )?;
    let minus = a.apply_function(
        move |l| bracket(l) * operators::smooth_step(l, -m, operators::Direction::Below, r).powi(2),
        "<A> (F-)^2",
    )?;
    let abr = a.apply_function(bracket, "<A>")?;
    let w = bracket_x_op(&grid, -cfg.sigma - 1.0);
    let wc = bracket_x_op(&grid, -1.0 - cfg.epsilon);
    let q_plus = plus.sandwich(&w)?;
    let q_minus = minus.sandwich(&w)?;
    let q_comb = abr.sandwich(&wc)?;

    let out = column_forms(&q_plus, states.as_ref());
    let inc = column_forms(&q_minus, states.as_ref());
    let comb = column_forms(&q_comb, states.as_ref());
    let norm = norms(&grid, states.as_ref());
    let (c_out, c_inc, c_comb) = (
        cumulative_trapezoid(&times, &out),
        cumulative_trapezoid(&times, &inc),
        cumulative_trapezoid(&times, &comb),
    );
    rep.set_columns(&["t", "norm", "outgoing", "incoming", "combined"]);
    for k in 0..times.len() {
        rep.push_row(vec![times[k], norm[k], out[k], inc[k], comb[k]]);
    }
    let n0 = norm[0];
    let ratio = |x: f64| if n0 > 0.0 { x / n0 } else { 0.0 };
    let last = times.len() - 1;
    let half = last / 2;
    for (name, c) in [("outgoing", &c_out), ("incoming", &c_inc), ("combined", &c_comb)] {
        rep.integral(name, c[last]);
        let sup = c.iter().map(|&v| ratio(v)).fold(0.0, f64::max);
        rep.constant(&format!("{name}_ratio"), ratio(c[last]));
        rep.constant(&format!("{name}_running_sup"), sup);
        rep.constant(
            &format!("{name}_plateau"),
            if c[half] > 0.0 { c[last] / c[half] } else { 1.0 },
        );
        rep.check(
            &format!("{name}_finite"),
            ratio(c[last]).is_finite(),
            fmt_f64(ratio(c[last])),
        );
    }
    rep.bound("initial_norm_sq", n0);

    let fm = incoming_projection(&a, m, r)?;
    let ws = bracket_x_op(&grid, -cfg.sigma);
    let pointwise = fm
        .times(&fm)
        .and_then(|f2| HermitianOperator::from_matrix(grid, f2, "(F-)^2"))?;
    let pointwise = pointwise.sandwich(&ws)?;
    let psi_t = column(states.as_ref(), last);
    rep.constant(
        "incoming_pointwise_T",
        ratio(grid.h() * pointwise.quadratic_form(&psi_t)),
    );
    rep.note("incoming_pointwise_exponent", "2");
    Ok(rep)
}

fn packet_forms(op: &HermitianOperator, packets: &[Vec<c64>]) -> Vec<f64> {
    packets.iter().map(|v| op.quadratic_form(v)).collect()
}

/// Direct `i[H, tanh(A/R)]` against both closed forms of `g²`.
pub fn run_commutator(cfg: &ExperimentConfig) -> Result<DecayReport> {
    let grid = cfg.grid();
    let mut rep = DecayReport::new("commutator", &cfg.hash(), &grid);
    let spec = &cfg.potential;
    let (direct, a) = direct_commutator(&grid, spec, cfg.r)?;
    rep.certificate(resolved_min_eig_certificate(
        &direct,
        cfg.commutator_bulk,
        RESOLVED_BAND,
    )?);
    if !operators::is_supercritical(cfg.r) {
        rep.note("closed_form", "skipped: R <= 2/pi");
        return Ok(rep);
    }
    let theory = certify::theoretical_commutator(&a, spec, cfg.r)?;
    let cmp = certify::compare_commutators(&direct, &theory, cfg.commutator_bulk)?;
    rep.constant("relative_difference", cmp.relative_difference);
    rep.constant("theory_norm", cmp.theory_norm);
    let printed = printed_commutator(&a, spec, cfg.r)?;
    let cmp_p = certify::compare_commutators(&direct, &printed, cfg.commutator_bulk)?;
    rep.constant("relative_difference_printed", cmp_p.relative_difference);

    let l = grid.half_width();
    let centers: Vec<f64> = (-2..=2).map(|k| k as f64 * 0.1 * l).collect();
    let momenta = [-1.0, 0.0, 1.0];
    let width = 0.05 * l;
    let packets = certify::gaussian_packets(&grid, &centers, width, &momenta);
    let d = packet_forms(&direct, &packets);
    let t = packet_forms(&theory, &packets);
    let p = packet_forms(&printed, &packets);
    rep.set_columns(&["center", "momentum", "direct", "addition_form", "printed_form"]);
    let mut worst: f64 = 0.0;
    let mut k = 0;
    for &c in &centers {
        for &mo in &momenta {
            rep.push_row(vec![c, mo, d[k], t[k], p[k]]);
            worst = worst.max((d[k] - t[k]).abs() / d[k].abs().max(1e-300));
            k += 1;
        }
    }
    rep.constant("packet_worst_relative_error", worst);
    rep.constant("g2_addition_at_0", operators::g_squared(0.0, cfg.r));
    rep.constant("g2_printed_at_0", operators::g_squared_printed(0.0, cfg.r));
    Ok(rep)
}

pub(super) fn direct_commutator(
    grid: &Grid,
    spec: &PotentialSpec,
    r: f64,
) -> Result<(HermitianOperator, SpectralDecomposition)> {
    let h = potentials::hamiltonian(grid, spec)?;
    let a = dilation(grid)?;
    let tanh = operators::tanh_observable(&a, r)?;
    Ok((certify::commutator(&h, &tanh)?, a))
}

/// `2 P g²(A/R) P` with the `2 cosh(2/R)` denominator, plus the potential term.
fn printed_commutator(a: &SpectralDecomposition, spec: &PotentialSpec, r: f64) -> Result<HermitianOperator> {
    let grid = *a.grid();
    let g2 = a.apply_function(move |l| operators::g_squared_printed(l, r), "g2 printed")?;
    let kinetic = g2.sandwich(&momentum_op(&grid))?.scaled(2.0);
    if spec.is_zero() {
        return Ok(kinetic);
    }
    let vt = potentials::v_beta_samples(spec, &grid, 1.0 / r)?;
    let s = operators::sech_observable(a, r, 0.0)?;
    let svs = HermitianOperator::diagonal(grid, &vt, "V_beta")?.sandwich(&s)?;
    kinetic.add_scaled(&svs, 1.0)
}

/// The certificate battery of the `certify` command.
pub fn run_certificates(cfg: &ExperimentConfig) -> Result<DecayReport> {
    let grid = cfg.grid();
    let mut rep = DecayReport::new("certify", &cfg.hash(), &grid);
    let spec = &cfg.potential;
    let (direct, a) = direct_commutator(&grid, spec, cfg.r)?;
    let mut c = resolved_min_eig_certificate(&direct, cfg.commutator_bulk, RESOLVED_BAND)?;
    c.name = "commutator_tanh".into();
    c.params = format!("R={} {} {}", cfg.r, spec.label(), c.params);
    rep.certificate(c);
    if operators::is_supercritical(cfg.r) && (spec.is_zero() || 1.0 / cfg.r <= spec.beta_max()) {
        let theory = certify::theoretical_commutator(&a, spec, cfg.r)?;
        let cmp = certify::compare_commutators(&direct, &theory, cfg.commutator_bulk)?;
        rep.constant("commutator_relative_difference", cmp.relative_difference);
    }
    let beta = cfg.beta_value();
    if beta <= spec.beta_max() {
        rep.certificate(check_analytic_repulsive(spec, beta, &grid, cfg.bulk_fraction)?);
    } else {
        rep.note(
            "analytic_repulsive",
            format!("skipped: beta={beta} exceeds beta_max={}", spec.beta_max()),
        );
    }
    let h = potentials::hamiltonian(&grid, spec)?;
    rep.certificate(nonnegative_hamiltonian(&h)?);
    let lb = certify::uncertainty_lemma_b(&grid, cfg.b, cfg.sigma, cfg.bulk_fraction)?;
    if let Some(b) = lb.smallest_passing_b {
        rep.constant("lemma_b_smallest_passing_b", b);
    }
    rep.certificate(lb.certificate);
    rep.certificate(certify::uncertainty_interval(
        &grid,
        1.0,
        (-1.0, 1.0),
        cfg.bulk_fraction,
    )?);
    rep.certificate(certify::uncertainty_lemma_a(
        &a,
        cfg.lemma_a_r,
        cfg.epsilon,
        cfg.bulk_fraction,
    )?);
    Ok(rep)
}

/// Plain evolution with conservation diagnostics.
pub fn run_evolution(cfg: &ExperimentConfig) -> Result<DecayReport> {
    if cfg.equation == Equation::Wave {
        return super::wave::run_wave_evolution(cfg);
    }
    let grid = cfg.grid();
    let mut rep = DecayReport::new("evolve", &cfg.hash(), &grid);
    let h = potentials::hamiltonian(&grid, &cfg.potential)?;
    let prop = ExactSchrodinger::new(&h)?;
    let psi0 = schrodinger_initial(cfg, &grid, prop.decomposition())?;
    let t_end = horizon(cfg, t_safe_schrodinger(&grid, &psi0), &mut rep)?;
    let times = uniform_times(t_end, cfg.time_steps);
    let states = prop.trajectory(&psi0, &times)?;
    let a = dilation(&grid)?;
    let tanh = operators::tanh_observable(&a, cfg.r)?;
    let norm = norms(&grid, states.as_ref());
    let xpos = column_forms(&position_op(&grid), states.as_ref());
    let th = column_forms(&tanh, states.as_ref());
    rep.set_columns(&["t", "norm", "position", "tanh_A"]);
    for k in 0..times.len() {
        rep.push_row(vec![times[k], norm[k], xpos[k], th[k]]);
    }
    let drift = norm.iter().map(|x| (x - norm[0]).abs()).fold(0.0, f64::max);
    let scale = norm[0].max(f64::MIN_POSITIVE);
    rep.constant("norm_drift", drift / scale);
    rep.check("norm_conservation", drift <= 1e-10 * scale, fmt_f64(drift / scale));
    // Heisenberg derivative at the middle sample against the commutator form
    let k = times.len() / 2;
    if k >= 1 && k + 1 < times.len() {
        let dt = times[k + 1] - times[k - 1];
        let fd = (th[k + 1] - th[k - 1]) / dt;
        let comm = certify::commutator(&h, &tanh)?;
        let exact = grid.h() * comm.quadratic_form(&column(states.as_ref(), k));
        rep.constant("heisenberg_fd", fd);
        rep.constant("heisenberg_commutator", exact);
        rep.constant("heisenberg_residual", (fd - exact).abs());
    }
    outgoing_projection(&a, cfg.m_threshold, cfg.r)
        .map(|fp| rep.constant("outgoing_T", column_forms(&fp, states.as_ref())[times.len() - 1]))?;
    Ok(rep)
}
