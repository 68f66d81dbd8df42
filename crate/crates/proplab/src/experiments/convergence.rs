//! Grid-refinement studies: the same quantity at `n, 2n, 4n, ...`.

use super::report::{fmt_f64, DecayReport};
use super::schrodinger::direct_commutator;
use super::{run_monotonic_decay, ConvergenceQuantity, ExperimentConfig};
use crate::certify::{self, check_analytic_repulsive, resolved_min_eig_certificate, RESOLVED_BAND};
use crate::error::{Error, Result};

/// Observed orders `ln(e_{k-1}/e_k) / ln(h_{k-1}/h_k)`.
pub fn observed_orders(h: &[f64], e: &[f64]) -> Vec<f64> {
    (1..h.len())
        .map(|k| (e[k - 1] / e[k]).ln() / (h[k - 1] / h[k]).ln())
        .collect()
}

/// Repeats the selected quantity on `levels` grids, doubling `grid.n` each
/// time; `levels` overrides `convergence.levels`.
pub fn run_convergence_study(cfg: &ExperimentConfig, levels: Option<usize>) -> Result<DecayReport> {
    let levels = levels.unwrap_or(cfg.convergence_levels);
    if levels < 2 {
        return Err(Error::Config("key `convergence.levels`: must be at least 2".into()));
    }
    let cfgs: Vec<ExperimentConfig> = (0..levels)
        .map(|k| cfg.with_overrides(&[format!("grid.n={}", cfg.grid_n << k)]))
        .collect::<Result<_>>()?;
    let mut rep = DecayReport::new("convergence", &cfg.hash(), &cfgs[levels - 1].grid());
    let hs: Vec<f64> = cfgs.iter().map(|c| c.grid().h()).collect();
    match cfg.convergence_quantity {
        ConvergenceQuantity::Commutator => {
            rep.set_columns(&["n", "h", "relative_difference", "margin", "norm"]);
            let mut errs = Vec::new();
            for (c, &h) in cfgs.iter().zip(&hs) {
                let grid = c.grid();
                let (direct, a) = direct_commutator(&grid, &c.potential, c.r)?;
                let theory = certify::theoretical_commutator(&a, &c.potential, c.r)?;
                let cmp = certify::compare_commutators(&direct, &theory, c.commutator_bulk)?;
                let mut cert = resolved_min_eig_certificate(&direct, c.commutator_bulk, RESOLVED_BAND)?;
                cert.name = format!("commutator_tanh_n{}", c.grid_n);
                rep.push_row(vec![
                    c.grid_n as f64,
                    h,
                    cmp.relative_difference,
                    cert.margin,
                    cert.operator_norm(),
                ]);
                errs.push(cmp.relative_difference);
                rep.certificate(cert);
            }
            let orders = observed_orders(&hs, &errs);
            let last = *orders.last().expect("two levels");
            for (k, o) in orders.iter().enumerate() {
                rep.constant(&format!("order_{}", k + 1), *o);
            }
            rep.constant("observed_order", last);
            rep.check(
                "order",
                (last - 2.0).abs() <= 0.3,
                format!("observed={}", fmt_f64(last)),
            );
            let finest = errs[levels - 1];
            rep.constant("finest_difference", finest);
            rep.check("finest_difference", finest <= 1e-2, fmt_f64(finest));
        }
        ConvergenceQuantity::Monotonicity => {
            rep.set_columns(&["n", "h", "worst_increment", "violations", "threshold"]);
            let mut worst = Vec::new();
            for (c, &h) in cfgs.iter().zip(&hs) {
                let r = run_monotonic_decay(c)?;
                let m = r.monotonicity.clone().expect("monotone report");
                rep.push_row(vec![
                    c.grid_n as f64,
                    h,
                    m.worst_increment,
                    m.violations as f64,
                    m.threshold,
                ]);
                worst.push((m.worst_increment, m.threshold));
            }
            let ok = worst.windows(2).all(|w| w[1].0 <= w[0].0.max(w[1].1));
            rep.check(
                "refinement_decreases",
                ok,
                "worst increment nonincreasing or below threshold",
            );
        }
        ConvergenceQuantity::Certificate => {
            rep.set_columns(&["n", "h", "delta0"]);
            let beta = cfg.beta_value();
            let mut d = Vec::new();
            for (c, &h) in cfgs.iter().zip(&hs) {
                let cert = check_analytic_repulsive(&c.potential, beta, &c.grid(), c.bulk_fraction)?;
                rep.push_row(vec![c.grid_n as f64, h, cert.lambda_min]);
                d.push(cert.lambda_min);
            }
            let (a, b) = (d[levels - 2], d[levels - 1]);
            let rel = (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
            rep.constant("finest_relative_change", rel);
            rep.check("three_figures", rel <= 5e-4, fmt_f64(rel));
        }
    }
    Ok(rep)
}
