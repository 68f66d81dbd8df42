use std::path::Path;

use faer::c64;

use crate::error::{Error, Result};

/// Samples of a nonnegative density ρ(α) on a strictly increasing α-grid,
/// integrated with the trapezoid rule.
#[derive(Clone, Debug, PartialEq)]
pub struct StieltjesDensity {
    alpha: Vec<f64>,
    rho: Vec<f64>,
    weights: Vec<f64>,
}

impl StieltjesDensity {
    pub fn new(alpha: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if alpha.len() != rho.len() {
            return Err(Error::param("rho", "alpha and rho lengths differ"));
        }
        if alpha.len() < 2 {
            return Err(Error::param("rho", "need at least two samples"));
        }
        for (k, (&a, &r)) in alpha.iter().zip(&rho).enumerate() {
            if !a.is_finite() || a < 0.0 {
                return Err(Error::param("rho", format!("alpha[{k}] = {a} must be finite and >= 0")));
            }
            if !r.is_finite() || r < 0.0 {
                return Err(Error::param("rho", format!("rho[{k}] = {r} must be finite and >= 0")));
            }
        }
        if let Some(k) = alpha.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::param(
                "rho",
                format!("alpha not strictly increasing at row {}", k + 1),
            ));
        }
        let n = alpha.len();
        let mut weights = vec![0.0; n];
        for k in 0..n - 1 {
            let d = 0.5 * (alpha[k + 1] - alpha[k]);
            weights[k] += d;
            weights[k + 1] += d;
        }
        let tail: f64 = (0..n).map(|k| weights[k] * rho[k] / (1.0 + alpha[k])).sum();
        if !tail.is_finite() {
            return Err(Error::param("rho", "integral of rho/(1+t) is not finite"));
        }
        Ok(StieltjesDensity { alpha, rho, weights })
    }

    /// Two columns `alpha, rho`, comma or whitespace separated. An optional
    /// header line and `#` comments are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut alpha = Vec::new();
        let mut rho = Vec::new();
        let mut seen_data = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parsed: Option<(f64, f64)> = match cols.as_slice() {
                [a, r] => a.parse().ok().zip(r.parse().ok()),
                _ => None,
            };
            match parsed {
                Some((a, r)) => {
                    alpha.push(a);
                    rho.push(r);
                    seen_data = true;
                }
                None if !seen_data && alpha.is_empty() && cols.len() == 2 => {
                    seen_data = true;
                }
                None => {
                    return Err(Error::Config(format!(
                        "rho csv line {}: expected two numbers, got `{raw}`",
                        lineno + 1
                    )))
                }
            }
        }
        StieltjesDensity::new(alpha, rho)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::io(path.as_ref(), e))?;
        Self::from_csv_str(&text)
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Trapezoid value of ∫ρ.
    pub fn mass(&self) -> f64 {
        self.weights.iter().zip(&self.rho).map(|(w, r)| w * r).sum()
    }

    /// `Σ w_k ρ_k / (α_k + z²)` for complex `z²`.
    pub fn evaluate_sq(&self, z2: c64) -> Result<c64> {
        let mut s = c64::new(0.0, 0.0);
        for k in 0..self.alpha.len() {
            let wr = self.weights[k] * self.rho[k];
            if wr == 0.0 {
                continue;
            }
            let den = z2 + self.alpha[k];
            if den.norm() < 1e-12 {
                return Err(Error::Continuation(format!(
                    "pole alpha = {} hit by z^2 = {z2}",
                    self.alpha[k]
                )));
            }
            s += c64::new(wr, 0.0) / den;
        }
        Ok(s)
    }

    /// Real derivative `dV/dx = Σ w_k ρ_k (-2x)/(α_k + x²)²`.
    pub fn derivative(&self, x: f64) -> f64 {
        let x2 = x * x;
        (0..self.alpha.len())
            .filter(|&k| self.weights[k] * self.rho[k] != 0.0)
            .map(|k| {
                let d = self.alpha[k] + x2;
                -2.0 * x * self.weights[k] * self.rho[k] / (d * d)
            })
            .sum()
    }
}

pub fn stieltjes_evaluate(density: &StieltjesDensity, x: f64) -> Result<f64> {
    let v = density.evaluate_sq(c64::new(x * x, 0.0))?.re;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Continuation(format!("non-finite quadrature at x = {x}")))
    }
}
