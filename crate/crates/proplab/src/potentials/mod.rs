//! Potential families with complex dilation continuation `V(e^{iβ}x)`.

pub mod schwarzschild;
pub mod stieltjes;

use std::f64::consts::FRAC_PI_2;

use faer::c64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operators::{laplacian_op, HermitianOperator};

pub use schwarzschild::{peak_radius, tortoise, tortoise_inverse};
pub use stieltjes::{stieltjes_evaluate, StieltjesDensity};

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialKind {
    /// `strength / (width² + (x - center)²)`.
    Lorentzian {
        strength: f64,
        width: f64,
        center: f64,
    },
    Stieltjes(StieltjesDensity),
    /// `amplitude · sech(rate x)`, whose tails are `2 amplitude e^{-rate|x|}`.
    ExponentialTail {
        amplitude: f64,
        rate: f64,
    },
    /// Regge–Wheeler `V_ℓ` in the tortoise variable `x = r* - shift`.
    Schwarzschild {
        mass: f64,
        ell: u32,
        shift: f64,
    },
    /// `ℓ² · base`.
    ScaledRepulsive {
        ell: u32,
        base: Box<PotentialSpec>,
    },
    Sum(Vec<(f64, PotentialSpec)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    kind: PotentialKind,
    beta_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContinuationResult {
    pub value: c64,
    pub beta: f64,
    pub x: f64,
}

const SCHWARZSCHILD_BETA_MAX: f64 = 0.3;

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} must be positive and finite")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} is not finite")))
    }
}

impl PotentialSpec {
    pub fn zero() -> Self {
        PotentialSpec {
            kind: PotentialKind::Sum(Vec::new()),
            beta_max: 0.99 * FRAC_PI_2,
        }
    }

    pub fn lorentzian(strength: f64, width: f64) -> Result<Self> {
        Self::shifted_lorentzian(strength, width, 0.0)
    }

    pub fn shifted_lorentzian(strength: f64, width: f64, center: f64) -> Result<Self> {
        finite("c0", strength)?;
        positive("b", width)?;
        finite("center", center)?;
        Ok(PotentialSpec {
            kind: PotentialKind::Lorentzian {
                strength,
                width,
                center,
            },
            beta_max: 0.99 * width.atan2(center.abs()),
        })
    }

    pub fn stieltjes(density: StieltjesDensity) -> Self {
        PotentialSpec {
            kind: PotentialKind::Stieltjes(density),
            beta_max: 0.99 * FRAC_PI_2,
        }
    }

    pub fn exponential_tail(amplitude: f64, rate: f64) -> Result<Self> {
        finite("amplitude", amplitude)?;
        positive("rate", rate)?;
        Ok(PotentialSpec {
            kind: PotentialKind::ExponentialTail { amplitude, rate },
            beta_max: 0.99 * FRAC_PI_2,
        })
    }

    pub fn schwarzschild(mass: f64, ell: u32) -> Result<Self> {
        positive("mass", mass)?;
        Ok(PotentialSpec {
            kind: PotentialKind::Schwarzschild { mass, ell, shift: 0.0 },
            beta_max: SCHWARZSCHILD_BETA_MAX,
        })
    }

    /// Schwarzschild potential translated so that its maximum sits at x = 0.
    pub fn centered_schwarzschild(mass: f64, ell: u32) -> Result<Self> {
        positive("mass", mass)?;
        let shift = tortoise(peak_radius(mass, ell), mass)?;
        Ok(PotentialSpec {
            kind: PotentialKind::Schwarzschild { mass, ell, shift },
            beta_max: SCHWARZSCHILD_BETA_MAX,
        })
    }

    pub fn scaled(ell: u32, base: PotentialSpec) -> Self {
        let beta_max = base.beta_max;
        PotentialSpec {
            kind: PotentialKind::ScaledRepulsive {
                ell,
                base: Box::new(base),
            },
            beta_max,
        }
    }

    pub fn sum(terms: Vec<(f64, PotentialSpec)>) -> Self {
        let beta_max = terms.iter().map(|(_, s)| s.beta_max).fold(0.99 * FRAC_PI_2, f64::min);
        PotentialSpec {
            kind: PotentialKind::Sum(terms),
            beta_max,
        }
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn beta_max(&self) -> f64 {
        self.beta_max
    }

    pub fn with_beta_max(mut self, beta_max: f64) -> Self {
        self.beta_max = beta_max;
        self
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            PotentialKind::Sum(t) => t.iter().all(|(c, s)| *c == 0.0 || s.is_zero()),
            PotentialKind::Lorentzian { strength, .. } => *strength == 0.0,
            PotentialKind::ExponentialTail { amplitude, .. } => *amplitude == 0.0,
            PotentialKind::ScaledRepulsive { ell, base } => *ell == 0 || base.is_zero(),
            _ => false,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            PotentialKind::Lorentzian {
                strength,
                width,
                center,
            } => {
                if *center == 0.0 {
                    format!("lorentzian(c0={strength},b={width})")
                } else {
                    format!("lorentzian(c0={strength},b={width},center={center})")
                }
            }
            PotentialKind::Stieltjes(d) => format!("stieltjes({} samples)", d.alpha().len()),
            PotentialKind::ExponentialTail { amplitude, rate } => {
                format!("exp_tail(a={amplitude},rate={rate})")
            }
            PotentialKind::Schwarzschild { mass, ell, shift } => {
                format!("schwarzschild(M={mass},l={ell},shift={shift})")
            }
            PotentialKind::ScaledRepulsive { ell, base } => format!("{ell}^2*{}", base.label()),
            PotentialKind::Sum(t) if t.is_empty() => "0".to_string(),
            PotentialKind::Sum(t) => t
                .iter()
                .map(|(c, s)| format!("{c}*{}", s.label()))
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    fn eval_real(&self, x: f64) -> Result<f64> {
        Ok(match &self.kind {
            PotentialKind::Lorentzian {
                strength,
                width,
                center,
            } => {
                let d = x - center;
                strength / (width * width + d * d)
            }
            PotentialKind::Stieltjes(d) => stieltjes_evaluate(d, x)?,
            PotentialKind::ExponentialTail { amplitude, rate } => amplitude / (rate * x).cosh(),
            PotentialKind::Schwarzschild { mass, ell, shift } => {
                let r = tortoise_inverse(x + shift, *mass)?;
                schwarzschild::regge_wheeler(c64::new(r, 0.0), *mass, *ell).re
            }
            PotentialKind::ScaledRepulsive { ell, base } => {
                let l = *ell as f64;
                l * l * base.eval_real(x)?
            }
            PotentialKind::Sum(t) => {
                let mut s = 0.0;
                for (c, spec) in t {
                    s += c * spec.eval_real(x)?;
                }
                s
            }
        })
    }

    fn eval_continued(&self, x: f64, beta: f64) -> Result<c64> {
        let z = c64::new(0.0, beta).exp() * x;
        Ok(match &self.kind {
            PotentialKind::Lorentzian {
                strength,
                width,
                center,
            } => {
                let d = z - center;
                let den = d * d + width * width;
                if den.norm() < 1e-12 {
                    return Err(Error::Continuation(format!(
                        "lorentzian pole at x = {x}, beta = {beta}"
                    )));
                }
                c64::new(*strength, 0.0) / den
            }
            PotentialKind::Stieltjes(d) => d.evaluate_sq(z * z)?,
            PotentialKind::ExponentialTail { amplitude, rate } => {
                let w = z * *rate;
                let w = if w.re < 0.0 { -w } else { w };
                let e = (-w).exp();
                let den = e * e + 1.0;
                if den.norm() < 1e-12 {
                    return Err(Error::Continuation(format!("sech pole at x = {x}, beta = {beta}")));
                }
                e * (2.0 * amplitude) / den
            }
            PotentialKind::Schwarzschild { mass, ell, shift } => {
                let r = schwarzschild::tortoise_inverse_continued(x, beta, *shift, *mass)?;
                schwarzschild::regge_wheeler(r, *mass, *ell)
            }
            PotentialKind::ScaledRepulsive { ell, base } => {
                let l = *ell as f64;
                base.eval_continued(x, beta)? * (l * l)
            }
            PotentialKind::Sum(t) => {
                let mut s = c64::new(0.0, 0.0);
                for (c, spec) in t {
                    s += spec.eval_continued(x, beta)? * *c;
                }
                s
            }
        })
    }

    fn eval_derivative(&self, x: f64) -> Result<f64> {
        Ok(match &self.kind {
            PotentialKind::Lorentzian {
                strength,
                width,
                center,
            } => {
                let d = x - center;
                let q = width * width + d * d;
                -2.0 * strength * d / (q * q)
            }
            PotentialKind::Stieltjes(d) => d.derivative(x),
            PotentialKind::ExponentialTail { amplitude, rate } => {
                let u = rate * x;
                -amplitude * rate * u.tanh() / u.cosh()
            }
            PotentialKind::Schwarzschild { mass, ell, shift } => {
                let r = tortoise_inverse(x + shift, *mass)?;
                schwarzschild::regge_wheeler_dr(r, *mass, *ell) * (1.0 - 2.0 * mass / r)
            }
            PotentialKind::ScaledRepulsive { ell, base } => {
                let l = *ell as f64;
                l * l * base.eval_derivative(x)?
            }
            PotentialKind::Sum(t) => {
                let mut s = 0.0;
                for (c, spec) in t {
                    s += c * spec.eval_derivative(x)?;
                }
                s
            }
        })
    }
}

fn check_finite(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Continuation(format!("non-finite potential value at x = {x}")))
    }
}

pub fn evaluate(spec: &PotentialSpec, x: f64) -> Result<f64> {
    check_finite(spec.eval_real(x)?, x)
}

/// `V(e^{iβ} x)`.
pub fn evaluate_continued(spec: &PotentialSpec, x: f64, beta: f64) -> Result<ContinuationResult> {
    if !(beta.abs() <= spec.beta_max) {
        return Err(Error::param(
            "beta",
            format!("|{beta}| exceeds beta_max = {} for {}", spec.beta_max, spec.label()),
        ));
    }
    let value = if beta == 0.0 {
        c64::new(evaluate(spec, x)?, 0.0)
    } else {
        spec.eval_continued(x, beta)?
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Continuation(format!(
            "non-finite value at x = {x}, beta = {beta}"
        )));
    }
    Ok(ContinuationResult { value, beta, x })
}

/// `Ṽ_β(x) = (i/2)[V(e^{iβ}x) - V(e^{-iβ}x)]`.
pub fn v_beta(spec: &PotentialSpec, x: f64, beta: f64) -> Result<f64> {
    if beta == 0.0 {
        return Ok(0.0);
    }
    let plus = evaluate_continued(spec, x, beta)?.value;
    let minus = evaluate_continued(spec, x, -beta)?.value;
    Ok((c64::new(0.0, 0.5) * (plus - minus)).re)
}

pub fn derivative(spec: &PotentialSpec, x: f64) -> Result<f64> {
    check_finite(spec.eval_derivative(x)?, x)
}

/// `-x V'(x)`.
pub fn virial(spec: &PotentialSpec, x: f64) -> Result<f64> {
    Ok(-x * derivative(spec, x)?)
}

pub fn samples(spec: &PotentialSpec, grid: &Grid) -> Result<Vec<f64>> {
    grid.points().into_iter().map(|x| evaluate(spec, x)).collect()
}

pub fn v_beta_samples(spec: &PotentialSpec, grid: &Grid, beta: f64) -> Result<Vec<f64>> {
    grid.points().into_iter().map(|x| v_beta(spec, x, beta)).collect()
}

/// `H = p² + V`.
pub fn hamiltonian(grid: &Grid, spec: &PotentialSpec) -> Result<HermitianOperator> {
    let lap = laplacian_op(grid);
    if spec.is_zero() {
        return Ok(lap.with_label("H = p^2"));
    }
    let v = samples(spec, grid)?;
    let vop = HermitianOperator::diagonal(*grid, &v, spec.label())?;
    Ok(lap
        .add_scaled(&vop, 1.0)?
        .with_label(format!("H = p^2 + {}", spec.label())))
}

/// Dilation angle used for `ℓ² V`: `min(β₀, 1/(4 ln(2 + ℓ)))`.
pub fn recommended_beta(ell: u32, beta0: f64) -> f64 {
    beta0.min(0.25 / (2.0 + ell as f64).ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HumpReport {
    pub peak_x: f64,
    pub peak_value: f64,
    pub is_one_hump: bool,
    pub sign_changes: usize,
    pub diagnostic: Option<String>,
}

/// Locates the maximum on `sample_grid` (refined by golden section) and
/// counts sign changes of the sampled slope.
pub fn hump_analysis(spec: &PotentialSpec, sample_grid: &[f64]) -> Result<HumpReport> {
    if sample_grid.len() < 3 {
        return Err(Error::param("sample_grid", "need at least three samples"));
    }
    if sample_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("sample_grid", "must be strictly increasing"));
    }
    let v: Vec<f64> = sample_grid.iter().map(|&x| evaluate(spec, x)).collect::<Result<_>>()?;
    let (kmax, vmax) = v.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |acc, (k, y)| if y > acc.1 { (k, y) } else { acc },
    );
    let scale = v.iter().fold(0.0_f64, |a, y| a.max(y.abs()));
    let flat_tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let at_max = v.iter().filter(|&&y| y >= vmax - flat_tol).count();
    if at_max * 10 > v.len() {
        return Ok(HumpReport {
            peak_x: sample_grid[kmax],
            peak_value: vmax,
            is_one_hump: false,
            sign_changes: 0,
            diagnostic: Some(format!("flat: maximum attained on {at_max} of {} samples", v.len())),
        });
    }
    let slope_tol = 1e-14 * scale;
    let mut signs = Vec::new();
    for w in v.windows(2) {
        let d = w[1] - w[0];
        if d.abs() > slope_tol {
            signs.push(d > 0.0);
        }
    }
    let changes = signs.windows(2).filter(|s| s[0] != s[1]).count();
    let one = changes == 1 && signs.first() == Some(&true);

    let lo = sample_grid[kmax.saturating_sub(1)];
    let hi = sample_grid[(kmax + 1).min(sample_grid.len() - 1)];
    let (peak_x, peak_value) = golden_max(spec, lo, hi, sample_grid[kmax], vmax)?;
    Ok(HumpReport {
        peak_x,
        peak_value,
        is_one_hump: one,
        sign_changes: changes,
        diagnostic: if one {
            None
        } else {
            Some(format!("{changes} slope sign changes"))
        },
    })
}

fn golden_max(spec: &PotentialSpec, mut a: f64, mut b: f64, x0: f64, v0: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = evaluate(spec, c)?;
    let mut fd = evaluate(spec, d)?;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = evaluate(spec, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = evaluate(spec, d)?;
        }
    }
    let xm = 0.5 * (a + b);
    let vm = evaluate(spec, xm)?;
    Ok(if vm >= v0 { (xm, vm) } else { (x0, v0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentzian_values() {
        let s = PotentialSpec::lorentzian(1.0, 1.0).unwrap();
        assert_eq!(evaluate(&s, 0.0).unwrap(), 1.0);
        assert!(PotentialSpec::lorentzian(1.0, 0.0).is_err());
        let v = evaluate_continued(&s, 1.0, std::f64::consts::FRAC_PI_8).unwrap().value;
        let want = c64::new(1.0, 0.0) / (c64::new(1.0, 0.0) + c64::new(0.0, std::f64::consts::FRAC_PI_4).exp());
        assert!((v - want).norm() < 1e-15);
        let vb = v_beta(&s, 1.0, std::f64::consts::FRAC_PI_8).unwrap();
        let two_sqrt = 2.0f64.sqrt();
        assert!((2.0 * vb - two_sqrt / (2.0 + two_sqrt)).abs() < 1e-14);
        assert!((2.0 * vb - 0.41421).abs() < 1e-5);
    }

    #[test]
    fn beta_zero_is_real_value_and_beta_max_enforced() {
        let s = PotentialSpec::schwarzschild(1.0, 2).unwrap();
        let r = evaluate_continued(&s, 1.3, 0.0).unwrap();
        assert_eq!(r.value, c64::new(evaluate(&s, 1.3).unwrap(), 0.0));
        assert!(evaluate_continued(&s, 1.0, 1.0).is_err());
        assert_eq!(v_beta(&s, 3.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn conjugate_symmetry() {
        let specs = [
            PotentialSpec::lorentzian(2.0, 0.7).unwrap(),
            PotentialSpec::exponential_tail(0.3, 1.5).unwrap(),
            PotentialSpec::centered_schwarzschild(1.0, 1).unwrap(),
        ];
        for s in &specs {
            let a = evaluate_continued(s, 2.0, 0.1).unwrap().value;
            let b = evaluate_continued(s, 2.0, -0.1).unwrap().value;
            assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn virial_of_lorentzian() {
        let (c0, b) = (1.7, 0.6);
        let s = PotentialSpec::lorentzian(c0, b).unwrap();
        for &x in &[-3.0, -0.4, 0.0, 0.9, 5.0] {
            let want = 2.0 * c0 * x * x / (b * b + x * x).powi(2);
            assert!((virial(&s, x).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_tail_oscillates() {
        let s = PotentialSpec::exponential_tail(0.5, 1.0).unwrap();
        let beta: f64 = 0.4;
        for &x in &[12.0, 15.0, 19.0] {
            let want = 2.0 * (-x * beta.cos()).exp() * (x * beta.sin()).sin();
            let got = 2.0 * v_beta(&s, x, beta).unwrap();
            assert!((got - want).abs() < 1e-8 * (-x * beta.cos()).exp());
        }
    }

    #[test]
    fn schwarzschild_at_r3() {
        let s = PotentialSpec::schwarzschild(1.0, 0).unwrap();
        assert!((evaluate(&s, 3.0).unwrap() - 2.0 / 81.0).abs() < 1e-12);
    }

    #[test]
    fn humps() {
        let xs: Vec<f64> = (0..2001).map(|k| -20.0 + 0.02 * k as f64).collect();
        let s = PotentialSpec::lorentzian(1.0, 1.0).unwrap();
        let r = hump_analysis(&s, &xs).unwrap();
        assert!(r.is_one_hump);
        assert!(r.peak_x.abs() < 1e-6);
        let two = PotentialSpec::sum(vec![
            (1.0, PotentialSpec::shifted_lorentzian(2.0, 1.0, -4.0).unwrap()),
            (1.0, PotentialSpec::shifted_lorentzian(1.0, 1.0, 4.0).unwrap()),
        ]);
        assert!(!hump_analysis(&two, &xs).unwrap().is_one_hump);
        let flat = PotentialSpec::zero();
        let r = hump_analysis(&flat, &xs).unwrap();
        assert!(!r.is_one_hump && r.diagnostic.is_some());
    }

    #[test]
    fn recommended_beta_shrinks() {
        assert_eq!(recommended_beta(1, 0.1), 0.1);
        assert!((recommended_beta(32, 0.1) - 0.25 / 34f64.ln()).abs() < 1e-15);
    }
}
