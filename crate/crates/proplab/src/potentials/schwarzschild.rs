//! Regge–Wheeler potential and the tortoise coordinate `r* = r + 2M ln(r - 2M)`.

use faer::c64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::param("mass", format!("{mass} must be positive")))
    }
}

pub fn tortoise(r: f64, mass: f64) -> Result<f64> {
    check_mass(mass)?;
    if !(r > 2.0 * mass) {
        return Err(Error::param(
            "r",
            format!("{r} is not outside the horizon 2M = {}", 2.0 * mass),
        ));
    }
    Ok(r + 2.0 * mass * (r - 2.0 * mass).ln())
}

/// Solves `e^y + 2M y + 2M = r*` for `y = ln(r - 2M)`; Newton with a
/// bisection fallback inside a sign-change bracket.
pub fn tortoise_inverse(r_star: f64, mass: f64) -> Result<f64> {
    check_mass(mass)?;
    if !r_star.is_finite() {
        return Err(Error::param("r_star", "not finite"));
    }
    let m2 = 2.0 * mass;
    let f = |y: f64| y.exp() + m2 * y + m2 - r_star;
    let mut lo = ((r_star - m2 - 1.0) / m2).min(0.0);
    let mut hi = (r_star.abs() + 1.0).ln() + 1.0;
    debug_assert!(f(lo) <= 0.0 && f(hi) >= 0.0);
    let mut y = if r_star > m2 + 1.0 {
        (r_star - m2).ln().clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..MAX_ITER {
        let fy = f(y);
        if fy == 0.0 {
            return Ok(m2 + y.exp());
        }
        if fy < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let step = fy / (y.exp() + m2);
        let mut next = y - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 1e-15 * (1.0 + y.abs()) || hi - lo <= 1e-15 * (1.0 + y.abs()) {
            return Ok(m2 + next.exp());
        }
        y = next;
    }
    Err(Error::Convergence(format!("tortoise inverse at r* = {r_star}")))
}

fn newton_complex(s: c64, mass: f64, mut y: c64) -> Result<c64> {
    let m2 = 2.0 * mass;
    for _ in 0..MAX_ITER {
        let e = y.exp();
        let fy = e + y * m2 + m2 - s;
        let dy = fy / (e + m2);
        y -= dy;
        if !(y.re.is_finite() && y.im.is_finite()) {
            break;
        }
        if dy.norm() <= 1e-14 * (1.0 + y.norm()) {
            return Ok(y);
        }
    }
    Err(Error::Convergence(format!("complex tortoise inverse at r* = {s}")))
}

/// `r(shift + e^{iβ} x)` continued along the arc `θ ∈ [0, β]` from the real
/// solution at θ = 0.
pub fn tortoise_inverse_continued(x: f64, beta: f64, shift: f64, mass: f64) -> Result<c64> {
    let r0 = tortoise_inverse(shift + x, mass)?;
    let m2 = 2.0 * mass;
    let mut y = c64::new((r0 - m2).ln(), 0.0);
    if beta == 0.0 {
        return Ok(c64::new(r0, 0.0));
    }
    let steps = ((beta.abs() / 0.02).ceil() as usize).max(1);
    for k in 1..=steps {
        let th = beta * k as f64 / steps as f64;
        let s = c64::new(shift, 0.0) + c64::new(0.0, th).exp() * x;
        y = newton_complex(s, mass, y)?;
    }
    let r = c64::new(m2, 0.0) + y.exp();
    if r.norm() < 1e-12 {
        return Err(Error::Continuation(format!("r = 0 reached at x = {x}, beta = {beta}")));
    }
    Ok(r)
}

/// `V_ℓ(r) = (1 - 2M/r)(2M/r³ + ℓ(ℓ+1)/r²)`, analytic in r.
pub fn regge_wheeler(r: c64, mass: f64, ell: u32) -> c64 {
    let l = (ell as f64) * (ell as f64 + 1.0);
    let inv = c64::new(1.0, 0.0) / r;
    let f = c64::new(1.0, 0.0) - inv * (2.0 * mass);
    f * (inv * inv * inv * (2.0 * mass) + inv * inv * l)
}

/// `dV_ℓ/dr`.
pub fn regge_wheeler_dr(r: f64, mass: f64, ell: u32) -> f64 {
    let l = (ell as f64) * (ell as f64 + 1.0);
    let f = 1.0 - 2.0 * mass / r;
    let fp = 2.0 * mass / (r * r);
    let g = 2.0 * mass / r.powi(3) + l / (r * r);
    let gp = -6.0 * mass / r.powi(4) - 2.0 * l / r.powi(3);
    fp * g + f * gp
}

/// Radius of the maximum of `V_ℓ`, the positive root of
/// `L r² + 3M(1 - L) r - 8M² = 0` with `L = ℓ(ℓ+1)`.
pub fn peak_radius(mass: f64, ell: u32) -> f64 {
    let l = (ell as f64) * (ell as f64 + 1.0);
    if l == 0.0 {
        return 8.0 * mass / 3.0;
    }
    let b = 3.0 * mass * (1.0 - l);
    let c = -8.0 * mass * mass;
    (-b + (b * b - 4.0 * l * c).sqrt()) / (2.0 * l)
}
