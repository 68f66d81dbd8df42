//! Schrödinger and wave propagation: exact eigenbasis propagators and
//! Crank–Nicolson stepping, energies and bracket functionals.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::{self, ZERO};
use crate::operators::{eigendecompose, HermitianOperator, SpectralDecomposition};

#[derive(Clone, Debug, PartialEq)]
pub struct SchrodingerState {
    pub psi: Vec<c64>,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    pub u: Vec<f64>,
    pub u_dot: Vec<f64>,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyValue {
    pub value: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub velocity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Propagator {
    Exact,
    /// Crank–Nicolson with step at most `dt`.
    CrankNicolson {
        dt: f64,
    },
}

/// `t_k = k T / steps`, k = 0..=steps.
pub fn uniform_times(t_end: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| t_end * k as f64 / steps as f64).collect()
}

/// Eigenbasis propagator `e^{-iHt}`.
#[derive(Clone, Debug)]
pub struct ExactSchrodinger {
    decomp: SpectralDecomposition,
}

impl ExactSchrodinger {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        Ok(ExactSchrodinger {
            decomp: eigendecompose(h)?,
        })
    }

    pub fn from_decomposition(decomp: SpectralDecomposition) -> Self {
        ExactSchrodinger { decomp }
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomp
    }

    /// States at `times` as the columns of an `n × len(times)` matrix.
    pub fn trajectory(&self, psi0: &[c64], times: &[f64]) -> Result<Mat<c64>> {
        let n = self.decomp.grid().n();
        if psi0.len() != n {
            return Err(Error::GridMismatch(format!(
                "state has {} entries, grid {n}",
                psi0.len()
            )));
        }
        let u = self.decomp.eigenvectors();
        let c: Vec<c64> = (0..n)
            .map(|k| (0..n).map(|i| u[(i, k)].conj() * psi0[i]).sum())
            .collect();
        let lam = self.decomp.eigenvalues();
        let coef = Mat::from_fn(n, times.len(), |k, j| c[k] * c64::new(0.0, -lam[k] * times[j]).exp());
        Ok(match self.decomp.real_eigenvectors() {
            Some(ur) => {
                let re = Mat::from_fn(n, times.len(), |k, j| coef[(k, j)].re);
                let im = Mat::from_fn(n, times.len(), |k, j| coef[(k, j)].im);
                let a = ur * &re;
                let b = ur * &im;
                Mat::from_fn(n, times.len(), |i, j| c64::new(a[(i, j)], b[(i, j)]))
            }
            None => u * &coef,
        })
    }
}

fn thomas_solve(lower: &[c64], diag: &[c64], upper: &[c64], rhs: &[c64]) -> Result<Vec<c64>> {
    let n = diag.len();
    let mut c = vec![ZERO; n];
    let mut d = vec![ZERO; n];
    let mut den = diag[0];
    if den.norm() == 0.0 {
        return Err(Error::Evolution("singular Crank-Nicolson system".into()));
    }
    c[0] = if n > 1 { upper[0] / den } else { ZERO };
    d[0] = rhs[0] / den;
    for i in 1..n {
        den = diag[i] - lower[i - 1] * c[i - 1];
        if den.norm() == 0.0 {
            return Err(Error::Evolution("singular Crank-Nicolson system".into()));
        }
        if i < n - 1 {
            c[i] = upper[i] / den;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / den;
    }
    for i in (0..n - 1).rev() {
        d[i] = d[i] - c[i] * d[i + 1];
    }
    Ok(d)
}

/// `(1 + iΔt H/2) ψ_{k+1} = (1 - iΔt H/2) ψ_k`.
pub struct CrankNicolson {
    h: HermitianOperator,
    dt: f64,
    solver: CnSolver,
}

enum CnSolver {
    Tridiagonal {
        lower: Vec<c64>,
        diag: Vec<c64>,
        upper: Vec<c64>,
    },
    Dense(faer::linalg::solvers::PartialPivLu<c64>),
}

impl CrankNicolson {
    pub fn new(h: &HermitianOperator, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", format!("{dt} must be positive")));
        }
        let n = h.dim();
        let half = c64::new(0.0, 0.5 * dt);
        let solver = if h.bandwidth().is_some_and(|w| w <= 1) {
            CnSolver::Tridiagonal {
                lower: (0..n - 1).map(|i| half * h.entry(i + 1, i)).collect(),
                diag: (0..n).map(|i| c64::new(1.0, 0.0) + half * h.entry(i, i)).collect(),
                upper: (0..n - 1).map(|i| half * h.entry(i, i + 1)).collect(),
            }
        } else {
            let m = Mat::from_fn(n, n, |i, j| {
                let id = if i == j { c64::new(1.0, 0.0) } else { ZERO };
                id + half * h.entry(i, j)
            });
            CnSolver::Dense(m.partial_piv_lu())
        };
        Ok(CrankNicolson {
            h: h.clone(),
            dt,
            solver,
        })
    }

    pub fn step(&self, psi: &[c64]) -> Result<Vec<c64>> {
        let hp = self.h.apply(psi);
        let half = c64::new(0.0, 0.5 * self.dt);
        let rhs: Vec<c64> = psi.iter().zip(&hp).map(|(p, q)| p - half * q).collect();
        match &self.solver {
            CnSolver::Tridiagonal { lower, diag, upper } => thomas_solve(lower, diag, upper, &rhs),
            CnSolver::Dense(lu) => {
                let b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
                let x = lu.solve(b.as_ref());
                Ok((0..rhs.len()).map(|i| x[(i, 0)]).collect())
            }
        }
    }
}

pub fn schrodinger_evolve(
    h: &HermitianOperator,
    psi0: &[c64],
    times: &[f64],
    mode: Propagator,
) -> Result<Vec<SchrodingerState>> {
    match mode {
        Propagator::Exact => {
            let prop = ExactSchrodinger::new(h)?;
            let traj = prop.trajectory(psi0, times)?;
            Ok(times
                .iter()
                .enumerate()
                .map(|(j, &t)| SchrodingerState {
                    psi: (0..psi0.len()).map(|i| traj[(i, j)]).collect(),
                    t,
                })
                .collect())
        }
        Propagator::CrankNicolson { dt } => {
            if times.iter().any(|&t| t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
                return Err(Error::param("times", "Crank-Nicolson needs nondecreasing times >= 0"));
            }
            let mut out = Vec::with_capacity(times.len());
            let mut psi = psi0.to_vec();
            let mut now = 0.0;
            let mut cache: Option<(f64, CrankNicolson)> = None;
            for &t in times {
                let span = t - now;
                if span > 0.0 {
                    let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
                    let step = span / steps as f64;
                    let reuse = matches!(&cache, Some((s, _)) if (*s - step).abs() <= 1e-14 * step);
                    if !reuse {
                        cache = Some((step, CrankNicolson::new(h, step)?));
                    }
                    let cn = &cache.as_ref().expect("set above").1;
                    for _ in 0..steps {
                        psi = cn.step(&psi)?;
                    }
                    now = t;
                }
                out.push(SchrodingerState { psi: psi.clone(), t });
            }
            Ok(out)
        }
    }
}

/// Zero-mode threshold for `√H`.
pub const ZERO_MODE: f64 = 1e-12;

/// `u(t) = cos(√H t) f₀ + sin(√H t)/√H g₀` in the eigenbasis of a real `H >= 0`.
#[derive(Clone, Debug)]
pub struct WavePropagator {
    grid: Grid,
    omega: Vec<f64>,
    vectors: Mat<f64>,
    clamped: usize,
}

impl WavePropagator {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        Self::from_decomposition(&eigendecompose(h)?)
    }

    pub fn from_decomposition(d: &SpectralDecomposition) -> Result<Self> {
        let u = d
            .real_eigenvectors()
            .ok_or_else(|| Error::Evolution("wave propagation needs a real H".into()))?;
        let norm = d.spectral_radius();
        let floor = -1e-10 * norm;
        if let Some(&l) = d.eigenvalues().first() {
            if l < floor {
                return Err(Error::Evolution(format!(
                    "H is indefinite (lowest eigenvalue {l:.3e}), sqrt(H) undefined"
                )));
            }
        }
        let mut clamped = 0;
        let omega = d
            .eigenvalues()
            .iter()
            .map(|&l| {
                if l <= ZERO_MODE {
                    clamped += 1;
                    0.0
                } else {
                    l.sqrt()
                }
            })
            .collect();
        Ok(WavePropagator {
            grid: *d.grid(),
            omega,
            vectors: u.to_owned(),
            clamped,
        })
    }

    /// Eigenvalues treated as exact zero modes.
    pub fn clamped_modes(&self) -> usize {
        self.clamped
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.omega
    }

    fn coefficients(&self, f0: &[f64], g0: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.grid.n();
        if f0.len() != n || g0.len() != n {
            return Err(Error::GridMismatch("wave data length differs from grid".into()));
        }
        let u = self.vectors.as_ref();
        let proj = |v: &[f64]| -> Vec<f64> { (0..n).map(|k| (0..n).map(|i| u[(i, k)] * v[i]).sum()).collect() };
        Ok((proj(f0), proj(g0)))
    }

    fn coefficient_matrices(
        &self,
        a: &[f64],
        b: &[f64],
        times: &[f64],
        velocity: bool,
    ) -> (Mat<f64>, Option<Mat<f64>>) {
        let n = self.grid.n();
        let om = &self.omega;
        let pos = Mat::from_fn(n, times.len(), |k, j| {
            let t = times[j];
            let w = om[k];
            if w == 0.0 {
                a[k] + b[k] * t
            } else {
                a[k] * (w * t).cos() + b[k] * (w * t).sin() / w
            }
        });
        let vel = velocity.then(|| {
            Mat::from_fn(n, times.len(), |k, j| {
                let t = times[j];
                let w = om[k];
                if w == 0.0 {
                    b[k]
                } else {
                    -a[k] * w * (w * t).sin() + b[k] * (w * t).cos()
                }
            })
        });
        (pos, vel)
    }

    /// `(u, u̇)` at `times`, one column per time.
    pub fn trajectory(&self, f0: &[f64], g0: &[f64], times: &[f64]) -> Result<(Mat<f64>, Mat<f64>)> {
        let (a, b) = self.coefficients(f0, g0)?;
        let (pos, vel) = self.coefficient_matrices(&a, &b, times, true);
        let mut u = &self.vectors * &pos;
        let mut ud = &self.vectors * vel.expect("requested");
        // U(0) is the identity; skip the round trip through the eigenbasis
        for (j, _) in times.iter().enumerate().filter(|(_, &t)| t == 0.0) {
            for i in 0..f0.len() {
                u[(i, j)] = f0[i];
                ud[(i, j)] = g0[i];
            }
        }
        Ok((u, ud))
    }

    /// Rows `rows` of `u(t)` only.
    pub fn window_trajectory(
        &self,
        f0: &[f64],
        g0: &[f64],
        times: &[f64],
        rows: std::ops::Range<usize>,
    ) -> Result<Mat<f64>> {
        let (a, b) = self.coefficients(f0, g0)?;
        let (pos, _) = self.coefficient_matrices(&a, &b, times, false);
        let sub = self.vectors.as_ref().subrows(rows.start, rows.end - rows.start);
        Ok(sub * &pos)
    }

    pub fn evolve(&self, f0: &[f64], g0: &[f64], times: &[f64]) -> Result<Vec<WaveState>> {
        let (u, ud) = self.trajectory(f0, g0, times)?;
        Ok(states_from_columns(u.as_ref(), ud.as_ref(), times))
    }
}

fn states_from_columns(u: MatRef<'_, f64>, ud: MatRef<'_, f64>, times: &[f64]) -> Vec<WaveState> {
    times
        .iter()
        .enumerate()
        .map(|(j, &t)| WaveState {
            u: (0..u.nrows()).map(|i| u[(i, j)]).collect(),
            u_dot: (0..u.nrows()).map(|i| ud[(i, j)]).collect(),
            t,
        })
        .collect()
}

pub fn wave_evolve(h: &HermitianOperator, f0: &[f64], g0: &[f64], times: &[f64]) -> Result<Vec<WaveState>> {
    WavePropagator::new(h)?.evolve(f0, g0, times)
}

/// `E = ∫ |∇u|² + V|u|² + |u̇|²` with the forward difference whose adjoint
/// product is the three-point Laplacian, so `E = h (u·Hu + u̇·u̇)` exactly.
pub fn energy(grid: &Grid, potential: &[f64], state: &WaveState) -> EnergyValue {
    energy_of(grid, potential, &state.u, &state.u_dot)
}

pub fn energy_of(grid: &Grid, potential: &[f64], u: &[f64], u_dot: &[f64]) -> EnergyValue {
    let h = grid.h();
    let n = u.len();
    let mut grad = 0.0;
    let mut prev = 0.0;
    for &v in u.iter() {
        grad += (v - prev) * (v - prev);
        prev = v;
    }
    grad += prev * prev;
    let kinetic = grad / h;
    let potential: f64 = h * (0..n).map(|j| potential[j] * u[j] * u[j]).sum::<f64>();
    let velocity: f64 = h * u_dot.iter().map(|v| v * v).sum::<f64>();
    EnergyValue {
        value: kinetic + potential + velocity,
        kinetic,
        potential,
        velocity,
    }
}

/// `h Σ conj(ψ) Bψ`.
pub fn expectation(psi: &[c64], b: &HermitianOperator) -> f64 {
    b.grid().h() * b.quadratic_form(psi)
}

fn complexify(v: &[f64]) -> Vec<c64> {
    v.iter().map(|&x| c64::new(x, 0.0)).collect()
}

/// `(u, B u̇) - (u̇, B u)` with the grid-weighted pairing.
pub fn heisenberg_bracket(state: &WaveState, b: &HermitianOperator) -> c64 {
    let u = complexify(&state.u);
    let ud = complexify(&state.u_dot);
    let h = b.grid().h();
    (linalg::dot(&u, &b.apply(&ud)) - linalg::dot(&ud, &b.apply(&u))) * h
}

/// Bracket of `iB` for Hermitian `B`; real for real data.
pub fn heisenberg_bracket_i(state: &WaveState, b: &HermitianOperator) -> f64 {
    (heisenberg_bracket(state, b) * linalg::I).re
}

/// L² norm `(h Σ|ψ|²)^{1/2}`.
pub fn l2_norm(grid: &Grid, psi: &[c64]) -> f64 {
    (grid.h() * psi.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::operators::laplacian_op;

    #[test]
    fn thomas_matches_dense() {
        let lower = vec![c64::new(1.0, 0.5); 4];
        let diag = vec![c64::new(4.0, 0.1); 5];
        let upper = vec![c64::new(-1.0, 0.2); 4];
        let rhs: Vec<c64> = (0..5).map(|k| c64::new(k as f64, 1.0)).collect();
        let x = thomas_solve(&lower, &diag, &upper, &rhs).unwrap();
        for i in 0..5 {
            let mut s = diag[i] * x[i];
            if i > 0 {
                s += lower[i - 1] * x[i - 1];
            }
            if i < 4 {
                s += upper[i] * x[i + 1];
            }
            assert!((s - rhs[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn energy_parts() {
        let g = make_grid(64, 5.0).unwrap();
        let zero = vec![0.0; 64];
        let e = energy_of(&g, &zero, &zero, &zero);
        assert_eq!(e.value, 0.0);
        let gv: Vec<f64> = (0..64).map(|j| (j as f64 * 0.3).sin()).collect();
        let e = energy_of(&g, &zero, &zero, &gv);
        let want = g.h() * gv.iter().map(|v| v * v).sum::<f64>();
        assert!((e.value - want).abs() < 1e-14 * want);
        assert_eq!(e.value, e.kinetic + e.potential + e.velocity);
    }

    #[test]
    fn gradient_matches_laplacian_form() {
        let g = make_grid(50, 3.0).unwrap();
        let u: Vec<f64> = g.points().iter().map(|x| (-x * x).exp() * (1.0 + x)).collect();
        let e = energy_of(&g, &vec![0.0; 50], &u, &vec![0.0; 50]);
        let l = laplacian_op(&g);
        let form = g.h() * l.quadratic_form(&complexify(&u));
        assert!((e.kinetic - form).abs() < 1e-12 * form);
    }
}
