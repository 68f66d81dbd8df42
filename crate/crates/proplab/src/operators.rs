//! Grid operators (x, p, p², A, weights) and the spectral calculus.

use std::f64::consts::FRAC_2_PI;

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::{self, ZERO};

/// Dense Hermitian matrix on a grid.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    grid: Grid,
    matrix: Mat<c64>,
    label: String,
    hermiticity_defect: f64,
    band: Option<usize>,
}

const BAND_LIMIT: usize = 2;

impl HermitianOperator {
    /// Symmetrizes `(M + M^H)/2` and records the largest entry of `M - M^H`.
    pub fn from_matrix(grid: Grid, matrix: Mat<c64>, label: impl Into<String>) -> Result<Self> {
        let n = grid.n();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::GridMismatch(format!(
                "matrix is {}x{}, grid has {} points",
                matrix.nrows(),
                matrix.ncols(),
                n
            )));
        }
        let mut defect: f64 = 0.0;
        let mut sym = matrix;
        for j in 0..n {
            for i in 0..=j {
                let a = sym[(i, j)];
                let b = sym[(j, i)];
                defect = defect.max((a - b.conj()).norm());
                let s = (a + b.conj()) * 0.5;
                sym[(i, j)] = s;
                sym[(j, i)] = s.conj();
            }
        }
        let band = linalg::band_of(sym.as_ref(), BAND_LIMIT);
        Ok(HermitianOperator {
            grid,
            matrix: sym,
            label: label.into(),
            hermiticity_defect: defect,
            band,
        })
    }

    pub fn diagonal(grid: Grid, values: &[f64], label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "{} diagonal values for {} points",
                values.len(),
                grid.n()
            )));
        }
        let m = Mat::from_fn(
            grid.n(),
            grid.n(),
            |i, j| {
                if i == j {
                    c64::new(values[i], 0.0)
                } else {
                    ZERO
                }
            },
        );
        Ok(HermitianOperator {
            grid,
            matrix: m,
            label: label.into(),
            hermiticity_defect: 0.0,
            band: Some(0),
        })
    }

    pub fn identity(grid: Grid) -> Self {
        Self::diagonal(grid, &vec![1.0; grid.n()], "1").expect("sizes agree")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    /// Bandwidth when the matrix is tridiagonal or narrower.
    pub fn bandwidth(&self) -> Option<usize> {
        self.band
    }

    pub fn dim(&self) -> usize {
        self.grid.n()
    }

    pub fn entry(&self, i: usize, j: usize) -> c64 {
        self.matrix[(i, j)]
    }

    pub fn max_entry(&self) -> f64 {
        linalg::max_abs(self.matrix.as_ref())
    }

    pub fn is_real(&self) -> bool {
        linalg::is_real(self.matrix.as_ref())
    }

    pub fn real_matrix(&self) -> Mat<f64> {
        linalg::real_part(self.matrix.as_ref())
    }

    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.matrix[(j, j)].re).collect()
    }

    /// `self + coeff * other`.
    pub fn add_scaled(&self, other: &HermitianOperator, coeff: f64) -> Result<Self> {
        self.grid.same_as(&other.grid)?;
        let n = self.dim();
        let m = Mat::from_fn(n, n, |i, j| self.matrix[(i, j)] + other.matrix[(i, j)] * coeff);
        let band = match (self.band, other.band) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(HermitianOperator {
            grid: self.grid,
            matrix: m,
            label: format!("{} + {}*{}", self.label, coeff, other.label),
            hermiticity_defect: self.hermiticity_defect.max(other.hermiticity_defect),
            band,
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        let n = self.dim();
        HermitianOperator {
            grid: self.grid,
            matrix: Mat::from_fn(n, n, |i, j| self.matrix[(i, j)] * s),
            label: format!("{}*{}", s, self.label),
            hermiticity_defect: self.hermiticity_defect * s.abs(),
            band: self.band,
        }
    }

    /// Matrix product `self * other` (not Hermitian in general).
    pub fn times(&self, other: &HermitianOperator) -> Result<Mat<c64>> {
        self.grid.same_as(&other.grid)?;
        Ok(linalg::product(
            self.matrix.as_ref(),
            self.band,
            other.matrix.as_ref(),
            other.band,
        ))
    }

    pub fn times_mat(&self, b: MatRef<'_, c64>) -> Mat<c64> {
        linalg::product(self.matrix.as_ref(), self.band, b, None)
    }

    /// `outer * self * outer`, Hermitian when `outer` is.
    pub fn sandwich(&self, outer: &HermitianOperator) -> Result<Self> {
        self.grid.same_as(&outer.grid)?;
        let left = outer.times(self)?;
        let m = linalg::product(left.as_ref(), None, outer.matrix.as_ref(), outer.band);
        Self::from_matrix(
            self.grid,
            m,
            format!("{} ({}) {}", outer.label, self.label, outer.label),
        )
    }

    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        linalg::matvec(self.matrix.as_ref(), self.band, v)
    }

    pub fn apply_real(&self, v: &[f64]) -> Vec<c64> {
        let w: Vec<c64> = v.iter().map(|&x| c64::new(x, 0.0)).collect();
        self.apply(&w)
    }

    /// `<v, M v>` in the plain Euclidean pairing.
    pub fn quadratic_form(&self, v: &[c64]) -> f64 {
        linalg::dot(v, &self.apply(v)).re
    }

    /// Principal block on `[start, end)`.
    pub fn block(&self, start: usize, end: usize) -> Mat<c64> {
        linalg::submatrix(self.matrix.as_ref(), start, end)
    }

    /// `Π M Π` with Π the reflection `x -> -x` (index reversal).
    pub fn parity_conjugate(&self) -> Self {
        HermitianOperator {
            grid: self.grid,
            matrix: linalg::reversed(self.matrix.as_ref()),
            label: format!("Π {} Π", self.label),
            hermiticity_defect: self.hermiticity_defect,
            band: self.band,
        }
    }

    /// Entrywise complex conjugate `K M K`. A is even under Π but odd under K.
    pub fn conjugate(&self) -> Self {
        let m = &self.matrix;
        HermitianOperator {
            grid: self.grid,
            matrix: Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].conj()),
            label: format!("K {} K", self.label),
            hermiticity_defect: self.hermiticity_defect,
            band: self.band,
        }
    }
}

pub fn multiplication_op(grid: &Grid, f: impl Fn(f64) -> f64, label: impl Into<String>) -> Result<HermitianOperator> {
    let vals: Vec<f64> = grid.points().into_iter().map(f).collect();
    if let Some(v) = vals.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            at: f64::NAN,
            value: *v,
        });
    }
    HermitianOperator::diagonal(*grid, &vals, label)
}

pub fn position_op(grid: &Grid) -> HermitianOperator {
    multiplication_op(grid, |x| x, "x").expect("finite grid")
}

fn tridiagonal(
    grid: &Grid,
    diag: impl Fn(usize) -> c64,
    upper: impl Fn(usize) -> c64,
    label: &str,
) -> HermitianOperator {
    let n = grid.n();
    let m = Mat::from_fn(n, n, |i, j| {
        if i == j {
            diag(i)
        } else if j == i + 1 {
            upper(i)
        } else if i == j + 1 {
            upper(j).conj()
        } else {
            ZERO
        }
    });
    HermitianOperator {
        grid: *grid,
        matrix: m,
        label: label.to_string(),
        hermiticity_defect: 0.0,
        band: Some(1),
    }
}

/// `p = -i D`, D the central difference with zero values past the walls.
pub fn momentum_op(grid: &Grid) -> HermitianOperator {
    let c = -0.5 / grid.h();
    tridiagonal(grid, |_| ZERO, |_| c64::new(0.0, c), "p")
}

/// Three-point Dirichlet Laplacian `(2u_j - u_{j+1} - u_{j-1}) / h²`.
pub fn laplacian_op(grid: &Grid) -> HermitianOperator {
    let h2 = grid.h() * grid.h();
    tridiagonal(grid, |_| c64::new(2.0 / h2, 0.0), |_| c64::new(-1.0 / h2, 0.0), "p^2")
}

/// `A = (X P + P X) / 2`; only the first off-diagonals survive.
pub fn dilation_op(grid: &Grid) -> Result<HermitianOperator> {
    grid.require_symmetric("the dilation generator")?;
    let c = -0.25 / grid.h();
    let g = *grid;
    Ok(tridiagonal(
        grid,
        |_| ZERO,
        move |j| c64::new(0.0, c * (g.x(j) + g.x(j + 1))),
        "A",
    ))
}

/// `<x>_b^{-σ} = (b² + x²)^{-σ/2}`.
pub fn weight_op(grid: &Grid, b: f64, sigma: f64) -> Result<HermitianOperator> {
    check_weight_params(b, sigma)?;
    multiplication_op(
        grid,
        |x| (b * b + x * x).powf(-0.5 * sigma),
        format!("<x>_{b}^-{sigma}"),
    )
}

/// `χ_b(|x|) = (b^{-σ} - <x>_b^{-σ})^{1/2}`.
pub fn chi_op(grid: &Grid, b: f64, sigma: f64) -> Result<HermitianOperator> {
    check_weight_params(b, sigma)?;
    let top = (b * b).powf(-0.5 * sigma);
    multiplication_op(
        grid,
        |x| (top - (b * b + x * x).powf(-0.5 * sigma)).max(0.0).sqrt(),
        format!("chi_{b}^{sigma}"),
    )
}

/// `<x> = (1 + x²)^{1/2}` raised to `power`.
pub fn bracket_x_op(grid: &Grid, power: f64) -> HermitianOperator {
    multiplication_op(grid, |x| (1.0 + x * x).powf(0.5 * power), format!("<x>^{power}")).expect("finite weight")
}

fn check_weight_params(b: f64, sigma: f64) -> Result<()> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::param("b", format!("{b} must be positive")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", format!("{sigma} must be nonnegative")));
    }
    Ok(())
}

/// Eigenpairs `M = U Λ U^H` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    grid: Grid,
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<c64>,
    real_eigenvectors: Option<Mat<f64>>,
    source_label: String,
    reconstruction_defect: f64,
    orthogonality_defect: f64,
}

pub const SPECTRAL_TOLERANCE: f64 = 1e-10;

pub fn eigendecompose(op: &HermitianOperator) -> Result<SpectralDecomposition> {
    let (vals, u, ur) = linalg::hermitian_eigen(op.matrix())?;
    let n = op.dim();
    let (recon, ortho) = match &ur {
        Some(r) => {
            let mut ul = r.clone();
            for (k, &l) in vals.iter().enumerate() {
                ul.col_mut(k).iter_mut().for_each(|z| *z *= l);
            }
            let m = &ul * r.transpose();
            let g = r.transpose() * r;
            let mut diff = 0.0;
            let mut base = 0.0;
            let mut ortho: f64 = 0.0;
            for j in 0..n {
                for i in 0..n {
                    let a = op.matrix[(i, j)].re;
                    diff += (m[(i, j)] - a).powi(2);
                    base += a * a;
                    let id = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((g[(i, j)] - id).abs());
                }
            }
            (relative(diff.sqrt(), base.sqrt()), ortho)
        }
        None => {
            let mut ul = u.clone();
            for (k, &l) in vals.iter().enumerate() {
                ul.col_mut(k).iter_mut().for_each(|z| *z *= l);
            }
            let m = &ul * u.adjoint();
            let g = u.adjoint() * &u;
            let mut diff = 0.0;
            let mut base = 0.0;
            let mut ortho: f64 = 0.0;
            for j in 0..n {
                for i in 0..n {
                    let a = op.matrix[(i, j)];
                    diff += (m[(i, j)] - a).norm_sqr();
                    base += a.norm_sqr();
                    let id = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((g[(i, j)] - c64::new(id, 0.0)).norm());
                }
            }
            (relative(diff.sqrt(), base.sqrt()), ortho)
        }
    };
    if !(recon <= SPECTRAL_TOLERANCE && ortho <= SPECTRAL_TOLERANCE) {
        return Err(Error::Eigen(format!(
            "{}: reconstruction defect {recon:.3e}, orthogonality defect {ortho:.3e}",
            op.label()
        )));
    }
    Ok(SpectralDecomposition {
        grid: *op.grid(),
        eigenvalues: vals,
        eigenvectors: u,
        real_eigenvectors: ur,
        source_label: op.label().to_string(),
        reconstruction_defect: recon,
        orthogonality_defect: ortho,
    })
}

fn relative(diff: f64, base: f64) -> f64 {
    if base > 0.0 {
        diff / base
    } else {
        diff
    }
}

impl SpectralDecomposition {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> MatRef<'_, c64> {
        self.eigenvectors.as_ref()
    }

    /// Present when the source matrix was real symmetric.
    pub fn real_eigenvectors(&self) -> Option<MatRef<'_, f64>> {
        self.real_eigenvectors.as_ref().map(|m| m.as_ref())
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn reconstruction_defect(&self) -> f64 {
        self.reconstruction_defect
    }

    pub fn orthogonality_defect(&self) -> f64 {
        self.orthogonality_defect
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
    }

    fn function_values(&self, f: &dyn Fn(f64) -> f64) -> Result<Vec<f64>> {
        self.eigenvalues
            .iter()
            .map(|&l| {
                let v = f(l);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFinite { at: l, value: v })
                }
            })
            .collect()
    }

    /// `U f(Λ) U^H`.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64, label: impl Into<String>) -> Result<HermitianOperator> {
        let fv = self.function_values(&f)?;
        let m = match &self.real_eigenvectors {
            Some(r) => {
                let mut uf = r.clone();
                for (k, &v) in fv.iter().enumerate() {
                    uf.col_mut(k).iter_mut().for_each(|z| *z *= v);
                }
                linalg::to_complex((&uf * r.transpose()).as_ref())
            }
            None => {
                let mut uf = self.eigenvectors.clone();
                for (k, &v) in fv.iter().enumerate() {
                    uf.col_mut(k).iter_mut().for_each(|z| *z *= v);
                }
                &uf * self.eigenvectors.adjoint()
            }
        };
        HermitianOperator::from_matrix(self.grid, m, label)
    }

    /// `f(M) v` without forming `f(M)`.
    pub fn apply_to_vector(&self, f: impl Fn(f64) -> f64, v: &[c64]) -> Result<Vec<c64>> {
        let fv = self.function_values(&f)?;
        let u = self.eigenvectors.as_ref();
        let n = self.grid.n();
        let mut coef = vec![ZERO; n];
        for (k, c) in coef.iter_mut().enumerate() {
            let mut s = ZERO;
            for i in 0..n {
                s += u[(i, k)].conj() * v[i];
            }
            *c = s * fv[k];
        }
        let mut out = vec![ZERO; n];
        for (k, c) in coef.iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                *o += u[(i, k)] * c;
            }
        }
        Ok(out)
    }
}

pub fn apply_function(decomp: &SpectralDecomposition, f: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
    let label = format!("f({})", decomp.source_label);
    decomp.apply_function(f, label)
}

/// Smoothed commutator weight `g²(a) = sin(2/R) / (cosh(2a/R) + cos(2/R))`,
/// from `tanh u - tanh v = sinh(u - v) / (cosh u cosh v)`.
pub fn g_squared(a: f64, r: f64) -> f64 {
    (2.0 / r).sin() / ((2.0 * a / r).cosh() + (2.0 / r).cos())
}

/// The alternative closed form `sin(2/R) / (cosh(2a/R) + 2 cosh(2/R))`.
pub fn g_squared_printed(a: f64, r: f64) -> f64 {
    (2.0 / r).sin() / ((2.0 * a / r).cosh() + 2.0 * (2.0 / r).cosh())
}

pub fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn check_scale(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::param("R", format!("{r} must be positive and finite")))
    }
}

/// Positivity threshold `R > 2/π`.
pub fn is_supercritical(r: f64) -> bool {
    r > FRAC_2_PI
}

/// `tanh(A/R)` from a decomposition of A.
pub fn tanh_observable(a: &SpectralDecomposition, r: f64) -> Result<HermitianOperator> {
    check_scale(r)?;
    if !is_supercritical(r) {
        log::warn!("R = {r} <= 2/pi: tanh(A/R) is built but its commutator is not positive");
    }
    a.apply_function(move |l| (l / r).tanh(), format!("tanh(A/{r})"))
}

pub fn g_squared_observable(a: &SpectralDecomposition, r: f64) -> Result<HermitianOperator> {
    check_scale(r)?;
    if !is_supercritical(r) {
        return Err(Error::param("R", format!("{r} <= 2/pi makes sin(2/R) <= 0")));
    }
    a.apply_function(move |l| g_squared(l, r), format!("g^2(A/{r})"))
}

/// `g(A/R)` shifted by `shift`: the square root of `g²((A + shift)/R)`.
pub fn g_observable(a: &SpectralDecomposition, r: f64, shift: f64) -> Result<HermitianOperator> {
    check_scale(r)?;
    if !is_supercritical(r) {
        return Err(Error::param("R", format!("{r} <= 2/pi makes sin(2/R) <= 0")));
    }
    a.apply_function(move |l| g_squared(l + shift, r).sqrt(), format!("g((A+{shift})/{r})"))
}

pub fn sech_observable(a: &SpectralDecomposition, r: f64, shift: f64) -> Result<HermitianOperator> {
    check_scale(r)?;
    a.apply_function(move |l| sech((l + shift) / r), format!("sech((A+{shift})/{r})"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Above,
    Below,
}

pub fn smooth_step(l: f64, threshold: f64, direction: Direction, width: f64) -> f64 {
    let s = ((l - threshold) / width).tanh();
    match direction {
        Direction::Above => 0.5 * (1.0 + s),
        Direction::Below => 0.5 * (1.0 - s),
    }
}

/// `(1 ± tanh((M - t)/w)) / 2`, a smoothed spectral projection.
pub fn smooth_projection(
    decomp: &SpectralDecomposition,
    threshold: f64,
    direction: Direction,
    width: f64,
) -> Result<HermitianOperator> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::param("width", format!("{width} must be positive")));
    }
    let tag = match direction {
        Direction::Above => ">=",
        Direction::Below => "<=",
    };
    decomp.apply_function(
        move |l| smooth_step(l, threshold, direction, width),
        format!("F({} {tag} {threshold}; {width})", decomp.source_label),
    )
}

/// Outgoing projection `F⁺_M = (1 + tanh((A - M)/R)) / 2`.
pub fn outgoing_projection(a: &SpectralDecomposition, m: f64, r: f64) -> Result<HermitianOperator> {
    check_scale(r)?;
    smooth_projection(a, m, Direction::Above, r).map(|o| o.with_label(format!("F+_{m}(A/{r})")))
}

/// Incoming projection `F⁻_M = (1 - tanh((A + M)/R)) / 2`.
pub fn incoming_projection(a: &SpectralDecomposition, m: f64, r: f64) -> Result<HermitianOperator> {
    check_scale(r)?;
    smooth_projection(a, -m, Direction::Below, r).map(|o| o.with_label(format!("F-_{m}(A/{r})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn position_is_diagonal_grid() {
        let g = make_grid(17, 8.0).unwrap();
        let x = position_op(&g);
        for j in 0..17 {
            assert_eq!(x.entry(j, j).re, -8.0 + j as f64);
        }
        assert_eq!(x.entry(0, 0).re, g.x_min());
        assert_eq!(x.entry(3, 4), ZERO);
        assert_eq!(x.bandwidth(), Some(0));
    }

    #[test]
    fn momentum_symbol() {
        let g = make_grid(401, 20.0).unwrap();
        let p = momentum_op(&g);
        assert_eq!(p.hermiticity_defect(), 0.0);
        let k = 1.0;
        let v: Vec<c64> = g.points().iter().map(|&x| c64::new(0.0, k * x).exp()).collect();
        let pv = p.apply(&v);
        let bound = g.h().powi(2) * k.powi(3) / 6.0;
        for j in 1..g.n() - 1 {
            assert!((pv[j] - v[j] * k).norm() <= bound * (1.0 + 1e-9));
        }
        let ones = vec![c64::new(1.0, 0.0); g.n()];
        let pc = p.apply(&ones);
        for z in &pc[1..g.n() - 1] {
            assert!(z.norm() < 1e-13);
        }
    }

    #[test]
    fn laplacian_rows() {
        let g = make_grid(33, 4.0).unwrap();
        let l = laplacian_op(&g);
        let ones = vec![c64::new(1.0, 0.0); g.n()];
        let r = l.apply(&ones);
        for z in &r[1..g.n() - 1] {
            assert!(z.norm() < 1e-12);
        }
        assert!((r[0].re - 1.0 / (g.h() * g.h())).abs() < 1e-12);
    }

    #[test]
    fn weights() {
        let g = make_grid(17, 8.0).unwrap();
        let w = weight_op(&g, 1.0, 2.0).unwrap();
        assert!((w.entry(8, 8).re - 1.0).abs() < 1e-15);
        assert!((w.entry(9, 9).re - 0.5).abs() < 1e-15);
        let c = chi_op(&g, 3.0, 1.5).unwrap();
        assert_eq!(c.entry(8, 8).re, 0.0);
        assert!(weight_op(&g, 0.0, 1.0).is_err());
        for j in 0..17 {
            assert!(w.entry(j, j).re <= 1.0);
        }
    }

    #[test]
    fn dilation_needs_symmetric_grid() {
        let g = Grid::new(32, -1.0, 3.0).unwrap();
        assert!(dilation_op(&g).is_err());
        let a = dilation_op(&make_grid(32, 3.0).unwrap()).unwrap();
        assert_eq!(a.hermiticity_defect(), 0.0);
    }

    #[test]
    fn scalar_g_squared() {
        assert!((g_squared(0.0, 1.0) - 1.0f64.tan()).abs() < 1e-14);
        assert!((g_squared(0.0, 1.0) - 1.55741).abs() < 1e-5);
        assert!((g_squared_printed(0.0, 1.0) - 2.0f64.sin() / (1.0 + 2.0 * 2.0f64.cosh())).abs() < 1e-15);
        for a in [0.3, 1.7, 5.0] {
            assert_eq!(g_squared(a, 3.0), g_squared(-a, 3.0));
        }
    }

    #[test]
    fn smooth_step_values() {
        let (m, r) = (3.0, 2.0);
        assert_eq!(smooth_step(m, m, Direction::Above, r), 0.5);
        let tail = smooth_step(m + 10.0 * r, -m, Direction::Below, r);
        assert!(tail <= 2.0 * (-20.0f64).exp());
        for a in [-4.0, 0.0, 2.5] {
            let s = smooth_step(a, 0.0, Direction::Above, r) + smooth_step(a, 0.0, Direction::Below, r);
            assert!((s - 1.0).abs() < 1e-15);
        }
    }
}
