//! Commutators, propagation observables and minimum-eigenvalue certificates.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::grid::{BulkMask, Grid};
use crate::linalg::{self, ZERO};
use crate::operators::{
    self, eigendecompose, incoming_projection, laplacian_op, momentum_op, outgoing_projection, smooth_step, Direction,
    HermitianOperator, SpectralDecomposition,
};
use crate::potentials::{self, PotentialSpec};

/// Relative tolerance applied to the block operator norm.
pub const TOL_CERTIFY: f64 = 1e-8;

/// Outcome of a positivity check on a bulk-restricted quadratic form.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub name: String,
    pub params: String,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub required: f64,
    pub margin: f64,
    pub tolerance: f64,
    /// Strict checks need `margin > tolerance`, the others `margin >= -tolerance`.
    pub strict: bool,
    pub bulk: BulkMask,
    pub n: usize,
    pub h: f64,
    pub passed: bool,
}

impl Certificate {
    pub fn from_spectrum(
        name: impl Into<String>,
        params: impl Into<String>,
        eigenvalues: &[f64],
        required: f64,
        bulk: BulkMask,
        grid: &Grid,
        strict: bool,
    ) -> Certificate {
        let lambda_min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let lambda_max = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let norm = lambda_min.abs().max(lambda_max.abs());
        let tolerance = TOL_CERTIFY * norm;
        let margin = lambda_min - required;
        let passed = if strict {
            margin > tolerance
        } else {
            margin >= -tolerance
        };
        Certificate {
            name: name.into(),
            params: params.into(),
            lambda_min,
            lambda_max,
            required,
            margin,
            tolerance,
            strict,
            bulk,
            n: grid.n(),
            h: grid.h(),
            passed,
        }
    }

    pub fn operator_norm(&self) -> f64 {
        self.lambda_min.abs().max(self.lambda_max.abs())
    }

    pub fn report_line(&self) -> String {
        format!(
            "{} [{}] lambda_min={:.6e} margin={:.6e} tol={:.3e} bulk={}..{} n={} {}",
            self.name,
            self.params,
            self.lambda_min,
            self.margin,
            self.tolerance,
            self.bulk.start,
            self.bulk.end,
            self.n,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

fn complex_block_certificate(
    name: &str,
    params: String,
    grid: &Grid,
    m: MatRef<'_, c64>,
    bulk: BulkMask,
    required: f64,
    strict: bool,
) -> Result<Certificate> {
    let block = linalg::submatrix(m, bulk.start, bulk.end);
    let eig = linalg::hermitian_eigenvalues(block.as_ref())?;
    Ok(Certificate::from_spectrum(
        name, params, &eig, required, bulk, grid, strict,
    ))
}

fn real_block_certificate(
    name: &str,
    params: String,
    grid: &Grid,
    block: Mat<f64>,
    bulk: BulkMask,
    strict: bool,
) -> Result<Certificate> {
    let eig = linalg::symmetric_eigenvalues(block.as_ref())?;
    Ok(Certificate::from_spectrum(name, params, &eig, 0.0, bulk, grid, strict))
}

/// `i[H, B] = i(HB - BH)`.
pub fn commutator(h: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    let c = h.times(b)?;
    let n = h.dim();
    let m = Mat::from_fn(n, n, |i, j| {
        let d = c[(i, j)] - c[(j, i)].conj();
        c64::new(-d.im, d.re)
    });
    HermitianOperator::from_matrix(*h.grid(), m, format!("i[{}, {}]", h.label(), b.label()))
}

/// Smallest eigenvalue of the central `bulk_fraction` block, required to be >= 0.
pub fn min_eig_certificate(op: &HermitianOperator, bulk_fraction: f64) -> Result<Certificate> {
    let bulk = op.grid().bulk(bulk_fraction)?;
    complex_block_certificate(
        op.label(),
        format!("bulk={bulk_fraction}"),
        op.grid(),
        op.matrix(),
        bulk,
        0.0,
        false,
    )
}

/// Fraction of the Nyquist band kept by [`resolved_min_eig_certificate`].
pub const RESOLVED_BAND: f64 = 0.5;

/// Orthonormal Dirichlet sine modes of a `k`-point block with frequency at
/// most `band · π/h`.
pub fn resolved_basis(k: usize, band: f64) -> Mat<f64> {
    let modes = ((band * (k + 1) as f64).floor() as usize).min(k);
    let scale = (2.0 / (k + 1) as f64).sqrt();
    Mat::from_fn(k, modes, |i, m| {
        scale * ((m + 1) as f64 * std::f64::consts::PI * (i + 1) as f64 / (k + 1) as f64).sin()
    })
}

/// Like [`min_eig_certificate`], with the bulk block further compressed to
/// the resolved band. Central differences leave a spurious doubler branch
/// near `k = π/h` where the discrete `p` vanishes; no continuum identity
/// holds there.
pub fn resolved_min_eig_certificate(op: &HermitianOperator, bulk_fraction: f64, band: f64) -> Result<Certificate> {
    if !(band > 0.0 && band <= 1.0) {
        return Err(Error::param("band", format!("{band} must lie in (0, 1]")));
    }
    let bulk = op.grid().bulk(bulk_fraction)?;
    let block = linalg::submatrix(op.matrix(), bulk.start, bulk.end);
    let q = linalg::to_complex(resolved_basis(bulk.len(), band).as_ref());
    let compressed = q.adjoint() * &block * &q;
    let eig = linalg::hermitian_eigenvalues(compressed.as_ref())?;
    Ok(Certificate::from_spectrum(
        op.label(),
        format!("bulk={bulk_fraction} band={band}"),
        &eig,
        0.0,
        bulk,
        op.grid(),
        false,
    ))
}

fn check_commutator_scale(spec: &PotentialSpec, r: f64) -> Result<()> {
    if !operators::is_supercritical(r) {
        return Err(Error::param("R", format!("{r} <= 2/pi")));
    }
    if !spec.is_zero() && 1.0 / r > spec.beta_max() {
        return Err(Error::param(
            "R",
            format!("beta = 1/R = {} exceeds beta_max = {}", 1.0 / r, spec.beta_max()),
        ));
    }
    Ok(())
}

/// Closed form `2 P g²(A/R) P + sech(A/R) Ṽ_β sech(A/R)` with `β = 1/R`.
pub fn theoretical_commutator(a: &SpectralDecomposition, spec: &PotentialSpec, r: f64) -> Result<HermitianOperator> {
    theoretical_commutator_shifted(a, spec, r, 0.0)
}

/// Same closed form for `i[H, tanh((A + shift)/R)]`.
pub fn theoretical_commutator_shifted(
    a: &SpectralDecomposition,
    spec: &PotentialSpec,
    r: f64,
    shift: f64,
) -> Result<HermitianOperator> {
    check_commutator_scale(spec, r)?;
    let grid = *a.grid();
    let p = momentum_op(&grid);
    let g2 = a.apply_function(move |l| operators::g_squared(l + shift, r), "g2")?;
    let pg = p.times(&g2)?;
    let pgp = linalg::product(pg.as_ref(), None, p.matrix(), p.bandwidth());
    let n = grid.n();
    let mut m = Mat::from_fn(n, n, |i, j| pgp[(i, j)] * 2.0);
    if !spec.is_zero() {
        let vt = potentials::v_beta_samples(spec, &grid, 1.0 / r)?;
        let s = operators::sech_observable(a, r, shift)?;
        let sv = Mat::from_fn(n, n, |i, j| s.entry(i, j) * vt[j]);
        let svs = &sv * s.matrix();
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] += svs[(i, j)];
            }
        }
    }
    HermitianOperator::from_matrix(grid, m, format!("2Pg^2P + sech V_b sech (R={r}, {})", spec.label()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorComparison {
    pub relative_difference: f64,
    pub absolute_difference: f64,
    pub theory_norm: f64,
    pub bulk: BulkMask,
}

/// Relative spectral-norm distance of two Hermitian operators on the bulk block.
pub fn compare_commutators(
    direct: &HermitianOperator,
    theory: &HermitianOperator,
    bulk_fraction: f64,
) -> Result<CommutatorComparison> {
    direct.grid().same_as(theory.grid())?;
    let bulk = direct.grid().bulk(bulk_fraction)?;
    let k = bulk.len();
    let d = Mat::from_fn(k, k, |i, j| {
        direct.entry(bulk.start + i, bulk.start + j) - theory.entry(bulk.start + i, bulk.start + j)
    });
    let t = theory.block(bulk.start, bulk.end);
    let absolute_difference = linalg::hermitian_norm(d.as_ref())?;
    let theory_norm = linalg::hermitian_norm(t.as_ref())?;
    Ok(CommutatorComparison {
        relative_difference: absolute_difference / theory_norm,
        absolute_difference,
        theory_norm,
        bulk,
    })
}

/// Tridiagonal block of `<x> (k p² + diag(d)) <x>` on the bulk.
fn weighted_form(grid: &Grid, bulk: BulkMask, kinetic: f64, diag: &[f64]) -> Mat<f64> {
    let h2 = grid.h() * grid.h();
    let w: Vec<f64> = (bulk.start..bulk.end)
        .map(|j| (1.0 + grid.x(j).powi(2)).sqrt())
        .collect();
    let k = bulk.len();
    Mat::from_fn(k, k, |i, j| {
        if i == j {
            w[i] * w[i] * (2.0 * kinetic / h2 + diag[bulk.start + i])
        } else if i.abs_diff(j) == 1 {
            -w[i] * w[j] * kinetic / h2
        } else {
            0.0
        }
    })
}

/// `δ₀ = λ_min(<x>(2 sin 2β p² + 2Ṽ_β)<x>)` on the bulk; passes when `δ₀ > 0`.
pub fn check_analytic_repulsive(
    spec: &PotentialSpec,
    beta: f64,
    grid: &Grid,
    bulk_fraction: f64,
) -> Result<Certificate> {
    let bulk = grid.bulk(bulk_fraction)?;
    let vt: Vec<f64> = potentials::v_beta_samples(spec, grid, beta)?
        .into_iter()
        .map(|v| 2.0 * v)
        .collect();
    let form = weighted_form(grid, bulk, 2.0 * (2.0 * beta).sin(), &vt);
    real_block_certificate(
        "analytic_repulsive",
        format!("{} beta={beta} bulk={bulk_fraction}", spec.label()),
        grid,
        form,
        bulk,
        true,
    )
}

/// The same form without the kinetic term: `λ_min(<x> 2Ṽ_β <x>) > 0`.
pub fn check_analytic_repulsive_potential_only(
    spec: &PotentialSpec,
    beta: f64,
    grid: &Grid,
    bulk_fraction: f64,
) -> Result<Certificate> {
    let bulk = grid.bulk(bulk_fraction)?;
    let vt = potentials::v_beta_samples(spec, grid, beta)?;
    let eig: Vec<f64> = (bulk.start..bulk.end)
        .map(|j| 2.0 * vt[j] * (1.0 + grid.x(j).powi(2)))
        .collect();
    Ok(Certificate::from_spectrum(
        "analytic_repulsive_potential_only",
        format!("{} beta={beta} bulk={bulk_fraction}", spec.label()),
        &eig,
        0.0,
        bulk,
        grid,
        true,
    ))
}

/// `Ṽ_β >= 0` on the bulk (non-strict): the hypothesis of the monotone decay
/// of the incoming projection.
pub fn repulsive_hypothesis(spec: &PotentialSpec, beta: f64, grid: &Grid, bulk_fraction: f64) -> Result<Certificate> {
    let bulk = grid.bulk(bulk_fraction)?;
    let vt = potentials::v_beta_samples(spec, grid, beta)?;
    let eig: Vec<f64> = vt[bulk.start..bulk.end].to_vec();
    Ok(Certificate::from_spectrum(
        "v_beta_nonnegative",
        format!("{} beta={beta} bulk={bulk_fraction}", spec.label()),
        &eig,
        0.0,
        bulk,
        grid,
        false,
    ))
}

/// `H = p² + V >= 0` on the full grid.
pub fn nonnegative_hamiltonian(h: &HermitianOperator) -> Result<Certificate> {
    let mut c = min_eig_certificate(h, 1.0)?;
    c.name = "hamiltonian_nonnegative".to_string();
    c.params = h.label().to_string();
    Ok(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UncertaintyB {
    pub certificate: Certificate,
    pub smallest_passing_b: Option<f64>,
}

fn lemma_b_form(grid: &Grid, bulk: BulkMask, b: f64, sigma: f64) -> Mat<f64> {
    let h2 = grid.h() * grid.h();
    let k = bulk.len();
    let w: Vec<f64> = (bulk.start..bulk.end)
        .map(|j| (b * b + grid.x(j).powi(2)).powf(-0.5 * sigma))
        .collect();
    Mat::from_fn(k, k, |i, j| {
        if i == j {
            let x = grid.x(bulk.start + i);
            2.0 / h2 + w[i] * w[i] * (x * x - 0.25)
        } else if i.abs_diff(j) == 1 {
            -1.0 / h2
        } else {
            0.0
        }
    })
}

fn lemma_b_passes(grid: &Grid, bulk: BulkMask, b: f64, sigma: f64) -> Result<Certificate> {
    real_block_certificate(
        "uncertainty_b",
        format!("b={b} sigma={sigma} bulk={}", bulk.fraction),
        grid,
        lemma_b_form(grid, bulk, b, sigma),
        bulk,
        false,
    )
}

/// `p² + <x>_b^{-σ} x² <x>_b^{-σ} - <x>_b^{-2σ}/4 >= 0` on the bulk, plus a
/// bisection for the smallest b in `[1e-3, 1e3]` at which it holds.
pub fn uncertainty_lemma_b(grid: &Grid, b: f64, sigma: f64, bulk_fraction: f64) -> Result<UncertaintyB> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::param("b", format!("{b} must be positive")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", format!("{sigma} must be nonnegative")));
    }
    let bulk = grid.bulk(bulk_fraction)?;
    let certificate = lemma_b_passes(grid, bulk, b, sigma)?;
    let mut hi = if certificate.passed { b } else { b.max(1.0) };
    while !lemma_b_passes(grid, bulk, hi, sigma)?.passed {
        hi *= 2.0;
        if hi > 1e3 {
            return Ok(UncertaintyB {
                certificate,
                smallest_passing_b: None,
            });
        }
    }
    let mut lo = 1e-3;
    if lemma_b_passes(grid, bulk, lo, sigma)?.passed {
        return Ok(UncertaintyB {
            certificate,
            smallest_passing_b: Some(lo),
        });
    }
    for _ in 0..40 {
        let mid = (lo * hi).sqrt();
        if lemma_b_passes(grid, bulk, mid, sigma)?.passed {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi / lo < 1.0 + 1e-6 {
            break;
        }
    }
    Ok(UncertaintyB {
        certificate,
        smallest_passing_b: Some(hi),
    })
}

/// `C(λ, I) = λ_min(<x>(p² + λ χ_I)<x>)` on the bulk; passes when positive.
pub fn uncertainty_interval(grid: &Grid, lambda: f64, interval: (f64, f64), bulk_fraction: f64) -> Result<Certificate> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::param("lambda", format!("{lambda} must be nonnegative")));
    }
    let (a, b) = interval;
    if !(a < b && a >= grid.x_min() && b <= grid.x_max()) {
        return Err(Error::param("interval", format!("[{a}, {b}] not inside the grid")));
    }
    let bulk = grid.bulk(bulk_fraction)?;
    let chi: Vec<f64> = grid
        .points()
        .iter()
        .map(|&x| if x >= a && x <= b { lambda } else { 0.0 })
        .collect();
    real_block_certificate(
        "uncertainty_interval",
        format!("lambda={lambda} I=[{a},{b}] bulk={bulk_fraction}"),
        grid,
        weighted_form(grid, bulk, 1.0, &chi),
        bulk,
        true,
    )
}

/// `(1+ε) P g²(A/R) P - g(A/R) P² g(A/R) >= 0` on the bulk, with `P² = P·P`.
pub fn uncertainty_lemma_a(a: &SpectralDecomposition, r: f64, epsilon: f64, bulk_fraction: f64) -> Result<Certificate> {
    let grid = *a.grid();
    let p = momentum_op(&grid);
    let g2 = operators::g_squared_observable(a, r)?;
    let g = operators::g_observable(a, r, 0.0)?;
    let pg2p = linalg::product(p.times(&g2)?.as_ref(), None, p.matrix(), Some(1));
    let pp = HermitianOperator::from_matrix(grid, p.times(&p)?, "p.p")?;
    let gppg = pp.sandwich(&g)?;
    let n = grid.n();
    let m = Mat::from_fn(n, n, |i, j| pg2p[(i, j)] * (1.0 + epsilon) - gppg.entry(i, j));
    let bulk = grid.bulk(bulk_fraction)?;
    complex_block_certificate(
        "uncertainty_a",
        format!("R={r} eps={epsilon} bulk={bulk_fraction}"),
        &grid,
        m.as_ref(),
        bulk,
        0.0,
        false,
    )
}

/// Relative width of the tanh profiles used for energy and momentum cutoffs.
pub const CUTOFF_WIDTH: f64 = 0.05;
/// Relative width of the position cutoff.
pub const POSITION_WIDTH: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalizationPart {
    /// `F(H >= ℓ²/2) F(|x| >= c) F(|p| <= δℓ)`
    EnergeticOutside,
    /// `F(H >= 2ℓ²) F(|p| <= δℓ)`
    HighEnergySlow,
    /// `F(H <= ℓ²/2) F(|x| <= δ)`
    LowEnergyCore,
}

fn real_function(d: &SpectralDecomposition, f: impl Fn(f64) -> f64) -> Result<Mat<f64>> {
    let u = d
        .real_eigenvectors()
        .ok_or_else(|| Error::Eigen("expected a real symmetric operator".into()))?;
    let mut uf = u.to_owned();
    for (k, &l) in d.eigenvalues().iter().enumerate() {
        let v = f(l);
        uf.col_mut(k).iter_mut().for_each(|z| *z *= v);
    }
    Ok(&uf * u.transpose())
}

fn diag_times(d: &[f64], m: MatRef<'_, f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| d[i] * m[(i, j)])
}

fn real_spectral_norm(m: MatRef<'_, f64>) -> Result<f64> {
    let g = m.transpose() * m;
    let g = Mat::from_fn(g.nrows(), g.ncols(), |i, j| 0.5 * (g[(i, j)] + g[(j, i)]));
    let e = linalg::symmetric_eigenvalues(g.as_ref())?;
    Ok(e.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Spectral norm of a product of smoothed projections for `H = p² + ℓ² V`,
/// with `V(0) = 1`.
pub fn localization_norm(
    spec: &PotentialSpec,
    ell: u32,
    c_radius: f64,
    delta: f64,
    grid: &Grid,
    part: LocalizationPart,
) -> Result<f64> {
    let v0 = potentials::evaluate(spec, 0.0)?;
    if (v0 - 1.0).abs() > 1e-12 {
        return Err(Error::param("potential", format!("needs V(0) = 1, got {v0}")));
    }
    if !(delta > 0.0) {
        return Err(Error::param("delta", format!("{delta} must be positive")));
    }
    let l = ell as f64;
    let h = potentials::hamiltonian(grid, &PotentialSpec::scaled(ell, spec.clone()))?;
    let hd = eigendecompose(&h)?;
    let xs = grid.points();
    let m = match part {
        LocalizationPart::EnergeticOutside | LocalizationPart::HighEnergySlow => {
            let ld = eigendecompose(&laplacian_op(grid))?;
            let pth = delta * l;
            let fp = real_function(&ld, |e| {
                smooth_step(e.max(0.0).sqrt(), pth, Direction::Below, CUTOFF_WIDTH * pth)
            })?;
            if part == LocalizationPart::EnergeticOutside {
                if !(c_radius > 0.0) {
                    return Err(Error::param("c", format!("{c_radius} must be positive")));
                }
                let th = 0.5 * l * l;
                let fh = real_function(&hd, |e| smooth_step(e, th, Direction::Above, CUTOFF_WIDTH * th))?;
                let fx: Vec<f64> = xs
                    .iter()
                    .map(|x| smooth_step(x.abs(), c_radius, Direction::Above, POSITION_WIDTH * c_radius))
                    .collect();
                &fh * diag_times(&fx, fp.as_ref())
            } else {
                let th = 2.0 * l * l;
                let fh = real_function(&hd, |e| smooth_step(e, th, Direction::Above, CUTOFF_WIDTH * th))?;
                &fh * &fp
            }
        }
        LocalizationPart::LowEnergyCore => {
            let th = 0.5 * l * l;
            let fh = real_function(&hd, |e| smooth_step(e, th, Direction::Below, CUTOFF_WIDTH * th))?;
            let fx: Vec<f64> = xs
                .iter()
                .map(|x| smooth_step(x.abs(), delta, Direction::Below, POSITION_WIDTH * delta))
                .collect();
            Mat::from_fn(fh.nrows(), fh.ncols(), |i, j| fh[(i, j)] * fx[j])
        }
    };
    real_spectral_norm(m.as_ref())
}

/// Scalar function with derivatives up to third order.
pub trait SpectralFunction {
    fn derivative(&self, x: f64, order: usize) -> f64;
}

#[derive(Clone, Copy, Debug)]
pub struct ScaledTanh {
    pub r: f64,
}

impl SpectralFunction for ScaledTanh {
    fn derivative(&self, x: f64, order: usize) -> f64 {
        let t = (x / self.r).tanh();
        let s = 1.0 - t * t;
        match order {
            0 => t,
            1 => s / self.r,
            2 => -2.0 * t * s / self.r.powi(2),
            3 => s * (6.0 * t * t - 2.0) / self.r.powi(3),
            _ => panic!("derivative order {order} not supported"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Affine {
    pub slope: f64,
    pub intercept: f64,
}

impl SpectralFunction for Affine {
    fn derivative(&self, x: f64, order: usize) -> f64 {
        match order {
            0 => self.slope * x + self.intercept,
            1 => self.slope,
            _ => 0.0,
        }
    }
}

/// Remainders `‖i[B, f(A)]v - Σ_{k<=K} f^{(k)}(A) i ad_A^k(B) v / k!‖ / ‖i[B, f(A)]v‖`
/// for K = 1..=order, maximized over the test vectors.
pub fn commutator_expansion_check(
    b: &HermitianOperator,
    a: &SpectralDecomposition,
    f: &dyn SpectralFunction,
    order: usize,
    test_vectors: &[Vec<c64>],
) -> Result<Vec<f64>> {
    if !(1..=3).contains(&order) {
        return Err(Error::param("order", format!("{order} not in 1..=3")));
    }
    b.grid().same_as(a.grid())?;
    let amat = a.apply_function(|l| l, "A")?;
    let apply_a = |v: &[c64]| amat.apply(v);
    fn ad(k: usize, v: &[c64], b: &HermitianOperator, apply_a: &dyn Fn(&[c64]) -> Vec<c64>) -> Vec<c64> {
        if k == 0 {
            return b.apply(v);
        }
        let left = ad(k - 1, &apply_a(v), b, apply_a);
        let right = apply_a(&ad(k - 1, v, b, apply_a));
        left.iter().zip(&right).map(|(x, y)| x - y).collect()
    }
    let mut worst = vec![0.0_f64; order];
    for v in test_vectors {
        let fv = a.apply_to_vector(|l| f.derivative(l, 0), v)?;
        let bfv = b.apply(&fv);
        let bv = b.apply(v);
        let fbv = a.apply_to_vector(|l| f.derivative(l, 0), &bv)?;
        let exact: Vec<c64> = bfv.iter().zip(&fbv).map(|(x, y)| (x - y) * linalg::I).collect();
        let scale = linalg::norm(&exact);
        let mut partial = vec![ZERO; v.len()];
        let mut fact = 1.0;
        for k in 1..=order {
            fact *= k as f64;
            let adk = ad(k, v, b, &apply_a);
            let term = a.apply_to_vector(|l| f.derivative(l, k), &adk)?;
            for (p, t) in partial.iter_mut().zip(&term) {
                *p += t * linalg::I / fact;
            }
            let rem: Vec<c64> = exact.iter().zip(&partial).map(|(x, y)| x - y).collect();
            let r = if scale > 0.0 {
                linalg::norm(&rem) / scale
            } else {
                linalg::norm(&rem)
            };
            worst[k - 1] = worst[k - 1].max(r);
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbKind {
    /// `tanh(A/R)`; the propagation observable is `i` times this.
    B1Tanh,
    B2ProjPlus,
    B2ProjMinus,
    /// `F^±_M i<x>_b^{-m} + c.c.`
    BSigmaM {
        m: f64,
        sign: Sign,
    },
    /// `F^±_M (b^{-σ} - <x>_b^{-σ}) + c.c.`
    WeightedProjection {
        sign: Sign,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbParams {
    pub r: f64,
    pub m_threshold: f64,
    pub b: f64,
    pub sigma: f64,
}

pub fn build_prob(kind: ProbKind, a: &SpectralDecomposition, params: ProbParams) -> Result<HermitianOperator> {
    let ProbParams {
        r,
        m_threshold,
        b,
        sigma,
    } = params;
    let proj = |s: Sign| match s {
        Sign::Plus => outgoing_projection(a, m_threshold, r),
        Sign::Minus => incoming_projection(a, m_threshold, r),
    };
    let grid = *a.grid();
    match kind {
        ProbKind::B1Tanh => operators::tanh_observable(a, r),
        ProbKind::B2ProjPlus => proj(Sign::Plus),
        ProbKind::B2ProjMinus => proj(Sign::Minus),
        ProbKind::BSigmaM { m, sign } => {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(Error::param("m", format!("{m} must be nonnegative")));
            }
            let f = proj(sign)?;
            let w = operators::weight_op(&grid, b, m)?;
            let fw = f.times(&w)?;
            let n = grid.n();
            let mat = Mat::from_fn(n, n, |i, j| {
                let d = fw[(i, j)] - fw[(j, i)].conj();
                c64::new(-d.im, d.re)
            });
            HermitianOperator::from_matrix(grid, mat, format!("B^sigma_{m}({sign:?})"))
        }
        ProbKind::WeightedProjection { sign } => {
            let f = proj(sign)?;
            let top = operators::weight_op(&grid, b, sigma)?;
            let bs = b.powf(-sigma);
            let chi2: Vec<f64> = top.diagonal_values().iter().map(|w| bs - w).collect();
            let n = grid.n();
            let mat = Mat::from_fn(n, n, |i, j| f.entry(i, j) * (chi2[i] + chi2[j]));
            HermitianOperator::from_matrix(grid, mat, format!("F({sign:?})(b^-s - <x>_b^-s) + c.c."))
        }
    }
}

/// Gaussian packets `e^{-(x-c)²/(2w²) + ikx}` normalized in the Euclidean norm.
pub fn gaussian_packets(grid: &Grid, centers: &[f64], width: f64, momenta: &[f64]) -> Vec<Vec<c64>> {
    let mut out = Vec::new();
    for &c in centers {
        for &k in momenta {
            let v: Vec<c64> = grid
                .points()
                .iter()
                .map(|&x| c64::new(0.0, k * x).exp() * (-(x - c).powi(2) / (2.0 * width * width)).exp())
                .collect();
            let nv = linalg::norm(&v);
            out.push(v.into_iter().map(|z| z / nv).collect());
        }
    }
    out
}
