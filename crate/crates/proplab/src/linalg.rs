//! Dense helpers on top of faer: banded products, Hermitian eigen solves with
//! a real fast path, block extraction.

use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

/// Largest |i - j| with a nonzero entry, or `None` when it exceeds `limit`.
pub fn band_of(m: MatRef<'_, c64>, limit: usize) -> Option<usize> {
    let n = m.nrows();
    let mut w = 0usize;
    for j in 0..m.ncols() {
        for i in 0..n {
            let d = i.abs_diff(j);
            if d > w && m[(i, j)] != ZERO {
                if d > limit {
                    return None;
                }
                w = d;
            }
        }
    }
    Some(w)
}

fn banded_left(a: MatRef<'_, c64>, w: usize, b: MatRef<'_, c64>) -> Mat<c64> {
    let n = a.nrows();
    Mat::from_fn(n, b.ncols(), |i, j| {
        let lo = i.saturating_sub(w);
        let hi = (i + w + 1).min(a.ncols());
        let mut s = ZERO;
        for k in lo..hi {
            s += a[(i, k)] * b[(k, j)];
        }
        s
    })
}

fn banded_right(a: MatRef<'_, c64>, b: MatRef<'_, c64>, w: usize) -> Mat<c64> {
    let m = b.ncols();
    Mat::from_fn(a.nrows(), m, |i, j| {
        let lo = j.saturating_sub(w);
        let hi = (j + w + 1).min(b.nrows());
        let mut s = ZERO;
        for k in lo..hi {
            s += a[(i, k)] * b[(k, j)];
        }
        s
    })
}

/// `a * b`, exploiting a known bandwidth on either side.
pub fn product(a: MatRef<'_, c64>, band_a: Option<usize>, b: MatRef<'_, c64>, band_b: Option<usize>) -> Mat<c64> {
    assert_eq!(a.ncols(), b.nrows(), "dimension mismatch in product");
    match (band_a, band_b) {
        (Some(w), _) => banded_left(a, w, b),
        (None, Some(w)) => banded_right(a, b, w),
        (None, None) => a * b,
    }
}

pub fn matvec(m: MatRef<'_, c64>, band: Option<usize>, v: &[c64]) -> Vec<c64> {
    let n = m.nrows();
    assert_eq!(m.ncols(), v.len());
    let mut out = vec![ZERO; n];
    match band {
        Some(w) => {
            for (i, o) in out.iter_mut().enumerate() {
                let lo = i.saturating_sub(w);
                let hi = (i + w + 1).min(v.len());
                for (k, vk) in v.iter().enumerate().take(hi).skip(lo) {
                    *o += m[(i, k)] * vk;
                }
            }
        }
        None => {
            for (k, vk) in v.iter().enumerate() {
                if *vk == ZERO {
                    continue;
                }
                for (i, o) in out.iter_mut().enumerate() {
                    *o += m[(i, k)] * vk;
                }
            }
        }
    }
    out
}

pub fn is_real(m: MatRef<'_, c64>) -> bool {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)].im != 0.0 {
                return false;
            }
        }
    }
    true
}

pub fn real_part(m: MatRef<'_, c64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

pub fn to_complex(m: MatRef<'_, f64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| c64::new(m[(i, j)], 0.0))
}

pub fn submatrix(m: MatRef<'_, c64>, start: usize, end: usize) -> Mat<c64> {
    let k = end - start;
    Mat::from_fn(k, k, |i, j| m[(start + i, start + j)])
}

pub fn submatrix_real(m: MatRef<'_, f64>, start: usize, end: usize) -> Mat<f64> {
    let k = end - start;
    Mat::from_fn(k, k, |i, j| m[(start + i, start + j)])
}

/// `Π M Π` with Π the index reversal.
pub fn reversed(m: MatRef<'_, c64>) -> Mat<c64> {
    let n = m.nrows();
    Mat::from_fn(n, n, |i, j| m[(n - 1 - i, n - 1 - j)])
}

pub fn frobenius(m: MatRef<'_, c64>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

pub fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut s: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s = s.max(m[(i, j)].norm());
        }
    }
    s
}

/// Eigenpairs of a Hermitian matrix, ascending. Real symmetric input goes
/// through the real solver and the real eigenvectors are returned as well.
pub fn hermitian_eigen(m: MatRef<'_, c64>) -> Result<(Vec<f64>, Mat<c64>, Option<Mat<f64>>)> {
    if is_real(m) {
        let r = real_part(m);
        let e = r
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = e.S().column_vector();
        let vals: Vec<f64> = (0..r.nrows()).map(|i| s[i]).collect();
        let u = e.U().to_owned();
        Ok((vals, to_complex(u.as_ref()), Some(u)))
    } else {
        let e = m
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let s = e.S().column_vector();
        let vals: Vec<f64> = (0..m.nrows()).map(|i| s[i].re).collect();
        Ok((vals, e.U().to_owned(), None))
    }
}

pub fn hermitian_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    if is_real(m) {
        symmetric_eigenvalues(real_part(m).as_ref())
    } else {
        let v = m
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        Ok(v)
    }
}

pub fn symmetric_eigenvalues(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(m: MatRef<'_, c64>) -> Result<f64> {
    let v = hermitian_eigenvalues(m)?;
    Ok(v.iter().fold(0.0_f64, |a, x| a.max(x.abs())))
}

/// Spectral norm of an arbitrary square matrix, via the largest eigenvalue of `M^H M`.
pub fn spectral_norm(m: MatRef<'_, c64>) -> Result<f64> {
    let g = m.adjoint() * m;
    let g = Mat::from_fn(g.nrows(), g.ncols(), |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
    let v = hermitian_eigenvalues(g.as_ref())?;
    Ok(v.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

pub fn dot(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[c64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(n: usize) -> Mat<c64> {
        Mat::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => c64::new(2.0 + i as f64, 0.0),
            1 => c64::new(-1.0, if i < j { 0.5 } else { -0.5 }),
            _ => ZERO,
        })
    }

    #[test]
    fn banded_products_match_dense() {
        let n = 20;
        let a = tri(n);
        let b = Mat::from_fn(n, n, |i, j| {
            c64::new((i * 7 + j) as f64 % 5.0, (i + 3 * j) as f64 % 3.0)
        });
        assert_eq!(band_of(a.as_ref(), 4), Some(1));
        let dense = &a * &b;
        let l = product(a.as_ref(), Some(1), b.as_ref(), None);
        let r = product(b.as_ref(), None, a.as_ref(), Some(1));
        let dense_r = &b * &a;
        for j in 0..n {
            for i in 0..n {
                assert!((dense[(i, j)] - l[(i, j)]).norm() < 1e-12);
                assert!((dense_r[(i, j)] - r[(i, j)]).norm() < 1e-12);
            }
        }
        let v: Vec<c64> = (0..n).map(|k| c64::new(k as f64, 1.0)).collect();
        let y1 = matvec(a.as_ref(), Some(1), &v);
        let y2 = matvec(a.as_ref(), None, &v);
        for k in 0..n {
            assert!((y1[k] - y2[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn eigen_paths_agree() {
        let a = tri(12);
        let (vals, u, real) = hermitian_eigen(a.as_ref()).unwrap();
        assert!(real.is_none());
        for w in vals.windows(2) {
            assert!(w[0] <= w[1]);
        }
        let only = hermitian_eigenvalues(a.as_ref()).unwrap();
        for (x, y) in vals.iter().zip(&only) {
            assert!((x - y).abs() < 1e-12);
        }
        let uu = u.adjoint() * &u;
        for i in 0..12 {
            assert!((uu[(i, i)].re - 1.0).abs() < 1e-12);
        }
        let r = Mat::from_fn(12, 12, |i, j| c64::new(a[(i, j)].re, 0.0));
        let (_, _, real) = hermitian_eigen(r.as_ref()).unwrap();
        assert!(real.is_some());
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let d = Mat::from_fn(5, 5, |i, j| if i == j { c64::new(i as f64 - 3.0, 0.0) } else { ZERO });
        assert!((spectral_norm(d.as_ref()).unwrap() - 3.0).abs() < 1e-12);
        assert!((hermitian_norm(d.as_ref()).unwrap() - 3.0).abs() < 1e-12);
    }
}
