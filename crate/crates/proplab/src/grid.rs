use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Dirichlet,
}

/// Uniform lattice `x_j = x_min + j h` with zero boundary values outside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    x_min: f64,
    x_max: f64,
    h: f64,
    boundary: Boundary,
}

/// Contiguous index window `[start, end)` used to restrict quadratic forms
/// away from the walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BulkMask {
    pub start: usize,
    pub end: usize,
    pub fraction: f64,
}

impl BulkMask {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, j: usize) -> bool {
        j >= self.start && j < self.end
    }
}

pub const MIN_POINTS: usize = 16;

impl Grid {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Grid> {
        if n < MIN_POINTS {
            return Err(Error::Grid(format!(
                "n = {n} is too small (need at least {MIN_POINTS})"
            )));
        }
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(Error::Grid(format!("bad extent [{x_min}, {x_max}]")));
        }
        let h = (x_max - x_min) / (n - 1) as f64;
        Ok(Grid {
            n,
            x_min,
            x_max,
            h,
            boundary: Boundary::Dirichlet,
        })
    }

    pub fn symmetric(n: usize, half_width: f64) -> Result<Grid> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::Grid(format!(
                "half width {half_width} must be positive and finite"
            )));
        }
        Grid::new(n, -half_width, half_width)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.x_max - self.x_min)
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.x_max + self.x_min)
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.h
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * self.x_max.abs().max(1.0)
    }

    pub fn require_symmetric(&self, what: &str) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::Grid(format!(
                "{what} needs a grid symmetric about the origin, got [{}, {}]",
                self.x_min, self.x_max
            )))
        }
    }

    /// Indices whose distance from the center is at most `fraction` of the
    /// half width.
    pub fn bulk(&self, fraction: f64) -> Result<BulkMask> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::param("bulk_fraction", format!("{fraction} not in (0, 1]")));
        }
        if fraction == 1.0 {
            return Ok(BulkMask {
                start: 0,
                end: self.n,
                fraction,
            });
        }
        let c = self.center();
        let radius = fraction * self.half_width() * (1.0 + 1e-12);
        let mut start = self.n;
        let mut end = 0;
        for j in 0..self.n {
            if (self.x(j) - c).abs() <= radius {
                start = start.min(j);
                end = j + 1;
            }
        }
        if end <= start {
            return Err(Error::param(
                "bulk_fraction",
                format!("{fraction} leaves no grid points"),
            ));
        }
        Ok(BulkMask { start, end, fraction })
    }

    pub fn same_as(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "n={} [{}, {}] vs n={} [{}, {}]",
                self.n, self.x_min, self.x_max, other.n, other.x_min, other.x_max
            )))
        }
    }
}

pub fn make_grid(n: usize, half_width: f64) -> Result<Grid> {
    Grid::symmetric(n, half_width)
}
