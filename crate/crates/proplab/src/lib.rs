//! Propagation observables built from the dilation generator, positivity
//! certificates for commutator inequalities, and monotone local-decay
//! experiments for Schrödinger and wave flows on a 1-D Dirichlet grid.

pub mod certify;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod experiments;
pub mod grid;
pub mod linalg;
pub mod operators;
pub mod potentials;

pub use error::{Error, Result};
pub use faer::c64;
pub use grid::{make_grid, BulkMask, Grid};
pub use operators::{eigendecompose, HermitianOperator, SpectralDecomposition};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
