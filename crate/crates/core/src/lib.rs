//! Two-parameter R-matrix from a limit of the Fateev–Zamolodchikov model,
//! the quantum chains it generates, and numerical checks of their
//! integrability: Yang–Baxter identities, dihedral Drinfeld-double symmetry,
//! fusion relations and Bethe equations.

pub mod bethe;
pub mod chain;
pub mod context;
pub mod dihedral;
pub mod dump;
pub mod eigen;
pub mod error;
pub mod fz;
pub mod linalg;
pub mod poly;
pub mod sampling;
pub mod suites;
pub mod transfer;

pub use bethe::{bethe_sweep, BetheReport, BetheRoots, Classification};
pub use chain::{Boundary, BraidPoint, ChainSpec};
pub use context::RootContext;
pub use dihedral::{DihedralElement, DoubleElement};
pub use dump::{DumpMeta, MatrixDump};
pub use error::{Error, Result};
pub use fz::SpectralPoint;
pub use linalg::{CMatrix, Complex64};
pub use suites::{run_suite, Check, Suite, SuiteConfig, SuiteReport};
pub use transfer::{FusionReport, T2Family};

/// Default cap on the chain Hilbert-space dimension `n^L`.
pub const DEFAULT_DIM_CAP: usize = 4096;
