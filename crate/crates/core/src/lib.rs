//! Exact-arithmetic homological algebra: simplicial and filtered complexes,
//! transferred higher coalgebra and algebra structures, barcodes for homology
//! and for higher-operation kernels, and Massey product computations, all
//! over the rationals or a prime field.

pub mod ainfty;
pub mod apersist;
pub mod chain;
pub mod cobar;
pub mod contraction;
pub mod diagonal;
pub mod error;
pub mod field;
pub mod graded;
pub mod grid;
pub mod massey;
pub mod matrix;
pub mod persistence;
pub mod reference;
pub mod rips;
pub mod simplicial;
pub mod subspace;
pub mod transfer;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use matrix::{Reduction, SparseMatrix, SparseVec};
pub use subspace::Subspace;
