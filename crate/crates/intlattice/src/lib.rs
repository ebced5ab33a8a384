//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! kernels, lattice membership, sums, equality and quotient invariants.
//!
//! All arithmetic is exact. Machine integers are used while values fit and
//! promote to big integers transparently.

pub mod hnf;
pub mod int;
pub mod kernel;
pub mod lattice;
pub mod matrix;
pub mod snf;

pub use hnf::{hermite_normal_form, hnf_basis, is_hnf, Combo, Echelon};
pub use int::Int;
pub use kernel::{kernel_basis, kernel_basis_dense, kernel_vectors};
pub use lattice::{
    lattice_equal, lattice_sum, quotient_invariants, quotient_of_rows, ChartSpan,
    QuotientInvariants, SubLattice,
};
pub use matrix::{IntMatrix, SparseMatrix};
pub use snf::{invariant_factors, rank, smith_normal_form, Snf};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis vector {index} of the smaller lattice is not in the larger one")]
    NotContained { index: usize, vector: Vec<Int> },
    #[error("basis is not in canonical Hermite form")]
    NotCanonical,
}
