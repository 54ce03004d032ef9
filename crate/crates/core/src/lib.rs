//! Exact computations on the ideal structure of finite direct sums of
//! upper-triangular matrix algebras and of towers of such algebras.
//!
//! Everything works on the matrix-unit system: an ideal is the set of units
//! it contains, embeddings are families of order-preserving strands, and
//! representations act on diagonal labels.

pub mod algebra;
pub mod bitset;
pub mod dot;
pub mod error;
pub mod hull_kernel;
pub mod ideal;
pub mod lattice;
pub mod nest_rep;
pub mod towers;

pub use algebra::{AlgebraShape, MatrixUnit};
pub use error::{Error, Result};
pub use ideal::{Ideal, StaircaseProfile};
pub use lattice::{enumerate_ideals, meet_irreducibles, Classification, IdealLattice};
