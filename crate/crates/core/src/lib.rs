//! Exact-arithmetic toolkit for BiHom-associative dialgebras.
//!
//! Everything is computed over the rationals with no floating point:
//! axiom checks, derivation spaces, tree-indexed cochains and their
//! cohomology, the operad structure on those cochains, and truncated formal
//! deformations.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod cohomology;
pub mod deformation;
pub mod derivations;
pub mod operad;
pub mod par;
pub mod scalars;
pub mod trees;

pub use algebra::{BiHomAssociativeAlgebra, BiHomDialgebra, Op, StructureTensor};
pub use scalars::{Mat, Scalar, Subspace};
