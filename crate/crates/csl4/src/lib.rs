//! Exact computations with coincidence site lattices (CSLs) of the two
//! 4-dimensional hypercubic lattices: the primitive lattice `Z^4` and the
//! face-centered lattice `D4`.
//!
//! A rotation `R` is a coincidence rotation of a lattice `L` when
//! `L ∩ R L` has finite index in `L`; that intersection is the CSL and the
//! index is its Sigma value. Every rational rotation of 4-space comes from
//! an admissible pair of integer quaternions `(p, q)` acting as
//! `x -> p x conj(q) / |pq|`, and all Sigma arithmetic reduces to quaternion
//! arithmetic. This crate provides:
//!
//! * exact integer linear algebra (Hermite/Smith normal forms, kernels),
//! * integer quaternions, admissible pairs and the rotation construction,
//! * lattice intersection as an independent brute-force Sigma oracle,
//! * the finite symmetry (double cover) groups and their double cosets,
//! * closed-form counting functions for the number of distinct and
//!   inequivalent CSLs per Sigma,
//! * exhaustive enumeration/verification drivers and a 3D cubic oracle.
//!
//! Everything is integer or rational arithmetic; there is no floating point
//! anywhere in the computational core.

pub mod counting;
pub mod cubic3;
pub mod enumerate;
pub mod intmat;
pub mod lattice;
pub mod quat;
pub mod rot4;
pub mod symgroup;

mod error;

pub use error::{Error, Result};
pub use intmat::{IntMatrix, Rational};
pub use lattice::{Lattice4, LatticeKind};
pub use quat::{PrimQuat, Quat, SigmaDecomp};
pub use rot4::Rot4;
