//! Moduli of rational tropical stable maps to a smooth tropical curve.
//!
//! The library builds, for a smooth tropical curve L in R^r and a degree
//! (a tuple of integer end directions), the space of rational stable maps
//! with that degree as a weighted polyhedral complex in tree-distance
//! coordinates, computes cell weights from local cover counts and an
//! exact lattice-index matrix, and verifies the balancing condition at
//! every codimension-one cell. All arithmetic is exact (big rationals).
//!
//! Module map:
//! - [`linalg`]: exact integer/rational linear algebra (determinants, gcd
//!   of maximal minors, kernels, lattice bases).
//! - [`lp`]: exact rational simplex, used for strict feasibility of cells.
//! - [`trees`]: distance coordinates on the space of labeled metric
//!   trees, split vectors, the lineality quotient and its lattice.
//! - [`target`]: smooth tropical curves (targets) and their validation.
//! - [`hurwitz`]: transitive factorization counts in symmetric groups
//!   (local cover multiplicities).
//! - [`stablemap`]: combinatorial types of stable maps and their
//!   enumeration.
//! - [`localfan`]: the one-dimensional local fan of resolutions at a
//!   vertex and its balancing.
//! - [`complex`]: assembly of the global complex, weights, embedding,
//!   and the global balancing check.
//! - [`io`]: JSON serialization (schema `msl-fan/1`) and job configs.

pub mod complex;
pub mod hurwitz;
pub mod io;
pub mod linalg;
pub mod localfan;
pub mod lp;
pub mod stablemap;
pub mod target;
pub mod trees;
