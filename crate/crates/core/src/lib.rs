//! Parameter-uniform solver for singularly perturbed convection-diffusion
//! problems whose initial data jump at a single point.
//!
//! The jump is removed analytically: an erfc-based singular part travelling
//! along the characteristic `d'(t) = a(t)` is subtracted, and the smooth
//! remainder is solved with an upwind, implicit-Euler finite difference
//! scheme on a Shishkin mesh. Convergence is estimated with the two-mesh
//! method, since the exact solutions of interest are unknown.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the example
//! registry and the command line live in the `spcd` crate.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
mod error;
mod math;
pub mod mesh;
pub mod problem;
pub mod quad;
pub mod singular;
pub mod solver;
pub mod tridiag;

pub use analysis::{bilinear_eval, order, two_mesh_difference, two_mesh_series, MRule, Series, TwoMeshReport};
pub use error::{Error, Result};
pub use mesh::{build_space_mesh, build_time_mesh, select_time_mesh, SpaceMesh, TensorMesh, TimeMesh, TimeMeshKind};
pub use problem::{CharacteristicCurve, Convection, InitialCondition, Piece, ProblemSpec, ScalarField1, ScalarField2};
pub use singular::{erfc, Level, RemainderData, SingularBasis};
pub use solver::{reconstruct_u, solve, solve_remainder, solve_remainder_with_residual, DiscreteProblem, GridFunction};
pub use tridiag::tridiagonal_solve;
