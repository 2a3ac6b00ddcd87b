//! Cylinder kernels and the renormalized vacuum stress tensor of a massless
//! scalar field on cones, the Dowker manifold, wedges and flat space.
//!
//! The kernel `T̄(x, x')` is related to the Wightman function by
//! `⟨φ(x)φ(x')⟩ = -½ T̄`. Stress components are second derivatives of `T̄`
//! at a point split in Euclidean time, computed exactly with [`jets`].

// `!(x > 0.0)` is the idiom for rejecting NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extrapolate;
pub mod geometry;
pub mod jets;
pub mod kernels;
pub mod oracles;
pub mod quadrature;
pub mod special;
pub mod stress;

pub use error::{Error, Result};
pub use geometry::{
    u_consistency, u_formulas, u_of_pair, BoundaryCondition, Coupling, Geometry, PointPair,
    UFormulas, UVariable,
};
pub use jets::{lift, ActiveSet, Coord, Jet2, Scalar};
pub use kernels::{tbar, KernelForm};
pub use oracles::{run_oracle_suite, OracleReport, ORACLE_NAMES};
pub use stress::{
    conservation_residual, stress_at, stress_t0, trace, zero_point_stress, ExtrapolatedStress,
    FieldPoint, Ladder, RenormMode, StressTensor,
};
