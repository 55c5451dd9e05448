//! Numerical companion for proper 1-cocycles of the rank-one groups
//! `SO₀(n,1)`, `SU(n,1)` and `Sp(n,1)`.
//!
//! The crate is layered bottom-up:
//!
//! | module | contents |
//! |--------|----------|
//! | [`scalars`] | one scalar type over ℝ, ℂ, ℍ |
//! | [`groups`] | the matrix groups `O(q)`, the subgroups `A`, `V`, `N`, `K`, `P`, disk and sphere actions, distance, Cayley transform, Iwasawa `t` |
//! | [`heisenberg`] | the stratified group `V`: group law, dilations, homogeneous norm, grids, left-invariant fields, sub-Laplacian |
//! | [`spectral`] | fractional powers, Sobolev norms on `V`, Fourier/harmonic analysis on `S¹`/`S²`, `W₀` and dual norms |
//! | [`cocycles`] | the Busemann cocycle and the visual-measure cocycle with their actions |
//! | [`experiments`] | verification experiments emitting [`experiments::CocycleReport`] |
//!
//! All arithmetic is 64-bit floating point.

pub mod cocycles;
pub mod error;
pub mod experiments;
pub mod groups;
pub mod heisenberg;
pub mod scalars;
pub mod spectral;

pub use error::{Error, Result};
pub use groups::{BoundaryPoint, DiskPoint, GroupElement, GroupParams};
pub use heisenberg::HeisElement;
pub use scalars::{FieldTag, Scalar};
