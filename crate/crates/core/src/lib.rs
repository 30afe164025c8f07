//! Two-dimensional differential geometry around the Mercator projection.
//!
//! - [`specialfun`]: the Gudermannian family and κ-deformed exp/log functions.
//! - [`geometry`]: charts, vielbeins, Weizenböck connections, torsion,
//!   curvature, anholonomy and conformal rescaling.
//! - [`autoparallel`]: loxodromes on the sphere and pseudosphere as
//!   auto-parallels of torsionful connections, with an RK4 tracer.
//! - [`gaussfam`]: the Gaussian family's Fisher–Rao geometry, its pseudosphere
//!   chart and the conformally flattened plane.
//! - [`verify`]: the numerical checks run by `loxo verify`.

#![allow(clippy::needless_range_loop)]

pub mod autoparallel;
pub mod error;
pub mod fixtures;
pub mod gaussfam;
pub mod geometry;
pub mod linalg;
pub mod quadrature;
pub mod specialfun;
pub mod verify;

pub use error::{Error, Result};
