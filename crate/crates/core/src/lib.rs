//! Scalar curvature of warped products over the 2-sphere, geometry of
//! rotationally symmetric spheres, and the classical bounds relating
//! scalar curvature, diameter and injectivity radius.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod curvature;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod radial;
pub mod search;

pub use error::{Error, Result};
