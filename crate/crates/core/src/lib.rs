//! Curve shortening flow on the unit sphere.

// Parameter checks are written `!(x > 0.0)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod curve;
pub mod flow;
pub mod geom;
pub mod graph;
pub mod io;
pub mod jordan;
pub mod levelset;
pub mod verify;
pub mod harness;

pub use error::{Error, Result};
