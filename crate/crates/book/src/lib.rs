//! The guide under `book/` cannot pull in workspace crates when mdbook runs
//! its own tests, so each chapter is mounted here and checked by
//! `cargo test --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod chapter0 {}
#[doc = include_str!("../../../book/src/geometry.md")]
pub mod chapter1 {}
#[doc = include_str!("../../../book/src/circles.md")]
pub mod chapter2 {}
#[doc = include_str!("../../../book/src/monitors.md")]
pub mod chapter3 {}
#[doc = include_str!("../../../book/src/graphs.md")]
pub mod chapter4 {}
#[doc = include_str!("../../../book/src/multiplicity.md")]
pub mod chapter5 {}
#[doc = include_str!("../../../book/src/straightening.md")]
pub mod chapter6 {}
#[doc = include_str!("../../../book/src/levelsets.md")]
pub mod chapter7 {}
#[doc = include_str!("../../../book/src/harness.md")]
pub mod chapter8 {}
