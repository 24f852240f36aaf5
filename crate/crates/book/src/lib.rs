//! The guide in `book/src`, compiled so that its listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/algebras.md")]
pub mod algebras {}

#[doc = include_str!("../../../book/src/names.md")]
pub mod names {}

#[doc = include_str!("../../../book/src/valuation.md")]
pub mod valuation {}

#[doc = include_str!("../../../book/src/lifting.md")]
pub mod lifting {}

#[doc = include_str!("../../../book/src/preservation.md")]
pub mod preservation {}

#[doc = include_str!("../../../book/src/hsets.md")]
pub mod hsets {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
