//! Heyting-valued models of set theory over finite algebras, and their
//! transport along locale morphisms.

pub mod catalog;
pub mod hset;
pub mod lattice;
pub mod names;
pub mod transfer;
pub mod valuation;
