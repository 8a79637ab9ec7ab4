//! Exact character theory for small finite groups: character tables over cyclotomic
//! integers, principal-block membership, and counts of factorizations through
//! p-regular sets and p-sections.

pub mod analysis;
pub mod arith;
pub mod blocks;
pub mod chartable;
pub mod classes;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod modp;
pub mod structure;
pub mod verifier;

pub use analysis::Analysis;
pub use error::{Error, Result};
