//! A categorical database engine.
//!
//! Schemas are finitely presented categories, instances are set-valued
//! functors stored as tables, and queries are lifting problems against the
//! category of elements of an instance.

pub mod cat;
pub mod error;
pub mod fibration;
pub mod instance;
pub mod io;
pub mod migration;
pub mod pattern;
pub mod query;
pub mod solver;
#[cfg(test)]
mod testkit;
mod util;

pub use error::{Error, Result};

/// Default path-length bound for enumerations that may not terminate.
pub const DEFAULT_BOUND: usize = 16;
