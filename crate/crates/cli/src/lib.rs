//! File formats and command implementations behind the `catlift` binary.

pub mod cmd;
pub mod dsl;
