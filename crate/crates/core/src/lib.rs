pub mod cli;
pub mod config;
pub mod constants;
pub mod electrostatics;
pub mod error_budget;
pub mod hyperfine;
#[cfg_attr(not(test), allow(dead_code))]
mod oracle;
pub mod spin;
pub mod validation;
