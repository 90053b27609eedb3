pub mod cdc;
pub mod classify;
pub mod cli;
pub mod error;
pub mod groebner;
pub mod kahler;
pub mod modlin;
pub mod oracle;
pub mod polycore;
pub mod presentations;

pub use error::{Error, Result};

#[cfg(test)]
mod test_support;
