//! Static and dynamical chiral Casimir–Polder forces between a chiral
//! molecule and a perfectly reflecting chiral mirror.

pub mod cli;
pub mod constants;
pub mod error;
pub mod mirror;
pub mod molecule;
pub mod oracle;
pub mod response;
pub mod specfun;

pub use error::{Error, Result};
