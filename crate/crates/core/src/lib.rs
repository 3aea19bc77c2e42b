//! Construction and verification of monotile tilings of finitely generated
//! groups via swinger elements.

pub mod boundary;
pub mod cli;
pub mod error;
pub mod group;
pub mod oracle;
pub mod swinger;
pub mod tiler;

pub use error::{Error, Result};
pub use group::{Ball, GroupBackend, Letter, Word};
