//! Analytic model, Monte-Carlo simulator and exhaustive oracle for
//! SIC-based random access with access-class barring.

pub mod analytic;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod sim;

pub use error::{Error, Result};
