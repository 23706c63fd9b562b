//! Expected numbers of real roots of random real Laurent polynomial systems,
//! the convex geometry behind them (Newton polytopes, Newton ellipsoids,
//! mixed volumes), Monte Carlo checks, and zero densities of exponential
//! sums.

pub mod cli;
pub mod convex;
pub mod ellipsoids;
pub mod error;
pub mod expsum;
pub mod kac;
mod linalg;
pub mod mc;
pub mod mc_lab;
pub mod output;
pub mod spectra;
pub mod zerofan;

pub use error::{Error, Result};
