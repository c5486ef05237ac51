//! Drift-perturbed diffusions on intervals and star graphs: Sturm–Liouville
//! solvers, resolvents of the approximating and limiting processes, Monte
//! Carlo path simulation, and a small experiment harness.

pub mod drift;
pub mod error;
pub mod grid;
pub mod harness;
pub mod montecarlo;
pub mod params;
pub mod quadrature;
pub mod resolvent;
pub mod sturm_liouville;

pub use error::{Error, Result};
