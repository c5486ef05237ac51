//! Sweeps, reports and table output built on the solvers.

pub mod config;
pub mod convergence;
pub mod figure;
pub mod model;
pub mod output;
pub mod semigroup;
pub mod tables;

pub use config::{LabConfig, PanelFn, Scenario, SweepSpec};
pub use convergence::{run_convergence, ConvergenceReport};
pub use figure::{figure_one, FigureTable};
pub use model::Model;
pub use semigroup::{semigroup_via_resolvent, SemigroupResult};
