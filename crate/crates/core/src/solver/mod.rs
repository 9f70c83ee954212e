//! Radii, candidate vertices and the optimizers that tie them together.

pub mod bounds;
pub mod objective;
pub mod optimize;
pub mod overlap;
pub mod strategy;
pub mod vertex;

pub use bounds::RadiusBounds;
pub use objective::{Objective, Reduction};
pub use strategy::{solve_radii, RadiusMode, RadiusVector, Solution, SolveOptions, StrategyRegistry};
