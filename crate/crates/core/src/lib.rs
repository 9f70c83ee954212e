pub mod complex;
pub mod delaunay;
pub mod error;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod pipeline;
pub mod predicates;
pub mod solver;

pub use error::{Error, Result};
