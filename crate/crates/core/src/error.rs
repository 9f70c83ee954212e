use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail")]
pub enum Error {
    #[error("degenerate triangle (collinear within tolerance)")]
    DegenerateTriangle,
    #[error("degenerate segment (endpoints coincide within tolerance)")]
    DegenerateSegment,
    #[error("degenerate tetrahedron (coplanar within tolerance)")]
    DegenerateTetrahedron,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("all points are collinear")]
    AllCollinear,
    #[error("all points are coplanar")]
    AllCoplanar,
    #[error("points {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },
    #[error("empty radius interval at point {point}: lo = {lo} >= hi = {hi} (blocking neighbor {blocking:?})")]
    EmptyInterval {
        point: usize,
        lo: f64,
        hi: f64,
        blocking: Option<usize>,
    },
    #[error("point {point} has fewer than {needed} neighbors")]
    IsolatedPoint { point: usize, needed: usize },
    #[error("control volume of point {point} is not convex")]
    NonConvexCell { point: usize },
    #[error("vertex of simplex {simplex} is not assigned to any cell")]
    OrphanVertex { simplex: usize },
    #[error("face between {point} and {neighbor} deviates {deviation:e} from planarity")]
    NonPlanarFace {
        point: usize,
        neighbor: usize,
        deviation: f64,
    },
    #[error("expected a {expected}D input, got {found}D")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("could not place {requested} points with the separation rule (placed {placed})")]
    RejectionBudgetExceeded { placed: usize, requested: usize },
    #[error("radius vector has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("no strategy registered under `{0}`")]
    UnknownStrategy(String),
    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("mesh is empty")]
    EmptyMesh,
    #[error("unsupported schema version {0}")]
    SchemaVersion(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("stage `{stage}`: {source}")]
    Stage { stage: String, source: Box<Error> },
}

impl Error {
    pub fn at(self, stage: &str) -> Error {
        Error::Stage { stage: stage.to_string(), source: Box::new(self) }
    }

    /// The error without stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
