use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("loop at vertex {0}")]
    Loop(Vertex),

    #[error("face {0} is not in the complex")]
    FaceNotFound(String),

    #[error("face {0} repeats a vertex")]
    DegenerateFace(String),

    #[error("degree {degree} needs faces through dimension {needed}, but only {cap} are materialized")]
    DegreeNotMaterialized { degree: usize, needed: usize, cap: usize },

    #[error("the link of vertex {0} could not be collapsed")]
    LinkNotCollapsible(Vertex),

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("no tabulated constants for d = {0} (tabulated for 2..=5)")]
    UntabulatedDimension(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("trial {stream}: {source}")]
    Trial {
        stream: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for invariant violations, also when wrapped in trial context.
    pub fn is_invariant(&self) -> bool {
        match self {
            Error::Invariant(_) => true,
            Error::Trial { source, .. } => source.is_invariant(),
            _ => false,
        }
    }
}
