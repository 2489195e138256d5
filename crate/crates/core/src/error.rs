use thiserror::Error;

/// Errors produced by polygon construction and the Cheeger machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate at vertex {index}")]
    NonFinite { index: usize },
    #[error("degenerate edge starting at vertex {index}")]
    DegenerateEdge { index: usize },
    #[error("collinear vertex at index {index}")]
    CollinearVertex { index: usize },
    #[error("polygon is not simple: edge {first} meets edge {second}")]
    NonSimple { first: usize, second: usize },
    #[error("polygon is not convex (reflex vertex {index})")]
    NonConvex { index: usize },
    #[error("polygon is not Cheeger regular; the closed-form constant does not apply")]
    NotCheegerRegular,
    #[error("test set is not contained in the outer polygon")]
    NotContained,
    #[error("perturbation {eps} exceeds the convexity limit {max}")]
    EpsTooLarge { eps: f64, max: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("root finder failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
