use thiserror::Error;

/// Errors raised by map construction, labeling search and drawing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("map has no edge")]
    Empty,
    #[error("dart {dart} appears in zero or several rotations, or at the wrong vertex")]
    InvalidRotation { dart: usize },
    #[error("map is disconnected")]
    Disconnected,
    #[error("rotation system has genus > 0 (V - E + F = {euler})")]
    NotPlanar { euler: i64 },
    #[error("invalid outer face designation: {0}")]
    InvalidOuter(String),
    #[error("not a rooted 3,4-map: {0}")]
    NotRooted34Map(String),
    #[error("map is not an adapted 3,4-angulation of the square: {0}")]
    NotAdapted(String),
    #[error("map is not bipartite, no even labeling exists")]
    NoEvenLabeling,
    #[error("search budget exhausted before a labeling was found")]
    SearchBudgetExhausted,
    #[error("no labeling satisfies the requested options")]
    Infeasible,
    #[error("search space too large ({inner_faces} inner faces, limit {limit})")]
    TooLarge { inner_faces: usize, limit: usize },
    #[error("structure violates a local condition: {0}")]
    StructureInvalid(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolated(String),
    #[error("cycle detected in an orientation that must be acyclic")]
    CycleDetected,
    #[error("edge {edge} is fully colored")]
    FullyColoredEdgePresent { edge: usize },
    #[error("rays of edge {edge} do not meet")]
    RayIntersectionEmpty { edge: usize },
    #[error("straight edge {edge} is not axis-parallel")]
    NonOrthogonalStraightEdge { edge: usize },
    #[error("degree-2 vertex {vertex} is adjacent to the root vertex")]
    RootAdjacentDegree2 { vertex: usize },
    #[error("map is not dual-adapted")]
    NotDualAdapted,
    #[error("type is not right-chiral at dart {dart}")]
    NotRightChiral { dart: usize },
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
