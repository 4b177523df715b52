use thiserror::Error;

/// Errors raised while validating or querying a network.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),

    #[error("node `{0}` declares no states")]
    NoStates(String),

    #[error("node `{node}` declares state `{state}` more than once")]
    DuplicateState { node: String, state: String },

    #[error("node `{node}` lists parent `{parent}` more than once")]
    DuplicateParent { node: String, parent: String },

    #[error("node `{node}` has unknown parent `{parent}`")]
    UnknownParent { node: String, parent: String },

    #[error("cycle detected through nodes {}", .nodes.join(", "))]
    CycleDetected { nodes: Vec<String> },

    #[error("CPT of node `{node}` has wrong shape: {detail}")]
    CptShapeMismatch { node: String, detail: String },

    #[error("CPT of node `{node}` row {row} column {column} holds {value}, outside [0, 1]")]
    ProbabilityOutOfRange {
        node: String,
        row: usize,
        column: usize,
        value: f64,
    },

    #[error("CPT of node `{node}` row {row} sums to {sum}, not 1")]
    RowNotNormalized { node: String, row: usize, sum: f64 },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node `{node}` has no state `{state}`")]
    UnknownState { node: String, state: String },

    #[error("assignment does not bind {}", .missing.join(", "))]
    IncompleteAssignment { missing: Vec<String> },

    #[error("query needs at least one target node")]
    EmptyTargets,

    #[error("node `{0}` appears in more than one of the sets")]
    OverlappingSets(String),

    #[error("evidence has probability zero")]
    ImpossibleEvidence,
}
