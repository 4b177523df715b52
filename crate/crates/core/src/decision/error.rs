use thiserror::Error;

use crate::bayes_net::NetworkError;
use crate::tdt::TdtError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecisionError {
    #[error("decision node `{0}` is not in the network")]
    UnknownDecisionNode(String),

    #[error("`{action}` is not an action of decision node `{node}`")]
    UnknownAction { node: String, action: String },

    #[error("utility scope node `{0}` is not in the network")]
    UnknownScopeNode(String),

    #[error("utility scope lists `{0}` more than once")]
    DuplicateScopeNode(String),

    #[error("utility table has {found} values, scope needs {expected}")]
    UtilityShape { expected: usize, found: usize },

    #[error("utility for `{0}` is not finite")]
    NonFiniteUtility(String),

    #[error("utility table has no entry for `{0}`")]
    MissingUtilityEntry(String),

    #[error("utility table has more than one entry for `{0}`")]
    DuplicateUtilityEntry(String),

    #[error("utility key `{key}` does not name states of the scope: {reason}")]
    BadUtilityKey { key: String, reason: String },

    #[error("action `{0}` has prior probability zero, cannot condition on it")]
    ImpossibleAction(String),

    #[error("TDT needs a logical annotation marked as the agent's own decision")]
    MissingAnnotations,

    #[error(transparent)]
    Network(#[from] NetworkError),

    #[error(transparent)]
    Tdt(#[from] TdtError),
}
