//! Built-in problems and the JSON scenario format.

mod builtins;
mod format;

use thiserror::Error;

pub use builtins::{
    calculator_scenario, calculators, prisoners_dilemma, tdt_prisoners_dilemma, toxoplasmosis, CalculatorParams,
    CalculatorVariant, CommonCause, PdParams, TdtPdParams, ToxoplasmosisParams,
};
pub use format::{load, parse, serialize, LogicalDoc, NodeDoc, RewireDoc, ScenarioDoc, UtilityDoc, UtilityEntries};

use crate::bayes_net::{Network, NetworkError};
use crate::decision::{DecisionError, DecisionProblem, UtilityTable};
use crate::real::Real;
use crate::tdt::{self, LogicalAnnotation, TdtError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line} column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("schema error at {context}: {message}")]
    Schema { context: String, message: String },

    #[error("invalid network at {context}: {source}")]
    Network { context: String, source: NetworkError },

    #[error("invalid decision problem at {context}: {source}")]
    Decision { context: String, source: DecisionError },

    #[error("invalid logical annotations at {context}: {source}")]
    Tdt { context: String, source: TdtError },

    #[error("parameter `{name}` = {value} is not a probability")]
    InvalidProbability { name: String, value: f64 },

    #[error("parameter `{name}` = {value} is not finite")]
    NonFiniteParameter { name: String, value: f64 },

    #[error("utilities must satisfy u4 > u3 > u2 > u1, got {u:?}")]
    OrderingViolated { u: [f64; 4] },
}

impl ScenarioError {
    pub(crate) fn schema(context: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            context: context.into(),
            message: message.into(),
        }
    }
}

/// A loaded scenario: a network, optionally a decision problem on it, and
/// any declared logical nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<P = f64> {
    pub name: String,
    pub network: Network<P>,
    /// Decision node and utility; both present or both absent.
    pub decision: Option<(String, UtilityTable<P>)>,
    pub logical: Vec<LogicalAnnotation<P>>,
}

impl<P: Real> Scenario<P> {
    pub fn from_problem(name: impl Into<String>, problem: &DecisionProblem<P>) -> Self {
        Self {
            name: name.into(),
            network: problem.network().clone(),
            decision: Some((problem.decision_node().to_string(), problem.utility().clone())),
            logical: problem.annotations().to_vec(),
        }
    }

    pub fn from_network(name: impl Into<String>, network: Network<P>) -> Self {
        Self {
            name: name.into(),
            network,
            decision: None,
            logical: Vec::new(),
        }
    }

    pub fn has_decision(&self) -> bool {
        self.decision.is_some()
    }

    /// The decision problem declared by the scenario.
    pub fn problem(&self) -> Result<DecisionProblem<P>, ScenarioError> {
        let (node, utility) = self
            .decision
            .as_ref()
            .ok_or_else(|| ScenarioError::schema("decision", "scenario declares no decision node"))?;
        let problem = DecisionProblem::new(self.network.clone(), node.clone(), utility.clone()).map_err(|source| {
            ScenarioError::Decision {
                context: "decision".into(),
                source,
            }
        })?;
        Ok(problem.with_annotations(self.logical.clone()))
    }

    /// The network with every declared logical node materialized. The
    /// physical decision node keeps its own table; only TDT's decision step
    /// turns it into a copy of the self logical node.
    pub fn world_network(&self) -> Result<Network<P>, TdtError> {
        tdt::insert_logical_nodes(&self.network, &self.logical)
    }
}
