//! Decision problems and the three decision algorithms.
//!
//! Each theory is a network transformation followed by the same
//! expected-utility argmax:
//!
//! * EDT conditions on the action in the network as given.
//! * CDT cuts the decision node's incoming edges and clamps it.
//! * TDT first materializes the declared logical nodes, makes the agent's
//!   own logical node the decision node, then proceeds as CDT.

mod error;
mod utility;

use std::fmt;
use std::str::FromStr;

pub use error::DecisionError;
pub use utility::UtilityTable;

use crate::bayes_net::{Assignment, Network, NetworkError};
use crate::real::Real;
use crate::tdt::{self, LogicalAnnotation, TdtError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Edt,
    Cdt,
    Tdt,
}

impl Theory {
    pub const ALL: [Theory; 3] = [Theory::Edt, Theory::Cdt, Theory::Tdt];

    pub fn as_str(self) -> &'static str {
        match self {
            Theory::Edt => "EDT",
            Theory::Cdt => "CDT",
            Theory::Tdt => "TDT",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown theory `{0}`, expected edt, cdt or tdt")]
pub struct ParseTheoryError(String);

impl FromStr for Theory {
    type Err = ParseTheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "edt" => Ok(Theory::Edt),
            "cdt" => Ok(Theory::Cdt),
            "tdt" => Ok(Theory::Tdt),
            _ => Err(ParseTheoryError(s.to_string())),
        }
    }
}

/// A network with a decision node and a utility table.
///
/// Logical annotations are only read by TDT; EDT and CDT see the network as
/// given.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem<P = f64> {
    net: Network<P>,
    decision: String,
    utility: UtilityTable<P>,
    annotations: Vec<LogicalAnnotation<P>>,
}

impl<P: Real> DecisionProblem<P> {
    pub fn new(net: Network<P>, decision: impl Into<String>, utility: UtilityTable<P>) -> Result<Self, DecisionError> {
        let decision = decision.into();
        if !net.contains(&decision) {
            return Err(DecisionError::UnknownDecisionNode(decision));
        }
        utility.check(&net)?;
        Ok(Self {
            net,
            decision,
            utility,
            annotations: Vec::new(),
        })
    }

    /// Attaches logical annotations. They are checked when TDT runs.
    pub fn with_annotations(mut self, annotations: Vec<LogicalAnnotation<P>>) -> Self {
        self.annotations = annotations;
        self
    }

    pub fn network(&self) -> &Network<P> {
        &self.net
    }

    pub fn decision_node(&self) -> &str {
        &self.decision
    }

    /// The action set: states of the decision node in declared order.
    pub fn actions(&self) -> &[String] {
        &self.net.node(&self.decision).expect("checked in new").states
    }

    pub fn utility(&self) -> &UtilityTable<P> {
        &self.utility
    }

    pub fn annotations(&self) -> &[LogicalAnnotation<P>] {
        &self.annotations
    }

    /// Same problem with every utility mapped to `scale * u + shift`.
    pub fn with_affine_utility(&self, scale: P, shift: P) -> Self {
        Self {
            utility: self.utility.affine(scale, shift),
            ..self.clone()
        }
    }
}

/// How the action enters the queried network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surgery {
    /// Observe the decision node (EDT).
    Condition,
    /// Replace the decision node's table with a point mass (CDT, TDT).
    Intervene,
}

/// The network a theory actually queries, before the per-action step.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSummary<P = f64> {
    pub theory: Theory,
    pub surgery: Surgery,
    /// Node conditioned on or clamped to each action.
    pub decision_node: String,
    /// Edges removed by the surgery, `(parent, child)`.
    pub severed_edges: Vec<(String, String)>,
    pub inserted_nodes: Vec<String>,
    pub rewired_nodes: Vec<String>,
    pub network: Network<P>,
}

impl<P: Real> TransformSummary<P> {
    pub fn is_identity(&self) -> bool {
        self.severed_edges.is_empty() && self.inserted_nodes.is_empty() && self.rewired_nodes.is_empty()
    }

    /// The network with the decision node set to `action`, or `None` for
    /// conditioning (which leaves the network untouched).
    pub fn network_for(&self, action: &str) -> Result<Option<Network<P>>, NetworkError> {
        match self.surgery {
            Surgery::Condition => Ok(None),
            Surgery::Intervene => self.network.intervene(&self.decision_node, action).map(Some),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionReport<P = f64> {
    pub theory: Theory,
    pub chosen: String,
    /// Expected utility of each action, in declared action order.
    pub eus: Vec<(String, P)>,
    pub transformed: TransformSummary<P>,
}

impl<P: Real> DecisionReport<P> {
    pub fn eu(&self, action: &str) -> Option<P> {
        self.eus.iter().find(|(a, _)| a == action).map(|&(_, v)| v)
    }
}

/// Builds the network `theory` evaluates actions against.
pub fn transform<P: Real>(problem: &DecisionProblem<P>, theory: Theory) -> Result<TransformSummary<P>, DecisionError> {
    let decision = problem.decision_node().to_string();
    Ok(match theory {
        Theory::Edt => TransformSummary {
            theory,
            surgery: Surgery::Condition,
            decision_node: decision,
            severed_edges: Vec::new(),
            inserted_nodes: Vec::new(),
            rewired_nodes: Vec::new(),
            network: problem.network().clone(),
        },
        Theory::Cdt => {
            let net = problem.network();
            let d = net.index_of(&decision)?;
            let severed = net
                .parent_indices(d)
                .iter()
                .map(|&p| (net.nodes()[p].id.clone(), decision.clone()))
                .collect();
            TransformSummary {
                theory,
                surgery: Surgery::Intervene,
                decision_node: decision,
                severed_edges: severed,
                inserted_nodes: Vec::new(),
                rewired_nodes: Vec::new(),
                network: net.clone(),
            }
        }
        Theory::Tdt => {
            let t = tdt::apply_tdt(problem).map_err(|e| match e {
                TdtError::MissingSelfAnnotation => DecisionError::MissingAnnotations,
                other => other.into(),
            })?;
            TransformSummary {
                theory,
                surgery: Surgery::Intervene,
                decision_node: t.logical_decision,
                severed_edges: t.severed,
                inserted_nodes: t.inserted,
                rewired_nodes: t.rewired,
                network: t.net,
            }
        }
    })
}

/// Expected utility of one action under `theory`.
pub fn expected_utility<P: Real>(problem: &DecisionProblem<P>, theory: Theory, action: &str) -> Result<P, DecisionError> {
    check_action(problem, action)?;
    let summary = transform(problem, theory)?;
    evaluate(problem, &summary, action)
}

/// Evaluates every action and picks the best; ties go to the action declared
/// first.
pub fn decide<P: Real>(problem: &DecisionProblem<P>, theory: Theory) -> Result<DecisionReport<P>, DecisionError> {
    let summary = transform(problem, theory)?;
    let eus = problem
        .actions()
        .iter()
        .map(|a| Ok((a.clone(), evaluate(problem, &summary, a)?)))
        .collect::<Result<Vec<_>, DecisionError>>()?;
    let mut best = 0;
    for (i, (_, eu)) in eus.iter().enumerate() {
        if *eu > eus[best].1 {
            best = i;
        }
    }
    Ok(DecisionReport {
        theory,
        chosen: eus[best].0.clone(),
        eus,
        transformed: summary,
    })
}

fn check_action<P: Real>(problem: &DecisionProblem<P>, action: &str) -> Result<(), DecisionError> {
    if problem.actions().iter().any(|a| a == action) {
        Ok(())
    } else {
        Err(DecisionError::UnknownAction {
            node: problem.decision_node().to_string(),
            action: action.to_string(),
        })
    }
}

fn evaluate<P: Real>(problem: &DecisionProblem<P>, summary: &TransformSummary<P>, action: &str) -> Result<P, DecisionError> {
    let scope = problem.utility().scope();
    let outcome = match summary.network_for(action)? {
        None => {
            let evidence = Assignment::new().with(summary.decision_node.clone(), action);
            summary.network.query(scope, &evidence).map_err(|e| match e {
                NetworkError::ImpossibleEvidence => DecisionError::ImpossibleAction(action.to_string()),
                other => other.into(),
            })?
        }
        Some(net) => net.query(scope, &Assignment::new())?,
    };
    Ok(outcome
        .probabilities()
        .iter()
        .zip(problem.utility().values())
        .fold(P::zero(), |acc, (&p, &u)| acc + p * u))
}
