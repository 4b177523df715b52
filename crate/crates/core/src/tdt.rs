//! Logical nodes and the TDT network transform.
//!
//! A logical node stands for the unknown result of an abstract computation.
//! Every physical node that instantiates the computation gets the logical
//! node as an extra parent. Placement is manual: the scenario author lists
//! the logical nodes, their priors, and the replacement tables of the nodes
//! they feed.

use std::collections::HashSet;

use thiserror::Error;

use crate::bayes_net::{Cpt, Network, NetworkError, NodeSpec};
use crate::decision::DecisionProblem;
use crate::real::Real;

/// New table for a physical node that now depends on logical nodes.
///
/// `parents` must contain every original parent of `target` plus at least
/// one logical node id, in the order the rows of `cpt` are laid out.
#[derive(Debug, Clone, PartialEq)]
pub struct Rewire<P = f64> {
    pub target: String,
    pub parents: Vec<String>,
    pub cpt: Cpt<P>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalAnnotation<P = f64> {
    pub id: String,
    pub states: Vec<String>,
    pub prior: Vec<P>,
    pub rewires: Vec<Rewire<P>>,
    /// Marks the output of the agent's own decision algorithm.
    pub is_self_decision: bool,
}

impl<P: Real> LogicalAnnotation<P> {
    pub fn new<S: Into<String>>(id: impl Into<String>, states: impl IntoIterator<Item = S>, prior: Vec<P>) -> Self {
        Self {
            id: id.into(),
            states: states.into_iter().map(Into::into).collect(),
            prior,
            rewires: Vec::new(),
            is_self_decision: false,
        }
    }

    pub fn self_decision(mut self) -> Self {
        self.is_self_decision = true;
        self
    }

    pub fn rewire<S: Into<String>>(
        mut self,
        target: impl Into<String>,
        parents: impl IntoIterator<Item = S>,
        rows: Vec<Vec<P>>,
    ) -> Self {
        self.rewires.push(Rewire {
            target: target.into(),
            parents: parents.into_iter().map(Into::into).collect(),
            cpt: Cpt::new(rows),
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TdtError {
    #[error("logical node id `{0}` is already in use")]
    DuplicateLogicalId(String),

    #[error("logical node `{logical}` rewires unknown node `{target}`")]
    UnknownRewireTarget { logical: String, target: String },

    #[error("node `{0}` is rewired more than once")]
    DuplicateRewire(String),

    #[error("rewire of `{target}`: {detail}")]
    RewireParents { target: String, detail: String },

    #[error("no logical annotation is marked as the agent's own decision")]
    MissingSelfAnnotation,

    #[error("more than one logical annotation is marked as the agent's own decision")]
    MultipleSelfAnnotations,

    #[error("self logical node `{logical}` states {logical_states:?} differ from decision states {decision_states:?}")]
    StateMismatch {
        logical: String,
        logical_states: Vec<String>,
        decision_states: Vec<String>,
    },

    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Adds each logical node as a root ahead of the existing nodes and swaps in
/// the rewired tables. The result is validated as a fresh network.
pub fn insert_logical_nodes<P: Real>(
    net: &Network<P>,
    annotations: &[LogicalAnnotation<P>],
) -> Result<Network<P>, TdtError> {
    if annotations.is_empty() {
        return Ok(net.clone());
    }
    let mut logical_ids = HashSet::new();
    for a in annotations {
        if net.contains(&a.id) || !logical_ids.insert(a.id.as_str()) {
            return Err(TdtError::DuplicateLogicalId(a.id.clone()));
        }
    }

    let mut nodes: Vec<NodeSpec<P>> = annotations
        .iter()
        .map(|a| NodeSpec {
            id: a.id.clone(),
            states: a.states.clone(),
            parents: Vec::new(),
            cpt: Cpt::prior(a.prior.clone()),
        })
        .collect();
    let mut physical = net.nodes().to_vec();

    let mut rewired = HashSet::new();
    for a in annotations {
        for r in &a.rewires {
            let Some(slot) = physical.iter_mut().find(|n| n.id == r.target) else {
                return Err(TdtError::UnknownRewireTarget {
                    logical: a.id.clone(),
                    target: r.target.clone(),
                });
            };
            if !rewired.insert(r.target.as_str()) {
                return Err(TdtError::DuplicateRewire(r.target.clone()));
            }
            check_rewire_parents(r, &slot.parents, &logical_ids)?;
            slot.parents = r.parents.clone();
            slot.cpt = r.cpt.clone();
        }
    }

    nodes.append(&mut physical);
    Ok(Network::new(nodes)?)
}

fn check_rewire_parents<P: Real>(
    rewire: &Rewire<P>,
    original: &[String],
    logical: &HashSet<&str>,
) -> Result<(), TdtError> {
    let err = |detail: String| TdtError::RewireParents {
        target: rewire.target.clone(),
        detail,
    };
    for p in original {
        if !rewire.parents.contains(p) {
            return Err(err(format!("drops original parent `{p}`")));
        }
    }
    let mut has_logical = false;
    for p in &rewire.parents {
        if logical.contains(p.as_str()) {
            has_logical = true;
        } else if !original.contains(p) {
            return Err(err(format!("`{p}` is neither an original parent nor a logical node")));
        }
    }
    if !has_logical {
        return Err(err("no logical parent".to_string()));
    }
    Ok(())
}

/// A decision problem after the TDT rewrite.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedProblem<P = f64> {
    pub net: Network<P>,
    /// The agent's own logical node, a root; TDT intervenes on it.
    pub logical_decision: String,
    /// The physical decision node, now a deterministic copy of the logical one.
    pub original_decision: String,
    pub inserted: Vec<String>,
    pub rewired: Vec<String>,
    /// Edges into the physical decision node dropped by the rewrite.
    pub severed: Vec<(String, String)>,
}

/// Inserts the logical nodes and turns the physical decision node into the
/// identity of the self logical node, dropping its other parents.
pub fn apply_tdt<P: Real>(problem: &DecisionProblem<P>) -> Result<TransformedProblem<P>, TdtError> {
    transform_network(problem.network(), problem.decision_node(), problem.annotations())
}

/// [`apply_tdt`] on loose parts.
pub fn transform_network<P: Real>(
    net: &Network<P>,
    decision: &str,
    annotations: &[LogicalAnnotation<P>],
) -> Result<TransformedProblem<P>, TdtError> {
    let mut selves = annotations.iter().filter(|a| a.is_self_decision);
    let own = selves.next().ok_or(TdtError::MissingSelfAnnotation)?;
    if selves.next().is_some() {
        return Err(TdtError::MultipleSelfAnnotations);
    }
    let decision_states = &net
        .node(decision)
        .ok_or_else(|| NetworkError::UnknownNode(decision.to_string()))?
        .states;
    if &own.states != decision_states {
        return Err(TdtError::StateMismatch {
            logical: own.id.clone(),
            logical_states: own.states.clone(),
            decision_states: decision_states.clone(),
        });
    }

    let with_logical = insert_logical_nodes(net, annotations)?;
    let current = with_logical.node(decision).expect("decision node kept");
    let severed = current
        .parents
        .iter()
        .map(|p| (p.clone(), decision.to_string()))
        .collect();
    let copy = NodeSpec {
        id: decision.to_string(),
        states: current.states.clone(),
        parents: vec![own.id.clone()],
        cpt: Cpt::identity(current.states.len()),
    };
    let net = with_logical.with_node(copy)?;

    Ok(TransformedProblem {
        net,
        logical_decision: own.id.clone(),
        original_decision: decision.to_string(),
        inserted: annotations.iter().map(|a| a.id.clone()).collect(),
        rewired: annotations
            .iter()
            .flat_map(|a| a.rewires.iter().map(|r| r.target.clone()))
            .collect(),
        severed,
    })
}
