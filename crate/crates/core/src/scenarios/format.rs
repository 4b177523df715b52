//! JSON scenario documents.
//!
//! ```json
//! {
//!   "name": "toxoplasmosis",
//!   "nodes": [
//!     {"id": "T", "states": ["T", "not_T"], "parents": [], "cpt": [[0.3, 0.7]]},
//!     {"id": "C", "states": ["C", "not_C"], "parents": ["T"], "cpt": [[0.6, 0.4], [0.2, 0.8]]}
//!   ],
//!   "decision": "C",
//!   "utility": {"scope": ["C"], "table": {"C": 1.0, "not_C": 0.0}},
//!   "logical": [
//!     {"id": "tdt", "states": ["C", "not_C"], "prior": [0.5, 0.5], "self": true, "rewires": []}
//!   ]
//! }
//! ```
//!
//! `cpt` is an array of rows in mixed-radix order over the parents, first
//! parent most significant. Utility keys join one state label per scope node
//! with `|`. Unknown fields are rejected.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Scenario, ScenarioError};
use crate::bayes_net::{Cpt, Network, NodeSpec};
use crate::decision::{DecisionProblem, UtilityTable};
use crate::tdt::{self, LogicalAnnotation, Rewire};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    pub nodes: Vec<NodeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility: Option<UtilityDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub logical: Vec<LogicalDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    pub states: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    pub cpt: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityDoc {
    pub scope: Vec<String>,
    pub table: UtilityEntries,
}

/// Utility table entries in document order. Serialized as a JSON object;
/// repeated keys are rejected.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UtilityEntries(pub Vec<(String, f64)>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogicalDoc {
    pub id: String,
    pub states: Vec<String>,
    pub prior: Vec<f64>,
    #[serde(rename = "self", default)]
    pub is_self: bool,
    #[serde(default)]
    pub rewires: Vec<RewireDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewireDoc {
    pub target: String,
    pub parents: Vec<String>,
    pub cpt: Vec<Vec<f64>>,
}

impl Serialize for UtilityEntries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for UtilityEntries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = UtilityEntries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping joined state labels to numbers")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut entries: Vec<(String, f64)> = Vec::new();
                while let Some((key, value)) = access.next_entry::<String, f64>()? {
                    if entries.iter().any(|(k, _)| *k == key) {
                        return Err(serde::de::Error::custom(format!("duplicate utility key `{key}`")));
                    }
                    entries.push((key, value));
                }
                Ok(UtilityEntries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

/// Parses and validates a document.
pub fn parse(text: &str) -> Result<ScenarioDoc, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        let (line, column) = (e.line(), e.column());
        match e.classify() {
            Category::Data => ScenarioError::Schema {
                context: format!("line {line} column {column}"),
                message: strip_position(&e.to_string()),
            },
            _ => ScenarioError::Syntax {
                line,
                column,
                message: strip_position(&e.to_string()),
            },
        }
    })?;
    Scenario::try_from(&doc)?;
    Ok(doc)
}

/// Parses a document straight into a [`Scenario`].
pub fn load(text: &str) -> Result<Scenario, ScenarioError> {
    Scenario::try_from(&parse(text)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize(doc: &ScenarioDoc) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents always serialize");
    out.push('\n');
    out
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

impl TryFrom<&ScenarioDoc> for Scenario {
    type Error = ScenarioError;

    fn try_from(doc: &ScenarioDoc) -> Result<Self, Self::Error> {
        let state_count = |id: &str| doc.nodes.iter().find(|n| n.id == id).map(|n| n.states.len());

        let mut nodes = Vec::with_capacity(doc.nodes.len());
        for (i, n) in doc.nodes.iter().enumerate() {
            let context = format!("nodes[{i}] (`{}`)", n.id);
            check_labels(&context, &n.states)?;
            check_row_count(&context, &n.parents, &n.cpt, state_count)?;
            nodes.push(NodeSpec {
                id: n.id.clone(),
                states: n.states.clone(),
                parents: n.parents.clone(),
                cpt: Cpt::new(n.cpt.clone()),
            });
        }
        let network = Network::new(nodes).map_err(|source| ScenarioError::Network {
            context: "nodes".into(),
            source,
        })?;

        let mut logical = Vec::with_capacity(doc.logical.len());
        for (i, l) in doc.logical.iter().enumerate() {
            let context = format!("logical[{i}] (`{}`)", l.id);
            check_labels(&context, &l.states)?;
            let mut rewires = Vec::with_capacity(l.rewires.len());
            for (j, r) in l.rewires.iter().enumerate() {
                let rcontext = format!("{context}.rewires[{j}] (`{}`)", r.target);
                let count = |id: &str| {
                    state_count(id).or_else(|| doc.logical.iter().find(|x| x.id == id).map(|x| x.states.len()))
                };
                check_row_count(&rcontext, &r.parents, &r.cpt, count)?;
                rewires.push(Rewire {
                    target: r.target.clone(),
                    parents: r.parents.clone(),
                    cpt: Cpt::new(r.cpt.clone()),
                });
            }
            logical.push(LogicalAnnotation {
                id: l.id.clone(),
                states: l.states.clone(),
                prior: l.prior.clone(),
                rewires,
                is_self_decision: l.is_self,
            });
        }
        if logical.iter().filter(|l| l.is_self_decision).count() > 1 {
            return Err(ScenarioError::schema("logical", "more than one logical node is marked `self`"));
        }
        tdt::insert_logical_nodes(&network, &logical).map_err(|source| ScenarioError::Tdt {
            context: "logical".into(),
            source,
        })?;

        let decision = match (&doc.decision, &doc.utility) {
            (None, None) => {
                if logical.iter().any(|l| l.is_self_decision) {
                    return Err(ScenarioError::schema("logical", "a `self` logical node needs a decision node"));
                }
                None
            }
            (Some(_), None) => return Err(ScenarioError::schema("utility", "decision given without utility")),
            (None, Some(_)) => return Err(ScenarioError::schema("decision", "utility given without decision")),
            (Some(node), Some(u)) => {
                if !network.contains(node) {
                    return Err(ScenarioError::schema("decision", format!("unknown node `{node}`")));
                }
                let entries = u
                    .table
                    .0
                    .iter()
                    .map(|(k, v)| (k.split('|').map(str::to_string).collect(), *v));
                let table = UtilityTable::from_entries(&network, &u.scope, entries).map_err(|source| {
                    ScenarioError::Decision {
                        context: "utility".into(),
                        source,
                    }
                })?;
                let problem = DecisionProblem::new(network.clone(), node.clone(), table.clone()).map_err(|source| {
                    ScenarioError::Decision {
                        context: "utility".into(),
                        source,
                    }
                })?;
                if logical.iter().any(|l| l.is_self_decision) {
                    tdt::transform_network(problem.network(), node, &logical).map_err(|source| ScenarioError::Tdt {
                        context: "logical".into(),
                        source,
                    })?;
                }
                Some((node.clone(), table))
            }
        };

        Ok(Scenario {
            name: doc.name.clone(),
            network,
            decision,
            logical,
        })
    }
}

fn check_labels(context: &str, states: &[String]) -> Result<(), ScenarioError> {
    match states.iter().find(|s| s.contains('|') || s.is_empty()) {
        Some(bad) => Err(ScenarioError::schema(
            context,
            format!("state label `{bad}` is empty or contains `|`"),
        )),
        None => Ok(()),
    }
}

fn check_row_count(
    context: &str,
    parents: &[String],
    cpt: &[Vec<f64>],
    state_count: impl Fn(&str) -> Option<usize>,
) -> Result<(), ScenarioError> {
    // unknown parents are reported by network validation
    let Some(expected) = parents
        .iter()
        .map(|p| state_count(p))
        .try_fold(1usize, |acc, c| c.map(|c| acc * c))
    else {
        return Ok(());
    };
    if cpt.len() != expected {
        return Err(ScenarioError::schema(
            context,
            format!("expected {expected} CPT rows, found {}", cpt.len()),
        ));
    }
    Ok(())
}

impl From<&Scenario> for ScenarioDoc {
    fn from(s: &Scenario) -> Self {
        let nodes = s
            .network
            .nodes()
            .iter()
            .map(|n| NodeDoc {
                id: n.id.clone(),
                states: n.states.clone(),
                parents: n.parents.clone(),
                cpt: n.cpt.rows().to_vec(),
            })
            .collect();
        let (decision, utility) = match &s.decision {
            Some((node, table)) => (
                Some(node.clone()),
                Some(UtilityDoc {
                    scope: table.scope().to_vec(),
                    table: UtilityEntries(
                        table
                            .entries(&s.network)
                            .into_iter()
                            .map(|(labels, v)| (labels.join("|"), v))
                            .collect(),
                    ),
                }),
            ),
            None => (None, None),
        };
        let logical = s
            .logical
            .iter()
            .map(|l| LogicalDoc {
                id: l.id.clone(),
                states: l.states.clone(),
                prior: l.prior.clone(),
                is_self: l.is_self_decision,
                rewires: l
                    .rewires
                    .iter()
                    .map(|r| RewireDoc {
                        target: r.target.clone(),
                        parents: r.parents.clone(),
                        cpt: r.cpt.rows().to_vec(),
                    })
                    .collect(),
            })
            .collect();
        ScenarioDoc {
            name: s.name.clone(),
            nodes,
            decision,
            utility,
            logical,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"name": "one", "nodes": [{"id": "T", "states": ["yes", "no"], "cpt": [[0.3, 0.7]]}]}"#;

    #[test]
    fn minimal_document() {
        let doc = parse(MINIMAL).unwrap();
        assert_eq!(doc.nodes.len(), 1);
        let s = load(MINIMAL).unwrap();
        assert_eq!(s.network.marginal("T").unwrap(), vec![0.3, 0.7]);
        assert!(!s.has_decision());
    }

    #[test]
    fn missing_row_names_the_node() {
        let text = r#"{"name": "x", "nodes": [
            {"id": "A", "states": ["a", "b"], "cpt": [[0.5, 0.5]]},
            {"id": "B", "states": ["a", "b"], "parents": ["A"], "cpt": [[0.5, 0.5]]}
        ]}"#;
        match parse(text).unwrap_err() {
            ScenarioError::Schema { context, message } => {
                assert!(context.contains("`B`"), "{context}");
                assert!(message.contains("expected 2 CPT rows"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_and_unknown_fields() {
        assert!(matches!(
            parse("{\"name\": \"x\",\n \"nodes\": [").unwrap_err(),
            ScenarioError::Syntax { line: 2, .. }
        ));
        let typo = r#"{"name": "x", "nodes": [], "decison": "A"}"#;
        match parse(typo).unwrap_err() {
            ScenarioError::Schema { message, .. } => assert!(message.contains("decison")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_utility_key_is_rejected() {
        let text = r#"{"name": "x",
            "nodes": [{"id": "A", "states": ["a", "b"], "cpt": [[0.5, 0.5]]}],
            "decision": "A",
            "utility": {"scope": ["A"], "table": {"a": 1, "a": 2, "b": 0}}}"#;
        assert!(matches!(parse(text).unwrap_err(), ScenarioError::Schema { .. }));
    }

    #[test]
    fn network_errors_are_wrapped() {
        let text = r#"{"name": "x", "nodes": [{"id": "A", "states": ["a", "b"], "cpt": [[0.5, 0.6]]}]}"#;
        assert!(matches!(parse(text).unwrap_err(), ScenarioError::Network { .. }));
    }

    #[test]
    fn decision_requires_utility() {
        let text = r#"{"name": "x", "nodes": [{"id": "A", "states": ["a"], "cpt": [[1]]}], "decision": "A"}"#;
        assert!(matches!(parse(text).unwrap_err(), ScenarioError::Schema { .. }));
    }
}
