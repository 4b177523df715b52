use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Partial or full binding of node ids to state labels.
///
/// Validity against a particular network is checked when the assignment is
/// used, see [`Network::resolve`](super::Network::resolve).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    bindings: BTreeMap<String, String>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, node: impl Into<String>, state: impl Into<String>) -> Self {
        self.insert(node, state);
        self
    }

    /// Binds `node`, returning the previous state if it was bound.
    pub fn insert(&mut self, node: impl Into<String>, state: impl Into<String>) -> Option<String> {
        self.bindings.insert(node.into(), state.into())
    }

    pub fn get(&self, node: &str) -> Option<&str> {
        self.bindings.get(node).map(String::as_str)
    }

    pub fn contains(&self, node: &str) -> bool {
        self.bindings.contains_key(node)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        Self {
            bindings: iter
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (node, state) in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{node}={state}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed binding `{0}`, expected node=state")]
pub struct ParseAssignmentError(pub String);

/// Parses `node=state,node=state`. An empty string is the empty assignment.
impl FromStr for Assignment {
    type Err = ParseAssignmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Assignment::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (node, state) = part
                .split_once('=')
                .ok_or_else(|| ParseAssignmentError(part.to_string()))?;
            let (node, state) = (node.trim(), state.trim());
            if node.is_empty() || state.is_empty() {
                return Err(ParseAssignmentError(part.to_string()));
            }
            out.insert(node, state);
        }
        Ok(out)
    }
}
