use std::collections::{HashMap, HashSet, VecDeque};

use super::cpt::{mixed_radix_index, Cpt};
use super::{Assignment, NetworkError};
use crate::real::{in_unit_interval, sum, Real};

/// Raw description of one node, prior to validation.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec<P = f64> {
    pub id: String,
    pub states: Vec<String>,
    pub parents: Vec<String>,
    pub cpt: Cpt<P>,
}

impl<P: Real> NodeSpec<P> {
    pub fn new<S: Into<String>>(
        id: impl Into<String>,
        states: impl IntoIterator<Item = S>,
        parents: impl IntoIterator<Item = S>,
        rows: Vec<Vec<P>>,
    ) -> Self {
        Self {
            id: id.into(),
            states: states.into_iter().map(Into::into).collect(),
            parents: parents.into_iter().map(Into::into).collect(),
            cpt: Cpt::new(rows),
        }
    }

    /// Parentless node with the given prior.
    pub fn root<S: Into<String>>(
        id: impl Into<String>,
        states: impl IntoIterator<Item = S>,
        prior: Vec<P>,
    ) -> Self {
        Self {
            id: id.into(),
            states: states.into_iter().map(Into::into).collect(),
            parents: Vec::new(),
            cpt: Cpt::prior(prior),
        }
    }
}

/// A validated causal Bayesian network.
///
/// Nodes keep their declared order, which fixes the order of state tuples
/// and the multiplication order used by [`Network::joint_probability`].
/// Networks are immutable; surgery operations return new networks.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<P = f64> {
    nodes: Vec<NodeSpec<P>>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl<P: Real> Network<P> {
    /// Validates a list of node descriptions.
    ///
    /// Checks run structure first (ids, states, parents, acyclicity) and then
    /// the tables (shape, range, normalization).
    pub fn new(nodes: Vec<NodeSpec<P>>) -> Result<Self, NetworkError> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id.clone(), i).is_some() {
                return Err(NetworkError::DuplicateId(node.id.clone()));
            }
        }

        for node in &nodes {
            if node.states.is_empty() {
                return Err(NetworkError::NoStates(node.id.clone()));
            }
            let mut seen = HashSet::new();
            for s in &node.states {
                if !seen.insert(s) {
                    return Err(NetworkError::DuplicateState {
                        node: node.id.clone(),
                        state: s.clone(),
                    });
                }
            }
        }

        let mut parents = Vec::with_capacity(nodes.len());
        for node in &nodes {
            let mut seen = HashSet::new();
            let mut resolved = Vec::with_capacity(node.parents.len());
            for p in &node.parents {
                let Some(&pi) = index.get(p) else {
                    return Err(NetworkError::UnknownParent {
                        node: node.id.clone(),
                        parent: p.clone(),
                    });
                };
                if !seen.insert(pi) {
                    return Err(NetworkError::DuplicateParent {
                        node: node.id.clone(),
                        parent: p.clone(),
                    });
                }
                resolved.push(pi);
            }
            parents.push(resolved);
        }

        let mut children = vec![Vec::new(); nodes.len()];
        for (child, ps) in parents.iter().enumerate() {
            for &p in ps {
                children[p].push(child);
            }
        }

        let topo = topological_order(&parents, &children).map_err(|stuck| {
            NetworkError::CycleDetected {
                nodes: stuck.into_iter().map(|i| nodes[i].id.clone()).collect(),
            }
        })?;

        for (i, node) in nodes.iter().enumerate() {
            check_table(node, &parents[i], &nodes)?;
        }

        Ok(Self {
            nodes,
            index,
            parents,
            children,
            topo,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in declared order.
    pub fn nodes(&self) -> &[NodeSpec<P>] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeSpec<P>> {
        self.nodes
    }

    pub fn node(&self, id: &str) -> Option<&NodeSpec<P>> {
        self.index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn index_of(&self, id: &str) -> Result<usize, NetworkError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| NetworkError::UnknownNode(id.to_string()))
    }

    pub fn state_index(&self, node: usize, state: &str) -> Result<usize, NetworkError> {
        let spec = &self.nodes[node];
        spec.states
            .iter()
            .position(|s| s == state)
            .ok_or_else(|| NetworkError::UnknownState {
                node: spec.id.clone(),
                state: state.to_string(),
            })
    }

    pub fn cardinality(&self, node: usize) -> usize {
        self.nodes[node].states.len()
    }

    pub fn parent_indices(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    pub fn child_indices(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Node indices ordered so that parents precede children.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn is_root(&self, id: &str) -> Result<bool, NetworkError> {
        Ok(self.parents[self.index_of(id)?].is_empty())
    }

    /// Directed edges `(parent, child)` in declared child order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.nodes
            .iter()
            .flat_map(|n| n.parents.iter().map(move |p| (p.as_str(), n.id.as_str())))
    }

    /// Ancestors of the seed nodes, seeds included, as a membership mask.
    pub fn ancestor_mask(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
        self.closure(seeds, &self.parents)
    }

    /// Descendants of the seed nodes, seeds included, as a membership mask.
    pub fn descendant_mask(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
        self.closure(seeds, &self.children)
    }

    fn closure(&self, seeds: impl IntoIterator<Item = usize>, edges: &[Vec<usize>]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let mut stack: Vec<usize> = seeds.into_iter().collect();
        while let Some(v) = stack.pop() {
            if !mask[v] {
                mask[v] = true;
                stack.extend(edges[v].iter().copied());
            }
        }
        mask
    }

    /// Resolves bindings to `(node index, state index)` pairs sorted by node.
    pub fn resolve(&self, assignment: &Assignment) -> Result<Vec<(usize, usize)>, NetworkError> {
        let mut out = assignment
            .iter()
            .map(|(node, state)| {
                let n = self.index_of(node)?;
                Ok((n, self.state_index(n, state)?))
            })
            .collect::<Result<Vec<_>, NetworkError>>()?;
        out.sort_unstable();
        Ok(out)
    }

    /// Row of `node`'s CPT selected by a full vector of state indices.
    pub(crate) fn row_index(&self, node: usize, states: &[usize]) -> usize {
        let ps = &self.parents[node];
        let radices: Vec<usize> = ps.iter().map(|&p| self.cardinality(p)).collect();
        mixed_radix_index(ps.iter().map(|&p| states[p]), &radices)
    }

    /// Local factor `P(x_i | pa_i)` for node `node` under full state vector `states`.
    pub(crate) fn local_probability(&self, node: usize, states: &[usize]) -> P {
        self.nodes[node].cpt.row(self.row_index(node, states))[states[node]]
    }

    /// Joint probability of a full assignment: the product of every node's
    /// CPT entry, multiplied left to right in declared node order starting
    /// from one.
    pub fn joint_probability(&self, assignment: &Assignment) -> Result<P, NetworkError> {
        let resolved = self.resolve(assignment)?;
        if resolved.len() < self.len() {
            let missing = self
                .nodes
                .iter()
                .filter(|n| !assignment.contains(&n.id))
                .map(|n| n.id.clone())
                .collect();
            return Err(NetworkError::IncompleteAssignment { missing });
        }
        let states: Vec<usize> = resolved.into_iter().map(|(_, s)| s).collect();
        Ok(self.joint_probability_of_states(&states))
    }

    /// [`Network::joint_probability`] over a dense vector of state indices.
    pub fn joint_probability_of_states(&self, states: &[usize]) -> P {
        (0..self.len()).fold(P::one(), |acc, i| acc * self.local_probability(i, states))
    }

    /// Returns a copy with `node` replaced. The result is re-validated.
    pub fn with_node(&self, node: NodeSpec<P>) -> Result<Self, NetworkError> {
        let i = self.index_of(&node.id)?;
        let mut nodes = self.nodes.clone();
        nodes[i] = node;
        Self::new(nodes)
    }
}

/// Kahn's algorithm. On failure returns the nodes left with unresolved parents.
fn topological_order(parents: &[Vec<usize>], children: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: VecDeque<usize> = (0..parents.len()).filter(|&i| pending[i] == 0).collect();
    let mut order = Vec::with_capacity(parents.len());
    while let Some(v) = ready.pop_front() {
        order.push(v);
        for &c in &children[v] {
            pending[c] -= 1;
            if pending[c] == 0 {
                ready.push_back(c);
            }
        }
    }
    if order.len() == parents.len() {
        Ok(order)
    } else {
        Err((0..parents.len()).filter(|&i| pending[i] > 0).collect())
    }
}

fn check_table<P: Real>(node: &NodeSpec<P>, parents: &[usize], all: &[NodeSpec<P>]) -> Result<(), NetworkError> {
    let expected_rows: usize = parents.iter().map(|&p| all[p].states.len()).product();
    let width = node.states.len();
    let shape_err = |detail: String| NetworkError::CptShapeMismatch {
        node: node.id.clone(),
        detail,
    };
    if node.cpt.num_rows() != expected_rows {
        return Err(shape_err(format!(
            "expected {expected_rows} rows, found {}",
            node.cpt.num_rows()
        )));
    }
    for (r, row) in node.cpt.rows().iter().enumerate() {
        if row.len() != width {
            return Err(shape_err(format!(
                "row {r} has {} entries, expected {width}",
                row.len()
            )));
        }
        for (c, &p) in row.iter().enumerate() {
            if !in_unit_interval(p) {
                return Err(NetworkError::ProbabilityOutOfRange {
                    node: node.id.clone(),
                    row: r,
                    column: c,
                    value: p.to_f64_lossy(),
                });
            }
        }
        let total = sum(row);
        if (total - P::one()).abs() > P::normalization_tolerance() {
            return Err(NetworkError::RowNotNormalized {
                node: node.id.clone(),
                row: r,
                sum: total.to_f64_lossy(),
            });
        }
    }
    Ok(())
}
