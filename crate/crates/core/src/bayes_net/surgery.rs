use super::{Cpt, Network, NetworkError, NodeSpec};
use crate::real::Real;

impl<P: Real> Network<P> {
    /// Do-surgery: `node` loses all incoming edges and is clamped to `state`.
    ///
    /// Every other node keeps its table, so children of `node` now see the
    /// clamped value while its former ancestors keep their prior behaviour.
    pub fn intervene(&self, node: &str, state: &str) -> Result<Self, NetworkError> {
        let i = self.index_of(node)?;
        let s = self.state_index(i, state)?;
        let spec = &self.nodes()[i];
        self.with_node(NodeSpec {
            id: spec.id.clone(),
            states: spec.states.clone(),
            parents: Vec::new(),
            cpt: Cpt::point_mass(spec.states.len(), s),
        })
    }

    /// Counterfactual parent removal: `node` loses its incoming edges and its
    /// table becomes its prior marginal under this network.
    pub fn marginalize_parents(&self, node: &str) -> Result<Self, NetworkError> {
        let i = self.index_of(node)?;
        if self.parent_indices(i).is_empty() {
            return Ok(self.clone());
        }
        let prior = self.marginal(node)?;
        let spec = &self.nodes()[i];
        self.with_node(NodeSpec {
            id: spec.id.clone(),
            states: spec.states.clone(),
            parents: Vec::new(),
            cpt: Cpt::prior(prior),
        })
    }
}
