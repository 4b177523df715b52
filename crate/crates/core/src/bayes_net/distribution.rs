use super::cpt::{mixed_radix_digits, mixed_radix_index};
use crate::real::Real;

/// Normalized probability table over the joint states of a list of nodes.
///
/// Entries are stored densely in mixed-radix order over the targets, first
/// target most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<P = f64> {
    targets: Vec<String>,
    states: Vec<Vec<String>>,
    probabilities: Vec<P>,
}

impl<P: Real> Distribution<P> {
    pub(crate) fn from_parts(targets: Vec<String>, states: Vec<Vec<String>>, probabilities: Vec<P>) -> Self {
        debug_assert_eq!(probabilities.len(), states.iter().map(Vec::len).product::<usize>());
        Self {
            targets,
            states,
            probabilities,
        }
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    /// State labels of each target, in target order.
    pub fn target_states(&self) -> &[Vec<String>] {
        &self.states
    }

    /// Dense probabilities in mixed-radix order.
    pub fn probabilities(&self) -> &[P] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Probability of the joint state given by one label per target.
    pub fn get(&self, labels: &[&str]) -> Option<P> {
        if labels.len() != self.targets.len() {
            return None;
        }
        let digits = labels
            .iter()
            .zip(&self.states)
            .map(|(l, states)| states.iter().position(|s| s == l))
            .collect::<Option<Vec<_>>>()?;
        Some(self.probabilities[mixed_radix_index(digits, &self.radices())])
    }

    /// Entries as `(state labels, probability)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<&str>, P)> + '_ {
        let radices = self.radices();
        self.probabilities.iter().enumerate().map(move |(i, &p)| {
            let labels = mixed_radix_digits(i, &radices)
                .into_iter()
                .zip(&self.states)
                .map(|(d, states)| states[d].as_str())
                .collect();
            (labels, p)
        })
    }

    pub fn total(&self) -> P {
        crate::real::sum(&self.probabilities)
    }

    fn radices(&self) -> Vec<usize> {
        self.states.iter().map(Vec::len).collect()
    }
}
