use std::collections::HashSet;

use super::DecisionError;
use crate::bayes_net::{mixed_radix_digits, Network};
use crate::real::Real;

/// Utility over the joint states of a scope of nodes.
///
/// Values are dense in mixed-radix order over the scope, first scope node
/// most significant, matching [`Distribution`](crate::bayes_net::Distribution)
/// so expected utility is a plain dot product.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTable<P = f64> {
    scope: Vec<String>,
    values: Vec<P>,
}

impl<P: Real> UtilityTable<P> {
    /// Unchecked; validated against a network by
    /// [`DecisionProblem::new`](super::DecisionProblem::new).
    pub fn new<S: Into<String>>(scope: impl IntoIterator<Item = S>, values: Vec<P>) -> Self {
        Self {
            scope: scope.into_iter().map(Into::into).collect(),
            values,
        }
    }

    /// Builds the table by evaluating `f` on every joint scope state.
    pub fn from_fn<S: AsRef<str>>(
        net: &Network<P>,
        scope: &[S],
        mut f: impl FnMut(&[&str]) -> P,
    ) -> Result<Self, DecisionError> {
        let (ids, states) = scope_states(net, scope)?;
        let radices: Vec<usize> = states.iter().map(|s| s.len()).collect();
        let values = (0..radices.iter().product())
            .map(|i| {
                let labels: Vec<&str> = mixed_radix_digits(i, &radices)
                    .into_iter()
                    .zip(&states)
                    .map(|(d, s)| s[d].as_str())
                    .collect();
                f(&labels)
            })
            .collect();
        Ok(Self { scope: ids, values })
    }

    /// Builds the table from `(state labels, utility)` entries. Every joint
    /// scope state must appear exactly once.
    pub fn from_entries<S: AsRef<str>>(
        net: &Network<P>,
        scope: &[S],
        entries: impl IntoIterator<Item = (Vec<String>, P)>,
    ) -> Result<Self, DecisionError> {
        let (ids, states) = scope_states(net, scope)?;
        let radices: Vec<usize> = states.iter().map(|s| s.len()).collect();
        let mut values: Vec<Option<P>> = vec![None; radices.iter().product()];
        for (labels, value) in entries {
            let key = labels.join("|");
            if labels.len() != ids.len() {
                return Err(DecisionError::BadUtilityKey {
                    key,
                    reason: format!("expected {} labels", ids.len()),
                });
            }
            let mut index = 0;
            for ((label, node_states), node) in labels.iter().zip(&states).zip(&ids) {
                let d = node_states.iter().position(|s| s == label).ok_or_else(|| {
                    DecisionError::BadUtilityKey {
                        key: key.clone(),
                        reason: format!("`{label}` is not a state of `{node}`"),
                    }
                })?;
                index = index * node_states.len() + d;
            }
            if values[index].replace(value).is_some() {
                return Err(DecisionError::DuplicateUtilityEntry(key));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    let labels: Vec<&str> = mixed_radix_digits(i, &radices)
                        .into_iter()
                        .zip(&states)
                        .map(|(d, s)| s[d].as_str())
                        .collect();
                    DecisionError::MissingUtilityEntry(labels.join("|"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { scope: ids, values })
    }

    pub fn scope(&self) -> &[String] {
        &self.scope
    }

    pub fn values(&self) -> &[P] {
        &self.values
    }

    /// Utility of one joint scope state.
    pub fn get(&self, net: &Network<P>, labels: &[&str]) -> Option<P> {
        if labels.len() != self.scope.len() {
            return None;
        }
        let mut index = 0;
        for (id, label) in self.scope.iter().zip(labels) {
            let states = &net.node(id)?.states;
            index = index * states.len() + states.iter().position(|s| s == label)?;
        }
        self.values.get(index).copied()
    }

    /// Entries as `(state labels, utility)` in storage order.
    pub fn entries<'a>(&'a self, net: &'a Network<P>) -> Vec<(Vec<&'a str>, P)> {
        let states: Vec<&[String]> = self
            .scope
            .iter()
            .map(|id| net.node(id).map_or(&[][..], |n| &n.states[..]))
            .collect();
        let radices: Vec<usize> = states.iter().map(|s| s.len()).collect();
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let labels = mixed_radix_digits(i, &radices)
                    .into_iter()
                    .zip(&states)
                    .map(|(d, s)| s[d].as_str())
                    .collect();
                (labels, v)
            })
            .collect()
    }

    /// `scale * u + shift` applied to every entry.
    pub fn affine(&self, scale: P, shift: P) -> Self {
        Self {
            scope: self.scope.clone(),
            values: self.values.iter().map(|&u| scale * u + shift).collect(),
        }
    }

    pub(crate) fn check(&self, net: &Network<P>) -> Result<(), DecisionError> {
        let (_, states) = scope_states(net, &self.scope)?;
        let expected: usize = states.iter().map(|s| s.len()).product();
        if self.values.len() != expected {
            return Err(DecisionError::UtilityShape {
                expected,
                found: self.values.len(),
            });
        }
        if let Some((labels, _)) = self
            .entries(net)
            .into_iter()
            .find(|(_, v)| !v.is_finite_value())
        {
            return Err(DecisionError::NonFiniteUtility(labels.join("|")));
        }
        Ok(())
    }
}

fn scope_states<P: Real, S: AsRef<str>>(
    net: &Network<P>,
    scope: &[S],
) -> Result<(Vec<String>, Vec<Vec<String>>), DecisionError> {
    let mut seen = HashSet::new();
    let mut ids = Vec::with_capacity(scope.len());
    let mut states = Vec::with_capacity(scope.len());
    for s in scope {
        let id = s.as_ref();
        let node = net
            .node(id)
            .ok_or_else(|| DecisionError::UnknownScopeNode(id.to_string()))?;
        if !seen.insert(id) {
            return Err(DecisionError::DuplicateScopeNode(id.to_string()));
        }
        ids.push(id.to_string());
        states.push(node.states.clone());
    }
    Ok((ids, states))
}
