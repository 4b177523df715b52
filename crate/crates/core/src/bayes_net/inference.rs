//! Exact inference.
//!
//! Full enumeration of the factorized joint is the reference semantics.
//! Variable elimination computes the same quantities on the ancestral
//! subgraph of the query and is the default.

use std::collections::HashSet;

use super::cpt::{mixed_radix_digits, mixed_radix_index};
use super::{Assignment, Distribution, Network, NetworkError};
use crate::real::{sum, Real};

/// Inference algorithm used by [`Network::query_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Inference {
    /// Sum the joint over every full assignment consistent with the evidence.
    Enumeration,
    #[default]
    VariableElimination,
}

impl<P: Real> Network<P> {
    /// Exact conditional distribution `P(targets | evidence)`.
    ///
    /// Targets may also be bound by the evidence, in which case they are
    /// degenerate in the result. Fails with [`NetworkError::ImpossibleEvidence`]
    /// when the evidence has probability zero.
    pub fn query<S: AsRef<str>>(&self, targets: &[S], evidence: &Assignment) -> Result<Distribution<P>, NetworkError> {
        self.query_with(targets, evidence, Inference::default())
    }

    pub fn query_with<S: AsRef<str>>(
        &self,
        targets: &[S],
        evidence: &Assignment,
        method: Inference,
    ) -> Result<Distribution<P>, NetworkError> {
        if targets.is_empty() {
            return Err(NetworkError::EmptyTargets);
        }
        let mut target_idx = Vec::with_capacity(targets.len());
        for t in targets {
            let i = self.index_of(t.as_ref())?;
            if target_idx.contains(&i) {
                return Err(NetworkError::OverlappingSets(t.as_ref().to_string()));
            }
            target_idx.push(i);
        }
        let bound = self.bind(evidence)?;

        let (unnormalized, total) = match method {
            Inference::Enumeration => enumerate(self, &target_idx, &bound),
            Inference::VariableElimination => eliminate(self, &target_idx, &bound),
        };
        if total == P::zero() {
            return Err(NetworkError::ImpossibleEvidence);
        }
        let probabilities = unnormalized.into_iter().map(|p| p / total).collect();
        Ok(Distribution::from_parts(
            target_idx.iter().map(|&i| self.nodes()[i].id.clone()).collect(),
            target_idx.iter().map(|&i| self.nodes()[i].states.clone()).collect(),
            probabilities,
        ))
    }

    /// Marginal probability of a (partial) assignment.
    pub fn evidence_probability(&self, evidence: &Assignment) -> Result<P, NetworkError> {
        let bound = self.bind(evidence)?;
        Ok(eliminate(self, &[], &bound).1)
    }

    /// Prior marginal of a single node.
    pub fn marginal(&self, node: &str) -> Result<Vec<P>, NetworkError> {
        Ok(self.query(&[node], &Assignment::new())?.probabilities().to_vec())
    }

    fn bind(&self, evidence: &Assignment) -> Result<Vec<Option<usize>>, NetworkError> {
        let mut bound = vec![None; self.len()];
        for (node, state) in self.resolve(evidence)? {
            bound[node] = Some(state);
        }
        Ok(bound)
    }
}

/// Joint-state table over `targets` (unnormalized) and its total mass.
fn enumerate<P: Real>(net: &Network<P>, targets: &[usize], bound: &[Option<usize>]) -> (Vec<P>, P) {
    let free: Vec<usize> = (0..net.len()).filter(|&i| bound[i].is_none()).collect();
    let free_radices: Vec<usize> = free.iter().map(|&i| net.cardinality(i)).collect();
    let target_radices: Vec<usize> = targets.iter().map(|&i| net.cardinality(i)).collect();
    let mut table = vec![P::zero(); target_radices.iter().product()];

    let mut states: Vec<usize> = bound.iter().map(|b| b.unwrap_or(0)).collect();
    let count: usize = free_radices.iter().product();
    for _ in 0..count {
        let p = net.joint_probability_of_states(&states);
        let slot = mixed_radix_index(targets.iter().map(|&t| states[t]), &target_radices);
        table[slot] = table[slot] + p;
        // odometer over the free nodes, last free node fastest
        for (&node, &radix) in free.iter().zip(&free_radices).rev() {
            states[node] += 1;
            if states[node] < radix {
                break;
            }
            states[node] = 0;
        }
    }
    let total = sum(&table);
    (table, total)
}

/// Table over a sorted set of unbound variables.
#[derive(Debug, Clone)]
struct Factor<P> {
    vars: Vec<usize>,
    cards: Vec<usize>,
    values: Vec<P>,
}

impl<P: Real> Factor<P> {
    fn scalar(value: P) -> Self {
        Self {
            vars: Vec::new(),
            cards: Vec::new(),
            values: vec![value],
        }
    }

    /// `P(x_node | pa_node)` restricted to the evidence.
    fn from_node(net: &Network<P>, node: usize, bound: &[Option<usize>]) -> Self {
        let mut vars: Vec<usize> = net
            .parent_indices(node)
            .iter()
            .copied()
            .chain(std::iter::once(node))
            .filter(|&v| bound[v].is_none())
            .collect();
        vars.sort_unstable();
        let cards: Vec<usize> = vars.iter().map(|&v| net.cardinality(v)).collect();
        let mut states: Vec<usize> = bound.iter().map(|b| b.unwrap_or(0)).collect();
        let size: usize = cards.iter().product();
        let values = (0..size)
            .map(|i| {
                for (&v, d) in vars.iter().zip(mixed_radix_digits(i, &cards)) {
                    states[v] = d;
                }
                net.local_probability(node, &states)
            })
            .collect();
        Self { vars, cards, values }
    }

    fn product(&self, other: &Self) -> Self {
        let mut vars: Vec<usize> = self.vars.iter().chain(&other.vars).copied().collect();
        vars.sort_unstable();
        vars.dedup();
        let cards: Vec<usize> = vars
            .iter()
            .map(|v| {
                let pos = self.vars.iter().position(|x| x == v);
                match pos {
                    Some(p) => self.cards[p],
                    None => other.cards[other.vars.iter().position(|x| x == v).unwrap()],
                }
            })
            .collect();
        let left = self.strides_within(&vars);
        let right = other.strides_within(&vars);
        let size: usize = cards.iter().product();
        let values = (0..size)
            .map(|i| {
                let digits = mixed_radix_digits(i, &cards);
                let li: usize = digits.iter().zip(&left).map(|(d, s)| d * s).sum();
                let ri: usize = digits.iter().zip(&right).map(|(d, s)| d * s).sum();
                self.values[li] * other.values[ri]
            })
            .collect();
        Self { vars, cards, values }
    }

    /// For each variable of `superset`, this factor's stride for it (0 if absent).
    fn strides_within(&self, superset: &[usize]) -> Vec<usize> {
        let mut own = vec![0; self.vars.len()];
        let mut acc = 1;
        for k in (0..self.vars.len()).rev() {
            own[k] = acc;
            acc *= self.cards[k];
        }
        superset
            .iter()
            .map(|v| self.vars.iter().position(|x| x == v).map_or(0, |k| own[k]))
            .collect()
    }

    fn sum_out(&self, var: usize) -> Self {
        let k = self.vars.iter().position(|&v| v == var).expect("variable in scope");
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        vars.remove(k);
        let card = cards.remove(k);
        let size: usize = cards.iter().product();
        let mut values = vec![P::zero(); size];
        for (i, &p) in self.values.iter().enumerate() {
            let mut digits = mixed_radix_digits(i, &self.cards);
            digits.remove(k);
            let slot = mixed_radix_index(digits, &cards);
            values[slot] = values[slot] + p;
        }
        debug_assert_eq!(values.len() * card, self.values.len());
        Self { vars, cards, values }
    }
}

fn eliminate<P: Real>(net: &Network<P>, targets: &[usize], bound: &[Option<usize>]) -> (Vec<P>, P) {
    let seeds = targets
        .iter()
        .copied()
        .chain((0..net.len()).filter(|&i| bound[i].is_some()));
    let relevant = net.ancestor_mask(seeds);

    let mut factors: Vec<Factor<P>> = (0..net.len())
        .filter(|&i| relevant[i])
        .map(|i| Factor::from_node(net, i, bound))
        .collect();

    let keep: HashSet<usize> = targets.iter().copied().collect();
    let mut hidden: Vec<usize> = (0..net.len())
        .filter(|&i| relevant[i] && bound[i].is_none() && !keep.contains(&i))
        .collect();

    while !hidden.is_empty() {
        // greedy: eliminate the variable whose merged factor is smallest
        let (pos, _) = hidden
            .iter()
            .enumerate()
            .map(|(pos, &v)| (pos, merged_size(net, &factors, v)))
            .min_by_key(|&(_, size)| size)
            .unwrap();
        let var = hidden.swap_remove(pos);
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.vars.contains(&var));
        factors = rest;
        let merged = touching
            .iter()
            .fold(Factor::scalar(P::one()), |acc, f| acc.product(f));
        factors.push(merged.sum_out(var));
    }

    let joint = factors
        .iter()
        .fold(Factor::scalar(P::one()), |acc, f| acc.product(f));
    let total = sum(&joint.values);

    // expand to the caller's target order, evidence-bound targets fixed
    let radices: Vec<usize> = targets.iter().map(|&t| net.cardinality(t)).collect();
    let size: usize = radices.iter().product();
    let table = (0..size)
        .map(|i| {
            let digits = mixed_radix_digits(i, &radices);
            let mut free_digits = vec![0; joint.vars.len()];
            for (&t, &d) in targets.iter().zip(&digits) {
                match bound[t] {
                    Some(s) if s != d => return P::zero(),
                    Some(_) => {}
                    None => {
                        let k = joint.vars.iter().position(|&v| v == t).unwrap();
                        free_digits[k] = d;
                    }
                }
            }
            joint.values[mixed_radix_index(free_digits, &joint.cards)]
        })
        .collect();
    (table, total)
}

fn merged_size<P: Real>(net: &Network<P>, factors: &[Factor<P>], var: usize) -> usize {
    let mut scope: Vec<usize> = factors
        .iter()
        .filter(|f| f.vars.contains(&var))
        .flat_map(|f| f.vars.iter().copied())
        .collect();
    scope.sort_unstable();
    scope.dedup();
    scope.iter().map(|&v| net.cardinality(v)).product()
}
