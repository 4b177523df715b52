use crate::real::Real;

/// Conditional probability table of a single node.
///
/// One row per joint parent configuration, one column per own state. Rows
/// are ordered mixed-radix over the parents' state indices with the first
/// declared parent most significant, so for parents `(A, B)` with 2 and 3
/// states the rows run `(a0,b0) (a0,b1) (a0,b2) (a1,b0) ...`. A root node
/// has exactly one row.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt<P = f64> {
    rows: Vec<Vec<P>>,
}

impl<P: Real> Cpt<P> {
    /// Wraps the rows as given. Shape and normalization are checked when the
    /// owning node is validated as part of a network.
    pub fn new(rows: Vec<Vec<P>>) -> Self {
        Self { rows }
    }

    /// Single-row table for a root node.
    pub fn prior(probabilities: Vec<P>) -> Self {
        Self {
            rows: vec![probabilities],
        }
    }

    /// Single-row table putting all mass on `state`.
    pub fn point_mass(num_states: usize, state: usize) -> Self {
        Self::prior(one_hot(num_states, state))
    }

    /// `n` x `n` table copying the state of a single `n`-state parent.
    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| one_hot(n, i)).collect(),
        }
    }

    /// Builds a table row by row, `f(row_index)` yielding each row.
    pub fn from_fn(num_rows: usize, f: impl FnMut(usize) -> Vec<P>) -> Self {
        Self {
            rows: (0..num_rows).map(f).collect(),
        }
    }

    pub fn rows(&self) -> &[Vec<P>] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &[P] {
        &self.rows[index]
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn into_rows(self) -> Vec<Vec<P>> {
        self.rows
    }

    /// True when every entry is exactly zero or one.
    pub fn is_deterministic(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|&p| p == P::zero() || p == P::one())
    }
}

fn one_hot<P: Real>(n: usize, hot: usize) -> Vec<P> {
    (0..n)
        .map(|i| if i == hot { P::one() } else { P::zero() })
        .collect()
}

/// Mixed-radix index of `digits` under `radices`, first digit most significant.
pub(crate) fn mixed_radix_index(digits: impl IntoIterator<Item = usize>, radices: &[usize]) -> usize {
    digits
        .into_iter()
        .zip(radices)
        .fold(0, |acc, (d, &r)| acc * r + d)
}

/// Inverse of [`mixed_radix_index`].
pub(crate) fn mixed_radix_digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    digits
}
