use std::collections::HashSet;

use super::{Network, NetworkError};
use crate::real::Real;

impl<P: Real> Network<P> {
    /// d-separation test: true iff every trail between `x` and `y` is
    /// blocked given `z`.
    ///
    /// Uses the reachable-trail search over (node, direction) pairs: a trail
    /// may pass a non-collider only if it is unobserved, and a collider only
    /// if it or one of its descendants is observed.
    pub fn d_separated<S: AsRef<str>>(&self, x: &[S], y: &[S], z: &[S]) -> Result<bool, NetworkError> {
        let x = self.index_set(x)?;
        let y = self.index_set(y)?;
        let z = self.index_set(z)?;
        for v in x.iter().chain(&y) {
            if z.contains(v) || (x.contains(v) && y.contains(v)) {
                return Err(NetworkError::OverlappingSets(self.nodes()[*v].id.clone()));
            }
        }

        let observed: Vec<bool> = (0..self.len()).map(|i| z.contains(&i)).collect();
        // nodes that are observed or have an observed descendant
        let opens_collider = self.ancestor_mask(z.iter().copied());

        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Dir {
            // arrived from a child, moving against edge direction
            Up,
            // arrived from a parent
            Down,
        }

        let mut visited = HashSet::new();
        let mut stack: Vec<(usize, Dir)> = x.iter().map(|&v| (v, Dir::Up)).collect();
        while let Some((v, dir)) = stack.pop() {
            if !visited.insert((v, dir)) {
                continue;
            }
            if !observed[v] && y.contains(&v) {
                return Ok(false);
            }
            match dir {
                Dir::Up if !observed[v] => {
                    stack.extend(self.parent_indices(v).iter().map(|&p| (p, Dir::Up)));
                    stack.extend(self.child_indices(v).iter().map(|&c| (c, Dir::Down)));
                }
                Dir::Down => {
                    if !observed[v] {
                        stack.extend(self.child_indices(v).iter().map(|&c| (c, Dir::Down)));
                    }
                    if opens_collider[v] {
                        stack.extend(self.parent_indices(v).iter().map(|&p| (p, Dir::Up)));
                    }
                }
                Dir::Up => {}
            }
        }
        Ok(true)
    }

    fn index_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<HashSet<usize>, NetworkError> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::bayes_net::{Network, NetworkError, NodeSpec};

    fn binary(id: &str, parents: &[&str]) -> NodeSpec {
        let rows = 1 << parents.len();
        NodeSpec::new(id, vec!["0", "1"], parents.to_vec(), vec![vec![0.5, 0.5]; rows])
    }

    /// x2 <- x1; x4 <- x2; x5 <- x1, x2, x3.
    fn figure_one() -> Network {
        Network::new(vec![
            binary("x1", &[]),
            binary("x2", &["x1"]),
            binary("x3", &[]),
            binary("x4", &["x2"]),
            binary("x5", &["x1", "x2", "x3"]),
        ])
        .unwrap()
    }

    #[test]
    fn screening_off_on_figure_one() {
        let net = figure_one();
        assert!(net.d_separated(&["x1"], &["x4"], &["x2"]).unwrap());
        assert!(net.d_separated(&["x4"], &["x5"], &["x2"]).unwrap());
        assert!(!net.d_separated(&["x1"], &["x5"], &["x4"]).unwrap());
        assert!(!net.d_separated(&["x2"], &["x3"], &["x5"]).unwrap());
        assert!(net.d_separated(&["x2"], &["x3"], &[]).unwrap());
    }

    #[test]
    fn collider_opened_by_descendant() {
        let net = Network::new(vec![
            binary("a", &[]),
            binary("b", &[]),
            binary("c", &["a", "b"]),
            binary("d", &["c"]),
        ])
        .unwrap();
        assert!(net.d_separated(&["a"], &["b"], &[]).unwrap());
        assert!(!net.d_separated(&["a"], &["b"], &["d"]).unwrap());
        assert!(!net.d_separated(&["a"], &["b"], &["c"]).unwrap());
    }

    #[test]
    fn isolated_roots_are_separated() {
        let net = Network::new(vec![binary("A", &[]), binary("B", &[])]).unwrap();
        let empty: [&str; 0] = [];
        assert!(net.d_separated(&["A"], &["B"], &empty).unwrap());
    }

    #[test]
    fn rejects_bad_sets() {
        let net = figure_one();
        assert!(matches!(
            net.d_separated(&["x1"], &["x1"], &[]),
            Err(NetworkError::OverlappingSets(_))
        ));
        assert!(matches!(
            net.d_separated(&["x1"], &["x4"], &["x4"]),
            Err(NetworkError::OverlappingSets(_))
        ));
        assert!(matches!(
            net.d_separated(&["x9"], &["x4"], &[]),
            Err(NetworkError::UnknownNode(_))
        ));
    }
}
