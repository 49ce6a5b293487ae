//! Constraint graphs, tree parameters and admissibility semantics.
//!
//! A hard-core model on the Cayley tree is specified by a constraint graph
//! on the state set `{0, .., m}`: a configuration is admissible iff every
//! nearest-neighbour state pair is an edge of the graph. The three built-in
//! graphs are the four-state `stick` and `key` and the two-state graph with
//! a self-loop at the vacant state.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The built-in constraint graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinGraph {
    /// Path on four states: edges {0,1}, {1,2}, {2,3}.
    Stick,
    /// Edges {0,1}, {0,2}, {1,2}, {2,3} on four states.
    Key,
    /// Two states with edges {0,0}, {0,1} (self-loop at 0).
    TwoState,
}

impl FromStr for BuiltinGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stick" => Ok(BuiltinGraph::Stick),
            "key" => Ok(BuiltinGraph::Key),
            "two-state" => Ok(BuiltinGraph::TwoState),
            other => Err(Error::UnknownGraph(other.to_string())),
        }
    }
}

impl fmt::Display for BuiltinGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BuiltinGraph::Stick => "stick",
            BuiltinGraph::Key => "key",
            BuiltinGraph::TwoState => "two-state",
        };
        f.write_str(name)
    }
}

/// Symmetric adjacency over the state set. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    num_states: usize,
    adj: Vec<bool>,
}

impl ConstraintGraph {
    /// Build a graph from an unordered edge list; loops are allowed.
    pub fn new(num_states: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_states < 2 {
            return Err(Error::InvalidSpec(format!(
                "constraint graph needs at least 2 states, got {num_states}"
            )));
        }
        let mut adj = vec![false; num_states * num_states];
        for &(a, b) in edges {
            for idx in [a, b] {
                if idx >= num_states {
                    return Err(Error::StateOutOfRange {
                        index: idx,
                        num_states,
                    });
                }
            }
            adj[a * num_states + b] = true;
            adj[b * num_states + a] = true;
        }
        Ok(ConstraintGraph { num_states, adj })
    }

    pub fn builtin(which: BuiltinGraph) -> Self {
        let (n, edges): (usize, &[(usize, usize)]) = match which {
            BuiltinGraph::Stick => (4, &[(0, 1), (1, 2), (2, 3)]),
            BuiltinGraph::Key => (4, &[(0, 1), (0, 2), (1, 2), (2, 3)]),
            BuiltinGraph::TwoState => (2, &[(0, 0), (0, 1)]),
        };
        ConstraintGraph::new(n, edges).expect("built-in edge lists are valid")
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Adjacency lookup without bounds reporting; panics on bad indices.
    #[inline]
    pub fn admissible(&self, s: usize, t: usize) -> bool {
        self.adj[s * self.num_states + t]
    }

    /// Checked adjacency lookup.
    pub fn is_admissible_pair(&self, s: usize, t: usize) -> Result<bool> {
        for idx in [s, t] {
            if idx >= self.num_states {
                return Err(Error::StateOutOfRange {
                    index: idx,
                    num_states: self.num_states,
                });
            }
        }
        Ok(self.admissible(s, t))
    }

    /// Number of states adjacent to `s`, counting a self-loop once.
    pub fn degree(&self, s: usize) -> usize {
        (0..self.num_states).filter(|&t| self.admissible(s, t)).count()
    }
}

/// Cayley tree parameters: order `k` and, for the finite-volume oracle,
/// a depth `n`. Every non-root vertex has `k` direct descendants; the root
/// has `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub k: u32,
    pub depth: u32,
}

impl TreeParams {
    pub fn new(k: u32, depth: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidSpec("tree order k must be >= 1".into()));
        }
        Ok(TreeParams { k, depth })
    }
}

/// Positive activity parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Activity(f64);

impl Activity {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain {
                value: lambda,
                reason: "activity must be a positive finite real",
            });
        }
        Ok(Activity(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stick_edges_exact() {
        let g = ConstraintGraph::builtin(BuiltinGraph::Stick);
        let expected = [
            [false, true, false, false],
            [true, false, true, false],
            [false, true, false, true],
            [false, false, true, false],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.admissible(i, j), expected[i][j], "a[{i}][{j}]");
            }
        }
    }

    #[test]
    fn key_edges_exact() {
        let g = ConstraintGraph::builtin(BuiltinGraph::Key);
        let edges = [(0, 1), (0, 2), (1, 2), (2, 3)];
        for i in 0..4 {
            for j in 0..4 {
                let expected = edges.iter().any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
                assert_eq!(g.admissible(i, j), expected, "a[{i}][{j}]");
            }
        }
    }

    #[test]
    fn two_state_has_self_loop() {
        let g = ConstraintGraph::builtin(BuiltinGraph::TwoState);
        assert!(g.admissible(0, 0));
        assert!(g.admissible(0, 1));
        assert!(g.admissible(1, 0));
        assert!(!g.admissible(1, 1));
    }

    #[test]
    fn admissibility_is_symmetric() {
        for which in [BuiltinGraph::Stick, BuiltinGraph::Key, BuiltinGraph::TwoState] {
            let g = ConstraintGraph::builtin(which);
            for s in 0..g.num_states() {
                for t in 0..g.num_states() {
                    assert_eq!(g.admissible(s, t), g.admissible(t, s));
                }
            }
        }
    }

    #[test]
    fn stick_examples() {
        let g = ConstraintGraph::builtin(BuiltinGraph::Stick);
        assert!(g.is_admissible_pair(1, 2).unwrap());
        assert!(!g.is_admissible_pair(0, 3).unwrap());
    }

    #[test]
    fn out_of_range_state_is_an_error() {
        let g = ConstraintGraph::builtin(BuiltinGraph::TwoState);
        assert!(g.is_admissible_pair(0, 2).is_err());
    }

    #[test]
    fn graph_names_parse_case_insensitive() {
        assert_eq!("Stick".parse::<BuiltinGraph>().unwrap(), BuiltinGraph::Stick);
        assert_eq!("KEY".parse::<BuiltinGraph>().unwrap(), BuiltinGraph::Key);
        assert_eq!("Two-State".parse::<BuiltinGraph>().unwrap(), BuiltinGraph::TwoState);
        assert!("wand".parse::<BuiltinGraph>().is_err());
    }

    #[test]
    fn activity_must_be_positive() {
        assert!(Activity::new(0.5).is_ok());
        assert!(Activity::new(0.0).is_err());
        assert!(Activity::new(-1.0).is_err());
        assert!(Activity::new(f64::NAN).is_err());
    }
}
