//! Exact finite-volume cross-check.
//!
//! Enumerates every admissible configuration on a small depth-n tree,
//! computes the boundary-condition measure by brute force, and verifies
//! the defining compatibility property of a boundary law: the depth-n
//! measure restricted to the depth-(n-1) volume must reproduce the
//! depth-(n-1) measure. This is independent of the fixed-point machinery
//! and is used to certify solutions produced by it.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::ConstraintGraph;

/// Hard cap on the number of vertices enumeration will accept.
pub const SIZE_GUARD: usize = 22;

/// Finite ball of a Cayley tree of order k: the root has k + 1 direct
/// descendants, every other non-leaf vertex has k. Vertices are stored
/// level by level, so the depth-(n-1) ball is a prefix of the depth-n
/// ball's vertex list.
#[derive(Debug, Clone)]
pub struct FiniteTree {
    pub k: u32,
    pub depth: u32,
    parents: Vec<Option<usize>>,
    depths: Vec<u32>,
}

impl FiniteTree {
    pub fn new(k: u32, depth: u32) -> Result<Self> {
        let mut parents = vec![None];
        let mut depths = vec![0u32];
        let mut frontier = vec![0usize];
        for d in 0..depth {
            let mut next = Vec::new();
            for &v in &frontier {
                let fanout = if d == 0 { k + 1 } else { k };
                for _ in 0..fanout {
                    parents.push(Some(v));
                    depths.push(d + 1);
                    next.push(parents.len() - 1);
                }
            }
            frontier = next;
            if parents.len() > SIZE_GUARD {
                return Err(Error::SizeGuard {
                    actual: parents.len(),
                    guard: SIZE_GUARD,
                });
            }
        }
        Ok(FiniteTree { k, depth, parents, depths })
    }

    pub fn num_vertices(&self) -> usize {
        self.parents.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    pub fn depth_of(&self, v: usize) -> u32 {
        self.depths[v]
    }

    /// Vertices at the outer level.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| self.depths[v] == self.depth)
            .collect()
    }
}

fn bits_per_state(num_states: usize) -> u32 {
    usize::BITS - (num_states - 1).leading_zeros()
}

/// Unnormalised weights of all admissible configurations, keyed by a
/// packed state code. `vertex_weight(v, s)` multiplies in activity and
/// any boundary weight for vertex `v` in state `s`.
fn enumerate_weights<F>(
    graph: &ConstraintGraph,
    tree: &FiniteTree,
    vertex_weight: F,
) -> Vec<(u64, f64)>
where
    F: Fn(usize, usize) -> f64,
{
    let n = tree.num_vertices();
    let bits = bits_per_state(graph.num_states());
    let mut out = Vec::new();
    let mut states = vec![0usize; n];
    // vertices are ordered so every parent precedes its children
    fn rec<F: Fn(usize, usize) -> f64>(
        v: usize,
        code: u64,
        weight: f64,
        graph: &ConstraintGraph,
        tree: &FiniteTree,
        states: &mut [usize],
        bits: u32,
        vertex_weight: &F,
        out: &mut Vec<(u64, f64)>,
    ) {
        if v == tree.num_vertices() {
            out.push((code, weight));
            return;
        }
        for s in 0..graph.num_states() {
            if let Some(p) = tree.parent(v) {
                if !graph.admissible(states[p], s) {
                    continue;
                }
            }
            let w = vertex_weight(v, s);
            if w == 0.0 {
                continue;
            }
            states[v] = s;
            rec(
                v + 1,
                code | (s as u64) << (bits * v as u32),
                weight * w,
                graph,
                tree,
                states,
                bits,
                vertex_weight,
                out,
            );
        }
    }
    rec(0, 0, 1.0, graph, tree, &mut states, bits, &vertex_weight, &mut out);
    out
}

fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let (mut s, mut c) = (0.0_f64, 0.0_f64);
    for x in xs {
        let y = x - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    s
}

/// Normalised finite-volume measure as a map from packed configuration
/// code to probability.
#[derive(Debug, Clone)]
pub struct FiniteMeasure {
    pub probs: HashMap<u64, f64>,
    /// Bits per vertex in the code.
    pub bits: u32,
    pub num_vertices: usize,
}

impl FiniteMeasure {
    /// Marginal on the first `m` vertices (a prefix of the level order,
    /// i.e. a smaller ball).
    pub fn prefix_marginal(&self, m: usize) -> HashMap<u64, f64> {
        let mask = if self.bits as usize * m >= 64 {
            u64::MAX
        } else {
            (1u64 << (self.bits * m as u32)) - 1
        };
        let mut out = HashMap::new();
        for (&code, &p) in &self.probs {
            *out.entry(code & mask).or_insert(0.0) += p;
        }
        out
    }
}

/// Brute-force measure with per-state activities and a boundary weight
/// applied at the outer level. When the tree is a single vertex the
/// root's boundary weight is raised to `(k+1)/k`: the root has k + 1
/// subtree directions while the law is calibrated for k.
pub fn finite_measure_with_activities(
    graph: &ConstraintGraph,
    tree: &FiniteTree,
    activities: &[f64],
    leaf_weight: &dyn Fn(usize, usize) -> f64,
) -> Result<FiniteMeasure> {
    if activities.len() != graph.num_states() {
        return Err(Error::WrongStateCount {
            expected: graph.num_states(),
            got: activities.len(),
        });
    }
    let root_exponent = (tree.k as f64 + 1.0) / tree.k as f64;
    let weights = enumerate_weights(graph, tree, |v, s| {
        let mut w = activities[s];
        if tree.depth_of(v) == tree.depth {
            if tree.depth == 0 {
                w *= leaf_weight(v, s).powf(root_exponent);
            } else {
                w *= leaf_weight(v, s);
            }
        }
        w
    });
    let z = kahan_sum(weights.iter().map(|&(_, w)| w));
    if !(z > 0.0) {
        return Err(Error::Domain {
            value: z,
            reason: "partition function must be positive",
        });
    }
    let probs = weights.into_iter().map(|(c, w)| (c, w / z)).collect();
    Ok(FiniteMeasure {
        probs,
        bits: bits_per_state(graph.num_states()),
        num_vertices: tree.num_vertices(),
    })
}

/// Translation-invariant boundary law in the normalisation used by the
/// fixed-point systems.
#[derive(Debug, Clone, Copy)]
pub enum TiLaw {
    /// Two-state law: occupied-state component z, vacant normalised to 1.
    TwoState(f64),
    /// Four-state law `(z0, z1, z2)` with the reference state 3
    /// normalised to 1.
    FourState([f64; 3]),
}

impl TiLaw {
    /// Activities per state. The four-state systems put the free
    /// activity on states 0..2 and use state 3 as the unit-activity
    /// reference.
    fn activities(&self, lambda: f64) -> Vec<f64> {
        match self {
            TiLaw::TwoState(_) => vec![1.0, lambda],
            TiLaw::FourState(_) => vec![lambda, lambda, lambda, 1.0],
        }
    }

    /// Boundary weights per state: the law divided by the activities,
    /// so that activity times weight reproduces the law component.
    fn weights(&self, lambda: f64) -> Vec<f64> {
        match self {
            TiLaw::TwoState(z) => vec![1.0, *z],
            TiLaw::FourState(z) => vec![z[0] / lambda, z[1] / lambda, z[2] / lambda, 1.0],
        }
    }
}

/// Maximum absolute discrepancy between the depth-n measure restricted
/// to the depth-(n-1) ball and the depth-(n-1) measure, both built from
/// the same translation-invariant law. A valid law gives a value at
/// floating-point noise level.
pub fn check_consistency(
    graph: &ConstraintGraph,
    k: u32,
    lambda: f64,
    law: &TiLaw,
    n: u32,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidSpec("consistency check needs n >= 1".into()));
    }
    let expected_states = match law {
        TiLaw::TwoState(_) => 2,
        TiLaw::FourState(_) => 4,
    };
    if graph.num_states() != expected_states {
        return Err(Error::WrongStateCount {
            expected: expected_states,
            got: graph.num_states(),
        });
    }
    let activities = law.activities(lambda);
    let weights = law.weights(lambda);
    let leaf = |_v: usize, s: usize| weights[s];

    let outer = FiniteTree::new(k, n)?;
    let inner = FiniteTree::new(k, n - 1)?;
    let mu_outer = finite_measure_with_activities(graph, &outer, &activities, &leaf)?;
    let mu_inner = finite_measure_with_activities(graph, &inner, &activities, &leaf)?;

    let restricted = mu_outer.prefix_marginal(inner.num_vertices());
    let mut worst = 0.0_f64;
    for (code, p) in &mu_inner.probs {
        let q = restricted.get(code).copied().unwrap_or(0.0);
        worst = worst.max((p - q).abs());
    }
    for (code, q) in &restricted {
        if !mu_inner.probs.contains_key(code) {
            worst = worst.max(*q);
        }
    }
    Ok(worst)
}

/// Finite tree carrying the index-four coset labelling. Classes are bit
/// pairs (subset parity, length parity); a subset-generator edge flips
/// both bits, any other edge flips the length bit only. Class ids:
/// 0 = (even, even), 1 = (odd, even), 2 = (even, odd), 3 = (odd, odd).
#[derive(Debug, Clone)]
pub struct CosetTree {
    pub tree: FiniteTree,
    classes: Vec<u8>,
}

impl CosetTree {
    pub fn new(k: u32, i: u32, depth: u32) -> Result<Self> {
        if i < 1 || i > k + 1 {
            return Err(Error::LabelingInfeasible { i, k });
        }
        let mut parents = vec![None];
        let mut depths = vec![0u32];
        let mut classes = vec![0u8];
        let mut parent_edge_in_subset = vec![false];
        let mut frontier = vec![0usize];
        let child_class = |c: u8, in_subset: bool| -> u8 {
            if in_subset {
                c ^ 0b11
            } else {
                c ^ 0b10
            }
        };
        for d in 0..depth {
            let mut next = Vec::new();
            for &v in &frontier {
                // generator budget: i subset edges out of k + 1 per
                // vertex; the parent edge consumes one
                let (n_sub, n_other) = if d == 0 {
                    (i, k + 1 - i)
                } else if parent_edge_in_subset[v] {
                    (i - 1, k - i + 1)
                } else {
                    (i, k - i)
                };
                for (count, in_subset) in [(n_sub, true), (n_other, false)] {
                    for _ in 0..count {
                        parents.push(Some(v));
                        depths.push(d + 1);
                        classes.push(child_class(classes[v], in_subset));
                        parent_edge_in_subset.push(in_subset);
                        next.push(parents.len() - 1);
                    }
                }
            }
            frontier = next;
            if parents.len() > SIZE_GUARD {
                return Err(Error::SizeGuard {
                    actual: parents.len(),
                    guard: SIZE_GUARD,
                });
            }
        }
        Ok(CosetTree {
            tree: FiniteTree { k, depth, parents, depths },
            classes,
        })
    }

    pub fn class_of(&self, v: usize) -> u8 {
        self.classes[v]
    }
}

/// Law component for an occupied leaf in class `c` whose parent is in
/// class `p`, from the eight-component vector `z1..z8`.
fn wp_component(z: &[f64; 8], c: u8, p: u8) -> Result<f64> {
    let idx = match (c, p) {
        (3, 1) => 0,
        (1, 3) => 1,
        (3, 0) => 2,
        (0, 3) => 3,
        (1, 2) => 4,
        (2, 1) => 5,
        (2, 0) => 6,
        (0, 2) => 7,
        _ => {
            return Err(Error::InvalidSpec(format!(
                "class pair ({c}, {p}) cannot occur on a tree edge"
            )))
        }
    };
    Ok(z[idx])
}

/// Compatibility check for a weakly periodic two-state law: compares the
/// depth-n and depth-(n-1) measures built from the class-dependent
/// boundary weights. Requires n >= 2 so both volumes have a proper
/// outer level.
pub fn wp_consistency_check(k: u32, i: u32, lambda: f64, z: &[f64; 8], n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidSpec(
            "weakly periodic check needs n >= 2".into(),
        ));
    }
    let graph = ConstraintGraph::builtin(crate::model::BuiltinGraph::TwoState);
    let activities = vec![1.0, lambda];
    let outer = CosetTree::new(k, i, n)?;
    let inner = CosetTree::new(k, i, n - 1)?;
    let weight_for = |ct: &CosetTree| {
        let classes = ct.classes.clone();
        let parents = ct.tree.parents.clone();
        let z = *z;
        move |v: usize, s: usize| -> f64 {
            if s == 0 {
                1.0
            } else {
                let p = parents[v].expect("leaves have parents for n >= 1");
                wp_component(&z, classes[v], classes[p]).unwrap_or(0.0)
            }
        }
    };
    let w_outer = weight_for(&outer);
    let w_inner = weight_for(&inner);
    let mu_outer =
        finite_measure_with_activities(&graph, &outer.tree, &activities, &w_outer)?;
    let mu_inner =
        finite_measure_with_activities(&graph, &inner.tree, &activities, &w_inner)?;
    let restricted = mu_outer.prefix_marginal(inner.tree.num_vertices());
    let mut worst = 0.0_f64;
    for (code, p) in &mu_inner.probs {
        let q = restricted.get(code).copied().unwrap_or(0.0);
        worst = worst.max((p - q).abs());
    }
    Ok(worst)
}
