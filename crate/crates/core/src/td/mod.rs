//! Rooted tree decompositions: construction, validation, normalization and I/O.

mod heuristic;
mod nice;
mod pace;
mod score;
mod select;

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::Graph;

pub use heuristic::{elimination_order, heuristic_td, td_from_order, Heuristic};
pub use nice::{normalize_nice, NiceKind, NiceNode, NiceTd};
pub use pace::{emit_td, parse_td};
pub use score::{score_depgraph, score_joinsize};
pub use select::{select_td, Feature, SelectedTd};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TdViolation {
    /// Condition (i): a vertex in no bag.
    UncoveredVertex(usize),
    /// Condition (ii): an edge in no bag.
    UncoveredEdge(usize, usize),
    /// Condition (iii): the bags holding a vertex are not connected.
    Disconnected(usize),
    /// A bag names a vertex the graph does not have.
    UnknownVertex(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdError {
    #[error("tree decomposition violates {} condition(s), first: {:?}", .0.len(), .0[0])]
    Invalid(Vec<TdViolation>),
    #[error("edges do not form a tree over {nodes} nodes")]
    NotATree { nodes: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A rooted tree decomposition. Bags are sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl TreeDecomposition {
    /// Builds a decomposition from bags and undirected tree edges, rooted at `root`.
    pub fn new(mut bags: Vec<Vec<usize>>, edges: &[(usize, usize)], root: usize) -> Result<Self, TdError> {
        let n = bags.len();
        if n == 0 || root >= n || edges.len() + 1 != n {
            return Err(TdError::NotATree { nodes: n });
        }
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(TdError::NotATree { nodes: n });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            adj[u].sort_unstable();
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    children[u].push(v);
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TdError::NotATree { nodes: n });
        }
        Ok(TreeDecomposition { bags, parent, children, root })
    }

    /// A one-node decomposition.
    pub fn single(bag: Vec<usize>) -> Self {
        TreeDecomposition::new(vec![bag], &[], 0).unwrap()
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn bag(&self, t: usize) -> &[usize] {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    /// Tree edges as `(parent, child)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter_map(|t| self.parent[t].map(|p| (p, t))).collect()
    }

    /// Largest bag size minus one; zero for decompositions with only empty bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Nodes with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.children[t].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn rerooted(&self, root: usize) -> Self {
        TreeDecomposition::new(self.bags.clone(), &self.edges(), root).unwrap()
    }

    /// Reroots at the smallest bag, lowest index on ties.
    pub fn rooted_at_smallest_bag(&self) -> Self {
        let r = (0..self.len()).min_by_key(|&t| (self.bags[t].len(), t)).unwrap();
        self.rerooted(r)
    }

    /// Checks conditions (i)-(iii) against `g`.
    pub fn violations(&self, g: &Graph) -> Vec<TdViolation> {
        let n = g.vertex_count();
        let mut out = Vec::new();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (t, b) in self.bags.iter().enumerate() {
            for &v in b {
                if v >= n {
                    out.push(TdViolation::UnknownVertex(v));
                } else {
                    holders[v].push(t);
                }
            }
        }
        for v in 0..n {
            if holders[v].is_empty() {
                out.push(TdViolation::UncoveredVertex(v));
            }
        }
        for (u, v) in g.edges() {
            let covered = holders[u].iter().any(|&t| self.bags[t].binary_search(&v).is_ok());
            if !covered {
                out.push(TdViolation::UncoveredEdge(u, v));
            }
        }
        // The holders of v are connected iff exactly one of them has a parent outside.
        for v in 0..n {
            let tops = holders[v]
                .iter()
                .filter(|&&t| match self.parent[t] {
                    None => true,
                    Some(p) => self.bags[p].binary_search(&v).is_err(),
                })
                .count();
            if tops > 1 {
                out.push(TdViolation::Disconnected(v));
            }
        }
        out
    }

    pub fn validate(&self, g: &Graph) -> Result<(), TdError> {
        let v = self.violations(g);
        if v.is_empty() {
            Ok(())
        } else {
            Err(TdError::Invalid(v))
        }
    }
}
