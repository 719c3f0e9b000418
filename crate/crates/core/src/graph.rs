//! Undirected simple graphs and the structural graphs of a program.
//!
//! For program graphs, vertex `a` is atom `a` and vertex `atom_count + r` is rule `r`.

use std::collections::BTreeSet;

use crate::program::{AtomId, Program, RuleId, RuleKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Ignores self loops.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Atom(AtomId),
    Rule(RuleId),
}

/// A program graph together with the atom/rule labelling of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramGraph {
    pub graph: Graph,
    pub atom_count: usize,
}

impl ProgramGraph {
    pub fn vertex(&self, v: usize) -> Vertex {
        if v < self.atom_count {
            Vertex::Atom(v as AtomId)
        } else {
            Vertex::Rule((v - self.atom_count) as RuleId)
        }
    }

    pub fn index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Atom(a) => a as usize,
            Vertex::Rule(r) => self.atom_count + r as usize,
        }
    }
}

/// Atom-rule edges for every atom occurring in a rule.
pub fn build_incidence(p: &Program) -> ProgramGraph {
    let n = p.atom_count();
    let mut g = Graph::new(n + p.rule_count());
    for (r, rule) in p.rules().iter().enumerate() {
        for a in rule.atoms() {
            g.add_edge(a as usize, n + r);
        }
    }
    ProgramGraph { graph: g, atom_count: n }
}

/// Incidence edges plus a clique on the head atoms of every choice rule.
pub fn build_semi_incidence(p: &Program) -> ProgramGraph {
    let mut pg = build_incidence(p);
    for rule in p.rules().iter().filter(|r| r.kind() == RuleKind::Choice) {
        let h = rule.head();
        for (i, &a) in h.iter().enumerate() {
            for &b in &h[i + 1..] {
                pg.graph.add_edge(a as usize, b as usize);
            }
        }
    }
    pg
}

/// Reads a graph in PACE `.gr` or DIMACS edge format (`p tw n m` / `p edge n m`,
/// then `u v` or `e u v` lines, 1-based, `c` comments).
pub fn parse_graph(src: &str) -> Result<Graph, String> {
    let mut g: Option<Graph> = None;
    for (i, line) in src.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", ..] => {}
            ["p", _, n, _] => {
                let n: usize = n.parse().map_err(|_| format!("line {}: bad vertex count", i + 1))?;
                g = Some(Graph::new(n));
            }
            ["e", u, v] | [u, v] => {
                let g = g.as_mut().ok_or(format!("line {}: edge before header", i + 1))?;
                let parse = |s: &str| -> Result<usize, String> {
                    let x: usize = s.parse().map_err(|_| format!("line {}: bad vertex `{s}`", i + 1))?;
                    if x == 0 || x > g.vertex_count() {
                        return Err(format!("line {}: vertex {x} out of range", i + 1));
                    }
                    Ok(x - 1)
                };
                let (u, v) = (parse(u)?, parse(v)?);
                g.add_edge(u, v);
            }
            _ => return Err(format!("line {}: unrecognized line", i + 1)),
        }
    }
    g.ok_or_else(|| "missing `p` header".to_string())
}

pub fn emit_graph(g: &Graph) -> String {
    let mut s = format!("p tw {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::Rule;

    #[test]
    fn semi_incidence_adds_choice_clique() {
        let mut p = Program::new(3);
        p.add_rule(Rule::choice(vec![0, 1, 2], vec![], vec![]).unwrap()).unwrap();
        let inc = build_incidence(&p);
        let semi = build_semi_incidence(&p);
        assert_eq!(inc.graph.edge_count(), 3);
        assert_eq!(semi.graph.edge_count(), 6);
        assert!(semi.graph.has_edge(0, 2));
        assert_eq!(semi.vertex(3), Vertex::Rule(0));
    }

    #[test]
    fn graph_text_round_trip() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        assert_eq!(parse_graph(&emit_graph(&g)).unwrap(), g);
        assert_eq!(parse_graph("p edge 2 1\ne 1 2\n").unwrap().edge_count(), 1);
    }
}
