//! Uniform Steiner tree instances: the program generator and a graph-level oracle.

use crate::graph::Graph;
use crate::program::{AtomId, Program, Rule};
use crate::random::sample_vertices;

/// `rows × cols` grid; vertex `(i, j)` is `i * cols + j`.
pub fn grid_graph(rows: usize, cols: usize) -> Graph {
    let mut g = Graph::new(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let v = i * cols + j;
            if j + 1 < cols {
                g.add_edge(v, v + 1);
            }
            if i + 1 < rows {
                g.add_edge(v, v + cols);
            }
        }
    }
    g
}

/// `k` terminals drawn by `seed`, sorted.
pub fn sample_terminals(g: &Graph, k: usize, seed: u64) -> Vec<usize> {
    sample_vertices(g.vertex_count(), k, seed)
}

/// Program whose optimal answer sets are the minimum Steiner trees of `g` for
/// `terminals`. Edge atoms `e_v_w` (one per edge, `v < w`) come first, then vertex
/// atoms `a_v`; names use 1-based vertex numbers. The first terminal is the source
/// `s`, fixed by the fact `a_s`, so it needs no constraint.
///
/// Panics if `terminals` is empty or out of range.
pub fn steiner_program(g: &Graph, terminals: &[usize]) -> Program {
    let n = g.vertex_count();
    assert!(!terminals.is_empty() && terminals.iter().all(|&t| t < n), "terminals must be vertices");
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut p = Program::new(edges.len() + n);
    let e = |i: usize| i as AtomId;
    let a = |v: usize| (edges.len() + v) as AtomId;
    for (i, &(v, w)) in edges.iter().enumerate() {
        p.set_name(e(i), format!("e_{}_{}", v + 1, w + 1));
    }
    for v in 0..n {
        p.set_name(a(v), format!("a_{}", v + 1));
    }
    for (i, &(v, w)) in edges.iter().enumerate() {
        p.add_rule(Rule::choice(vec![e(i)], vec![], vec![]).unwrap()).unwrap();
        p.add_rule(Rule::minimize(e(i), true)).unwrap();
        p.add_rule(Rule::disjunctive(vec![a(v)], vec![a(w), e(i)], vec![]).unwrap()).unwrap();
        p.add_rule(Rule::disjunctive(vec![a(w)], vec![a(v), e(i)], vec![]).unwrap()).unwrap();
    }
    let s = terminals[0];
    for &t in terminals.iter().filter(|&&t| t != s) {
        p.add_rule(Rule::disjunctive(vec![], vec![], vec![a(t)]).unwrap()).unwrap();
    }
    p.add_rule(Rule::disjunctive(vec![a(s)], vec![], vec![]).unwrap()).unwrap();
    p
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Least number of edges of an edge set connecting all terminals, and the number of
/// edge sets of that size doing so, by enumerating all edge subsets. At most 26 edges.
pub fn brute_force_steiner(g: &Graph, terminals: &[usize]) -> (u64, u64) {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    assert!(edges.len() <= 26, "edge budget exceeded");
    let n = g.vertex_count();
    let (mut best, mut count) = (u64::MAX, 0u64);
    let mut parent = vec![0usize; n];
    for set in 0u64..1 << edges.len() {
        let size = set.count_ones() as u64;
        if size > best {
            continue;
        }
        parent.iter_mut().enumerate().for_each(|(i, p)| *p = i);
        for (i, &(v, w)) in edges.iter().enumerate() {
            if set >> i & 1 == 1 {
                let (x, y) = (find(&mut parent, v), find(&mut parent, w));
                parent[x] = y;
            }
        }
        let root = find(&mut parent, terminals[0]);
        if terminals.iter().all(|&t| find(&mut parent, t) == root) {
            if size < best {
                best = size;
                count = 0;
            }
            count += 1;
        }
    }
    (best, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_answer_sets, optimal_answer_sets, optimal_cost};

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let p = steiner_program(&g, &[0, 1]);
        assert_eq!(p.rule_count(), 6);
        let ans = brute_force_answer_sets(&p, 20).unwrap();
        assert_eq!(optimal_cost(&ans), Some(1));
        let opt = optimal_answer_sets(&ans);
        assert_eq!(opt.len(), 1);
        let names: Vec<String> = opt[0].atoms().iter().map(|&a| p.display_name(a)).collect();
        assert_eq!(names, ["e_1_2", "a_1", "a_2"]);
    }

    #[test]
    fn four_cycle_two_paths() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]);
        let p = steiner_program(&g, &[0, 2]);
        let ans = brute_force_answer_sets(&p, 20).unwrap();
        assert_eq!(optimal_cost(&ans), Some(2));
        assert_eq!(optimal_answer_sets(&ans).len(), 2);
        assert_eq!(brute_force_steiner(&g, &[0, 2]), (2, 2));
    }

    #[test]
    fn one_terminal() {
        let g = grid_graph(2, 2);
        let p = steiner_program(&g, &[3]);
        let ans = brute_force_answer_sets(&p, 20).unwrap();
        assert_eq!(optimal_cost(&ans), Some(0));
        let opt = optimal_answer_sets(&ans);
        assert_eq!(opt.len(), 1);
        assert_eq!(opt[0].atoms().iter().map(|&a| p.display_name(a)).collect::<Vec<_>>(), ["a_4"]);
        assert_eq!(brute_force_steiner(&g, &[3]), (0, 1));
    }

    #[test]
    fn grid_shape() {
        let g = grid_graph(3, 4);
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 3 * 3 + 2 * 4);
        assert!(g.is_connected());
    }
}
