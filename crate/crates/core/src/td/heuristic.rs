use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TreeDecomposition;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    MinDegree,
    MinFill,
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let ns: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy elimination ordering; ties are broken uniformly with a generator seeded by `seed`.
pub fn elimination_order(g: &Graph, h: Heuristic, seed: u64) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(n);
    let mut ties = Vec::new();
    while !alive.is_empty() {
        let mut best = usize::MAX;
        ties.clear();
        for &v in &alive {
            let key = match h {
                Heuristic::MinDegree => adj[v].len(),
                Heuristic::MinFill => fill_in(&adj, v),
            };
            if key < best {
                best = key;
                ties.clear();
            }
            if key == best {
                ties.push(v);
            }
        }
        let v = ties[rng.gen_range(0..ties.len())];
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Decomposition induced by eliminating vertices in `order`. Bags contained in their
/// parent bag are merged away and the result is rooted at its smallest bag.
pub fn td_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    assert_eq!(order.len(), n, "ordering must list every vertex once");
    if n == 0 {
        return TreeDecomposition::single(vec![]);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > i).collect();
        for (k, &a) in later.iter().enumerate() {
            for &b in &later[k + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent.push(later.iter().map(|&u| pos[u]).min());
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // Join the components into one tree below the last eliminated vertex.
    for p in parent.iter_mut().take(n - 1) {
        if p.is_none() {
            *p = Some(n - 1);
        }
    }
    let mut alias: Vec<usize> = (0..n).collect();
    let mut removed = vec![false; n];
    for i in 0..n - 1 {
        let p = parent[i].unwrap();
        let sub = bags[i].iter().all(|v| bags[p].binary_search(v).is_ok());
        if sub {
            removed[i] = true;
            alias[i] = p;
        }
    }
    let find = |mut t: usize| {
        while alias[t] != t {
            t = alias[t];
        }
        t
    };
    let keep: Vec<usize> = (0..n).filter(|&i| !removed[i]).collect();
    let mut index = vec![usize::MAX; n];
    for (k, &i) in keep.iter().enumerate() {
        index[i] = k;
    }
    let edges: Vec<(usize, usize)> = keep
        .iter()
        .filter_map(|&i| parent[i].map(|p| (index[find(p)], index[i])))
        .collect();
    let kept_bags = keep.iter().map(|&i| bags[i].clone()).collect();
    TreeDecomposition::new(kept_bags, &edges, index[n - 1]).unwrap().rooted_at_smallest_bag()
}

pub fn heuristic_td(g: &Graph, h: Heuristic, seed: u64) -> TreeDecomposition {
    td_from_order(g, &elimination_order(g, h, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_has_width_two() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5)));
        for h in [Heuristic::MinDegree, Heuristic::MinFill] {
            let td = heuristic_td(&g, h, 3);
            td.validate(&g).unwrap();
            assert_eq!(td.width(), 2);
        }
    }

    #[test]
    fn disconnected_and_empty_graphs() {
        let g = Graph::from_edges(4, [(0, 1)]);
        let td = heuristic_td(&g, Heuristic::MinFill, 0);
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 1);
        let td = heuristic_td(&Graph::new(0), Heuristic::MinFill, 0);
        assert_eq!(td.len(), 1);
        assert!(td.bag(0).is_empty());
    }

    #[test]
    fn same_seed_same_ordering() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        assert_eq!(
            elimination_order(&g, Heuristic::MinFill, 9),
            elimination_order(&g, Heuristic::MinFill, 9)
        );
    }
}
