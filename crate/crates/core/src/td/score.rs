use super::TreeDecomposition;
use crate::graph::{ProgramGraph, Vertex};
use crate::program::Program;

/// Counts pairs (node, rule) where a head atom of the rule is introduced at the node
/// while some body atom of the rule has not yet appeared below it. Lower is better.
pub fn score_depgraph(td: &TreeDecomposition, pg: &ProgramGraph, p: &Program) -> usize {
    let n = td.len();
    let mut tin = vec![0; n];
    let mut tout = vec![0; n];
    let mut clock = 0;
    let mut stack = vec![(td.root(), false)];
    while let Some((t, done)) = stack.pop() {
        if done {
            tout[t] = clock - 1;
            continue;
        }
        tin[t] = clock;
        clock += 1;
        stack.push((t, true));
        for &c in td.children(t).iter().rev() {
            stack.push((c, false));
        }
    }
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); p.atom_count()];
    for t in 0..n {
        for &v in td.bag(t) {
            if let Vertex::Atom(a) = pg.vertex(v) {
                occ[a as usize].push(tin[t]);
            }
        }
    }
    for o in &mut occ {
        o.sort_unstable();
    }
    let below = |a: u32, t: usize| {
        let o = &occ[a as usize];
        let i = o.partition_point(|&x| x < tin[t]);
        i < o.len() && o[i] <= tout[t]
    };
    let mut heads: Vec<Vec<usize>> = vec![Vec::new(); p.atom_count()];
    for (r, rule) in p.rules().iter().enumerate() {
        for &h in rule.head() {
            heads[h as usize].push(r);
        }
    }
    let mut score = 0;
    for t in 0..n {
        for &v in td.bag(t) {
            let Vertex::Atom(a) = pg.vertex(v) else { continue };
            let introduced = td.children(t).iter().all(|&c| td.bag(c).binary_search(&v).is_err());
            if !introduced {
                continue;
            }
            for &r in &heads[a as usize] {
                let rule = p.rule(r as u32);
                if rule.pos().iter().chain(rule.neg()).any(|&b| !below(b, t)) {
                    score += 1;
                }
            }
        }
    }
    score
}

/// Sum of child bag sizes over nodes with at least two children.
pub fn score_joinsize(td: &TreeDecomposition) -> usize {
    (0..td.len())
        .filter(|&t| td.children(t).len() >= 2)
        .map(|t| td.children(t).iter().map(|&c| td.bag(c).len()).sum::<usize>())
        .sum()
}
