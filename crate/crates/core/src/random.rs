//! Seeded generators for programs and graphs, used by tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::program::{AtomId, Program, Rule, RuleKind};

#[derive(Clone, Copy, Debug)]
pub struct ProgramShape {
    pub max_atoms: usize,
    pub max_rules: usize,
    pub choice: bool,
    pub optimization: bool,
}

impl ProgramShape {
    pub fn small() -> Self {
        ProgramShape { max_atoms: 8, max_rules: 10, choice: true, optimization: true }
    }

    pub fn disjunctive(max_atoms: usize, max_rules: usize) -> Self {
        ProgramShape { max_atoms, max_rules, choice: false, optimization: false }
    }
}

fn pick(rng: &mut ChaCha8Rng, pool: &mut Vec<AtomId>, k: usize) -> Vec<AtomId> {
    pool.shuffle(rng);
    let k = k.min(pool.len());
    pool.drain(..k).collect()
}

/// A random program. Atoms `0..n` with `1 <= n <= max_atoms`; some atoms may occur in
/// no rule.
pub fn random_program(shape: ProgramShape, seed: u64) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=shape.max_atoms.max(1));
    let m = rng.gen_range(0..=shape.max_rules);
    let mut p = Program::new(n);
    for a in 0..n {
        p.set_name(a as AtomId, format!("p{a}"));
    }
    for _ in 0..m {
        let roll: f64 = rng.gen();
        let kind = if shape.optimization && roll < 0.12 {
            RuleKind::Optimization
        } else if shape.choice && roll < 0.35 {
            RuleKind::Choice
        } else {
            RuleKind::Disjunctive
        };
        let mut pool: Vec<AtomId> = (0..n as AtomId).collect();
        let rule = match kind {
            RuleKind::Optimization => {
                let a = rng.gen_range(0..n as AtomId);
                Rule::minimize(a, rng.gen_bool(0.6))
            }
            _ => {
                let hk = match kind {
                    RuleKind::Choice => rng.gen_range(1..=3),
                    _ => *[0usize, 1, 1, 1, 2, 2, 3].choose(&mut rng).unwrap(),
                };
                let head = pick(&mut rng, &mut pool, hk);
                let pk = rng.gen_range(0..=2);
                let pos = pick(&mut rng, &mut pool, pk);
                let nk = rng.gen_range(0..=2);
                let neg = pick(&mut rng, &mut pool, nk);
                if kind == RuleKind::Choice && head.is_empty() {
                    continue;
                }
                Rule::new(kind, head, pos, neg).unwrap()
            }
        };
        p.add_rule(rule).unwrap();
    }
    p
}

/// Erdős–Rényi graph on `n` vertices with edge probability `prob`.
pub fn random_graph(n: usize, prob: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(prob) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// `k` distinct vertices of `0..n`, sorted.
pub fn sample_vertices(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rng);
    v.truncate(k.min(n));
    v.sort_unstable();
    v
}
