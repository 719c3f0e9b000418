use std::collections::HashMap;

use num_bigint::BigUint;

use crate::dp::{insert_bit, remove_bit, CostCount, NodePlan, Plan, SolveError, Step};
use crate::program::AtomId;

pub(crate) const NONE: u32 = u32::MAX;

/// How a row arose from rows of the child tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origin {
    pub children: [u32; 2],
    /// Cost charged by this step.
    pub delta: u64,
    /// Atom decided true by this step.
    pub added: Option<AtomId>,
}

#[derive(Clone, Debug)]
pub struct WitnessRow {
    pub m: u32,
    pub sigma: u32,
    pub origins: Vec<Origin>,
    /// Least cost and number of models of the part below.
    pub cost: u64,
    pub count: BigUint,
}

#[derive(Clone, Debug, Default)]
pub struct WitnessTable {
    pub rows: Vec<WitnessRow>,
}

struct Builder {
    rows: Vec<WitnessRow>,
    index: HashMap<(u32, u32), u32>,
}

impl Builder {
    fn add(&mut self, m: u32, sigma: u32, origin: Origin, cost: u64, count: &BigUint) {
        let rows = &mut self.rows;
        let i = *self.index.entry((m, sigma)).or_insert_with(|| {
            rows.push(WitnessRow { m, sigma, origins: vec![], cost: u64::MAX, count: BigUint::default() });
            (rows.len() - 1) as u32
        });
        let row = &mut self.rows[i as usize];
        let mut cc = CostCount { cost: row.cost, count: std::mem::take(&mut row.count) };
        cc.merge(cost + origin.delta, count);
        row.cost = cc.cost;
        row.count = cc.count;
        row.origins.push(origin);
    }
}

/// Witness-only table of one node.
pub fn mod_node(node: &NodePlan, children: &[&WitnessTable]) -> Result<WitnessTable, SolveError> {
    if children.len() != node.children.len() {
        return Err(SolveError::ArityMismatch { expected: node.children.len(), got: children.len() });
    }
    let mut b = Builder { rows: Vec::new(), index: HashMap::new() };
    let plain = |i: usize| Origin { children: [i as u32, NONE], delta: 0, added: None };
    match node.step {
        Step::Leaf => b.add(0, 0, Origin { children: [NONE, NONE], delta: 0, added: None }, 0, &BigUint::from(1u8)),
        Step::IntroAtom { pos } => {
            for (i, r) in children[0].rows.iter().enumerate() {
                let m0 = insert_bit(r.m, pos);
                for m in [m0, m0 | 1 << pos] {
                    b.add(m, r.sigma | node.ssr_witness(node.touching, m), plain(i), r.cost, &r.count);
                }
            }
        }
        Step::IntroRule { pos } => {
            let rule = node.local[pos];
            for (i, r) in children[0].rows.iter().enumerate() {
                let sigma = insert_bit(r.sigma, pos) | (rule.sat_witness(r.m) as u32) << pos;
                b.add(r.m, sigma, plain(i), r.cost, &r.count);
            }
        }
        Step::ForgetAtom { pos, atom, cost_true, cost_false } => {
            for (i, r) in children[0].rows.iter().enumerate() {
                let truth = r.m >> pos & 1 == 1;
                let origin = Origin {
                    children: [i as u32, NONE],
                    delta: if truth { cost_true } else { cost_false },
                    added: truth.then_some(atom),
                };
                b.add(remove_bit(r.m, pos), r.sigma, origin, r.cost, &r.count);
            }
        }
        Step::ForgetRule { pos, .. } => {
            for (i, r) in children[0].rows.iter().enumerate() {
                if r.sigma >> pos & 1 == 1 {
                    b.add(r.m, remove_bit(r.sigma, pos), plain(i), r.cost, &r.count);
                }
            }
        }
        Step::Join => {
            let mut by_m: HashMap<u32, Vec<usize>> = HashMap::new();
            for (j, r) in children[1].rows.iter().enumerate() {
                by_m.entry(r.m).or_default().push(j);
            }
            for (i, r1) in children[0].rows.iter().enumerate() {
                for &j in by_m.get(&r1.m).into_iter().flatten() {
                    let r2 = &children[1].rows[j];
                    let origin = Origin { children: [i as u32, j as u32], delta: 0, added: None };
                    b.add(r1.m, r1.sigma | r2.sigma, origin, r1.cost + r2.cost, &(&r1.count * &r2.count));
                }
            }
        }
    }
    Ok(WitnessTable { rows: b.rows })
}

/// Keeps exactly the rows reachable top-down from the root rows and renumbers origins.
/// Returns, per node, the map from old to new row indices.
pub(crate) fn purge<R>(
    plan: &Plan,
    tables: &mut [Vec<R>],
    links: impl Fn(&R) -> Vec<[u32; 2]>,
    relink: impl Fn(&mut R, &dyn Fn(usize, u32) -> u32),
) -> Vec<Vec<u32>> {
    let n = plan.nodes.len();
    let mut alive: Vec<Vec<bool>> = tables.iter().map(|t| vec![false; t.len()]).collect();
    alive[n - 1].iter_mut().for_each(|a| *a = true);
    for t in (0..n).rev() {
        let kids = &plan.nodes[t].children;
        for (i, row) in tables[t].iter().enumerate() {
            if !alive[t][i] {
                continue;
            }
            for link in links(row) {
                for (k, &c) in kids.iter().enumerate() {
                    alive[c][link[k] as usize] = true;
                }
            }
        }
    }
    let mut maps: Vec<Vec<u32>> = Vec::with_capacity(n);
    for t in 0..n {
        let mut map = vec![NONE; tables[t].len()];
        let mut next = 0u32;
        for (i, &a) in alive[t].iter().enumerate() {
            if a {
                map[i] = next;
                next += 1;
            }
        }
        let old = std::mem::take(&mut tables[t]);
        let kids = plan.nodes[t].children.clone();
        let lookup = |k: usize, i: u32| maps[kids[k]][i as usize];
        tables[t] = old
            .into_iter()
            .zip(&alive[t])
            .filter(|(_, &a)| a)
            .map(|(mut row, _)| {
                relink(&mut row, &lookup);
                row
            })
            .collect();
        maps.push(map);
    }
    maps
}

pub(crate) fn purge_witnesses(plan: &Plan, tables: &mut [WitnessTable]) {
    let mut rows: Vec<Vec<WitnessRow>> = tables.iter_mut().map(|t| std::mem::take(&mut t.rows)).collect();
    purge(
        plan,
        &mut rows,
        |r: &WitnessRow| r.origins.iter().map(|o| o.children).collect(),
        |r: &mut WitnessRow, f| {
            for o in &mut r.origins {
                for k in 0..2 {
                    if o.children[k] != NONE {
                        o.children[k] = f(k, o.children[k]);
                    }
                }
            }
        },
    );
    for (t, r) in tables.iter_mut().zip(rows) {
        t.rows = r;
    }
}
