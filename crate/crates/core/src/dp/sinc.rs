//! Single-pass engine. A row pairs a witness `(M, σ)` with the family of its
//! counter-witnesses `(C, ρ)`; rows are keyed by all three components.

use std::collections::HashMap;
use std::ops::ControlFlow;

use num_bigint::BigUint;

use super::{
    for_each_extension, insert_bit, remove_bit, CostCount, LinkGraph, NodePlan, Plan, Pred, SolveError, Step,
};
use crate::program::{AtomId, Interpretation};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct SincRow {
    pub m: u32,
    pub sigma: u32,
    /// Sorted `(C, ρ)` pairs; every `C` is a subset of `m` on the bag.
    pub cws: Box<[(u32, u32)]>,
    pub cost: u64,
    pub count: BigUint,
    /// Empty unless links are kept.
    pub preds: Vec<Pred>,
}

#[derive(Clone, Debug, Default)]
pub struct SincTable {
    pub rows: Vec<SincRow>,
}

impl SincTable {
    /// Rows plus counter-witness rows.
    pub fn stored_rows(&self) -> u64 {
        self.rows.iter().map(|r| 1 + r.cws.len() as u64).sum()
    }
}

/// (M, σ, counter-witness set)
type RowKey = (u32, u32, Box<[(u32, u32)]>);

struct Builder {
    rows: Vec<SincRow>,
    index: HashMap<RowKey, u32>,
    keep_links: bool,
}

impl Builder {
    fn new(keep_links: bool) -> Self {
        Builder { rows: Vec::new(), index: HashMap::new(), keep_links }
    }

    #[allow(clippy::too_many_arguments)]
    fn add(
        &mut self,
        m: u32,
        sigma: u32,
        mut cws: Vec<(u32, u32)>,
        children: [u32; 2],
        cost: u64,
        count: &BigUint,
        added: Option<AtomId>,
    ) {
        cws.sort_unstable();
        cws.dedup();
        let cws = cws.into_boxed_slice();
        let rows = &mut self.rows;
        let idx = *self.index.entry((m, sigma, cws.clone())).or_insert_with(|| {
            rows.push(SincRow { m, sigma, cws, cost: u64::MAX, count: BigUint::default(), preds: Vec::new() });
            (rows.len() - 1) as u32
        });
        let row = &mut self.rows[idx as usize];
        let mut cc = CostCount { cost: row.cost, count: std::mem::take(&mut row.count) };
        cc.merge(cost, count);
        row.cost = cc.cost;
        row.count = cc.count;
        if self.keep_links {
            row.preds.push(Pred { children, cost, added });
        }
    }

    fn finish(self) -> SincTable {
        SincTable { rows: self.rows }
    }
}

/// Computes the table of one node from its child tables.
pub fn sinc_node(node: &NodePlan, children: &[&SincTable], keep_links: bool) -> Result<SincTable, SolveError> {
    let expected = node.children.len();
    if children.len() != expected {
        return Err(SolveError::ArityMismatch { expected, got: children.len() });
    }
    let mut b = Builder::new(keep_links);
    match node.step {
        Step::Leaf => b.add(0, 0, vec![], [NONE, NONE], 0, &BigUint::from(1u8), None),
        Step::IntroAtom { pos } => {
            let bit = 1u32 << pos;
            let touch = node.touching;
            for (i, row) in children[0].rows.iter().enumerate() {
                let m0 = insert_bit(row.m, pos);
                let m1 = m0 | bit;
                let s0 = row.sigma | node.ssr_witness(touch, m0);
                let cw0 = row
                    .cws
                    .iter()
                    .map(|&(c, rho)| {
                        let c0 = insert_bit(c, pos);
                        (c0, rho | node.ssr_counter(touch, m0, c0))
                    })
                    .collect();
                b.add(m0, s0, cw0, [i as u32, NONE], row.cost, &row.count, None);

                let s1 = row.sigma | node.ssr_witness(touch, m1);
                let mut cw1 = Vec::with_capacity(2 * row.cws.len() + 1);
                for &(c, rho) in row.cws.iter() {
                    let c0 = insert_bit(c, pos);
                    cw1.push((c0 | bit, rho | node.ssr_counter(touch, m1, c0 | bit)));
                    cw1.push((c0, rho | node.ssr_counter(touch, m1, c0)));
                }
                // The old witness is a counter-witness of the extended one.
                cw1.push((m0, row.sigma | node.ssr_counter(touch, m1, m0)));
                b.add(m1, s1, cw1, [i as u32, NONE], row.cost, &row.count, None);
            }
        }
        Step::IntroRule { pos } => {
            let rule = node.local[pos];
            for (i, row) in children[0].rows.iter().enumerate() {
                let sigma = insert_bit(row.sigma, pos) | (rule.sat_witness(row.m) as u32) << pos;
                let cws = row
                    .cws
                    .iter()
                    .map(|&(c, rho)| (c, insert_bit(rho, pos) | (rule.sat_counter(row.m, c) as u32) << pos))
                    .collect();
                b.add(row.m, sigma, cws, [i as u32, NONE], row.cost, &row.count, None);
            }
        }
        Step::ForgetAtom { pos, atom, cost_true, cost_false } => {
            for (i, row) in children[0].rows.iter().enumerate() {
                let truth = row.m >> pos & 1 == 1;
                let cost = row.cost + if truth { cost_true } else { cost_false };
                let cws = row.cws.iter().map(|&(c, rho)| (remove_bit(c, pos), rho)).collect();
                b.add(remove_bit(row.m, pos), row.sigma, cws, [i as u32, NONE], cost, &row.count, truth.then_some(atom));
            }
        }
        Step::ForgetRule { pos, .. } => {
            for (i, row) in children[0].rows.iter().enumerate() {
                if row.sigma >> pos & 1 == 0 {
                    continue;
                }
                let cws = row
                    .cws
                    .iter()
                    .filter(|&&(_, rho)| rho >> pos & 1 == 1)
                    .map(|&(c, rho)| (c, remove_bit(rho, pos)))
                    .collect();
                b.add(row.m, remove_bit(row.sigma, pos), cws, [i as u32, NONE], row.cost, &row.count, None);
            }
        }
        Step::Join => {
            let (left, right) = (children[0], children[1]);
            let mut by_m: HashMap<u32, Vec<u32>> = HashMap::new();
            for (j, r) in right.rows.iter().enumerate() {
                by_m.entry(r.m).or_default().push(j as u32);
            }
            for (i, r1) in left.rows.iter().enumerate() {
                let Some(js) = by_m.get(&r1.m) else { continue };
                for &j in js {
                    let r2 = &right.rows[j as usize];
                    let m = r1.m;
                    let mut cws = Vec::new();
                    // Pairs of counter-witnesses agreeing on the bag.
                    let (a, bb) = (&r1.cws, &r2.cws);
                    let (mut x, mut y) = (0, 0);
                    while x < a.len() && y < bb.len() {
                        let (ca, cb) = (a[x].0, bb[y].0);
                        if ca < cb {
                            x += 1;
                        } else if cb < ca {
                            y += 1;
                        } else {
                            let xe = x + a[x..].iter().take_while(|e| e.0 == ca).count();
                            let ye = y + bb[y..].iter().take_while(|e| e.0 == ca).count();
                            for &(_, ra) in &a[x..xe] {
                                for &(_, rb) in &bb[y..ye] {
                                    cws.push((ca, ra | rb));
                                }
                            }
                            x = xe;
                            y = ye;
                        }
                    }
                    // One side strictly smaller, the other equal to its witness.
                    cws.extend(a.iter().filter(|e| e.0 == m).map(|&(_, ra)| (m, ra | r2.sigma)));
                    cws.extend(bb.iter().filter(|e| e.0 == m).map(|&(_, rb)| (m, r1.sigma | rb)));
                    let count = &r1.count * &r2.count;
                    b.add(m, r1.sigma | r2.sigma, cws, [i as u32, j], r1.cost + r2.cost, &count, None);
                }
            }
        }
    }
    Ok(b.finish())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SincStats {
    /// Stored rows (witness rows plus counter-witness rows) per node.
    pub rows_per_node: Vec<u64>,
    pub total_rows: u64,
    /// Largest number of rows held at once.
    pub peak_rows: u64,
}

pub struct SincRun {
    pub plan: Plan,
    tables: Vec<Option<SincTable>>,
    pub stats: SincStats,
    retained: bool,
}

/// Runs the engine bottom-up. With `retain` unset, child tables and links are dropped
/// as soon as the parent is computed, which rules out enumeration.
pub fn dp_run(plan: Plan, retain: bool) -> Result<SincRun, SolveError> {
    let n = plan.nodes.len();
    let mut tables: Vec<Option<SincTable>> = (0..n).map(|_| None).collect();
    let mut stats = SincStats { rows_per_node: vec![0; n], ..Default::default() };
    let mut live = 0u64;
    for t in 0..n {
        let node = &plan.nodes[t];
        let kids: Vec<&SincTable> = node.children.iter().map(|&c| tables[c].as_ref().unwrap()).collect();
        let table = sinc_node(node, &kids, retain)?;
        let rows = table.stored_rows();
        stats.rows_per_node[t] = rows;
        stats.total_rows += rows;
        live += rows;
        stats.peak_rows = stats.peak_rows.max(live);
        if !retain {
            for &c in &node.children {
                live -= tables[c].take().unwrap().stored_rows();
            }
        }
        tables[t] = Some(table);
    }
    Ok(SincRun { plan, tables, stats, retained: retain })
}

impl SincRun {
    pub fn root(&self) -> usize {
        self.plan.root()
    }

    pub fn table(&self, t: usize) -> Option<&SincTable> {
        self.tables[t].as_ref()
    }

    fn answer_rows(&self) -> Vec<u32> {
        let root = self.tables[self.root()].as_ref().unwrap();
        (0..root.rows.len() as u32).filter(|&i| root.rows[i as usize].cws.is_empty()).collect()
    }

    /// Least cost over answer sets and the number of answer sets attaining it.
    pub fn optimum(&self) -> Option<CostCount> {
        let root = self.tables[self.root()].as_ref().unwrap();
        let mut best: Option<CostCount> = None;
        for i in self.answer_rows() {
            let r = &root.rows[i as usize];
            match &mut best {
                None => best = Some(CostCount { cost: r.cost, count: r.count.clone() }),
                Some(b) => b.merge(r.cost, &r.count),
            }
        }
        best
    }

    /// Streams the optimal answer sets.
    pub fn enumerate(&self, f: impl FnMut(Interpretation) -> ControlFlow<()>) -> Result<(), SolveError> {
        if !self.retained {
            return Err(SolveError::TablesReleased);
        }
        let Some(best) = self.optimum() else { return Ok(()) };
        let root = self.tables[self.root()].as_ref().unwrap();
        let rows: Vec<u32> =
            self.answer_rows().into_iter().filter(|&i| root.rows[i as usize].cost == best.cost).collect();
        let _ = for_each_extension(self, self.root(), &rows, f);
        Ok(())
    }
}

impl LinkGraph for SincRun {
    fn children(&self, node: usize) -> &[usize] {
        &self.plan.nodes[node].children
    }

    fn preds(&self, node: usize, row: u32) -> &[Pred] {
        &self.tables[node].as_ref().unwrap().rows[row as usize].preds
    }

    fn cost(&self, node: usize, row: u32) -> u64 {
        self.tables[node].as_ref().unwrap().rows[row as usize].cost
    }
}
