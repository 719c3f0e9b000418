use std::collections::HashMap;

use num_bigint::BigUint;

use super::counter::{compatible, CounterTable, CwId, Evol};
use super::witness::{WitnessTable, NONE};
use crate::dp::{CostCount, NodePlan, Pred, SolveError, Step};

/// Index of a row in a linked table. Distinct from [`CwId`] so that linked rows and
/// counter-witness rows cannot be confused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkedId(pub u32);

/// A witness row together with the counter-witness rows reachable from strictly smaller
/// interpretations below.
#[derive(Clone, Debug)]
pub struct LinkedRow {
    pub witness: u32,
    set: u32,
    pub cost: u64,
    pub count: BigUint,
    /// Empty unless links are kept.
    pub preds: Vec<Pred>,
    /// Another linked row of the same witness was created earlier.
    pub is_clone: bool,
}

#[derive(Clone, Debug, Default)]
pub struct LinkedTable {
    pub rows: Vec<LinkedRow>,
    sets: Vec<Box<[CwId]>>,
    set_index: HashMap<Box<[CwId]>, u32>,
    index: HashMap<(u32, u32), u32>,
    by_witness: HashMap<u32, Vec<LinkedId>>,
}

impl LinkedTable {
    pub fn counter_witnesses(&self, id: LinkedId) -> &[CwId] {
        &self.sets[self.rows[id.0 as usize].set as usize]
    }

    pub fn of_witness(&self, w: u32) -> &[LinkedId] {
        self.by_witness.get(&w).map_or(&[], |v| v.as_slice())
    }

    pub fn row(&self, id: LinkedId) -> &LinkedRow {
        &self.rows[id.0 as usize]
    }

    fn intern(&mut self, mut set: Vec<CwId>) -> u32 {
        set.sort_unstable();
        set.dedup();
        let set = set.into_boxed_slice();
        if let Some(&i) = self.set_index.get(&set) {
            return i;
        }
        self.sets.push(set.clone());
        let i = (self.sets.len() - 1) as u32;
        self.set_index.insert(set, i);
        i
    }

    fn add(&mut self, witness: u32, set: Vec<CwId>, pred: Pred, count: &BigUint, keep_links: bool) {
        let set = self.intern(set);
        let rows = &mut self.rows;
        let by_witness = &mut self.by_witness;
        let i = *self.index.entry((witness, set)).or_insert_with(|| {
            let siblings = by_witness.entry(witness).or_default();
            rows.push(LinkedRow {
                witness,
                set,
                cost: u64::MAX,
                count: BigUint::default(),
                preds: vec![],
                is_clone: !siblings.is_empty(),
            });
            let id = (rows.len() - 1) as u32;
            siblings.push(LinkedId(id));
            id
        });
        let row = &mut self.rows[i as usize];
        let mut cc = CostCount { cost: row.cost, count: std::mem::take(&mut row.count) };
        cc.merge(pred.cost, count);
        row.cost = cc.cost;
        row.count = cc.count;
        if keep_links {
            row.preds.push(pred);
        }
    }

    /// Sum over rows of one plus the size of the counter-witness set.
    pub fn stored_entries(&self) -> u64 {
        self.rows.iter().map(|r| 1 + self.sets[r.set as usize].len() as u64).sum()
    }
}

/// Which counter-witness sources a child linked row passes on. Only `Both` is sound;
/// the others exist to show that neither part can be dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Sources {
    Both,
    SetOnly,
    SelfOnly,
}

/// Everything the linking step reads about one child.
pub struct ChildView<'a> {
    pub witnesses: &'a WitnessTable,
    pub counters: &'a CounterTable,
    pub linked: &'a LinkedTable,
}

impl ChildView<'_> {
    /// Counter-witness sources of a child linked row: its own set, strictly smaller, and
    /// the witness itself, not strictly smaller.
    fn sources(&self, x: LinkedId, mode: Sources) -> Vec<(CwId, bool)> {
        let w = &self.witnesses.rows[self.linked.row(x).witness as usize];
        let mut out: Vec<(CwId, bool)> = Vec::new();
        if mode != Sources::SelfOnly {
            out.extend(self.linked.counter_witnesses(x).iter().map(|&s| (s, true)));
        }
        if mode != Sources::SetOnly {
            out.extend(self.counters.self_row(w.m, w.sigma).map(|s| (s, false)));
        }
        out
    }
}

/// Linked table of one node. `witnesses` and `counters` are the purged tables of the
/// node and `evol` maps child counter-witness rows into `counters`.
pub fn link_node(
    node: &NodePlan,
    witnesses: &WitnessTable,
    counters: &CounterTable,
    evol: &Evol,
    children: &[ChildView<'_>],
    keep_links: bool,
) -> Result<LinkedTable, SolveError> {
    link_node_with(node, witnesses, counters, evol, children, keep_links, Sources::Both)
}

pub(crate) fn link_node_with(
    node: &NodePlan,
    witnesses: &WitnessTable,
    counters: &CounterTable,
    evol: &Evol,
    children: &[ChildView<'_>],
    keep_links: bool,
    mode: Sources,
) -> Result<LinkedTable, SolveError> {
    if children.len() != node.children.len() {
        return Err(SolveError::ArityMismatch { expected: node.children.len(), got: children.len() });
    }
    let rel = node.relevant;
    let mut out = LinkedTable::default();
    for (u, wu) in witnesses.rows.iter().enumerate() {
        let u = u as u32;
        // A successor counts if it belongs to the witness and is strictly smaller,
        // either on the bag or below it.
        let admit = |s: CwId, strict: bool, acc: &mut Vec<CwId>| {
            let r = counters.row(s);
            if compatible(r.c, r.tw, wu.m, rel) && (strict || r.c != wu.m) {
                acc.push(s);
            }
        };
        for o in &wu.origins {
            match (&node.step, evol) {
                (Step::Leaf, _) => {
                    let pred = Pred { children: [NONE, NONE], cost: 0, added: None };
                    out.add(u, vec![], pred, &BigUint::from(1u8), keep_links);
                }
                (_, Evol::Unary(succ)) => {
                    let child = &children[0];
                    for &x in child.linked.of_witness(o.children[0]) {
                        let mut acc = Vec::new();
                        for (s, strict) in child.sources(x, mode) {
                            for &p in &succ[s.0 as usize] {
                                admit(p, strict, &mut acc);
                            }
                        }
                        let xr = child.linked.row(x);
                        let pred = Pred { children: [x.0, NONE], cost: xr.cost + o.delta, added: o.added };
                        out.add(u, acc, pred, &xr.count, keep_links);
                    }
                }
                (Step::Join, Evol::Join(map)) => {
                    let (left, right) = (&children[0], &children[1]);
                    for &x1 in left.linked.of_witness(o.children[0]) {
                        let src1 = left.sources(x1, mode);
                        for &x2 in right.linked.of_witness(o.children[1]) {
                            let src2 = right.sources(x2, mode);
                            let mut acc = Vec::new();
                            for &(s1, strict1) in &src1 {
                                for &(s2, strict2) in &src2 {
                                    if let Some(&p) = map.get(&(s1, s2)) {
                                        admit(p, strict1 || strict2, &mut acc);
                                    }
                                }
                            }
                            let (r1, r2) = (left.linked.row(x1), right.linked.row(x2));
                            let pred = Pred { children: [x1.0, x2.0], cost: r1.cost + r2.cost, added: None };
                            out.add(u, acc, pred, &(&r1.count * &r2.count), keep_links);
                        }
                    }
                }
                _ => return Err(SolveError::ArityMismatch { expected: node.children.len(), got: children.len() }),
            }
        }
    }
    Ok(out)
}
