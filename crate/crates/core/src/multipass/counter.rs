use std::collections::HashMap;

use super::witness::{purge, WitnessTable, NONE};
use crate::dp::{insert_bit, remove_bit, NodePlan, Plan, SolveError, Step};

/// Index of a row in a counter-witness table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CwId(pub u32);

/// A three-valued counter-witness row. Atoms in `c` are true, atoms in `tw` are false in
/// the counter-witness but true in the witness, all other atoms are false in both or
/// unconstrained by the reduct. `tw` only holds reduct-relevant atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterRow {
    pub c: u32,
    pub tw: u32,
    pub rho: u32,
    pub origins: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, Default)]
pub struct CounterTable {
    pub rows: Vec<CounterRow>,
    index: HashMap<(u32, u32, u32), u32>,
}

impl CounterTable {
    fn reindex(&mut self) {
        self.index = self.rows.iter().enumerate().map(|(i, r)| ((r.c, r.tw, r.rho), i as u32)).collect();
    }

    pub fn get(&self, c: u32, tw: u32, rho: u32) -> Option<CwId> {
        self.index.get(&(c, tw, rho)).map(|&i| CwId(i))
    }

    pub fn row(&self, id: CwId) -> &CounterRow {
        &self.rows[id.0 as usize]
    }

    /// The row standing for the witness itself.
    pub fn self_row(&self, m: u32, sigma: u32) -> Option<CwId> {
        self.get(m, 0, sigma)
    }
}

/// The counter-witness `(c, tw)` may belong to the witness `m`.
#[inline]
pub(crate) fn compatible(c: u32, tw: u32, m: u32, rel: u32) -> bool {
    c & !m == 0 && (c | tw) & rel == m & rel
}

struct Compat {
    by_rel: HashMap<u32, Vec<u32>>,
    rel: u32,
}

impl Compat {
    fn new(node: &NodePlan, witnesses: &WitnessTable) -> Self {
        let mut by_rel: HashMap<u32, Vec<u32>> = HashMap::new();
        for r in &witnesses.rows {
            by_rel.entry(r.m & node.relevant).or_default().push(r.m);
        }
        for v in by_rel.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        Compat { by_rel, rel: node.relevant }
    }

    fn any(&self, c: u32, tw: u32) -> bool {
        self.by_rel.get(&((c | tw) & self.rel)).is_some_and(|ms| ms.iter().any(|&m| c & !m == 0))
    }
}

struct Builder {
    table: CounterTable,
    compat: Compat,
}

impl Builder {
    fn add(&mut self, c: u32, tw: u32, rho: u32, origin: [u32; 2]) {
        if !self.compat.any(c, tw) {
            return;
        }
        let rows = &mut self.table.rows;
        let i = *self.table.index.entry((c, tw, rho)).or_insert_with(|| {
            rows.push(CounterRow { c, tw, rho, origins: vec![] });
            (rows.len() - 1) as u32
        });
        self.table.rows[i as usize].origins.push(origin);
    }
}

/// Counter-witness table of one node, restricted to rows compatible with a row of the
/// purged witness table `witnesses` of the same node.
pub fn cmod_node(
    node: &NodePlan,
    children: &[&CounterTable],
    witnesses: &WitnessTable,
) -> Result<CounterTable, SolveError> {
    if children.len() != node.children.len() {
        return Err(SolveError::ArityMismatch { expected: node.children.len(), got: children.len() });
    }
    let mut b = Builder { table: CounterTable::default(), compat: Compat::new(node, witnesses) };
    match node.step {
        Step::Leaf => b.add(0, 0, 0, [NONE, NONE]),
        Step::IntroAtom { pos } => {
            let bit = 1u32 << pos;
            let can_tw = node.relevant & bit != 0;
            for (i, r) in children[0].rows.iter().enumerate() {
                let (c0, tw0) = (insert_bit(r.c, pos), insert_bit(r.tw, pos));
                let o = [i as u32, NONE];
                let m = c0 | tw0;
                b.add(c0, tw0, r.rho | node.ssr_counter(node.touching, m, c0), o);
                let (c1, m1) = (c0 | bit, m | bit);
                b.add(c1, tw0, r.rho | node.ssr_counter(node.touching, m1, c1), o);
                if can_tw {
                    b.add(c0, tw0 | bit, r.rho | node.ssr_counter(node.touching, m1, c0), o);
                }
            }
        }
        Step::IntroRule { pos } => {
            let rule = node.local[pos];
            for (i, r) in children[0].rows.iter().enumerate() {
                let rho = insert_bit(r.rho, pos) | (rule.sat_counter(r.c | r.tw, r.c) as u32) << pos;
                b.add(r.c, r.tw, rho, [i as u32, NONE]);
            }
        }
        Step::ForgetAtom { pos, .. } => {
            for (i, r) in children[0].rows.iter().enumerate() {
                b.add(remove_bit(r.c, pos), remove_bit(r.tw, pos), r.rho, [i as u32, NONE]);
            }
        }
        Step::ForgetRule { pos, .. } => {
            for (i, r) in children[0].rows.iter().enumerate() {
                if r.rho >> pos & 1 == 1 {
                    b.add(r.c, r.tw, remove_bit(r.rho, pos), [i as u32, NONE]);
                }
            }
        }
        Step::Join => {
            let mut by_key: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
            for (j, r) in children[1].rows.iter().enumerate() {
                by_key.entry((r.c, r.tw)).or_default().push(j as u32);
            }
            for (i, r1) in children[0].rows.iter().enumerate() {
                for &j in by_key.get(&(r1.c, r1.tw)).into_iter().flatten() {
                    let r2 = &children[1].rows[j as usize];
                    b.add(r1.c, r1.tw, r1.rho | r2.rho, [i as u32, j]);
                }
            }
        }
    }
    Ok(b.table)
}

pub(crate) fn purge_counters(plan: &Plan, tables: &mut [CounterTable]) {
    let mut rows: Vec<Vec<CounterRow>> = tables.iter_mut().map(|t| std::mem::take(&mut t.rows)).collect();
    purge(
        plan,
        &mut rows,
        |r: &CounterRow| r.origins.clone(),
        |r: &mut CounterRow, f| {
            for o in &mut r.origins {
                for k in 0..2 {
                    if o[k] != NONE {
                        o[k] = f(k, o[k]);
                    }
                }
            }
        },
    );
    for (t, r) in tables.iter_mut().zip(rows) {
        t.rows = r;
        t.reindex();
    }
}

/// Successor maps from child counter-witness rows to rows of the parent table.
#[derive(Clone, Debug)]
pub enum Evol {
    Leaf,
    Unary(Vec<Vec<CwId>>),
    Join(HashMap<(CwId, CwId), CwId>),
}

impl Evol {
    pub fn build(parent: &CounterTable, child_sizes: &[usize]) -> Evol {
        match child_sizes.len() {
            0 => Evol::Leaf,
            1 => {
                let mut succ = vec![Vec::new(); child_sizes[0]];
                for (i, r) in parent.rows.iter().enumerate() {
                    for o in &r.origins {
                        succ[o[0] as usize].push(CwId(i as u32));
                    }
                }
                Evol::Unary(succ)
            }
            _ => {
                let mut map = HashMap::new();
                for (i, r) in parent.rows.iter().enumerate() {
                    for o in &r.origins {
                        map.insert((CwId(o[0]), CwId(o[1])), CwId(i as u32));
                    }
                }
                Evol::Join(map)
            }
        }
    }
}
