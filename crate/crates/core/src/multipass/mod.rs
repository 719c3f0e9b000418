//! Multi-pass engine. Models first, then counter-witnesses restricted to surviving
//! models, then a linking pass that attaches to every model row the counter-witness rows
//! reachable from strictly smaller interpretations. Each of the first two passes ends
//! with a top-down purge of rows that do not reach the root.

mod counter;
mod link;
mod witness;

use std::ops::ControlFlow;
use std::time::{Duration, Instant};

pub use counter::{cmod_node, CounterRow, CounterTable, CwId, Evol};
pub use link::{link_node, ChildView, LinkedId, LinkedRow, LinkedTable};
use link::{link_node_with, Sources};
pub use witness::{mod_node, Origin, WitnessRow, WitnessTable};

use crate::dp::{for_each_extension, CostCount, LinkGraph, Plan, Pred, SolveError};
use crate::program::Interpretation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PassState {
    Fresh,
    Witnesses,
    WitnessesPurged,
    Counters,
    CountersPurged,
    Linked,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MultipassStats {
    pub witness_rows_before_purge: u64,
    /// Model rows per node before purging.
    pub witness_rows_per_node: Vec<u64>,
    pub witness_rows: u64,
    pub counter_rows_before_purge: u64,
    pub counter_rows: u64,
    pub linked_rows: u64,
    /// Witness, counter-witness and linked rows kept after purging.
    pub stored_rows: u64,
    /// Largest number of rows held at once.
    pub peak_rows: u64,
    pub pass_time: [Duration; 3],
}

pub struct Multipass {
    pub plan: Plan,
    witnesses: Vec<WitnessTable>,
    counters: Vec<CounterTable>,
    evols: Vec<Evol>,
    linked: Vec<Option<LinkedTable>>,
    state: PassState,
    retained: bool,
    pub stats: MultipassStats,
}

fn total<T>(tables: &[T], size: impl Fn(&T) -> usize) -> u64 {
    tables.iter().map(|t| size(t) as u64).sum()
}

impl Multipass {
    pub fn new(plan: Plan) -> Self {
        let n = plan.nodes.len();
        Multipass {
            plan,
            witnesses: vec![],
            counters: vec![],
            evols: vec![],
            linked: (0..n).map(|_| None).collect(),
            state: PassState::Fresh,
            retained: true,
            stats: MultipassStats::default(),
        }
    }

    pub fn state(&self) -> PassState {
        self.state
    }

    fn require(&self, state: PassState, msg: &'static str) -> Result<(), SolveError> {
        if self.state == state {
            Ok(())
        } else {
            Err(SolveError::PassOrderViolation(msg))
        }
    }

    /// Computes the model tables bottom-up.
    pub fn compute_witnesses(&mut self) -> Result<(), SolveError> {
        self.require(PassState::Fresh, "model tables already computed")?;
        let start = Instant::now();
        let mut tables: Vec<WitnessTable> = Vec::with_capacity(self.plan.nodes.len());
        for node in &self.plan.nodes {
            let kids: Vec<&WitnessTable> = node.children.iter().map(|&c| &tables[c]).collect();
            let t = mod_node(node, &kids)?;
            tables.push(t);
        }
        self.witnesses = tables;
        self.stats.witness_rows_per_node = self.witnesses.iter().map(|t| t.rows.len() as u64).collect();
        self.stats.witness_rows_before_purge = self.stats.witness_rows_per_node.iter().sum();
        self.stats.pass_time[0] += start.elapsed();
        self.state = PassState::Witnesses;
        Ok(())
    }

    pub fn purge_witnesses(&mut self) -> Result<(), SolveError> {
        if !matches!(self.state, PassState::Witnesses | PassState::WitnessesPurged) {
            return Err(SolveError::PassOrderViolation("model tables not available for purging"));
        }
        let start = Instant::now();
        witness::purge_witnesses(&self.plan, &mut self.witnesses);
        self.stats.witness_rows = total(&self.witnesses, |t| t.rows.len());
        self.stats.pass_time[0] += start.elapsed();
        self.state = PassState::WitnessesPurged;
        Ok(())
    }

    /// Computes the counter-witness tables. Requires purged model tables.
    pub fn compute_counters(&mut self) -> Result<(), SolveError> {
        self.require(PassState::WitnessesPurged, "counter-witness pass needs purged model tables")?;
        let start = Instant::now();
        let mut tables: Vec<CounterTable> = Vec::with_capacity(self.plan.nodes.len());
        for (t, node) in self.plan.nodes.iter().enumerate() {
            let kids: Vec<&CounterTable> = node.children.iter().map(|&c| &tables[c]).collect();
            let table = cmod_node(node, &kids, &self.witnesses[t])?;
            tables.push(table);
        }
        self.counters = tables;
        self.stats.counter_rows_before_purge = total(&self.counters, |t| t.rows.len());
        self.stats.peak_rows = self.stats.witness_rows + self.stats.counter_rows_before_purge;
        self.stats.peak_rows = self.stats.peak_rows.max(self.stats.witness_rows_before_purge);
        self.stats.pass_time[1] += start.elapsed();
        self.state = PassState::Counters;
        Ok(())
    }

    pub fn purge_counters(&mut self) -> Result<(), SolveError> {
        if !matches!(self.state, PassState::Counters | PassState::CountersPurged) {
            return Err(SolveError::PassOrderViolation("counter-witness tables not available for purging"));
        }
        let start = Instant::now();
        counter::purge_counters(&self.plan, &mut self.counters);
        self.evols = self
            .plan
            .nodes
            .iter()
            .enumerate()
            .map(|(t, node)| {
                let sizes: Vec<usize> = node.children.iter().map(|&c| self.counters[c].rows.len()).collect();
                Evol::build(&self.counters[t], &sizes)
            })
            .collect();
        self.stats.counter_rows = total(&self.counters, |t| t.rows.len());
        self.stats.pass_time[1] += start.elapsed();
        self.state = PassState::CountersPurged;
        Ok(())
    }

    /// Links models with counter-witnesses. With `retain` unset, linked tables of
    /// children are dropped once their parent is linked, which rules out enumeration.
    pub fn link(&mut self, retain: bool) -> Result<(), SolveError> {
        self.link_with(retain, Sources::Both)
    }

    fn link_with(&mut self, retain: bool, mode: Sources) -> Result<(), SolveError> {
        self.require(PassState::CountersPurged, "linking needs purged counter-witness tables")?;
        let start = Instant::now();
        let base = self.stats.witness_rows + self.stats.counter_rows;
        let mut live = 0u64;
        for t in 0..self.plan.nodes.len() {
            let node = &self.plan.nodes[t];
            let views: Vec<ChildView<'_>> = node
                .children
                .iter()
                .map(|&c| ChildView {
                    witnesses: &self.witnesses[c],
                    counters: &self.counters[c],
                    linked: self.linked[c].as_ref().expect("children are linked first"),
                })
                .collect();
            let table =
                link_node_with(node, &self.witnesses[t], &self.counters[t], &self.evols[t], &views, retain, mode)?;
            let rows = table.rows.len() as u64;
            self.stats.linked_rows += rows;
            live += rows;
            self.stats.peak_rows = self.stats.peak_rows.max(base + live);
            if !retain {
                for &c in &node.children.clone() {
                    live -= self.linked[c].take().map_or(0, |l| l.rows.len() as u64);
                }
            }
            self.linked[t] = Some(table);
        }
        self.retained = retain;
        self.stats.stored_rows = self.stats.witness_rows + self.stats.counter_rows + self.stats.linked_rows;
        self.stats.pass_time[2] += start.elapsed();
        self.state = PassState::Linked;
        Ok(())
    }

    pub fn root(&self) -> usize {
        self.plan.root()
    }

    pub fn witness_table(&self, t: usize) -> &WitnessTable {
        &self.witnesses[t]
    }

    pub fn counter_table(&self, t: usize) -> &CounterTable {
        &self.counters[t]
    }

    pub fn linked_table(&self, t: usize) -> Option<&LinkedTable> {
        self.linked.get(t).and_then(|l| l.as_ref())
    }

    /// Origins of model row `row` at node `t`.
    pub fn orig(&self, t: usize, row: u32) -> &[Origin] {
        &self.witnesses[t].rows[row as usize].origins
    }

    /// Rows at node `t` evolving from the child rows `rows`: one row per child, or one
    /// pair at a join.
    pub fn evol(&self, t: usize, rows: &[CwId]) -> Vec<CwId> {
        match (&self.evols[t], rows) {
            (Evol::Unary(succ), &[s]) => succ[s.0 as usize].clone(),
            (Evol::Join(map), &[a, b]) => map.get(&(a, b)).copied().into_iter().collect(),
            _ => vec![],
        }
    }

    /// Combinations of child model rows at node `t`: the empty combination at a leaf,
    /// one row per child otherwise. Entries for absent children are `u32::MAX`.
    pub fn ccr(&self, t: usize) -> Vec<[u32; 2]> {
        let kids = &self.plan.nodes[t].children;
        let size = |k: usize| self.witnesses[kids[k]].rows.len() as u32;
        match kids.len() {
            0 => vec![[witness::NONE; 2]],
            1 => (0..size(0)).map(|i| [i, witness::NONE]).collect(),
            _ => (0..size(0)).flat_map(|i| (0..size(1)).map(move |j| [i, j])).collect(),
        }
    }

    /// Counter-witness rows at node `t` that may belong to model row `row`.
    pub fn counters_of(&self, t: usize, row: u32) -> Vec<CwId> {
        let w = &self.witnesses[t].rows[row as usize];
        let rel = self.plan.nodes[t].relevant;
        (0..self.counters[t].rows.len() as u32)
            .map(CwId)
            .filter(|&s| {
                let r = self.counters[t].row(s);
                counter::compatible(r.c, r.tw, w.m, rel)
            })
            .collect()
    }

    fn answer_rows(&self) -> Result<Vec<u32>, SolveError> {
        self.require(PassState::Linked, "answers need the linking pass")?;
        let root = self.linked[self.root()].as_ref().unwrap();
        Ok((0..root.rows.len() as u32).filter(|&i| root.counter_witnesses(LinkedId(i)).is_empty()).collect())
    }

    /// Least cost over answer sets and the number of answer sets attaining it.
    pub fn optimum(&self) -> Result<Option<CostCount>, SolveError> {
        let rows = self.answer_rows()?;
        let root = self.linked[self.root()].as_ref().unwrap();
        let mut best: Option<CostCount> = None;
        for i in rows {
            let r = &root.rows[i as usize];
            match &mut best {
                None => best = Some(CostCount { cost: r.cost, count: r.count.clone() }),
                Some(b) => b.merge(r.cost, &r.count),
            }
        }
        Ok(best)
    }

    /// Streams the optimal answer sets.
    pub fn enumerate(&self, f: impl FnMut(Interpretation) -> ControlFlow<()>) -> Result<(), SolveError> {
        self.require(PassState::Linked, "answers need the linking pass")?;
        if !self.retained {
            return Err(SolveError::TablesReleased);
        }
        let Some(best) = self.optimum()? else { return Ok(()) };
        let root = self.linked[self.root()].as_ref().unwrap();
        let rows: Vec<u32> =
            self.answer_rows()?.into_iter().filter(|&i| root.rows[i as usize].cost == best.cost).collect();
        let _ = for_each_extension(self, self.root(), &rows, f);
        Ok(())
    }
}

impl LinkGraph for Multipass {
    fn children(&self, node: usize) -> &[usize] {
        &self.plan.nodes[node].children
    }

    fn preds(&self, node: usize, row: u32) -> &[Pred] {
        &self.linked[node].as_ref().unwrap().rows[row as usize].preds
    }

    fn cost(&self, node: usize, row: u32) -> u64 {
        self.linked[node].as_ref().unwrap().rows[row as usize].cost
    }
}

/// Runs all passes in order.
pub fn mdp_solve(plan: Plan, retain: bool) -> Result<Multipass, SolveError> {
    let mut mp = Multipass::new(plan);
    mp.compute_witnesses()?;
    mp.purge_witnesses()?;
    mp.compute_counters()?;
    mp.purge_counters()?;
    mp.link(retain)?;
    Ok(mp)
}
