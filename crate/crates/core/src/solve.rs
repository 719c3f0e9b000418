//! End-to-end pipeline: decomposition selection, nice normalization, then one of the
//! two engines.

use std::ops::ControlFlow;
use std::time::Instant;

use serde::Serialize;

use crate::dp::sinc::{dp_run, SincRun};
use crate::dp::{CostCount, Plan, SolveError};
use crate::graph::build_semi_incidence;
use crate::multipass::{mdp_solve, Multipass};
use crate::program::{Interpretation, Program};
use crate::td::{normalize_nice, select_td, Feature, Heuristic, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Single,
    Multipass,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub engine: Engine,
    /// Number of heuristic candidates; ignored when `td` is set.
    pub tds: usize,
    pub feature: Feature,
    pub heuristic: Heuristic,
    pub seed: u64,
    /// Decomposition of the semi-incidence graph to use instead of a heuristic one.
    pub td: Option<TreeDecomposition>,
    /// Keep tables and links so that answer sets can be extracted.
    pub retain: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            engine: Engine::Multipass,
            tds: 5,
            feature: Feature::Width,
            heuristic: Heuristic::MinFill,
            seed: 0,
            td: None,
            retain: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PassSeconds {
    pub td: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunStats {
    pub width_used: usize,
    pub seed: u64,
    pub engine: Engine,
    pub per_pass_seconds: PassSeconds,
    pub total_seconds: f64,
    pub peak_rows: u64,
    /// Number of optimal answer sets in decimal; absent until computed.
    pub answer_count: Option<String>,
    pub optimal_cost: Option<u64>,
}

pub enum EngineRun {
    Single(SincRun),
    Multipass(Box<Multipass>),
}

pub struct Run {
    pub engine: EngineRun,
    pub td: TreeDecomposition,
    pub stats: RunStats,
}

impl Run {
    pub fn optimum(&self) -> Option<CostCount> {
        match &self.engine {
            EngineRun::Single(r) => r.optimum(),
            EngineRun::Multipass(m) => m.optimum().expect("linking ran"),
        }
    }

    /// Streams the optimal answer sets.
    pub fn enumerate(&self, f: impl FnMut(Interpretation) -> ControlFlow<()>) -> Result<(), SolveError> {
        match &self.engine {
            EngineRun::Single(r) => r.enumerate(f),
            EngineRun::Multipass(m) => m.enumerate(f),
        }
    }

    /// One optimal answer set, if any.
    pub fn first(&self) -> Result<Option<Interpretation>, SolveError> {
        let mut out = None;
        self.enumerate(|m| {
            out = Some(m);
            ControlFlow::Break(())
        })?;
        Ok(out)
    }
}

/// Runs the pipeline on `p`. The optimum is always computed and recorded in the stats.
pub fn run(p: &Program, opts: &SolveOptions) -> Result<Run, SolveError> {
    let start = Instant::now();
    let pg = build_semi_incidence(p);
    let (td, seed) = match &opts.td {
        Some(td) => (td.clone(), opts.seed),
        None => {
            let sel = select_td(&pg, p, opts.tds, opts.feature, opts.heuristic, opts.seed);
            (sel.td, sel.seed)
        }
    };
    let nice = normalize_nice(&td);
    let plan = Plan::new(p, &nice)?;
    let td_seconds = start.elapsed().as_secs_f64();
    let (engine, passes, peak_rows) = match opts.engine {
        Engine::Single => {
            let t = Instant::now();
            let r = dp_run(plan, opts.retain)?;
            let p1 = t.elapsed().as_secs_f64();
            let peak = r.stats.peak_rows;
            (EngineRun::Single(r), [p1, 0.0, 0.0], peak)
        }
        Engine::Multipass => {
            let m = mdp_solve(plan, opts.retain)?;
            let secs = m.stats.pass_time.map(|d| d.as_secs_f64());
            let peak = m.stats.peak_rows;
            (EngineRun::Multipass(Box::new(m)), secs, peak)
        }
    };
    let mut run = Run {
        engine,
        stats: RunStats {
            width_used: td.width(),
            seed,
            engine: opts.engine,
            per_pass_seconds: PassSeconds { td: td_seconds, p1: passes[0], p2: passes[1], p3: passes[2] },
            total_seconds: 0.0,
            peak_rows,
            answer_count: None,
            optimal_cost: None,
        },
        td,
    };
    let best = run.optimum();
    run.stats.answer_count = Some(best.as_ref().map_or("0".into(), |b| b.count.to_string()));
    run.stats.optimal_cost = best.map(|b| b.cost);
    run.stats.total_seconds = start.elapsed().as_secs_f64();
    Ok(run)
}

/// Optimum for each of `opts.tds` heuristic decompositions with consecutive seeds.
pub fn optimum_per_td(p: &Program, opts: &SolveOptions) -> Result<Vec<(u64, Option<CostCount>)>, SolveError> {
    (0..opts.tds.max(1) as u64)
        .map(|i| {
            let o = SolveOptions { tds: 1, seed: opts.seed.wrapping_add(i), td: None, retain: false, ..opts.clone() };
            Ok((o.seed, run(p, &o)?.optimum()))
        })
        .collect()
}
