use rayon::prelude::*;

use super::{heuristic_td, score_depgraph, score_joinsize, Heuristic, TreeDecomposition};
use crate::graph::ProgramGraph;
use crate::program::Program;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Feature {
    Width,
    DepGraph,
    JoinSize,
}

#[derive(Clone, Debug)]
pub struct SelectedTd {
    pub td: TreeDecomposition,
    pub width: usize,
    pub score: usize,
    pub seed: u64,
}

/// Builds `candidates` decompositions with seeds `seed, seed + 1, ...` and returns the
/// minimum by (width, feature score, candidate index).
pub fn select_td(
    pg: &ProgramGraph,
    p: &Program,
    candidates: usize,
    feature: Feature,
    heuristic: Heuristic,
    seed: u64,
) -> SelectedTd {
    let candidates = candidates.max(1);
    let all: Vec<SelectedTd> = (0..candidates as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let td = heuristic_td(&pg.graph, heuristic, s);
            let score = match feature {
                Feature::Width => 0,
                Feature::DepGraph => score_depgraph(&td, pg, p),
                Feature::JoinSize => score_joinsize(&td),
            };
            SelectedTd { width: td.width(), td, score, seed: s }
        })
        .collect();
    all.into_iter().enumerate().min_by_key(|(i, c)| (c.width, c.score, *i)).unwrap().1
}
