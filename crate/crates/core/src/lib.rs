//! Exact answer-set solving for ground disjunctive, choice and optimization rules by
//! dynamic programming on tree decompositions of the semi-incidence graph.

pub mod dp;
pub mod families;
pub mod graph;
pub mod minsat;
pub mod multipass;
pub mod oracle;
pub mod parser;
pub mod program;
pub mod random;
pub mod solve;
pub mod steiner;
pub mod td;
