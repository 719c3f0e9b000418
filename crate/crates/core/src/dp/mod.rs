//! Shared machinery for the dynamic programming engines: per-node plans over a nice
//! decomposition of the semi-incidence graph, bag-relative bitmasks, cost/count
//! bookkeeping and solution extraction.

mod extract;
pub mod local;
pub mod sinc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::{build_semi_incidence, Vertex};
use crate::program::{AtomId, Program, RuleId, RuleKind};
use crate::td::{NiceKind, NiceTd, TdError};

pub(crate) use extract::{for_each_extension, LinkGraph};

/// Largest bag (atoms plus rules) the engines accept.
pub const BAG_CAP: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("decomposition has a bag of {size} vertices, cap is {cap}")]
    WidthExceeded { size: usize, cap: usize },
    #[error("invalid decomposition: {0}")]
    InvalidTd(#[from] TdError),
    #[error("decomposition is not nice")]
    NotNice,
    #[error("node expects {expected} child table(s), got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("tables were released; rerun with enumeration enabled")]
    TablesReleased,
    #[error("pass order violated: {0}")]
    PassOrderViolation(&'static str),
}

/// Inserts a zero bit at `pos`, shifting higher bits up.
#[inline]
pub(crate) fn insert_bit(mask: u32, pos: usize) -> u32 {
    let low = mask & ((1u32 << pos) - 1);
    let high = (((mask >> pos) as u64) << (pos + 1)) as u32;
    low | high
}

/// Removes the bit at `pos`, shifting higher bits down.
#[inline]
pub(crate) fn remove_bit(mask: u32, pos: usize) -> u32 {
    let low = mask & ((1u32 << pos) - 1);
    let high = if pos + 1 >= 32 { 0 } else { (mask >> (pos + 1)) << pos };
    low | high
}

/// A bag rule restricted to bag atoms, as bag-relative masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaskRule {
    pub kind: RuleKind,
    pub head: u32,
    pub pos: u32,
    pub neg: u32,
    /// Every head atom is in the bag. Only meaningful for choice rules.
    pub head_complete: bool,
}

impl MaskRule {
    /// Local satisfaction by a witness `m`.
    #[inline]
    pub fn sat_witness(&self, m: u32) -> bool {
        match self.kind {
            RuleKind::Optimization => true,
            RuleKind::Disjunctive => self.head & m != 0 || self.pos & !m != 0 || self.neg & m != 0,
            RuleKind::Choice => self.head_complete || self.pos & !m != 0 || self.neg & m != 0,
        }
    }

    /// Local satisfaction of the reduct w.r.t. `m` by a counter-witness `c`.
    #[inline]
    pub fn sat_counter(&self, m: u32, c: u32) -> bool {
        match self.kind {
            RuleKind::Optimization => true,
            RuleKind::Disjunctive => self.neg & m != 0 || self.head & c != 0 || self.pos & !c != 0,
            RuleKind::Choice => {
                self.neg & m != 0
                    || self.pos & !c != 0
                    || (self.head_complete && self.head & m & !c == 0)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Leaf,
    IntroAtom { pos: usize },
    IntroRule { pos: usize },
    /// Forgetting decides the atom; its optimization rules are charged here.
    ForgetAtom { pos: usize, atom: AtomId, cost_true: u64, cost_false: u64 },
    ForgetRule { pos: usize, rule: RuleId },
    Join,
}

#[derive(Clone, Debug)]
pub struct NodePlan {
    pub step: Step,
    pub children: Vec<usize>,
    pub atoms: Vec<AtomId>,
    pub rules: Vec<RuleId>,
    pub local: Vec<MaskRule>,
    /// Rule positions whose local rule mentions the introduced atom.
    pub touching: u32,
    /// Atom positions whose witness value affects the reduct.
    pub relevant: u32,
}

impl NodePlan {
    pub fn atom_pos(&self, a: AtomId) -> Option<usize> {
        self.atoms.binary_search(&a).ok()
    }

    pub fn rule_pos(&self, r: RuleId) -> Option<usize> {
        self.rules.binary_search(&r).ok()
    }

    /// Witness sat-state contribution of the rules in `which`.
    #[inline]
    pub fn ssr_witness(&self, which: u32, m: u32) -> u32 {
        let mut out = 0;
        let mut w = which;
        while w != 0 {
            let i = w.trailing_zeros() as usize;
            w &= w - 1;
            if self.local[i].sat_witness(m) {
                out |= 1 << i;
            }
        }
        out
    }

    #[inline]
    pub fn ssr_counter(&self, which: u32, m: u32, c: u32) -> u32 {
        let mut out = 0;
        let mut w = which;
        while w != 0 {
            let i = w.trailing_zeros() as usize;
            w &= w - 1;
            if self.local[i].sat_counter(m, c) {
                out |= 1 << i;
            }
        }
        out
    }
}

/// Per-node evaluation data for a nice decomposition of the semi-incidence graph.
#[derive(Clone, Debug)]
pub struct Plan {
    pub nodes: Vec<NodePlan>,
}

impl Plan {
    /// Validates `nice` against the semi-incidence graph of `p` and precomputes masks.
    pub fn new(p: &Program, nice: &NiceTd) -> Result<Plan, SolveError> {
        if !nice.is_well_formed() {
            return Err(SolveError::NotNice);
        }
        let pg = build_semi_incidence(p);
        nice.to_td().validate(&pg.graph)?;
        let relevant = p.reduct_relevant();
        let mut opt_true = vec![0u64; p.atom_count()];
        let mut opt_false = vec![0u64; p.atom_count()];
        for r in p.rules().iter().filter(|r| r.kind() == RuleKind::Optimization) {
            match (r.pos().first(), r.neg().first()) {
                (Some(&a), _) => opt_true[a as usize] += 1,
                (_, Some(&a)) => opt_false[a as usize] += 1,
                _ => unreachable!("optimization rules have one literal"),
            }
        }
        let mut nodes = Vec::with_capacity(nice.len());
        for node in nice.nodes() {
            if node.bag.len() > BAG_CAP {
                return Err(SolveError::WidthExceeded { size: node.bag.len(), cap: BAG_CAP });
            }
            let mut atoms = Vec::new();
            let mut rules = Vec::new();
            for &v in &node.bag {
                match pg.vertex(v) {
                    Vertex::Atom(a) => atoms.push(a),
                    Vertex::Rule(r) => rules.push(r),
                }
            }
            let apos = |a: AtomId| atoms.binary_search(&a).ok();
            let mask = |v: &[AtomId]| v.iter().filter_map(|&a| apos(a)).fold(0u32, |m, i| m | 1 << i);
            let local: Vec<MaskRule> = rules
                .iter()
                .map(|&r| {
                    let rule = p.rule(r);
                    MaskRule {
                        kind: rule.kind(),
                        head: mask(rule.head()),
                        pos: mask(rule.pos()),
                        neg: mask(rule.neg()),
                        head_complete: rule.head().iter().all(|&a| apos(a).is_some()),
                    }
                })
                .collect();
            let rel = atoms
                .iter()
                .enumerate()
                .filter(|(_, &a)| relevant[a as usize])
                .fold(0u32, |m, (i, _)| m | 1 << i);
            let mut touching = 0u32;
            let step = match node.kind {
                NiceKind::Leaf => Step::Leaf,
                NiceKind::Join => Step::Join,
                NiceKind::Introduce(v) => match pg.vertex(v) {
                    Vertex::Atom(a) => {
                        let pos = apos(a).unwrap();
                        for (i, &r) in rules.iter().enumerate() {
                            if p.rule(r).atoms().binary_search(&a).is_ok() {
                                touching |= 1 << i;
                            }
                        }
                        Step::IntroAtom { pos }
                    }
                    Vertex::Rule(r) => Step::IntroRule { pos: rules.binary_search(&r).unwrap() },
                },
                NiceKind::Forget(v) => {
                    let child = &nice.node(node.children[0]).bag;
                    let pos_in_child = |x: usize| child.iter().filter(|&&y| y < x).count();
                    match pg.vertex(v) {
                        Vertex::Atom(a) => Step::ForgetAtom {
                            pos: pos_in_child(v),
                            atom: a,
                            cost_true: opt_true[a as usize],
                            cost_false: opt_false[a as usize],
                        },
                        Vertex::Rule(r) => Step::ForgetRule {
                            pos: pos_in_child(v) - child.iter().filter(|&&y| y < pg.atom_count).count(),
                            rule: r,
                        },
                    }
                }
            };
            nodes.push(NodePlan { step, children: node.children.clone(), atoms, rules, local, touching, relevant: rel });
        }
        Ok(Plan { nodes })
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// Minimum cost over a set of extensions and the number of extensions attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostCount {
    pub cost: u64,
    pub count: BigUint,
}

impl CostCount {
    pub fn one() -> Self {
        CostCount { cost: 0, count: BigUint::from(1u8) }
    }

    /// Folds in another alternative.
    pub fn merge(&mut self, cost: u64, count: &BigUint) {
        if cost < self.cost {
            self.cost = cost;
            self.count = count.clone();
        } else if cost == self.cost {
            self.count += count;
        }
    }
}

/// A link from a row to the child rows it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pred {
    /// Row indices in the child tables, in child order.
    pub children: [u32; 2],
    /// Least cost of extensions through this link.
    pub cost: u64,
    /// Atom decided true by this step, if any.
    pub added: Option<AtomId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_shuffles() {
        assert_eq!(insert_bit(0b1011, 2), 0b10011);
        assert_eq!(remove_bit(0b10011, 2), 0b1011);
        assert_eq!(remove_bit(0b1, 0), 0);
        assert_eq!(remove_bit(u32::MAX, 31), u32::MAX >> 1);
        for m in 0..64u32 {
            for p in 0..6 {
                assert_eq!(remove_bit(insert_bit(m, p), p), m);
            }
        }
    }
}
