//! Brute-force reference semantics for small programs.

use thiserror::Error;

use crate::program::{Interpretation, Program, RuleKind};

pub const DEFAULT_ATOM_BUDGET: usize = 20;
const HARD_ATOM_LIMIT: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("program has {atoms} atoms, oracle budget is {budget}")]
pub struct AtomBudgetExceeded {
    pub atoms: usize,
    pub budget: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub atoms: Interpretation,
    pub cost: u64,
}

/// Rule over bit positions; one entry per reduct-relevant piece.
struct MaskRule {
    kind: RuleKind,
    head: u64,
    pos: u64,
    neg: u64,
}

fn mask_of(atoms: &[u32]) -> u64 {
    atoms.iter().fold(0, |m, &a| m | (1u64 << a))
}

/// All answer sets with their costs, ordered by the sorted atom list.
pub fn brute_force_answer_sets(
    p: &Program,
    budget: usize,
) -> Result<Vec<OracleAnswer>, AtomBudgetExceeded> {
    let n = p.atom_count();
    if n > budget || n > HARD_ATOM_LIMIT {
        return Err(AtomBudgetExceeded { atoms: n, budget: budget.min(HARD_ATOM_LIMIT) });
    }
    let rules: Vec<MaskRule> = p
        .rules()
        .iter()
        .map(|r| MaskRule {
            kind: r.kind(),
            head: mask_of(r.head()),
            pos: mask_of(r.pos()),
            neg: mask_of(r.neg()),
        })
        .collect();
    let mut out = Vec::new();
    for m in 0u64..(1u64 << n) {
        let model = rules.iter().all(|r| {
            r.kind != RuleKind::Disjunctive
                || r.head & m != 0
                || r.neg & m != 0
                || r.pos & !m != 0
        });
        if !model || !is_minimal(&rules, m) {
            continue;
        }
        let cost = rules
            .iter()
            .filter(|r| r.kind == RuleKind::Optimization && (r.pos & m != 0 || r.neg & !m != 0))
            .count() as u64;
        let atoms = (0..n as u32).filter(|&a| m >> a & 1 == 1).collect();
        out.push(OracleAnswer { atoms, cost });
    }
    out.sort_by(|a, b| a.atoms.cmp(&b.atoms));
    Ok(out)
}

/// No proper subset of `m` is a model of the reduct w.r.t. `m`.
fn is_minimal(rules: &[MaskRule], m: u64) -> bool {
    // Reduct as (head, pos) pairs.
    let mut reduct: Vec<(u64, u64)> = Vec::new();
    for r in rules {
        if r.neg & m != 0 {
            continue;
        }
        match r.kind {
            RuleKind::Disjunctive => reduct.push((r.head, r.pos)),
            RuleKind::Choice => {
                let mut h = r.head & m;
                while h != 0 {
                    let bit = h & h.wrapping_neg();
                    reduct.push((bit, r.pos));
                    h ^= bit;
                }
            }
            RuleKind::Optimization => {}
        }
    }
    if reduct.iter().all(|&(h, _)| h.count_ones() <= 1) {
        // Horn reduct: m is minimal iff it is the least model of the definite part.
        let mut lm = 0u64;
        loop {
            let mut changed = false;
            for &(h, p) in &reduct {
                if h != 0 && p & !lm == 0 && h & lm == 0 {
                    lm |= h;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        return lm == m;
    }
    let sat = |x: u64| reduct.iter().all(|&(h, p)| h & x != 0 || p & !x != 0);
    let mut sub = m;
    while sub != 0 {
        sub = (sub - 1) & m;
        if sat(sub) {
            return false;
        }
    }
    true
}

pub fn optimal_cost(answers: &[OracleAnswer]) -> Option<u64> {
    answers.iter().map(|a| a.cost).min()
}

/// Optimal answer sets in oracle order.
pub fn optimal_answer_sets(answers: &[OracleAnswer]) -> Vec<Interpretation> {
    match optimal_cost(answers) {
        None => vec![],
        Some(c) => answers.iter().filter(|a| a.cost == c).map(|a| a.atoms.clone()).collect(),
    }
}
