//! Explicit bag-local programs and reducts. The engines evaluate the same semantics on
//! bitmasks; these set-based forms exist for inspection and cross-checking.

use crate::program::{AtomId, Interpretation, Program, Rule, RuleId, RuleKind};

/// For each bag rule, the rules it contributes to the local program.
/// A rule's local program is satisfied iff every contributed rule is.
pub type LocalProgram = Vec<(RuleId, Vec<Rule>)>;

fn restrict(v: &[AtomId], bag: &[AtomId]) -> Vec<AtomId> {
    v.iter().copied().filter(|a| bag.binary_search(a).is_ok()).collect()
}

/// Local program of `rules` at a bag with atoms `bag` (sorted). Literals over atoms
/// outside the bag are dropped; a choice rule whose head is not entirely in the bag
/// additionally contributes the constraint `:- body` restricted to the bag.
pub fn local_program(p: &Program, bag: &[AtomId], rules: &[RuleId]) -> LocalProgram {
    rules
        .iter()
        .map(|&r| {
            let rule = p.rule(r);
            let (h, pos, neg) = (restrict(rule.head(), bag), restrict(rule.pos(), bag), restrict(rule.neg(), bag));
            let parts = match rule.kind() {
                RuleKind::Optimization => vec![],
                RuleKind::Disjunctive => vec![Rule::disjunctive(h, pos, neg).unwrap()],
                RuleKind::Choice => {
                    let complete = h.len() == rule.head().len();
                    let mut parts = Vec::new();
                    if !h.is_empty() {
                        parts.push(Rule::choice(h, pos.clone(), neg.clone()).unwrap());
                    }
                    if !complete {
                        parts.push(Rule::disjunctive(vec![], pos, neg).unwrap());
                    }
                    parts
                }
            };
            (r, parts)
        })
        .collect()
}

/// Gelfond-Lifschitz reduct of a local program w.r.t. the bag interpretation `m`.
pub fn local_reduct(lp: &LocalProgram, m: &Interpretation) -> LocalProgram {
    lp.iter()
        .map(|(r, parts)| {
            let mut tmp = Program::new(0);
            for part in parts {
                let max = part.max_atom().map_or(0, |a| a as usize + 1);
                while tmp.atom_count() < max {
                    tmp.add_atom(None);
                }
                tmp.add_rule(part.clone()).unwrap();
            }
            (*r, tmp.reduct(m).rules().to_vec())
        })
        .collect()
}

/// Rules of `lp` whose contributed rules are all satisfied by `m`.
pub fn ssr(lp: &LocalProgram, m: &Interpretation) -> Vec<RuleId> {
    lp.iter().filter(|(_, parts)| parts.iter().all(|r| r.satisfied_by(m))).map(|(r, _)| *r).collect()
}
