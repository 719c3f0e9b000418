//! Ground programs: atoms, rules and their classical and reduct semantics.
//!
//! Atoms are dense `u32` ids in `0..atom_count`. Names live in a side table and
//! are only used for input and output.

use std::fmt;

use thiserror::Error;

pub type AtomId = u32;
pub type RuleId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgramError {
    #[error("choice rule with empty head")]
    EmptyChoiceHead,
    #[error("atom {0} out of range")]
    AtomOutOfRange(AtomId),
    #[error("atom {0} occurs in more than one of head, positive body, negative body")]
    OverlappingLiterals(AtomId),
    #[error("optimization rule must have exactly one body literal")]
    MalformedOptimization,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    /// `h1 | ... | hk :- body.`; an empty head is a constraint.
    Disjunctive,
    /// `{h1; ...; hk} :- body.`
    Choice,
    /// `:~ lit.` with unit weight; the literal is stored as the body.
    Optimization,
}

/// A ground rule. `head`, `pos` and `neg` are sorted, deduplicated and pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    kind: RuleKind,
    head: Vec<AtomId>,
    pos: Vec<AtomId>,
    neg: Vec<AtomId>,
}

fn normalized(mut v: Vec<AtomId>) -> Vec<AtomId> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Rule {
    pub fn new(
        kind: RuleKind,
        head: Vec<AtomId>,
        pos: Vec<AtomId>,
        neg: Vec<AtomId>,
    ) -> Result<Self, ProgramError> {
        let head = normalized(head);
        let pos = normalized(pos);
        let neg = normalized(neg);
        match kind {
            RuleKind::Choice if head.is_empty() => return Err(ProgramError::EmptyChoiceHead),
            RuleKind::Optimization if !head.is_empty() || pos.len() + neg.len() != 1 => {
                return Err(ProgramError::MalformedOptimization)
            }
            _ => {}
        }
        for a in &head {
            if pos.binary_search(a).is_ok() || neg.binary_search(a).is_ok() {
                return Err(ProgramError::OverlappingLiterals(*a));
            }
        }
        for a in &pos {
            if neg.binary_search(a).is_ok() {
                return Err(ProgramError::OverlappingLiterals(*a));
            }
        }
        Ok(Rule { kind, head, pos, neg })
    }

    pub fn disjunctive(
        head: Vec<AtomId>,
        pos: Vec<AtomId>,
        neg: Vec<AtomId>,
    ) -> Result<Self, ProgramError> {
        Self::new(RuleKind::Disjunctive, head, pos, neg)
    }

    pub fn choice(
        head: Vec<AtomId>,
        pos: Vec<AtomId>,
        neg: Vec<AtomId>,
    ) -> Result<Self, ProgramError> {
        Self::new(RuleKind::Choice, head, pos, neg)
    }

    /// `:~ a` when `positive`, `:~ not a` otherwise.
    pub fn minimize(atom: AtomId, positive: bool) -> Self {
        let (pos, neg) = if positive { (vec![atom], vec![]) } else { (vec![], vec![atom]) };
        Rule { kind: RuleKind::Optimization, head: vec![], pos, neg }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn head(&self) -> &[AtomId] {
        &self.head
    }

    pub fn pos(&self) -> &[AtomId] {
        &self.pos
    }

    pub fn neg(&self) -> &[AtomId] {
        &self.neg
    }

    pub fn is_constraint(&self) -> bool {
        self.kind == RuleKind::Disjunctive && self.head.is_empty()
    }

    /// All atoms of the rule in ascending order.
    pub fn atoms(&self) -> Vec<AtomId> {
        let mut v: Vec<AtomId> =
            self.head.iter().chain(&self.pos).chain(&self.neg).copied().collect();
        v.sort_unstable();
        v
    }

    pub fn max_atom(&self) -> Option<AtomId> {
        self.head.iter().chain(&self.pos).chain(&self.neg).copied().max()
    }

    /// Classical satisfaction. Choice and optimization rules are always satisfied.
    pub fn satisfied_by(&self, m: &Interpretation) -> bool {
        match self.kind {
            RuleKind::Disjunctive => {
                self.head.iter().any(|&a| m.contains(a))
                    || self.neg.iter().any(|&a| m.contains(a))
                    || self.pos.iter().any(|&a| !m.contains(a))
            }
            RuleKind::Choice | RuleKind::Optimization => true,
        }
    }

    /// Whether the optimization rule's literal holds in `m`. False for other kinds.
    pub fn triggered_by(&self, m: &Interpretation) -> bool {
        self.kind == RuleKind::Optimization
            && (self.pos.iter().any(|&a| m.contains(a)) || self.neg.iter().any(|&a| !m.contains(a)))
    }
}

/// A set of atoms, kept as a sorted vector. Ordering is lexicographic on that vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation(Vec<AtomId>);

impl Interpretation {
    pub fn new(atoms: impl IntoIterator<Item = AtomId>) -> Self {
        Interpretation(normalized(atoms.into_iter().collect()))
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn atoms(&self) -> &[AtomId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.iter().all(|&a| other.contains(a))
    }
}

impl FromIterator<AtomId> for Interpretation {
    fn from_iter<I: IntoIterator<Item = AtomId>>(iter: I) -> Self {
        Interpretation::new(iter)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    names: Vec<Option<String>>,
    rules: Vec<Rule>,
}

impl Program {
    pub fn new(atom_count: usize) -> Self {
        Program { names: vec![None; atom_count], rules: Vec::new() }
    }

    pub fn add_atom(&mut self, name: Option<String>) -> AtomId {
        self.names.push(name);
        (self.names.len() - 1) as AtomId
    }

    pub fn set_name(&mut self, atom: AtomId, name: impl Into<String>) {
        self.names[atom as usize] = Some(name.into());
    }

    pub fn add_rule(&mut self, rule: Rule) -> Result<RuleId, ProgramError> {
        if let Some(a) = rule.max_atom() {
            if a as usize >= self.names.len() {
                return Err(ProgramError::AtomOutOfRange(a));
            }
        }
        self.rules.push(rule);
        Ok((self.rules.len() - 1) as RuleId)
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, r: RuleId) -> &Rule {
        &self.rules[r as usize]
    }

    pub fn name(&self, a: AtomId) -> Option<&str> {
        self.names[a as usize].as_deref()
    }

    /// The atom's name, or `_x<id>` for unnamed atoms.
    pub fn display_name(&self, a: AtomId) -> String {
        match self.name(a) {
            Some(n) => n.to_string(),
            None => format!("_x{a}"),
        }
    }

    pub fn atom_by_name(&self, name: &str) -> Option<AtomId> {
        self.names.iter().position(|n| n.as_deref() == Some(name)).map(|i| i as AtomId)
    }

    /// Atoms occurring in a negative body of a non-optimization rule.
    pub fn negative_atoms(&self) -> Vec<AtomId> {
        let mut v: Vec<AtomId> = self
            .rules
            .iter()
            .filter(|r| r.kind != RuleKind::Optimization)
            .flat_map(|r| r.neg.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Atoms whose truth value in the witness changes the reduct: negative body
    /// atoms and choice heads.
    pub fn reduct_relevant(&self) -> Vec<bool> {
        let mut rel = vec![false; self.atom_count()];
        for r in &self.rules {
            match r.kind {
                RuleKind::Optimization => {}
                RuleKind::Choice => {
                    for &a in r.head.iter().chain(&r.neg) {
                        rel[a as usize] = true;
                    }
                }
                RuleKind::Disjunctive => {
                    for &a in &r.neg {
                        rel[a as usize] = true;
                    }
                }
            }
        }
        rel
    }

    pub fn has_choice_rules(&self) -> bool {
        self.rules.iter().any(|r| r.kind == RuleKind::Choice)
    }

    pub fn has_optimization(&self) -> bool {
        self.rules.iter().any(|r| r.kind == RuleKind::Optimization)
    }

    pub fn is_model(&self, m: &Interpretation) -> bool {
        self.rules.iter().all(|r| r.satisfied_by(m))
    }

    /// Gelfond-Lifschitz reduct. The result only contains positive disjunctive rules.
    pub fn reduct(&self, m: &Interpretation) -> Program {
        let mut out = Program { names: self.names.clone(), rules: Vec::new() };
        for r in &self.rules {
            if r.neg.iter().any(|&a| m.contains(a)) {
                continue;
            }
            match r.kind {
                RuleKind::Disjunctive => out.rules.push(Rule {
                    kind: RuleKind::Disjunctive,
                    head: r.head.clone(),
                    pos: r.pos.clone(),
                    neg: vec![],
                }),
                RuleKind::Choice => {
                    for &h in r.head.iter().filter(|&&h| m.contains(h)) {
                        out.rules.push(Rule {
                            kind: RuleKind::Disjunctive,
                            head: vec![h],
                            pos: r.pos.clone(),
                            neg: vec![],
                        });
                    }
                }
                RuleKind::Optimization => {}
            }
        }
        out
    }

    /// Number of optimization rules whose literal holds in `m`.
    pub fn cost(&self, m: &Interpretation) -> u64 {
        self.rules.iter().filter(|r| r.triggered_by(m)).count() as u64
    }

    /// `m` is a model of the program and no proper subset is a model of the reduct.
    pub fn is_answer_set(&self, m: &Interpretation) -> bool {
        if m.atoms().iter().any(|&a| a as usize >= self.atom_count()) || !self.is_model(m) {
            return false;
        }
        !has_smaller_model(&self.reduct(m), m)
    }

    /// Total size: rules plus atom occurrences.
    pub fn size(&self) -> usize {
        self.rules.len() + self.rules.iter().map(|r| r.head.len() + r.pos.len() + r.neg.len()).sum::<usize>()
    }
}

/// Backtracking search for `X ⊊ m` satisfying the positive program `q`.
fn has_smaller_model(q: &Program, m: &Interpretation) -> bool {
    let idx = |a: AtomId| m.atoms().binary_search(&a).ok();
    // Rules with a body atom outside m hold for every X ⊆ m; head atoms outside m are false.
    let rules: Vec<(Vec<usize>, Vec<usize>)> = q
        .rules
        .iter()
        .filter_map(|r| {
            let pos: Option<Vec<usize>> = r.pos.iter().map(|&a| idx(a)).collect();
            Some((r.head.iter().filter_map(|&a| idx(a)).collect(), pos?))
        })
        .collect();
    let n = m.len();
    let mut val: Vec<Option<bool>> = vec![None; n];

    fn violated(rules: &[(Vec<usize>, Vec<usize>)], val: &[Option<bool>]) -> bool {
        rules.iter().any(|(h, p)| {
            p.iter().all(|&i| val[i] == Some(true)) && h.iter().all(|&i| val[i] == Some(false))
        })
    }

    fn search(
        i: usize,
        some_false: bool,
        rules: &[(Vec<usize>, Vec<usize>)],
        val: &mut Vec<Option<bool>>,
    ) -> bool {
        if violated(rules, val) {
            return false;
        }
        if i == val.len() {
            return some_false;
        }
        for b in [false, true] {
            val[i] = Some(b);
            if search(i + 1, some_false || !b, rules, val) {
                return true;
            }
        }
        val[i] = None;
        false
    }

    search(0, false, &rules, &mut val)
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::emit_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interp(v: &[AtomId]) -> Interpretation {
        Interpretation::new(v.iter().copied())
    }

    #[test]
    fn rule_constructors_validate() {
        assert_eq!(Rule::choice(vec![], vec![1], vec![]), Err(ProgramError::EmptyChoiceHead));
        assert_eq!(
            Rule::disjunctive(vec![1], vec![1], vec![]),
            Err(ProgramError::OverlappingLiterals(1))
        );
        let r = Rule::disjunctive(vec![3, 1, 3], vec![], vec![]).unwrap();
        assert_eq!(r.head(), &[1, 3]);
    }

    #[test]
    fn constraint_semantics() {
        let r = Rule::disjunctive(vec![], vec![0], vec![]).unwrap();
        assert!(!r.satisfied_by(&interp(&[0])));
        assert!(r.satisfied_by(&interp(&[])));
    }

    #[test]
    fn choice_reduct_keeps_true_heads() {
        let mut p = Program::new(3);
        p.add_rule(Rule::choice(vec![0, 1], vec![2], vec![]).unwrap()).unwrap();
        let q = p.reduct(&interp(&[1, 2]));
        assert_eq!(q.rules().len(), 1);
        assert_eq!(q.rules()[0].head(), &[1]);
        assert_eq!(q.rules()[0].pos(), &[2]);
    }

    #[test]
    fn unsupported_atom_is_not_answer_set() {
        let mut p = Program::new(2);
        p.add_rule(Rule::disjunctive(vec![0], vec![], vec![1]).unwrap()).unwrap();
        assert!(p.is_answer_set(&interp(&[0])));
        assert!(!p.is_answer_set(&interp(&[1])));
        assert!(!p.is_answer_set(&interp(&[0, 1])));
    }

    #[test]
    fn disjunction_minimality() {
        let mut p = Program::new(2);
        p.add_rule(Rule::disjunctive(vec![0, 1], vec![], vec![]).unwrap()).unwrap();
        assert!(p.is_answer_set(&interp(&[0])));
        assert!(p.is_answer_set(&interp(&[1])));
        assert!(!p.is_answer_set(&interp(&[0, 1])));
        assert!(!p.is_answer_set(&interp(&[])));
    }

    #[test]
    fn cost_counts_triggered_rules() {
        let mut p = Program::new(2);
        p.add_rule(Rule::minimize(0, true)).unwrap();
        p.add_rule(Rule::minimize(1, false)).unwrap();
        assert_eq!(p.cost(&interp(&[0])), 2);
        assert_eq!(p.cost(&interp(&[1])), 0);
    }
}
