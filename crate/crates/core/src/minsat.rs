//! Reduction of disjunctive programs to enumerating subset-minimal models of a CNF that
//! contain a distinguished variable `sol`, together with a decomposition of the
//! formula's incidence graph lifted from one of the program's semi-incidence graph.
//!
//! For every atom `a` occurring negatively there is a primed copy `a'` and a Tseitin
//! variable `l_a'` defined as `a' ∧ ¬a`. Minimality is taken over all variables except
//! the Tseitin ones, which vary freely.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{build_semi_incidence, Graph, Vertex};
use crate::oracle::{brute_force_answer_sets, AtomBudgetExceeded, DEFAULT_ATOM_BUDGET};
use crate::program::{AtomId, Interpretation, Program, RuleId, RuleKind};
use crate::td::{TdError, TreeDecomposition};

/// Most variables [`brute_minimal_models`] accepts.
pub const VAR_BUDGET: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinsatError {
    #[error("rule {rule} is a choice or optimization rule")]
    NonDisjunctiveInput { rule: RuleId },
    #[error("formula has {vars} variables, budget is {budget}")]
    VarBudgetExceeded { vars: usize, budget: usize },
    #[error("input decomposition: {0}")]
    InvalidInputTd(#[from] TdError),
    #[error(transparent)]
    Oracle(#[from] AtomBudgetExceeded),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Atom(AtomId),
    Primed(AtomId),
    Tseitin(AtomId),
    Sol,
}

/// Which schema produced a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClauseKind {
    /// `H_r ∨ ¬B⁺_r ∨ (B⁻_r)'`
    Rule(RuleId),
    /// `¬a ∨ a'`
    Impl(AtomId),
    /// `¬sol ∨ ¬a' ∨ a`
    Sol(AtomId),
    /// `sol ∨ ⋁ l_a'`
    Min1,
    /// `¬a' ∨ a ∨ l_a'`
    Min2(AtomId),
    /// `¬l_a' ∨ a'`
    Min3(AtomId),
    /// `¬l_a' ∨ ¬a`
    Min4(AtomId),
}

/// A CNF over variables `0..vars.len()`. A literal is `(variable, polarity)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub vars: Vec<Var>,
    pub names: Vec<String>,
    pub clauses: Vec<Vec<(usize, bool)>>,
    pub kinds: Vec<ClauseKind>,
    atom_count: usize,
    negative: Vec<AtomId>,
}

impl CnfFormula {
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn sol(&self) -> usize {
        self.vars.len() - 1
    }

    pub fn atom_var(&self, a: AtomId) -> usize {
        a as usize
    }

    fn neg_index(&self, a: AtomId) -> Option<usize> {
        self.negative.binary_search(&a).ok()
    }

    pub fn primed_var(&self, a: AtomId) -> Option<usize> {
        self.neg_index(a).map(|i| self.atom_count + 2 * i)
    }

    pub fn tseitin_var(&self, a: AtomId) -> Option<usize> {
        self.neg_index(a).map(|i| self.atom_count + 2 * i + 1)
    }

    pub fn var_of(&self, v: Var) -> Option<usize> {
        match v {
            Var::Atom(a) => ((a as usize) < self.atom_count).then_some(a as usize),
            Var::Primed(a) => self.primed_var(a),
            Var::Tseitin(a) => self.tseitin_var(a),
            Var::Sol => Some(self.sol()),
        }
    }

    pub fn clause_of(&self, kind: ClauseKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    /// Variables counted when comparing models for minimality.
    pub fn minimized(&self) -> Vec<bool> {
        self.vars.iter().map(|v| !matches!(v, Var::Tseitin(_))).collect()
    }

    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&(v, pol)| model[v] == pol))
    }

    /// Incidence graph: variables `0..V`, clause `i` is vertex `V + i`.
    pub fn incidence_graph(&self) -> Graph {
        let nv = self.var_count();
        Graph::from_edges(
            nv + self.clause_count(),
            self.clauses.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&(v, _)| (v, nv + i))),
        )
    }

    /// DIMACS CNF with `c varmap <index> <name>` and `c sol <index>` comment lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.names.iter().enumerate() {
            writeln!(out, "c varmap {} {}", i + 1, name).unwrap();
        }
        writeln!(out, "c sol {}", self.sol() + 1).unwrap();
        writeln!(out, "p cnf {} {}", self.var_count(), self.clause_count()).unwrap();
        for c in &self.clauses {
            for &(v, pol) in c {
                let lit = (v + 1) as i64;
                write!(out, "{} ", if pol { lit } else { -lit }).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Builds the formula. Atom `a` is variable `a`; then `a'`, `l_a'` for each negatively
/// occurring atom in ascending order; `sol` is last.
pub fn reduce_to_minsat(p: &Program) -> Result<CnfFormula, MinsatError> {
    if let Some(r) = p.rules().iter().position(|r| r.kind() != RuleKind::Disjunctive) {
        return Err(MinsatError::NonDisjunctiveInput { rule: r as RuleId });
    }
    let n = p.atom_count();
    let negative = p.negative_atoms();
    let mut vars: Vec<Var> = (0..n as AtomId).map(Var::Atom).collect();
    let mut names: Vec<String> = (0..n as AtomId).map(|a| p.display_name(a)).collect();
    for &a in &negative {
        vars.push(Var::Primed(a));
        names.push(format!("{}'", p.display_name(a)));
        vars.push(Var::Tseitin(a));
        names.push(format!("l_{}'", p.display_name(a)));
    }
    vars.push(Var::Sol);
    names.push("sol".into());
    let sol = vars.len() - 1;
    let mut f = CnfFormula { vars, names, clauses: vec![], kinds: vec![], atom_count: n, negative };
    let push = |f: &mut CnfFormula, kind, clause: Vec<(usize, bool)>| {
        f.clauses.push(clause);
        f.kinds.push(kind);
    };
    for (r, rule) in p.rules().iter().enumerate() {
        let mut c: Vec<(usize, bool)> = rule.head().iter().map(|&a| (a as usize, true)).collect();
        c.extend(rule.pos().iter().map(|&a| (a as usize, false)));
        c.extend(rule.neg().iter().map(|&a| (f.primed_var(a).unwrap(), true)));
        push(&mut f, ClauseKind::Rule(r as RuleId), c);
    }
    let negative = f.negative.clone();
    for &a in &negative {
        let (x, pa) = (a as usize, f.primed_var(a).unwrap());
        push(&mut f, ClauseKind::Impl(a), vec![(x, false), (pa, true)]);
        push(&mut f, ClauseKind::Sol(a), vec![(sol, false), (pa, false), (x, true)]);
    }
    let mut min1 = vec![(sol, true)];
    min1.extend(negative.iter().map(|&a| (f.tseitin_var(a).unwrap(), true)));
    push(&mut f, ClauseKind::Min1, min1);
    for &a in &negative {
        let (x, pa, l) = (a as usize, f.primed_var(a).unwrap(), f.tseitin_var(a).unwrap());
        push(&mut f, ClauseKind::Min2(a), vec![(pa, false), (x, true), (l, true)]);
        push(&mut f, ClauseKind::Min3(a), vec![(l, false), (pa, true)]);
        push(&mut f, ClauseKind::Min4(a), vec![(l, false), (x, false)]);
    }
    Ok(f)
}

/// Lifts a decomposition of the semi-incidence graph of `p` to one of the incidence
/// graph of `f = reduce_to_minsat(p)`. Each bag keeps its atoms, gains `a'` and `l_a'`
/// for every negatively occurring bag atom, the rule clause of every bag rule, `sol` and
/// the clause `Min1`. The five clauses of a negatively occurring atom `a` go into one
/// extra leaf `{a, a', l_a', sol}` below the first bag containing `a`.
///
/// The lifted width is at most `max(3w + 4, 8)` for input width `w`.
pub fn lift_td(td: &TreeDecomposition, p: &Program, f: &CnfFormula) -> Result<TreeDecomposition, MinsatError> {
    let pg = build_semi_incidence(p);
    td.validate(&pg.graph)?;
    let nv = f.var_count();
    let clause = |k: ClauseKind| nv + f.clause_of(k).expect("clause present");
    let mut bags: Vec<Vec<usize>> = td
        .bags()
        .iter()
        .map(|bag| {
            let mut out = vec![f.sol(), clause(ClauseKind::Min1)];
            for &v in bag {
                match pg.vertex(v) {
                    Vertex::Atom(a) => {
                        out.push(a as usize);
                        if let (Some(pa), Some(l)) = (f.primed_var(a), f.tseitin_var(a)) {
                            out.extend([pa, l]);
                        }
                    }
                    Vertex::Rule(r) => out.push(clause(ClauseKind::Rule(r))),
                }
            }
            out
        })
        .collect();
    let mut edges = td.edges();
    for &a in &f.negative {
        let home = td.bags().iter().position(|b| b.contains(&pg.index(Vertex::Atom(a)))).expect("valid input covers atoms");
        let (pa, l) = (f.primed_var(a).unwrap(), f.tseitin_var(a).unwrap());
        let mut leaf = vec![a as usize, pa, l, f.sol()];
        leaf.extend(
            [ClauseKind::Impl(a), ClauseKind::Sol(a), ClauseKind::Min2(a), ClauseKind::Min3(a), ClauseKind::Min4(a)].map(clause),
        );
        bags.push(leaf);
        edges.push((home, bags.len() - 1));
    }
    Ok(TreeDecomposition::new(bags, &edges, td.root())?)
}

/// Every model of `f` as a bit vector, by backtracking over variables in index order.
fn all_models(f: &CnfFormula) -> Vec<u32> {
    let nv = f.var_count();
    // Clauses checked once their largest variable is assigned.
    let mut due: Vec<Vec<(u32, u32)>> = vec![vec![]; nv];
    let mut always_false = false;
    for c in &f.clauses {
        let (mut pos, mut neg) = (0u32, 0u32);
        for &(v, pol) in c {
            if pol {
                pos |= 1 << v;
            } else {
                neg |= 1 << v;
            }
        }
        match c.iter().map(|&(v, _)| v).max() {
            Some(top) => due[top].push((pos, neg)),
            None => always_false = true,
        }
    }
    let mut out = Vec::new();
    if always_false {
        return out;
    }
    let mut stack: Vec<(usize, u32)> = vec![(0, 0)];
    while let Some((depth, m)) = stack.pop() {
        if depth == nv {
            out.push(m);
            continue;
        }
        for bit in [0u32, 1] {
            let m2 = m | bit << depth;
            if due[depth].iter().all(|&(pos, neg)| m2 & pos != 0 || !m2 & neg != 0) {
                stack.push((depth + 1, m2));
            }
        }
    }
    out
}

/// Models of `f` containing `must` whose restriction to the variables flagged in
/// `minimized` is subset-minimal among all models. Exhaustive; at most [`VAR_BUDGET`]
/// variables.
pub fn minimal_models_over(f: &CnfFormula, must: usize, minimized: &[bool]) -> Result<Vec<Vec<bool>>, MinsatError> {
    if f.var_count() > VAR_BUDGET {
        return Err(MinsatError::VarBudgetExceeded { vars: f.var_count(), budget: VAR_BUDGET });
    }
    let zmask = minimized.iter().enumerate().filter(|(_, &z)| z).fold(0u32, |m, (i, _)| m | 1 << i);
    let models = all_models(f);
    let projections: HashSet<u32> = models.iter().map(|&m| m & zmask).collect();
    let has_proper_subset = |z: u32| {
        // Proper submasks of z, largest first.
        let mut s = z;
        while s != 0 {
            s = (s - 1) & z;
            if projections.contains(&s) {
                return true;
            }
        }
        false
    };
    let mut out: Vec<u32> =
        models.into_iter().filter(|&m| m >> must & 1 == 1 && !has_proper_subset(m & zmask)).collect();
    out.sort_unstable();
    Ok(out.into_iter().map(|m| (0..f.var_count()).map(|v| m >> v & 1 == 1).collect()).collect())
}

/// Minimal models of `f` containing `must`, with Tseitin variables left unminimized.
pub fn brute_minimal_models(f: &CnfFormula, must: usize) -> Result<Vec<Vec<bool>>, MinsatError> {
    minimal_models_over(f, must, &f.minimized())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub answer_sets: Vec<Interpretation>,
    /// Projections of the minimal models containing `sol`, one per model.
    pub projected: Vec<Interpretation>,
    /// Answer sets without a minimal model.
    pub missing: Vec<Interpretation>,
    /// Projections that are not answer sets.
    pub spurious: Vec<Interpretation>,
    /// No two minimal models share a projection.
    pub injective: bool,
}

impl CrosscheckReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty() && self.spurious.is_empty() && self.injective
    }
}

/// Compares the projected minimal models of the reduction with the oracle answer sets.
pub fn crosscheck(p: &Program) -> Result<CrosscheckReport, MinsatError> {
    let f = reduce_to_minsat(p)?;
    let mut answer_sets: Vec<Interpretation> =
        brute_force_answer_sets(p, DEFAULT_ATOM_BUDGET)?.into_iter().map(|a| a.atoms).collect();
    answer_sets.sort();
    let mut projected: Vec<Interpretation> = brute_minimal_models(&f, f.sol())?
        .into_iter()
        .map(|m| Interpretation::new((0..p.atom_count()).filter(|&a| m[a]).map(|a| a as AtomId)))
        .collect();
    projected.sort();
    let distinct: HashSet<&Interpretation> = projected.iter().collect();
    let injective = distinct.len() == projected.len();
    let missing = answer_sets.iter().filter(|a| !distinct.contains(a)).cloned().collect();
    let mut spurious: Vec<Interpretation> =
        projected.iter().filter(|m| answer_sets.binary_search(m).is_err()).cloned().collect();
    spurious.dedup();
    Ok(CrosscheckReport { answer_sets, projected, missing, spurious, injective })
}
