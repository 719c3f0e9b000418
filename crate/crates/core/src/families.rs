//! Parametrised program families with hand-built decompositions.

use crate::program::{AtomId, Program, Rule, RuleId};
use crate::td::TreeDecomposition;

/// Program with atoms `a_1..a_k` (ids `0..k`) and `f` (id `k`) and rules, in order,
/// `{a_1;..;a_k} :- f.`, `:- not a_i.` for `i = 2..k`, `:- not f.`, `{f}.`
///
/// Its answer sets are `{f, a_2..a_k}` with or without `a_1`. Panics if `k < 1`.
pub fn pk_program(k: usize) -> Program {
    assert!(k >= 1);
    let mut p = Program::new(k + 1);
    for i in 0..k {
        p.set_name(i as AtomId, format!("a_{}", i + 1));
    }
    let f = k as AtomId;
    p.set_name(f, "f");
    p.add_rule(Rule::choice((0..k as AtomId).collect(), vec![f], vec![]).unwrap()).unwrap();
    for i in 1..k {
        p.add_rule(Rule::disjunctive(vec![], vec![], vec![i as AtomId]).unwrap()).unwrap();
    }
    p.add_rule(Rule::disjunctive(vec![], vec![], vec![f]).unwrap()).unwrap();
    p.add_rule(Rule::choice(vec![f], vec![], vec![]).unwrap()).unwrap();
    p
}

struct PkIds {
    atoms: Vec<usize>,
    f: usize,
    rc: usize,
    ri: Vec<usize>,
    rf: usize,
    rcf: usize,
}

fn pk_ids(k: usize) -> PkIds {
    let n = k + 1;
    let rule = |r: RuleId| n + r as usize;
    PkIds {
        atoms: (0..k).collect(),
        f: k,
        rc: rule(0),
        ri: (1..k as RuleId).map(rule).collect(),
        rf: rule(k as RuleId),
        rcf: rule(k as RuleId + 1),
    }
}

/// Path decomposition `t1 - t2 - t3` of the semi-incidence graph of
/// [`pk_program`]`(k)` with `t1 = {a_*, f, r_c, r_cf}`, `t2 = {a_*, f, r_2..r_k, r_f}`
/// and empty root `t3`. Vertex ids follow [`crate::graph::build_semi_incidence`].
pub fn pk_decomposition(k: usize) -> TreeDecomposition {
    let id = pk_ids(k);
    let mut t1 = id.atoms.clone();
    t1.extend([id.f, id.rc, id.rcf]);
    let mut t2 = id.atoms.clone();
    t2.push(id.f);
    t2.extend(&id.ri);
    t2.push(id.rf);
    TreeDecomposition::new(vec![t1, t2, vec![]], &[(0, 1), (1, 2)], 2).expect("path is a tree")
}

/// Decomposition of the same program in which `f` and its rules are handled first:
/// `{f, r_f, r_cf} - {a_*, f, r_c} - {a_*, r_2..r_k} - {}`.
pub fn pk_decomposition_f_early(k: usize) -> TreeDecomposition {
    let id = pk_ids(k);
    let t1 = vec![id.f, id.rf, id.rcf];
    let mut t2 = id.atoms.clone();
    t2.extend([id.f, id.rc]);
    let mut t3 = id.atoms.clone();
    t3.extend(&id.ri);
    TreeDecomposition::new(vec![t1, t2, t3, vec![]], &[(0, 1), (1, 2), (2, 3)], 3).expect("path is a tree")
}

/// `copies` disjoint copies of `p`, where copy `i > 0` additionally has the rule
/// `x_0 :- y_last.` linking its first atom to the last atom of copy `i - 1`. Atom names
/// get the suffix `_c<i>`. Panics if `p` has no atoms.
pub fn chained_copies(p: &Program, copies: usize) -> Program {
    let n = p.atom_count();
    assert!(n > 0);
    let mut out = Program::new(n * copies);
    for c in 0..copies {
        let off = (c * n) as AtomId;
        for a in 0..n as AtomId {
            out.set_name(off + a, format!("{}_c{c}", p.display_name(a)));
        }
        let shift = |v: &[AtomId]| v.iter().map(|&a| a + off).collect::<Vec<_>>();
        for r in p.rules() {
            out.add_rule(Rule::new(r.kind(), shift(r.head()), shift(r.pos()), shift(r.neg())).unwrap()).unwrap();
        }
        if c > 0 {
            out.add_rule(Rule::disjunctive(vec![off], vec![off - 1], vec![]).unwrap()).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_semi_incidence;
    use crate::program::Interpretation;

    #[test]
    fn pk_decompositions_are_valid() {
        for k in 2..=10 {
            let g = build_semi_incidence(&pk_program(k)).graph;
            pk_decomposition(k).validate(&g).unwrap();
            pk_decomposition_f_early(k).validate(&g).unwrap();
        }
    }

    #[test]
    fn p2_answer_sets() {
        let p = pk_program(2);
        assert!(p.is_answer_set(&Interpretation::new([1, 2])));
        assert!(p.is_answer_set(&Interpretation::new([0, 1, 2])));
        assert!(!p.is_answer_set(&Interpretation::new([2])));
    }

    #[test]
    fn chain_sizes() {
        let p = pk_program(3);
        let c = chained_copies(&p, 4);
        assert_eq!(c.atom_count(), 4 * p.atom_count());
        assert_eq!(c.rule_count(), 4 * p.rule_count() + 3);
        assert_eq!(c.display_name(4), "a_1_c1");
    }
}
