use dpasp::graph::build_semi_incidence;
use dpasp::minsat::{crosscheck, lift_td, reduce_to_minsat, MinsatError};
use dpasp::parser::parse_text;
use dpasp::program::{Program, RuleKind};
use dpasp::random::{random_program, ProgramShape};
use dpasp::td::{heuristic_td, Heuristic};

/// Width bound of the lifted decomposition: an atom brings at most two formula vertices
/// along, every bag gains `sol` and `Min1`, and each clause gadget leaf has nine vertices.
fn lifted_bound(w: usize) -> usize {
    (3 * w + 4).max(8)
}

fn negative_atoms(p: &Program) -> usize {
    p.negative_atoms().len()
}

#[test]
fn minimal_models_match_answer_sets() {
    for seed in 0..200 {
        let p = random_program(ProgramShape::disjunctive(7, 9), seed);
        let report = crosscheck(&p).unwrap();
        assert!(report.ok(), "seed {seed}: {report:?}\n{p}");
        assert_eq!(report.projected, report.answer_sets, "seed {seed}");
    }
}

#[test]
fn lifted_decompositions_are_valid() {
    for seed in 0..200 {
        let p = random_program(ProgramShape::disjunctive(7, 9), seed);
        let f = reduce_to_minsat(&p).unwrap();
        let td = heuristic_td(&build_semi_incidence(&p).graph, Heuristic::MinFill, seed);
        let lifted = lift_td(&td, &p, &f).unwrap();
        lifted.validate(&f.incidence_graph()).unwrap();
        assert!(lifted.width() <= lifted_bound(td.width()), "seed {seed}");
        if !p.negative_atoms().is_empty() {
            assert!(td.width() >= 1);
        }
    }
}

#[test]
fn formula_size_is_linear() {
    for seed in 0..200 {
        let p = random_program(ProgramShape::disjunctive(12, 20), seed);
        let f = reduce_to_minsat(&p).unwrap();
        let neg = negative_atoms(&p);
        let occurrences = p.size() - p.rule_count();
        assert_eq!(f.var_count(), p.atom_count() + 2 * neg + 1);
        assert_eq!(f.clause_count(), p.rule_count() + 5 * neg + 1);
        assert_eq!(f.literal_count(), occurrences + 13 * neg + 1);
        assert!(f.literal_count() <= 14 * p.size() + 1);
    }
}

#[test]
fn disjunctive_part_of_second_example() {
    let p = parse_text("a | c :- b. b :- c, not g. c :- a. b | c :- e. h | i :- g, not c. a | b. g :- not i. c.").unwrap();
    let report = crosscheck(&p).unwrap();
    assert!(report.ok(), "{report:?}");
    assert!(!report.answer_sets.is_empty());
}

#[test]
fn choice_rules_are_rejected() {
    let p = parse_text("{a}. b :- not a.").unwrap();
    assert!(p.rules().iter().any(|r| r.kind() == RuleKind::Choice));
    assert_eq!(reduce_to_minsat(&p), Err(MinsatError::NonDisjunctiveInput { rule: 0 }));
}

#[test]
fn dimacs_header_counts() {
    let p = parse_text("a | b :- not c. c :- not a.").unwrap();
    let f = reduce_to_minsat(&p).unwrap();
    let dimacs = f.to_dimacs();
    assert!(dimacs.lines().any(|l| l == format!("p cnf {} {}", f.var_count(), f.clause_count())));
    let body = dimacs.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).count();
    assert_eq!(body, f.clause_count());
}
