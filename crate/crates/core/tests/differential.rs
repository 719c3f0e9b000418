use std::ops::ControlFlow;

use dpasp::dp::sinc::dp_run;
use dpasp::dp::{CostCount, Plan, Step};
use dpasp::graph::build_semi_incidence;
use dpasp::multipass::{mdp_solve, mod_node, WitnessTable};
use dpasp::oracle::{brute_force_answer_sets, optimal_answer_sets, optimal_cost};
use dpasp::program::{Interpretation, Program};
use dpasp::random::{random_program, ProgramShape};
use dpasp::solve::{optimum_per_td, run, Engine, SolveOptions};
use dpasp::td::{heuristic_td, normalize_nice, Heuristic};

fn plan_of(p: &Program, h: Heuristic, seed: u64) -> Plan {
    let td = heuristic_td(&build_semi_incidence(p).graph, h, seed);
    Plan::new(p, &normalize_nice(&td)).unwrap()
}

struct Outcome {
    optimum: Option<(u64, u64)>,
    sets: Vec<Interpretation>,
}

fn summarize(best: Option<CostCount>, enumerate: impl FnOnce(&mut Vec<Interpretation>)) -> Outcome {
    let mut sets = Vec::new();
    enumerate(&mut sets);
    sets.sort();
    Outcome { optimum: best.map(|b| (b.cost, b.count.try_into().unwrap())), sets }
}

fn single(plan: Plan) -> Outcome {
    let r = dp_run(plan, true).unwrap();
    summarize(r.optimum(), |s| {
        r.enumerate(|m| {
            s.push(m);
            ControlFlow::Continue(())
        })
        .unwrap()
    })
}

fn multi(plan: Plan) -> Outcome {
    let r = mdp_solve(plan, true).unwrap();
    summarize(r.optimum().unwrap(), |s| {
        r.enumerate(|m| {
            s.push(m);
            ControlFlow::Continue(())
        })
        .unwrap()
    })
}

fn oracle(p: &Program) -> Outcome {
    let ans = brute_force_answer_sets(p, 20).unwrap();
    let sets = optimal_answer_sets(&ans);
    Outcome { optimum: optimal_cost(&ans).map(|c| (c, sets.len() as u64)), sets }
}

#[test]
fn engines_match_oracle() {
    for seed in 0..400 {
        let p = random_program(ProgramShape::small(), seed);
        let want = oracle(&p);
        for h in [Heuristic::MinFill, Heuristic::MinDegree] {
            for (name, got) in [("single", single(plan_of(&p, h, seed))), ("multi", multi(plan_of(&p, h, seed)))] {
                assert_eq!(got.optimum, want.optimum, "{name} optimum, seed {seed}\n{p}");
                assert_eq!(got.sets, want.sets, "{name} answer sets, seed {seed}\n{p}");
            }
        }
    }
}

#[test]
fn larger_programs_match_oracle() {
    let shape = ProgramShape { max_atoms: 13, max_rules: 16, choice: true, optimization: true };
    for seed in 10_000..10_150 {
        let p = random_program(shape, seed);
        let want = oracle(&p);
        let got = multi(plan_of(&p, Heuristic::MinFill, seed));
        assert_eq!(got.optimum, want.optimum, "seed {seed}");
        assert_eq!(got.sets, want.sets, "seed {seed}");
        assert_eq!(single(plan_of(&p, Heuristic::MinFill, seed)).sets, want.sets, "seed {seed}");
    }
}

#[test]
fn results_do_not_depend_on_the_decomposition() {
    for seed in 0..100 {
        let p = random_program(ProgramShape::small(), seed);
        for engine in [Engine::Single, Engine::Multipass] {
            let opts = SolveOptions { engine, tds: 5, seed: seed * 31, ..SolveOptions::default() };
            let all = optimum_per_td(&p, &opts).unwrap();
            assert!(all.windows(2).all(|w| w[0].1 == w[1].1), "seed {seed}: {all:?}");
        }
    }
}

#[test]
fn released_tables_give_the_same_optimum() {
    for seed in 0..100 {
        let p = random_program(ProgramShape::small(), seed);
        for engine in [Engine::Single, Engine::Multipass] {
            let keep = run(&p, &SolveOptions { engine, ..SolveOptions::default() }).unwrap();
            let drop = run(&p, &SolveOptions { engine, retain: false, ..SolveOptions::default() }).unwrap();
            assert_eq!(keep.optimum(), drop.optimum());
            assert!(drop.enumerate(|_| ControlFlow::Continue(())).is_err());
        }
    }
}

#[test]
fn every_extracted_set_is_a_certified_answer_set() {
    for seed in 0..200 {
        let p = random_program(ProgramShape::small(), seed);
        for engine in [Engine::Single, Engine::Multipass] {
            let r = run(&p, &SolveOptions { engine, ..SolveOptions::default() }).unwrap();
            let best = r.optimum();
            r.enumerate(|m| {
                assert!(p.is_answer_set(&m), "seed {seed}: {m:?}");
                assert_eq!(Some(p.cost(&m)), best.as_ref().map(|b| b.cost));
                ControlFlow::Continue(())
            })
            .unwrap();
            if let Some(m) = r.first().unwrap() {
                assert!(p.is_answer_set(&m));
            }
        }
    }
}

#[test]
fn rows_stay_inside_their_bag() {
    for seed in 0..100 {
        let p = random_program(ProgramShape::small(), seed);
        let plan = plan_of(&p, Heuristic::MinFill, seed);
        let s = dp_run(plan.clone(), true).unwrap();
        let m = mdp_solve(plan.clone(), true).unwrap();
        for (t, node) in plan.nodes.iter().enumerate() {
            let atoms = (1u64 << node.atoms.len()) as u32 as u64;
            let rules = 1u64 << node.rules.len();
            let fits = |mask: u32, limit: u64| (mask as u64) < limit;
            for r in &s.table(t).unwrap().rows {
                assert!(fits(r.m, atoms.max(1)) && fits(r.sigma, rules));
                assert!(r.cws.iter().all(|&(c, rho)| fits(c, atoms.max(1)) && fits(rho, rules) && c & !r.m == 0));
            }
            for r in &m.witness_table(t).rows {
                assert!(fits(r.m, atoms.max(1)) && fits(r.sigma, rules));
            }
            for r in &m.counter_table(t).rows {
                assert!(fits(r.c | r.tw, atoms.max(1)) && fits(r.rho, rules));
            }
        }
    }
}

#[test]
fn forgotten_rules_were_satisfied() {
    for seed in 0..100 {
        let p = random_program(ProgramShape::small(), seed);
        let plan = plan_of(&p, Heuristic::MinFill, seed);
        let s = dp_run(plan.clone(), true).unwrap();
        let m = mdp_solve(plan.clone(), true).unwrap();
        for (t, node) in plan.nodes.iter().enumerate() {
            let Step::ForgetRule { pos, .. } = node.step else { continue };
            let child = node.children[0];
            for r in &s.table(t).unwrap().rows {
                for pred in &r.preds {
                    assert_eq!(s.table(child).unwrap().rows[pred.children[0] as usize].sigma >> pos & 1, 1);
                }
            }
            for (i, _) in m.witness_table(t).rows.iter().enumerate() {
                for o in m.orig(t, i as u32) {
                    assert_eq!(m.witness_table(child).rows[o.children[0] as usize].sigma >> pos & 1, 1);
                }
            }
        }
    }
}

#[test]
fn purging_commutes_with_recomputation() {
    for seed in 0..100 {
        let p = random_program(ProgramShape::small(), seed);
        let m = mdp_solve(plan_of(&p, Heuristic::MinFill, seed), true).unwrap();
        for (t, node) in m.plan.nodes.iter().enumerate() {
            let kids: Vec<&WitnessTable> = node.children.iter().map(|&c| m.witness_table(c)).collect();
            let again = mod_node(node, &kids).unwrap();
            for r in &m.witness_table(t).rows {
                let twin = again.rows.iter().find(|x| x.m == r.m && x.sigma == r.sigma).expect("row recomputed");
                assert_eq!(twin.origins, r.origins, "seed {seed} node {t}");
            }
        }
    }
}

#[test]
fn three_valued_atoms_are_reduct_relevant() {
    for seed in 0..100 {
        let p = random_program(ProgramShape::small(), seed);
        let relevant = p.reduct_relevant();
        let m = mdp_solve(plan_of(&p, Heuristic::MinFill, seed), true).unwrap();
        for (t, node) in m.plan.nodes.iter().enumerate() {
            for r in &m.counter_table(t).rows {
                for (i, &a) in node.atoms.iter().enumerate() {
                    if r.tw >> i & 1 == 1 {
                        assert!(relevant[a as usize], "seed {seed}: atom {a} marked in node {t}");
                    }
                }
            }
            let l = m.linked_table(t).unwrap();
            for i in 0..l.rows.len() as u32 {
                let set = l.counter_witnesses(dpasp::multipass::LinkedId(i));
                assert!(set.iter().all(|s| (s.0 as usize) < m.counter_table(t).rows.len()));
            }
        }
    }
}

#[test]
fn answer_set_check_matches_oracle() {
    for seed in 0..200 {
        let p = random_program(ProgramShape::small(), seed);
        let ans: Vec<Interpretation> = brute_force_answer_sets(&p, 20).unwrap().into_iter().map(|a| a.atoms).collect();
        let n = p.atom_count();
        for bits in 0u32..1 << n {
            let m = Interpretation::new((0..n as u32).filter(|&a| bits >> a & 1 == 1));
            assert_eq!(p.is_answer_set(&m), ans.contains(&m), "seed {seed}: {m:?}");
        }
    }
}
