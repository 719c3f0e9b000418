//! Acceptance suite. Prints one PASS/FAIL line per criterion to stderr, past the test
//! harness's output capture.

use std::collections::BTreeSet;
use std::io::Write;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use dpasp::dp::sinc::dp_run;
use dpasp::dp::{CostCount, Plan};
use dpasp::families::{chained_copies, pk_decomposition, pk_program};
use dpasp::graph::build_semi_incidence;
use dpasp::minsat::{crosscheck, lift_td, reduce_to_minsat};
use dpasp::multipass::mdp_solve;
use dpasp::oracle::{brute_force_answer_sets, optimal_answer_sets, optimal_cost};
use dpasp::parser::parse_text;
use dpasp::program::{Interpretation, Program};
use dpasp::random::{random_graph, random_program, ProgramShape};
use dpasp::solve::{run, Engine, SolveOptions};
use dpasp::steiner::{brute_force_steiner, grid_graph, sample_terminals, steiner_program};
use dpasp::td::{emit_td, heuristic_td, normalize_nice, parse_td, Heuristic, TreeDecomposition};

const DIFFERENTIAL_PROGRAMS: u64 = 1000;
const PK_RANGE: std::ops::RangeInclusive<usize> = 4..=10;
const PK_RATIO_AT_10: f64 = 1.0 / 100.0;
const STEINER_SMALL_GRID: (usize, usize) = (3, 3);
const STEINER_GRID: (usize, usize) = (4, 4);
const STEINER_TERMINALS: usize = 3;
const STEINER_SEED: u64 = 7;
const REDUCTION_PROGRAMS: u64 = 200;
const REDUCTION_MAX_ATOMS: usize = 7;
const TD_GRAPHS: u64 = 100;
const CHAIN_BASE_COPIES: usize = 8;
const CHAIN_MAX_WIDTH: usize = 6;
const CHAIN_GROWTH_PER_DOUBLING: f64 = 4.0;
const TIMING_REPEATS: usize = 5;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn counts(best: Option<CostCount>) -> Option<(u64, u64)> {
    best.map(|b| (b.cost, b.count.try_into().expect("count fits u64")))
}

fn solve_all(p: &Program, engine: Engine) -> (Option<(u64, u64)>, Vec<Interpretation>) {
    let r = run(p, &SolveOptions { engine, ..SolveOptions::default() }).unwrap();
    let mut sets = Vec::new();
    r.enumerate(|m| {
        sets.push(m);
        ControlFlow::Continue(())
    })
    .unwrap();
    sets.sort();
    (counts(r.optimum()), sets)
}

fn names(p: &Program, sets: &[Interpretation]) -> BTreeSet<BTreeSet<String>> {
    sets.iter().map(|m| m.atoms().iter().map(|&a| p.display_name(a)).collect()).collect()
}

fn criterion_1() -> Verdict {
    for seed in 0..DIFFERENTIAL_PROGRAMS {
        let p = random_program(ProgramShape::small(), seed);
        let ans = brute_force_answer_sets(&p, 20).unwrap();
        let want_sets = optimal_answer_sets(&ans);
        let want = optimal_cost(&ans).map(|c| (c, want_sets.len() as u64));
        for engine in [Engine::Single, Engine::Multipass] {
            let (got, sets) = solve_all(&p, engine);
            check(got == want, format!("seed {seed} {engine:?}: optimum {got:?}, oracle {want:?}"))?;
            check(sets == want_sets, format!("seed {seed} {engine:?}: enumerated sets differ"))?;
        }
    }
    Ok(format!("{DIFFERENTIAL_PROGRAMS} programs, both engines equal the oracle"))
}

const RUNNING_P: &str = "{e_ab}. {e_bc}. {e_cd}. {e_ad}. a_b :- e_ab. a_d :- e_ad. \
                         a_c :- a_b, e_bc. a_c :- a_d, e_cd. :- not a_c.";
const RUNNING_R: &str = "a | c :- b. b :- c, not g. c :- a. b | c :- e. h | i :- g, not c. \
                         a | b. g :- not i. c. {d} :- g.";

fn criterion_2() -> Verdict {
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<String>>();
    let p = parse_text(RUNNING_P).unwrap();
    let r = parse_text(RUNNING_R).unwrap();
    let pk = pk_program(2);
    for engine in [Engine::Single, Engine::Multipass] {
        let (best, sets) = solve_all(&p, engine);
        let sets = names(&p, &sets);
        check(sets.contains(&set(&["e_ab", "e_bc", "a_b", "a_c"])), format!("{engine:?}: A missing"))?;
        check(sets.len() == 7 && best.map(|b| b.1) == Some(7), format!("{engine:?}: {} answer sets", sets.len()))?;
        let sets = names(&r, &solve_all(&r, engine).1);
        check(sets.contains(&set(&["b", "c", "d", "g"])), format!("{engine:?}: B missing"))?;
        let sets = names(&pk, &solve_all(&pk, engine).1);
        let want = BTreeSet::from([set(&["f", "a_2"]), set(&["f", "a_1", "a_2"])]);
        check(sets == want, format!("{engine:?}: P_2 gives {sets:?}"))?;
    }
    Ok("A, 7 answer sets, B and P_2 confirmed by both engines".into())
}

fn criterion_3() -> Verdict {
    let mut line = Vec::new();
    let mut ratio_at_10 = None;
    for k in PK_RANGE {
        let p = pk_program(k);
        let nice = normalize_nice(&pk_decomposition(k));
        let plan = Plan::new(&p, &nice).unwrap();
        let single = dp_run(plan.clone(), true).unwrap();
        let multi = mdp_solve(plan.clone(), true).unwrap();
        check(counts(single.optimum()) == Some((0, 2)), format!("k={k}: single-pass optimum"))?;
        check(counts(multi.optimum().unwrap()) == Some((0, 2)), format!("k={k}: multi-pass optimum"))?;
        // The table of the first bag once all of its vertices are introduced.
        let first = plan.nodes.iter().position(|n| n.atoms.len() == k + 1 && n.rules.len() == 2).unwrap();
        let tau1 = single.stats.rows_per_node[first];
        let (s, m) = (single.stats.total_rows, multi.stats.stored_rows);
        check(m < s, format!("k={k}: multi-pass {m} rows, single-pass {s}"))?;
        check(tau1 >= 1 << k, format!("k={k}: first table has {tau1} rows"))?;
        if k == 10 {
            ratio_at_10 = Some(m as f64 / s as f64);
        }
        line.push(format!("k={k} {m}/{s}"));
    }
    let ratio = ratio_at_10.expect("k=10 measured");
    check(ratio <= PK_RATIO_AT_10, format!("ratio at k=10 is {ratio:.5}"))?;
    Ok(format!("{}; ratio at k=10 {ratio:.6}", line.join(", ")))
}

fn criterion_4() -> Verdict {
    let (rows, cols) = STEINER_SMALL_GRID;
    let g = grid_graph(rows, cols);
    let terminals = sample_terminals(&g, STEINER_TERMINALS, STEINER_SEED);
    let p = steiner_program(&g, &terminals);
    let ans = brute_force_answer_sets(&p, p.atom_count()).unwrap();
    let program_oracle = optimal_cost(&ans).map(|c| (c, optimal_answer_sets(&ans).len() as u64));
    check(program_oracle == Some(brute_force_steiner(&g, &terminals)), "program oracle and graph oracle disagree")?;
    for engine in [Engine::Single, Engine::Multipass] {
        let got = solve_all(&p, engine).0;
        check(got == program_oracle, format!("{rows}x{cols} {engine:?}: {got:?}, oracle {program_oracle:?}"))?;
    }
    let (rows, cols) = STEINER_GRID;
    let g = grid_graph(rows, cols);
    let terminals = sample_terminals(&g, STEINER_TERMINALS, STEINER_SEED);
    let p = steiner_program(&g, &terminals);
    let want = brute_force_steiner(&g, &terminals);
    for engine in [Engine::Single, Engine::Multipass] {
        let r = run(&p, &SolveOptions { engine, retain: false, ..SolveOptions::default() }).unwrap();
        let got = counts(r.optimum());
        check(got == Some(want), format!("{rows}x{cols} {engine:?}: {got:?}, oracle {want:?}"))?;
    }
    Ok(format!(
        "3x3: {program_oracle:?} from both oracles; 4x4 terminals {terminals:?}: cost {} count {}",
        want.0, want.1
    ))
}

fn criterion_5() -> Verdict {
    let mut worst = (0usize, 0usize);
    for seed in 0..REDUCTION_PROGRAMS {
        let p = random_program(ProgramShape::disjunctive(REDUCTION_MAX_ATOMS, 10), seed);
        let report = crosscheck(&p).unwrap();
        check(report.ok(), format!("seed {seed}: missing {:?} spurious {:?}", report.missing, report.spurious))?;
        let f = reduce_to_minsat(&p).unwrap();
        let td = heuristic_td(&build_semi_incidence(&p).graph, Heuristic::MinFill, seed);
        let lifted = lift_td(&td, &p, &f).unwrap();
        check(lifted.validate(&f.incidence_graph()).is_ok(), format!("seed {seed}: lifted decomposition invalid"))?;
        let k = td.width();
        check(lifted.width() <= 7 * k + 2, format!("seed {seed}: lifted width {} for k={k}", lifted.width()))?;
        if lifted.width() > worst.0 {
            worst = (lifted.width(), k);
        }
    }
    Ok(format!("{REDUCTION_PROGRAMS} programs bijective; widest lift {} at k={}", worst.0, worst.1))
}

fn criterion_6() -> Verdict {
    for seed in 0..TD_GRAPHS {
        let n = 5 + (seed as usize * 7) % 56;
        let g = random_graph(n, 0.05 + (seed % 10) as f64 * 0.04, seed);
        for h in [Heuristic::MinFill, Heuristic::MinDegree] {
            let td = heuristic_td(&g, h, seed);
            check(td.validate(&g).is_ok(), format!("graph {seed}: invalid {h:?} decomposition"))?;
            let nice = normalize_nice(&td);
            check(nice.is_well_formed() && nice.to_td().validate(&g).is_ok(), format!("graph {seed}: bad nice form"))?;
            check(nice.width() == td.width(), format!("graph {seed}: width {} became {}", td.width(), nice.width()))?;
            let text = emit_td(&td, n);
            let (back, _): (TreeDecomposition, usize) = parse_td(&text).map_err(|e| e.to_string())?;
            check(emit_td(&back, n) == text, format!("graph {seed}: .td text changed on round trip"))?;
        }
    }
    Ok(format!("{TD_GRAPHS} graphs, two heuristics each"))
}

/// Best of several engine runs on a fixed decomposition, excluding decomposition time.
fn engine_time(p: &Program, td: &TreeDecomposition, engine: Engine) -> Duration {
    (0..TIMING_REPEATS)
        .map(|_| {
            let start = Instant::now();
            let plan = Plan::new(p, &normalize_nice(td)).unwrap();
            match engine {
                Engine::Single => drop(dp_run(plan, false).unwrap().optimum()),
                Engine::Multipass => drop(mdp_solve(plan, false).unwrap().optimum().unwrap()),
            }
            start.elapsed()
        })
        .min()
        .unwrap()
}

fn criterion_7() -> Verdict {
    let base = parse_text(RUNNING_P).unwrap();
    let mut line = Vec::new();
    for engine in [Engine::Single, Engine::Multipass] {
        let mut prev: Option<Duration> = None;
        for factor in [1, 2, 4, 8] {
            let p = chained_copies(&base, CHAIN_BASE_COPIES * factor);
            let td = heuristic_td(&build_semi_incidence(&p).graph, Heuristic::MinFill, 0);
            check(td.width() <= CHAIN_MAX_WIDTH, format!("{factor}x: width {}", td.width()))?;
            let t = engine_time(&p, &td, engine);
            if let Some(prev) = prev {
                let growth = t.as_secs_f64() / prev.as_secs_f64();
                check(growth <= CHAIN_GROWTH_PER_DOUBLING, format!("{engine:?} {factor}x: growth {growth:.2}"))?;
                line.push(format!("{engine:?} {factor}x {growth:.2}"));
            }
            prev = Some(t);
        }
    }
    Ok(format!("growth per doubling: {}", line.join(", ")))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1 oracle differential", criterion_1),
        ("2 worked examples", criterion_2),
        ("3 multi-pass space win", criterion_3),
        ("4 Steiner desk scale", criterion_4),
        ("5 reduction fidelity", criterion_5),
        ("6 decomposition toolchain", criterion_6),
        ("7 linearity", criterion_7),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        let line = match verdict {
            Ok(detail) => format!("PASS criterion {name} ({secs:.1}s): {detail}\n"),
            Err(why) => {
                failed.push(name);
                format!("FAIL criterion {name} ({secs:.1}s): {why}\n")
            }
        };
        std::io::stderr().write_all(line.as_bytes()).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
