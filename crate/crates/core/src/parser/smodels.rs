use std::collections::BTreeMap;
use std::fmt::Write;

use super::ParseError;
use crate::program::{AtomId, Program, Rule, RuleKind};

struct RawRule {
    line: usize,
    kind: RuleKind,
    head: Vec<i64>,
    pos: Vec<i64>,
    neg: Vec<i64>,
}

struct Tokens<'a> {
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl Tokens<'_> {
    fn next(&mut self) -> Result<i64, ParseError> {
        let tok = self.it.next().ok_or_else(|| self.err("record ends early"))?;
        tok.parse().map_err(|_| self.err(&format!("expected integer, found `{tok}`")))
    }

    fn count(&mut self) -> Result<usize, ParseError> {
        let n = self.next()?;
        usize::try_from(n).map_err(|_| self.err("negative count"))
    }

    fn atoms(&mut self, n: usize) -> Result<Vec<i64>, ParseError> {
        (0..n)
            .map(|_| {
                let a = self.next()?;
                if a < 1 {
                    return Err(self.err("atom numbers start at 1"));
                }
                Ok(a)
            })
            .collect()
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.it.next() {
            None => Ok(()),
            Some(t) => Err(self.err(&format!("trailing token `{t}`"))),
        }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::MalformedRecord { line: self.line, msg: msg.to_string() }
    }
}

/// Reads `body` as `#lits #neg neg... pos...`.
fn body(t: &mut Tokens<'_>) -> Result<(Vec<i64>, Vec<i64>), ParseError> {
    let n = t.count()?;
    let nneg = t.count()?;
    if nneg > n {
        return Err(t.err("more negative literals than literals"));
    }
    let neg = t.atoms(nneg)?;
    let pos = t.atoms(n - nneg)?;
    Ok((pos, neg))
}

/// Parses lparse output restricted to basic (1), choice (3), minimize (6) and
/// disjunctive (8) records.
pub fn parse_smodels(src: &str) -> Result<Program, ParseError> {
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let mut raw: Vec<RawRule> = Vec::new();
    let mut last_line = 0;
    let mut next_line = |what: &str, last: usize| {
        lines.next().ok_or(ParseError::MalformedRecord { line: last + 1, msg: format!("missing {what}") })
    };

    loop {
        let (line, text) = next_line("rule section terminator", last_line)?;
        last_line = line;
        let mut t = Tokens { line, it: text.split_whitespace() };
        let code = t.next()?;
        let rule = match code {
            0 => {
                t.finish()?;
                break;
            }
            1 => {
                let h = t.atoms(1)?;
                let (pos, neg) = body(&mut t)?;
                RawRule { line, kind: RuleKind::Disjunctive, head: h, pos, neg }
            }
            3 | 8 => {
                let nh = t.count()?;
                let h = t.atoms(nh)?;
                let (pos, neg) = body(&mut t)?;
                let kind = if code == 3 { RuleKind::Choice } else { RuleKind::Disjunctive };
                RawRule { line, kind, head: h, pos, neg }
            }
            6 => {
                if t.next()? != 0 {
                    return Err(t.err("minimize record must start with 0"));
                }
                let n = t.count()?;
                let nneg = t.count()?;
                if nneg > n {
                    return Err(t.err("more negative literals than literals"));
                }
                let neg = t.atoms(nneg)?;
                let pos = t.atoms(n - nneg)?;
                for _ in 0..n {
                    let w = t.next()?;
                    if w != 1 {
                        return Err(ParseError::NonUnitWeight { line, weight: w });
                    }
                }
                t.finish()?;
                for a in neg {
                    raw.push(RawRule { line, kind: RuleKind::Optimization, head: vec![], pos: vec![], neg: vec![a] });
                }
                for a in pos {
                    raw.push(RawRule { line, kind: RuleKind::Optimization, head: vec![], pos: vec![a], neg: vec![] });
                }
                continue;
            }
            other => return Err(ParseError::UnsupportedRuleType { line, code: other }),
        };
        t.finish()?;
        raw.push(rule);
    }

    let mut names: BTreeMap<i64, String> = BTreeMap::new();
    loop {
        let (line, text) = next_line("symbol table terminator", last_line)?;
        last_line = line;
        if text == "0" {
            break;
        }
        let (id, name) = text.split_once(char::is_whitespace).ok_or(ParseError::MalformedRecord {
            line,
            msg: "symbol table entry needs an atom number and a name".into(),
        })?;
        let id: i64 = id
            .parse()
            .map_err(|_| ParseError::MalformedRecord { line, msg: format!("bad atom number `{id}`") })?;
        names.insert(id, name.trim().to_string());
    }

    let mut compute: [Vec<(usize, i64)>; 2] = [vec![], vec![]];
    for (k, header) in ["B+", "B-"].iter().enumerate() {
        let (line, text) = next_line(header, last_line)?;
        last_line = line;
        if text != *header {
            return Err(ParseError::MalformedRecord { line, msg: format!("expected `{header}`") });
        }
        loop {
            let (line, text) = next_line("compute statement terminator", last_line)?;
            last_line = line;
            let a: i64 = text
                .parse()
                .map_err(|_| ParseError::MalformedRecord { line, msg: format!("bad atom `{text}`") })?;
            if a == 0 {
                break;
            }
            if a < 0 {
                return Err(ParseError::MalformedRecord { line, msg: "negative atom".into() });
            }
            compute[k].push((line, a));
        }
    }
    if let Some((line, text)) = lines.next() {
        if text.parse::<u64>().is_err() {
            return Err(ParseError::MalformedRecord { line, msg: "expected number of models".into() });
        }
    }
    for (line, a) in compute[0].drain(..) {
        raw.push(RawRule { line, kind: RuleKind::Disjunctive, head: vec![], pos: vec![], neg: vec![a] });
    }
    for (line, a) in compute[1].drain(..) {
        raw.push(RawRule { line, kind: RuleKind::Disjunctive, head: vec![], pos: vec![a], neg: vec![] });
    }

    // Dense renumbering in ascending order of the original atom numbers.
    let mut ids: Vec<i64> = raw.iter().flat_map(|r| r.head.iter().chain(&r.pos).chain(&r.neg).copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    let dense = |a: i64| ids.binary_search(&a).unwrap() as AtomId;
    let mut p = Program::new(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if let Some(n) = names.get(id) {
            p.set_name(i as AtomId, n.clone());
        }
    }
    for r in raw {
        let map = |v: &[i64]| v.iter().map(|&a| dense(a)).collect::<Vec<_>>();
        let rule = Rule::new(r.kind, map(&r.head), map(&r.pos), map(&r.neg))
            .map_err(|source| ParseError::Program { line: r.line, source })?;
        p.add_rule(rule).map_err(|source| ParseError::Program { line: r.line, source })?;
    }
    Ok(p)
}

/// Writes the program in lparse format. Constraints get a fresh head atom that the
/// compute statement forces false, so re-parsing adds one always-false atom.
pub fn emit_smodels(p: &Program) -> String {
    let n = p.atom_count() as u64;
    let id = |a: AtomId| a as u64 + 1;
    let falsum = n + 1;
    let mut used_falsum = false;
    let mut out = String::new();
    let body = |r: &Rule| {
        let mut s = format!("{} {}", r.pos().len() + r.neg().len(), r.neg().len());
        for &a in r.neg().iter().chain(r.pos()) {
            write!(s, " {}", id(a)).unwrap();
        }
        s
    };
    for r in p.rules() {
        match r.kind() {
            RuleKind::Disjunctive if r.head().len() == 1 => {
                writeln!(out, "1 {} {}", id(r.head()[0]), body(r)).unwrap();
            }
            RuleKind::Disjunctive if r.head().is_empty() => {
                used_falsum = true;
                writeln!(out, "1 {falsum} {}", body(r)).unwrap();
            }
            RuleKind::Disjunctive | RuleKind::Choice => {
                let code = if r.kind() == RuleKind::Choice { 3 } else { 8 };
                let heads: Vec<String> = r.head().iter().map(|&a| id(a).to_string()).collect();
                writeln!(out, "{code} {} {} {}", heads.len(), heads.join(" "), body(r)).unwrap();
            }
            RuleKind::Optimization => {
                writeln!(out, "6 0 {} 1", body(r)).unwrap();
            }
        }
    }
    out.push_str("0\n");
    for a in 0..p.atom_count() as AtomId {
        if let Some(name) = p.name(a) {
            writeln!(out, "{} {name}", id(a)).unwrap();
        }
    }
    out.push_str("0\nB+\n0\nB-\n");
    if used_falsum {
        writeln!(out, "{falsum}").unwrap();
    }
    out.push_str("0\n1\n");
    out
}
