use std::collections::VecDeque;
use std::fmt::Write;

use super::{TdError, TreeDecomposition};

/// Writes PACE `.td` text. Nodes are renumbered breadth-first from the root, so the
/// root becomes bag 1 and parsing the output restores the same rooted decomposition.
pub fn emit_td(td: &TreeDecomposition, vertex_count: usize) -> String {
    let mut order = Vec::with_capacity(td.len());
    let mut queue = VecDeque::from([td.root()]);
    while let Some(t) = queue.pop_front() {
        order.push(t);
        queue.extend(td.children(t).iter().copied());
    }
    let mut id = vec![0; td.len()];
    for (i, &t) in order.iter().enumerate() {
        id[t] = i + 1;
    }
    let max_bag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.len(), max_bag, vertex_count);
    for &t in &order {
        write!(out, "b {}", id[t]).unwrap();
        for &v in td.bag(t) {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &t in &order[1..] {
        writeln!(out, "{} {}", id[td.parent(t).unwrap()], id[t]).unwrap();
    }
    out
}

/// Parses PACE `.td` text and roots the tree at bag 1. Returns the decomposition and
/// the vertex count from the header.
pub fn parse_td(src: &str) -> Result<(TreeDecomposition, usize), TdError> {
    let err = |line: usize, msg: &str| TdError::Parse { line, msg: msg.to_string() };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(line, &format!("bad number `{s}`")));
        match toks.as_slice() {
            [] | ["c", ..] => {}
            ["s", "td", n, w, v] => {
                let (n, w, v) = (num(n)?, num(w)?, num(v)?);
                header = Some((n, w, v));
                bags = vec![None; n];
            }
            ["b", rest @ ..] => {
                let (n, w, v) = header.ok_or_else(|| err(line, "bag before header"))?;
                let id = num(rest.first().ok_or_else(|| err(line, "bag without id"))?)?;
                if id == 0 || id > n {
                    return Err(err(line, "bag id out of range"));
                }
                let mut bag = Vec::with_capacity(rest.len() - 1);
                for s in &rest[1..] {
                    let x = num(s)?;
                    if x == 0 || x > v {
                        return Err(err(line, "vertex out of range"));
                    }
                    bag.push(x - 1);
                }
                if bag.len() > w {
                    return Err(err(line, "bag larger than declared"));
                }
                if bags[id - 1].replace(bag).is_some() {
                    return Err(err(line, "duplicate bag"));
                }
            }
            [a, b] => {
                let n = header.ok_or_else(|| err(line, "edge before header"))?.0;
                let (a, b) = (num(a)?, num(b)?);
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(err(line, "edge endpoint out of range"));
                }
                edges.push((a - 1, b - 1));
            }
            _ => return Err(err(line, "unrecognized line")),
        }
    }
    let (_, _, v) = header.ok_or_else(|| err(1, "missing `s td` header"))?;
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| err(0, &format!("bag {} missing", i + 1))))
        .collect::<Result<_, _>>()?;
    Ok((TreeDecomposition::new(bags, &edges, 0)?, v))
}
