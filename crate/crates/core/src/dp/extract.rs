use std::ops::ControlFlow;

use super::Pred;
use crate::program::{AtomId, Interpretation};

/// Tables linked by predecessor lists, as produced by either engine.
pub(crate) trait LinkGraph {
    fn children(&self, node: usize) -> &[usize];
    fn preds(&self, node: usize, row: u32) -> &[Pred];
    fn cost(&self, node: usize, row: u32) -> u64;
}

struct Frame {
    node: usize,
    row: u32,
    next: usize,
    pending_len: usize,
    acc_len: usize,
}

/// Streams every extension of `root_rows` at `root` whose cost equals the row's least
/// cost. Each extension is reported once, as the set of atoms decided true.
pub(crate) fn for_each_extension<G: LinkGraph>(
    g: &G,
    root: usize,
    root_rows: &[u32],
    mut f: impl FnMut(Interpretation) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut pending: Vec<(usize, u32)> = Vec::new();
    let mut acc: Vec<AtomId> = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();

    // Tries the next admissible link of the top frame; false when exhausted.
    let advance = |frames: &mut Vec<Frame>, pending: &mut Vec<(usize, u32)>, acc: &mut Vec<AtomId>| -> bool {
        let fr = frames.last_mut().unwrap();
        let preds = g.preds(fr.node, fr.row);
        let target = g.cost(fr.node, fr.row);
        while fr.next < preds.len() {
            let p = &preds[fr.next];
            fr.next += 1;
            if p.cost != target {
                continue;
            }
            pending.truncate(fr.pending_len);
            acc.truncate(fr.acc_len);
            for (k, &c) in g.children(fr.node).iter().enumerate() {
                pending.push((c, p.children[k]));
            }
            acc.extend(p.added);
            return true;
        }
        false
    };

    for &r in root_rows {
        pending.clear();
        acc.clear();
        pending.push((root, r));
        'search: loop {
            match pending.pop() {
                Some((node, row)) => {
                    frames.push(Frame { node, row, next: 0, pending_len: pending.len(), acc_len: acc.len() });
                    if advance(&mut frames, &mut pending, &mut acc) {
                        continue;
                    }
                }
                None => {
                    f(Interpretation::new(acc.iter().copied()))?;
                }
            }
            // Backtrack to the deepest frame with an untried link.
            loop {
                if frames.is_empty() {
                    break 'search;
                }
                if advance(&mut frames, &mut pending, &mut acc) {
                    break;
                }
                // Hand the node back so shallower frames see the pending list they left.
                let fr = frames.pop().unwrap();
                pending.truncate(fr.pending_len);
                pending.push((fr.node, fr.row));
            }
        }
    }
    ControlFlow::Continue(())
}
