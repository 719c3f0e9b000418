use super::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub children: Vec<usize>,
    pub bag: Vec<usize>,
}

/// A nice decomposition. Nodes are stored children-first; leaf and root bags are empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTd {
    nodes: Vec<NiceNode>,
}

impl NiceTd {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn node(&self, t: usize) -> &NiceNode {
        &self.nodes[t]
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn to_td(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges: Vec<(usize, usize)> = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(t, n)| n.children.iter().map(move |&c| (t, c)))
            .collect();
        TreeDecomposition::new(bags, &edges, self.root()).unwrap()
    }

    /// Whether every node matches its kind; used by tests and as a debug check.
    pub fn is_well_formed(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 || !self.nodes[n - 1].bag.is_empty() {
            return false;
        }
        let mut has_parent = vec![false; n];
        for (t, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= t || std::mem::replace(&mut has_parent[c], true)) {
                return false;
            }
            let child = |i: usize| &self.nodes[node.children[i]].bag;
            let ok = match node.kind {
                NiceKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                NiceKind::Join => {
                    node.children.len() == 2 && *child(0) == node.bag && *child(1) == node.bag
                }
                NiceKind::Introduce(v) => {
                    node.children.len() == 1 && {
                        let mut b = child(0).clone();
                        !b.contains(&v) && {
                            b.push(v);
                            b.sort_unstable();
                            b == node.bag
                        }
                    }
                }
                NiceKind::Forget(v) => {
                    node.children.len() == 1 && {
                        let mut b = node.bag.clone();
                        !b.contains(&v) && {
                            b.push(v);
                            b.sort_unstable();
                            b == *child(0)
                        }
                    }
                }
            };
            if !ok {
                return false;
            }
        }
        has_parent[..n - 1].iter().all(|&p| p)
    }

    /// A string identifying the decomposition up to node numbering and child order.
    pub fn canonical_form(&self) -> String {
        let mut forms: Vec<String> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let mut kids: Vec<&str> = node.children.iter().map(|&c| forms[c].as_str()).collect();
            kids.sort_unstable();
            forms.push(format!("{:?}{:?}[{}]", node.kind, node.bag, kids.join(",")));
        }
        forms.pop().unwrap_or_default()
    }

    /// Appends the chain turning `from` (top node `below`, bag `from_bag`) into `to_bag`:
    /// forgets in descending vertex order, then introduces in ascending order.
    fn chain(&mut self, below: Option<usize>, from_bag: &[usize], to_bag: &[usize]) -> usize {
        let mut cur = match below {
            Some(c) => c,
            None => {
                debug_assert!(from_bag.is_empty());
                self.nodes.push(NiceNode { kind: NiceKind::Leaf, children: vec![], bag: vec![] });
                self.nodes.len() - 1
            }
        };
        let mut bag = from_bag.to_vec();
        for &v in from_bag.iter().rev() {
            if to_bag.binary_search(&v).is_err() {
                bag.retain(|&x| x != v);
                self.nodes.push(NiceNode { kind: NiceKind::Forget(v), children: vec![cur], bag: bag.clone() });
                cur = self.nodes.len() - 1;
            }
        }
        for &v in to_bag {
            if from_bag.binary_search(&v).is_err() {
                let at = bag.binary_search(&v).unwrap_err();
                bag.insert(at, v);
                self.nodes.push(NiceNode { kind: NiceKind::Introduce(v), children: vec![cur], bag: bag.clone() });
                cur = self.nodes.len() - 1;
            }
        }
        cur
    }
}

/// Converts a rooted decomposition into a nice one of the same width.
pub fn normalize_nice(td: &TreeDecomposition) -> NiceTd {
    let mut out = NiceTd { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.len()];
    for t in td.post_order() {
        let bag = td.bag(t);
        let tops: Vec<usize> = if td.children(t).is_empty() {
            vec![out.chain(None, &[], bag)]
        } else {
            td.children(t).iter().map(|&c| out.chain(Some(top[c]), td.bag(c), bag)).collect()
        };
        let mut cur = tops[0];
        for &other in &tops[1..] {
            out.nodes.push(NiceNode { kind: NiceKind::Join, children: vec![cur, other], bag: bag.to_vec() });
            cur = out.nodes.len() - 1;
        }
        top[t] = cur;
    }
    let root = td.root();
    out.chain(Some(top[root]), td.bag(root), &[]);
    out
}
