//! Index structure over the per-bucket minima `A[1..m]`.
//!
//! The tree places its i-th leaf at inverse-Ackermann depth: the j-th node
//! on level k spans the half-open leaf interval
//! `[3↑^k j, min(m+1, 3↑^k (j+1)))` in Knuth up-arrow notation, first nodes
//! of adjacent levels are chained by spine edges with `(2,1)` as the root,
//! leaves `1..=8` hang off the root directly, and every other leaf i hangs
//! off the level-1 node whose interval contains it. Internal nodes with a
//! wide fan-out are then subdivided into contiguous groups so that every
//! node on the root-to-leaf path of leaf i has at most `⌈√i⌉ + 2` children.
//!
//! Every node carries a subtree-minimum leaf pointer, so the global minimum
//! is read off the root in O(1), a decrease at position i walks one
//! root-to-leaf path (O(depth(i))), and an arbitrary change recomputes the
//! minima over the children along that path (O(i)). Appending a position
//! rebuilds the whole tree, which stays within the O(m) budget of `push`;
//! positions are stable across rebuilds.
//!
//! All up-arrow arithmetic saturates at `cap = m + 1`: any quantity larger
//! than m behaves identically for interval construction, so no big integers
//! are needed.

use std::rc::Rc;

use thiserror::Error;

use crate::counters::OpCounters;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("new value is larger than the current value")]
    KeyIncrease,
}

/// `min(a ↑^k b, cap)` for `a >= 2, k >= 1, b >= 1`.
///
/// Uses the recursion `a↑b = a^b`, `a↑^k 1 = a`, and
/// `a↑^k b = a↑^{k-1}(a↑^k (b-1))`; every intermediate result is clamped to
/// `cap`, which keeps the recursion finite because towers only grow.
pub fn up_arrow(a: u64, k: u32, b: u64, cap: u64) -> u64 {
    debug_assert!(a >= 2 && k >= 1 && b >= 1);
    if k == 1 {
        return sat_pow(a, b, cap);
    }
    if b == 1 {
        return a.min(cap);
    }
    let inner = up_arrow(a, k, b - 1, cap);
    if inner >= cap {
        return cap;
    }
    up_arrow(a, k - 1, inner, cap)
}

/// `min(a^b, cap)`; exits as soon as the partial product reaches `cap`.
fn sat_pow(a: u64, b: u64, cap: u64) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..b {
        acc = acc.saturating_mul(a);
        if acc >= cap {
            return cap;
        }
    }
    acc
}

/// `min { k >= 1 : 3 ↑^k 2 > n }`, a proxy for the inverse Ackermann of n
/// up to an additive constant.
pub fn inv_ackermann_proxy(n: u64) -> u32 {
    let cap = n + 1;
    let mut k = 1;
    while up_arrow(3, k, 2, cap) <= n {
        k += 1;
    }
    k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Internal,
    Leaf,
    Subdivision,
}

struct Node {
    kind: NodeKind,
    /// Level k and ordinal j (internal nodes only).
    k: u32,
    j: u64,
    /// Half-open leaf interval (internal), covered span (subdivision),
    /// `[pos, pos+1)` for leaves.
    lo: u64,
    hi: u64,
    parent: Option<usize>,
    children: Vec<usize>,
    /// Leaf holding the minimum value in this subtree.
    min_leaf: Option<usize>,
    /// Position for leaves, smallest leaf position in the subtree otherwise.
    pos: u64,
}

/// One row of the diagnostic dump.
pub struct DumpRow {
    pub kind: NodeKind,
    pub k: u32,
    pub j: u64,
    pub lo: u64,
    pub hi: u64,
    pub children: usize,
    pub depth: usize,
}

pub struct IndexTree<K: Ord + Copy> {
    counters: Rc<OpCounters>,
    /// `values[i-1]` is A[i]; `None` is the +infinity sentinel.
    values: Vec<Option<K>>,
    nodes: Vec<Node>,
    root: usize,
    leaf_of_pos: Vec<usize>,
}

impl<K: Ord + Copy> IndexTree<K> {
    pub fn new(counters: Rc<OpCounters>) -> Self {
        IndexTree { counters, values: Vec::new(), nodes: Vec::new(), root: 0, leaf_of_pos: Vec::new() }
    }

    /// Builds a tree with `m` positions, all set to the infinity sentinel.
    pub fn with_len(m: usize, counters: Rc<OpCounters>) -> Self {
        let mut t = Self::new(counters);
        t.values = vec![None; m];
        t.rebuild();
        t
    }

    /// Number of positions m.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Appends position `m+1` holding `v` and rebuilds the tree. Existing
    /// positions keep their values; returns the new 1-based position.
    pub fn push(&mut self, v: Option<K>) -> usize {
        self.values.push(v);
        self.rebuild();
        self.values.len()
    }

    /// Position of a minimum value, or `None` if every value is infinite.
    pub fn peek(&self) -> Option<usize> {
        if self.values.is_empty() {
            return None;
        }
        self.counters.traversal();
        let leaf = self.nodes[self.root].min_leaf?;
        let pos = self.nodes[leaf].pos as usize;
        self.values[pos - 1].map(|_| pos)
    }

    pub fn value(&self, pos: usize) -> Option<K> {
        self.values[pos - 1]
    }

    /// Decreases A[pos] to `v`, updating min pointers along the leaf-to-root
    /// path. Decreasing from the infinity sentinel is always allowed.
    pub fn decrease_key(&mut self, pos: usize, v: K) -> Result<(), IndexError> {
        self.counters.comparison();
        if let Some(cur) = self.values[pos - 1] {
            if v > cur {
                return Err(IndexError::KeyIncrease);
            }
        }
        self.values[pos - 1] = Some(v);
        let leaf = self.leaf_of_pos[pos - 1];
        let mut cur = self.nodes[leaf].parent;
        while let Some(n) = cur {
            self.counters.traversal();
            // A node already pointing at this leaf sees the new value for
            // free, but its ancestors may not, so the walk must go on.
            if self.nodes[n].min_leaf == Some(leaf) {
            } else if self.lt_leaf(leaf, self.nodes[n].min_leaf) {
                self.nodes[n].min_leaf = Some(leaf);
            } else {
                break;
            }
            cur = self.nodes[n].parent;
        }
        Ok(())
    }

    /// Sets A[pos] to `v` (larger or smaller), recomputing the min pointer of
    /// every node on the leaf-to-root path from its children.
    pub fn change_key(&mut self, pos: usize, v: Option<K>) {
        self.values[pos - 1] = v;
        let leaf = self.leaf_of_pos[pos - 1];
        let mut cur = self.nodes[leaf].parent;
        while let Some(n) = cur {
            self.counters.traversal();
            let mut best: Option<usize> = None;
            for idx in 0..self.nodes[n].children.len() {
                let child = self.nodes[n].children[idx];
                let cand = if self.nodes[child].kind == NodeKind::Leaf {
                    Some(child)
                } else {
                    self.nodes[child].min_leaf
                };
                if let Some(c) = cand {
                    if best.is_none() || self.lt_leaf(c, best) {
                        best = Some(c);
                    }
                }
            }
            self.nodes[n].min_leaf = best;
            cur = self.nodes[n].parent;
        }
    }

    /// Whether the value at `leaf` is strictly below the value at `other`.
    fn lt_leaf(&self, leaf: usize, other: Option<usize>) -> bool {
        let Some(other) = other else { return true };
        self.counters.comparison();
        let a = self.values[self.nodes[leaf].pos as usize - 1];
        let b = self.values[self.nodes[other].pos as usize - 1];
        match (a, b) {
            (Some(a), Some(b)) => a < b,
            (Some(_), None) => true,
            (None, _) => false,
        }
    }

    // ----- construction -----

    fn rebuild(&mut self) {
        let m = self.values.len() as u64;
        self.nodes.clear();
        self.leaf_of_pos = vec![usize::MAX; m as usize];
        if m == 0 {
            return;
        }
        let cap = m + 1;

        // Internal nodes (j, k), level by level. levels[k-1] holds
        // (j, node idx) in increasing j.
        let mut levels: Vec<Vec<(u64, usize)>> = Vec::new();
        let mut k = 1;
        loop {
            let mut level = Vec::new();
            let mut j = 2;
            loop {
                let lo = up_arrow(3, k, j, cap);
                if lo > m {
                    break;
                }
                let hi = up_arrow(3, k, j + 1, cap).min(cap);
                self.counters.allocation();
                self.nodes.push(Node {
                    kind: NodeKind::Internal,
                    k,
                    j,
                    lo,
                    hi,
                    parent: None,
                    children: Vec::new(),
                    min_leaf: None,
                    pos: 0,
                });
                level.push((j, self.nodes.len() - 1));
                j += 1;
            }
            if level.is_empty() {
                break;
            }
            levels.push(level);
            k += 1;
        }
        if levels.is_empty() {
            // m <= 8: only the root (2, 1) with an empty interval exists.
            self.counters.allocation();
            self.nodes.push(Node {
                kind: NodeKind::Internal,
                k: 1,
                j: 2,
                lo: cap.min(9),
                hi: cap.min(27),
                parent: None,
                children: Vec::new(),
                min_leaf: None,
                pos: 0,
            });
            levels.push(vec![(2, self.nodes.len() - 1)]);
        }
        self.root = levels[0][0].1;

        // Parents: (j, k) with j >= 3 goes under the level-(k+1) node whose
        // interval contains its lower end; spine edges make (2, k+1) a child
        // of (2, k).
        for k in 0..levels.len() {
            for &(j, idx) in &levels[k] {
                if j == 2 {
                    if k > 0 {
                        let above = levels[k - 1][0].1;
                        self.attach(above, idx);
                    }
                } else {
                    let lo = self.nodes[idx].lo;
                    let parent = levels[k + 1]
                        .iter()
                        .map(|&(_, p)| p)
                        .find(|&p| self.nodes[p].lo <= lo && lo < self.nodes[p].hi)
                        .expect("covering parent exists");
                    self.attach(parent, idx);
                }
            }
        }

        // Sort children by interval start so sibling order follows leaf
        // order; the spine child (largest lo) lands last.
        for n in 0..self.nodes.len() {
            let mut kids = std::mem::take(&mut self.nodes[n].children);
            kids.sort_by_key(|&c| self.nodes[c].lo);
            self.nodes[n].children = kids;
        }

        // Leaves: 1..=8 under the root, leaf i under the (j, 1) node with
        // 3^j <= i < 3^(j+1) otherwise.
        for i in 1..=m {
            let owner = if i <= 8 {
                self.root
            } else {
                levels[0]
                    .iter()
                    .map(|&(_, idx)| idx)
                    .find(|&idx| self.nodes[idx].lo <= i && i < self.nodes[idx].hi)
                    .expect("owning level-1 node exists")
            };
            self.counters.allocation();
            self.nodes.push(Node {
                kind: NodeKind::Leaf,
                k: 0,
                j: 0,
                lo: i,
                hi: i + 1,
                parent: Some(owner),
                children: Vec::new(),
                min_leaf: None,
                pos: i,
            });
            let leaf = self.nodes.len() - 1;
            self.leaf_of_pos[i as usize - 1] = leaf;
            self.nodes[owner].children.push(leaf);
        }
        // Root children: special leaves 1..=8 were appended after the spine
        // child; rotate them to the front to keep sibling order by leaf.
        let mut kids = std::mem::take(&mut self.nodes[self.root].children);
        kids.sort_by_key(|&c| self.subtree_start(c));
        self.nodes[self.root].children = kids;

        self.fill_min_positions();
        self.subdivide();
        self.recompute_all_minima();
    }

    fn attach(&mut self, parent: usize, child: usize) {
        self.nodes[child].parent = Some(parent);
        self.nodes[parent].children.push(child);
    }

    fn subtree_start(&self, idx: usize) -> u64 {
        match self.nodes[idx].kind {
            NodeKind::Leaf => self.nodes[idx].pos,
            // Spine children start below their own interval only via deeper
            // spine nodes; lo is still the right sort key among siblings.
            _ => self.nodes[idx].lo,
        }
    }

    /// Computes, for every node, the smallest leaf position in its subtree.
    fn fill_min_positions(&mut self) {
        let mut order: Vec<usize> = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            order.push(n);
            stack.extend(self.nodes[n].children.iter().copied());
        }
        for &n in order.iter().rev() {
            if self.nodes[n].kind != NodeKind::Leaf {
                let min = self
                    .nodes[n]
                    .children
                    .iter()
                    .map(|&c| self.nodes[c].pos)
                    .min()
                    .unwrap_or(self.nodes[n].lo);
                self.nodes[n].pos = min;
            }
        }
    }

    /// Caps the fan-out of every node at `⌈√i_min⌉ + 2` (at least 3), where
    /// i_min is the smallest leaf position in its subtree, by repeatedly
    /// grouping contiguous runs of children under new subdivision nodes.
    /// Every leaf then satisfies the per-path degree bound because i_min is
    /// a lower bound for every leaf position in the subtree.
    fn subdivide(&mut self) {
        let original = self.nodes.len();
        for u in 0..original {
            if self.nodes[u].kind != NodeKind::Internal {
                continue;
            }
            let target = fanout_target(self.nodes[u].pos);
            while self.nodes[u].children.len() > target {
                let kids = std::mem::take(&mut self.nodes[u].children);
                let mut groups: Vec<usize> = Vec::with_capacity(kids.len() / target + 1);
                for chunk in kids.chunks(target) {
                    self.counters.allocation();
                    let lo = chunk.iter().map(|&c| self.nodes[c].pos).min().unwrap();
                    let hi = chunk.iter().map(|&c| self.nodes[c].hi).max().unwrap();
                    self.nodes.push(Node {
                        kind: NodeKind::Subdivision,
                        k: 0,
                        j: 0,
                        lo,
                        hi,
                        parent: Some(u),
                        children: chunk.to_vec(),
                        min_leaf: None,
                        pos: lo,
                    });
                    let g = self.nodes.len() - 1;
                    for &c in chunk {
                        self.nodes[c].parent = Some(g);
                    }
                    groups.push(g);
                }
                self.nodes[u].children = groups;
            }
        }
    }

    fn recompute_all_minima(&mut self) {
        let mut order: Vec<usize> = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            order.push(n);
            stack.extend(self.nodes[n].children.iter().copied());
        }
        for &n in order.iter().rev() {
            if self.nodes[n].kind == NodeKind::Leaf {
                self.nodes[n].min_leaf = Some(n);
            } else {
                let mut best: Option<usize> = None;
                for idx in 0..self.nodes[n].children.len() {
                    let child = self.nodes[n].children[idx];
                    if let Some(c) = self.nodes[child].min_leaf {
                        if best.is_none() || self.lt_leaf(c, best) {
                            best = Some(c);
                        }
                    }
                }
                self.nodes[n].min_leaf = best;
            }
        }
    }

    // ----- diagnostics -----

    /// Edge count from the root to the leaf at `pos`.
    pub fn depth(&self, pos: usize) -> usize {
        let mut d = 0;
        let mut cur = self.leaf_of_pos[pos - 1];
        while let Some(p) = self.nodes[cur].parent {
            d += 1;
            cur = p;
        }
        d
    }

    /// Largest child count over the nodes on the root-to-leaf path of `pos`
    /// (the leaf itself excluded).
    pub fn max_children_on_path(&self, pos: usize) -> usize {
        let mut max = 0;
        let mut cur = self.nodes[self.leaf_of_pos[pos - 1]].parent;
        while let Some(p) = cur {
            max = max.max(self.nodes[p].children.len());
            cur = self.nodes[p].parent;
        }
        max
    }

    pub fn dump(&self) -> Vec<DumpRow> {
        let mut depths = vec![0usize; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            for &c in &self.nodes[n].children {
                depths[c] = depths[n] + 1;
                stack.push(c);
            }
        }
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| DumpRow {
                kind: n.kind,
                k: n.k,
                j: n.j,
                lo: n.lo,
                hi: n.hi,
                children: n.children.len(),
                depth: depths[i],
            })
            .collect()
    }

    /// CSV dump, one record per node: `kind,k,j,lo,hi,children,depth`.
    pub fn dump_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("kind,k,j,lo,hi,children,depth\n");
        for row in self.dump() {
            let kind = match row.kind {
                NodeKind::Internal => "internal",
                NodeKind::Leaf => "leaf",
                NodeKind::Subdivision => "subdivision",
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                kind, row.k, row.j, row.lo, row.hi, row.children, row.depth
            );
        }
        out
    }

    /// Full audit: every node's min pointer equals the true minimum over the
    /// leaf values of its subtree.
    pub fn audit_min_coherence(&self) -> Result<(), String> {
        for n in 0..self.nodes.len() {
            if self.nodes[n].kind == NodeKind::Leaf {
                continue;
            }
            let leaves = self.subtree_leaves(n);
            let truth = leaves
                .iter()
                .filter_map(|&l| self.values[self.nodes[l].pos as usize - 1])
                .min();
            let got = self
                .nodes[n]
                .min_leaf
                .and_then(|l| self.values[self.nodes[l].pos as usize - 1]);
            if truth != got {
                return Err(format!("node {n}: min pointer does not match subtree minimum"));
            }
        }
        Ok(())
    }

    /// Audit of the interval structure: leaves cover 1..=m exactly once and
    /// each internal node's subtree holds exactly the leaves its interval
    /// (plus spine/bonus-leaf extensions for first nodes) prescribes.
    pub fn audit_partition(&self) -> Result<(), String> {
        let m = self.values.len() as u64;
        let mut seen = vec![false; m as usize];
        for n in &self.nodes {
            if n.kind == NodeKind::Leaf {
                let i = n.pos as usize;
                if seen[i - 1] {
                    return Err(format!("leaf {i} appears twice"));
                }
                seen[i - 1] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err("missing leaf".into());
        }
        for n in 0..self.nodes.len() {
            if self.nodes[n].kind != NodeKind::Internal {
                continue;
            }
            let mut leaves: Vec<u64> =
                self.subtree_leaves(n).iter().map(|&l| self.nodes[l].pos).collect();
            leaves.sort_unstable();
            let (j, k) = (self.nodes[n].j, self.nodes[n].k);
            let expect: Vec<u64> = if n == self.root {
                (1..=m).collect()
            } else if j == 2 {
                // First node of level k: owns everything from 3↑^k 2 up,
                // through its spine descendants.
                (self.nodes[n].lo..=m).collect()
            } else {
                (self.nodes[n].lo..self.nodes[n].hi).collect()
            };
            if leaves != expect {
                return Err(format!("node ({j},{k}): subtree leaves do not match interval"));
            }
        }
        Ok(())
    }

    fn subtree_leaves(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![n];
        while let Some(x) = stack.pop() {
            if self.nodes[x].kind == NodeKind::Leaf {
                out.push(x);
            } else {
                stack.extend(self.nodes[x].children.iter().copied());
            }
        }
        out
    }
}

/// Fan-out cap for a node whose smallest subtree leaf is `i_min`.
fn fanout_target(i_min: u64) -> usize {
    (ceil_sqrt(i_min) as usize + 2).max(3)
}

fn ceil_sqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counters::OpCounters;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn up_arrow_small_cases() {
        let cap = 1_000_000;
        assert_eq!(up_arrow(3, 1, 2, cap), 9);
        assert_eq!(up_arrow(3, 2, 2, cap), 27);
        assert_eq!(up_arrow(3, 2, 1, cap), 3);
        assert_eq!(up_arrow(2, 1, 10, cap), 1024);
    }

    /// Unbounded evaluation of the same recursion, as the oracle.
    fn up_arrow_oracle(a: u128, k: u32, b: u128) -> u128 {
        if k == 1 {
            return a.checked_pow(b.try_into().unwrap()).unwrap();
        }
        if b == 1 {
            return a;
        }
        up_arrow_oracle(a, k - 1, up_arrow_oracle(a, k, b - 1))
    }

    #[test]
    fn up_arrow_saturates_per_oracle() {
        let cap = 1_000_000u64;
        // 3↑^3 2 = 3↑^2 3 = 3^27.
        assert_eq!(up_arrow_oracle(3, 3, 2), 7_625_597_484_987);
        assert_eq!(up_arrow(3, 3, 2, cap), cap);
        // Below the cap the two agree.
        for (k, b) in [(1u32, 2u64), (1, 3), (2, 2), (1, 12)] {
            assert_eq!(up_arrow(3, k, b, cap) as u128, up_arrow_oracle(3, k, b as u128));
        }
    }

    #[test]
    fn inv_ackermann_proxy_values() {
        assert_eq!(inv_ackermann_proxy(8), 1);
        assert_eq!(inv_ackermann_proxy(9), 2);
        assert_eq!(inv_ackermann_proxy(26), 2);
        assert_eq!(inv_ackermann_proxy(27), 3);
        assert_eq!(inv_ackermann_proxy(1_000_000), 3);
        assert_eq!(up_arrow_oracle(3, 2, 2), 27);
        assert!(up_arrow_oracle(3, 3, 2) > 1_000_000);
    }

    fn tree(m: usize) -> IndexTree<i64> {
        IndexTree::with_len(m, OpCounters::new())
    }

    #[test]
    fn m8_only_the_root_and_its_leaves_exist() {
        let t = tree(8);
        let rows = t.dump();
        let internal: Vec<&DumpRow> =
            rows.iter().filter(|r| r.kind == NodeKind::Internal).collect();
        assert_eq!(internal.len(), 1);
        assert_eq!((internal[0].j, internal[0].k), (2, 1));
        // The root's eight leaves sit below its subdivision groups; the
        // fan-out cap of leaf 1 forces at most three children per node.
        for i in 1..=8 {
            assert!(t.depth(i) <= 2, "leaf {i}");
        }
        assert!(internal[0].children <= 3);
        t.audit_partition().unwrap();
    }

    #[test]
    fn m9_root_owns_ninth_leaf() {
        let t = tree(9);
        for i in 1..=9 {
            assert!(t.depth(i) <= 2, "leaf {i}");
        }
        let rows = t.dump();
        let root: Vec<&DumpRow> = rows.iter().filter(|r| r.kind == NodeKind::Internal).collect();
        assert_eq!(root.len(), 1);
        assert_eq!((root[0].lo, root[0].hi), (9, 10));
    }

    #[test]
    fn m30_structure() {
        let t = tree(30);
        let rows = t.dump();
        let find = |j, k| {
            rows.iter()
                .find(|r| r.kind == NodeKind::Internal && r.j == j && r.k == k)
                .unwrap()
        };
        let n21 = find(2, 1);
        assert_eq!((n21.lo, n21.hi), (9, 27));
        assert_eq!(n21.depth, 0);
        let n31 = find(3, 1);
        assert_eq!((n31.lo, n31.hi), (27, 31));
        let n22 = find(2, 2);
        assert_eq!((n22.lo, n22.hi), (27, 31));
        // (3,1) hangs under the level-2 first node.
        assert_eq!(n31.depth, n22.depth + 1);
        assert!(t.depth(30) <= 6);
        t.audit_partition().unwrap();
        t.audit_min_coherence().unwrap();
    }

    #[test]
    fn partition_holds_for_small_m() {
        for m in 1..200 {
            let t = tree(m);
            t.audit_partition().unwrap_or_else(|e| panic!("m={m}: {e}"));
        }
        for m in [729, 1000, 2187, 6561, 10_000] {
            tree(m).audit_partition().unwrap();
        }
    }

    #[test]
    fn degree_bound_small_m() {
        for m in [1usize, 8, 9, 26, 27, 100, 729, 2187, 5000, 10_000] {
            let t = tree(m);
            for i in 1..=m {
                let bound = ceil_sqrt(i as u64) as usize + 2;
                let got = t.max_children_on_path(i);
                assert!(got <= bound, "m={m} leaf {i}: {got} > {bound}");
            }
        }
    }

    #[test]
    fn depth_bound_small_m() {
        for m in [1usize, 8, 9, 27, 100, 1000, 10_000] {
            let t = tree(m);
            for i in 1..=m {
                let k = inv_ackermann_proxy(i as u64);
                let bound = 4 * (k as usize + 1) + 4;
                assert!(t.depth(i) <= bound, "m={m} leaf {i}: depth {}", t.depth(i));
            }
        }
    }

    #[test]
    fn push_and_peek_track_minimum() {
        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        let p1 = t.push(Some(5));
        assert_eq!(t.peek(), Some(p1));
        let _p2 = t.push(None);
        assert_eq!(t.peek(), Some(p1));
        let p3 = t.push(Some(3));
        assert_eq!(t.peek(), Some(p3));
        assert_eq!(t.value(p3), Some(3));
    }

    #[test]
    fn sequential_pushes_follow_linear_scan() {
        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        let mut vals: Vec<i64> = Vec::new();
        for v in (1..=100).rev() {
            t.push(Some(v));
            vals.push(v);
            let argmin = vals.iter().enumerate().min_by_key(|&(_, v)| v).unwrap().0 + 1;
            assert_eq!(t.peek(), Some(argmin));
        }
    }

    #[test]
    fn peek_cases() {
        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        t.push(Some(5));
        t.push(Some(3));
        t.push(Some(7));
        assert_eq!(t.peek(), Some(2));

        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        t.push(None);
        t.push(None);
        assert_eq!(t.peek(), None);

        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        t.push(Some(4));
        t.push(Some(4));
        let p = t.peek().unwrap();
        assert_eq!(t.value(p), Some(4));
    }

    #[test]
    fn decrease_key_cases() {
        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        t.push(Some(5));
        t.push(Some(3));
        t.decrease_key(1, 2).unwrap();
        assert_eq!(t.peek(), Some(1));

        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        t.push(Some(1));
        t.push(Some(9));
        t.decrease_key(2, 5).unwrap();
        assert_eq!(t.peek(), Some(1));
        assert_eq!(t.decrease_key(2, 7), Err(IndexError::KeyIncrease));
    }

    #[test]
    fn change_key_cases() {
        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        t.push(Some(2));
        t.push(Some(9));
        t.change_key(1, None);
        assert_eq!(t.peek(), Some(2));
        t.change_key(2, Some(9));
        assert_eq!(t.peek(), Some(2));
    }

    #[test]
    fn random_trace_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = 40;
        let mut t = tree(m);
        let mut vals: Vec<Option<i64>> = vec![None; m];
        for step in 0..500 {
            let pos = rng.gen_range(0..m);
            if rng.gen_bool(0.5) {
                let v = match vals[pos] {
                    Some(cur) => cur - rng.gen_range(0..10),
                    None => rng.gen_range(-1000..1000),
                };
                t.decrease_key(pos + 1, v).unwrap();
                vals[pos] = Some(v);
            } else {
                let v = if rng.gen_bool(0.2) { None } else { Some(rng.gen_range(-1000..1000)) };
                t.change_key(pos + 1, v);
                vals[pos] = v;
            }
            let expect = vals.iter().filter_map(|&v| v).min();
            let got = t.peek().map(|p| t.value(p).unwrap());
            assert_eq!(got, expect, "step {step}");
            if step % 100 == 0 {
                t.audit_min_coherence().unwrap();
            }
        }
        t.audit_min_coherence().unwrap();
    }

    #[test]
    fn positions_stable_across_push() {
        let mut t: IndexTree<i64> = IndexTree::new(OpCounters::new());
        let p1 = t.push(Some(10));
        for v in 0..50 {
            t.push(Some(100 + v));
        }
        t.decrease_key(p1, 1).unwrap();
        assert_eq!(t.peek(), Some(p1));
    }
}
