//! Classic (amortized) Fibonacci heaps.
//!
//! Nodes live in a [`FibArena`] that is shared by every sub-heap of one
//! owner, so [`FibHeap::meld`] is a constant-time root-list splice and node
//! ids stay valid across melds. A [`FibHeap`] itself is only a small header
//! (min pointer and size).

use std::rc::Rc;

use thiserror::Error;

use crate::counters::OpCounters;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FibError {
    #[error("heap is empty")]
    Empty,
    #[error("new key is larger than the current key")]
    KeyIncrease,
}

/// Stable id of a node inside a [`FibArena`]. Valid until that node is popped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FibNodeId(usize);

struct FibNode<K> {
    key: K,
    /// Caller-supplied tag (the workset heap stores the push sequence number).
    item: u64,
    degree: u32,
    marked: bool,
    parent: Option<FibNodeId>,
    child: Option<FibNodeId>,
    left: FibNodeId,
    right: FibNodeId,
}

/// Backing store for Fibonacci nodes. Popped slots are recycled.
pub struct FibArena<K> {
    nodes: Vec<FibNode<K>>,
    free: Vec<usize>,
    counters: Rc<OpCounters>,
}

/// A Fibonacci heap header over nodes in some [`FibArena`].
#[derive(Clone, Copy, Debug)]
pub struct FibHeap {
    min: Option<FibNodeId>,
    size: usize,
}

impl<K: Ord + Copy> FibArena<K> {
    pub fn new(counters: Rc<OpCounters>) -> Self {
        FibArena { nodes: Vec::new(), free: Vec::new(), counters }
    }

    pub fn counters(&self) -> &Rc<OpCounters> {
        &self.counters
    }

    pub fn key(&self, id: FibNodeId) -> K {
        self.nodes[id.0].key
    }

    pub fn item(&self, id: FibNodeId) -> u64 {
        self.nodes[id.0].item
    }

    fn alloc(&mut self, key: K, item: u64) -> FibNodeId {
        self.counters.allocation();
        let node = FibNode {
            key,
            item,
            degree: 0,
            marked: false,
            parent: None,
            child: None,
            left: FibNodeId(0),
            right: FibNodeId(0),
        };
        let id = match self.free.pop() {
            Some(slot) => {
                self.nodes[slot] = node;
                FibNodeId(slot)
            }
            None => {
                self.nodes.push(node);
                FibNodeId(self.nodes.len() - 1)
            }
        };
        self.nodes[id.0].left = id;
        self.nodes[id.0].right = id;
        id
    }

    fn release(&mut self, id: FibNodeId) {
        self.free.push(id.0);
    }

    /// Unlinks `id` from its sibling ring. Leaves `id` self-linked.
    fn unlink(&mut self, id: FibNodeId) {
        self.counters.traversals_n(2);
        let (l, r) = (self.nodes[id.0].left, self.nodes[id.0].right);
        self.nodes[l.0].right = r;
        self.nodes[r.0].left = l;
        self.nodes[id.0].left = id;
        self.nodes[id.0].right = id;
    }

    /// Inserts `id` (self-linked) into the ring that contains `at`.
    fn splice(&mut self, at: FibNodeId, id: FibNodeId) {
        self.counters.traversals_n(2);
        let r = self.nodes[at.0].right;
        self.nodes[at.0].right = id;
        self.nodes[id.0].left = at;
        self.nodes[id.0].right = r;
        self.nodes[r.0].left = id;
    }
}

impl FibHeap {
    pub fn new() -> Self {
        FibHeap { min: None, size: 0 }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn push<K: Ord + Copy>(&mut self, arena: &mut FibArena<K>, key: K, item: u64) -> FibNodeId {
        let id = arena.alloc(key, item);
        self.add_root(arena, id);
        self.size += 1;
        id
    }

    pub fn peek<K: Ord + Copy>(&self, arena: &FibArena<K>) -> Result<K, FibError> {
        let min = self.min.ok_or(FibError::Empty)?;
        arena.counters.traversal();
        Ok(arena.nodes[min.0].key)
    }

    pub fn peek_node(&self) -> Option<FibNodeId> {
        self.min
    }

    /// Removes and returns a minimum node as `(key, item, id)`. The id is
    /// released back to the arena and must not be used afterwards.
    pub fn pop<K: Ord + Copy>(&mut self, arena: &mut FibArena<K>) -> Result<(K, u64, FibNodeId), FibError> {
        let min = self.min.ok_or(FibError::Empty)?;
        let key = arena.nodes[min.0].key;
        let item = arena.nodes[min.0].item;

        // Promote the children of min to roots.
        while let Some(child) = arena.nodes[min.0].child {
            arena.counters.traversal();
            let next = arena.nodes[child.0].right;
            arena.nodes[min.0].child = if next == child { None } else { Some(next) };
            arena.unlink(child);
            arena.nodes[child.0].parent = None;
            arena.nodes[child.0].marked = false;
            arena.splice(min, child);
        }
        arena.nodes[min.0].degree = 0;

        let had_siblings = arena.nodes[min.0].right != min;
        let successor = arena.nodes[min.0].right;
        arena.unlink(min);
        self.size -= 1;

        if !had_siblings {
            self.min = None;
        } else {
            self.min = Some(successor);
            self.consolidate(arena, successor);
        }
        arena.release(min);
        Ok((key, item, min))
    }

    pub fn decrease_key<K: Ord + Copy>(
        &mut self,
        arena: &mut FibArena<K>,
        id: FibNodeId,
        v: K,
    ) -> Result<(), FibError> {
        arena.counters.comparison();
        if v > arena.nodes[id.0].key {
            return Err(FibError::KeyIncrease);
        }
        arena.nodes[id.0].key = v;
        if let Some(parent) = arena.nodes[id.0].parent {
            arena.counters.comparison();
            if v < arena.nodes[parent.0].key {
                self.cut(arena, id, parent);
                self.cascading_cut(arena, parent);
            }
        }
        let min = self.min.expect("decrease_key on empty heap");
        arena.counters.comparison();
        if v < arena.nodes[min.0].key {
            self.min = Some(id);
        }
        Ok(())
    }

    /// Combines two heaps over the same arena in O(1). Node ids of both
    /// inputs remain valid against the result.
    pub fn meld<K: Ord + Copy>(arena: &mut FibArena<K>, a: FibHeap, b: FibHeap) -> FibHeap {
        match (a.min, b.min) {
            (None, _) => b,
            (_, None) => a,
            (Some(am), Some(bm)) => {
                // Splice the two root rings together.
                arena.counters.traversals_n(4);
                let ar = arena.nodes[am.0].right;
                let br = arena.nodes[bm.0].right;
                arena.nodes[am.0].right = br;
                arena.nodes[br.0].left = am;
                arena.nodes[bm.0].right = ar;
                arena.nodes[ar.0].left = bm;
                arena.counters.comparison();
                let min = if arena.nodes[bm.0].key < arena.nodes[am.0].key { bm } else { am };
                FibHeap { min: Some(min), size: a.size + b.size }
            }
        }
    }

    fn add_root<K: Ord + Copy>(&mut self, arena: &mut FibArena<K>, id: FibNodeId) {
        match self.min {
            None => self.min = Some(id),
            Some(min) => {
                arena.splice(min, id);
                arena.counters.comparison();
                if arena.nodes[id.0].key < arena.nodes[min.0].key {
                    self.min = Some(id);
                }
            }
        }
    }

    fn cut<K: Ord + Copy>(&mut self, arena: &mut FibArena<K>, id: FibNodeId, parent: FibNodeId) {
        let next = arena.nodes[id.0].right;
        if arena.nodes[parent.0].child == Some(id) {
            arena.nodes[parent.0].child = if next == id { None } else { Some(next) };
        }
        arena.unlink(id);
        arena.nodes[parent.0].degree -= 1;
        arena.nodes[id.0].parent = None;
        arena.nodes[id.0].marked = false;
        let min = self.min.expect("cut on empty heap");
        arena.splice(min, id);
    }

    fn cascading_cut<K: Ord + Copy>(&mut self, arena: &mut FibArena<K>, mut id: FibNodeId) {
        while let Some(parent) = arena.nodes[id.0].parent {
            arena.counters.traversal();
            if !arena.nodes[id.0].marked {
                arena.nodes[id.0].marked = true;
                return;
            }
            self.cut(arena, id, parent);
            id = parent;
        }
    }

    fn consolidate<K: Ord + Copy>(&mut self, arena: &mut FibArena<K>, start: FibNodeId) {
        // Collect the current roots; the ring is edited while linking.
        let mut roots = Vec::new();
        let mut cur = start;
        loop {
            arena.counters.traversal();
            roots.push(cur);
            cur = arena.nodes[cur.0].right;
            if cur == start {
                break;
            }
        }

        let cap = max_degree_bound(self.size) + 1;
        let mut by_degree: Vec<Option<FibNodeId>> = vec![None; cap];
        for mut root in roots {
            let mut degree = arena.nodes[root.0].degree as usize;
            while let Some(other) = by_degree[degree] {
                by_degree[degree] = None;
                arena.counters.comparison();
                let (winner, loser) = if arena.nodes[other.0].key < arena.nodes[root.0].key {
                    (other, root)
                } else {
                    (root, other)
                };
                // Make loser a child of winner.
                arena.unlink(loser);
                arena.nodes[loser.0].parent = Some(winner);
                arena.nodes[loser.0].marked = false;
                match arena.nodes[winner.0].child {
                    None => arena.nodes[winner.0].child = Some(loser),
                    Some(c) => arena.splice(c, loser),
                }
                arena.nodes[winner.0].degree += 1;
                root = winner;
                degree += 1;
                if degree >= by_degree.len() {
                    by_degree.resize(degree + 1, None);
                }
            }
            by_degree[degree] = Some(root);
        }

        // Recompute min over the surviving roots.
        self.min = None;
        for id in by_degree.into_iter().flatten() {
            match self.min {
                None => self.min = Some(id),
                Some(min) => {
                    arena.counters.comparison();
                    if arena.nodes[id.0].key < arena.nodes[min.0].key {
                        self.min = Some(id);
                    }
                }
            }
        }
    }

    /// All `(key, item, id)` triples currently in this heap, by structure walk.
    pub fn collect<K: Ord + Copy>(&self, arena: &FibArena<K>) -> Vec<(K, u64, FibNodeId)> {
        let mut out = Vec::with_capacity(self.size);
        if let Some(min) = self.min {
            let mut stack = ring_members(arena, min);
            while let Some(id) = stack.pop() {
                out.push((arena.nodes[id.0].key, arena.nodes[id.0].item, id));
                if let Some(child) = arena.nodes[id.0].child {
                    stack.extend(ring_members(arena, child));
                }
            }
        }
        out
    }

    /// Structural self-check used by tests and the auditor: heap order,
    /// degree counts, unmarked roots, size, min pointer, root degree bound.
    pub fn validate<K: Ord + Copy>(&self, arena: &FibArena<K>) -> Result<(), String> {
        let Some(min) = self.min else {
            return if self.size == 0 { Ok(()) } else { Err("nonempty heap without min".into()) };
        };
        let mut seen = 0usize;
        let bound = max_degree_bound(self.size) as u32;
        for root in ring_members(arena, min) {
            if arena.nodes[root.0].parent.is_some() {
                return Err("root with parent".into());
            }
            if arena.nodes[root.0].marked {
                return Err("marked root".into());
            }
            if arena.nodes[root.0].degree > bound {
                return Err(format!(
                    "root degree {} exceeds bound {} at size {}",
                    arena.nodes[root.0].degree, bound, self.size
                ));
            }
            if arena.nodes[root.0].key < arena.nodes[min.0].key {
                return Err("min pointer is not minimal".into());
            }
            seen += self.validate_subtree(arena, root)?;
        }
        if seen != self.size {
            return Err(format!("size {} but {} reachable nodes", self.size, seen));
        }
        Ok(())
    }

    fn validate_subtree<K: Ord + Copy>(
        &self,
        arena: &FibArena<K>,
        id: FibNodeId,
    ) -> Result<usize, String> {
        let mut count = 1;
        let mut children = 0;
        if let Some(child) = arena.nodes[id.0].child {
            for c in ring_members(arena, child) {
                if arena.nodes[c.0].parent != Some(id) {
                    return Err("child with wrong parent pointer".into());
                }
                if arena.nodes[c.0].key < arena.nodes[id.0].key {
                    return Err("heap order violated".into());
                }
                children += 1;
                count += self.validate_subtree(arena, c)?;
            }
        }
        if children != arena.nodes[id.0].degree {
            return Err("degree does not match child count".into());
        }
        Ok(count)
    }
}

impl Default for FibHeap {
    fn default() -> Self {
        Self::new()
    }
}

fn ring_members<K>(arena: &FibArena<K>, start: FibNodeId) -> Vec<FibNodeId> {
    let mut out = vec![start];
    let mut cur = arena.nodes[start.0].right;
    while cur != start {
        out.push(cur);
        cur = arena.nodes[cur.0].right;
    }
    out
}

/// ⌊log_φ(size)⌋ + 1, the textbook cap on node degree.
pub fn max_degree_bound(size: usize) -> usize {
    if size <= 1 {
        return 1;
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    (size as f64).ln().div_euclid(phi.ln()) as usize + 1
}

/// A Fibonacci heap that owns its arena, for standalone use.
pub struct OwnedFibHeap<K: Ord + Copy> {
    arena: FibArena<K>,
    heap: FibHeap,
}

impl<K: Ord + Copy> OwnedFibHeap<K> {
    pub fn new(counters: Rc<OpCounters>) -> Self {
        OwnedFibHeap { arena: FibArena::new(counters), heap: FibHeap::new() }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn push(&mut self, key: K, item: u64) -> FibNodeId {
        self.heap.push(&mut self.arena, key, item)
    }

    pub fn peek(&self) -> Result<K, FibError> {
        self.heap.peek(&self.arena)
    }

    pub fn pop(&mut self) -> Result<(K, u64), FibError> {
        self.heap.pop(&mut self.arena).map(|(k, item, _)| (k, item))
    }

    pub fn decrease_key(&mut self, id: FibNodeId, v: K) -> Result<(), FibError> {
        self.heap.decrease_key(&mut self.arena, id, v)
    }
}
