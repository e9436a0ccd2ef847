//! The working-set heap.
//!
//! Live elements are partitioned into buckets `H_0, H_1, ...` by age. Bucket
//! i is either vacant or holds a Fibonacci sub-heap of capacity `2^⌊i/2⌋`;
//! only odd buckets may be vacant between operations. The minimum of each
//! bucket is mirrored at position i+1 of an [`IndexTree`], so `peek` is O(1)
//! and `pop` extracts from the bucket the index structure points at. A
//! union-find structure maps every live element to its bucket, which is what
//! makes `decrease_key` inverse-Ackermann: melds translate to `link`,
//! lookups to `find`.
//!
//! `push` frees bucket 0 with the meld cascade: an occupied even bucket
//! either swaps into its vacant odd neighbour, or both neighbours meld
//! upward into the recursively-vacated bucket two slots higher — a binary
//! counter in disguise, amortizing to O(1). `decrease_key` starts by
//! rebuilding the whole structure from scratch whenever the directory has
//! grown past the live count, which keeps bucket indices at O(log n).

use std::rc::Rc;

use thiserror::Error;

use crate::counters::{OpCounters, OpTag};
use crate::dsu::{DisjointSets, UfId};
use crate::fib::{FibArena, FibError, FibHeap, FibNodeId};
use crate::index_tree::IndexTree;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WsError {
    #[error("heap is empty")]
    Empty,
    #[error("new key is larger than the current key")]
    KeyIncrease,
    #[error("element was already popped")]
    Dead,
    #[error("no element with this handle was ever pushed")]
    UnknownHandle,
}

/// Stable identity of a pushed element: its 1-based push sequence number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementHandle(pub u64);

struct ElementSlot {
    fib: FibNodeId,
    dsu: UfId,
    alive: bool,
}

#[derive(Clone, Copy)]
enum Bucket {
    Vacant,
    Occupied { heap: FibHeap, rep: UfId },
}

/// Bucket index and element age observed by the most recent `pop`.
#[derive(Clone, Copy, Debug)]
pub struct PopStats {
    pub bucket: usize,
    pub age: u64,
}

pub struct WorkSetHeap<K: Ord + Copy> {
    counters: Rc<OpCounters>,
    fib: FibArena<K>,
    dsu: DisjointSets,
    index: IndexTree<K>,
    buckets: Vec<Bucket>,
    elems: Vec<ElementSlot>,
    push_counter: u64,
    live: usize,
    last_pop: Option<PopStats>,
}

impl<K: Ord + Copy> Default for WorkSetHeap<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Copy> WorkSetHeap<K> {
    pub fn new() -> Self {
        Self::with_counters(OpCounters::new())
    }

    pub fn with_counters(counters: Rc<OpCounters>) -> Self {
        WorkSetHeap {
            fib: FibArena::new(Rc::clone(&counters)),
            dsu: DisjointSets::new(Rc::clone(&counters)),
            index: IndexTree::new(Rc::clone(&counters)),
            counters,
            buckets: Vec::new(),
            elems: Vec::new(),
            push_counter: 0,
            live: 0,
            last_pop: None,
        }
    }

    pub fn counters(&self) -> &Rc<OpCounters> {
        &self.counters
    }

    /// Number of live elements.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Total pushes over the heap's lifetime.
    pub fn total_pushes(&self) -> u64 {
        self.push_counter
    }

    /// Directory length m (including vacant buckets).
    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    /// Age of a live element: the number of elements pushed after it,
    /// itself included.
    pub fn age(&self, h: ElementHandle) -> Option<u64> {
        let slot = self.slot(h).ok()?;
        slot.alive.then(|| self.push_counter - h.0 + 1)
    }

    pub fn key_of(&self, h: ElementHandle) -> Option<K> {
        let slot = self.slot(h).ok()?;
        slot.alive.then(|| self.fib.key(slot.fib))
    }

    pub fn last_pop_stats(&self) -> Option<PopStats> {
        self.last_pop
    }

    pub fn push(&mut self, key: K) -> ElementHandle {
        self.counters.begin_op(OpTag::Push);
        let j = self.push_counter + 1;
        self.push_counter = j;
        self.live += 1;
        self.place(j, key);
        ElementHandle(j)
    }

    pub fn peek(&self) -> Option<K> {
        self.counters.begin_op(OpTag::Peek);
        let pos = self.index.peek()?;
        self.index.value(pos)
    }

    pub fn pop(&mut self) -> Result<(K, ElementHandle), WsError> {
        self.counters.begin_op(OpTag::Pop);
        let pos = self.index.peek().ok_or(WsError::Empty)?;
        let i = pos - 1;
        let Bucket::Occupied { heap, rep } = self.buckets[i] else {
            unreachable!("index minimum points at a vacant bucket")
        };
        let mut heap = heap;
        let (key, j, _) = heap.pop(&mut self.fib).expect("index minimum points at an empty bucket");
        self.buckets[i] = Bucket::Occupied { heap, rep };
        // The bucket stays occupied even if it just became empty.
        self.update_index(i);
        self.elems[j as usize - 1].alive = false;
        self.live -= 1;
        self.last_pop = Some(PopStats { bucket: i, age: self.push_counter - j + 1 });
        Ok((key, ElementHandle(j)))
    }

    pub fn decrease_key(&mut self, h: ElementHandle, v: K) -> Result<(), WsError> {
        self.counters.begin_op(OpTag::DecreaseKey);
        if self.buckets.len() > self.live {
            self.counters.set_tag(OpTag::Rebuild);
            self.rebuild();
            self.counters.set_tag(OpTag::DecreaseKey);
        }
        let slot = self.slot(h)?;
        if !slot.alive {
            return Err(WsError::Dead);
        }
        let (fib_id, dsu_id) = (slot.fib, slot.dsu);
        let rep = self.dsu.find(dsu_id);
        let i = self.dsu.payload(rep).expect("live element routed to an occupied bucket");
        let Bucket::Occupied { heap, rep: r } = self.buckets[i] else {
            unreachable!("payload points at a vacant bucket")
        };
        let mut heap = heap;
        heap.decrease_key(&mut self.fib, fib_id, v).map_err(|e| match e {
            FibError::KeyIncrease => WsError::KeyIncrease,
            FibError::Empty => unreachable!(),
        })?;
        self.buckets[i] = Bucket::Occupied { heap, rep: r };
        let y = heap.peek(&self.fib).expect("bucket holding the element is nonempty");
        self.index
            .decrease_key(i + 1, y)
            .expect("bucket minimum can only decrease");
        Ok(())
    }

    fn slot(&self, h: ElementHandle) -> Result<&ElementSlot, WsError> {
        if h.0 == 0 {
            return Err(WsError::UnknownHandle);
        }
        self.elems.get(h.0 as usize - 1).ok_or(WsError::UnknownHandle)
    }

    /// Inserts element `j` with `key` into bucket 0, vacating it first.
    fn place(&mut self, j: u64, key: K) {
        self.ensure_vacant(0);
        let mut heap = FibHeap::new();
        let fib_id = heap.push(&mut self.fib, key, j);
        let rep = self.dsu.make_set();
        self.dsu.set_payload(rep, Some(0));
        self.ensure_bucket_exists(0);
        self.buckets[0] = Bucket::Occupied { heap, rep };
        self.update_index(0);
        let slot = ElementSlot { fib: fib_id, dsu: rep, alive: true };
        if self.elems.len() < j as usize {
            self.elems.push(slot);
        } else {
            self.elems[j as usize - 1] = slot;
        }
    }

    /// The meld cascade: makes bucket i (even) vacant.
    fn ensure_vacant(&mut self, i: usize) {
        if i >= self.buckets.len() || matches!(self.buckets[i], Bucket::Vacant) {
            return;
        }
        let odd_vacant =
            i + 1 >= self.buckets.len() || matches!(self.buckets[i + 1], Bucket::Vacant);
        if odd_vacant {
            // Swap the occupied even bucket into its odd neighbour.
            self.ensure_bucket_exists(i + 1);
            let b = std::mem::replace(&mut self.buckets[i], Bucket::Vacant);
            if let Bucket::Occupied { rep, .. } = &b {
                self.dsu.set_payload(*rep, Some(i + 1));
            }
            self.buckets[i + 1] = b;
            self.update_index(i);
            self.update_index(i + 1);
        } else {
            // Both occupied: vacate i+2 recursively and meld the pair into it.
            self.ensure_vacant(i + 2);
            self.ensure_bucket_exists(i + 2);
            let a = std::mem::replace(&mut self.buckets[i], Bucket::Vacant);
            let b = std::mem::replace(&mut self.buckets[i + 1], Bucket::Vacant);
            let (Bucket::Occupied { heap: ha, rep: ra }, Bucket::Occupied { heap: hb, rep: rb }) =
                (a, b)
            else {
                unreachable!()
            };
            let heap = FibHeap::meld(&mut self.fib, ha, hb);
            let rep = self.dsu.link(ra, rb).expect("buckets hold distinct sets");
            self.dsu.set_payload(rep, Some(i + 2));
            self.buckets[i + 2] = Bucket::Occupied { heap, rep };
            self.update_index(i);
            self.update_index(i + 1);
            self.update_index(i + 2);
        }
    }

    fn ensure_bucket_exists(&mut self, i: usize) {
        while self.buckets.len() <= i {
            self.buckets.push(Bucket::Vacant);
            self.index.push(None);
        }
    }

    /// `Update(p_i)`: refreshes A[i] from the bucket's current minimum.
    fn update_index(&mut self, i: usize) {
        let v = match &self.buckets[i] {
            Bucket::Occupied { heap, .. } if !heap.is_empty() => {
                Some(heap.peek(&self.fib).unwrap())
            }
            _ => None,
        };
        self.index.change_key(i + 1, v);
    }

    /// Tears the structure down and re-pushes all survivors in their
    /// original push order, so relative ages are preserved.
    fn rebuild(&mut self) {
        let survivors: Vec<(u64, K)> = self
            .elems
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(idx, s)| (idx as u64 + 1, self.fib.key(s.fib)))
            .collect();
        self.fib = FibArena::new(Rc::clone(&self.counters));
        self.dsu = DisjointSets::new(Rc::clone(&self.counters));
        self.index = IndexTree::new(Rc::clone(&self.counters));
        self.buckets.clear();
        for (j, key) in survivors {
            self.place(j, key);
        }
    }

    // ----- inspection hooks for the auditor and tests -----

    pub fn is_occupied(&self, i: usize) -> bool {
        matches!(self.buckets[i], Bucket::Occupied { .. })
    }

    /// Live element count of bucket i (0 for vacant buckets).
    pub fn bucket_len(&self, i: usize) -> usize {
        match &self.buckets[i] {
            Bucket::Occupied { heap, .. } => heap.len(),
            Bucket::Vacant => 0,
        }
    }

    /// `(key, push sequence number)` of every element in bucket i.
    pub fn bucket_items(&self, i: usize) -> Vec<(K, u64)> {
        match &self.buckets[i] {
            Bucket::Occupied { heap, .. } => {
                heap.collect(&self.fib).into_iter().map(|(k, j, _)| (k, j)).collect()
            }
            Bucket::Vacant => Vec::new(),
        }
    }

    /// A[i+1] as stored in the index structure.
    pub fn index_value(&self, i: usize) -> Option<K> {
        self.index.value(i + 1)
    }

    /// Bucket that union-find currently routes this element to.
    /// Read-only (no path compression), for audits.
    pub fn routed_bucket(&self, h: ElementHandle) -> Option<usize> {
        let slot = self.slot(h).ok()?;
        if !slot.alive {
            return None;
        }
        self.dsu.payload(self.dsu.find_readonly(slot.dsu))
    }

    pub fn validate_bucket_structure(&self, i: usize) -> Result<(), String> {
        match &self.buckets[i] {
            Bucket::Occupied { heap, .. } => heap.validate(&self.fib),
            Bucket::Vacant => Ok(()),
        }
    }

    pub fn index(&self) -> &IndexTree<K> {
        &self.index
    }

    /// Fault injection for auditor tests: overwrites A[i] directly.
    #[doc(hidden)]
    pub fn corrupt_index_value(&mut self, i: usize, v: Option<K>) {
        self.index.change_key(i + 1, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Heap = WorkSetHeap<i64>;

    #[test]
    fn empty_heap() {
        let mut h = Heap::new();
        assert_eq!(h.len(), 0);
        assert_eq!(h.peek(), None);
        assert_eq!(h.pop().unwrap_err(), WsError::Empty);
        h.push(5);
        assert_eq!(h.peek(), Some(5));
    }

    #[test]
    fn three_pushes_land_in_expected_buckets() {
        let mut h = Heap::new();
        let x1 = h.push(10);
        let x2 = h.push(20);
        let x3 = h.push(30);
        // Hand-simulated cascade: H0 = {x3}, H1 vacant, H2 = {x1, x2}.
        assert_eq!(h.bucket_count(), 3);
        let b0: Vec<u64> = h.bucket_items(0).iter().map(|&(_, j)| j).collect();
        assert_eq!(b0, vec![x3.0]);
        assert!(!h.is_occupied(1));
        let mut b2: Vec<u64> = h.bucket_items(2).iter().map(|&(_, j)| j).collect();
        b2.sort_unstable();
        assert_eq!(b2, vec![x1.0, x2.0]);
    }

    #[test]
    fn push_then_cascade_layout_for_two() {
        let mut h = Heap::new();
        h.push(3);
        h.push(1);
        assert_eq!(h.peek(), Some(1));
        // H0 = {1}, H1 = {3}.
        assert_eq!(h.bucket_items(0).len(), 1);
        assert_eq!(h.bucket_items(0)[0].0, 1);
        assert_eq!(h.bucket_items(1)[0].0, 3);
    }

    #[test]
    fn pop_basics() {
        let mut h = Heap::new();
        for k in [3, 1, 2] {
            h.push(k);
        }
        assert_eq!(h.pop().unwrap().0, 1);
        assert_eq!(h.pop().unwrap().0, 2);
        assert_eq!(h.pop().unwrap().0, 3);
        assert_eq!(h.pop().unwrap_err(), WsError::Empty);
    }

    #[test]
    fn drain_is_sorted() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let keys: Vec<i64> = (0..256).map(|_| rng.gen_range(-10_000..10_000)).collect();
        let mut h = Heap::new();
        for &k in &keys {
            h.push(k);
        }
        let mut expect = keys.clone();
        expect.sort();
        let got: Vec<i64> = (0..keys.len()).map(|_| h.pop().unwrap().0).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn decrease_key_basics() {
        let mut h = Heap::new();
        h.push(5);
        let e = h.push(9);
        h.decrease_key(e, 1).unwrap();
        assert_eq!(h.peek(), Some(1));
        // Decreasing the minimum further keeps it the minimum.
        h.decrease_key(e, -5).unwrap();
        assert_eq!(h.peek(), Some(-5));
        assert_eq!(h.decrease_key(e, 100).unwrap_err(), WsError::KeyIncrease);
        assert_eq!(h.pop().unwrap().0, -5);
        assert_eq!(h.decrease_key(e, -10).unwrap_err(), WsError::Dead);
        assert_eq!(h.decrease_key(ElementHandle(99), 0).unwrap_err(), WsError::UnknownHandle);
    }

    #[test]
    fn peek_reflects_decrease() {
        let mut h = Heap::new();
        h.push(5);
        h.push(3);
        let e = h.push(7);
        assert_eq!(h.peek(), Some(3));
        h.decrease_key(e, 1).unwrap();
        assert_eq!(h.peek(), Some(1));
    }

    #[test]
    fn rebuild_shrinks_directory_and_keeps_handles() {
        let mut h = Heap::new();
        let handles: Vec<ElementHandle> = (0..64).map(|k| h.push(k as i64 * 10)).collect();
        let m_before = h.bucket_count();
        for _ in 0..63 {
            h.pop().unwrap();
        }
        assert_eq!(h.len(), 1);
        assert!(m_before > 4);
        let survivor = handles[63];
        assert_eq!(h.key_of(survivor), Some(630));
        // First decrease-key notices m > n and rebuilds.
        h.decrease_key(survivor, 7).unwrap();
        assert!(h.bucket_count() <= 4, "m = {}", h.bucket_count());
        assert_eq!(h.peek(), Some(7));
        // Handle still addresses the same element after the rebuild.
        h.decrease_key(survivor, 3).unwrap();
        assert_eq!(h.pop().unwrap(), (3, survivor));
    }

    #[test]
    fn rebuild_preserves_peek_and_ages() {
        let mut h = Heap::new();
        let a = h.push(1000);
        let b = h.push(999);
        for k in 0..30 {
            h.push(k);
        }
        for _ in 0..20 {
            h.pop().unwrap();
        }
        let (age_a, age_b) = (h.age(a), h.age(b));
        let peek = h.peek();
        h.decrease_key(a, 1000).unwrap(); // no-op decrease, may trigger rebuild
        assert_eq!(h.peek(), peek);
        assert_eq!(h.age(a), age_a);
        assert_eq!(h.age(b), age_b);
    }

    #[test]
    fn ages_count_later_pushes() {
        let mut h = Heap::new();
        let a = h.push(1);
        assert_eq!(h.age(a), Some(1));
        let b = h.push(2);
        assert_eq!(h.age(a), Some(2));
        assert_eq!(h.age(b), Some(1));
        h.pop().unwrap();
        assert_eq!(h.age(a), None);
    }

    #[test]
    fn every_op_kind_is_counted() {
        let h_counters = OpCounters::new();
        let mut h = Heap::with_counters(Rc::clone(&h_counters));
        h.push(4);
        assert!(h_counters.total_for(OpTag::Push) > 0);
        h.peek();
        assert!(h_counters.total_for(OpTag::Peek) > 0);
        let e = h.push(9);
        h.decrease_key(e, 2).unwrap();
        assert!(h_counters.total_for(OpTag::DecreaseKey) > 0);
        h.pop().unwrap();
        assert!(h_counters.total_for(OpTag::Pop) > 0);
        h.pop().unwrap();
        // Force a rebuild: directory longer than the live count.
        let handles: Vec<ElementHandle> = (0..8).map(|k| h.push(k)).collect();
        for _ in 0..7 {
            h.pop().unwrap();
        }
        assert!(h.bucket_count() > h.len());
        h.decrease_key(handles[7], 6).unwrap();
        assert!(h_counters.total_for(OpTag::Rebuild) > 0);
    }
}
