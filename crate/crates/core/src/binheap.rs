//! Indexed binary min-heap with decrease-key, the baseline used by the
//! shortest-path driver and the benchmarks.

use std::rc::Rc;

use crate::counters::OpCounters;

/// Binary heap over `(key, item)` pairs where `item` is a dense external id
/// (a vertex number); `pos[item]` tracks the item's slot so decrease-key is
/// an O(log n) sift-up.
pub struct BinHeap<K: Ord + Copy> {
    heap: Vec<(K, usize)>,
    pos: Vec<Option<usize>>,
    counters: Rc<OpCounters>,
}

impl<K: Ord + Copy> BinHeap<K> {
    pub fn new(n_items: usize, counters: Rc<OpCounters>) -> Self {
        BinHeap { heap: Vec::new(), pos: vec![None; n_items], counters }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.pos[item].is_some()
    }

    pub fn push(&mut self, key: K, item: usize) {
        debug_assert!(self.pos[item].is_none());
        self.counters.allocation();
        let slot = self.heap.len();
        self.heap.push((key, item));
        self.pos[item] = Some(slot);
        self.sift_up(slot);
    }

    pub fn peek(&self) -> Option<(K, usize)> {
        self.heap.first().copied()
    }

    pub fn pop(&mut self) -> Option<(K, usize)> {
        if self.heap.is_empty() {
            return None;
        }
        let last = self.heap.len() - 1;
        self.heap.swap(0, last);
        let (key, item) = self.heap.pop().unwrap();
        self.pos[item] = None;
        if !self.heap.is_empty() {
            self.pos[self.heap[0].1] = Some(0);
            self.sift_down(0);
        }
        Some((key, item))
    }

    /// Lowers `item`'s key; panics if the item is absent or the key rises.
    pub fn decrease_key(&mut self, item: usize, key: K) {
        let slot = self.pos[item].expect("decrease_key on absent item");
        assert!(key <= self.heap[slot].0, "decrease_key raised a key");
        self.heap[slot].0 = key;
        self.sift_up(slot);
    }

    fn sift_up(&mut self, mut slot: usize) {
        while slot > 0 {
            let parent = (slot - 1) / 2;
            self.counters.comparison();
            self.counters.traversal();
            if self.heap[slot].0 >= self.heap[parent].0 {
                break;
            }
            self.heap.swap(slot, parent);
            self.pos[self.heap[slot].1] = Some(slot);
            self.pos[self.heap[parent].1] = Some(parent);
            slot = parent;
        }
    }

    fn sift_down(&mut self, mut slot: usize) {
        loop {
            let mut best = slot;
            for child in [2 * slot + 1, 2 * slot + 2] {
                if child < self.heap.len() {
                    self.counters.comparison();
                    self.counters.traversal();
                    if self.heap[child].0 < self.heap[best].0 {
                        best = child;
                    }
                }
            }
            if best == slot {
                break;
            }
            self.heap.swap(slot, best);
            self.pos[self.heap[slot].1] = Some(slot);
            self.pos[self.heap[best].1] = Some(best);
            slot = best;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    #[test]
    fn drains_sorted() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut keys: Vec<i64> = (0..200).map(|_| rng.gen_range(-500..500)).collect();
        let mut h = BinHeap::new(keys.len(), OpCounters::new());
        for (i, &k) in keys.iter().enumerate() {
            h.push(k, i);
        }
        let mut out = Vec::new();
        while let Some((k, _)) = h.pop() {
            out.push(k);
        }
        keys.sort();
        assert_eq!(out, keys);
    }

    #[test]
    fn decrease_key_moves_item_to_front() {
        let mut h = BinHeap::new(3, OpCounters::new());
        h.push(10, 0);
        h.push(5, 1);
        h.push(8, 2);
        h.decrease_key(0, 1);
        assert_eq!(h.pop(), Some((1, 0)));
        assert_eq!(h.pop(), Some((5, 1)));
        assert!(h.contains(2));
    }

    #[test]
    fn positions_track_membership() {
        let mut h = BinHeap::new(4, OpCounters::new());
        h.push(3, 2);
        assert!(h.contains(2));
        assert!(!h.contains(0));
        h.pop();
        assert!(!h.contains(2));
    }
}
