//! Brute-force reference heap.
//!
//! Keeps the live elements in an ordered multiset keyed by `(key, push
//! sequence number)`; pop always returns the exact minimum. Trace replay
//! compares the real heap against this, observable by observable.

use std::collections::{BTreeSet, HashMap};

use crate::workset::{ElementHandle, WsError};

pub struct OracleHeap<K: Ord + Copy> {
    set: BTreeSet<(K, u64)>,
    alive: HashMap<u64, K>,
    push_counter: u64,
}

impl<K: Ord + Copy> Default for OracleHeap<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Copy> OracleHeap<K> {
    pub fn new() -> Self {
        OracleHeap { set: BTreeSet::new(), alive: HashMap::new(), push_counter: 0 }
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn total_pushes(&self) -> u64 {
        self.push_counter
    }

    pub fn push(&mut self, key: K) -> ElementHandle {
        self.push_counter += 1;
        self.set.insert((key, self.push_counter));
        self.alive.insert(self.push_counter, key);
        ElementHandle(self.push_counter)
    }

    pub fn peek(&self) -> Option<K> {
        self.set.iter().next().map(|&(k, _)| k)
    }

    pub fn pop(&mut self) -> Result<(K, ElementHandle), WsError> {
        let &(key, j) = self.set.iter().next().ok_or(WsError::Empty)?;
        self.set.remove(&(key, j));
        self.alive.remove(&j);
        Ok((key, ElementHandle(j)))
    }

    /// Removes a specific live element, whatever its key. Lets a driver keep
    /// this oracle aligned with a real heap that broke an equal-key pop tie
    /// differently.
    pub fn remove(&mut self, h: ElementHandle) -> Result<K, WsError> {
        if h.0 == 0 || h.0 > self.push_counter {
            return Err(WsError::UnknownHandle);
        }
        let key = *self.alive.get(&h.0).ok_or(WsError::Dead)?;
        self.set.remove(&(key, h.0));
        self.alive.remove(&h.0);
        Ok(key)
    }

    pub fn decrease_key(&mut self, h: ElementHandle, v: K) -> Result<(), WsError> {
        if h.0 == 0 || h.0 > self.push_counter {
            return Err(WsError::UnknownHandle);
        }
        let cur = *self.alive.get(&h.0).ok_or(WsError::Dead)?;
        if v > cur {
            return Err(WsError::KeyIncrease);
        }
        self.set.remove(&(cur, h.0));
        self.set.insert((v, h.0));
        self.alive.insert(h.0, v);
        Ok(())
    }

    pub fn key_of(&self, h: ElementHandle) -> Option<K> {
        self.alive.get(&h.0).copied()
    }

    /// Age of a live element, recomputed from first principles.
    pub fn age(&self, h: ElementHandle) -> Option<u64> {
        self.alive.contains_key(&h.0).then(|| self.push_counter - h.0 + 1)
    }

    pub fn live_handles(&self) -> Vec<ElementHandle> {
        let mut v: Vec<u64> = self.alive.keys().copied().collect();
        v.sort_unstable();
        v.into_iter().map(ElementHandle).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_pop_minimum() {
        let mut o: OracleHeap<i64> = OracleHeap::new();
        o.push(4);
        o.push(2);
        assert_eq!(o.pop().unwrap().0, 2);
        assert_eq!(o.pop().unwrap().0, 4);
        assert_eq!(o.pop().unwrap_err(), WsError::Empty);
    }

    #[test]
    fn deckey_then_pop_returns_new_key() {
        let mut o: OracleHeap<i64> = OracleHeap::new();
        let a = o.push(10);
        o.push(5);
        o.decrease_key(a, 1).unwrap();
        assert_eq!(o.pop().unwrap(), (1, a));
    }

    #[test]
    fn errors_mirror_the_real_heap() {
        let mut o: OracleHeap<i64> = OracleHeap::new();
        let a = o.push(3);
        assert_eq!(o.decrease_key(a, 9).unwrap_err(), WsError::KeyIncrease);
        o.pop().unwrap();
        assert_eq!(o.decrease_key(a, 1).unwrap_err(), WsError::Dead);
        assert_eq!(o.decrease_key(ElementHandle(42), 1).unwrap_err(), WsError::UnknownHandle);
    }
}
