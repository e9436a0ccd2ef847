//! Union-find with union by rank and full path compression.
//!
//! Each set's representative carries an optional payload slot; the workset
//! heap stores the bucket index there so a `find` on any element resolves to
//! its bucket. `link` returns the winning representative and the caller
//! re-attaches the payload.

use std::rc::Rc;

use thiserror::Error;

use crate::counters::OpCounters;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DsuError {
    #[error("both arguments are in the same set")]
    SameSet,
    #[error("argument is not a set representative")]
    NotRepresentative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UfId(usize);

struct UfNode {
    parent: usize,
    rank: u32,
    payload: Option<usize>,
}

pub struct DisjointSets {
    nodes: Vec<UfNode>,
    counters: Rc<OpCounters>,
}

impl DisjointSets {
    pub fn new(counters: Rc<OpCounters>) -> Self {
        DisjointSets { nodes: Vec::new(), counters }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn make_set(&mut self) -> UfId {
        self.counters.allocation();
        let id = self.nodes.len();
        self.nodes.push(UfNode { parent: id, rank: 0, payload: None });
        UfId(id)
    }

    pub fn find(&mut self, x: UfId) -> UfId {
        // First pass: locate the representative.
        let mut root = x.0;
        while self.nodes[root].parent != root {
            self.counters.traversal();
            root = self.nodes[root].parent;
        }
        // Second pass: full path compression.
        let mut cur = x.0;
        while self.nodes[cur].parent != cur {
            self.counters.traversal();
            let next = self.nodes[cur].parent;
            self.nodes[cur].parent = root;
            cur = next;
        }
        UfId(root)
    }

    /// Union by rank of two distinct representatives; returns the winner.
    /// The loser's payload is cleared, the winner keeps its own; the caller
    /// is expected to set the merged payload afterwards.
    pub fn link(&mut self, ra: UfId, rb: UfId) -> Result<UfId, DsuError> {
        if self.nodes[ra.0].parent != ra.0 || self.nodes[rb.0].parent != rb.0 {
            return Err(DsuError::NotRepresentative);
        }
        if ra == rb {
            return Err(DsuError::SameSet);
        }
        self.counters.comparison();
        let (winner, loser) = if self.nodes[ra.0].rank >= self.nodes[rb.0].rank {
            (ra.0, rb.0)
        } else {
            (rb.0, ra.0)
        };
        self.counters.traversal();
        self.nodes[loser].parent = winner;
        self.nodes[loser].payload = None;
        if self.nodes[winner].rank == self.nodes[loser].rank {
            self.nodes[winner].rank += 1;
        }
        Ok(UfId(winner))
    }

    pub fn payload(&self, rep: UfId) -> Option<usize> {
        self.nodes[rep.0].payload
    }

    pub fn set_payload(&mut self, rep: UfId, payload: Option<usize>) {
        self.nodes[rep.0].payload = payload;
    }

    pub fn rank(&self, x: UfId) -> u32 {
        self.nodes[x.0].rank
    }

    /// Representative lookup without path compression, for read-only audits.
    pub fn find_readonly(&self, x: UfId) -> UfId {
        let mut root = x.0;
        while self.nodes[root].parent != root {
            root = self.nodes[root].parent;
        }
        UfId(root)
    }

    pub fn parent_of(&self, x: UfId) -> UfId {
        UfId(self.nodes[x.0].parent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counters::OpCounters;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn sets() -> DisjointSets {
        DisjointSets::new(OpCounters::new())
    }

    #[test]
    fn make_set_singletons() {
        let mut s = sets();
        let a = s.make_set();
        assert_eq!(s.find(a), a);
        let b = s.make_set();
        assert_ne!(s.find(a), s.find(b));
    }

    #[test]
    fn many_distinct_representatives() {
        let mut s = sets();
        let ids: Vec<UfId> = (0..100_000).map(|_| s.make_set()).collect();
        let mut reps: Vec<UfId> = ids.iter().map(|&i| s.find(i)).collect();
        reps.dedup();
        assert_eq!(reps.len(), 100_000);
    }

    #[test]
    fn link_merges_and_rank_rule() {
        let mut s = sets();
        let a = s.make_set();
        let b = s.make_set();
        let w = s.link(a, b).unwrap();
        assert_eq!(s.find(a), s.find(b));
        assert_eq!(s.rank(w), 1);

        let x = s.make_set();
        let r = s.find(x);
        assert_eq!(s.link(r, r).unwrap_err(), DsuError::SameSet);
    }

    #[test]
    fn link_rejects_non_representatives() {
        let mut s = sets();
        let a = s.make_set();
        let b = s.make_set();
        let w = s.link(a, b).unwrap();
        let loser = if w == a { b } else { a };
        let c = s.make_set();
        assert_eq!(s.link(loser, c).unwrap_err(), DsuError::NotRepresentative);
    }

    #[test]
    fn compression_is_visible() {
        let mut s = sets();
        let a = s.make_set();
        let b = s.make_set();
        let c = s.make_set();
        let d = s.make_set();
        // Two rank-1 trees merged give a chain of depth 2 under the root.
        let r1 = s.link(a, b).unwrap();
        let r2 = s.link(c, d).unwrap();
        let root = s.link(r1, r2).unwrap();
        let deep = if s.parent_of(d) == root { b } else { d };
        assert_ne!(s.parent_of(deep), root);
        assert_eq!(s.find(deep), root);
        assert_eq!(s.parent_of(deep), root);
    }

    #[test]
    fn chained_links_all_agree() {
        let mut s = sets();
        let k = 50;
        let ids: Vec<UfId> = (0..=k).map(|_| s.make_set()).collect();
        let mut rep = ids[0];
        for &id in &ids[1..] {
            let other = s.find(id);
            rep = s.link(rep, other).unwrap();
        }
        for &id in &ids {
            assert_eq!(s.find(id), rep);
        }
    }

    #[test]
    fn matches_partition_oracle() {
        // Brute-force oracle: each element stores an explicit group number.
        let mut s = sets();
        let n = 1000;
        let ids: Vec<UfId> = (0..n).map(|_| s.make_set()).collect();
        let mut group: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                let (ra, rb) = (s.find(ids[a]), s.find(ids[b]));
                if group[a] == group[b] {
                    assert_eq!(ra, rb);
                } else {
                    assert_ne!(ra, rb);
                    s.link(ra, rb).unwrap();
                    let (ga, gb) = (group[a], group[b]);
                    for g in group.iter_mut() {
                        if *g == gb {
                            *g = ga;
                        }
                    }
                }
            } else {
                assert_eq!(s.find(ids[a]) == s.find(ids[b]), group[a] == group[b]);
            }
        }
    }

    #[test]
    fn find_cost_stays_near_constant() {
        // Empirical inverse-Ackermann check: total abstract ops over n finds
        // on <= n elements stays within C * 5n.
        let counters = OpCounters::new();
        let mut s = DisjointSets::new(Rc::clone(&counters));
        let n = 100_000usize;
        let ids: Vec<UfId> = (0..n).map(|_| s.make_set()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 1..n {
            let j = rng.gen_range(0..i);
            let (ra, rb) = (s.find(ids[i]), s.find(ids[j]));
            if ra != rb {
                s.link(ra, rb).unwrap();
            }
        }
        counters.reset();
        counters.begin_op(crate::counters::OpTag::Other);
        for &id in &ids {
            s.find(id);
        }
        let total = counters.grand_total();
        assert!(total <= 2 * 5 * n as u64, "find ops {total} over budget");
    }
}
