//! Property tests: arbitrary operation sequences against brute-force
//! references.

use proptest::prelude::*;

use wsheap::counters::OpCounters;
use wsheap::fib::OwnedFibHeap;
use wsheap::index_tree::IndexTree;
use wsheap::trace::{replay_lockstep, ReplayOptions, TraceOp};

proptest! {
    #[test]
    fn fib_heap_drains_sorted(keys in proptest::collection::vec(-1000i64..1000, 0..200)) {
        let mut h: OwnedFibHeap<i64> = OwnedFibHeap::new(OpCounters::new());
        for (i, &k) in keys.iter().enumerate() {
            h.push(k, i as u64);
        }
        let mut out = Vec::new();
        while let Ok((k, _)) = h.pop() {
            out.push(k);
        }
        let mut expect = keys.clone();
        expect.sort();
        prop_assert_eq!(out, expect);
    }

    #[test]
    fn index_tree_peek_matches_scan(
        m in 1usize..60,
        ops in proptest::collection::vec((0usize..60, -1000i64..1000), 0..100),
    ) {
        let mut t: IndexTree<i64> = IndexTree::with_len(m, OpCounters::new());
        let mut vals: Vec<Option<i64>> = vec![None; m];
        for (pos, v) in ops {
            let pos = pos % m;
            t.change_key(pos + 1, Some(v));
            vals[pos] = Some(v);
            let expect = vals.iter().filter_map(|&v| v).min();
            let got = t.peek().map(|p| t.value(p).unwrap());
            prop_assert_eq!(got, expect);
        }
    }

    #[test]
    fn workset_heap_matches_oracle(
        raw in proptest::collection::vec((0u8..4, -1000i64..1000, 1u64..50), 1..120),
    ) {
        // Arbitrary (possibly invalid) traces; the lockstep replay demands
        // that the real heap and the oracle reject the same operations.
        let ops: Vec<TraceOp> = raw
            .iter()
            .map(|&(kind, key, handle)| match kind {
                0 | 1 => TraceOp::Push(key),
                2 => TraceOp::Pop,
                _ => TraceOp::DecKey(handle, key),
            })
            .collect();
        let opts = ReplayOptions { audit_every_step: true, check_pop_locality: true };
        prop_assert!(replay_lockstep(&ops, opts).is_ok());
    }
}
