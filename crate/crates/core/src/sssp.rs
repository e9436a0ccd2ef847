//! Dijkstra single-source shortest paths over any of the three heaps, plus
//! the cross-heap benchmark harness.
//!
//! Relaxations use decrease-key, never lazy deletion, so the heap sees the
//! same logical sequence of operations regardless of backend.

use std::rc::Rc;
use std::time::Instant;

use crate::binheap::BinHeap;
use crate::counters::OpCounters;
use crate::fib::{FibNodeId, OwnedFibHeap};
use crate::graph::{gen_graph, Graph, Workload};
use crate::workset::{ElementHandle, WorkSetHeap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeapKind {
    Workset,
    Binary,
    Fibonacci,
}

impl std::str::FromStr for HeapKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "workset" => Ok(HeapKind::Workset),
            "binary" => Ok(HeapKind::Binary),
            "fibonacci" => Ok(HeapKind::Fibonacci),
            other => Err(std::format!(
                "unknown heap `{other}` (expected workset, binary, or fibonacci)"
            )),
        }
    }
}

impl std::fmt::Display for HeapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HeapKind::Workset => "workset",
            HeapKind::Binary => "binary",
            HeapKind::Fibonacci => "fibonacci",
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SsspStats {
    pub comparisons: u64,
    pub traversals: u64,
    pub pops: u64,
    pub deckeys: u64,
    pub wall_ms: f64,
}

pub struct SsspResult {
    /// `dist[v]` is `None` for unreachable vertices.
    pub dist: Vec<Option<i64>>,
    /// Vertices in the order they were settled.
    pub order: Vec<usize>,
    pub stats: SsspStats,
}

pub fn dijkstra(g: &Graph, source: usize, heap: HeapKind) -> SsspResult {
    assert!(source < g.n());
    let counters = OpCounters::new();
    let start = Instant::now();
    let mut dist: Vec<Option<i64>> = vec![None; g.n()];
    let mut order = Vec::new();
    let mut pops = 0u64;
    let mut deckeys = 0u64;

    match heap {
        HeapKind::Binary => {
            let mut h = BinHeap::new(g.n(), Rc::clone(&counters));
            let mut tent: Vec<i64> = vec![i64::MAX; g.n()];
            tent[source] = 0;
            h.push(0, source);
            while let Some((d, u)) = h.pop() {
                pops += 1;
                dist[u] = Some(d);
                order.push(u);
                for (v, w) in g.out_edges(u) {
                    if dist[v].is_some() {
                        continue;
                    }
                    let nd = d + w;
                    if nd < tent[v] {
                        if h.contains(v) {
                            deckeys += 1;
                            h.decrease_key(v, nd);
                        } else {
                            h.push(nd, v);
                        }
                        tent[v] = nd;
                    }
                }
            }
        }
        HeapKind::Fibonacci => {
            let mut h: OwnedFibHeap<i64> = OwnedFibHeap::new(Rc::clone(&counters));
            let mut tent: Vec<i64> = vec![i64::MAX; g.n()];
            let mut node: Vec<Option<FibNodeId>> = vec![None; g.n()];
            tent[source] = 0;
            node[source] = Some(h.push(0, source as u64));
            while let Ok((d, u)) = h.pop() {
                let u = u as usize;
                pops += 1;
                node[u] = None;
                dist[u] = Some(d);
                order.push(u);
                for (v, w) in g.out_edges(u) {
                    if dist[v].is_some() {
                        continue;
                    }
                    let nd = d + w;
                    if nd < tent[v] {
                        match node[v] {
                            Some(id) => {
                                deckeys += 1;
                                h.decrease_key(id, nd).unwrap();
                            }
                            None => node[v] = Some(h.push(nd, v as u64)),
                        }
                        tent[v] = nd;
                    }
                }
            }
        }
        HeapKind::Workset => {
            let mut h: WorkSetHeap<i64> = WorkSetHeap::with_counters(Rc::clone(&counters));
            let mut tent: Vec<i64> = vec![i64::MAX; g.n()];
            let mut handle: Vec<Option<ElementHandle>> = vec![None; g.n()];
            let mut vertex_of: Vec<usize> = Vec::new();
            tent[source] = 0;
            handle[source] = Some(h.push(0));
            vertex_of.push(source);
            while let Ok((d, e)) = h.pop() {
                let u = vertex_of[(e.0 - 1) as usize];
                pops += 1;
                handle[u] = None;
                dist[u] = Some(d);
                order.push(u);
                for (v, w) in g.out_edges(u) {
                    if dist[v].is_some() {
                        continue;
                    }
                    let nd = d + w;
                    if nd < tent[v] {
                        match handle[v] {
                            Some(e) => {
                                deckeys += 1;
                                h.decrease_key(e, nd).unwrap();
                            }
                            None => {
                                handle[v] = Some(h.push(nd));
                                vertex_of.push(v);
                            }
                        }
                        tent[v] = nd;
                    }
                }
            }
        }
    }

    let snap = counters.snapshot();
    SsspResult {
        dist,
        order,
        stats: SsspStats {
            comparisons: snap.iter().map(|r| r.comparisons).sum(),
            traversals: snap.iter().map(|r| r.traversals).sum(),
            pops,
            deckeys,
            wall_ms: start.elapsed().as_secs_f64() * 1000.0,
        },
    }
}

/// Checks that the settle order is by nondecreasing distance.
pub fn settle_order_is_monotone(res: &SsspResult) -> bool {
    res.order.windows(2).all(|w| res.dist[w[0]].unwrap() <= res.dist[w[1]].unwrap())
}

pub const BENCH_CSV_HEADER: &str = "workload,heap,comparisons,traversals,pops,deckeys,wall_ms";

/// Runs one workload instance under all three heaps, asserts that they agree
/// on every distance, and returns one CSV row per heap. `wall_ms` is rounded
/// away (reported as 0) when `deterministic` is set so identical runs emit
/// byte-identical output.
pub fn bench_rows(
    workload: Workload,
    n: usize,
    m: usize,
    seed: u64,
    deterministic: bool,
) -> Vec<String> {
    let g = gen_graph(workload, n, m, seed);
    let kinds = [HeapKind::Workset, HeapKind::Binary, HeapKind::Fibonacci];
    let results: Vec<SsspResult> = kinds.iter().map(|&k| dijkstra(&g, 0, k)).collect();
    for r in &results[1..] {
        assert_eq!(r.dist, results[0].dist, "heaps disagree on distances");
    }
    kinds
        .iter()
        .zip(&results)
        .map(|(k, r)| {
            let s = r.stats;
            let wall = if deterministic { 0.0 } else { s.wall_ms };
            std::format!(
                "{workload},{k},{},{},{},{},{wall:.3}",
                s.comparisons, s.traversals, s.pops, s.deckeys
            )
        })
        .collect()
}
