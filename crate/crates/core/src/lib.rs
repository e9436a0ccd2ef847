//! A working-set heap for comparison-based keys, built from three parts:
//!
//! * [`fib`] — classic Fibonacci heaps used as per-bucket sub-heaps, with
//!   constant-time meld and handle-stable decrease-key,
//! * [`dsu`] — union-find routing each live element to the representative of
//!   its current bucket,
//! * [`index_tree`] — a tree over the per-bucket minima whose i-th leaf sits
//!   at inverse-Ackermann depth, giving O(1) peek of the global minimum and
//!   near-constant decrease-key at position i.
//!
//! [`workset`] ties them together: `push` is amortized O(1), `pop` of an
//! element costs O(1 + log of its age), and `decrease_key` is amortized
//! inverse-Ackermann. [`oracle`], [`audit`], [`trace`] and [`counters`]
//! form the verification harness; [`graph`] and [`sssp`] exercise the heap
//! inside Dijkstra's algorithm against a binary-heap baseline.
//!
//! The structures are generic over the key type (`Ord + Copy`); [`Key`] is
//! the concrete alias the trace/SSSP tooling uses.

pub mod audit;
pub mod binheap;
pub mod calibrate;
pub mod counters;
pub mod dsu;
pub mod fib;
pub mod graph;
pub mod index_tree;
pub mod oracle;
pub mod sssp;
pub mod trace;
pub mod workset;

/// Concrete key type used by the trace format, the CLI and the SSSP harness.
pub type Key = i64;

pub use counters::{OpCounters, OpTag};
pub use workset::{ElementHandle, WorkSetHeap};
