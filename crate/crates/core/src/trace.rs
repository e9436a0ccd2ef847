//! Operation traces: the line format, deterministic generators, and
//! lockstep replay against the oracle.
//!
//! Format, one operation per line: `push <int>`, `pop`, `peek`,
//! `deckey <handle-ordinal> <int>` where the handle ordinal is the 1-based
//! push sequence number. Blank lines and `#` comments are ignored.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::audit::{audit, Violation};
use crate::oracle::OracleHeap;
use crate::workset::WorkSetHeap;
use crate::Key;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOp {
    Push(Key),
    Pop,
    Peek,
    DecKey(u64, Key),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Vec<TraceOp>, TraceParseError> {
    let mut ops = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let op = parts.next().unwrap();
        let err = |message: String| TraceParseError { line, message };
        let parsed = match op {
            "push" => {
                let k = parts
                    .next()
                    .ok_or_else(|| err("push needs a key".into()))?
                    .parse::<Key>()
                    .map_err(|e| err(format!("bad key: {e}")))?;
                TraceOp::Push(k)
            }
            "pop" => TraceOp::Pop,
            "peek" => TraceOp::Peek,
            "deckey" => {
                let h = parts
                    .next()
                    .ok_or_else(|| err("deckey needs a handle ordinal".into()))?
                    .parse::<u64>()
                    .map_err(|e| err(format!("bad handle ordinal: {e}")))?;
                let k = parts
                    .next()
                    .ok_or_else(|| err("deckey needs a key".into()))?
                    .parse::<Key>()
                    .map_err(|e| err(format!("bad key: {e}")))?;
                TraceOp::DecKey(h, k)
            }
            other => return Err(err(format!("unknown operation `{other}`"))),
        };
        if let Some(extra) = parts.next() {
            return Err(err(format!("trailing token `{extra}`")));
        }
        ops.push(parsed);
    }
    Ok(ops)
}

pub fn format(ops: &[TraceOp]) -> String {
    let mut out = String::new();
    for op in ops {
        match op {
            TraceOp::Push(k) => out.push_str(&std::format!("push {k}\n")),
            TraceOp::Pop => out.push_str("pop\n"),
            TraceOp::Peek => out.push_str("peek\n"),
            TraceOp::DecKey(h, k) => out.push_str(&std::format!("deckey {h} {k}\n")),
        }
    }
    out
}

/// Deterministic mixed trace: roughly 50% push, 25% pop, 25% decrease-key,
/// every operation valid at the point it is issued (pops on an empty heap
/// become pushes, decrease targets a live element at or below its key).
pub fn gen_mixed(n_ops: usize, seed: u64) -> Vec<TraceOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sim: OracleHeap<Key> = OracleHeap::new();
    let mut ops = Vec::with_capacity(n_ops);
    for _ in 0..n_ops {
        let roll = rng.gen_range(0..100);
        let op = if roll < 50 || sim.is_empty() {
            let k = rng.gen_range(-1_000_000..1_000_000);
            sim.push(k);
            TraceOp::Push(k)
        } else if roll < 75 {
            sim.pop().unwrap();
            TraceOp::Pop
        } else {
            let live = sim.live_handles();
            let h = live[rng.gen_range(0..live.len())];
            let cur = sim.key_of(h).unwrap();
            let v = cur - rng.gen_range(0..1000);
            sim.decrease_key(h, v).unwrap();
            TraceOp::DecKey(h.0, v)
        };
        ops.push(op);
    }
    ops
}

/// Push-heavy trace whose keys arrive near-sorted, a working-set-friendly
/// workload used for calibration and benchmarks.
pub fn gen_push_only(n_ops: usize, seed: u64) -> Vec<TraceOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_ops)
        .map(|i| TraceOp::Push(i as Key * 10 + rng.gen_range(-5..5)))
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("op {index}: heap returned {got:?}, oracle expected {expected:?}")]
    Mismatch { index: usize, got: String, expected: String },
    #[error("op {index}: invariant violation: {violation}")]
    Invariant { index: usize, violation: Violation },
    #[error("op {index}: pop from bucket {bucket} with age {age} breaks the locality bound")]
    PopLocality { index: usize, bucket: usize, age: u64 },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReplayOptions {
    /// Run the full invariant auditor after every operation.
    pub audit_every_step: bool,
    /// Check `bucket <= 2*log2(age) + 4` on every pop.
    pub check_pop_locality: bool,
}

#[derive(Debug, Default)]
pub struct ReplayReport {
    pub ops: usize,
    pub pops: usize,
    pub max_pop_bucket: usize,
    /// Printable observables, one per pop/peek, in trace order.
    pub observables: Vec<String>,
    /// Operations both sides rejected, as `(op index, error)` pairs. The
    /// rejections match, so they are not mismatches, but a caller may still
    /// treat them as trace defects.
    pub op_errors: Vec<(usize, String)>,
}

/// Replays a trace on a [`WorkSetHeap`] and an [`OracleHeap`] in lockstep,
/// comparing every observable (including errors) exactly.
pub fn replay_lockstep(
    ops: &[TraceOp],
    opts: ReplayOptions,
) -> Result<ReplayReport, Box<ReplayError>> {
    let mut heap: WorkSetHeap<Key> = WorkSetHeap::new();
    let mut oracle: OracleHeap<Key> = OracleHeap::new();
    let mut report = ReplayReport::default();
    for (index, &op) in ops.iter().enumerate() {
        match op {
            TraceOp::Push(k) => {
                let a = heap.push(k);
                let b = oracle.push(k);
                if a != b {
                    return Err(Box::new(ReplayError::Mismatch {
                        index,
                        got: std::format!("{a:?}"),
                        expected: std::format!("{b:?}"),
                    }));
                }
            }
            TraceOp::Pop => {
                let a = heap.pop();
                // Equal-key ties may resolve to different elements, which
                // would make the two alive-sets drift apart; so check the
                // popped key against the oracle's minimum, then remove the
                // heap's own choice from the oracle by handle.
                let (ka, kb) = (a.as_ref().map(|&(k, _)| k).ok(), oracle.peek());
                if ka != kb {
                    return Err(Box::new(ReplayError::Mismatch {
                        index,
                        got: std::format!("{ka:?}"),
                        expected: std::format!("{kb:?}"),
                    }));
                }
                if let Ok((k, e)) = a {
                    if oracle.remove(e) != Ok(k) {
                        return Err(Box::new(ReplayError::Mismatch {
                            index,
                            got: std::format!("popped dead or relabeled element {}", e.0),
                            expected: "a live element at the minimum key".into(),
                        }));
                    }
                    report.pops += 1;
                    report.observables.push(std::format!("pop {k}"));
                    let stats = heap.last_pop_stats().unwrap();
                    report.max_pop_bucket = report.max_pop_bucket.max(stats.bucket);
                    if opts.check_pop_locality && !pop_locality_ok(stats.bucket, stats.age) {
                        return Err(Box::new(ReplayError::PopLocality {
                            index,
                            bucket: stats.bucket,
                            age: stats.age,
                        }));
                    }
                } else {
                    report.observables.push("pop error:empty".into());
                    report.op_errors.push((index, "pop on empty heap".into()));
                }
            }
            TraceOp::Peek => {
                let a = heap.peek();
                let b = oracle.peek();
                if a != b {
                    return Err(Box::new(ReplayError::Mismatch {
                        index,
                        got: std::format!("{a:?}"),
                        expected: std::format!("{b:?}"),
                    }));
                }
                report.observables.push(match a {
                    Some(k) => std::format!("peek {k}"),
                    None => "peek none".into(),
                });
            }
            TraceOp::DecKey(h, v) => {
                let a = heap.decrease_key(crate::workset::ElementHandle(h), v);
                let b = oracle.decrease_key(crate::workset::ElementHandle(h), v);
                if a != b {
                    return Err(Box::new(ReplayError::Mismatch {
                        index,
                        got: std::format!("{a:?}"),
                        expected: std::format!("{b:?}"),
                    }));
                }
                if let Err(e) = a {
                    report.op_errors.push((index, std::format!("deckey {h} {v}: {e}")));
                }
            }
        }
        if opts.audit_every_step {
            if let Err(violation) = audit(&heap, true) {
                return Err(Box::new(ReplayError::Invariant { index, violation }));
            }
        }
        report.ops += 1;
    }
    Ok(report)
}

/// The working-set pop bound: bucket index at most `2*log2(age) + 4`.
pub fn pop_locality_ok(bucket: usize, age: u64) -> bool {
    let log2 = 63 - age.max(1).leading_zeros() as usize; // floor(log2 age)
    bucket <= 2 * log2 + 4
}
