//! Structural invariant auditor for [`WorkSetHeap`].
//!
//! Runs only between public operations and reports the first violation of:
//! the vacancy invariant (only odd buckets may be vacant), the size
//! invariant (`|H_i| <= 2^⌊i/2⌋`), the age invariant (every element of
//! bucket i is at least as old as the combined capacity of the occupied
//! buckets below i), index coherence (A[i] mirrors the bucket minimum),
//! union-find routing, and the Fibonacci sub-heap structure itself.

use std::fmt;

use crate::workset::{ElementHandle, WorkSetHeap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Vacancy { bucket: usize },
    Size { bucket: usize, len: usize, cap: u64 },
    Age { bucket: usize, element: u64, age: u64, floor: u64 },
    IndexCoherence { bucket: usize },
    Routing { element: u64, claimed: Option<usize>, actual: usize },
    Structure { bucket: usize, detail: String },
    IndexStructure { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Vacancy { bucket } => write!(f, "even bucket {bucket} is vacant"),
            Violation::Size { bucket, len, cap } => {
                write!(f, "bucket {bucket} holds {len} elements, capacity {cap}")
            }
            Violation::Age { bucket, element, age, floor } => write!(
                f,
                "element {element} in bucket {bucket} has age {age}, below floor {floor}"
            ),
            Violation::IndexCoherence { bucket } => {
                write!(f, "A[{bucket}] does not match the bucket minimum")
            }
            Violation::Routing { element, claimed, actual } => write!(
                f,
                "element {element} routed to {claimed:?} but stored in bucket {actual}"
            ),
            Violation::Structure { bucket, detail } => {
                write!(f, "bucket {bucket} sub-heap: {detail}")
            }
            Violation::IndexStructure { detail } => write!(f, "index tree: {detail}"),
        }
    }
}

/// Checks every structural invariant; `deep` additionally validates the
/// Fibonacci sub-heaps and the index tree's min pointers node by node.
pub fn audit<K: Ord + Copy>(h: &WorkSetHeap<K>, deep: bool) -> Result<(), Violation> {
    let m = h.bucket_count();
    let total = h.total_pushes();

    // Vacancy.
    for i in (0..m).step_by(2) {
        if !h.is_occupied(i) {
            return Err(Violation::Vacancy { bucket: i });
        }
    }

    // Size, age, index coherence, routing.
    let mut age_floor: u64 = 0;
    for i in 0..m {
        let cap = 1u64 << (i / 2);
        let items = h.bucket_items(i);
        if items.len() as u64 > cap {
            return Err(Violation::Size { bucket: i, len: items.len(), cap });
        }
        for &(_, j) in &items {
            let age = total - j + 1;
            if age < age_floor {
                return Err(Violation::Age { bucket: i, element: j, age, floor: age_floor });
            }
            let claimed = h.routed_bucket(ElementHandle(j));
            if claimed != Some(i) {
                return Err(Violation::Routing { element: j, claimed, actual: i });
            }
        }
        let min = items.iter().map(|&(k, _)| k).min();
        if h.index_value(i) != min {
            return Err(Violation::IndexCoherence { bucket: i });
        }
        if h.is_occupied(i) {
            age_floor += cap;
        }
    }

    if deep {
        for i in 0..m {
            if let Err(detail) = h.validate_bucket_structure(i) {
                return Err(Violation::Structure { bucket: i, detail });
            }
        }
        if let Err(detail) = h.index().audit_min_coherence() {
            return Err(Violation::IndexStructure { detail });
        }
    }
    Ok(())
}
