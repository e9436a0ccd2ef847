//! Abstract-operation tallies.
//!
//! One "abstract operation" is a key comparison, a reference traversal, or a
//! node allocation. Every sub-structure of a heap instance shares one
//! [`OpCounters`] through an `Rc`, and the heap sets the attribution tag at
//! the start of each public operation so totals can be split per op kind.

use std::cell::Cell;
use std::fmt::Write as _;
use std::rc::Rc;

/// Which public heap operation the current work is attributed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpTag {
    Push,
    Pop,
    Peek,
    DecreaseKey,
    Rebuild,
    Other,
}

pub const ALL_TAGS: [OpTag; 6] = [
    OpTag::Push,
    OpTag::Pop,
    OpTag::Peek,
    OpTag::DecreaseKey,
    OpTag::Rebuild,
    OpTag::Other,
];

impl OpTag {
    fn idx(self) -> usize {
        match self {
            OpTag::Push => 0,
            OpTag::Pop => 1,
            OpTag::Peek => 2,
            OpTag::DecreaseKey => 3,
            OpTag::Rebuild => 4,
            OpTag::Other => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpTag::Push => "push",
            OpTag::Pop => "pop",
            OpTag::Peek => "peek",
            OpTag::DecreaseKey => "deckey",
            OpTag::Rebuild => "rebuild",
            OpTag::Other => "other",
        }
    }
}

const N_TAGS: usize = 6;

#[derive(Default)]
pub struct OpCounters {
    tag: Cell<usize>,
    comparisons: [Cell<u64>; N_TAGS],
    traversals: [Cell<u64>; N_TAGS],
    allocations: [Cell<u64>; N_TAGS],
    ops: [Cell<u64>; N_TAGS],
}

/// One row of a counter snapshot, keyed by attribution tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterRow {
    pub tag: OpTag,
    pub comparisons: u64,
    pub traversals: u64,
    pub allocations: u64,
    pub count: u64,
}

impl CounterRow {
    pub fn total(&self) -> u64 {
        self.comparisons + self.traversals + self.allocations
    }
}

impl OpCounters {
    pub fn new() -> Rc<Self> {
        Rc::new(Self::default())
    }

    /// Sets the attribution tag and counts one public operation of that kind.
    pub fn begin_op(&self, tag: OpTag) {
        self.tag.set(tag.idx());
        let c = &self.ops[tag.idx()];
        c.set(c.get() + 1);
    }

    /// Sets the attribution tag without counting an operation (sub-phases).
    pub fn set_tag(&self, tag: OpTag) {
        self.tag.set(tag.idx());
    }

    pub fn current_tag(&self) -> OpTag {
        ALL_TAGS[self.tag.get()]
    }

    #[inline]
    pub fn comparison(&self) {
        let c = &self.comparisons[self.tag.get()];
        c.set(c.get() + 1);
    }

    #[inline]
    pub fn traversal(&self) {
        let c = &self.traversals[self.tag.get()];
        c.set(c.get() + 1);
    }

    #[inline]
    pub fn traversals_n(&self, n: u64) {
        let c = &self.traversals[self.tag.get()];
        c.set(c.get() + n);
    }

    #[inline]
    pub fn allocation(&self) {
        let c = &self.allocations[self.tag.get()];
        c.set(c.get() + 1);
    }

    pub fn row(&self, tag: OpTag) -> CounterRow {
        let i = tag.idx();
        CounterRow {
            tag,
            comparisons: self.comparisons[i].get(),
            traversals: self.traversals[i].get(),
            allocations: self.allocations[i].get(),
            count: self.ops[i].get(),
        }
    }

    /// Total abstract operations attributed to `tag`.
    pub fn total_for(&self, tag: OpTag) -> u64 {
        self.row(tag).total()
    }

    pub fn grand_total(&self) -> u64 {
        ALL_TAGS.iter().map(|&t| self.total_for(t)).sum()
    }

    pub fn snapshot(&self) -> Vec<CounterRow> {
        ALL_TAGS.iter().map(|&t| self.row(t)).collect()
    }

    pub fn reset(&self) {
        for i in 0..N_TAGS {
            self.comparisons[i].set(0);
            self.traversals[i].set(0);
            self.allocations[i].set(0);
            self.ops[i].set(0);
        }
    }

    /// Renders the snapshot as CSV with header `op,comparisons,traversals,allocations,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("op,comparisons,traversals,allocations,count\n");
        for row in self.snapshot() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.tag.name(),
                row.comparisons,
                row.traversals,
                row.allocations,
                row.count
            );
        }
        out
    }
}
