//! The GAP-SEQ global constraint.
//!
//! Given the current assignment `σ = ⟨P1 … Pj⟩`, the filter computes the
//! occurrences and right extensions of `σ`, fails when fewer than `minsup`
//! sequences contain `σ`, and otherwise removes from `D(P_{j+1})` every item
//! that is not locally frequent inside those extensions. The support of
//! `σ·v` equals the number of sequences whose extension windows contain `v`,
//! so the surviving items are exactly the frequent one-item continuations.
//! `□` is never removed here; deeper variables are never touched.

use std::collections::BTreeMap;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::occurrence::{
    initial_index, AllOccIndex, ExtensionIndex, GapSpec, OccurrenceScanner, RedundancyCut,
};
use crate::sdb::{Item, SequenceDatabase};

/// Item → number of sequences whose extension windows contain it.
pub type ItemSupportMap = BTreeMap<Item, usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub frequent: bool,
    /// Number of sequences containing `σ`.
    pub support: usize,
    /// New domain for `P_{j+1}`. `None` when `σ` is infrequent or there is no
    /// next variable.
    pub pruned_domain: Option<Domain>,
}

/// Support of the prefix an extension index was built for.
pub fn support_of(ext: &ExtensionIndex) -> usize {
    ext.len()
}

/// Items contained in the extension windows of at least `minsup` sequences.
pub fn locally_frequent_items(db: &SequenceDatabase, ext: &ExtensionIndex, minsup: usize) -> ItemSupportMap {
    let mut counter = LocalCounter::new(db.catalog().len());
    counter.count(db, ext);
    counter
        .counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c as usize >= minsup.max(1))
        .map(|(i, &c)| (Item(i as u32), c as usize))
        .collect()
}

/// Per-item counters with a per-sequence seen marker, so overlapping windows
/// of one sequence count an item once.
#[derive(Debug)]
struct LocalCounter {
    counts: Vec<u32>,
    seen: Vec<u32>,
    round: u32,
}

impl LocalCounter {
    fn new(num_items: usize) -> Self {
        Self {
            counts: vec![0; num_items],
            seen: vec![0; num_items],
            round: 0,
        }
    }

    fn count(&mut self, db: &SequenceDatabase, ext: &ExtensionIndex) {
        self.counts.iter_mut().for_each(|c| *c = 0);
        for (sid, ranges) in ext.iter() {
            if self.round == u32::MAX {
                self.seen.iter_mut().for_each(|s| *s = 0);
                self.round = 0;
            }
            self.round += 1;
            let items = &db.sequences()[sid].items;
            for r in ranges {
                for it in &items[r.lo as usize - 1..r.hi as usize] {
                    let i = it.index();
                    if self.seen[i] != self.round {
                        self.seen[i] = self.round;
                        self.counts[i] += 1;
                    }
                }
            }
        }
    }
}

/// Filtering state for one search: the occurrence index of every assigned
/// prefix, one per depth, so that backtracking never recomputes anything.
#[derive(Debug)]
pub struct GapSeq<'db> {
    db: &'db SequenceDatabase,
    gap: GapSpec,
    minsup: usize,
    scanner: OccurrenceScanner,
    occ_stack: Vec<AllOccIndex>,
    counter: LocalCounter,
}

impl<'db> GapSeq<'db> {
    pub fn new(db: &'db SequenceDatabase, gap: GapSpec, minsup: usize, cut: RedundancyCut) -> Result<Self> {
        if minsup == 0 {
            return Err(Error::InvalidModel("minimum support must be at least 1".into()));
        }
        Ok(Self {
            db,
            gap,
            minsup,
            scanner: OccurrenceScanner::new(db, cut),
            occ_stack: vec![initial_index(db)],
            counter: LocalCounter::new(db.catalog().len()),
        })
    }

    /// Length of the prefix whose occurrences are on top of the stack.
    pub fn depth(&self) -> usize {
        self.occ_stack.len() - 1
    }

    /// Occurrences of the current prefix.
    pub fn occurrences(&self) -> &AllOccIndex {
        self.occ_stack.last().expect("stack holds the depth-0 index")
    }

    /// Runs the filter for `sigma`, whose prefix without the last item must be
    /// the current top of the stack. On success the occurrences of `sigma` are
    /// pushed; on failure the stack is unchanged.
    ///
    /// `next` is the current domain of `P_{j+1}`, or `None` when `P_j` is the
    /// last variable.
    pub fn filter(&mut self, sigma: &[Item], next: Option<&Domain>) -> FilterOutcome {
        debug_assert_eq!(sigma.len(), self.occ_stack.len());
        let prev = self.occ_stack.last().expect("stack holds the depth-0 index");
        let (index, ext) = self.scanner.right_extensions(self.db, prev, sigma, self.gap);
        let support = support_of(&ext);
        if support < self.minsup {
            return FilterOutcome {
                frequent: false,
                support,
                pruned_domain: None,
            };
        }
        let pruned_domain = next.map(|domain| {
            let mut pruned = domain.clone();
            if pruned.has_items() {
                self.counter.count(self.db, &ext);
                let counts = &self.counter.counts;
                let minsup = self.minsup;
                pruned.retain_items(|it| counts[it.index()] as usize >= minsup);
            }
            pruned
        });
        self.occ_stack.push(index);
        FilterOutcome {
            frequent: true,
            support,
            pruned_domain,
        }
    }

    /// Drops the occurrences of the last assigned prefix.
    pub fn backtrack(&mut self) -> Result<AllOccIndex> {
        if self.occ_stack.len() <= 1 {
            return Err(Error::Internal("occurrence stack pop below depth 0".into()));
        }
        Ok(self.occ_stack.pop().expect("checked length"))
    }
}
