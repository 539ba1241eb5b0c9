//! Variable domains and the trail that restores them on backtrack.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::sdb::Item;

/// Values a pattern variable may take: a subset of the catalog plus,
/// optionally, the end-of-pattern marker `□`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    items: FixedBitSet,
    epsilon: bool,
}

impl Domain {
    /// All `num_items` items, with or without `□`.
    pub fn full(num_items: usize, epsilon: bool) -> Self {
        let mut items = FixedBitSet::with_capacity(num_items);
        items.insert_range(..);
        Self { items, epsilon }
    }

    /// Only `□`.
    pub fn epsilon_only(num_items: usize) -> Self {
        Self {
            items: FixedBitSet::with_capacity(num_items),
            epsilon: true,
        }
    }

    pub fn from_items(num_items: usize, items: impl IntoIterator<Item = Item>, epsilon: bool) -> Self {
        let mut set = FixedBitSet::with_capacity(num_items);
        for it in items {
            set.insert(it.index());
        }
        Self { items: set, epsilon }
    }

    #[inline]
    pub fn contains(&self, item: Item) -> bool {
        self.items.contains(item.index())
    }

    pub fn has_epsilon(&self) -> bool {
        self.epsilon
    }

    pub fn set_epsilon(&mut self, epsilon: bool) {
        self.epsilon = epsilon;
    }

    pub fn remove(&mut self, item: Item) {
        self.items.set(item.index(), false);
    }

    pub fn clear_items(&mut self) {
        self.items.clear();
    }

    /// Keeps only items for which `keep` holds. `□` is untouched.
    pub fn retain_items(&mut self, mut keep: impl FnMut(Item) -> bool) {
        let drop: Vec<usize> = self.items.ones().filter(|&i| !keep(Item(i as u32))).collect();
        for i in drop {
            self.items.set(i, false);
        }
    }

    /// Items in ascending id order.
    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        self.items.ones().map(|i| Item(i as u32))
    }

    pub fn item_count(&self) -> usize {
        self.items.count_ones(..)
    }

    pub fn has_items(&self) -> bool {
        !self.items.is_clear()
    }

    /// Number of values, `□` included.
    pub fn len(&self) -> usize {
        self.item_count() + usize::from(self.epsilon)
    }

    pub fn is_empty(&self) -> bool {
        !self.epsilon && !self.has_items()
    }
}

/// Chronological undo log for domain changes.
///
/// `push_level` opens a choice point; `save` records a domain before it is
/// modified; `pop_level` restores every domain saved since the matching push.
#[derive(Debug, Default)]
pub struct Trail {
    saved: Vec<(usize, Domain)>,
    levels: Vec<usize>,
}

impl Trail {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn push_level(&mut self) {
        self.levels.push(self.saved.len());
    }

    pub fn save(&mut self, var: usize, domain: &Domain) {
        debug_assert!(!self.levels.is_empty(), "save outside of a level");
        self.saved.push((var, domain.clone()));
    }

    pub fn pop_level(&mut self, domains: &mut [Domain]) -> Result<()> {
        let mark = self
            .levels
            .pop()
            .ok_or_else(|| Error::Internal("trail pop on empty stack".into()))?;
        while self.saved.len() > mark {
            let (var, dom) = self.saved.pop().expect("saved above mark");
            domains[var] = dom;
        }
        Ok(())
    }
}
