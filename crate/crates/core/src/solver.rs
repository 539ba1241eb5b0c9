//! A small constraint-satisfaction kernel for pattern enumeration.
//!
//! A pattern of at most `ℓ` items is modelled by variables `P1 … Pℓ`. `P1`
//! ranges over the items, every later variable over the items plus `□`
//! (end of pattern). Assigning `□` to `P_{j+1}` fixes every later variable to
//! `□` and yields the pattern `⟨P1 … Pj⟩`. Search is depth-first with
//! chronological backtracking; the GAP-SEQ filter runs after every item
//! assignment and forward-checks the next variable.
//!
//! Value order is `□` first, then items by ascending id, so each pattern is
//! reported before any of its extensions and the output is deterministic.

use std::time::Instant;

use crate::domain::{Domain, Trail};
use crate::error::{Error, Result};
use crate::gapseq::GapSeq;
use crate::occurrence::{GapSpec, RedundancyCut};
use crate::sdb::{Item, SequenceDatabase};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuxConstraint {
    /// Pattern has at least this many items.
    MinSize(usize),
    /// Pattern has at most this many items.
    MaxSize(usize),
    /// Every item of `items` occurs between `min` and `max` times (`None` is
    /// unbounded). `min = max = 0` excludes the items.
    Membership {
        items: Vec<Item>,
        min: usize,
        max: Option<usize>,
    },
}

/// Checks `pattern` against every auxiliary constraint.
pub fn check_aux(pattern: &[Item], aux: &[AuxConstraint]) -> bool {
    aux.iter().all(|c| match c {
        AuxConstraint::MinSize(k) => pattern.len() >= *k,
        AuxConstraint::MaxSize(k) => pattern.len() <= *k,
        AuxConstraint::Membership { items, min, max } => items.iter().all(|t| {
            let n = pattern.iter().filter(|&p| p == t).count();
            n >= *min && max.is_none_or(|u| n <= u)
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternModel {
    /// Number of pattern variables, i.e. the maximum pattern length.
    pub ell: usize,
    pub gap: GapSpec,
    /// Absolute minimum support.
    pub minsup: usize,
    pub aux: Vec<AuxConstraint>,
    pub cut: RedundancyCut,
}

impl PatternModel {
    /// Model with `ℓ` set to the longest sequence of `db`.
    pub fn new(db: &SequenceDatabase, gap: GapSpec, minsup: usize) -> Self {
        Self {
            ell: db.max_len(),
            gap,
            minsup,
            aux: Vec::new(),
            cut: RedundancyCut::Enabled,
        }
    }

    pub fn with_max_len(mut self, ell: usize) -> Self {
        self.ell = ell;
        self
    }

    pub fn with_constraint(mut self, c: AuxConstraint) -> Self {
        self.aux.push(c);
        self
    }

    pub fn with_cut(mut self, cut: RedundancyCut) -> Self {
        self.cut = cut;
        self
    }

    pub fn validate(&self, db: &SequenceDatabase) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidModel(msg));
        if self.minsup == 0 {
            return invalid("minimum support must be at least 1".into());
        }
        if self.ell == 0 && !db.is_empty() {
            return invalid("maximum pattern length must be at least 1".into());
        }
        let mut lo = 1;
        let mut hi = self.ell;
        for c in &self.aux {
            match c {
                AuxConstraint::MinSize(k) => {
                    if *k == 0 {
                        return invalid("minSize must be at least 1".into());
                    }
                    lo = lo.max(*k);
                }
                AuxConstraint::MaxSize(k) => {
                    if *k == 0 {
                        return invalid("maxSize must be at least 1".into());
                    }
                    hi = hi.min(*k);
                }
                AuxConstraint::Membership { items, min, max } => {
                    if let Some(u) = max {
                        if min > u {
                            return invalid(format!("membership bounds {min} > {u}"));
                        }
                    }
                    if let Some(bad) = items.iter().find(|t| t.index() >= db.catalog().len()) {
                        return invalid(format!("membership item {} is not in the catalog", bad.0));
                    }
                }
            }
        }
        if !db.is_empty() && lo > hi {
            return invalid(format!(
                "minimum pattern size {lo} exceeds maximum pattern size {hi}"
            ));
        }
        Ok(())
    }

    /// Domains after the static prunings implied by the auxiliary
    /// constraints. Index `i` holds `D(P_{i+1})`.
    pub fn initial_domains(&self, db: &SequenceDatabase) -> Vec<Domain> {
        let d = db.catalog().len();
        let mut domains: Vec<Domain> = (0..self.ell).map(|i| Domain::full(d, i > 0)).collect();
        for c in &self.aux {
            match c {
                AuxConstraint::MinSize(k) => {
                    for dom in domains.iter_mut().take(*k) {
                        dom.set_epsilon(false);
                    }
                }
                AuxConstraint::MaxSize(k) => {
                    for dom in domains.iter_mut().skip(*k) {
                        *dom = Domain::epsilon_only(d);
                    }
                }
                AuxConstraint::Membership {
                    items, max: Some(0), ..
                } => {
                    for dom in &mut domains {
                        items.iter().for_each(|&t| dom.remove(t));
                    }
                }
                AuxConstraint::Membership { .. } => {}
            }
        }
        domains
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinedPattern {
    pub items: Vec<Item>,
    pub support: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Value assignments attempted, `□` and failed ones included.
    pub nodes: u64,
    /// GAP-SEQ filter invocations.
    pub propagations: u64,
    /// Patterns emitted.
    pub patterns: u64,
    /// Search stopped at the deadline before the tree was exhausted.
    pub timed_out: bool,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.propagations += other.propagations;
        self.patterns += other.patterns;
        self.timed_out |= other.timed_out;
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Stop at the first node boundary past this instant.
    pub deadline: Option<Instant>,
    /// Restrict `P1` to these items (a disjoint partition of the root).
    pub roots: Option<Vec<Item>>,
}

/// Enumerates every pattern satisfying the model, calling `sink` with the
/// items and support of each in search order.
pub fn solve<F>(db: &SequenceDatabase, model: &PatternModel, sink: F) -> Result<SearchStats>
where
    F: FnMut(&[Item], usize),
{
    solve_with(db, model, &SearchOptions::default(), sink)
}

pub fn solve_with<F>(
    db: &SequenceDatabase,
    model: &PatternModel,
    options: &SearchOptions,
    sink: F,
) -> Result<SearchStats>
where
    F: FnMut(&[Item], usize),
{
    model.validate(db)?;
    let mut search = Search::new(db, model, options, sink)?;
    search.run()?;
    Ok(search.stats)
}

/// Collects all patterns in search order.
pub fn mine(db: &SequenceDatabase, model: &PatternModel) -> Result<(Vec<MinedPattern>, SearchStats)> {
    let mut out = Vec::new();
    let stats = solve(db, model, |items, support| {
        out.push(MinedPattern {
            items: items.to_vec(),
            support,
        })
    })?;
    Ok((out, stats))
}

/// Splits the root items round-robin into `parts` disjoint groups and mines
/// each group on its own thread. Results are returned per group.
pub fn mine_partitioned(
    db: &SequenceDatabase,
    model: &PatternModel,
    parts: usize,
) -> Result<Vec<(Vec<MinedPattern>, SearchStats)>> {
    model.validate(db)?;
    let parts = parts.max(1);
    let mut groups = vec![Vec::new(); parts];
    for it in db.catalog().items() {
        groups[it.index() % parts].push(it);
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = groups
            .into_iter()
            .map(|roots| {
                scope.spawn(move || {
                    let options = SearchOptions {
                        deadline: None,
                        roots: Some(roots),
                    };
                    let mut out = Vec::new();
                    let stats = solve_with(db, model, &options, |items, support| {
                        out.push(MinedPattern {
                            items: items.to_vec(),
                            support,
                        })
                    })?;
                    Ok((out, stats))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .map_err(|_| Error::Internal("search thread panicked".into()))?
            })
            .collect()
    })
}

struct Search<'a, F> {
    model: &'a PatternModel,
    options: &'a SearchOptions,
    domains: Vec<Domain>,
    trail: Trail,
    prefix: Vec<Item>,
    supports: Vec<usize>,
    gapseq: GapSeq<'a>,
    /// Per item: occurrences in the prefix and the tightest upper bound.
    counts: Vec<usize>,
    upper: Vec<Option<usize>>,
    stats: SearchStats,
    sink: F,
}

impl<'a, F> Search<'a, F>
where
    F: FnMut(&[Item], usize),
{
    fn new(
        db: &'a SequenceDatabase,
        model: &'a PatternModel,
        options: &'a SearchOptions,
        sink: F,
    ) -> Result<Self> {
        let d = db.catalog().len();
        let mut upper = vec![None; d];
        for c in &model.aux {
            if let AuxConstraint::Membership {
                items, max: Some(u), ..
            } = c
            {
                for t in items {
                    let cur: &mut Option<usize> = &mut upper[t.index()];
                    *cur = Some(cur.map_or(*u, |v| v.min(*u)));
                }
            }
        }
        Ok(Self {
            model,
            options,
            domains: model.initial_domains(db),
            trail: Trail::new(),
            prefix: Vec::with_capacity(model.ell),
            supports: Vec::with_capacity(model.ell),
            gapseq: GapSeq::new(db, model.gap, model.minsup, model.cut)?,
            counts: vec![0; d],
            upper,
            stats: SearchStats::default(),
            sink,
        })
    }

    fn run(&mut self) -> Result<()> {
        let Some(first) = self.domains.first() else {
            return Ok(());
        };
        let mut values: Vec<Item> = first.items().collect();
        if let Some(roots) = &self.options.roots {
            values.retain(|v| roots.contains(v));
        }
        for v in values {
            if !self.branch(v)? {
                break;
            }
        }
        Ok(())
    }

    fn expired(&mut self) -> bool {
        if let Some(deadline) = self.options.deadline {
            if Instant::now() >= deadline {
                self.stats.timed_out = true;
            }
        }
        self.stats.timed_out
    }

    /// Explores `D(P_{j+1})` where `j` is the current prefix length. Returns
    /// `false` once the deadline is hit.
    fn explore(&mut self) -> Result<bool> {
        let j = self.prefix.len();
        let next = &self.domains[j];
        let values: Vec<Item> = next.items().collect();
        if next.has_epsilon() {
            if self.expired() {
                return Ok(false);
            }
            self.stats.nodes += 1;
            self.emit();
        }
        for v in values {
            if !self.branch(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Assigns `v` to `P_{j+1}`, filters and recurses.
    fn branch(&mut self, v: Item) -> Result<bool> {
        if self.expired() {
            return Ok(false);
        }
        self.stats.nodes += 1;
        if self.upper[v.index()].is_some_and(|u| self.counts[v.index()] >= u) {
            return Ok(true);
        }
        self.prefix.push(v);
        self.counts[v.index()] += 1;
        let j = self.prefix.len();

        self.stats.propagations += 1;
        let outcome = self.gapseq.filter(&self.prefix, self.domains.get(j));
        let mut keep_going = true;
        if outcome.frequent {
            self.supports.push(outcome.support);
            match outcome.pruned_domain {
                Some(pruned) => {
                    self.trail.push_level();
                    self.trail.save(j, &self.domains[j]);
                    self.domains[j] = pruned;
                    keep_going = self.explore()?;
                    self.trail.pop_level(&mut self.domains)?;
                }
                None => self.emit(),
            }
            self.supports.pop();
            self.gapseq.backtrack()?;
        }

        self.counts[v.index()] -= 1;
        self.prefix.pop();
        Ok(keep_going)
    }

    /// Reports the current prefix, padded with `□`, if it passes the
    /// auxiliary constraints.
    fn emit(&mut self) {
        if check_aux(&self.prefix, &self.model.aux) {
            let support = *self.supports.last().expect("emitted prefix has a support");
            self.stats.patterns += 1;
            (self.sink)(&self.prefix, support);
        }
    }
}
