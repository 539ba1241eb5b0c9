//! Brute-force reference implementations.
//!
//! Everything here works straight from the definitions: embeddings are found
//! by exhaustive recursive position search and mining enumerates item strings
//! depth-first. Nothing in this module calls into the occurrence index or the
//! filter, so it can be used to check them. Running time is exponential in
//! the pattern length; keep inputs small.

use std::collections::{BTreeMap, BTreeSet};

use crate::occurrence::{GapSpec, MaxGap};
use crate::sdb::{Item, Sequence, SequenceDatabase};

/// Mined patterns keyed by item string.
pub type PatternSet = BTreeMap<Vec<Item>, usize>;

fn gap_ok(gap: &GapSpec, prev: usize, next: usize) -> bool {
    if next <= prev {
        return false;
    }
    let between = (next - prev - 1) as u64;
    if between < gap.min_gap() as u64 {
        return false;
    }
    match gap.max_gap() {
        MaxGap::Unbounded => true,
        MaxGap::Bounded(n) => between <= n as u64,
    }
}

/// Calls `visit(first, last)` for every embedding of `pattern` in `seq`
/// (1-based positions). `visit` returns `false` to stop the enumeration.
fn embeddings(pattern: &[Item], seq: &[Item], gap: &GapSpec, visit: &mut dyn FnMut(usize, usize) -> bool) {
    fn rec(
        pattern: &[Item],
        seq: &[Item],
        gap: &GapSpec,
        first: usize,
        prev: usize,
        visit: &mut dyn FnMut(usize, usize) -> bool,
    ) -> bool {
        let Some((&head, rest)) = pattern.split_first() else {
            return visit(first, prev);
        };
        for pos in prev + 1..=seq.len() {
            if seq[pos - 1] == head && gap_ok(gap, prev, pos) && !rec(rest, seq, gap, first, pos, visit) {
                return false;
            }
        }
        true
    }

    let Some((&head, rest)) = pattern.split_first() else {
        return;
    };
    for pos in 1..=seq.len() {
        if seq[pos - 1] == head && !rec(rest, seq, gap, pos, pos, visit) {
            return;
        }
    }
}

/// Whether `pattern` occurs in `seq` under `gap`.
pub fn matches(pattern: &[Item], seq: &[Item], gap: &GapSpec) -> bool {
    if pattern.is_empty() {
        return true;
    }
    let mut found = false;
    embeddings(pattern, seq, gap, &mut |_, _| {
        found = true;
        false
    });
    found
}

/// Distinct `[first, last]` pairs over all embeddings, sorted.
pub fn all_occurrences(pattern: &[Item], seq: &[Item], gap: &GapSpec) -> Vec<(usize, usize)> {
    let mut out = BTreeSet::new();
    embeddings(pattern, seq, gap, &mut |a, b| {
        out.insert((a, b));
        true
    });
    out.into_iter().collect()
}

/// Sids of the sequences containing `pattern`.
pub fn cover(pattern: &[Item], db: &SequenceDatabase, gap: &GapSpec) -> Vec<usize> {
    db.sequences()
        .iter()
        .filter(|s| matches(pattern, &s.items, gap))
        .map(|s| s.sid)
        .collect()
}

pub fn support(pattern: &[Item], db: &SequenceDatabase, gap: &GapSpec) -> usize {
    cover(pattern, db, gap).len()
}

/// Right pattern extensions of `pattern` in `seq`, decoded. Each occurrence
/// ending at `jm` contributes `s[jm+M+1 ..= min(jm+N+1, #s)]`; when
/// `N >= #s` only the occurrence with the smallest `jm` contributes. Empty
/// windows contribute nothing.
pub fn right_extensions_naive(pattern: &[Item], seq: &Sequence, gap: &GapSpec) -> BTreeSet<Vec<Item>> {
    let len = seq.len();
    let occs = all_occurrences(pattern, &seq.items, gap);
    let mut ends: Vec<usize> = occs.iter().map(|&(_, last)| last).collect();
    let spans = match gap.max_gap() {
        MaxGap::Unbounded => true,
        MaxGap::Bounded(n) => n as usize >= len,
    };
    if spans {
        ends = ends.into_iter().min().into_iter().collect();
    }
    let mut out = BTreeSet::new();
    for jm in ends {
        let lo = jm + gap.min_gap() as usize + 1;
        let hi = match gap.max_gap() {
            MaxGap::Unbounded => len,
            MaxGap::Bounded(n) => (jm + n as usize + 1).min(len),
        };
        if lo <= hi {
            out.insert(seq.items[lo - 1..hi].to_vec());
        }
    }
    out
}

/// Plain (gap-free) subsequence test by greedy left-to-right matching.
pub fn is_subsequence(pattern: &[Item], seq: &[Item]) -> bool {
    let mut it = seq.iter();
    pattern.iter().all(|p| it.any(|s| s == p))
}

/// All patterns of length `1..=maxlen` supported by at least `minsup`
/// sequences under `gap`.
pub fn mine_naive(db: &SequenceDatabase, minsup: usize, gap: &GapSpec, maxlen: usize) -> PatternSet {
    mine_naive_by(db, minsup, maxlen, |p, s| matches(p, s, gap))
}

/// Depth-first enumeration of item strings with an arbitrary containment
/// test. Only prefixes that are frequent are extended, which is sound for any
/// relation where containing `p·v` implies containing `p`.
pub fn mine_naive_by<C>(db: &SequenceDatabase, minsup: usize, maxlen: usize, contains: C) -> PatternSet
where
    C: Fn(&[Item], &[Item]) -> bool,
{
    let alphabet: Vec<Item> = db.catalog().items().collect();
    let mut out = PatternSet::new();
    let mut stack: Vec<Vec<Item>> = alphabet.iter().rev().map(|&a| vec![a]).collect();
    while let Some(p) = stack.pop() {
        let sup = db.sequences().iter().filter(|s| contains(&p, &s.items)).count();
        if sup < minsup.max(1) {
            continue;
        }
        if p.len() < maxlen {
            for &a in alphabet.iter().rev() {
                let mut q = p.clone();
                q.push(a);
                stack.push(q);
            }
        }
        out.insert(p, sup);
    }
    out
}
