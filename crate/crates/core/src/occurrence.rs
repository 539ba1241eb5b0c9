//! Occurrence indexing and right pattern extensions under `gap[M,N]`.
//!
//! The index for a prefix `σ` of length `j` maps each sequence in which `σ`
//! occurs to the occurrence intervals `[j1, jm]` (first and last matched
//! positions, 1-based). It is derived from the index of the length `j-1`
//! prefix by scanning only the windows that a gap-respecting continuation may
//! land in, so each depth of the search costs one pass over the previous
//! depth's occurrences.
//!
//! Right extensions are stored as position ranges `(lo, hi)` into the
//! original sequence rather than as copied subsequences.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sdb::{Item, Sequence, SequenceDatabase};

/// Upper bound on the number of items allowed between two consecutive
/// matched positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxGap {
    Bounded(u32),
    Unbounded,
}

/// The pair `(M, N)` of `gap[M,N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GapSpec {
    min: u32,
    max: MaxGap,
}

impl GapSpec {
    pub fn bounded(min: u32, max: u32) -> Result<Self> {
        if min > max {
            return Err(Error::InvalidGap { min, max });
        }
        Ok(Self {
            min,
            max: MaxGap::Bounded(max),
        })
    }

    pub fn unbounded(min: u32) -> Self {
        Self {
            min,
            max: MaxGap::Unbounded,
        }
    }

    pub fn min_gap(&self) -> u32 {
        self.min
    }

    pub fn max_gap(&self) -> MaxGap {
        self.max
    }

    /// `N >= len`: every window opened in a sequence of this length runs to
    /// its end.
    #[inline]
    pub fn spans(&self, len: usize) -> bool {
        match self.max {
            MaxGap::Unbounded => true,
            MaxGap::Bounded(n) => n as usize >= len,
        }
    }

    /// Whether `k - prev - 1` lies in `[M, N]`.
    #[inline]
    pub fn admits(&self, prev: u32, k: u32) -> bool {
        if k <= prev {
            return false;
        }
        let between = k - prev - 1;
        between >= self.min
            && match self.max {
                MaxGap::Unbounded => true,
                MaxGap::Bounded(n) => between <= n,
            }
    }

    /// Positions `[last+M+1, min(last+N+1, len)]` that may follow a match at
    /// `last`. The window is empty when `lo > hi`.
    #[inline]
    pub fn window(&self, last: u32, len: usize) -> (u32, u32) {
        let lo = last as u64 + self.min as u64 + 1;
        let hi = match self.max {
            MaxGap::Unbounded => len as u64,
            MaxGap::Bounded(n) => (last as u64 + n as u64 + 1).min(len as u64),
        };
        // lo may exceed u32 only when it already exceeds any sequence length
        (lo.min(u32::MAX as u64) as u32, hi as u32)
    }
}

impl fmt::Display for GapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            MaxGap::Bounded(n) => write!(f, "gap[{},{}]", self.min, n),
            MaxGap::Unbounded => write!(f, "gap[{},inf]", self.min),
        }
    }
}

/// Parses `M,N` where `N` may be `inf`.
impl FromStr for GapSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (min, max) = s
            .split_once(',')
            .ok_or_else(|| format!("expected M,N but got `{s}`"))?;
        let min: u32 = min
            .trim()
            .parse()
            .map_err(|_| format!("invalid minimum gap `{min}`"))?;
        let max = max.trim();
        if max.eq_ignore_ascii_case("inf") {
            return Ok(GapSpec::unbounded(min));
        }
        let max: u32 = max.parse().map_err(|_| format!("invalid maximum gap `{max}`"))?;
        GapSpec::bounded(min, max).map_err(|e| e.to_string())
    }
}

/// Positions of the first and last matched items of an occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub first: u32,
    pub last: u32,
}

impl Occurrence {
    pub fn new(first: u32, last: u32) -> Self {
        Self { first, last }
    }
}

/// Occurrences of one prefix, grouped per sequence, in generation order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AllOccIndex {
    depth: usize,
    entries: Vec<(usize, Vec<Occurrence>)>,
}

impl AllOccIndex {
    /// Length of the prefix this index describes.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of sequences containing the prefix.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Occurrence])> {
        self.entries.iter().map(|(sid, occ)| (*sid, occ.as_slice()))
    }

    pub fn get(&self, sid: usize) -> Option<&[Occurrence]> {
        self.entries
            .binary_search_by_key(&sid, |(s, _)| *s)
            .ok()
            .map(|i| self.entries[i].1.as_slice())
    }

    /// Total number of stored intervals.
    pub fn occurrence_count(&self) -> usize {
        self.entries.iter().map(|(_, o)| o.len()).sum()
    }
}

/// `sid: [j1,jm] [j1,jm] …`, one line per sequence.
impl fmt::Display for AllOccIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (sid, occs) in &self.entries {
            write!(f, "{sid}:")?;
            for o in occs {
                write!(f, " [{},{}]", o.first, o.last)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A window `⟨s[lo..=hi]⟩` of a sequence, 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtensionRange {
    pub lo: u32,
    pub hi: u32,
}

impl ExtensionRange {
    pub fn new(lo: u32, hi: u32) -> Self {
        Self { lo, hi }
    }
}

/// Right pattern extensions of a prefix. A sequence is present iff the prefix
/// occurs in it, even when none of its windows is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExtensionIndex {
    entries: Vec<(usize, Vec<ExtensionRange>)>,
}

impl ExtensionIndex {
    /// Number of sequences with an entry, i.e. the support of the prefix.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[ExtensionRange])> {
        self.entries.iter().map(|(sid, r)| (*sid, r.as_slice()))
    }

    pub fn get(&self, sid: usize) -> Option<&[ExtensionRange]> {
        self.entries
            .binary_search_by_key(&sid, |(s, _)| *s)
            .ok()
            .map(|i| self.entries[i].1.as_slice())
    }
}

/// `sid: (lo,hi) (lo,hi) …`, one line per sequence.
impl fmt::Display for ExtensionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (sid, ranges) in &self.entries {
            write!(f, "{sid}:")?;
            for r in ranges {
                write!(f, " ({},{})", r.lo, r.hi)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Whether [`OccurrenceScanner`] stops scanning a sequence once further
/// occurrences can only produce windows nested in one already found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RedundancyCut {
    #[default]
    Enabled,
    Disabled,
}

/// Depth-0 index: one sentinel interval `[1, #s]` per sequence.
pub fn initial_index(db: &SequenceDatabase) -> AllOccIndex {
    AllOccIndex {
        depth: 0,
        entries: db
            .sequences()
            .iter()
            .map(|s| (s.sid, vec![Occurrence::new(1, s.len() as u32)]))
            .collect(),
    }
}

/// Builds the occurrence index of `σ·last` from the index of `σ`.
pub fn extend_index(db: &SequenceDatabase, prev: &AllOccIndex, last: Item, gap: GapSpec) -> AllOccIndex {
    OccurrenceScanner::new(db, RedundancyCut::Enabled).extend(db, prev, last, gap)
}

/// Computes the occurrence index of `sigma` and its right extensions. `prev`
/// must index `sigma` without its last item.
pub fn right_extensions(
    db: &SequenceDatabase,
    prev: &AllOccIndex,
    sigma: &[Item],
    gap: GapSpec,
) -> (AllOccIndex, ExtensionIndex) {
    let mut scanner = OccurrenceScanner::new(db, RedundancyCut::Enabled);
    scanner.right_extensions(db, prev, sigma, gap)
}

/// Extracts `⟨s[lo..=hi]⟩` from sequence `sid`.
pub fn decode_range(db: &SequenceDatabase, sid: usize, range: ExtensionRange) -> Result<Vec<Item>> {
    let seq = db.sequence(sid).ok_or(Error::RangeOutOfBounds {
        sid,
        lo: range.lo,
        hi: range.hi,
        len: 0,
    })?;
    if range.lo == 0 || range.lo > range.hi || range.hi as usize > seq.len() {
        return Err(Error::RangeOutOfBounds {
            sid,
            lo: range.lo,
            hi: range.hi,
            len: seq.len(),
        });
    }
    Ok(seq.items[range.lo as usize - 1..range.hi as usize].to_vec())
}

/// Reusable scratch state for building occurrence and extension indexes.
///
/// Deduplication uses position stamps instead of hash sets: occurrences that
/// share their first position are generated contiguously, and a range is a
/// function of the occurrence's last position.
#[derive(Debug)]
pub struct OccurrenceScanner {
    cut: RedundancyCut,
    marks: Vec<u64>,
    stamp: u64,
}

impl OccurrenceScanner {
    pub fn new(db: &SequenceDatabase, cut: RedundancyCut) -> Self {
        Self {
            cut,
            marks: vec![0; db.max_len() + 2],
            stamp: 0,
        }
    }

    pub fn cut(&self) -> RedundancyCut {
        self.cut
    }

    #[inline]
    fn next_stamp(&mut self) -> u64 {
        self.stamp += 1;
        self.stamp
    }

    pub fn extend(
        &mut self,
        db: &SequenceDatabase,
        prev: &AllOccIndex,
        last: Item,
        gap: GapSpec,
    ) -> AllOccIndex {
        let depth = prev.depth + 1;
        if self.marks.len() < db.max_len() + 2 {
            self.marks.resize(db.max_len() + 2, 0);
        }
        let mut entries = Vec::new();
        for (sid, occs) in &prev.entries {
            let seq = &db.sequences()[*sid];
            let found = self.scan_sequence(seq, occs, last, gap, depth);
            if !found.is_empty() {
                entries.push((*sid, found));
            }
        }
        AllOccIndex { depth, entries }
    }

    fn scan_sequence(
        &mut self,
        seq: &Sequence,
        occs: &[Occurrence],
        last: Item,
        gap: GapSpec,
        depth: usize,
    ) -> Vec<Occurrence> {
        let len = seq.len();
        let cut_enabled = self.cut == RedundancyCut::Enabled;
        let spans = gap.spans(len);
        let mut found = Vec::new();
        let mut block: Option<u32> = None;
        let mut stamp = 0;

        'outer: for occ in occs {
            let (lo, hi, first) = if depth == 1 {
                (1, len as u32, None)
            } else {
                let (lo, hi) = gap.window(occ.last, len);
                (lo, hi, Some(occ.first))
            };
            if block != first || block.is_none() {
                block = first;
                stamp = self.next_stamp();
            }
            let reaches_end = hi as usize == len;
            for k in lo..=hi {
                if seq.at(k) != last {
                    continue;
                }
                if self.marks[k as usize] != stamp {
                    self.marks[k as usize] = stamp;
                    found.push(Occurrence::new(first.unwrap_or(k), k));
                }
                if cut_enabled && ((reaches_end && depth > 1) || spans) {
                    break 'outer;
                }
            }
        }
        found
    }

    pub fn right_extensions(
        &mut self,
        db: &SequenceDatabase,
        prev: &AllOccIndex,
        sigma: &[Item],
        gap: GapSpec,
    ) -> (AllOccIndex, ExtensionIndex) {
        let last = *sigma.last().expect("right extensions of a non-empty prefix");
        debug_assert_eq!(prev.depth + 1, sigma.len());
        let index = self.extend(db, prev, last, gap);
        let ext = self.extensions_of(db, &index, gap);
        (index, ext)
    }

    /// Extension windows for every occurrence in `index`.
    pub fn extensions_of(
        &mut self,
        db: &SequenceDatabase,
        index: &AllOccIndex,
        gap: GapSpec,
    ) -> ExtensionIndex {
        let mut entries = Vec::with_capacity(index.entries.len());
        for (sid, occs) in &index.entries {
            let len = db.sequences()[*sid].len();
            let stamp = self.next_stamp();
            let mut ranges = Vec::new();
            for occ in occs {
                let (lo, hi) = gap.window(occ.last, len);
                if lo <= hi && self.marks[occ.last as usize] != stamp {
                    self.marks[occ.last as usize] = stamp;
                    ranges.push(ExtensionRange::new(lo, hi));
                }
            }
            entries.push((*sid, ranges));
        }
        ExtensionIndex { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdb::parse_plain;

    fn sdb1() -> SequenceDatabase {
        parse_plain(b"A B C D B\nA C C B A C B\nA D C B E E C\nA A C C").unwrap()
    }

    fn items(db: &SequenceDatabase, toks: &str) -> Vec<Item> {
        toks.chars()
            .map(|c| db.catalog().get(&c.to_string()).unwrap())
            .collect()
    }

    fn index_of(db: &SequenceDatabase, toks: &str, gap: GapSpec) -> AllOccIndex {
        let mut idx = initial_index(db);
        for it in items(db, toks) {
            idx = extend_index(db, &idx, it, gap);
        }
        idx
    }

    fn decoded(db: &SequenceDatabase, ext: &ExtensionIndex) -> Vec<(usize, Vec<String>)> {
        ext.iter()
            .map(|(sid, ranges)| {
                let words = ranges
                    .iter()
                    .map(|&r| db.tokens(&decode_range(db, sid, r).unwrap()).collect())
                    .collect();
                (sid, words)
            })
            .collect()
    }

    fn words(rows: &[(usize, &[&str])]) -> Vec<(usize, Vec<String>)> {
        rows.iter()
            .map(|(sid, w)| (*sid, w.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    #[test]
    fn gap_parsing_and_windows() {
        assert_eq!("0,1".parse::<GapSpec>().unwrap(), GapSpec::bounded(0, 1).unwrap());
        assert_eq!("2,inf".parse::<GapSpec>().unwrap(), GapSpec::unbounded(2));
        assert!("3,1".parse::<GapSpec>().is_err());
        assert!("3".parse::<GapSpec>().is_err());
        assert!("a,1".parse::<GapSpec>().is_err());
        assert_eq!(GapSpec::bounded(2, 1), Err(Error::InvalidGap { min: 2, max: 1 }));

        let g = GapSpec::bounded(1, 2).unwrap();
        assert_eq!(g.window(1, 5), (3, 4));
        assert_eq!(g.window(4, 5), (6, 5));
        assert_eq!(GapSpec::unbounded(0).window(2, 7), (3, 7));
        assert!(GapSpec::bounded(0, u32::MAX).unwrap().spans(10));
        assert_eq!(
            GapSpec::bounded(0, u32::MAX).unwrap().window(u32::MAX - 1, 3),
            (u32::MAX, 3)
        );
        assert!(g.admits(1, 3) && g.admits(1, 4) && !g.admits(1, 2) && !g.admits(1, 5));
        assert_eq!(g.to_string(), "gap[1,2]");
        assert_eq!(GapSpec::unbounded(0).to_string(), "gap[0,inf]");
    }

    #[test]
    fn initial_index_covers_every_sequence() {
        let db = sdb1();
        assert_eq!(
            initial_index(&db).to_string(),
            "0: [1,5]\n1: [1,7]\n2: [1,7]\n3: [1,4]\n"
        );
        let single = parse_plain(b"A").unwrap();
        assert_eq!(initial_index(&single).to_string(), "0: [1,1]\n");
        let empty = SequenceDatabase::from_items(Default::default(), vec![]).unwrap();
        assert!(initial_index(&empty).is_empty());
    }

    #[test]
    fn all_occurrences_of_ac() {
        let db = sdb1();
        let idx = index_of(&db, "AC", GapSpec::bounded(0, 1).unwrap());
        assert_eq!(idx.depth(), 2);
        assert_eq!(
            idx.get(1).unwrap(),
            &[
                Occurrence::new(1, 2),
                Occurrence::new(1, 3),
                Occurrence::new(5, 6)
            ]
        );

        let idx = index_of(&db, "AC", GapSpec::unbounded(0));
        assert_eq!(idx.get(1).unwrap(), &[Occurrence::new(1, 2)]);
    }

    #[test]
    fn depth_one_finds_every_match_when_gap_is_bounded() {
        let db = sdb1();
        for n in 0..4 {
            let idx = index_of(&db, "A", GapSpec::bounded(0, n).unwrap());
            assert_eq!(
                idx.get(3).unwrap(),
                &[Occurrence::new(1, 1), Occurrence::new(2, 2)]
            );
        }
        let idx = index_of(&db, "A", GapSpec::bounded(0, 4).unwrap());
        assert_eq!(idx.get(3).unwrap(), &[Occurrence::new(1, 1)]);
    }

    #[test]
    fn range_encoding_of_ac() {
        let db = sdb1();
        let gap = GapSpec::bounded(0, 1).unwrap();
        let prev = index_of(&db, "A", gap);
        let (_, ext) = right_extensions(&db, &prev, &items(&db, "AC"), gap);
        assert_eq!(
            ext.to_string(),
            "0: (4,5)\n1: (3,4) (4,5) (7,7)\n2: (4,5)\n3: (4,4)\n"
        );
        assert_eq!(ext.len(), 4);
    }

    #[test]
    fn unbounded_extensions_of_ac_are_aggregated() {
        let db = sdb1();
        let gap = GapSpec::unbounded(0);
        let prev = index_of(&db, "A", gap);
        let (_, ext) = right_extensions(&db, &prev, &items(&db, "AC"), gap);
        assert_eq!(
            decoded(&db, &ext),
            words(&[(0, &["DB"]), (1, &["CBACB"]), (2, &["BEEC"]), (3, &["C"])])
        );
    }

    #[test]
    fn extensions_of_a_with_min_gap() {
        let db = sdb1();
        let gap = GapSpec::bounded(1, 2).unwrap();
        let (_, ext) = right_extensions(&db, &initial_index(&db), &items(&db, "A"), gap);
        assert_eq!(
            decoded(&db, &ext),
            words(&[(0, &["CD"]), (1, &["CB", "B"]), (2, &["CB"]), (3, &["CC", "C"])])
        );
    }

    #[test]
    fn sequences_with_only_empty_windows_stay_in_the_index() {
        let db = parse_plain(b"A B\nA B C").unwrap();
        let gap = GapSpec::bounded(0, 0).unwrap();
        let prev = index_of(&db, "A", gap);
        let (idx, ext) = right_extensions(&db, &prev, &items(&db, "AB"), gap);
        assert_eq!(idx.len(), 2);
        assert_eq!(ext.to_string(), "0:\n1: (3,3)\n");
    }

    #[test]
    fn decode_range_bounds() {
        let db = sdb1();
        let seq = |sid, lo, hi| {
            decode_range(&db, sid, ExtensionRange::new(lo, hi)).map(|v| db.tokens(&v).collect::<String>())
        };
        assert_eq!(seq(1, 3, 4).unwrap(), "CB");
        assert_eq!(seq(0, 4, 5).unwrap(), "DB");
        assert_eq!(seq(2, 5, 5).unwrap(), "E");
        assert!(seq(3, 4, 5).is_err());
        assert!(seq(3, 0, 1).is_err());
        assert!(seq(3, 3, 2).is_err());
        assert!(seq(9, 1, 1).is_err());
    }

    #[test]
    fn cut_disabled_keeps_all_occurrences() {
        let db = sdb1();
        let gap = GapSpec::unbounded(0);
        let mut scanner = OccurrenceScanner::new(&db, RedundancyCut::Disabled);
        let a = scanner.extend(&db, &initial_index(&db), items(&db, "A")[0], gap);
        let ac = scanner.extend(&db, &a, items(&db, "C")[0], gap);
        assert_eq!(ac.get(1).unwrap().len(), 4);
        assert_eq!(ac.to_string().lines().count(), 4);
    }
}
