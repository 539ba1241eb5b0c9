//! Sequence databases: item interning, loaders for the SPMF and plain text
//! formats, replication and summary statistics.
//!
//! Sequence identifiers are assigned `0, 1, 2, …` in input order. Positions
//! inside a sequence are 1-based in every public API of this crate.

use std::fmt;

use indexmap::IndexSet;

use crate::error::{Error, Result};

/// Dense item identifier, `0..d` where `d` is the catalog size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item(pub u32);

impl Item {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Bijection between external tokens and dense item ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    tokens: IndexSet<String>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `token`, assigning the next free id on first sight.
    pub fn intern(&mut self, token: &str) -> Item {
        if let Some(idx) = self.tokens.get_index_of(token) {
            return Item(idx as u32);
        }
        let (idx, _) = self.tokens.insert_full(token.to_owned());
        Item(idx as u32)
    }

    pub fn get(&self, token: &str) -> Option<Item> {
        self.tokens.get_index_of(token).map(|i| Item(i as u32))
    }

    pub fn token(&self, item: Item) -> Option<&str> {
        self.tokens.get_index(item.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// All items in ascending id order.
    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        (0..self.tokens.len() as u32).map(Item)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub sid: usize,
    pub items: Vec<Item>,
}

impl Sequence {
    /// `#s`, the number of items.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Item at 1-based position `pos`.
    #[inline]
    pub fn at(&self, pos: u32) -> Item {
        self.items[pos as usize - 1]
    }
}

/// Immutable collection of item sequences sharing one catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDatabase {
    sequences: Vec<Sequence>,
    catalog: Catalog,
    max_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbStats {
    pub num_sequences: usize,
    pub num_items: usize,
    pub avg_length: f64,
    pub max_length: usize,
}

impl SequenceDatabase {
    /// Builds a database from token sequences. Empty sequences are rejected.
    pub fn from_token_sequences<I, S, T>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut builder = Builder::default();
        for (line, row) in rows.into_iter().enumerate() {
            let tokens: Vec<T> = row.into_iter().collect();
            if tokens.is_empty() {
                return Err(Error::Parse {
                    line: line + 1,
                    message: "empty sequence".into(),
                });
            }
            builder.push(tokens.iter().map(AsRef::as_ref));
        }
        Ok(builder.finish())
    }

    /// Builds a database over an existing catalog. Used by generators that
    /// want a fixed alphabet independent of first-appearance order.
    pub fn from_items(catalog: Catalog, rows: Vec<Vec<Item>>) -> Result<Self> {
        let mut sequences = Vec::with_capacity(rows.len());
        for (sid, items) in rows.into_iter().enumerate() {
            if items.is_empty() {
                return Err(Error::Parse {
                    line: sid + 1,
                    message: "empty sequence".into(),
                });
            }
            if let Some(bad) = items.iter().find(|it| it.index() >= catalog.len()) {
                return Err(Error::Parse {
                    line: sid + 1,
                    message: format!("item {} is not in the catalog", bad.0),
                });
            }
            sequences.push(Sequence { sid, items });
        }
        let max_len = sequences.iter().map(Sequence::len).max().unwrap_or(0);
        Ok(Self {
            sequences,
            catalog,
            max_len,
        })
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn sequence(&self, sid: usize) -> Option<&Sequence> {
        self.sequences.get(sid)
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// `#SDB`
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Length of the longest sequence (0 for an empty database).
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn stats(&self) -> DbStats {
        let total: usize = self.sequences.iter().map(Sequence::len).sum();
        DbStats {
            num_sequences: self.len(),
            num_items: self.catalog.len(),
            avg_length: if self.is_empty() {
                0.0
            } else {
                total as f64 / self.len() as f64
            },
            max_length: self.max_len,
        }
    }

    /// Returns a database where every sequence appears `k` times. Copies are
    /// laid out block-wise: sids `r·m .. (r+1)·m` hold the `r`-th copy.
    pub fn replicate(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroReplication);
        }
        let m = self.len();
        let mut sequences = Vec::with_capacity(m * k);
        for copy in 0..k {
            sequences.extend(self.sequences.iter().map(|s| Sequence {
                sid: copy * m + s.sid,
                items: s.items.clone(),
            }));
        }
        Ok(Self {
            sequences,
            catalog: self.catalog.clone(),
            max_len: self.max_len,
        })
    }

    /// Maps items back to their tokens.
    pub fn tokens<'a>(&'a self, items: &'a [Item]) -> impl Iterator<Item = &'a str> + 'a {
        items
            .iter()
            .map(|&it| self.catalog.token(it).expect("item from this catalog"))
    }

    /// Serializes to the plain format: one line per sequence, tokens separated
    /// by single spaces.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        for seq in &self.sequences {
            for (i, tok) in self.tokens(&seq.items).enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(tok);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Default)]
struct Builder {
    catalog: Catalog,
    sequences: Vec<Sequence>,
}

impl Builder {
    fn push<'t>(&mut self, tokens: impl Iterator<Item = &'t str>) {
        let items: Vec<Item> = tokens.map(|t| self.catalog.intern(t)).collect();
        let sid = self.sequences.len();
        self.sequences.push(Sequence { sid, items });
    }

    fn finish(self) -> SequenceDatabase {
        let max_len = self.sequences.iter().map(Sequence::len).max().unwrap_or(0);
        SequenceDatabase {
            sequences: self.sequences,
            catalog: self.catalog,
            max_len,
        }
    }
}

fn decode_utf8(input: &[u8]) -> Result<&str> {
    std::str::from_utf8(input).map_err(|e| {
        let line = input[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::Parse {
            line,
            message: "input is not valid UTF-8".into(),
        }
    })
}

/// Parses one whitespace-separated sequence per line. Blank lines are skipped.
pub fn parse_plain(input: &[u8]) -> Result<SequenceDatabase> {
    let text = decode_utf8(input)?;
    let mut builder = Builder::default();
    for line in text.lines() {
        let mut tokens = line.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        builder.push(tokens);
    }
    if builder.sequences.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    Ok(builder.finish())
}

/// Parses the SPMF sequence format restricted to single-item itemsets:
/// `a -1 b -1 c -1 -2`. Lines starting with `#`, `%` or `@` are metadata and
/// are skipped, as are blank lines.
pub fn parse_spmf(input: &[u8]) -> Result<SequenceDatabase> {
    let text = decode_utf8(input)?;
    let mut builder = Builder::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with(['#', '%', '@']) {
            continue;
        }
        let items = parse_spmf_line(trimmed, line_no)?;
        builder.push(items.into_iter());
    }
    if builder.sequences.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    Ok(builder.finish())
}

fn parse_spmf_line(line: &str, line_no: usize) -> Result<Vec<&str>> {
    let parse_err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let mut items = Vec::new();
    let mut itemset: Vec<&str> = Vec::new();
    let mut terminated = false;

    for token in line.split_whitespace() {
        if terminated {
            return Err(parse_err(format!("unexpected token `{token}` after -2")));
        }
        match token {
            "-1" => close_itemset(&mut itemset, &mut items, line_no)?,
            "-2" => {
                if !itemset.is_empty() {
                    close_itemset(&mut itemset, &mut items, line_no)?;
                }
                terminated = true;
            }
            t if t.starts_with('-') => {
                return Err(parse_err(format!("malformed token `{t}`")));
            }
            t => itemset.push(t),
        }
    }
    if !terminated {
        return Err(parse_err("missing -2 terminator".into()));
    }
    if items.is_empty() {
        return Err(parse_err("empty sequence".into()));
    }
    Ok(items)
}

fn close_itemset<'a>(itemset: &mut Vec<&'a str>, items: &mut Vec<&'a str>, line: usize) -> Result<()> {
    match itemset.len() {
        0 => Err(Error::Parse {
            line,
            message: "empty itemset".into(),
        }),
        1 => {
            items.append(itemset);
            Ok(())
        }
        size => Err(Error::UnsupportedItemset { line, size }),
    }
}
