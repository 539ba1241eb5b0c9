//! Sequential pattern mining under `gap[M,N]` constraints.
//!
//! Patterns are enumerated by a depth-first constraint search over pattern
//! variables `P1 … Pℓ`, filtered by the GAP-SEQ global constraint
//! ([`gapseq`]), which maintains per-depth occurrence indexes
//! ([`occurrence`]) so that each extension step only rescans the windows a
//! gap-respecting continuation can reach. [`oracle`] holds brute-force
//! reference implementations used to check the engine.
//!
//! ```
//! use gapseq::{mine, parse_plain, GapSpec, PatternModel};
//!
//! let db = parse_plain(b"A B C D B\nA C C B A C B\nA D C B E E C\nA A C C").unwrap();
//! let model = PatternModel::new(&db, GapSpec::bounded(0, 1).unwrap(), 3);
//! let (patterns, _stats) = mine(&db, &model).unwrap();
//! let rendered: Vec<String> = patterns
//!     .iter()
//!     .map(|p| format!("{} #SUP: {}", db.tokens(&p.items).collect::<Vec<_>>().join(" "), p.support))
//!     .collect();
//! assert!(rendered.contains(&"A C B #SUP: 3".to_string()));
//! ```

pub mod domain;
pub mod error;
pub mod gapseq;
pub mod occurrence;
pub mod oracle;
pub mod sdb;
pub mod solver;

pub use domain::{Domain, Trail};
pub use error::{Error, Result};
pub use gapseq::{locally_frequent_items, support_of, FilterOutcome, GapSeq, ItemSupportMap};
pub use occurrence::{
    decode_range, extend_index, initial_index, right_extensions, AllOccIndex, ExtensionIndex, ExtensionRange,
    GapSpec, MaxGap, Occurrence, OccurrenceScanner, RedundancyCut,
};
pub use sdb::{parse_plain, parse_spmf, Catalog, DbStats, Item, Sequence, SequenceDatabase};
pub use solver::{
    check_aux, mine, mine_partitioned, solve, solve_with, AuxConstraint, MinedPattern, PatternModel,
    SearchOptions, SearchStats,
};
