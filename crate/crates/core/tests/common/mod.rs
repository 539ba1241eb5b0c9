#![allow(dead_code)]

use gapseq::{Catalog, GapSpec, Item, SequenceDatabase};
use rand::rngs::StdRng;
use rand::Rng;

pub const SDB1: &str = "A B C D B\nA C C B A C B\nA D C B E E C\nA A C C\n";

pub fn sdb1() -> SequenceDatabase {
    gapseq::parse_plain(SDB1.as_bytes()).unwrap()
}

pub fn items(db: &SequenceDatabase, toks: &str) -> Vec<Item> {
    toks.split_whitespace()
        .flat_map(|w| w.chars())
        .map(|c| db.catalog().get(&c.to_string()).expect("token in catalog"))
        .collect()
}

pub fn catalog(alphabet: usize) -> Catalog {
    let mut c = Catalog::new();
    for i in 0..alphabet {
        c.intern(&((b'a' + i as u8) as char).to_string());
    }
    c
}

/// Random database with up to `max_seqs` sequences of length `1..=max_len`
/// over an alphabet of `2..=max_alphabet` items.
pub fn random_db(rng: &mut StdRng, max_seqs: usize, max_len: usize, max_alphabet: usize) -> SequenceDatabase {
    let alphabet = rng.gen_range(2..=max_alphabet);
    let m = rng.gen_range(1..=max_seqs);
    let rows = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| Item(rng.gen_range(0..alphabet) as u32))
                .collect()
        })
        .collect();
    SequenceDatabase::from_items(catalog(alphabet), rows).unwrap()
}

/// Every `gap[M,N]` with `M ∈ {0,1,2}` and `N ∈ {M..=4} ∪ {∞}`.
pub fn gap_grid() -> Vec<GapSpec> {
    let mut out = Vec::new();
    for m in 0..=2 {
        for n in m..=4 {
            out.push(GapSpec::bounded(m, n).unwrap());
        }
        out.push(GapSpec::unbounded(m));
    }
    out
}
