//! Synthetic workloads shared by the benchmarks.

use gapseq::{Catalog, Item, SequenceDatabase};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `m` sequences with lengths drawn from `len` over `alphabet` items named
/// `i0, i1, …`. Low item ids are more frequent, so long patterns exist.
pub fn synthetic(
    seed: u64,
    m: usize,
    len: std::ops::RangeInclusive<usize>,
    alphabet: usize,
) -> SequenceDatabase {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut catalog = Catalog::new();
    for i in 0..alphabet {
        catalog.intern(&format!("i{i}"));
    }
    let rows = (0..m)
        .map(|_| {
            let n = rng.gen_range(len.clone());
            (0..n)
                .map(|_| {
                    let a = rng.gen_range(0..alphabet);
                    let b = rng.gen_range(0..alphabet);
                    Item(a.min(b) as u32)
                })
                .collect()
        })
        .collect();
    SequenceDatabase::from_items(catalog, rows).expect("generated rows are valid")
}
