//! Generators shared by the property tests.
#![allow(dead_code)]

use lchroma_core::geometry::{validate_collection, LCollection, LShape};
use proptest::prelude::*;

/// Integer `(l, r, h)` triples in general position: endpoints are a shuffle of
/// `0..2n`, heights a shuffle of `1..=n`.
pub fn triples(max_n: usize) -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    (0..=max_n)
        .prop_flat_map(|n| {
            (
                Just((0..2 * n as i64).collect::<Vec<_>>()).prop_shuffle(),
                Just((1..=n as i64).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(slots, hs)| {
            (0..hs.len())
                .map(|i| {
                    let (a, b) = (slots[2 * i], slots[2 * i + 1]);
                    (a.min(b), a.max(b), hs[i])
                })
                .collect()
        })
}

pub fn shapes_of(t: &[(i64, i64, i64)]) -> Vec<LShape> {
    t.iter().enumerate().map(|(i, &(l, r, h))| LShape::int(format!("s{i}"), l, r, h)).collect()
}

pub fn collection(max_n: usize) -> impl Strategy<Value = LCollection> {
    triples(max_n).prop_map(|t| validate_collection(shapes_of(&t)).unwrap())
}

/// Flat collections: heights are re-ranked so wider shapes sit higher.
pub fn flat_collection(max_n: usize) -> impl Strategy<Value = LCollection> {
    triples(max_n).prop_map(|mut t| {
        let mut by_width: Vec<usize> = (0..t.len()).collect();
        by_width.sort_by_key(|&i| (t[i].1 - t[i].0, t[i].0));
        for (rank, &i) in by_width.iter().enumerate() {
            t[i].2 = rank as i64 + 1;
        }
        validate_collection(shapes_of(&t)).unwrap()
    })
}
