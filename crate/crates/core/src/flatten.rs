//! Partition of an L-collection into flat antichains.
//!
//! `a ⪯ b` holds when `p(a) ⊆ p(b)` and `a` sits higher. Chains of `⪯` are
//! cliques, so the longest chain is at most ω, and grouping shapes by the
//! length of the longest chain ending at them yields at most ω antichains.
//! An antichain of `⪯` is exactly a flat collection.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{LCollection, LShape};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlattenError {
    #[error("longest nesting chain has {longest} shapes but omega is {omega}")]
    ChainExceedsOmega { longest: usize, omega: usize },
}

#[derive(Clone, Debug)]
pub struct FlattenResult {
    /// Flat classes; class `i` holds the shapes at level `i + 1`.
    pub classes: Vec<LCollection>,
    /// Class index of each input shape, by input position.
    pub class_of: Vec<usize>,
    /// Input positions in each class, ascending.
    pub members: Vec<Vec<usize>>,
}

/// `a ⪯ b`: `p(a) ⊆ p(b)` and `h(a) > h(b)`.
pub fn precedes(a: &LShape, b: &LShape) -> bool {
    a.projection_within(b) && a.height > b.height
}

/// Level of each shape: the length of the longest `⪯`-chain ending at it.
pub fn chain_levels(collection: &LCollection) -> Vec<usize> {
    let shapes = collection.shapes();
    let n = shapes.len();
    // A strict predecessor has a strictly narrower projection, so widths
    // ascending is a linear extension.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| width_cmp(shapes, a, b).then_with(|| shapes[a].left.cmp(&shapes[b].left)));
    let mut level = vec![0usize; n];
    for (k, &i) in order.iter().enumerate() {
        let below = order[..k]
            .iter()
            .filter(|&&j| precedes(&shapes[j], &shapes[i]))
            .map(|&j| level[j])
            .max()
            .unwrap_or(0);
        level[i] = below + 1;
    }
    level
}

fn width_cmp(shapes: &[LShape], a: usize, b: usize) -> core::cmp::Ordering {
    // r_a - l_a vs r_b - l_b without subtraction: compare r_a + l_b with r_b + l_a.
    let (sa, sb) = (&shapes[a], &shapes[b]);
    let lhs = sa.right.midpoint(&sb.left);
    let rhs = sb.right.midpoint(&sa.left);
    lhs.cmp(&rhs)
}

pub fn flatten_partition(collection: &LCollection, omega: usize) -> Result<FlattenResult, FlattenError> {
    let level = chain_levels(collection);
    let longest = level.iter().copied().max().unwrap_or(0);
    if longest > omega {
        return Err(FlattenError::ChainExceedsOmega { longest, omega });
    }
    let mut members = vec![Vec::new(); longest];
    for (i, &l) in level.iter().enumerate() {
        members[l - 1].push(i);
    }
    let classes = members.iter().map(|m| collection.subset(m)).collect();
    Ok(FlattenResult {
        classes,
        class_of: level.iter().map(|l| l - 1).collect(),
        members,
    })
}
