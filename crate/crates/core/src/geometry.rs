//! Grounded L-shapes and L-collections.
//!
//! A grounded L-shape is the union of a vertical segment `{left} x [0, height]`
//! and a horizontal segment `[left, right] x {height}` meeting at the corner
//! `(left, height)`. An L-collection keeps all `2n` projection endpoints and
//! all `n` heights pairwise distinct, which makes every intersection question
//! a strict comparison.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::coord::Coord;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("shapes `{first}` and `{second}` share a {what}")]
    DistinctnessViolation {
        first: String,
        second: String,
        what: &'static str,
    },
    #[error("shape `{0}` has a non-positive height")]
    NonPositiveHeight(String),
    #[error("shape `{0}` has left endpoint not strictly below its right endpoint")]
    EmptyProjection(String),
    #[error("shape id `{0}` occurs more than once")]
    DuplicateId(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LShape {
    pub id: String,
    pub left: Coord,
    pub right: Coord,
    pub height: Coord,
}

impl LShape {
    pub fn new(id: impl Into<String>, left: Coord, right: Coord, height: Coord) -> Self {
        LShape {
            id: id.into(),
            left,
            right,
            height,
        }
    }

    /// Shorthand for integer coordinates.
    pub fn int(id: impl Into<String>, left: i64, right: i64, height: i64) -> Self {
        Self::new(id, left.into(), right.into(), height.into())
    }

    pub fn corner(&self) -> (&Coord, &Coord) {
        (&self.left, &self.height)
    }

    /// Whether `x` lies in the closed projection `[left, right]`.
    pub fn projection_contains(&self, x: &Coord) -> bool {
        &self.left <= x && x <= &self.right
    }

    /// `p(self) ⊆ p(other)`.
    pub fn projection_within(&self, other: &LShape) -> bool {
        other.left <= self.left && self.right <= other.right
    }

    /// Intersection test for two shapes in general position.
    ///
    /// With distinct endpoints and heights the closed point sets meet exactly
    /// when the later-starting shape's vertical passes through the earlier
    /// shape's horizontal.
    pub fn crosses(&self, other: &LShape) -> bool {
        (self.left < other.left && other.left < self.right && other.height > self.height)
            || (other.left < self.left && self.left < other.right && self.height > other.height)
    }

    fn ensure_well_formed(&self) -> Result<(), GeometryError> {
        if self.left >= self.right {
            return Err(GeometryError::EmptyProjection(self.id.clone()));
        }
        if !self.height.is_positive() {
            return Err(GeometryError::NonPositiveHeight(self.id.clone()));
        }
        Ok(())
    }
}

/// Checked intersection test.
///
/// A shape intersects itself. Two different shapes that share an endpoint or a
/// height are rejected, since touching configurations are outside the model.
pub fn intersects(a: &LShape, b: &LShape) -> Result<bool, GeometryError> {
    if a == b {
        return Ok(true);
    }
    a.ensure_well_formed()?;
    b.ensure_well_formed()?;
    if let Some(what) = shared_value(a, b) {
        return Err(GeometryError::DistinctnessViolation {
            first: a.id.clone(),
            second: b.id.clone(),
            what,
        });
    }
    Ok(a.crosses(b))
}

fn shared_value(a: &LShape, b: &LShape) -> Option<&'static str> {
    let xs = [&a.left, &a.right];
    if xs.contains(&&b.left) || xs.contains(&&b.right) {
        return Some("projection endpoint");
    }
    if a.height == b.height {
        return Some("height");
    }
    None
}

/// An immutable, validated L-collection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LCollection {
    shapes: Vec<LShape>,
    flat: bool,
    index: BTreeMap<String, usize>,
}

impl LCollection {
    pub fn empty() -> Self {
        LCollection {
            shapes: Vec::new(),
            flat: true,
            index: BTreeMap::new(),
        }
    }

    pub fn shapes(&self) -> &[LShape] {
        &self.shapes
    }

    pub fn shape(&self, i: usize) -> &LShape {
        &self.shapes[i]
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn is_flat(&self) -> bool {
        self.flat
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn into_shapes(self) -> Vec<LShape> {
        self.shapes
    }

    /// The sub-collection on the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> LCollection {
        let shapes: Vec<LShape> = indices.iter().map(|&i| self.shapes[i].clone()).collect();
        let flat = flatness_violation(&shapes).is_none();
        let index = shapes
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();
        LCollection {
            shapes,
            flat,
            index,
        }
    }

    /// Every projection endpoint, sorted.
    pub fn sorted_endpoints(&self) -> Vec<Coord> {
        let mut xs: Vec<Coord> = self
            .shapes
            .iter()
            .flat_map(|s| [s.left.clone(), s.right.clone()])
            .collect();
        xs.sort();
        xs
    }

    /// Whether `x` is a projection endpoint of some shape.
    pub fn is_endpoint(&self, x: &Coord) -> bool {
        self.shapes.iter().any(|s| &s.left == x || &s.right == x)
    }
}

/// First pair `(i, j)` with `p(L_i) ⊆ p(L_j)` and `h(L_i) > h(L_j)`.
pub fn flatness_violation(shapes: &[LShape]) -> Option<(usize, usize)> {
    for (i, a) in shapes.iter().enumerate() {
        for (j, b) in shapes.iter().enumerate() {
            if i != j && a.projection_within(b) && a.height > b.height {
                return Some((i, j));
            }
        }
    }
    None
}

/// Checks the L-collection invariants and computes the flat flag.
pub fn validate_collection(shapes: Vec<LShape>) -> Result<LCollection, GeometryError> {
    let mut index = BTreeMap::new();
    for (i, s) in shapes.iter().enumerate() {
        s.ensure_well_formed()?;
        if index.insert(s.id.clone(), i).is_some() {
            return Err(GeometryError::DuplicateId(s.id.clone()));
        }
    }

    let mut xs: Vec<(&Coord, usize)> = shapes
        .iter()
        .enumerate()
        .flat_map(|(i, s)| [(&s.left, i), (&s.right, i)])
        .collect();
    xs.sort();
    for w in xs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(GeometryError::DistinctnessViolation {
                first: shapes[w[0].1].id.clone(),
                second: shapes[w[1].1].id.clone(),
                what: "projection endpoint",
            });
        }
    }

    let mut hs: Vec<(&Coord, usize)> = shapes.iter().enumerate().map(|(i, s)| (&s.height, i)).collect();
    hs.sort();
    for w in hs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(GeometryError::DistinctnessViolation {
                first: shapes[w[0].1].id.clone(),
                second: shapes[w[1].1].id.clone(),
                what: "height",
            });
        }
    }

    let flat = flatness_violation(&shapes).is_none();
    Ok(LCollection {
        shapes,
        flat,
        index,
    })
}

/// Order-preserving remap onto distinct integers.
///
/// All `2n` x-values are ranked by `(value, id, left-before-right)` and
/// replaced by their rank; heights are ranked by `(value, id)` and replaced by
/// `rank + 1`. Strict inequalities between original values survive, and ties
/// are broken by id. Ids must be unique.
pub fn canonicalize(shapes: &[LShape]) -> Result<LCollection, GeometryError> {
    let n = shapes.len();
    let mut xs: Vec<(&Coord, &str, u8, usize)> = Vec::with_capacity(2 * n);
    for (i, s) in shapes.iter().enumerate() {
        xs.push((&s.left, &s.id, 0, i));
        xs.push((&s.right, &s.id, 1, i));
    }
    xs.sort();
    let mut left = alloc::vec![0i64; n];
    let mut right = alloc::vec![0i64; n];
    for (rank, &(_, _, kind, i)) in xs.iter().enumerate() {
        if kind == 0 {
            left[i] = rank as i64;
        } else {
            right[i] = rank as i64;
        }
    }

    let mut hs: Vec<(&Coord, &str, usize)> = shapes
        .iter()
        .enumerate()
        .map(|(i, s)| (&s.height, s.id.as_str(), i))
        .collect();
    hs.sort();
    let mut height = alloc::vec![0i64; n];
    for (rank, &(_, _, i)) in hs.iter().enumerate() {
        height[i] = rank as i64 + 1;
    }

    // A shape whose left and right coincide keeps left < right because the
    // left endpoint sorts first at a tie.
    let remapped = shapes
        .iter()
        .enumerate()
        .map(|(i, s)| LShape::int(s.id.clone(), left[i], right[i], height[i]))
        .collect();
    validate_collection(remapped)
}
