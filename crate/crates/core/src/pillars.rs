//! Pillars, pillar assignments, segment degrees and cascading shapes.
//!
//! A pillar starts at `(b, 0)` and climbs. When it reaches the horizontal of a
//! shape whose projection contains `b` it walks left along that horizontal to
//! the shape's corner, then climbs again. It stops the moment it touches an
//! earlier pillar, and otherwise ends in an infinite vertical ray.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coord::{Coord, Extended};
use crate::geometry::{LCollection, LShape};
use crate::graph::{build_intersection_graph, GraphError, IntersectionGraph, PermutationInstance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PillarError {
    #[error("invalid base {0}: {1}")]
    InvalidBase(Coord, &'static str),
    #[error("shape `{0}` does not meet the pillar")]
    ShapeNotOnPillar(String),
    #[error("interval ({0}, {1}) is not inside the segment")]
    JNotInSegment(Extended, Extended),
    #[error("({0}, {1}) is not a segment of the current bases")]
    NotASegment(Extended, Extended),
    #[error("intervals of the family overlap or leave the segment")]
    BadIntervalFamily,
    #[error("tuple is not cascading: {0}")]
    NotCascading(&'static str),
    #[error("clique extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("pillar color list has {colors} entries for {bases} bases")]
    ColorCountMismatch { bases: usize, colors: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Top {
    Infinite,
    /// Drawing stopped on contact with the pillar at this index.
    TerminatesOn { pillar: usize, point: Point },
}

/// One axis-parallel piece of a pillar, as a closed point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    /// `{x} × [y0, y1]`, or the ray `{x} × [y0, ∞)` when `y1` is `None`.
    Vertical { x: Coord, y0: Coord, y1: Option<Coord> },
    /// `[x0, x1] × {y}` with `x0 < x1`, lying on the horizontal of `support`.
    Horizontal { y: Coord, x0: Coord, x1: Coord, support: usize },
}

impl Piece {
    pub fn is_horizontal(&self) -> bool {
        matches!(self, Piece::Horizontal { .. })
    }

    /// Closed intersection with a shape.
    pub fn meets_shape(&self, s: &LShape) -> bool {
        let zero = Coord::zero();
        match self {
            Piece::Vertical { x, y0, y1 } => {
                let up_to = |v: &Coord| y1.as_ref().is_none_or(|t| v <= t);
                let on_vertical = *x == s.left && y0 <= &s.height && up_to(&zero);
                let on_horizontal = s.projection_contains(x) && y0 <= &s.height && up_to(&s.height);
                on_vertical || on_horizontal
            }
            Piece::Horizontal { y, x0, x1, .. } => {
                let on_vertical = x0 <= &s.left && s.left <= *x1 && &zero <= y && y <= &s.height;
                let on_horizontal = *y == s.height && x0 <= &s.right && s.left <= *x1;
                on_vertical || on_horizontal
            }
        }
    }

    /// Closed intersection with the box `p(s) × [0, h(s)]`.
    pub fn meets_box_under(&self, s: &LShape) -> bool {
        match self {
            Piece::Vertical { x, y0, .. } => s.projection_contains(x) && y0 <= &s.height,
            Piece::Horizontal { y, x0, x1, .. } => y <= &s.height && x0 <= &s.right && s.left <= *x1,
        }
    }

    /// Whether the point lies on the piece.
    pub fn contains_point(&self, p: &Point) -> bool {
        match self {
            Piece::Vertical { x, y0, y1 } => *x == p.x && y0 <= &p.y && y1.as_ref().is_none_or(|t| &p.y <= t),
            Piece::Horizontal { y, x0, x1, .. } => *y == p.y && x0 <= &p.x && p.x <= *x1,
        }
    }
}

/// A drawn pillar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pillar {
    base: Coord,
    corners: Vec<Point>,
    top: Top,
    supports: Vec<usize>,
    pieces: Vec<Piece>,
}

impl Pillar {
    fn from_walk(base: Coord, corners: Vec<Point>, top: Top, supports: Vec<usize>) -> Self {
        let mut pieces = Vec::new();
        let mut next_support = supports.iter();
        for w in corners.windows(2) {
            if w[0].x == w[1].x {
                pieces.push(Piece::Vertical {
                    x: w[0].x.clone(),
                    y0: w[0].y.clone(),
                    y1: Some(w[1].y.clone()),
                });
            } else {
                pieces.push(Piece::Horizontal {
                    y: w[0].y.clone(),
                    x0: w[1].x.clone(),
                    x1: w[0].x.clone(),
                    support: *next_support.next().expect("one support per horizontal piece"),
                });
            }
        }
        if top == Top::Infinite {
            let last = corners.last().expect("corners start at the base");
            pieces.push(Piece::Vertical {
                x: last.x.clone(),
                y0: last.y.clone(),
                y1: None,
            });
        }
        Pillar {
            base,
            corners,
            top,
            supports,
            pieces,
        }
    }

    pub fn base(&self) -> &Coord {
        &self.base
    }

    /// Turning points from `(base, 0)`; a terminated pillar ends at its
    /// contact point, an infinite one continues upward from the last point.
    pub fn corners(&self) -> &[Point] {
        &self.corners
    }

    pub fn top(&self) -> &Top {
        &self.top
    }

    /// Shape indices in the order they were met.
    pub fn supports(&self) -> &[usize] {
        &self.supports
    }

    /// Pieces in drawing order.
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        self.pieces.iter().any(|pc| pc.contains_point(p)) || self.corners.last() == Some(p)
    }
}

fn validate_base(collection: &LCollection, existing: &[Pillar], base: &Coord) -> Result<(), PillarError> {
    if collection.is_endpoint(base) {
        return Err(PillarError::InvalidBase(base.clone(), "coincides with a projection endpoint"));
    }
    if existing.iter().any(|p| &p.base == base) {
        return Err(PillarError::InvalidBase(base.clone(), "already used"));
    }
    Ok(())
}

/// First contact of the upward ray from `(x, y)` with earlier pillars.
fn contact_up(existing: &[Pillar], x: &Coord, y: &Coord) -> Option<(Coord, usize)> {
    let mut best: Option<(Coord, usize)> = None;
    for (idx, p) in existing.iter().enumerate() {
        for pc in &p.pieces {
            let hit = match pc {
                Piece::Horizontal { y: yh, x0, x1, .. } => (x0 <= x && x <= x1 && yh >= y).then(|| yh.clone()),
                Piece::Vertical { x: xv, y0, y1 } => {
                    (xv == x && y1.as_ref().is_none_or(|t| t >= y)).then(|| core::cmp::max(y0, y).clone())
                }
            };
            if let Some(h) = hit {
                if best.as_ref().is_none_or(|(b, _)| h < *b) {
                    best = Some((h, idx));
                }
            }
        }
    }
    best
}

/// First contact of the leftward walk from `(x, y)` to `(stop, y)`.
fn contact_left(existing: &[Pillar], x: &Coord, y: &Coord, stop: &Coord) -> Option<(Coord, usize)> {
    let mut best: Option<(Coord, usize)> = None;
    for (idx, p) in existing.iter().enumerate() {
        for pc in &p.pieces {
            let hit = match pc {
                Piece::Vertical { x: xv, y0, y1 } => {
                    (stop <= xv && xv <= x && y0 <= y && y1.as_ref().is_none_or(|t| y <= t)).then(|| xv.clone())
                }
                Piece::Horizontal { y: yh, x0, x1, .. } => {
                    (yh == y && x0 <= x && x1 >= stop).then(|| core::cmp::min(x1, x).clone())
                }
            };
            if let Some(h) = hit {
                if best.as_ref().is_none_or(|(b, _)| h > *b) {
                    best = Some((h, idx));
                }
            }
        }
    }
    best
}

/// Draws the pillar at `base` on top of `existing`.
pub fn draw_pillar(collection: &LCollection, existing: &[Pillar], base: &Coord) -> Result<Pillar, PillarError> {
    validate_base(collection, existing, base)?;
    let shapes = collection.shapes();
    let mut corners = vec![Point::new(base.clone(), Coord::zero())];
    let mut supports = Vec::new();
    let mut x = base.clone();
    let mut y = Coord::zero();
    loop {
        let contact = contact_up(existing, &x, &y);
        // Lowest horizontal above the walker that covers the base and is met
        // away from its corner.
        let ledge = shapes
            .iter()
            .enumerate()
            .filter(|(_, s)| s.height > y && s.left < x && base < &s.right)
            .min_by(|a, b| a.1.height.cmp(&b.1.height));

        match (contact, ledge) {
            (Some((cy, idx)), ledge) if ledge.is_none_or(|(_, s)| cy <= s.height) => {
                let point = Point::new(x, cy);
                if corners.last() != Some(&point) {
                    corners.push(point.clone());
                }
                return Ok(Pillar::from_walk(
                    base.clone(),
                    corners,
                    Top::TerminatesOn { pillar: idx, point },
                    supports,
                ));
            }
            (_, Some((si, s))) => {
                y = s.height.clone();
                corners.push(Point::new(x.clone(), y.clone()));
                supports.push(si);
                if let Some((cx, idx)) = contact_left(existing, &x, &y, &s.left) {
                    let point = Point::new(cx, y);
                    corners.push(point.clone());
                    return Ok(Pillar::from_walk(
                        base.clone(),
                        corners,
                        Top::TerminatesOn { pillar: idx, point },
                        supports,
                    ));
                }
                x = s.left.clone();
                corners.push(Point::new(x.clone(), y.clone()));
            }
            (None, None) => return Ok(Pillar::from_walk(base.clone(), corners, Top::Infinite, supports)),
            (Some(_), None) => unreachable!("handled by the first arm"),
        }
    }
}

/// Draws pillars for `bases` in placement order.
pub fn draw_all(collection: &LCollection, bases: &[Coord]) -> Result<Vec<Pillar>, PillarError> {
    let mut pillars = Vec::with_capacity(bases.len());
    for b in bases {
        let p = draw_pillar(collection, &pillars, b)?;
        pillars.push(p);
    }
    Ok(pillars)
}

pub fn shape_pillar_intersects(shape: &LShape, pillar: &Pillar) -> bool {
    pillar.pieces.iter().any(|pc| pc.meets_shape(shape))
}

/// `φ`: the index of the earliest pillar meeting each shape.
pub fn assign_shapes(collection: &LCollection, pillars: &[Pillar]) -> Vec<Option<usize>> {
    collection
        .shapes()
        .iter()
        .map(|s| pillars.iter().position(|p| shape_pillar_intersects(s, p)))
        .collect()
}

/// Pairs `(shape, pillar)` where the box under the shape meets the pillar but
/// the shape is not assigned to that pillar or an earlier one.
pub fn box_order_violations(
    collection: &LCollection,
    pillars: &[Pillar],
    assignment: &[Option<usize>],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (si, s) in collection.shapes().iter().enumerate() {
        for (pi, p) in pillars.iter().enumerate() {
            if p.pieces.iter().any(|pc| pc.meets_box_under(s)) && assignment[si].is_none_or(|a| a > pi) {
                out.push((si, pi));
            }
        }
    }
    out
}

/// Splits the shapes on a pillar into those touching one of its horizontal
/// pieces and the rest, each as a permutation instance ordered by left
/// endpoint and by height descending.
pub fn split_pillar_class(
    collection: &LCollection,
    pillar: &Pillar,
    assigned: &[usize],
) -> Result<(PermutationInstance, PermutationInstance), PillarError> {
    let shapes = collection.shapes();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for &i in assigned {
        let s = &shapes[i];
        if !shape_pillar_intersects(s, pillar) {
            return Err(PillarError::ShapeNotOnPillar(s.id.clone()));
        }
        if pillar.pieces.iter().any(|pc| pc.is_horizontal() && pc.meets_shape(s)) {
            first.push(i);
        } else {
            second.push(i);
        }
    }
    Ok((permutation_of(shapes, first)?, permutation_of(shapes, second)?))
}

fn permutation_of(shapes: &[LShape], members: Vec<usize>) -> Result<PermutationInstance, PillarError> {
    let mut by_left = members.clone();
    by_left.sort_by(|&a, &b| shapes[a].left.cmp(&shapes[b].left));
    let mut by_height = members;
    by_height.sort_by(|&a, &b| shapes[b].height.cmp(&shapes[a].height));
    Ok(PermutationInstance::new(by_left, by_height)?)
}

/// Ordered, colored pillars over a collection, with the induced `φ`.
#[derive(Clone, Debug)]
pub struct PillarAssignment {
    collection: LCollection,
    graph: IntersectionGraph,
    pillars: Vec<Pillar>,
    colors: Vec<u32>,
    assignment: Vec<Option<usize>>,
}

impl PillarAssignment {
    pub fn empty(collection: LCollection) -> Self {
        let graph = build_intersection_graph(&collection);
        let n = collection.len();
        PillarAssignment {
            collection,
            graph,
            pillars: Vec::new(),
            colors: Vec::new(),
            assignment: vec![None; n],
        }
    }

    /// Draws `bases` in order and colors pillar `i` with `colors[i]`.
    pub fn from_bases(collection: LCollection, bases: &[Coord], colors: &[u32]) -> Result<Self, PillarError> {
        Self::empty(collection).with_pillars(bases, colors)
    }

    /// A new assignment with extra pillars placed after all existing ones.
    pub fn with_pillars(&self, bases: &[Coord], colors: &[u32]) -> Result<Self, PillarError> {
        if bases.len() != colors.len() {
            return Err(PillarError::ColorCountMismatch {
                bases: bases.len(),
                colors: colors.len(),
            });
        }
        let mut next = self.clone();
        let first_new = next.pillars.len();
        for (b, &c) in bases.iter().zip(colors) {
            let p = draw_pillar(&next.collection, &next.pillars, b)?;
            next.pillars.push(p);
            next.colors.push(c);
        }
        // Earlier pillars are untouched, so only unassigned shapes can change.
        let shapes = next.collection.shapes();
        for (i, a) in next.assignment.iter_mut().enumerate() {
            if a.is_none() {
                *a = next.pillars[first_new..]
                    .iter()
                    .position(|p| shape_pillar_intersects(&shapes[i], p))
                    .map(|k| k + first_new);
            }
        }
        Ok(next)
    }

    pub fn collection(&self) -> &LCollection {
        &self.collection
    }

    pub fn graph(&self) -> &IntersectionGraph {
        &self.graph
    }

    pub fn pillars(&self) -> &[Pillar] {
        &self.pillars
    }

    pub fn bases(&self) -> Vec<Coord> {
        self.pillars.iter().map(|p| p.base.clone()).collect()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// `φ` by shape index.
    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    /// Pillar color of a shape, if assigned.
    pub fn shape_color(&self, shape: usize) -> Option<u32> {
        self.assignment[shape].map(|p| self.colors[p])
    }

    pub fn colored_count(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    /// Shapes assigned to pillar `p`, ascending.
    pub fn pillar_class(&self, p: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == Some(p)).collect()
    }

    /// An intersecting pair on distinct pillars of one color, if any.
    pub fn validity_violation(&self) -> Option<(usize, usize)> {
        self.graph.edges().into_iter().find(|&(a, b)| match (self.assignment[a], self.assignment[b]) {
            (Some(p), Some(q)) => p != q && self.colors[p] == self.colors[q],
            _ => false,
        })
    }

    pub fn box_order_violations(&self) -> Vec<(usize, usize)> {
        box_order_violations(&self.collection, &self.pillars, &self.assignment)
    }

    pub fn segments(&self) -> Vec<OpenInterval> {
        segments(&self.bases())
    }
}

/// An open interval of the extended line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenInterval {
    pub lo: Extended,
    pub hi: Extended,
}

impl OpenInterval {
    pub fn new(lo: Extended, hi: Extended) -> Self {
        OpenInterval { lo, hi }
    }

    pub fn whole() -> Self {
        Self::new(Extended::NegInf, Extended::PosInf)
    }

    pub fn contains(&self, x: &Coord) -> bool {
        self.lo.lt_coord(x) && self.hi.gt_coord(x)
    }

    pub fn within(&self, outer: &OpenInterval) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }
}

/// The segments of `R \ bases`, left to right.
pub fn segments(bases: &[Coord]) -> Vec<OpenInterval> {
    let mut sorted: Vec<Extended> = bases.iter().cloned().map(Extended::Finite).collect();
    sorted.sort();
    let mut ends = vec![Extended::NegInf];
    ends.extend(sorted);
    ends.push(Extended::PosInf);
    ends.windows(2).map(|w| OpenInterval::new(w[0].clone(), w[1].clone())).collect()
}

/// The segment containing `x`, which must not be a base.
pub fn segment_containing(bases: &[Coord], x: &Coord) -> Option<OpenInterval> {
    segments(bases).into_iter().find(|s| s.contains(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub dl: usize,
    pub da: usize,
    pub dr: usize,
    pub nl: Vec<usize>,
    pub na: Vec<usize>,
    pub nr: Vec<usize>,
    pub degree: usize,
}

fn is_segment_of(state: &PillarAssignment, s: &OpenInterval) -> bool {
    let is_end = |e: &Extended| match e {
        Extended::Finite(c) => state.pillars.iter().any(|p| &p.base == c),
        _ => true,
    };
    !s.is_empty() && is_end(&s.lo) && is_end(&s.hi) && !state.pillars.iter().any(|p| s.contains(&p.base))
}

/// Left, additional and right neighbourhoods of `j` inside the segment `s`.
pub fn compute_degrees(state: &PillarAssignment, s: &OpenInterval, j: &OpenInterval) -> Result<DegreeReport, PillarError> {
    DegreeTable::new(state, s)?.degrees(j)
}

/// Degree queries for many intervals of one segment.
///
/// Endpoints are replaced by their ranks, so an interval is reduced to the
/// half-open rank range `[lo, hi)` of the endpoints it contains.
pub struct DegreeTable<'a> {
    state: &'a PillarAssignment,
    segment: OpenInterval,
    endpoints: Vec<Coord>,
    left_rank: Vec<usize>,
    right_rank: Vec<usize>,
    /// `lefts_before[q]`: left endpoints among ranks `0..q`.
    lefts_before: Vec<usize>,
    /// Pillars based at or left of the segment's left end, reached through
    /// a neighbour of each shape.
    left_neighbour_pillars: Vec<Vec<usize>>,
    /// The pillar of each shape when it is based at or right of the right end.
    right_pillar: Vec<Option<usize>>,
    segment_ranks: (usize, usize),
}

impl<'a> DegreeTable<'a> {
    pub fn new(state: &'a PillarAssignment, s: &OpenInterval) -> Result<Self, PillarError> {
        if !is_segment_of(state, s) {
            return Err(PillarError::NotASegment(s.lo.clone(), s.hi.clone()));
        }
        let shapes = state.collection.shapes();
        let n = shapes.len();
        let mut tagged: Vec<(&Coord, usize, bool)> = Vec::with_capacity(2 * n);
        for (i, t) in shapes.iter().enumerate() {
            tagged.push((&t.left, i, true));
            tagged.push((&t.right, i, false));
        }
        tagged.sort();
        let mut left_rank = vec![0; n];
        let mut right_rank = vec![0; n];
        let mut lefts_before = vec![0; 2 * n + 1];
        for (q, &(_, i, is_left)) in tagged.iter().enumerate() {
            if is_left {
                left_rank[i] = q;
            } else {
                right_rank[i] = q;
            }
            lefts_before[q + 1] = lefts_before[q] + is_left as usize;
        }
        let endpoints: Vec<Coord> = tagged.iter().map(|t| t.0.clone()).collect();

        let base_of = |p: usize| Extended::Finite(state.pillars[p].base.clone());
        let left_of: Vec<Option<usize>> = state.assignment.iter().map(|a| a.filter(|&p| base_of(p) <= s.lo)).collect();
        let left_neighbour_pillars = (0..n)
            .map(|k| {
                let mut ps: Vec<usize> = state.graph.neighbors(k).filter_map(|nb| left_of[nb]).collect();
                ps.sort_unstable();
                ps.dedup();
                ps
            })
            .collect();
        let right_pillar = state.assignment.iter().map(|a| a.filter(|&p| base_of(p) >= s.hi)).collect();
        let mut table = DegreeTable {
            state,
            segment: s.clone(),
            endpoints,
            left_rank,
            right_rank,
            lefts_before,
            left_neighbour_pillars,
            right_pillar,
            segment_ranks: (0, 0),
        };
        table.segment_ranks = table.ranks(s);
        Ok(table)
    }

    pub fn segment(&self) -> &OpenInterval {
        &self.segment
    }

    /// Sorted endpoints of the collection.
    pub fn endpoints(&self) -> &[Coord] {
        &self.endpoints
    }

    /// Rank range `[lo, hi)` of the endpoints inside the open interval.
    pub fn ranks(&self, j: &OpenInterval) -> (usize, usize) {
        let lo = match &j.lo {
            Extended::NegInf => 0,
            Extended::Finite(x) => self.endpoints.partition_point(|e| e <= x),
            Extended::PosInf => self.endpoints.len(),
        };
        let hi = match &j.hi {
            Extended::NegInf => 0,
            Extended::Finite(y) => self.endpoints.partition_point(|e| e < y),
            Extended::PosInf => self.endpoints.len(),
        };
        (lo, hi.max(lo))
    }

    pub fn degrees(&self, j: &OpenInterval) -> Result<DegreeReport, PillarError> {
        if j.is_empty() || !j.within(&self.segment) {
            return Err(PillarError::JNotInSegment(j.lo.clone(), j.hi.clone()));
        }
        let (lo, hi) = self.ranks(j);
        Ok(self.degrees_by_rank(lo, hi))
    }

    /// Degrees of an interval inside the segment containing exactly the
    /// endpoints of ranks `lo..hi`.
    pub fn degrees_by_rank(&self, lo: usize, hi: usize) -> DegreeReport {
        let pillars = self.state.pillars.len();
        let mut in_nl = vec![false; pillars];
        let mut in_na = vec![false; pillars];
        let mut in_nr = vec![false; pillars];
        let seg_hi = self.segment_ranks.1;
        for k in 0..self.left_rank.len() {
            let (l, r) = (self.left_rank[k], self.right_rank[k]);
            if l < lo || l >= hi {
                continue;
            }
            let inside = r < hi;
            let additional = r < seg_hi && self.lefts_before[r + 1] == self.lefts_before[hi.min(r + 1)];
            if inside || additional {
                for &p in &self.left_neighbour_pillars[k] {
                    in_na[p] = true;
                    if inside {
                        in_nl[p] = true;
                    }
                }
            }
            if let Some(p) = self.right_pillar[k] {
                in_nr[p] = true;
            }
        }
        let collect = |v: &[bool]| (0..v.len()).filter(|&i| v[i]).collect::<Vec<_>>();
        let (nl, na, nr) = (collect(&in_nl), collect(&in_na), collect(&in_nr));
        DegreeReport {
            dl: nl.len(),
            da: na.len(),
            dr: nr.len(),
            degree: nl.len() + nr.len(),
            nl,
            na,
            nr,
        }
    }
}

/// Shapes `L_1..L_t` with pillars `P_1..P_t`, listed left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cascading {
    pub shapes: Vec<usize>,
    pub pillars: Vec<usize>,
}

/// Re-checks the three cascading conditions.
pub fn is_cascading(state: &PillarAssignment, c: &Cascading) -> Result<(), PillarError> {
    let t = c.shapes.len();
    if t == 0 || c.pillars.len() != t {
        return Err(PillarError::NotCascading("shape and pillar lists must be non-empty and equally long"));
    }
    let shapes = state.collection.shapes();
    let s = |i: usize| &shapes[c.shapes[i]];
    let base = |i: usize| &state.pillars[c.pillars[i]].base;
    for i in 0..t - 1 {
        if s(i).left >= s(i + 1).left || base(i) >= base(i + 1) {
            return Err(PillarError::NotCascading("left endpoints and bases must increase"));
        }
        if s(i).height <= s(i + 1).height {
            return Err(PillarError::NotCascading("heights must decrease"));
        }
        if c.pillars[i] <= c.pillars[i + 1] {
            return Err(PillarError::NotCascading("pillars must be placed in reverse"));
        }
        if state.assignment[c.shapes[i]] != Some(c.pillars[i]) {
            return Err(PillarError::NotCascading("each shape but the last must be assigned to its pillar"));
        }
    }
    if &s(t - 1).left >= base(0) {
        return Err(PillarError::NotCascading("every left endpoint must precede every base"));
    }
    if !state.pillars[c.pillars[t - 1]].supports.contains(&c.shapes[t - 1]) {
        return Err(PillarError::NotCascading("the last shape must support its pillar"));
    }
    Ok(())
}

/// Up to `limit` cascading tuples of length `t`, by a depth-first search that
/// visits at most `budget` nodes.
pub fn find_cascadings(state: &PillarAssignment, t: usize, budget: u64, limit: usize) -> Vec<Cascading> {
    let mut out = Vec::new();
    if t == 0 {
        return out;
    }
    let mut nodes = 0u64;
    for (pt, pillar) in state.pillars.iter().enumerate() {
        for &lt in &pillar.supports {
            let mut rev_shapes = vec![lt];
            let mut rev_pillars = vec![pt];
            cascade_dfs(state, t, &mut rev_shapes, &mut rev_pillars, &mut nodes, budget, limit, &mut out);
            if out.len() >= limit || nodes >= budget {
                return out;
            }
        }
    }
    out
}

pub fn find_cascading(state: &PillarAssignment, t: usize, budget: u64) -> Option<Cascading> {
    find_cascadings(state, t, budget, 1).pop()
}

#[allow(clippy::too_many_arguments)]
fn cascade_dfs(
    state: &PillarAssignment,
    t: usize,
    rev_shapes: &mut Vec<usize>,
    rev_pillars: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
    limit: usize,
    out: &mut Vec<Cascading>,
) {
    *nodes += 1;
    if *nodes > budget || out.len() >= limit {
        return;
    }
    if rev_shapes.len() == t {
        let mut shapes = rev_shapes.clone();
        let mut pillars = rev_pillars.clone();
        shapes.reverse();
        pillars.reverse();
        out.push(Cascading { shapes, pillars });
        return;
    }
    let all = state.collection.shapes();
    let last_shape = &all[rev_shapes[0]];
    let next_shape = &all[*rev_shapes.last().unwrap()];
    let next_pillar = *rev_pillars.last().unwrap();
    let next_base = &state.pillars[next_pillar].base;
    for (pi, p) in state.pillars.iter().enumerate().skip(next_pillar + 1) {
        if !(last_shape.left < p.base && &p.base < next_base) {
            continue;
        }
        for (si, s) in all.iter().enumerate() {
            if state.assignment[si] == Some(pi) && s.left < next_shape.left && s.height > next_shape.height {
                rev_shapes.push(si);
                rev_pillars.push(pi);
                cascade_dfs(state, t, rev_shapes, rev_pillars, nodes, budget, limit, out);
                rev_shapes.pop();
                rev_pillars.pop();
                if *nodes > budget || out.len() >= limit {
                    return;
                }
            }
        }
    }
}

/// The clique of a cascading tuple: pairwise intersecting shapes with
/// increasing left endpoints, the `i`-th supporting `P_i`, ending in `L_t`.
pub fn extract_clique_from_cascading(state: &PillarAssignment, c: &Cascading) -> Result<Vec<usize>, PillarError> {
    is_cascading(state, c)?;
    let t = c.shapes.len();
    if t == 1 {
        return Ok(c.shapes.clone());
    }
    let shapes = state.collection.shapes();
    let lt = c.shapes[t - 1];
    let prev = &state.pillars[c.pillars[t - 2]];
    let first = prev
        .pieces
        .iter()
        .find(|pc| pc.meets_shape(&shapes[lt]))
        .ok_or_else(|| PillarError::ExtractionFailed(format!("pillar {} misses `{}`", c.pillars[t - 2], shapes[lt].id)))?;
    let support = match first {
        Piece::Horizontal { support, y, .. } if *y < shapes[lt].height => *support,
        _ => {
            return Err(PillarError::ExtractionFailed(format!(
                "pillar {} does not first meet the vertical of `{}`",
                c.pillars[t - 2],
                shapes[lt].id
            )))
        }
    };
    let mut reduced = Cascading {
        shapes: c.shapes[..t - 1].to_vec(),
        pillars: c.pillars[..t - 1].to_vec(),
    };
    reduced.shapes[t - 2] = support;
    let mut clique = extract_clique_from_cascading(state, &reduced)?;
    clique.push(lt);
    Ok(clique)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalReport {
    pub intervals: usize,
    pub sum_da: i64,
    pub left_bound: i64,
    pub sum_dr: i64,
    pub right_bound: i64,
}

impl ExtremalReport {
    pub fn left_holds(&self) -> bool {
        self.intervals == 0 || self.sum_da <= self.left_bound
    }

    pub fn right_holds(&self) -> bool {
        self.intervals == 0 || self.sum_dr <= self.right_bound
    }

    pub fn holds(&self) -> bool {
        self.left_holds() && self.right_holds()
    }
}

/// Evaluates both extremal inequalities for a family of disjoint intervals
/// inside the segment `s`.
pub fn check_extremal_bounds(
    state: &PillarAssignment,
    s: &OpenInterval,
    family: &[OpenInterval],
    omega: usize,
) -> Result<ExtremalReport, PillarError> {
    if !is_segment_of(state, s) {
        return Err(PillarError::NotASegment(s.lo.clone(), s.hi.clone()));
    }
    let mut sorted = family.to_vec();
    sorted.sort();
    if sorted.iter().any(|j| j.is_empty() || !j.within(s)) || sorted.windows(2).any(|w| w[0].hi > w[1].lo) {
        return Err(PillarError::BadIntervalFamily);
    }
    let table = DegreeTable::new(state, s)?;
    let whole = table.degrees(s)?;
    let (mut sum_da, mut sum_dr) = (0i64, 0i64);
    for j in &sorted {
        let d = table.degrees(j)?;
        sum_da += d.da as i64;
        sum_dr += d.dr as i64;
    }
    let w = omega as i64;
    let m = sorted.len() as i64;
    Ok(ExtremalReport {
        intervals: sorted.len(),
        sum_da,
        left_bound: w * (m + whole.dl as i64 - 1),
        sum_dr,
        right_bound: 2 * w * (2 * w - 1) * (m + whole.dr as i64 - 1),
    })
}
