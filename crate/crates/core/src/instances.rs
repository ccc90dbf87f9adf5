//! Instance generators: random collections, interval embeddings and gadgets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coord::Coord;
use crate::geometry::{canonicalize, validate_collection, GeometryError, LCollection, LShape};
use crate::graph::{build_intersection_graph, clique_number, GraphError, IntersectionGraph, CLIQUE_NODE_BUDGET};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("intervals {0} and {1} share an endpoint")]
    SharedEndpoint(usize, usize),
    #[error("interval {0} is empty")]
    EmptyInterval(usize),
    #[error("representation of G_{n} does not match the gadget: {detail}")]
    RepresentationMismatch { n: usize, detail: String },
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// Left endpoints anywhere in `[0, 10n)`, lengths in `1..=30`, heights in `1..=10n`.
    Uniform,
    /// The uniform layout with heights redrawn so that nested shapes sit lower.
    Flat,
    /// A random perfect matching of `2n` slots, with random heights.
    Dense,
}

impl core::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Profile::Uniform),
            "flat" => Ok(Profile::Flat),
            "dense" => Ok(Profile::Dense),
            other => Err(format!("unknown profile `{other}`")),
        }
    }
}

fn shape_id(i: usize) -> String {
    format!("s{i}")
}

/// A seeded random collection; always a valid L-collection.
pub fn random_collection(n: usize, seed: u64, profile: Profile) -> LCollection {
    let mut rng = SplitMix64::new(seed);
    match profile {
        Profile::Uniform => canonicalize(&uniform_raw(n, &mut rng)).expect("ids are unique"),
        Profile::Flat => {
            let base = canonicalize(&uniform_raw(n, &mut rng)).expect("ids are unique");
            flat_heights(base.into_shapes(), &mut rng)
        }
        Profile::Dense => {
            let mut slots: Vec<i64> = (0..2 * n as i64).collect();
            rng.shuffle(&mut slots);
            let mut heights: Vec<i64> = (1..=n as i64).collect();
            rng.shuffle(&mut heights);
            let shapes = (0..n)
                .map(|i| {
                    let (a, b) = (slots[2 * i], slots[2 * i + 1]);
                    LShape::int(shape_id(i), a.min(b), a.max(b), heights[i])
                })
                .collect();
            validate_collection(shapes).expect("slots and heights are distinct")
        }
    }
}

fn uniform_raw(n: usize, rng: &mut SplitMix64) -> Vec<LShape> {
    let span = 10 * n.max(1) as i64;
    (0..n)
        .map(|i| {
            let l = rng.range_inclusive(0, span - 1);
            let len = rng.range_inclusive(1, 30);
            let h = rng.range_inclusive(1, span);
            LShape::int(shape_id(i), l, l + len, h)
        })
        .collect()
}

/// Reassigns heights along a random linear extension of projection
/// containment, so that every contained shape is lower.
fn flat_heights(shapes: Vec<LShape>, rng: &mut SplitMix64) -> LCollection {
    let n = shapes.len();
    let key: Vec<u64> = (0..n).map(|_| rng.next_u64()).collect();
    // inside[j] counts shapes whose projection lies within p(j).
    let mut inside = vec![0usize; n];
    let mut outer: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && shapes[i].projection_within(&shapes[j]) {
                inside[j] += 1;
                outer[i].push(j);
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| inside[i] == 0).collect();
    let mut height = vec![0i64; n];
    let mut next = 1;
    while !ready.is_empty() {
        let pick = (0..ready.len()).min_by_key(|&k| key[ready[k]]).expect("non-empty");
        let i = ready.swap_remove(pick);
        height[i] = next;
        next += 1;
        for &j in &outer[i] {
            inside[j] -= 1;
            if inside[j] == 0 {
                ready.push(j);
            }
        }
    }
    let shapes = shapes
        .into_iter()
        .enumerate()
        .map(|(i, s)| LShape::new(s.id, s.left, s.right, Coord::from_int(height[i])))
        .collect();
    validate_collection(shapes).expect("heights form a permutation")
}

fn check_intervals(intervals: &[(Coord, Coord)]) -> Result<(), InstanceError> {
    let mut ends: Vec<(&Coord, usize)> = Vec::with_capacity(2 * intervals.len());
    for (i, (a, b)) in intervals.iter().enumerate() {
        if a >= b {
            return Err(InstanceError::EmptyInterval(i));
        }
        ends.push((a, i));
        ends.push((b, i));
    }
    ends.sort();
    for w in ends.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(InstanceError::SharedEndpoint(w[0].1, w[1].1));
        }
    }
    Ok(())
}

fn ranks_by<F: Fn(&(Coord, Coord)) -> &Coord>(intervals: &[(Coord, Coord)], key: F) -> Vec<i64> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by(|&a, &b| key(&intervals[a]).cmp(key(&intervals[b])));
    let mut rank = vec![0; intervals.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r as i64 + 1;
    }
    rank
}

fn interval_shapes(intervals: &[(Coord, Coord)], heights: &[i64]) -> Result<LCollection, InstanceError> {
    let shapes = intervals
        .iter()
        .enumerate()
        .map(|(i, (a, b))| LShape::new(format!("i{i}"), a.clone(), b.clone(), Coord::from_int(heights[i])))
        .collect();
    Ok(validate_collection(shapes)?)
}

/// Shapes whose intersection graph is the overlap graph of the intervals.
///
/// Heights follow the right endpoints, so of two overlapping intervals the
/// later one is higher and crosses, while nested ones stay apart.
pub fn intervals_to_ls(intervals: &[(Coord, Coord)]) -> Result<LCollection, InstanceError> {
    check_intervals(intervals)?;
    interval_shapes(intervals, &ranks_by(intervals, |iv| &iv.1))
}

/// Shapes whose intersection graph is the interval graph of the intervals.
///
/// Heights follow the left endpoints, so any later-starting interval that
/// begins inside an earlier one is higher and crosses it.
pub fn interval_graph_to_ls(intervals: &[(Coord, Coord)]) -> Result<LCollection, InstanceError> {
    check_intervals(intervals)?;
    interval_shapes(intervals, &ranks_by(intervals, |iv| &iv.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    IfNotPc,
    GlNotIf(usize),
    MlNotIf,
    PcNotO1s,
}

impl core::str::FromStr for Gadget {
    type Err = String;

    /// `if_not_pc`, `ml_not_if`, `pc_not_o1s` or `gl_not_if:<n>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "if_not_pc" => Ok(Gadget::IfNotPc),
            "ml_not_if" => Ok(Gadget::MlNotIf),
            "pc_not_o1s" => Ok(Gadget::PcNotO1s),
            other => match other.strip_prefix("gl_not_if:").or_else(|| other.strip_prefix("gl_not_if")) {
                Some(num) => num
                    .trim_start_matches(['(', ':'])
                    .trim_end_matches(')')
                    .parse()
                    .map(Gadget::GlNotIf)
                    .map_err(|_| format!("bad size in `{s}`")),
                None => Err(format!("unknown gadget `{s}`")),
            },
        }
    }
}

struct Builder {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            ids: Vec::new(),
            index: BTreeMap::new(),
            edges: Vec::new(),
        }
    }

    fn vertex(&mut self, id: String) -> usize {
        if let Some(&i) = self.index.get(&id) {
            return i;
        }
        self.ids.push(id.clone());
        self.index.insert(id, self.ids.len() - 1);
        self.ids.len() - 1
    }

    fn edge(&mut self, a: &str, b: &str) {
        let (a, b) = (self.vertex(a.into()), self.vertex(b.into()));
        self.edges.push((a, b));
    }

    fn cycle(&mut self, ids: &[String]) {
        for id in ids {
            self.vertex(id.clone());
        }
        for i in 0..ids.len() {
            self.edge(&ids[i], &ids[(i + 1) % ids.len()]);
        }
    }

    fn finish(self) -> IntersectionGraph {
        IntersectionGraph::from_edges(self.ids, &self.edges)
    }
}

/// Abstract adjacency of a separation gadget.
///
/// Labels: for `GlNotIf(n)` the cycle is `v0, e0, v1, e1, .., v{n-1}, e{n-1}`
/// with `e{i}` between `v{i}` and `v{i+1}`, and `t{i}` (for `1 <= i < n`) is
/// joined to `v{i}, v{i+1}, v{i+2}` modulo `n`. The other gadgets name cycle
/// vertices `c{block}_{j}` and their extra vertices `a*`, `b*`.
pub fn gadget_graph(which: Gadget) -> IntersectionGraph {
    let mut g = Builder::new();
    match which {
        Gadget::GlNotIf(n) => {
            let mut cyc = Vec::new();
            for i in 0..n {
                cyc.push(format!("v{i}"));
                cyc.push(format!("e{i}"));
            }
            g.cycle(&cyc);
            for i in 1..n {
                let t = format!("t{i}");
                for d in 0..3 {
                    g.edge(&t, &format!("v{}", (i + d) % n));
                }
            }
        }
        Gadget::IfNotPc | Gadget::MlNotIf => {
            let (len, a_nb, b_nb) = if which == Gadget::IfNotPc {
                (13, [1, 7], [3, 5])
            } else {
                (11, [1, 2], [4, 5])
            };
            let cyc: Vec<String> = (1..=2).flat_map(|i| (0..len).map(move |j| format!("c{i}_{j}"))).collect();
            g.cycle(&cyc);
            for i in 1..=2 {
                let (a, b) = (format!("a{i}"), format!("b{i}"));
                g.edge(&a, &b);
                for j in a_nb {
                    g.edge(&a, &format!("c{i}_{j}"));
                }
                for j in b_nb {
                    g.edge(&b, &format!("c{i}_{j}"));
                }
            }
        }
        Gadget::PcNotO1s => {
            let cyc: Vec<String> = (0..5).flat_map(|i| (0..6).map(move |j| format!("c{i}_{j}"))).collect();
            g.cycle(&cyc);
            g.edge("a", "b");
            for i in 0..5 {
                g.edge("a", &format!("c{i}_0"));
                g.edge("a", &format!("c{i}_4"));
                g.edge("b", &format!("c{i}_2"));
            }
        }
    }
    g.finish()
}

/// A flat collection whose intersection graph is `gadget_graph(GlNotIf(n))`.
///
/// Cycle vertices `v2, .., v{n-1}, v0` form a descending staircase of short
/// shapes; each `e{i}` and `t{i}` is a slightly higher shape starting inside
/// its leftmost neighbour and ending inside its rightmost one. The remaining
/// vertex `v1` is a tall shape at the far right, and the shapes adjacent to it
/// stretch across the staircase to reach it from above or below. The result
/// is checked against the abstract gadget before it is returned.
pub fn gadget_gl_representation(n: usize) -> Result<LCollection, InstanceError> {
    if n < 3 {
        return Err(InstanceError::TooSmall { n, min: 3 });
    }
    let ni = n as i64;
    let h = |k: i64| 100 * (ni + 2 - k);
    let top = 100 * ni + 200;
    let far = 10 * ni + 40;
    let m = |k: i64| k.rem_euclid(ni);
    let mut shapes = Vec::new();
    for k in 2..=ni {
        shapes.push(LShape::int(format!("v{}", m(k)), 10 * k, 10 * k + 25, h(k)));
    }
    for j in 2..ni {
        shapes.push(LShape::int(format!("e{}", m(j)), 10 * j + 12, 10 * j + 36, h(j) + 60));
    }
    for j in 2..ni - 1 {
        shapes.push(LShape::int(format!("t{j}"), 10 * j + 21, 10 * j + 47, h(j) + 30));
    }
    shapes.push(LShape::int("e1", 22, far + 6, top - 20));
    shapes.push(LShape::int("t1", 31, far + 5, top - 40));
    shapes.push(LShape::int(format!("t{}", ni - 1), 10 * ni + 3, far + 3, h(ni - 1) + 30));
    shapes.push(LShape::int("e0", 10 * ni + 4, far + 2, h(ni) + 30));
    shapes.push(LShape::int("v1", far, far + 10, top));

    let collection = validate_collection(shapes)?;
    let mismatch = |detail: String| InstanceError::RepresentationMismatch { n, detail };
    if !collection.is_flat() {
        return Err(mismatch(String::from("collection is not flat")));
    }
    let drawn = build_intersection_graph(&collection);
    let wanted = gadget_graph(Gadget::GlNotIf(n));
    if !drawn.same_labelled_graph(&wanted) {
        let ids = drawn.ids();
        let pos = |id: &str| wanted.ids().iter().position(|w| w == id);
        for (a, b) in drawn.edges() {
            match (pos(&ids[a]), pos(&ids[b])) {
                (Some(x), Some(y)) if wanted.has_edge(x, y) => {}
                _ => return Err(mismatch(format!("extra edge {}-{}", ids[a], ids[b]))),
            }
        }
        return Err(mismatch(format!(
            "{} edges drawn, {} wanted",
            drawn.edge_count(),
            wanted.edge_count()
        )));
    }
    Ok(collection)
}

#[derive(Clone, Debug)]
pub struct SuiteInstance {
    pub name: String,
    pub profile: Profile,
    pub seed: u64,
    pub collection: LCollection,
    pub omega: usize,
}

/// `count` random instances with `n <= max_n` and measured ω in `omega_range`.
///
/// Profiles rotate uniform, flat, dense, and each candidate's seed is drawn
/// from a generator seeded with `seed`, so the suite is reproducible.
pub fn random_suite(
    count: usize,
    seed: u64,
    max_n: usize,
    omega_range: core::ops::RangeInclusive<usize>,
) -> Result<Vec<SuiteInstance>, GraphError> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    let profiles = [Profile::Uniform, Profile::Flat, Profile::Dense];
    let mut attempt = 0usize;
    while out.len() < count {
        let profile = profiles[attempt % 3];
        attempt += 1;
        let n = match profile {
            Profile::Dense => rng.range_inclusive(3, 12.min(max_n as i64)),
            _ => rng.range_inclusive(3, max_n as i64),
        } as usize;
        let s = rng.next_u64();
        let collection = random_collection(n, s, profile);
        let omega = clique_number(&build_intersection_graph(&collection), CLIQUE_NODE_BUDGET)?.size;
        if omega_range.contains(&omega) {
            out.push(SuiteInstance {
                name: format!("{profile:?}-n{n}-{s:016x}").to_ascii_lowercase(),
                profile,
                seed: s,
                collection,
                omega,
            });
        }
    }
    Ok(out)
}

/// The standard acceptance suite: 500 instances, `n <= 60`, ω in `2..=4`.
pub fn desk_suite(seed: u64) -> Vec<SuiteInstance> {
    random_suite(500, seed, 60, 2..=4).expect("clique search fits the budget at n <= 60")
}
