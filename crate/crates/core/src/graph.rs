//! Intersection graphs and the exact oracles run on them.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::LCollection;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("search limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("orders are not permutations of the same element set")]
    NotAPermutation,
}

/// Default node budget for [`clique_number`].
pub const CLIQUE_NODE_BUDGET: u64 = 50_000_000;
/// Largest graph accepted by [`chromatic_number_exact`].
pub const CHROMATIC_VERTEX_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::new(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

/// A labelled simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    ids: Vec<String>,
    rows: Vec<Bits>,
}

impl IntersectionGraph {
    pub fn edgeless(ids: Vec<String>) -> Self {
        let n = ids.len();
        IntersectionGraph {
            ids,
            rows: vec![Bits::new(n); n],
        }
    }

    pub fn from_edges(ids: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::edgeless(ids);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Adds the undirected edge `{a, b}`; self-loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.rows[a].insert(b);
            self.rows[b].insert(a);
        }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Bits::count).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            out.extend(self.rows[a].iter().filter(|&b| b > a).map(|b| (a, b)));
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// The subgraph induced on `vertices`, relabelled `0..vertices.len()`.
    pub fn induced(&self, vertices: &[usize]) -> IntersectionGraph {
        let ids = vertices.iter().map(|&v| self.ids[v].clone()).collect();
        let mut g = Self::edgeless(ids);
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Equality as labelled graphs: same id set and the same edges between ids.
    pub fn same_labelled_graph(&self, other: &IntersectionGraph) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let pos: BTreeMap<&str, usize> = other.ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut map = Vec::with_capacity(self.n());
        for id in &self.ids {
            match pos.get(id.as_str()) {
                Some(&j) => map.push(j),
                None => return false,
            }
        }
        (0..self.n()).all(|a| (0..self.n()).all(|b| self.has_edge(a, b) == other.has_edge(map[a], map[b])))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }
}

/// `G(L)`: vertices in collection order, an edge per crossing pair.
pub fn build_intersection_graph(collection: &LCollection) -> IntersectionGraph {
    let shapes = collection.shapes();
    let mut g = IntersectionGraph::edgeless(shapes.iter().map(|s| s.id.clone()).collect());
    for i in 0..shapes.len() {
        for j in i + 1..shapes.len() {
            if shapes[i].crosses(&shapes[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clique {
    pub size: usize,
    /// A maximum clique, sorted.
    pub witness: Vec<usize>,
}

/// Exact clique number by branch and bound with greedy-coloring bounds.
///
/// The search visits at most `budget` nodes and reports
/// [`GraphError::LimitExceeded`] past that. An empty graph has clique number 0.
pub fn clique_number(g: &IntersectionGraph, budget: u64) -> Result<Clique, GraphError> {
    let n = g.n();
    if n == 0 {
        return Ok(Clique {
            size: 0,
            witness: Vec::new(),
        });
    }
    // Relabel by non-increasing degree so the greedy coloring sees hubs first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (core::cmp::Reverse(g.degree(v)), v));
    let mut rank = vec![0; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut rows = vec![Bits::new(n); n];
    for (r, &v) in order.iter().enumerate() {
        for u in g.neighbors(v) {
            rows[r].insert(rank[u]);
        }
    }

    let mut search = CliqueSearch {
        rows: &rows,
        best: vec![order[0]].into_iter().map(|v| rank[v]).collect(),
        current: Vec::new(),
        nodes: 0,
        budget,
    };
    search.expand(Bits::full(n))?;
    let mut witness: Vec<usize> = search.best.iter().map(|&r| order[r]).collect();
    witness.sort_unstable();
    Ok(Clique {
        size: witness.len(),
        witness,
    })
}

struct CliqueSearch<'a> {
    rows: &'a [Bits],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, mut candidates: Bits) -> Result<(), GraphError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(GraphError::LimitExceeded(alloc::format!(
                "max-clique search visited more than {} nodes",
                self.budget
            )));
        }
        let (order, bounds) = self.color_sort(&candidates);
        for k in (0..order.len()).rev() {
            if self.current.len() + bounds[k] <= self.best.len() {
                return Ok(());
            }
            let v = order[k];
            self.current.push(v);
            let next = candidates.and(&self.rows[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next)?;
            }
            self.current.pop();
            candidates.remove(v);
        }
        Ok(())
    }

    /// Greedy sequential coloring of `candidates`; returns vertices by
    /// non-decreasing color together with their colors.
    fn color_sort(&self, candidates: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = candidates.clone();
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.and_not_assign(&self.rows[v]);
                uncolored.remove(v);
                order.push(v);
                bounds.push(color);
            }
        }
        (order, bounds)
    }
}

/// Exact chromatic number by dynamic programming over vertex subsets.
///
/// `dp[S]` is the least number of independent sets covering `S`; each step
/// peels off an independent set containing the lowest vertex of `S`.
pub fn chromatic_number_exact(g: &IntersectionGraph) -> Result<usize, GraphError> {
    let n = g.n();
    if n > CHROMATIC_VERTEX_LIMIT {
        return Err(GraphError::LimitExceeded(alloc::format!(
            "exact chromatic number supports at most {CHROMATIC_VERTEX_LIMIT} vertices, got {n}"
        )));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let size = 1usize << n;
    let mut independent = vec![false; size];
    independent[0] = true;
    for m in 1..size {
        let low = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        independent[m] = independent[rest] && adj[low] & rest as u32 == 0;
    }
    let mut dp = vec![u8::MAX; size];
    dp[0] = 0;
    for m in 1..size {
        let low = m.trailing_zeros() as usize;
        let low_bit = 1usize << low;
        let free = (m & !low_bit) & !(adj[low] as usize);
        let mut best = u8::MAX;
        let mut s = free;
        loop {
            let set = s | low_bit;
            if independent[set] {
                best = best.min(dp[m & !set].saturating_add(1));
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & free;
        }
        dp[m] = best;
    }
    Ok(dp[size - 1] as usize)
}

/// A permutation graph given by two total orders of the same elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationInstance {
    order1: Vec<usize>,
    order2: Vec<usize>,
    pos2: BTreeMap<usize, usize>,
}

impl PermutationInstance {
    pub fn new(order1: Vec<usize>, order2: Vec<usize>) -> Result<Self, GraphError> {
        let pos2: BTreeMap<usize, usize> = order2.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        if order1.len() != order2.len()
            || pos2.len() != order2.len()
            || order1.iter().any(|e| !pos2.contains_key(e))
        {
            return Err(GraphError::NotAPermutation);
        }
        let distinct: BTreeMap<usize, ()> = order1.iter().map(|&e| (e, ())).collect();
        if distinct.len() != order1.len() {
            return Err(GraphError::NotAPermutation);
        }
        Ok(PermutationInstance { order1, order2, pos2 })
    }

    pub fn len(&self) -> usize {
        self.order1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order1.is_empty()
    }

    /// Elements listed in the first order.
    pub fn elements(&self) -> &[usize] {
        &self.order1
    }

    pub fn order2(&self) -> &[usize] {
        &self.order2
    }

    /// Adjacent iff the two orders disagree on the pair.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let p1 = |e| self.order1.iter().position(|&x| x == e);
        match (p1(a), p1(b), self.pos2.get(&a), self.pos2.get(&b)) {
            (Some(i), Some(j), Some(k), Some(l)) => a != b && (i < j) != (k < l),
            _ => false,
        }
    }

    /// The permutation graph, vertices in first-order sequence.
    pub fn graph(&self) -> IntersectionGraph {
        let ids = self.order1.iter().map(|e| e.to_string()).collect();
        let seq = self.second_positions();
        let mut g = IntersectionGraph::edgeless(ids);
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    fn second_positions(&self) -> Vec<usize> {
        self.order1.iter().map(|e| self.pos2[e]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationColoring {
    /// `(element, color)` in first-order sequence; colors start at 1.
    pub colors: Vec<(usize, u32)>,
    pub color_count: usize,
    /// A maximum clique: increasing in the first order, decreasing in the second.
    pub clique: Vec<usize>,
}

impl PermutationColoring {
    pub fn color_of(&self, element: usize) -> Option<u32> {
        self.colors.iter().find(|(e, _)| *e == element).map(|&(_, c)| c)
    }
}

/// Optimal coloring of a permutation graph.
///
/// Elements are scanned in the first order and dropped on the first class
/// whose last member comes earlier in the second order. Class tops stay
/// decreasing, so the class count equals the longest run that is increasing in
/// the first order and decreasing in the second, i.e. the clique number.
pub fn color_permutation_graph(inst: &PermutationInstance) -> PermutationColoring {
    let seq = inst.second_positions();
    // tops[c] = (second-order position, index into seq) of the last member.
    let mut tops: Vec<(usize, usize)> = Vec::new();
    let mut prev: Vec<Option<usize>> = vec![None; seq.len()];
    let mut colors = Vec::with_capacity(seq.len());
    for (i, &p) in seq.iter().enumerate() {
        let c = tops.partition_point(|&(t, _)| t > p);
        prev[i] = if c > 0 { Some(tops[c - 1].1) } else { None };
        if c == tops.len() {
            tops.push((p, i));
        } else {
            tops[c] = (p, i);
        }
        colors.push((inst.order1[i], c as u32 + 1));
    }
    let mut clique = Vec::new();
    let mut at = tops.last().map(|&(_, i)| i);
    while let Some(i) = at {
        clique.push(inst.order1[i]);
        at = prev[i];
    }
    clique.reverse();
    PermutationColoring {
        colors,
        color_count: tops.len(),
        clique,
    }
}
