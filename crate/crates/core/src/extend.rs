//! Growing a pillar assignment until every shape is colored.
//!
//! Each round takes the leftmost uncolored shape `L*` and its segment `S`,
//! places a batch of bases inside `S` chosen by a left-to-right sweep, orders
//! and colors them by recursive median splitting, and draws their pillars
//! after all existing ones. Every round re-checks the invariants that make the
//! next round possible, and any failure is reported as
//! [`ExtendError::InvariantBroken`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::coord::{Coord, Extended};
use crate::geometry::LCollection;
use crate::pillars::{segment_containing, DegreeTable, OpenInterval, PillarAssignment, PillarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtendError {
    #[error("{size} bases cannot be separated with {k} colors")]
    TooManyBases { size: usize, k: u32 },
    #[error("invariant broken: {0}")]
    InvariantBroken(String),
    #[error("collection is not flat")]
    NotFlat,
    #[error("omega must be positive")]
    ZeroOmega,
    #[error("assignment is already complete")]
    AlreadyComplete,
    #[error(transparent)]
    Pillar(#[from] PillarError),
}

fn broken(msg: String) -> ExtendError {
    ExtendError::InvariantBroken(msg)
}

/// The least `c` with `2^c ≥ ω⁴`, i.e. `⌈4 log₂ ω⌉`.
pub fn ceil_4log2(omega: usize) -> u32 {
    let target = (omega as u128).pow(4);
    let mut c = 0;
    while (1u128 << c) < target {
        c += 1;
    }
    c
}

/// Pillar palette `4ω² − ω + 2⌈4 log₂ ω⌉ + 11`.
pub fn palette_size(omega: usize) -> u32 {
    let w = omega as u32;
    4 * w * w - w + 2 * ceil_4log2(omega) + 11
}

/// Segment degree cap `4ω² − ω + ⌈4 log₂ ω⌉ + 6`.
pub fn degree_cap(omega: usize) -> usize {
    4 * omega * omega - omega + ceil_4log2(omega) as usize + 6
}

/// Degree cap for the segments cut by one round's sweep, `4ω² − ω + 1`.
pub fn sweep_cap(omega: usize) -> usize {
    4 * omega * omega - omega + 1
}

/// Colors reserved for one batch of new bases: `⌈4 log₂ ω⌉ + 5`.
pub fn batch_colors(omega: usize) -> u32 {
    ceil_4log2(omega) + 5
}

/// Largest batch a round may place, `32ω⁴ − 1`.
pub fn batch_limit(omega: usize) -> usize {
    32 * omega.pow(4) - 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcOrder<T> {
    /// Placement order.
    pub order: Vec<T>,
    /// Color of `order[i]`, in `1..=k`.
    pub colors: Vec<u32>,
}

impl<T: PartialEq> DcOrder<T> {
    pub fn color_of(&self, item: &T) -> Option<u32> {
        self.order.iter().position(|x| x == item).map(|i| self.colors[i])
    }
}

/// Orders and colors `items` so that between any two equal colors sits an
/// element placed before both.
///
/// The lower median of the sorted block comes first with the current top
/// color, followed by the left block and then the right block, each handled
/// recursively with one color fewer. Duplicates are merged.
pub fn divide_and_conquer_order<T: Ord + Clone>(items: &[T], k: u32) -> Result<DcOrder<T>, ExtendError> {
    let mut sorted = items.to_vec();
    sorted.sort();
    sorted.dedup();
    if k < 64 && sorted.len() as u128 > (1u128 << k) - 1 {
        return Err(ExtendError::TooManyBases { size: sorted.len(), k });
    }
    let mut out = DcOrder {
        order: Vec::with_capacity(sorted.len()),
        colors: Vec::with_capacity(sorted.len()),
    };
    split(&sorted, k, &mut out);
    Ok(out)
}

fn split<T: Clone>(block: &[T], k: u32, out: &mut DcOrder<T>) {
    if block.is_empty() {
        return;
    }
    let mid = (block.len() - 1) / 2;
    out.order.push(block[mid].clone());
    out.colors.push(k);
    split(&block[..mid], k - 1, out);
    split(&block[mid + 1..], k - 1, out);
}

/// A pillar assignment together with the palette it must respect.
#[derive(Clone, Debug)]
pub struct ExtensionState {
    pub assignment: PillarAssignment,
    pub omega: usize,
    pub palette: u32,
    pub cap: usize,
}

impl ExtensionState {
    pub fn new(collection: LCollection, omega: usize) -> Result<Self, ExtendError> {
        if omega == 0 {
            return Err(ExtendError::ZeroOmega);
        }
        if !collection.is_flat() {
            return Err(ExtendError::NotFlat);
        }
        Ok(ExtensionState {
            assignment: PillarAssignment::empty(collection),
            omega,
            palette: palette_size(omega),
            cap: degree_cap(omega),
        })
    }

    pub fn colored_count(&self) -> usize {
        self.assignment.colored_count()
    }

    /// The uncolored shape with the leftmost left endpoint.
    pub fn leftmost_uncolored(&self) -> Option<usize> {
        let shapes = self.assignment.collection().shapes();
        (0..shapes.len())
            .filter(|&i| self.assignment.assignment()[i].is_none())
            .min_by(|&a, &b| shapes[a].left.cmp(&shapes[b].left))
    }

    /// Largest segment degree of the current assignment.
    pub fn max_segment_degree(&self) -> Result<usize, ExtendError> {
        let mut worst = 0;
        for s in self.assignment.segments() {
            let d = DegreeTable::new(&self.assignment, &s)?.degrees(&s)?;
            worst = worst.max(d.degree);
        }
        Ok(worst)
    }
}

/// A point strictly inside the open interval `(lo, hi)`.
fn gap_point(lo: &Extended, hi: &Extended) -> Coord {
    match (lo, hi) {
        (Extended::Finite(a), Extended::Finite(b)) => a.midpoint(b),
        (Extended::NegInf, Extended::Finite(b)) => b.add_int(-1),
        (Extended::Finite(a), Extended::PosInf) => a.add_int(1),
        _ => Coord::zero(),
    }
}

/// The midpoint of `p(L*) ∩ s`, moved to the middle of the next gap when it
/// lands on an endpoint.
fn inner_base(endpoints: &[Coord], left: &Coord, right: &Coord, s: &OpenInterval) -> Coord {
    let end = match &s.hi {
        Extended::Finite(h) if h < right => h,
        _ => right,
    };
    let mid = left.midpoint(end);
    match endpoints.binary_search(&mid) {
        Ok(i) => mid.midpoint(&endpoints[i + 1]),
        Err(_) => mid,
    }
}

/// Bases for one round inside the segment `s`, sorted.
///
/// Sweeping right from the left end, each new base is put on the last gap
/// between endpoints before the interval from the previous base would exceed
/// [`sweep_cap`]. One more base goes in the middle of `p(L*) ∩ s`.
pub fn choose_bases(state: &ExtensionState, s: &OpenInterval, l_star: usize) -> Result<Vec<Coord>, ExtendError> {
    let shapes = state.assignment.collection().shapes();
    let target = &shapes[l_star];
    if state.assignment.assignment()[l_star].is_some() {
        return Err(broken(format!("`{}` is already colored", target.id)));
    }
    if !s.contains(&target.left) {
        return Err(broken(format!("`{}` does not start in the segment", target.id)));
    }
    let table = DegreeTable::new(&state.assignment, s)?;
    let (first, last) = table.ranks(s);
    let events = &table.endpoints()[first..last];
    let w = state.omega;
    let cap = sweep_cap(w);

    // gaps[g] lies between events[g - 1] and events[g]; its degree interval
    // from gap a contains the events of ranks first + a .. first + g.
    let mut ends: Vec<Extended> = vec![s.lo.clone()];
    ends.extend(events.iter().cloned().map(Extended::Finite));
    ends.push(s.hi.clone());
    let gaps: Vec<Coord> = ends.windows(2).map(|e| gap_point(&e[0], &e[1])).collect();

    let mut chosen = Vec::new();
    let mut from = 0usize;
    if !events.is_empty() {
        loop {
            let over = (from + 1..gaps.len()).find(|&g| table.degrees_by_rank(first + from, first + g).degree > cap);
            let Some(g) = over else { break };
            let at = g - 1;
            let d = table.degrees_by_rank(first + from, first + at);
            if at == from || !(d.da > w || d.dr > 4 * w * w - 2 * w) {
                return Err(broken(format!(
                    "sweep from gap {from} overshoots at gap {g} without reaching a threshold (da {}, dr {})",
                    d.da, d.dr
                )));
            }
            chosen.push(gaps[at].clone());
            from = at;
        }
    }

    let inner = inner_base(table.endpoints(), &target.left, &target.right, s);
    chosen.push(inner);
    chosen.sort();
    chosen.dedup();
    if chosen.len() > batch_limit(w) {
        return Err(broken(format!("{} bases exceed the batch limit {}", chosen.len(), batch_limit(w))));
    }
    Ok(chosen)
}

/// What one round did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrace {
    pub round: usize,
    pub l_star: String,
    pub segment: OpenInterval,
    pub new_bases: Vec<Coord>,
    pub new_colors: Vec<u32>,
    pub free_colors: usize,
    pub colored_before: usize,
    pub colored_after: usize,
    /// Degree of each segment after the round, left to right.
    pub segment_degrees: Vec<usize>,
}

/// One extension round, with every postcondition checked.
pub fn extend_assignment(state: &ExtensionState, round: usize) -> Result<(ExtensionState, RoundTrace), ExtendError> {
    let old = &state.assignment;
    let l_star = state.leftmost_uncolored().ok_or(ExtendError::AlreadyComplete)?;
    let shapes = old.collection().shapes();
    let s = segment_containing(&old.bases(), &shapes[l_star].left)
        .ok_or_else(|| broken(String::from("left endpoint lies on a base")))?;

    let (bases, colors, free) = if state.omega == 1 {
        // Without edges a single color is always valid.
        let endpoints = old.collection().sorted_endpoints();
        let t = &shapes[l_star];
        (vec![inner_base(&endpoints, &t.left, &t.right, &s)], vec![1], 1)
    } else {
        let chosen = choose_bases(state, &s, l_star)?;
        check_sweep_segments(state, &s, &chosen)?;

        let table = DegreeTable::new(old, &s)?;
        let whole = table.degrees(&s)?;
        let mut blocked = vec![false; state.palette as usize + 1];
        for &p in whole.nl.iter().chain(&whole.nr) {
            blocked[old.colors()[p] as usize] = true;
        }
        let free: Vec<u32> = (1..=state.palette).filter(|&c| !blocked[c as usize]).collect();
        let need = batch_colors(state.omega);
        if free.len() < need as usize {
            return Err(broken(format!("{} free colors, {} needed", free.len(), need)));
        }
        let dc = divide_and_conquer_order(&chosen, need)?;
        let colors = dc.colors.iter().map(|&c| free[c as usize - 1]).collect();
        (dc.order, colors, free.len())
    };

    let next = old.with_pillars(&bases, &colors)?;
    let new_state = ExtensionState {
        assignment: next,
        ..state.clone()
    };
    let segment_degrees = check_round(state, &new_state, &s)?;
    let trace = RoundTrace {
        round,
        l_star: shapes[l_star].id.clone(),
        segment: s,
        new_bases: bases,
        new_colors: colors,
        free_colors: free,
        colored_before: state.colored_count(),
        colored_after: new_state.colored_count(),
        segment_degrees,
    };
    Ok((new_state, trace))
}

/// Every piece of `s` cut by the chosen bases keeps degree at most
/// [`sweep_cap`] with respect to the old pillars.
fn check_sweep_segments(state: &ExtensionState, s: &OpenInterval, chosen: &[Coord]) -> Result<(), ExtendError> {
    let table = DegreeTable::new(&state.assignment, s)?;
    let mut ends = vec![s.lo.clone()];
    ends.extend(chosen.iter().cloned().map(Extended::Finite));
    ends.push(s.hi.clone());
    for e in ends.windows(2) {
        let j = OpenInterval::new(e[0].clone(), e[1].clone());
        let d = table.degrees(&j)?;
        if d.degree > sweep_cap(state.omega) {
            return Err(broken(format!(
                "sub-segment ({}, {}) has degree {} over {}",
                j.lo,
                j.hi,
                d.degree,
                sweep_cap(state.omega)
            )));
        }
    }
    Ok(())
}

fn check_round(before: &ExtensionState, after: &ExtensionState, s: &OpenInterval) -> Result<Vec<usize>, ExtendError> {
    let old = &before.assignment;
    let new = &after.assignment;
    if let Some((a, b)) = new.validity_violation() {
        return Err(broken(format!("shapes {a} and {b} meet on distinct pillars of one color")));
    }
    if new.colored_count() <= old.colored_count() {
        return Err(broken(format!(
            "colored count did not grow ({} -> {})",
            old.colored_count(),
            new.colored_count()
        )));
    }
    let top = if after.omega == 1 { 1 } else { after.palette };
    if new.colors().iter().any(|&c| c == 0 || c > top) {
        return Err(broken(format!("pillar color outside 1..={top}")));
    }
    if new.pillars()[..old.pillars().len()] != *old.pillars() {
        return Err(broken(String::from("an existing pillar changed")));
    }
    let shapes = new.collection().shapes();
    for (i, (a, b)) in old.assignment().iter().zip(new.assignment()).enumerate() {
        match (a, b) {
            (Some(x), Some(y)) if x == y => {}
            (Some(_), _) => return Err(broken(format!("assignment of `{}` changed", shapes[i].id))),
            (None, Some(_)) if !(s.contains(&shapes[i].left) && s.contains(&shapes[i].right)) => {
                return Err(broken(format!("newly colored `{}` leaves the segment", shapes[i].id)))
            }
            _ => {}
        }
    }
    if let Some(&(si, pi)) = new.box_order_violations().first() {
        return Err(broken(format!(
            "pillar {pi} enters the box under `{}` but the shape is assigned later",
            shapes[si].id
        )));
    }
    let mut degrees = Vec::new();
    for seg in new.segments() {
        let d = DegreeTable::new(new, &seg)?.degrees(&seg)?;
        if before.omega > 1 && d.degree > before.cap {
            return Err(broken(format!(
                "segment ({}, {}) has degree {} over the cap {}",
                seg.lo, seg.hi, d.degree, before.cap
            )));
        }
        degrees.push(d.degree);
    }
    Ok(degrees)
}

/// A complete assignment with the trace of every round.
#[derive(Clone, Debug)]
pub struct Completion {
    pub state: ExtensionState,
    pub rounds: Vec<RoundTrace>,
}

impl Completion {
    /// Distinct pillar colors in use.
    pub fn colors_used(&self) -> usize {
        let mut c = self.state.assignment.colors().to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    }
}

/// Runs extension rounds until every shape is assigned.
pub fn complete_pillar_assignment(collection: &LCollection, omega: usize) -> Result<Completion, ExtendError> {
    let mut state = ExtensionState::new(collection.clone(), omega)?;
    let mut rounds = Vec::new();
    while !state.assignment.is_complete() {
        if rounds.len() >= collection.len() {
            return Err(broken(format!("no completion after {} rounds", rounds.len())));
        }
        let (next, trace) = extend_assignment(&state, rounds.len())?;
        state = next;
        rounds.push(trace);
    }
    Ok(Completion { state, rounds })
}
