//! Acceptance matrix. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lchroma_core::colorer::{color_with_options, verify_coloring, ColorOptions, ColorRun};
use lchroma_core::coord::{Coord, Extended};
use lchroma_core::extend::{degree_cap, divide_and_conquer_order, palette_size};
use lchroma_core::flatten::flatten_partition;
use lchroma_core::geometry::{validate_collection, LShape};
use lchroma_core::graph::{
    build_intersection_graph, chromatic_number_exact, clique_number, color_permutation_graph, IntersectionGraph,
    PermutationInstance, CLIQUE_NODE_BUDGET,
};
use lchroma_core::instances::{
    desk_suite, gadget_gl_representation, gadget_graph, interval_graph_to_ls, intervals_to_ls, random_collection, random_suite,
    Gadget, Profile, SuiteInstance,
};
use lchroma_core::pillars::{
    check_extremal_bounds, compute_degrees, extract_clique_from_cascading, find_cascadings, is_cascading,
    OpenInterval, PillarAssignment, Top,
};
use lchroma_core::rng::SplitMix64;

const SUITE_SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;

struct Suite {
    instances: Vec<SuiteInstance>,
    runs: Vec<Result<ColorRun, String>>,
    elapsed: Duration,
}

impl Suite {
    fn build() -> Suite {
        let start = Instant::now();
        let instances = desk_suite(SUITE_SEED);
        let runs = instances
            .iter()
            .map(|inst| color_with_options(&inst.collection, &ColorOptions::default()).map_err(|e| e.to_string()))
            .collect();
        Suite {
            instances,
            runs,
            elapsed: start.elapsed(),
        }
    }

    fn ok_runs(&self) -> impl Iterator<Item = (&SuiteInstance, &ColorRun)> {
        self.instances
            .iter()
            .zip(&self.runs)
            .filter_map(|(i, r)| r.as_ref().ok().map(|r| (i, r)))
    }

    /// Every intermediate state of every class: the pillar prefixes at round boundaries.
    fn round_states(&self) -> Vec<(usize, PillarAssignment)> {
        let mut out = Vec::new();
        for (inst, run) in self.ok_runs() {
            for class in &run.classes {
                let all_bases = class.assignment.bases();
                let colors = class.assignment.colors();
                let mut m = 0;
                for round in &class.rounds {
                    m += round.new_bases.len();
                    let state = PillarAssignment::from_bases(
                        class.assignment.collection().clone(),
                        &all_bases[..m],
                        &colors[..m],
                    )
                    .expect("prefix of a drawn state");
                    out.push((inst.omega, state));
                }
            }
        }
        out
    }
}

fn first_error(suite: &Suite) -> Option<String> {
    suite
        .instances
        .iter()
        .zip(&suite.runs)
        .find_map(|(i, r)| r.as_ref().err().map(|e| format!("{}: {e}", i.name)))
}

fn criterion_1(suite: &Suite) -> Outcome {
    if let Some(e) = first_error(suite) {
        return Err(e);
    }
    let mut worst = 0.0f64;
    for (inst, run) in suite.ok_runs() {
        let c = &run.coloring;
        let w = inst.omega;
        if !(2..=4).contains(&w) || c.audit.omega != w {
            return Err(format!("{}: omega {} (suite says {w})", inst.name, c.audit.omega));
        }
        let report = verify_coloring(&inst.collection, c.colors(), w, palette_size(w));
        if !report.proper {
            return Err(format!("{}: improper at {:?}", inst.name, report.conflict));
        }
        let pipeline = 2 * (w * w) as u128 * palette_size(w) as u128;
        let theorem = 17 * (w as u128).pow(4);
        let used = c.palette_used() as u128;
        if used > pipeline || used > theorem || !report.bound.holds() {
            return Err(format!("{}: {used} colors, bounds {pipeline}/{theorem}", inst.name));
        }
        worst = worst.max(used as f64 / theorem as f64);
    }
    if suite.elapsed.as_secs_f64() >= 60.0 {
        return Err(format!("suite took {:.1}s", suite.elapsed.as_secs_f64()));
    }
    Ok(format!(
        "{} instances proper and within bounds, worst ratio to 17w^4 {:.3}, {:.2}s",
        suite.instances.len(),
        worst,
        suite.elapsed.as_secs_f64()
    ))
}

fn criterion_2(suite: &Suite, states: &[(usize, PillarAssignment)]) -> Outcome {
    let mut classes = 0;
    let mut worst = 0;
    for (inst, run) in suite.ok_runs() {
        let w = inst.omega;
        for class in &run.classes {
            classes += 1;
            let mut used = class.assignment.colors().to_vec();
            used.sort_unstable();
            used.dedup();
            if used.len() > palette_size(w) as usize || used.iter().any(|&c| c == 0 || c > palette_size(w)) {
                return Err(format!("{}: {} pillar colors", inst.name, used.len()));
            }
            for round in &class.rounds {
                if let Some(&d) = round.segment_degrees.iter().max() {
                    worst = worst.max(d);
                    if d > degree_cap(w) {
                        return Err(format!("{} round {}: traced degree {d}", inst.name, round.round));
                    }
                }
            }
        }
    }
    for (w, state) in states {
        for s in state.segments() {
            let d = compute_degrees(state, &s, &s).map_err(|e| e.to_string())?.degree;
            worst = worst.max(d);
            if d > degree_cap(*w) {
                return Err(format!("recomputed segment degree {d} > {}", degree_cap(*w)));
            }
        }
    }
    Ok(format!(
        "{classes} classes, {} intermediate states, max segment degree {worst}",
        states.len()
    ))
}

fn criterion_3() -> Outcome {
    let small = random_suite(200, SUITE_SEED ^ 3, 14, 1..=4).map_err(|e| e.to_string())?;
    let mut worst_gap = 0;
    for inst in &small {
        let run = color_with_options(&inst.collection, &ColorOptions::default()).map_err(|e| e.to_string())?;
        let c = &run.coloring;
        let chi = chromatic_number_exact(&build_intersection_graph(&inst.collection)).map_err(|e| e.to_string())?;
        let theorem = 17 * inst.omega.pow(4);
        if chi > c.palette_used() || c.palette_used() > theorem {
            return Err(format!("{}: chi {chi}, used {}", inst.name, c.palette_used()));
        }
        if !verify_coloring(&inst.collection, c.colors(), c.audit.omega, c.audit.bound.k).passes() {
            return Err(format!("{}: verification failed", inst.name));
        }
        worst_gap = worst_gap.max(c.palette_used() - chi);
    }
    let mut rng = SplitMix64::new(SUITE_SEED ^ 33);
    for trial in 0..200 {
        let n = rng.range_inclusive(1, 12) as usize;
        let mut a: Vec<usize> = (0..n).collect();
        let mut b = a.clone();
        rng.shuffle(&mut a);
        rng.shuffle(&mut b);
        let inst = PermutationInstance::new(a, b).map_err(|e| e.to_string())?;
        let chi = chromatic_number_exact(&inst.graph()).map_err(|e| e.to_string())?;
        let got = color_permutation_graph(&inst);
        if got.color_count != chi {
            return Err(format!("permutation trial {trial}: {} colors, chi {chi}", got.color_count));
        }
    }
    Ok(format!(
        "200 small instances within [chi, 17w^4] (max excess {worst_gap}), 200 permutation colorings optimal"
    ))
}

fn criterion_4(suite: &Suite) -> Outcome {
    let mut checked = 0;
    let mut cache: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for (k, (inst, run)) in suite.ok_runs().enumerate() {
        for comp in &run.components {
            let state = &run.classes[comp.class].assignment;
            let clique = *cache.entry((k, comp.class, comp.pillar)).or_insert_with(|| {
                let members = state.pillar_class(comp.pillar);
                let g = state.graph().induced(&members);
                clique_number(&g, CLIQUE_NODE_BUDGET).expect("small pillar class").size
            });
            if comp.first_colors + comp.second_colors > 2 * clique {
                return Err(format!(
                    "{}: pillar {} uses {}+{} sub-colors, clique {clique}",
                    inst.name, comp.pillar, comp.first_colors, comp.second_colors
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} components over {} pillar classes", cache.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = SplitMix64::new(SUITE_SEED ^ 5);
    for trial in 0..1000 {
        let k = rng.range_inclusive(1, 7) as u32;
        let size = rng.range_inclusive(1, (1 << k) - 1) as usize;
        let mut items: Vec<i64> = (0..size).map(|_| rng.range_inclusive(-10_000, 10_000)).collect();
        items.sort_unstable();
        items.dedup();
        rng.shuffle(&mut items);
        let dc = divide_and_conquer_order(&items, k).map_err(|e| e.to_string())?;
        let mut sorted = items.clone();
        sorted.sort_unstable();
        let mut placed = dc.order.clone();
        placed.sort_unstable();
        if placed != sorted || dc.colors.iter().any(|&c| c == 0 || c > k) {
            return Err(format!("trial {trial}: order is not a permutation or colors leave 1..={k}"));
        }
        let pos: BTreeMap<i64, usize> = dc.order.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let color: BTreeMap<i64, u32> = dc.order.iter().copied().zip(dc.colors.iter().copied()).collect();
        for i in 0..sorted.len() {
            let mut earliest_between = usize::MAX;
            for j in i + 1..sorted.len() {
                let (a, b) = (sorted[i], sorted[j]);
                if color[&a] == color[&b] && earliest_between > pos[&a].min(pos[&b]) {
                    return Err(format!("trial {trial}: {a} and {b} share color {} unseparated", color[&a]));
                }
                earliest_between = earliest_between.min(pos[&b]);
            }
        }
    }
    Ok(String::from("1000 random base sets, every same-color pair separated"))
}

fn criterion_6(suite: &Suite) -> Outcome {
    for inst in &suite.instances {
        let f = flatten_partition(&inst.collection, inst.omega).map_err(|e| format!("{}: {e}", inst.name))?;
        if f.classes.len() > inst.omega || f.classes.iter().any(|c| !c.is_flat()) {
            return Err(format!("{}: {} classes", inst.name, f.classes.len()));
        }
        let mut covered: Vec<usize> = f.members.concat();
        covered.sort_unstable();
        if covered != (0..inst.collection.len()).collect::<Vec<_>>() {
            return Err(format!("{}: classes do not partition the input", inst.name));
        }
    }
    Ok(format!("{} instances flattened into at most w flat classes", suite.instances.len()))
}

fn sample_family(rng: &mut SplitMix64, state: &PillarAssignment, s: &OpenInterval) -> Vec<OpenInterval> {
    // Candidate cut points: the ends of s, endpoints inside s and midpoints between them.
    let inside: Vec<Coord> = state
        .collection()
        .sorted_endpoints()
        .into_iter()
        .filter(|x| s.contains(x))
        .collect();
    let mut cuts: Vec<Extended> = vec![s.lo.clone()];
    let mut prev = s.lo.clone();
    for x in &inside {
        if let Extended::Finite(p) = &prev {
            cuts.push(Extended::Finite(p.midpoint(x)));
        } else {
            cuts.push(Extended::Finite(x.add_int(-1)));
        }
        cuts.push(Extended::Finite(x.clone()));
        prev = Extended::Finite(x.clone());
    }
    if let Extended::Finite(p) = &prev {
        if let Extended::Finite(h) = &s.hi {
            cuts.push(Extended::Finite(p.midpoint(h)));
        } else {
            cuts.push(Extended::Finite(p.add_int(1)));
        }
    }
    cuts.push(s.hi.clone());
    let pairs = rng.range_inclusive(1, (cuts.len() / 2).clamp(1, 6) as i64) as usize;
    let mut picks: Vec<usize> = (0..cuts.len()).collect();
    rng.shuffle(&mut picks);
    let mut chosen: Vec<usize> = picks.into_iter().take(2 * pairs).collect();
    chosen.sort_unstable();
    chosen
        .chunks(2)
        .filter(|c| c.len() == 2)
        .map(|c| OpenInterval::new(cuts[c[0]].clone(), cuts[c[1]].clone()))
        .filter(|j| !j.is_empty())
        .collect()
}

fn criterion_7(states: &[(usize, PillarAssignment)]) -> Outcome {
    let mut rng = SplitMix64::new(SUITE_SEED ^ 7);
    let usable: Vec<&PillarAssignment> = states.iter().map(|(_, s)| s).filter(|s| !s.collection().is_empty()).collect();
    if usable.is_empty() {
        return Err(String::from("no states to sample"));
    }
    let mut samples = 0;
    let mut tight = 0;
    let mut omega_cache: BTreeMap<usize, usize> = BTreeMap::new();
    while samples < 500 {
        let idx = rng.below(usable.len() as u64) as usize;
        let state = usable[idx];
        // Clique number of the class.
        let w = *omega_cache
            .entry(idx)
            .or_insert_with(|| clique_number(state.graph(), CLIQUE_NODE_BUDGET).expect("class fits").size);
        let segs = state.segments();
        let s = &segs[rng.below(segs.len() as u64) as usize];
        let family = sample_family(&mut rng, state, s);
        if family.is_empty() {
            continue;
        }
        let r = check_extremal_bounds(state, s, &family, w).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(format!("sample {samples}: {r:?}"));
        }
        if r.sum_da > 0 || r.sum_dr > 0 {
            tight += 1;
        }
        samples += 1;
    }
    Ok(format!("{samples} (state, family) samples, {tight} with nonzero additional/right degree"))
}

/// Flat collections with pillars at random gaps, placed in random or
/// right-to-left order.
fn random_pillar_states(count: usize) -> Vec<PillarAssignment> {
    let mut rng = SplitMix64::new(SUITE_SEED ^ 8);
    (0..count)
        .map(|_| {
            let n = rng.range_inclusive(6, 30) as usize;
            let col = random_collection(n, rng.next_u64(), Profile::Flat);
            let ends = col.sorted_endpoints();
            let mut gaps: Vec<Coord> = ends.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
            rng.shuffle(&mut gaps);
            gaps.truncate(rng.range_inclusive(2, 12) as usize);
            if rng.below(2) == 0 {
                // Right to left.
                gaps.sort_by(|a, b| b.cmp(a));
            }
            let colors: Vec<u32> = (1..=gaps.len() as u32).collect();
            PillarAssignment::from_bases(col, &gaps, &colors).expect("gap bases are valid")
        })
        .collect()
}

/// A flat state holding a cascade of length three; random states rarely do.
fn fixed_three_cascade_state() -> PillarAssignment {
    let shapes = [(4, 9, 1), (8, 15, 6), (7, 14, 4), (1, 10, 7), (5, 13, 3), (3, 6, 5), (0, 2, 8), (11, 12, 2)];
    let col = validate_collection(
        shapes.iter().enumerate().map(|(i, &(l, r, h))| LShape::int(format!("f{i}"), l, r, h)).collect(),
    )
    .expect("fixed shapes are valid");
    let bases: Vec<Coord> = [29, 27, 23, 21, 17].iter().map(|&d| Coord::new(d, 2).unwrap()).collect();
    PillarAssignment::from_bases(col, &bases, &[1, 2, 3, 4, 5]).expect("fixed bases are valid")
}

fn criterion_8(states: &[(usize, PillarAssignment)]) -> Outcome {
    let mut found = [0usize; 5];
    let mut extra = random_pillar_states(400);
    extra.push(fixed_three_cascade_state());
    for state in states.iter().map(|(_, s)| s).chain(&extra) {
        for (t, count) in found.iter_mut().enumerate().skip(1) {
            for c in find_cascadings(state, t, 20_000, 4) {
                is_cascading(state, &c).map_err(|e| e.to_string())?;
                let clique = extract_clique_from_cascading(state, &c).map_err(|e| e.to_string())?;
                let shapes = state.collection().shapes();
                let ok = clique.len() == t
                    && clique.last() == c.shapes.last()
                    && clique.windows(2).all(|p| shapes[p[0]].left < shapes[p[1]].left)
                    && clique.iter().enumerate().all(|(i, &a)| {
                        clique[i + 1..].iter().all(|&b| shapes[a].crosses(&shapes[b]))
                    });
                if !ok {
                    return Err(format!("cascading {c:?} gave non-clique {clique:?}"));
                }
                *count += 1;
            }
        }
    }
    Ok(format!(
        "{} pipeline, {} random-pillar and 1 fixed state; tuples verified by t: 1:{} 2:{} 3:{} 4:{}",
        states.len(),
        extra.len() - 1,
        found[1],
        found[2],
        found[3],
        found[4]
    ))
}

/// Independent box test over the pillar's polyline.
fn polyline_meets_box(state: &PillarAssignment, p: usize, s: &LShape) -> bool {
    let pillar = &state.pillars()[p];
    let corners = pillar.corners();
    let zero = Coord::zero();
    let in_box = |x0: &Coord, x1: &Coord, y0: &Coord, y1: &Coord| {
        let (xl, xh) = if x0 <= x1 { (x0, x1) } else { (x1, x0) };
        let (yl, yh) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
        xl <= &s.right && &s.left <= xh && yl <= &s.height && &zero <= yh
    };
    if corners.windows(2).any(|w| in_box(&w[0].x, &w[1].x, &w[0].y, &w[1].y)) {
        return true;
    }
    let last = corners.last().expect("pillars have a base");
    if corners.len() == 1 && in_box(&last.x, &last.x, &last.y, &last.y) {
        return true;
    }
    matches!(pillar.top(), Top::Infinite) && s.projection_contains(&last.x) && last.y <= s.height
}

fn criterion_9(states: &[(usize, PillarAssignment)]) -> Outcome {
    let mut pairs = 0usize;
    for (_, state) in states {
        let shapes = state.collection().shapes();
        for (i, s) in shapes.iter().enumerate() {
            for p in 0..state.pillars().len() {
                if polyline_meets_box(state, p, s) {
                    pairs += 1;
                    match state.assignment()[i] {
                        Some(q) if q <= p => {}
                        other => return Err(format!("shape {} meets pillar {p} but is assigned {other:?}", s.id)),
                    }
                }
            }
        }
        if !state.box_order_violations().is_empty() {
            return Err(String::from("library check disagrees with the polyline check"));
        }
    }
    Ok(format!("{} states, {pairs} (shape, pillar) box contacts, all ordered", states.len()))
}

fn random_intervals(rng: &mut SplitMix64, n: usize) -> Vec<(Coord, Coord)> {
    let mut slots: Vec<i64> = (0..2 * n as i64).collect();
    rng.shuffle(&mut slots);
    (0..n)
        .map(|i| {
            let (a, b) = (slots[2 * i], slots[2 * i + 1]);
            (Coord::from_int(a.min(b)), Coord::from_int(a.max(b)))
        })
        .collect()
}

fn oracle_graph(intervals: &[(Coord, Coord)], overlap: bool) -> IntersectionGraph {
    let ids = (0..intervals.len()).map(|i| format!("i{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..intervals.len() {
        for j in i + 1..intervals.len() {
            let ((a1, b1), (a2, b2)) = (&intervals[i], &intervals[j]);
            let meet = a1 < b2 && a2 < b1;
            let nested = (a1 < a2 && b2 < b1) || (a2 < a1 && b1 < b2);
            if meet && (!overlap || !nested) {
                edges.push((i, j));
            }
        }
    }
    IntersectionGraph::from_edges(ids, &edges)
}

fn criterion_10() -> Outcome {
    let mut rng = SplitMix64::new(SUITE_SEED ^ 10);
    let mut edges = 0;
    for trial in 0..50 {
        let n = rng.range_inclusive(1, 50) as usize;
        let ivs = random_intervals(&mut rng, n);
        let over = build_intersection_graph(&intervals_to_ls(&ivs).map_err(|e| e.to_string())?);
        if !over.same_labelled_graph(&oracle_graph(&ivs, true)) {
            return Err(format!("overlap trial {trial} differs"));
        }
        let ivs = random_intervals(&mut rng, n);
        let inter = build_intersection_graph(&interval_graph_to_ls(&ivs).map_err(|e| e.to_string())?);
        if !inter.same_labelled_graph(&oracle_graph(&ivs, false)) {
            return Err(format!("interval trial {trial} differs"));
        }
        edges += over.edge_count() + inter.edge_count();
    }
    Ok(format!("50 + 50 random interval sets match their oracles ({edges} edges compared)"))
}

fn criterion_11() -> Outcome {
    for n in 3..=12 {
        let c = gadget_gl_representation(n).map_err(|e| e.to_string())?;
        if !c.is_flat() {
            return Err(format!("n={n}: not flat"));
        }
        if !build_intersection_graph(&c).same_labelled_graph(&gadget_graph(Gadget::GlNotIf(n))) {
            return Err(format!("n={n}: graph differs"));
        }
    }
    Ok(String::from("n = 3..=12 representations flat and equal to the gadget"))
}

fn criterion_12(suite: &Suite) -> Outcome {
    let mut rounds = 0;
    for (inst, run) in suite.ok_runs() {
        for class in &run.classes {
            let n = class.members.len();
            if class.rounds.len() > n {
                return Err(format!("{}: {} rounds for {n} shapes", inst.name, class.rounds.len()));
            }
            let mut last = 0;
            for r in &class.rounds {
                if r.colored_before != last || r.colored_after <= r.colored_before {
                    return Err(format!("{} round {}: {} -> {}", inst.name, r.round, r.colored_before, r.colored_after));
                }
                last = r.colored_after;
            }
            if last != n {
                return Err(format!("{}: {last} of {n} colored", inst.name));
            }
            rounds += class.rounds.len();
        }
    }
    Ok(format!("{rounds} rounds, each strictly increasing the colored count"))
}

fn main() -> ExitCode {
    let suite = Suite::build();
    let states = suite.round_states();
    let results: Vec<(&str, Outcome)> = vec![
        ("theorem bound audit", criterion_1(&suite)),
        ("proposition bounds", criterion_2(&suite, &states)),
        ("oracle cross-check", criterion_3()),
        ("pillar refinement", criterion_4(&suite)),
        ("divide and conquer", criterion_5()),
        ("flattening", criterion_6(&suite)),
        ("extremal inequalities", criterion_7(&states)),
        ("cascading cliques", criterion_8(&states)),
        ("assignment order", criterion_9(&states)),
        ("interval embeddings", criterion_10()),
        ("gadget fidelity", criterion_11()),
        ("termination", criterion_12(&suite)),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
