//! End-to-end coloring of grounded L-collections, with verification and audit.
//!
//! The collection is split into flat classes. Each class gets a complete
//! pillar assignment; shapes sharing a pillar color are then refined by
//! coloring the two permutation instances of their pillar, and the triple
//! (class, pillar color, sub-color) is packed into one integer.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::extend::{complete_pillar_assignment, palette_size, ExtendError, RoundTrace};
use crate::flatten::{flatten_partition, FlattenError};
use crate::geometry::LCollection;
use crate::graph::{build_intersection_graph, clique_number, color_permutation_graph, GraphError, CLIQUE_NODE_BUDGET};
use crate::pillars::{split_pillar_class, PillarAssignment, PillarError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flatten(#[from] FlattenError),
    #[error(transparent)]
    Extend(#[from] ExtendError),
    #[error(transparent)]
    Pillar(#[from] PillarError),
    #[error("shapes `{first}` and `{second}` intersect but share a color")]
    VerificationFailed { first: String, second: String },
    #[error("a component of pillar color {color} in class {class} meets more than one pillar")]
    ComponentSpansPillars { class: usize, color: u32 },
    #[error("pillar {pillar} of class {class} needs {needed} sub-colors in a block of {limit}")]
    SubColorOverflow {
        class: usize,
        pillar: usize,
        needed: usize,
        limit: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorOptions {
    /// Use this value as ω instead of computing the clique number.
    pub omega_override: Option<usize>,
    /// Node budget of the exact clique search.
    pub clique_budget: u64,
}

impl Default for ColorOptions {
    fn default() -> Self {
        ColorOptions {
            omega_override: None,
            clique_budget: CLIQUE_NODE_BUDGET,
        }
    }
}

/// Bound arithmetic for one run, in exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundAudit {
    pub omega: usize,
    pub k: u32,
    pub palette_used: usize,
    /// `2ω²k`.
    pub pipeline_bound: u128,
    /// `17ω⁴`.
    pub theorem_bound: u128,
    pub within_pipeline: bool,
    pub within_theorem: bool,
}

impl BoundAudit {
    /// The bounds that apply: both for `ω >= 2`, the pipeline one otherwise.
    pub fn holds(&self) -> bool {
        self.within_pipeline && (self.omega < 2 || self.within_theorem)
    }
}

pub fn audit_bound(omega: usize, k: u32, palette_used: usize) -> BoundAudit {
    let w = omega as u128;
    let pipeline_bound = 2 * w * w * k as u128;
    let theorem_bound = 17 * w * w * w * w;
    BoundAudit {
        omega,
        k,
        palette_used,
        pipeline_bound,
        theorem_bound,
        within_pipeline: palette_used as u128 <= pipeline_bound,
        within_theorem: palette_used as u128 <= theorem_bound,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audit {
    pub omega: usize,
    /// False when ω came from [`ColorOptions::omega_override`].
    pub omega_measured: bool,
    pub flatten_classes: usize,
    /// Distinct pillar colors used by each class.
    pub pillar_colors_used: Vec<usize>,
    /// Largest number of sub-colors any single component needed.
    pub refinement_max: usize,
    pub bound: BoundAudit,
}

/// Sub-coloring of one connected component of a pillar-color class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    pub class: usize,
    pub pillar: usize,
    pub pillar_color: u32,
    /// Positions in the input collection.
    pub shapes: Vec<usize>,
    /// Sub-colors used on the shapes meeting a horizontal step of the pillar.
    pub first_colors: usize,
    /// Sub-colors used on the rest.
    pub second_colors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    ids: Vec<String>,
    colors: Vec<u32>,
    pub audit: Audit,
}

impl Coloring {
    /// Colors parallel to the input collection.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn color_of(&self, id: &str) -> Option<u32> {
        self.ids.iter().position(|s| s == id).map(|i| self.colors[i])
    }

    pub fn palette_used(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn max_color(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }
}

/// Per-class pipeline output kept for inspection.
#[derive(Clone, Debug)]
pub struct ClassRun {
    /// Positions of the class members in the input collection.
    pub members: Vec<usize>,
    pub assignment: PillarAssignment,
    pub rounds: Vec<RoundTrace>,
}

#[derive(Clone, Debug)]
pub struct ColorRun {
    pub coloring: Coloring,
    pub classes: Vec<ClassRun>,
    pub components: Vec<ComponentReport>,
}

pub fn color_grounded_l(collection: &LCollection) -> Result<Coloring, ColorError> {
    Ok(color_with_options(collection, &ColorOptions::default())?.coloring)
}

pub fn color_with_options(collection: &LCollection, options: &ColorOptions) -> Result<ColorRun, ColorError> {
    let n = collection.len();
    let (omega, measured) = match options.omega_override {
        Some(w) => (w, false),
        None if n == 0 => (0, true),
        None => {
            let g = build_intersection_graph(collection);
            (clique_number(&g, options.clique_budget)?.size, true)
        }
    };
    if n == 0 {
        let audit = Audit {
            omega,
            omega_measured: measured,
            flatten_classes: 0,
            pillar_colors_used: Vec::new(),
            refinement_max: 0,
            bound: audit_bound(omega, 0, 0),
        };
        return Ok(ColorRun {
            coloring: Coloring {
                ids: Vec::new(),
                colors: Vec::new(),
                audit,
            },
            classes: Vec::new(),
            components: Vec::new(),
        });
    }

    let k = if omega == 1 { 1 } else { palette_size(omega) };
    let block = 2 * omega as u32;
    let flat = flatten_partition(collection, omega)?;
    let mut colors = vec![0u32; n];
    let mut classes = Vec::new();
    let mut components = Vec::new();
    let mut pillar_colors_used = Vec::new();
    let mut refinement_max = 0;

    for (ci, (class, members)) in flat.classes.iter().zip(&flat.members).enumerate() {
        let completion = complete_pillar_assignment(class, omega)?;
        pillar_colors_used.push(completion.colors_used());
        let state = completion.state.assignment;
        let graph = state.graph();
        let assignment = state.assignment();
        for pc in 1..=k {
            let same: Vec<usize> = (0..class.len()).filter(|&i| state.shape_color(i) == Some(pc)).collect();
            if same.is_empty() {
                continue;
            }
            for comp in graph.induced(&same).components() {
                let shapes: Vec<usize> = comp.iter().map(|&v| same[v]).collect();
                let pillar = assignment[shapes[0]].expect("colored shapes are assigned");
                if shapes.iter().any(|&s| assignment[s] != Some(pillar)) {
                    return Err(ColorError::ComponentSpansPillars { class: ci, color: pc });
                }
                let (first, second) = split_pillar_class(class, &state.pillars()[pillar], &shapes)?;
                let first = color_permutation_graph(&first);
                let second = color_permutation_graph(&second);
                for count in [first.color_count, second.color_count] {
                    if count > omega {
                        return Err(ColorError::SubColorOverflow {
                            class: ci,
                            pillar,
                            needed: count,
                            limit: omega,
                        });
                    }
                }
                let base = ci as u32 * k * block + (pc - 1) * block;
                for &(s, c) in &first.colors {
                    colors[members[s]] = base + c;
                }
                for &(s, c) in &second.colors {
                    colors[members[s]] = base + omega as u32 + c;
                }
                refinement_max = refinement_max.max(first.color_count + second.color_count);
                components.push(ComponentReport {
                    class: ci,
                    pillar,
                    pillar_color: pc,
                    shapes: shapes.iter().map(|&s| members[s]).collect(),
                    first_colors: first.color_count,
                    second_colors: second.color_count,
                });
            }
        }
        classes.push(ClassRun {
            members: members.clone(),
            assignment: state,
            rounds: completion.rounds,
        });
    }

    if let Some((a, b)) = first_conflict(collection, &colors) {
        return Err(ColorError::VerificationFailed {
            first: collection.shape(a).id.clone(),
            second: collection.shape(b).id.clone(),
        });
    }
    let coloring = Coloring {
        ids: collection.shapes().iter().map(|s| s.id.clone()).collect(),
        audit: Audit {
            omega,
            omega_measured: measured,
            flatten_classes: flat.classes.len(),
            pillar_colors_used,
            refinement_max,
            bound: audit_bound(omega, k, colors.iter().collect::<BTreeSet<_>>().len()),
        },
        colors,
    };
    Ok(ColorRun {
        coloring,
        classes,
        components,
    })
}

/// The first intersecting pair `(a, b)`, `a < b`, that shares a color,
/// or an uncolored shape paired with itself.
pub fn first_conflict(collection: &LCollection, colors: &[u32]) -> Option<(usize, usize)> {
    let shapes = collection.shapes();
    if let Some(i) = (0..shapes.len()).find(|&i| colors.get(i).is_none_or(|&c| c == 0)) {
        return Some((i, i));
    }
    for i in 0..shapes.len() {
        for j in i + 1..shapes.len() {
            if colors[i] == colors[j] && shapes[i].crosses(&shapes[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub proper: bool,
    /// Ids of the first offending pair.
    pub conflict: Option<(String, String)>,
    pub bound: BoundAudit,
}

impl VerifyReport {
    pub fn passes(&self) -> bool {
        self.proper && self.bound.holds()
    }
}

/// Checks properness of `colors` (parallel to the collection) and audits
/// the palette against the bounds for `omega` and `k`.
pub fn verify_coloring(collection: &LCollection, colors: &[u32], omega: usize, k: u32) -> VerifyReport {
    let conflict = first_conflict(collection, colors).map(|(a, b)| {
        let id = |i: usize| collection.shape(i).id.clone();
        (id(a), id(b))
    });
    let used = colors.iter().collect::<BTreeSet<_>>().len();
    VerifyReport {
        proper: conflict.is_none(),
        conflict,
        bound: audit_bound(omega, k, used),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{validate_collection, LShape};

    #[test]
    fn single_shape_gets_one_color() {
        let c = validate_collection(vec![LShape::int("a", 0, 4, 1)]).unwrap();
        let col = color_grounded_l(&c).unwrap();
        assert_eq!(col.palette_used(), 1);
        assert_eq!(col.audit.omega, 1);
        assert_eq!(col.audit.bound.k, 1);
    }

    #[test]
    fn chain_of_three_uses_three_colors() {
        let c = validate_collection(vec![
            LShape::int("L1", 2, 4, 3),
            LShape::int("L2", 1, 5, 2),
            LShape::int("L3", 0, 6, 1),
        ])
        .unwrap();
        let col = color_grounded_l(&c).unwrap();
        assert_eq!(col.palette_used(), 3);
        assert_eq!(col.audit.flatten_classes, 3);
        assert!(col.audit.bound.holds());
    }

    #[test]
    fn empty_collection() {
        let col = color_grounded_l(&LCollection::empty()).unwrap();
        assert_eq!(col.palette_used(), 0);
        assert_eq!(col.audit.omega, 0);
    }

    #[test]
    fn audit_arithmetic() {
        let a = audit_bound(2, 33, 100);
        assert_eq!((a.pipeline_bound, a.theorem_bound), (264, 272));
        let a = audit_bound(3, 58, 5);
        assert_eq!((a.pipeline_bound, a.theorem_bound), (1044, 1377));
        assert_eq!(audit_bound(1, 1, 2).pipeline_bound, 2);
        assert!(!audit_bound(2, 33, 265).holds());
    }

    #[test]
    fn verify_flags_constant_coloring() {
        let c = validate_collection(vec![LShape::int("a", 0, 2, 1), LShape::int("b", 1, 3, 2)]).unwrap();
        let r = verify_coloring(&c, &[1, 1], 2, 33);
        assert!(!r.proper);
        assert_eq!(r.conflict, Some(("a".into(), "b".into())));
        assert!(verify_coloring(&c, &[1, 2], 2, 33).passes());
    }
}
