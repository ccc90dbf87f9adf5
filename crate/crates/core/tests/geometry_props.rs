mod common;

use common::{collection, shapes_of, triples};
use lchroma_core::coord::Coord;
use lchroma_core::flatten::{chain_levels, flatten_partition, precedes};
use lchroma_core::geometry::{canonicalize, flatness_violation, intersects, validate_collection, GeometryError, LShape};
use lchroma_core::graph::{build_intersection_graph, clique_number, CLIQUE_NODE_BUDGET};
use proptest::prelude::*;

/// Closed axis-parallel segment as `(x0, x1, y0, y1)`.
type Seg = (i64, i64, i64, i64);

fn segments(t: (i64, i64, i64)) -> [Seg; 2] {
    let (l, r, h) = t;
    [(l, l, 0, h), (l, r, h, h)]
}

fn meet(a: Seg, b: Seg) -> bool {
    a.0 <= b.1 && b.0 <= a.1 && a.2 <= b.3 && b.2 <= a.3
}

fn point_sets_meet(a: (i64, i64, i64), b: (i64, i64, i64)) -> bool {
    segments(a).iter().any(|&x| segments(b).iter().any(|&y| meet(x, y)))
}

fn longest_chain_ending(shapes: &[LShape], i: usize, memo: &mut [Option<usize>]) -> usize {
    if let Some(v) = memo[i] {
        return v;
    }
    let mut best = 1;
    for j in 0..shapes.len() {
        if j != i && precedes(&shapes[j], &shapes[i]) {
            best = best.max(1 + longest_chain_ending(shapes, j, memo));
        }
    }
    memo[i] = Some(best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn intersects_matches_segment_geometry(t in triples(12)) {
        let shapes = shapes_of(&t);
        for i in 0..t.len() {
            for j in 0..t.len() {
                let want = i == j || point_sets_meet(t[i], t[j]);
                prop_assert_eq!(intersects(&shapes[i], &shapes[j]).unwrap(), want);
            }
        }
        let g = build_intersection_graph(&validate_collection(shapes.clone()).unwrap());
        for i in 0..t.len() {
            for j in 0..t.len() {
                prop_assert_eq!(g.has_edge(i, j), i != j && point_sets_meet(t[i], t[j]));
            }
        }
    }

    #[test]
    fn shared_values_are_rejected(t in triples(8), pick in any::<(usize, usize, bool)>()) {
        prop_assume!(t.len() >= 2);
        let mut shapes = shapes_of(&t);
        let (a, b) = (pick.0 % t.len(), pick.1 % t.len());
        prop_assume!(a != b);
        if pick.2 {
            shapes[b].height = shapes[a].height.clone();
        } else {
            shapes[b].left = shapes[a].right.clone();
            prop_assume!(shapes[b].left < shapes[b].right);
        }
        prop_assert!(intersects(&shapes[a], &shapes[b]).is_err());
        let is_distinctness_violation = matches!(
            validate_collection(shapes),
            Err(GeometryError::DistinctnessViolation { .. })
        );
        prop_assert!(is_distinctness_violation);
    }

    #[test]
    fn flat_flag_matches_pairwise_nesting(t in triples(10)) {
        let col = validate_collection(shapes_of(&t)).unwrap();
        let nested = (0..t.len()).any(|i| {
            (0..t.len()).any(|j| i != j && t[j].0 < t[i].0 && t[i].1 < t[j].1 && t[i].2 > t[j].2)
        });
        prop_assert_eq!(col.is_flat(), !nested);
        prop_assert_eq!(flatness_violation(col.shapes()).is_none(), !nested);
    }

    #[test]
    fn canonicalize_keeps_the_order_type(t in triples(10), scale in 1i64..7, shift in -50i64..50) {
        let stretched: Vec<LShape> = t
            .iter()
            .enumerate()
            .map(|(i, &(l, r, h))| {
                LShape::new(
                    format!("s{i}"),
                    Coord::new(l * scale + shift, 3).unwrap(),
                    Coord::new(r * scale + shift, 3).unwrap(),
                    Coord::from_int(h * scale),
                )
            })
            .collect();
        let canon = canonicalize(&stretched).unwrap();
        let original = validate_collection(shapes_of(&t)).unwrap();
        prop_assert_eq!(canon.shapes(), original.shapes());
        let again = canonicalize(canon.shapes()).unwrap();
        prop_assert_eq!(again.shapes(), canon.shapes());
    }

    #[test]
    fn canonicalize_breaks_ties(t in proptest::collection::vec((0i64..4, 1i64..4, 1i64..3), 0..8)) {
        let shapes: Vec<LShape> = t
            .iter()
            .enumerate()
            .map(|(i, &(l, w, h))| LShape::int(format!("s{i}"), l, l + w, h))
            .collect();
        let canon = canonicalize(&shapes).unwrap();
        let mut xs: Vec<i64> = canon.shapes().iter().flat_map(|s| [s.left.to_i64().unwrap(), s.right.to_i64().unwrap()]).collect();
        xs.sort_unstable();
        prop_assert_eq!(xs, (0..2 * t.len() as i64).collect::<Vec<_>>());
        for (a, b) in shapes.iter().zip(canon.shapes()) {
            prop_assert_eq!(&a.id, &b.id);
        }
        for i in 0..t.len() {
            for j in 0..t.len() {
                if shapes[i].height < shapes[j].height {
                    prop_assert!(canon.shape(i).height < canon.shape(j).height);
                }
                if shapes[i].left < shapes[j].left {
                    prop_assert!(canon.shape(i).left < canon.shape(j).left);
                }
            }
        }
    }

    #[test]
    fn precedence_is_a_strict_order(t in triples(9)) {
        let s = shapes_of(&t);
        for a in &s {
            prop_assert!(!precedes(a, a));
            for b in &s {
                prop_assert!(!(precedes(a, b) && precedes(b, a)));
                for c in &s {
                    if precedes(a, b) && precedes(b, c) {
                        prop_assert!(precedes(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn flatten_gives_at_most_omega_flat_classes(col in collection(14)) {
        let g = build_intersection_graph(&col);
        let omega = clique_number(&g, CLIQUE_NODE_BUDGET).unwrap().size;
        let f = flatten_partition(&col, omega).unwrap();
        prop_assert!(f.classes.len() <= omega);
        let mut seen = vec![0usize; col.len()];
        for (c, members) in f.members.iter().enumerate() {
            prop_assert!(f.classes[c].is_flat());
            prop_assert!(!members.is_empty());
            prop_assert_eq!(f.classes[c].len(), members.len());
            for (k, &i) in members.iter().enumerate() {
                seen[i] += 1;
                prop_assert_eq!(f.class_of[i], c);
                prop_assert_eq!(f.classes[c].shape(k), col.shape(i));
            }
        }
        prop_assert!(seen.iter().all(|&v| v == 1));
    }

    #[test]
    fn chain_levels_are_longest_chains(col in collection(12)) {
        let mut memo = vec![None; col.len()];
        let want: Vec<usize> = (0..col.len()).map(|i| longest_chain_ending(col.shapes(), i, &mut memo)).collect();
        prop_assert_eq!(chain_levels(&col), want.clone());
        if let Some(&m) = want.iter().max() {
            prop_assert!(flatten_partition(&col, m - 1).is_err());
        }
    }
}

#[test]
fn malformed_shapes_are_rejected() {
    assert_eq!(
        validate_collection(vec![LShape::int("a", 3, 3, 1)]).unwrap_err(),
        GeometryError::EmptyProjection("a".into())
    );
    assert_eq!(
        validate_collection(vec![LShape::int("a", 0, 3, 0)]).unwrap_err(),
        GeometryError::NonPositiveHeight("a".into())
    );
    assert_eq!(
        validate_collection(vec![LShape::int("a", 0, 3, 1), LShape::int("a", 1, 4, 2)]).unwrap_err(),
        GeometryError::DuplicateId("a".into())
    );
    assert_eq!(
        canonicalize(&[LShape::int("a", 0, 3, 1), LShape::int("a", 1, 4, 2)]).unwrap_err(),
        GeometryError::DuplicateId("a".into())
    );
}

#[test]
fn a_shape_meets_itself() {
    let a = LShape::int("a", 0, 3, 1);
    assert!(intersects(&a, &a).unwrap());
}
