mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use common::{area2, brute_hull, crosses};
use fliplab::flipgraph::link_of;
use fliplab::generators::random_points;
use fliplab::geom::{orient, segments_cross};
use fliplab::regularity::{delaunay_triangulation, is_regular_subdivision, is_regular_triangulation};
use fliplab::subdivision::Step;
use fliplab::{FlipElement, Kind, Point, PointSet, Subdivision, Triangulation};

const B: i64 = 1 << 30;

fn point() -> impl Strategy<Value = Point> {
    (-B..=B, -B..=B).prop_map(|(x, y)| Point::new(x, y))
}

fn small_point() -> impl Strategy<Value = Point> {
    (-4i64..=4, -4i64..=4).prop_map(|(x, y)| Point::new(x, y))
}

fn point_set(lo: usize, hi: usize) -> impl Strategy<Value = Arc<PointSet>> {
    (lo..=hi, any::<u64>()).prop_map(|(n, seed)| Arc::new(random_points(n, seed, 1000).unwrap()))
}

/// The triangulations visited by a walk that takes flip `c % degree` at
/// each step.
fn walk(start: Triangulation, choices: &[usize], partial: bool) -> Vec<Triangulation> {
    let mut out = vec![start];
    for &c in choices {
        let t = out.last().unwrap();
        let moves: Vec<FlipElement> = if partial {
            t.flippable_elements()
        } else {
            t.flippable_edges().into_iter().map(FlipElement::Edge).collect()
        };
        if moves.is_empty() {
            break;
        }
        let next = t.apply_flip(&moves[c % moves.len()]).unwrap();
        out.push(next);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orientation_is_antisymmetric_and_exact(p in point(), q in point(), r in point()) {
        let o = orient(p, q, r);
        prop_assert_eq!(o, -orient(q, p, r));
        prop_assert_eq!(o, -orient(p, r, q));
        prop_assert_eq!(o, orient(q, r, p));
        let wide = (q.x as i128 - p.x as i128) * (r.y as i128 - p.y as i128)
            - (q.y as i128 - p.y as i128) * (r.x as i128 - p.x as i128);
        prop_assert_eq!(o, wide.signum() as i32);
    }

    #[test]
    fn crossing_is_symmetric(a in small_point(), b in small_point(), c in small_point(), d in small_point()) {
        prop_assume!(a != b && c != d);
        let pts = [a, b, c, d];
        // Only meaningful on general-position quadruples.
        let collinear = (0..4).any(|i| (i + 1..4).any(|j| (j + 1..4).any(|k| {
            orient(pts[i], pts[j], pts[k]) == 0 && pts[i] != pts[j] && pts[j] != pts[k] && pts[i] != pts[k]
        })));
        prop_assume!(!collinear);
        let x = segments_cross(a, b, c, d);
        prop_assert_eq!(x, segments_cross(c, d, a, b));
        prop_assert_eq!(x, segments_cross(b, a, d, c));
        if let Ok(ps) = PointSet::new(vec![a, b, c, d]) {
            prop_assert_eq!(x, crosses(&ps, (0, 1), (2, 3)));
        }
    }

    #[test]
    fn hull_matches_definitional_oracle(ps in point_set(3, 12)) {
        let hull: BTreeSet<usize> = ps.hull().iter().copied().collect();
        prop_assert_eq!(&hull, &brute_hull(&ps));
        let h = ps.hull();
        for i in 0..h.len() {
            prop_assert!(area2(&ps, h[i], h[(i + 1) % h.len()], h[(i + 2) % h.len()]) > 0);
        }
    }

    #[test]
    fn flips_are_involutions_and_keep_triangulations_valid(
        ps in point_set(4, 10),
        choices in prop::collection::vec(any::<usize>(), 0..25),
    ) {
        let ts = walk(Triangulation::seed_full(ps.clone()), &choices, true);
        for t in &ts {
            prop_assert!(t.validate().is_ok());
            let nv = t.vertices().len();
            prop_assert_eq!(t.edges().len(), 3 * nv - 3 - ps.h());
            for x in t.flippable_elements() {
                let u = t.apply_flip(&x).unwrap();
                let back = t.inverse_flip(&x).unwrap();
                prop_assert_eq!(u.apply_flip(&back).unwrap().canonical_key(), t.canonical_key());
            }
        }
    }

    #[test]
    fn flippable_edge_lower_bound_beyond_exhaustive_sizes(
        ps in point_set(10, 16),
        choices in prop::collection::vec(any::<usize>(), 0..40),
    ) {
        let n = ps.len();
        for t in walk(Triangulation::seed_full(ps.clone()), &choices, false) {
            let bound = n.div_ceil(2) - 2;
            prop_assert!(t.flippable_edges().len() >= bound);
            prop_assert!(t.flippable_elements().len() >= n - 3);
        }
    }

    #[test]
    fn links_have_c4_free_complements(
        ps in point_set(5, 9),
        choices in prop::collection::vec(any::<usize>(), 0..10),
    ) {
        let n = ps.len();
        for t in walk(Triangulation::seed_full(ps.clone()), &choices, true) {
            let partial = link_of(&t, Kind::Partial);
            prop_assert!(!partial.complement_has_c4());
            prop_assert!(partial.min_degree().unwrap_or(usize::MAX) >= n - 4);
            if t.kind() == Kind::Full {
                prop_assert!(!link_of(&t, Kind::Full).complement_has_c4());
            }
        }
    }

    #[test]
    fn delaunay_is_regular_with_checked_witness(ps in point_set(3, 11)) {
        let t = delaunay_triangulation(ps);
        let r = is_regular_triangulation(&t);
        prop_assert!(r.regular);
        prop_assert_eq!(r.witness_verified, Some(true));
        let s = is_regular_subdivision(&Subdivision::from_triangulation(&t));
        prop_assert!(s.regular);
    }

    #[test]
    fn coarsening_steps_track_slack(
        ps in point_set(4, 8),
        choices in prop::collection::vec(any::<usize>(), 0..12),
    ) {
        let n = ps.len();
        let mut s = Subdivision::from_triangulation(&Triangulation::seed_full(ps));
        for c in choices {
            prop_assert_eq!(s.slack() as i64, s.slack_closed_form());
            let perfect = s.perfect_coarsenings().len();
            prop_assert!(perfect + s.slack() + 3 >= n);
            let up = s.direct_coarsenings();
            if up.is_empty() {
                prop_assert!(s.is_trivial() || s.slack() == n - 3);
                break;
            }
            let (step, next) = up[c % up.len()].clone();
            // Isolating U removes its incident edges E_U and adds |E_U| - 2|U|,
            // which may be 0; the other steps add exactly one.
            let inc = match &step {
                Step::Isolate(u) => {
                    let eu = s.edges().iter().filter(|e| u.iter().any(|&p| e.has(p))).count();
                    eu as i64 - 2 * u.len() as i64
                }
                Step::AddPoint(_) | Step::RemoveEdge(_) => 1,
            };
            prop_assert!(inc >= 0);
            prop_assert_eq!(next.slack() as i64, s.slack() as i64 + inc);
            prop_assert!(s.is_refinement_of(&next));
            s = next;
        }
    }

    #[test]
    fn refinements_of_a_coarsening_refine_it(
        ps in point_set(4, 7),
        choices in prop::collection::vec(any::<usize>(), 1..6),
    ) {
        let mut s = Subdivision::from_triangulation(&Triangulation::seed_full(ps));
        for c in choices {
            let up = s.direct_coarsenings();
            if up.is_empty() {
                break;
            }
            s = up[c % up.len()].1.clone();
        }
        let refs = s.refinements();
        prop_assert!(!refs.is_empty());
        let keys: BTreeSet<Vec<u8>> = refs.iter().map(Triangulation::canonical_key).collect();
        prop_assert_eq!(keys.len(), refs.len());
        for t in &refs {
            prop_assert!(Subdivision::from_triangulation(t).is_refinement_of(&s));
        }
    }
}
