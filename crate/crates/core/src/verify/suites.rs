//! The individual suites. Each one maps instances to checks in parallel;
//! the caller sorts by id, so scheduling never changes the output.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{make_check, test_sets, Check, Family, Instance, Options, Suite};
use crate::flipgraph::{
    link_of, local_connectivity, max_simultaneously_flippable, refinement_subgraph, FlipGraph, FlipKind,
};
use crate::generators::{
    check_twisted, mother_concurrency_det, mother_example, mother_subdivision, mother_t_double_prime,
    mother_t_prime, order_type, twisted_double_gon, twisted_square_subdivision,
};
use crate::geom::{Point, PointSet};
use crate::graph::Edge;
use crate::poset::{build_poset, Poset, DEFAULT_POSET_CAP};
use crate::regularity::{
    compliant_dim, is_regular_subdivision, is_regular_triangulation, omega_labeling, perfect_chain_to_trivial,
    valid_labeling_check, Fold, HeightFunction, RegularityReport,
};
use crate::subdivision::{locked_orientation, unoriented_edges_audit, Subdivision};
use crate::triangulation::{Kind, Triangulation};

pub(super) fn run_suite(suite: Suite, opts: &Options) -> Vec<Check> {
    match suite {
        Suite::Thm2 => thm2(opts),
        Suite::Thm4 => thm4(opts),
        Suite::Thm5 => thm5(opts),
        Suite::Thm3ii => thm3ii(opts),
        Suite::Links => links(opts),
        Suite::Coarsening => coarsening(opts),
        Suite::Regularity => regularity(opts),
        Suite::Twisted => twisted(opts),
        Suite::Mother => mother(opts),
        Suite::Poset => poset(opts),
    }
}

fn n_max(suite: Suite, opts: &Options) -> usize {
    opts.n_max.unwrap_or(suite.default_n_max())
}

fn par(insts: Vec<Instance>, f: impl Fn(&Instance) -> Vec<Check> + Sync + Send) -> Vec<Check> {
    insts.par_iter().flat_map_iter(f).collect()
}

fn flip_graph(inst: &Instance, kind: FlipKind, opts: &Options) -> Result<FlipGraph, String> {
    FlipGraph::build(inst.ps.clone(), kind, Some(opts.cap.unwrap_or(kind.default_cap()))).map_err(|e| e.to_string())
}

fn build(inst: &Instance, opts: &Options) -> Result<Poset, String> {
    build_poset(inst.ps.clone(), Some(opts.cap.unwrap_or(DEFAULT_POSET_CAP))).map_err(|e| e.to_string())
}

/// `ceil(n/2 - 2)`, clamped at zero.
pub(crate) fn half_minus_two(n: usize) -> usize {
    n.saturating_sub(3) / 2
}

fn shared<T>(r: &Result<T, String>) -> Result<&T, String> {
    r.as_ref().map_err(Clone::clone)
}

fn thm2(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Thm2;
    par(test_sets(4, n_max(S, opts), opts.seed, opts.random_sets), |inst| {
        let n = inst.n();
        let g = flip_graph(inst, FlipKind::Edge, opts);
        let need = half_minus_two(n);
        let mut out = vec![make_check(
            S,
            "flippable-edges",
            "every full triangulation has at least ceil(n/2 - 2) flippable edges",
            &inst.name,
            false,
            || {
                let g = shared(&g)?;
                let m = g.nodes().iter().map(|t| t.flippable_edges().len()).min().unwrap_or(0);
                Ok((format!(">= {need}"), format!("min {m} over {} triangulations", g.len()), m >= need))
            },
        )];
        if inst.family == Family::TriangleCenter {
            out.push(make_check(
                S,
                "tight",
                "the triangle with a center point has no flippable edge",
                &inst.name,
                false,
                || {
                    let g = shared(&g)?;
                    let m = g.nodes().iter().map(|t| t.flippable_edges().len()).max().unwrap_or(0);
                    Ok(("0".into(), m.to_string(), m == 0))
                },
            ));
        }
        out.push(make_check(
            S,
            "simultaneous-flips",
            "beta >= ceil((n-4)/5) and alpha + beta >= 4(n-4)/5 for every full triangulation",
            &inst.name,
            false,
            || {
                let g = shared(&g)?;
                let need_b = n.saturating_sub(4).div_ceil(5);
                let (mut min_b, mut min_ab) = (usize::MAX, usize::MAX);
                for t in g.nodes() {
                    let a = t.flippable_edges().len();
                    let b = max_simultaneously_flippable(t).len();
                    min_b = min_b.min(b);
                    min_ab = min_ab.min(a + b);
                }
                let ok = min_b >= need_b && 5 * min_ab >= 4 * n.saturating_sub(4);
                Ok((
                    format!("beta >= {need_b}, alpha+beta >= {}/5", 4 * n.saturating_sub(4)),
                    format!("min beta {min_b}, min alpha+beta {min_ab}"),
                    ok,
                ))
            },
        ));
        out
    })
}

fn thm4(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Thm4;
    par(test_sets(4, n_max(S, opts), opts.seed, opts.random_sets), |inst| {
        let n = inst.n();
        let g = flip_graph(inst, FlipKind::Bistellar, opts);
        vec![
            make_check(
                S,
                "min-degree",
                "every partial triangulation admits at least n-3 bistellar flips",
                &inst.name,
                false,
                || {
                    let g = shared(&g)?;
                    let m = g.min_degree();
                    Ok((format!(">= {}", n - 3), format!("min degree {m} over {} nodes", g.len()), m + 3 >= n))
                },
            ),
            make_check(
                S,
                "hull-only-degree",
                "the hull-only triangulation admits exactly n-3 bistellar flips",
                &inst.name,
                false,
                || {
                    let g = shared(&g)?;
                    let t = Triangulation::hull_only(inst.ps.clone());
                    let i = g.index_of(&t).ok_or("hull-only triangulation missing from the graph")?;
                    let d = g.degree(i);
                    let e = t.flippable_elements().len();
                    Ok((format!("{}", n - 3), format!("degree {d}, elements {e}"), d + 3 == n && e == d))
                },
            ),
        ]
    })
}

fn thm5(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Thm5;
    let hi = n_max(S, opts);
    // Random and mother sets stop one short of the structured families.
    let insts: Vec<Instance> = test_sets(4, hi, opts.seed, opts.random_sets)
        .into_iter()
        .filter(|i| matches!(i.family, Family::Convex | Family::Twisted) || i.n() < hi.max(8))
        .collect();
    let seed = opts.seed;
    par(insts, move |inst| {
        let n = inst.n();
        let g = flip_graph(inst, FlipKind::Bistellar, opts);
        let kappa = g.as_ref().map_err(Clone::clone).and_then(|g| g.vertex_connectivity().map_err(|e| e.to_string()));
        vec![
            make_check(
                S,
                "connectivity",
                "the bistellar flip graph is (n-3)-connected, exactly so when some node has degree n-3",
                &inst.name,
                false,
                || {
                    let g = shared(&g)?;
                    let k = *shared(&kappa)?;
                    let md = g.min_degree();
                    let (exp, ok) = if md + 3 == n {
                        (format!("= {}", n - 3), k + 3 == n)
                    } else {
                        (format!(">= {}", n - 3), k + 3 >= n)
                    };
                    Ok((exp, format!("{k} (min degree {md}, {} nodes)", g.len()), ok))
                },
            ),
            make_check(
                S,
                "local-menger",
                "sampled distance-2 pairs are joined by at least kappa disjoint paths",
                &inst.name,
                false,
                || {
                    let g = shared(&g)?;
                    let k = *shared(&kappa)?;
                    let adj = g.adjacency();
                    let pairs = distance_two_pairs(&adj, 12, seed ^ n as u64);
                    let worst = pairs.iter().map(|&(u, w)| local_connectivity(&adj, u, w)).min();
                    Ok((
                        format!(">= {k}"),
                        format!("min {} over {} pairs", worst.map_or("-".into(), |w| w.to_string()), pairs.len()),
                        worst.map_or(true, |w| w >= k),
                    ))
                },
            ),
            make_check(
                S,
                "triangle-free",
                "the bistellar flip graph has no triangle (reported, not asserted)",
                &inst.name,
                true,
                || {
                    let g = shared(&g)?;
                    let tf = g.is_triangle_free();
                    Ok(("true".into(), tf.to_string(), tf))
                },
            ),
        ]
    })
}

/// Up to `count` pairs at graph distance exactly two, chosen by seed.
fn distance_two_pairs(adj: &[Vec<usize>], count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<usize> = (0..adj.len()).collect();
    starts.shuffle(&mut rng);
    let mut out = Vec::new();
    for u in starts {
        let far = adj[u]
            .iter()
            .flat_map(|&v| adj[v].iter().copied())
            .find(|&w| w != u && !adj[u].contains(&w));
        if let Some(w) = far {
            out.push((u, w));
            if out.len() == count {
                break;
            }
        }
    }
    out
}

fn thm3ii(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Thm3ii;
    par(test_sets(5, n_max(S, opts), opts.seed, opts.random_sets), |inst| {
        let (n, h) = (inst.n(), inst.h());
        let g = flip_graph(inst, FlipKind::Edge, opts);
        let kappa = g.as_ref().map_err(Clone::clone).and_then(|g| g.vertex_connectivity().map_err(|e| e.to_string()));
        let need = half_minus_two(n).max(h.saturating_sub(3));
        vec![
            make_check(
                S,
                "connectivity",
                "the edge flip graph is max(ceil(n/2 - 2), h-3)-connected",
                &inst.name,
                false,
                || {
                    let k = *shared(&kappa)?;
                    Ok((format!(">= {need}"), format!("{k} ({} nodes)", shared(&g)?.len()), k >= need))
                },
            ),
            make_check(
                S,
                "connectivity-is-min-degree",
                "edge flip graph connectivity equals its minimum degree (reported, not asserted)",
                &inst.name,
                true,
                || {
                    let k = *shared(&kappa)?;
                    let md = shared(&g)?.min_degree();
                    Ok((format!("{md}"), format!("{k}"), k == md))
                },
            ),
            make_check(
                S,
                "triangle-free",
                "the edge flip graph has no triangle",
                &inst.name,
                false,
                || {
                    let tf = shared(&g)?.is_triangle_free();
                    Ok(("true".into(), tf.to_string(), tf))
                },
            ),
        ]
    })
}

/// The witness cycle starts at `center`, has 4 or 5 distinct nodes of `g`
/// and closes up, so the part after the center is a center-avoiding path.
fn cycle_lifts(g: &FlipGraph, center: usize, cycle: &[Triangulation]) -> bool {
    let Some(idx) = cycle.iter().map(|t| g.index_of(t)).collect::<Option<Vec<usize>>>() else {
        return false;
    };
    let k = idx.len();
    let distinct: BTreeSet<usize> = idx.iter().copied().collect();
    (4..=5).contains(&k)
        && idx[0] == center
        && distinct.len() == k
        && (0..k).all(|i| g.is_adjacent(idx[i], idx[(i + 1) % k]))
}

#[derive(Default)]
struct LinkTally {
    nodes: usize,
    c4: usize,
    low_degree: usize,
    min_degree: Option<usize>,
    bad_cycles: usize,
    edges: usize,
}

fn tally_links(g: &FlipGraph, kind: Kind, degree_need: usize) -> LinkTally {
    let mut t = LinkTally::default();
    for i in 0..g.len() {
        let link = link_of(g.node(i), kind);
        t.nodes += 1;
        t.c4 += link.complement_has_c4() as usize;
        if let Some(d) = link.min_degree() {
            t.min_degree = Some(t.min_degree.map_or(d, |m: usize| m.min(d)));
            t.low_degree += (d < degree_need) as usize;
        }
        for (j, e) in link.edges().iter().enumerate() {
            t.edges += 1;
            let c = link.cycle(j);
            if !cycle_lifts(g, i, c) || c.len() != e.weight + 2 {
                t.bad_cycles += 1;
            }
        }
    }
    t
}

fn links(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Links;
    par(test_sets(4, n_max(S, opts), opts.seed, opts.random_sets), |inst| {
        let (n, h) = (inst.n(), inst.h());
        let ge = flip_graph(inst, FlipKind::Edge, opts);
        let gb = flip_graph(inst, FlipKind::Bistellar, opts);
        let full_need = (n.saturating_sub(5) / 2).max(h.saturating_sub(4));
        let full = ge.as_ref().map(|g| tally_links(g, Kind::Full, full_need)).map_err(Clone::clone);
        let part_need = n.saturating_sub(4);
        let part = gb.as_ref().map(|g| tally_links(g, Kind::Partial, part_need)).map_err(Clone::clone);
        let md = |t: &LinkTally| t.min_degree.map_or("-".to_string(), |d| d.to_string());
        vec![
            make_check(S, "full-c4-free", "no full link has a 4-cycle in its complement", &inst.name, false, || {
                let t = shared(&full)?;
                Ok(("0 links with a 4-cycle".into(), format!("{} of {}", t.c4, t.nodes), t.c4 == 0))
            }),
            make_check(
                S,
                "full-degree",
                "every flippable edge is compatible with at least max(ceil(n/2 - 3), h-4) others",
                &inst.name,
                false,
                || {
                    let t = shared(&full)?;
                    Ok((format!(">= {full_need}"), format!("min {}", md(t)), t.low_degree == 0))
                },
            ),
            make_check(
                S,
                "full-cycles",
                "each full link edge spans a center-avoiding 4- or 5-cycle of its weight",
                &inst.name,
                false,
                || {
                    let t = shared(&full)?;
                    Ok(("0 bad".into(), format!("{} bad of {}", t.bad_cycles, t.edges), t.bad_cycles == 0))
                },
            ),
            make_check(S, "partial-c4-free", "no partial link has a 4-cycle in its complement", &inst.name, false, || {
                let t = shared(&part)?;
                Ok(("0 links with a 4-cycle".into(), format!("{} of {}", t.c4, t.nodes), t.c4 == 0))
            }),
            make_check(
                S,
                "partial-degree",
                "every flippable element is compatible with at least n-4 others",
                &inst.name,
                false,
                || {
                    let t = shared(&part)?;
                    Ok((format!(">= {part_need}"), format!("min {}", md(t)), t.low_degree == 0))
                },
            ),
            make_check(
                S,
                "partial-cycles",
                "each partial link edge spans a center-avoiding 4- or 5-cycle of its weight",
                &inst.name,
                false,
                || {
                    let t = shared(&part)?;
                    Ok(("0 bad".into(), format!("{} bad of {}", t.bad_cycles, t.edges), t.bad_cycles == 0))
                },
            ),
            make_check(
                S,
                "flip-symmetry",
                "for flippable e, f: e is flippable after flipping f iff f is flippable after flipping e",
                &inst.name,
                false,
                || {
                    let g = shared(&ge)?;
                    let bad = g.nodes().iter().map(flip_symmetry_violations).sum::<usize>();
                    Ok(("0 violations".into(), format!("{bad}"), bad == 0))
                },
            ),
            make_check(
                S,
                "two-flips",
                "two successive flips e, f with f not undoing e remove exactly e and f",
                &inst.name,
                false,
                || {
                    let g = shared(&ge)?;
                    let bad = g.nodes().iter().map(two_flip_violations).sum::<usize>();
                    Ok(("0 violations".into(), format!("{bad}"), bad == 0))
                },
            ),
        ]
    })
}

fn flip_symmetry_violations(t: &Triangulation) -> usize {
    let es = t.flippable_edges();
    let after: Vec<Vec<Edge>> = es
        .iter()
        .map(|e| t.edge_flip(e).expect("flippable").flippable_edges())
        .collect();
    let mut bad = 0;
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            if after[j].contains(&es[i]) != after[i].contains(&es[j]) {
                bad += 1;
            }
        }
    }
    bad
}

fn two_flip_violations(t: &Triangulation) -> usize {
    let mut bad = 0;
    for e in t.flippable_edges() {
        let te = t.edge_flip(&e).expect("flippable");
        let ebar = *te.edges().difference(t.edges()).next().expect("a flip adds one edge");
        if te.edges().symmetric_difference(t.edges()).count() != 2 {
            bad += 1;
        }
        for f in te.flippable_edges().into_iter().filter(|f| *f != ebar) {
            let tef = te.edge_flip(&f).expect("flippable");
            let removed: BTreeSet<Edge> = t.edges().difference(tef.edges()).copied().collect();
            let sym = t.edges().symmetric_difference(tef.edges()).count();
            if removed != BTreeSet::from([e, f]) || sym != 4 {
                bad += 1;
            }
        }
    }
    bad
}

/// Upward reachability (strict) in the Hasse diagram.
fn up_closure(p: &Poset) -> Vec<Vec<bool>> {
    let n = p.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Slack rises along every Hasse edge, so descending slack visits
    // coarsenings first.
    order.sort_by_key(|&i| std::cmp::Reverse(p.node(i).slack()));
    let mut reach = vec![vec![false; n]; n];
    for &i in &order {
        let mut r = vec![false; n];
        for &(j, _) in p.up(i) {
            r[j] = true;
            for (x, &b) in reach[j].iter().enumerate() {
                if b {
                    r[x] = true;
                }
            }
        }
        reach[i] = r;
    }
    reach
}

fn coarsening(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Coarsening;
    let hi = n_max(S, opts);
    let mut insts = test_sets(4, hi, opts.seed, opts.random_sets);
    insts.extend(test_sets(hi + 1, hi + 1, opts.seed, 0).into_iter().filter(|i| i.family == Family::Convex));
    par(insts, |inst| {
        let (n, h) = (inst.n(), inst.h());
        let p = build(inst, opts);
        let reach = p.as_ref().map(up_closure).map_err(Clone::clone);
        let each = |f: &dyn Fn(&Subdivision) -> bool| -> Result<(usize, usize), String> {
            let p = shared(&p)?;
            Ok((p.nodes().iter().filter(|s| !f(s)).count(), p.len()))
        };
        vec![
            make_check(
                S,
                "perfect-coarsenings",
                "a subdivision of slack D has at least n-3-D perfect coarsenings",
                &inst.name,
                false,
                || {
                    let (bad, tot) = each(&|s| s.perfect_coarsenings().len() + s.slack() + 3 >= n)?;
                    Ok(("0 violations".into(), format!("{bad} of {tot}"), bad == 0))
                },
            ),
            make_check(
                S,
                "prime-coarseners",
                "prime coarseners are disjoint with increment at most 1, exactly 1 when they induce a tree",
                &inst.name,
                false,
                || {
                    let (bad, tot) = each(&|s| prime_coarseners_ok(s))?;
                    Ok(("0 violations".into(), format!("{bad} of {tot}"), bad == 0))
                },
            ),
            make_check(
                S,
                "slack-formula",
                "region slacks sum to the closed-form slack",
                &inst.name,
                false,
                || {
                    let (bad, tot) = each(&|s| s.slack() as i64 == s.slack_closed_form())?;
                    Ok(("0 violations".into(), format!("{bad} of {tot}"), bad == 0))
                },
            ),
            make_check(
                S,
                "unoriented-audit",
                "unoriented inner edges meet the indegree and slack bounds under the locking orientation",
                &inst.name,
                false,
                || {
                    let (bad, tot) = each(&|s| {
                        unoriented_edges_audit(s, &locked_orientation(s)).map(|a| a.check().is_ok()).unwrap_or(false)
                    })?;
                    Ok(("0 violations".into(), format!("{bad} of {tot}"), bad == 0))
                },
            ),
            make_check(
                S,
                "full-maximal-slack",
                "a maximal full subdivision has slack at least max(n/2 - 2, h-3)",
                &inst.name,
                false,
                || {
                    let p = shared(&p)?;
                    let reach = shared(&reach)?;
                    let full: Vec<usize> = (0..p.len()).filter(|&i| p.node(i).kind() == Kind::Full).collect();
                    let maximal: Vec<usize> = full
                        .iter()
                        .copied()
                        .filter(|&i| !full.iter().any(|&j| reach[i][j]))
                        .collect();
                    let min = maximal.iter().map(|&i| p.node(i).slack()).min();
                    let ok = maximal
                        .iter()
                        .all(|&i| 2 * p.node(i).slack() + 4 >= n && p.node(i).slack() + 3 >= h);
                    Ok((
                        format!(">= max({}/2, {})", n as i64 - 4, h as i64 - 3),
                        format!("min {} over {} maximal", min.map_or("-".into(), |m| m.to_string()), maximal.len()),
                        ok,
                    ))
                },
            ),
            make_check(
                S,
                "slack-two-refinements",
                "every proper refinement of a slack-2 subdivision has slack at most 1",
                &inst.name,
                false,
                || {
                    let p = shared(&p)?;
                    let reach = shared(&reach)?;
                    let mut bad = 0;
                    for j in (0..p.len()).filter(|&j| p.node(j).slack() == 2) {
                        bad += (0..p.len()).filter(|&i| reach[i][j] && p.node(i).slack() > 1).count();
                    }
                    Ok(("0 violations".into(), format!("{bad}"), bad == 0))
                },
            ),
            make_check(
                S,
                "direct-covers",
                "no subdivision lies strictly between a subdivision and a direct coarsening",
                &inst.name,
                false,
                || {
                    let p = shared(&p)?;
                    let reach = shared(&reach)?;
                    let mut bad = 0;
                    for i in 0..p.len() {
                        for &(j, _) in p.up(i) {
                            bad += p.up(i).iter().any(|&(k, _)| k != j && reach[k][j]) as usize;
                        }
                    }
                    Ok(("0 violations".into(), format!("{bad} of {} Hasse edges", p.hasse_edge_count()), bad == 0))
                },
            ),
        ]
    })
}

fn prime_coarseners_ok(s: &Subdivision) -> bool {
    let cs = s.prime_coarseners();
    let mut seen = BTreeSet::new();
    for c in &cs {
        if c.increment > 1 || !c.points.iter().all(|p| seen.insert(*p)) {
            return false;
        }
        let members: BTreeSet<usize> = c.points.iter().copied().collect();
        let internal = c
            .incident_edges
            .iter()
            .filter(|e| members.contains(&e.lo()) && members.contains(&e.hi()))
            .count();
        // Prime coarseners are connected, so this edge count means a tree.
        if internal + 1 == members.len() && c.increment != 1 {
            return false;
        }
    }
    true
}

fn regularity(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Regularity;
    let hi = n_max(S, opts);
    let seed = opts.seed;
    par(test_sets(4, hi, opts.seed, opts.random_sets), move |inst| {
        let n = inst.n();
        let p = build(inst, opts);
        let reports: Result<Vec<RegularityReport>, String> =
            shared(&p).map(|p| p.nodes().iter().map(is_regular_subdivision).collect());
        let mut out = vec![make_check(
            S,
            "equivalences",
            "all triangulations regular, all subdivisions regular, top height n-3, every Hasse step perfect and height equal to slack hold together",
            &inst.name,
            false,
            || {
                let p = shared(&p)?;
                let reps = shared(&reports)?;
                let g = flip_graph(inst, FlipKind::Bistellar, opts)?;
                let preds = [
                    g.nodes().iter().all(|t| is_regular_triangulation(t).regular),
                    reps.iter().all(|r| r.regular),
                    p.height_max() + 3 == n,
                    p.all_steps_perfect(),
                    p.height_is_slack(),
                ];
                let agree = preds.iter().all(|&b| b == preds[0]);
                let (exp, ok) = match inst.family {
                    Family::Convex => ("all true", agree && preds[0]),
                    Family::Twisted => ("all false", agree && !preds[0]),
                    _ => ("all equal", agree),
                };
                Ok((exp.into(), format!("{preds:?}"), ok))
            },
        )];
        // The per-subdivision checks run one size below the equivalences.
        if n + 1 > hi.max(5) {
            return out;
        }
        out.push(make_check(
            S,
            "perfect-chain-regular",
            "a subdivision with a chain of perfect coarsenings to the trivial one is regular",
            &inst.name,
            false,
            || {
                let p = shared(&p)?;
                let reps = shared(&reports)?;
                let chained = perfectly_chained(p);
                let bad = chained.iter().filter(|&&i| !reps[i].regular).count();
                // Cross-check the stand-alone search on the deepest chained node.
                if let Some(&i) = chained.iter().min_by_key(|&&i| p.node(i).slack()) {
                    let found = perfect_chain_to_trivial(p.node(i), usize::MAX).map_err(|e| e.to_string())?;
                    if found.is_none() {
                        return Ok(("0 counterexamples".into(), "chain search disagrees with poset".into(), false));
                    }
                }
                Ok(("0 counterexamples".into(), format!("{bad} of {} chained", chained.len()), bad == 0))
            },
        ));
        out.push(make_check(
            S,
            "certificates",
            "every verdict carries a verified lifting or an exactly verified infeasibility certificate",
            &inst.name,
            false,
            || {
                let reps = shared(&reports)?;
                let g = flip_graph(inst, FlipKind::Bistellar, opts)?;
                let tri: Vec<RegularityReport> = g.nodes().iter().map(is_regular_triangulation).collect();
                let all = reps.iter().chain(&tri);
                let mut bad = 0;
                let mut non = 0;
                for r in all {
                    non += !r.regular as usize;
                    let ok = if r.regular {
                        r.witness_verified == Some(true)
                    } else {
                        r.certificate_verified == Some(true)
                    };
                    bad += !ok as usize;
                }
                Ok((
                    "0 unverified".into(),
                    format!("{bad} of {} ({non} non-regular)", reps.len() + tri.len()),
                    bad == 0,
                ))
            },
        ));
        out.push(make_check(
            S,
            "compliant-dimension",
            "the compliant height functions of S span at least max(3, |V(S)| - slack) dimensions",
            &inst.name,
            false,
            || {
                let p = shared(&p)?;
                let bad = p
                    .nodes()
                    .iter()
                    .filter(|s| {
                        let (d, _) = compliant_dim(s);
                        d < 3 || d + s.slack() < s.vertices().len()
                    })
                    .count();
                Ok(("0 violations".into(), format!("{bad} of {}", p.len()), bad == 0))
            },
        ));
        out.push(make_check(
            S,
            "preservation",
            "below a regular subdivision of full compliant dimension, a perfect refinement is regular with full dimension",
            &inst.name,
            false,
            || {
                let p = shared(&p)?;
                let reps = shared(&reports)?;
                let full_dim = |s: &Subdivision| compliant_dim(s).0 + s.slack() == s.vertices().len();
                let dims: Vec<bool> = p.nodes().iter().map(full_dim).collect();
                let (mut tested, mut bad) = (0, 0);
                for i in 0..p.len() {
                    for &(j, _) in p.up(i) {
                        let perfect = p.node(j).slack() == p.node(i).slack() + 1;
                        if perfect && reps[j].regular && dims[j] {
                            tested += 1;
                            bad += !(reps[i].regular && dims[i]) as usize;
                        }
                    }
                }
                Ok(("0 violations".into(), format!("{bad} of {tested} pairs"), bad == 0))
            },
        ));
        out.push(make_check(
            S,
            "labelings",
            "liftings label every inner edge a valley, and compliant labelings are valid and constant on perfect coarseners",
            &inst.name,
            false,
            || {
                let p = shared(&p)?;
                let reps = shared(&reports)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 8);
                let mut bad = 0;
                for (s, r) in p.nodes().iter().zip(reps) {
                    if let Some(w) = &r.witness {
                        let lab = omega_labeling(s, w).map_err(|e| e.to_string())?;
                        bad += !lab.values().all(|&f| f == Fold::Valley) as usize;
                    }
                    let (_, basis) = compliant_dim(s);
                    let mut ws: Vec<HeightFunction> = basis.clone();
                    ws.push(random_combination(&basis, &mut rng));
                    let perfect: Vec<Vec<Edge>> = s
                        .prime_coarseners()
                        .into_iter()
                        .filter(|c| c.is_perfect)
                        .map(|c| c.incident_edges)
                        .collect();
                    for w in &ws {
                        let lab = omega_labeling(s, w).map_err(|e| e.to_string())?;
                        let valid = valid_labeling_check(s, &lab).map_err(|e| e.to_string())?.is_none();
                        let constant = perfect.iter().all(|es| {
                            let ls: Vec<Fold> = es.iter().filter_map(|e| lab.get(e).copied()).collect();
                            ls.windows(2).all(|w| w[0] == w[1])
                        });
                        bad += !(valid && constant) as usize;
                    }
                }
                Ok(("0 violations".into(), format!("{bad}"), bad == 0))
            },
        ));
        out
    })
}

/// Nodes joined to the trivial subdivision by a chain of perfect steps.
fn perfectly_chained(p: &Poset) -> Vec<usize> {
    let top = p.trivial_index();
    let mut ok = vec![false; p.len()];
    ok[top] = true;
    let mut stack = vec![top];
    while let Some(j) = stack.pop() {
        for &i in p.down(j) {
            if !ok[i] && p.node(j).slack() == p.node(i).slack() + 1 {
                ok[i] = true;
                stack.push(i);
            }
        }
    }
    (0..p.len()).filter(|&i| ok[i]).collect()
}

fn random_combination(basis: &[HeightFunction], rng: &mut ChaCha8Rng) -> HeightFunction {
    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
    for b in basis {
        let c = BigRational::from_integer(rng.gen_range(-50i64..=50).into());
        for (&i, h) in b.heights() {
            *acc.entry(i).or_insert_with(|| BigRational::from_integer(0.into())) += &c * h;
        }
    }
    HeightFunction::new(acc)
}

/// Proper subsets of size at least 4 (triangles are trivially regular),
/// all of them, or `sample` drawn by seed when given.
fn proper_subsets(n: usize, sample: Option<usize>, seed: u64) -> Vec<Vec<usize>> {
    let ok = |m: u32| (4..n as u32).contains(&m.count_ones());
    match sample {
        None => (0u32..1 << n).filter(|&m| ok(m)).map(|m| bits(m, n)).collect(),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = BTreeSet::new();
            while seen.len() < k {
                let m: u32 = rng.gen_range(0..1 << n);
                if ok(m) {
                    seen.insert(m);
                }
            }
            seen.into_iter().map(|m| bits(m, n)).collect()
        }
    }
}

fn bits(m: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| m >> i & 1 == 1).collect()
}

fn twisted(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Twisted;
    let ks: Vec<usize> = (3..=n_max(S, opts) / 2).collect();
    let seed = opts.seed;
    ks.into_par_iter()
        .flat_map_iter(|k| {
            let name = format!("twisted-k{k}");
            let n = 2 * k;
            let ps = twisted_double_gon(k).map(Arc::new).map_err(|e| e.to_string());
            let inst = ps.as_ref().ok().map(|ps| Instance {
                name: name.clone(),
                family: Family::Twisted,
                ps: ps.clone(),
            });
            let mut out = vec![
                make_check(S, "conditions", "the twisted double-gon conditions hold exactly", &name, false, || {
                    let ps = shared(&ps)?;
                    check_twisted(ps, k)?;
                    Ok((format!("h = {k}, conditions hold"), format!("h = {}", ps.h()), ps.h() == k))
                }),
                make_check(
                    S,
                    "square-subdivision",
                    "the spoke-and-cycle subdivision has slack n-3 and no perfect chain to the trivial one",
                    &name,
                    false,
                    || {
                        let ps = shared(&ps)?;
                        let sq = twisted_square_subdivision(ps.clone());
                        let chain = perfect_chain_to_trivial(&sq, usize::MAX).map_err(|e| e.to_string())?;
                        Ok((
                            format!("slack {}, no chain", n - 3),
                            format!("slack {}, chain {}", sq.slack(), chain.is_some()),
                            sq.slack() + 3 == n && chain.is_none(),
                        ))
                    },
                ),
                make_check(
                    S,
                    "non-regular-triangulation",
                    "some full triangulation is not regular",
                    &name,
                    false,
                    || {
                        let inst = inst.as_ref().ok_or("no instance")?;
                        let g = flip_graph(inst, FlipKind::Edge, opts)?;
                        let mut non = 0;
                        let mut unverified = 0;
                        for t in g.nodes() {
                            let r = is_regular_triangulation(t);
                            if !r.regular {
                                non += 1;
                                unverified += (r.certificate_verified != Some(true)) as usize;
                            }
                        }
                        Ok((
                            ">= 1 non-regular, all certified".into(),
                            format!("{non} of {} non-regular, {unverified} uncertified", g.len()),
                            non >= 1 && unverified == 0,
                        ))
                    },
                ),
                make_check(
                    S,
                    "proper-subsets-regular",
                    "every triangulation of every proper subset is regular",
                    &name,
                    false,
                    || {
                        let ps = shared(&ps)?;
                        let sample = (k >= 5).then_some(200);
                        let subsets = proper_subsets(n, sample, seed ^ k as u64);
                        let results: Vec<Result<(usize, usize), String>> = subsets
                            .par_iter()
                            .map(|sub| {
                                let q = Arc::new(ps.subset(sub).map_err(|e| e.to_string())?);
                                let g = FlipGraph::build(q, FlipKind::Bistellar, None).map_err(|e| e.to_string())?;
                                let bad = g
                                    .nodes()
                                    .iter()
                                    .filter(|t| {
                                        let r = is_regular_triangulation(t);
                                        !(r.regular && r.witness_verified == Some(true))
                                    })
                                    .count();
                                Ok((bad, g.len()))
                            })
                            .collect();
                        let (mut bad, mut tot) = (0, 0);
                        for r in results {
                            let (b, t) = r?;
                            bad += b;
                            tot += t;
                        }
                        let scope = if sample.is_some() { "sampled" } else { "all" };
                        Ok((
                            "0 non-regular".into(),
                            format!("{bad} of {tot} triangulations over {} {scope} subsets", subsets.len()),
                            bad == 0,
                        ))
                    },
                ),
            ];
            if k == 3 {
                out.push(make_check(
                    S,
                    "hereditary",
                    "adding points to a set with a non-regular triangulation keeps one",
                    &name,
                    false,
                    || {
                        let ps = shared(&ps)?;
                        let mut bad = 0;
                        let supers = supersets(ps, 3, seed);
                        for q in &supers {
                            let g = FlipGraph::build(Arc::new(q.clone()), FlipKind::Edge, None).map_err(|e| e.to_string())?;
                            bad += g.nodes().iter().all(|t| is_regular_triangulation(t).regular) as usize;
                        }
                        Ok(("0 all-regular supersets".into(), format!("{bad} of {}", supers.len()), bad == 0))
                    },
                ));
            }
            out
        })
        .collect()
}

/// `count` one-point extensions of `ps` in general position, by seed.
fn supersets(ps: &PointSet, count: usize, seed: u64) -> Vec<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = ps.points().iter().map(|p| p.x.abs().max(p.y.abs())).max().unwrap_or(1) * 2;
    let mut out = Vec::new();
    while out.len() < count {
        let c = Point::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        let mut pts = ps.points().to_vec();
        pts.push(c);
        if let Ok(q) = PointSet::new(pts) {
            out.push(q);
        }
    }
    out
}

fn mother(_opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Mother;
    let mut out = vec![make_check(
        S,
        "order-type",
        "both variants have the same order type, and only the concurrent one has concurrent lines",
        "mother",
        false,
        || {
            let (a, b) = (mother_example(true), mother_example(false));
            let (da, db) = (mother_concurrency_det(&a), mother_concurrency_det(&b));
            let same = order_type(&a) == order_type(&b);
            Ok((
                "same order type, det 0 vs nonzero".into(),
                format!("same {same}, det {da} vs {db}"),
                same && da == 0 && db != 0,
            ))
        },
    )];
    for (concurrent, tag) in [(true, "concurrent"), (false, "skew")] {
        out.push(make_check(
            S,
            "verdicts",
            "concurrent: S regular, T' and T'' not; skew: S not regular, exactly one of T', T'' regular",
            &format!("mother-{tag}"),
            false,
            || {
                let base = Arc::new(mother_example(concurrent));
                let s = is_regular_subdivision(&mother_subdivision(base.clone()));
                let t1 = is_regular_subdivision(&Subdivision::from_triangulation(&mother_t_prime(base.clone())));
                let t2 = is_regular_subdivision(&Subdivision::from_triangulation(&mother_t_double_prime(base)));
                let certified = [&s, &t1, &t2].iter().all(|r| {
                    if r.regular {
                        r.witness_verified == Some(true)
                    } else {
                        r.certificate_verified == Some(true)
                    }
                });
                let verdict = (s.regular, t1.regular, t2.regular);
                let ok = if concurrent {
                    verdict == (true, false, false)
                } else {
                    !s.regular && (t1.regular != t2.regular)
                };
                let exp = if concurrent {
                    "S yes, T' no, T'' no"
                } else {
                    "S no, exactly one of T', T''"
                };
                let yn = |b: bool| if b { "yes" } else { "no" };
                Ok((
                    exp.into(),
                    format!("S {}, T' {}, T'' {}; certified {certified}", yn(verdict.0), yn(verdict.1), yn(verdict.2)),
                    ok && certified,
                ))
            },
        ));
    }
    out
}

fn poset(opts: &Options) -> Vec<Check> {
    const S: Suite = Suite::Poset;
    par(test_sets(4, n_max(S, opts), opts.seed, opts.random_sets), |inst| {
        let n = inst.n();
        let p = build(inst, opts);
        let mut out = vec![make_check(
            S,
            "top-height",
            "the trivial subdivision is the top, with height at least n-3",
            &inst.name,
            false,
            || {
                let p = shared(&p)?;
                let top = p.height(p.trivial_index());
                let ups = p.up(p.trivial_index()).len();
                Ok((
                    format!("height max >= {}, no coarsening", n - 3),
                    format!("height {top} of max {}, {ups} coarsenings", p.height_max()),
                    top == p.height_max() && top + 3 >= n && ups == 0,
                ))
            },
        )];
        match inst.family {
            Family::Convex => out.push(make_check(
                S,
                "convex-ladder",
                "in convex position the top height is n-3, every Hasse step is perfect and height equals slack",
                &inst.name,
                false,
                || {
                    let p = shared(&p)?;
                    let obs = (p.height_max(), p.all_steps_perfect(), p.height_is_slack());
                    Ok((format!("({}, true, true)", n - 3), format!("{obs:?}"), obs == (n - 3, true, true)))
                },
            )),
            Family::Twisted => out.push(make_check(
                S,
                "twisted-height",
                "the trivial subdivision of a twisted double-gon sits above height n-3",
                &inst.name,
                false,
                || {
                    let p = shared(&p)?;
                    let top = p.height(p.trivial_index());
                    Ok((format!("> {}", n - 3), format!("{top}"), top + 3 > n))
                },
            )),
            _ => {}
        }
        if n <= 6 {
            out.push(make_check(
                S,
                "refinement-products",
                "the refinements of a subdivision induce the product of its regions' flip graphs",
                &inst.name,
                false,
                || {
                    let p = shared(&p)?;
                    let ge = flip_graph(inst, FlipKind::Edge, opts)?;
                    let gb = flip_graph(inst, FlipKind::Bistellar, opts)?;
                    let mut bad = 0;
                    let mut tested = 0;
                    for s in p.nodes() {
                        let mut graphs = vec![&gb];
                        if s.kind() == Kind::Full {
                            graphs.push(&ge);
                        }
                        for g in graphs {
                            tested += 1;
                            let r = refinement_subgraph(g, s);
                            let size: usize = r.factor_sizes.iter().product();
                            bad += !(r.is_product && size == r.len()) as usize;
                        }
                    }
                    Ok(("0 violations".into(), format!("{bad} of {tested}"), bad == 0))
                },
            ));
        }
        out
    })
}
