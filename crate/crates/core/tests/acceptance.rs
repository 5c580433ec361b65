//! Acceptance criteria 1 to 11, one line each. Runs without the libtest
//! harness so the lines print on every run; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use fliplab::generators::convex_gon;
use fliplab::verify::{self, test_sets, Options, Suite};
use fliplab::{FlipGraph, FlipKind};

type Verdict = Result<String, String>;
/// Title, time budget in seconds, and the check.
type Criterion = (&'static str, Option<u64>, Box<dyn Fn() -> Verdict>);

/// Runs `suite` and requires every check whose id starts with one of
/// `claims` to pass. Advisory checks never count.
fn suite_claims(suite: Suite, claims: &[&str]) -> Verdict {
    let r = verify::run(&[suite], &Options::default());
    let picked: Vec<_> = r
        .checks
        .iter()
        .filter(|c| !c.advisory && claims.iter().any(|k| c.id.starts_with(&format!("{suite}.{k}."))))
        .collect();
    for k in claims {
        if !picked.iter().any(|c| c.id.starts_with(&format!("{suite}.{k}."))) {
            return Err(format!("no {suite}.{k} checks ran"));
        }
    }
    let failed: Vec<String> = picked
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} (expected {}, observed {})", c.id, c.expected, c.observed))
        .collect();
    if failed.is_empty() {
        Ok(format!("{} checks", picked.len()))
    } else {
        Err(format!("{} of {} failed, first {}", failed.len(), picked.len(), failed[0]))
    }
}

fn all(parts: Vec<Verdict>) -> Verdict {
    let mut notes = Vec::new();
    for p in parts {
        notes.push(p?);
    }
    Ok(notes.join("; "))
}

fn catalan_counts() -> Verdict {
    for n in 4..=8usize {
        let g = FlipGraph::build(Arc::new(convex_gon(n)), FlipKind::Edge, None).map_err(|e| e.to_string())?;
        // Brute-force enumeration supplies the count where it is feasible.
        let expected = if n <= 7 {
            brute_full_triangulations(&convex_gon(n)).len() as u64
        } else {
            catalan(n as u64 - 2)
        };
        if g.len() as u64 != expected {
            return Err(format!("n = {n}: {} nodes, expected {expected}", g.len()));
        }
    }
    let g = FlipGraph::build(Arc::new(convex_gon(5)), FlipKind::Edge, None).map_err(|e| e.to_string())?;
    let cycle = g.len() == 5 && (0..5).all(|i| g.degree(i) == 2) && g.is_connected();
    if !cycle {
        return Err("pentagon flip graph is not a 5-cycle".into());
    }
    Ok("2, 5, 14, 42, 132 nodes; pentagon graph is a 5-cycle".into())
}

/// Recounts flippable edges of every brute-force triangulation at n <= 7:
/// an inner edge flips iff it crosses the segment joining its two apexes.
fn flippable_edges_by_oracle() -> Verdict {
    let mut checked = 0;
    for inst in test_sets(4, 7, 0, verify::DEFAULT_RANDOM_SETS) {
        let ps = &inst.ps;
        let n = ps.len();
        let bound = n.div_ceil(2) - 2;
        let all: BTreeSet<usize> = (0..n).collect();
        for edges in brute_full_triangulations(ps) {
            let shape = (all.clone(), edges);
            let tris = triangles_of(ps, &shape);
            let flippable = shape
                .1
                .iter()
                .filter(|&&(a, b)| {
                    let apex: Vec<usize> = tris
                        .iter()
                        .filter(|t| t.contains(&a) && t.contains(&b))
                        .map(|t| t.iter().copied().find(|&x| x != a && x != b).unwrap())
                        .collect();
                    apex.len() == 2 && crosses(ps, (a, b), (apex[0], apex[1]))
                })
                .count();
            if flippable < bound {
                return Err(format!("{}: a triangulation has {flippable} flippable edges", inst.name));
            }
            checked += 1;
        }
    }
    Ok(format!("oracle recount on {checked} triangulations"))
}

fn connectivity_by_oracle() -> Verdict {
    let mut checked = 0;
    for inst in test_sets(4, 6, 0, 20) {
        let g = FlipGraph::build(inst.ps.clone(), FlipKind::Bistellar, None).map_err(|e| e.to_string())?;
        if g.len() < 2 || g.len() > 200 {
            continue;
        }
        let k = g.vertex_connectivity().map_err(|e| e.to_string())?;
        let brute = brute_connectivity(&g.adjacency());
        if k != brute {
            return Err(format!("{}: max-flow {k}, separator search {brute}", inst.name));
        }
        checked += 1;
    }
    Ok(format!("separator search agrees on {checked} graphs"))
}

fn oracle_equivalence() -> Verdict {
    let mut graphs = 0;
    for inst in test_sets(3, 7, 0, verify::DEFAULT_RANDOM_SETS) {
        let ps = &inst.ps;
        let edge = FlipGraph::build(ps.clone(), FlipKind::Edge, None).map_err(|e| e.to_string())?;
        let found: BTreeSet<EdgeSet> = edge.nodes().iter().map(|t| shape_of(t.vertices(), t.edges().iter().copied()).1).collect();
        if found.len() != edge.len() || found != brute_full_triangulations(ps) {
            return Err(format!("{}: edge flip graph differs from brute force", inst.name));
        }
        let bist = FlipGraph::build(ps.clone(), FlipKind::Bistellar, None).map_err(|e| e.to_string())?;
        let found: BTreeSet<Shape> = bist.nodes().iter().map(|t| shape_of(t.vertices(), t.edges().iter().copied())).collect();
        if found.len() != bist.len() || found != brute_partial_triangulations(ps) {
            return Err(format!("{}: bistellar flip graph differs from brute force", inst.name));
        }
        graphs += 2;
    }
    let (mut regular, mut refuted) = (0, 0);
    for inst in test_sets(3, 6, 0, verify::DEFAULT_RANDOM_SETS) {
        let g = FlipGraph::build(inst.ps.clone(), FlipKind::Bistellar, None).map_err(|e| e.to_string())?;
        for (i, t) in g.nodes().iter().enumerate() {
            match check_regularity(&inst.ps, t) {
                Ok(true) => regular += 1,
                Ok(false) => refuted += 1,
                Err(e) => return Err(format!("{} node {i}: {e}", inst.name)),
            }
        }
    }
    if refuted == 0 {
        return Err("no non-regular triangulation was met, certificates untested".into());
    }
    Ok(format!(
        "{graphs} flip graphs match brute force; {regular} witnesses and {refuted} certificates re-verified"
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("Catalan counts of convex polygons", Some(10), Box::new(catalan_counts)),
        (
            "flippable edges of full triangulations, n <= 9",
            Some(60),
            Box::new(|| all(vec![suite_claims(Suite::Thm2, &["flippable-edges", "tight"]), flippable_edges_by_oracle()])),
        ),
        (
            "bistellar degree at least n-3, n <= 8",
            Some(120),
            Box::new(|| suite_claims(Suite::Thm4, &["min-degree", "hull-only-degree"])),
        ),
        (
            "bistellar flip graph connectivity n-3",
            Some(300),
            Box::new(|| all(vec![suite_claims(Suite::Thm5, &["connectivity", "local-menger"]), connectivity_by_oracle()])),
        ),
        (
            "edge flip graph connectivity, 5 <= n <= 8",
            Some(120),
            Box::new(|| suite_claims(Suite::Thm3ii, &["connectivity"])),
        ),
        (
            "perfect coarsenings and maximal full subdivisions",
            None,
            Box::new(|| suite_claims(Suite::Coarsening, &["perfect-coarsenings", "full-maximal-slack"])),
        ),
        (
            "link complements, degrees and cycle lifts, n <= 7",
            None,
            Box::new(|| {
                suite_claims(
                    Suite::Links,
                    &["full-c4-free", "partial-c4-free", "partial-degree", "full-cycles", "partial-cycles"],
                )
            }),
        ),
        (
            "simultaneous flippability, n <= 9",
            None,
            Box::new(|| suite_claims(Suite::Thm2, &["simultaneous-flips"])),
        ),
        (
            "regularity of the mother example and twisted double-gons",
            Some(600),
            Box::new(|| {
                all(vec![
                    suite_claims(Suite::Mother, &["order-type", "verdicts"]),
                    suite_claims(Suite::Twisted, &["conditions", "non-regular-triangulation", "proper-subsets-regular"]),
                ])
            }),
        ),
        (
            "perfect chains imply regularity; equivalent predicates agree",
            None,
            Box::new(|| suite_claims(Suite::Regularity, &["perfect-chain-regular", "equivalences"])),
        ),
        ("oracle equivalence", None, Box::new(oracle_equivalence)),
    ];

    let mut failed = 0;
    for (k, (title, budget_s, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        let verdict = match (verdict, budget_s) {
            (Ok(_), Some(b)) if took > Duration::from_secs(*b) => Err(format!("took {took:.1?}, budget {b} s")),
            (v, _) => v,
        };
        let (status, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += verdict.is_err() as usize;
        println!("criterion {:>2}  {status}  {title}: {detail} [{:.2} s]", k + 1, took.as_secs_f64());
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
