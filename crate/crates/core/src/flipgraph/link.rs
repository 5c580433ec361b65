//! Links of triangulations: flippable elements joined when they are
//! compatible, weighted by the length of the flip cycle they span.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::geom::convex_hull;
use crate::graph::Edge;
use crate::subdivision::{pflip, Subdivision};
use crate::triangulation::{FlipElement, Kind, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compatibility {
    /// Interior-disjoint territories; spans a 4-cycle.
    Independent,
    /// Territories form a convex pentagon; spans a 5-cycle.
    WeaklyIndependent,
    /// Compatible as elements of a partial triangulation.
    CompatiblePartial,
    Incompatible,
}

impl Compatibility {
    pub fn is_compatible(&self) -> bool {
        *self != Compatibility::Incompatible
    }
}

/// Result of classifying one pair of flippable elements.
#[derive(Clone, Debug)]
pub struct Classified {
    pub class: Compatibility,
    /// Slack-2 coarsening refined by `T`, `T[x]` and `T[y]`, when compatible.
    pub coarsening: Option<Subdivision>,
    /// Its refinements as a flip cycle starting at the center; empty when
    /// incompatible.
    pub cycle: Vec<Triangulation>,
}

impl Classified {
    /// 2 for a 4-cycle, 3 for a 5-cycle.
    pub fn weight(&self) -> Option<usize> {
        if self.cycle.is_empty() {
            None
        } else {
            Some(self.cycle.len() - 2)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkEdge {
    pub a: usize,
    pub b: usize,
    pub weight: usize,
    pub class: Compatibility,
}

#[derive(Clone, Debug)]
pub struct Link {
    center: Triangulation,
    kind: Kind,
    nodes: Vec<FlipElement>,
    edges: Vec<LinkEdge>,
    cycles: Vec<Vec<Triangulation>>,
}

impl Link {
    pub fn center(&self) -> &Triangulation {
        &self.center
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn nodes(&self) -> &[FlipElement] {
        &self.nodes
    }

    pub fn edges(&self) -> &[LinkEdge] {
        &self.edges
    }

    /// Witness flip cycle of `edges()[i]`, starting at the center.
    pub fn cycle(&self, i: usize) -> &[Triangulation] {
        &self.cycles[i]
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.a == i || e.b == i).count()
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.nodes.len()).map(|i| self.degree(i)).min()
    }

    /// True iff the complement graph contains a (not necessarily induced)
    /// cycle of length four.
    pub fn complement_has_c4(&self) -> bool {
        let k = self.nodes.len();
        let mut comp = vec![vec![true; k]; k];
        for (i, row) in comp.iter_mut().enumerate() {
            row[i] = false;
        }
        for e in &self.edges {
            comp[e.a][e.b] = false;
            comp[e.b][e.a] = false;
        }
        for u in 0..k {
            for w in u + 1..k {
                let common = (0..k).filter(|&z| comp[u][z] && comp[w][z]).count();
                if common >= 2 {
                    return true;
                }
            }
        }
        false
    }
}

/// Link of `t`. With `Kind::Full` the nodes are flippable edges and
/// compatibility is decided by territory geometry; with `Kind::Partial` the
/// nodes are all flippable elements and compatibility means a common
/// coarsening of slack 2 exists.
pub fn link_of(t: &Triangulation, kind: Kind) -> Link {
    let nodes: Vec<FlipElement> = match kind {
        Kind::Full => t.flippable_edges().into_iter().map(FlipElement::Edge).collect(),
        Kind::Partial => t.flippable_elements(),
    };
    let mut edges = Vec::new();
    let mut cycles = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let c = compatibility_classify(t, &nodes[i], &nodes[j], kind);
            if let Some(w) = c.weight() {
                edges.push(LinkEdge {
                    a: i,
                    b: j,
                    weight: w,
                    class: c.class,
                });
                cycles.push(c.cycle);
            }
        }
    }
    Link {
        center: t.clone(),
        kind,
        nodes,
        edges,
        cycles,
    }
}

/// Interior-disjoint territories, i.e. no common incident triangle.
fn territories_disjoint(t: &Triangulation, e: &Edge, f: &Edge) -> bool {
    let (l, r) = t.apexes(e);
    let sides = [
        Edge::new(e.lo(), l),
        Edge::new(e.hi(), l),
        Edge::new(e.lo(), r),
        Edge::new(e.hi(), r),
    ];
    !sides.contains(f)
}

/// Classifies two distinct flippable elements of `t`.
pub fn compatibility_classify(
    t: &Triangulation,
    x: &FlipElement,
    y: &FlipElement,
    kind: Kind,
) -> Classified {
    assert!(x != y, "elements must differ");
    assert!(t.is_flippable(x) && t.is_flippable(y), "elements must be flippable");
    let class = match (kind, x, y) {
        (Kind::Full, FlipElement::Edge(e), FlipElement::Edge(f)) => {
            if territories_disjoint(t, e, f) {
                Compatibility::Independent
            } else {
                let pts: BTreeSet<usize> = t.territory(e).into_iter().chain(t.territory(f)).collect();
                let coords: Vec<_> = pts.iter().map(|&i| t.ps().point(i)).collect();
                let hull = convex_hull(&coords).expect("distinct points in general position");
                if hull.len() == 5 {
                    Compatibility::WeaklyIndependent
                } else {
                    Compatibility::Incompatible
                }
            }
        }
        (Kind::Full, _, _) => panic!("full links contain only edge flips"),
        (Kind::Partial, _, _) => Compatibility::CompatiblePartial,
    };
    if class == Compatibility::Incompatible {
        return Classified {
            class,
            coarsening: None,
            cycle: Vec::new(),
        };
    }
    let Some(coarsening) = common_slack_two(t, x, y) else {
        assert!(
            kind == Kind::Partial,
            "compatible edge pair without a slack-2 coarsening"
        );
        return Classified {
            class: Compatibility::Incompatible,
            coarsening: None,
            cycle: Vec::new(),
        };
    };
    let cycle = flip_cycle(t, coarsening.refinements());
    let expected = match class {
        Compatibility::Independent => Some(4),
        Compatibility::WeaklyIndependent => Some(5),
        _ => None,
    };
    if let Some(len) = expected {
        assert_eq!(cycle.len(), len, "cycle length disagrees with territory geometry");
    }
    Classified {
        class,
        coarsening: Some(coarsening),
        cycle,
    }
}

/// The slack-2 coarsening refined by `T`, `T[x]` and `T[y]`, if any.
///
/// Slack rises strictly under proper coarsening, so such a subdivision
/// covers `pFlip(T, x)` and is one of its direct coarsenings. It need not be
/// the finest common coarsening of the two single flips: two edges sharing a
/// degree-4 endpoint are resolved by isolating that endpoint.
fn common_slack_two(t: &Triangulation, x: &FlipElement, y: &FlipElement) -> Option<Subdivision> {
    let px = pflip(t, x)?;
    let ty = Subdivision::from_triangulation(&t.apply_flip(y).ok()?);
    let mut found = px
        .direct_coarsenings()
        .into_iter()
        .map(|(_, s)| s)
        .filter(|s| s.slack() == 2 && ty.is_refinement_of(s));
    let s = found.next()?;
    debug_assert!(found.next().is_none(), "the slack-2 coarsening is unique");
    Some(s)
}

/// Orders the refinements of a slack-2 subdivision into the cycle they span
/// under single flips, starting at `t`.
fn flip_cycle(t: &Triangulation, refs: Vec<Triangulation>) -> Vec<Triangulation> {
    let k = refs.len();
    assert!(k == 4 || k == 5, "slack-2 subdivision has {k} refinements");
    let adjacent = |a: &Triangulation, b: &Triangulation| {
        a.flippable_elements()
            .iter()
            .any(|x| a.apply_flip(x).map(|u| u == *b).unwrap_or(false))
    };
    let start = refs.iter().position(|r| r == t).expect("center refines the join");
    let mut order = vec![start];
    let mut used = vec![false; k];
    used[start] = true;
    while order.len() < k {
        let last = &refs[*order.last().expect("nonempty")];
        let next = (0..k)
            .find(|&j| !used[j] && adjacent(last, &refs[j]))
            .expect("refinements form a cycle");
        used[next] = true;
        order.push(next);
    }
    assert!(adjacent(&refs[order[k - 1]], &refs[start]), "cycle closes");
    order.into_iter().map(|i| refs[i].clone()).collect()
}

/// A largest set of pairwise independent flippable edges of `t`.
pub fn max_simultaneously_flippable(t: &Triangulation) -> Vec<Edge> {
    let es = t.flippable_edges();
    let k = es.len();
    let ok: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i != j && territories_disjoint(t, &es[i], &es[j])).collect())
        .collect();
    fn grow(ok: &[Vec<bool>], cur: &mut Vec<usize>, cand: Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() + cand.len() <= best.len() {
            return;
        }
        if cand.is_empty() {
            *best = cur.clone();
            return;
        }
        for (pos, &v) in cand.iter().enumerate() {
            if cur.len() + cand.len() - pos <= best.len() {
                return;
            }
            let next: Vec<usize> = cand[pos + 1..].iter().copied().filter(|&w| ok[v][w]).collect();
            cur.push(v);
            grow(ok, cur, next, best);
            cur.pop();
        }
    }
    let mut best = Vec::new();
    grow(&ok, &mut Vec::new(), (0..k).collect(), &mut best);
    best.into_iter().map(|i| es[i]).collect()
}
