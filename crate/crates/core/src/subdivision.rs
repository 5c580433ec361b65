//! Full and partial subdivisions: convex regions, bystanders, slack,
//! refinement, coarseners and direct coarsenings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flipgraph::{FlipGraph, FlipKind};
use crate::geom::PointSet;
use crate::graph::{Edge, PlaneGraph, Region, Rotation, Violation};
use crate::triangulation::{FlipElement, Kind, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("invalid subdivision: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("orientation is not well-oriented at point {0}")]
    NotWellOriented(usize),
    #[error("instance has {n} points, cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid subdivision JSON: {0}")]
    Json(String),
}

/// A plane graph containing the hull edges whose bounded regions are all
/// convex; isolated inner vertices are bystanders.
#[derive(Clone, Debug)]
pub struct Subdivision {
    g: PlaneGraph,
    regions: Vec<Region>,
}

impl PartialEq for Subdivision {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
    }
}

impl Eq for Subdivision {}

impl PartialOrd for Subdivision {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subdivision {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.g.cmp(&other.g)
    }
}

impl std::hash::Hash for Subdivision {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.g.hash(state)
    }
}

/// One direct coarsening step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    AddPoint(usize),
    RemoveEdge(Edge),
    Isolate(Vec<usize>),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::AddPoint(p) => write!(f, "+p{p}"),
            Step::RemoveEdge(e) => write!(f, "-e{e}"),
            Step::Isolate(u) => {
                let s: Vec<String> = u.iter().map(|p| p.to_string()).collect();
                write!(f, "iso{{{}}}", s.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coarsener {
    pub points: Vec<usize>,
    pub incident_edges: Vec<Edge>,
    /// `|E_U| - 2|U|`.
    pub increment: i64,
    pub is_prime: bool,
    pub is_perfect: bool,
}

#[derive(Serialize, Deserialize)]
struct SubdivisionJson {
    vertices: Vec<usize>,
    edges: Vec<Edge>,
    #[serde(default)]
    bystanders: Vec<usize>,
}

impl Subdivision {
    /// Validating constructor.
    pub fn new(
        base: Arc<PointSet>,
        vertices: BTreeSet<usize>,
        edges: BTreeSet<Edge>,
    ) -> Result<Self, SubdivisionError> {
        let g = PlaneGraph::new(base, vertices, edges);
        let v = g.check_plane();
        if !v.is_empty() {
            return Err(SubdivisionError::Invalid(v));
        }
        let regions = g
            .regions()
            .map_err(|v| SubdivisionError::Invalid(vec![v]))?;
        Ok(Subdivision { g, regions })
    }

    /// For edge subsets of an already non-crossing graph with the hull
    /// present: only connectivity and convexity can fail.
    fn from_edge_subset(
        base: Arc<PointSet>,
        vertices: BTreeSet<usize>,
        edges: BTreeSet<Edge>,
    ) -> Option<Self> {
        let g = PlaneGraph::new(base, vertices, edges);
        let regions = g.regions().ok()?;
        // Convex faces with the hull present force the non-isolated part to be
        // connected, and then the face count pins the Euler characteristic.
        let nv = g.vertices().len() - g.isolated().len();
        if nv + regions.len() != g.edges().len() + 1 {
            return None;
        }
        Some(Subdivision { g, regions })
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        Subdivision::new(t.base().clone(), t.vertices().clone(), t.edges().clone())
            .expect("triangulations are subdivisions")
    }

    /// All points, hull edges only: the unique maximal subdivision.
    pub fn trivial(base: Arc<PointSet>) -> Self {
        let v = (0..base.len()).collect();
        let e = base.hull_edges().into_iter().map(|(a, b)| Edge::new(a, b)).collect();
        Subdivision::new(base, v, e).expect("hull polygon is a subdivision")
    }

    pub fn graph(&self) -> &PlaneGraph {
        &self.g
    }

    pub fn base(&self) -> &Arc<PointSet> {
        self.g.base()
    }

    pub fn ps(&self) -> &PointSet {
        self.g.ps()
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        self.g.vertices()
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        self.g.edges()
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        self.g.canonical_key()
    }

    pub fn bystanders(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.regions.iter().flat_map(|r| r.bystanders.iter().copied()).collect();
        b.sort_unstable();
        b
    }

    /// Inner vertices with at least one incident edge.
    pub fn involved(&self) -> Vec<usize> {
        let by: BTreeSet<usize> = self.bystanders().into_iter().collect();
        self.vertices()
            .iter()
            .copied()
            .filter(|&v| !self.ps().is_extreme(v) && !by.contains(&v))
            .collect()
    }

    pub fn kind(&self) -> Kind {
        if self.vertices().len() == self.ps().len() && self.bystanders().is_empty() {
            Kind::Full
        } else {
            Kind::Partial
        }
    }

    pub fn is_triangulation(&self) -> bool {
        self.slack() == 0
    }

    pub fn to_triangulation(&self) -> Option<Triangulation> {
        if !self.is_triangulation() {
            return None;
        }
        Triangulation::new(self.base().clone(), self.vertices().clone(), self.edges().clone()).ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices().len() == self.ps().len() && self.edges().len() == self.ps().h()
    }

    /// Sum of region slacks.
    pub fn slack(&self) -> usize {
        self.regions.iter().map(Region::slack).sum()
    }

    /// `3|V| - 3 - h - |E| - 2s` with `s` the number of bystanders.
    pub fn slack_closed_form(&self) -> i64 {
        3 * self.vertices().len() as i64
            - 3
            - self.ps().h() as i64
            - self.edges().len() as i64
            - 2 * self.bystanders().len() as i64
    }

    /// Sum over regions of `ceil(slack(r) / 2)`.
    pub fn refined_slack(&self) -> usize {
        self.regions.iter().map(|r| r.slack().div_ceil(2)).sum()
    }

    /// `self ⪯ other`: `other` has more vertices and fewer edges.
    pub fn is_refinement_of(&self, other: &Subdivision) -> bool {
        other.vertices().is_superset(self.vertices()) && other.edges().is_subset(self.edges())
    }

    /// `(V1 ∩ V2, E1 ∪ E2)` if some triangulation refines both.
    pub fn meet(&self, other: &Subdivision) -> Option<Subdivision> {
        let v: BTreeSet<usize> = self.vertices().intersection(other.vertices()).copied().collect();
        let e: BTreeSet<Edge> = self.edges().union(other.edges()).copied().collect();
        Subdivision::new(self.base().clone(), v, e).ok()
    }

    /// `(V1 ∪ V2, E1 ∩ E2)` if that is a subdivision; then it is the finest
    /// common coarsening.
    pub fn join(&self, other: &Subdivision) -> Option<Subdivision> {
        let v: BTreeSet<usize> = self.vertices().union(other.vertices()).copied().collect();
        let e: BTreeSet<Edge> = self.edges().intersection(other.edges()).copied().collect();
        Subdivision::from_edge_subset(self.base().clone(), v, e)
    }

    fn rotation(&self) -> Rotation {
        self.g.rotation()
    }

    pub fn locked_endpoints(&self, e: &Edge) -> Vec<usize> {
        self.g.locked_endpoints(e)
    }

    /// Inner edges locked at neither endpoint.
    pub fn unlocked_edges(&self) -> Vec<Edge> {
        let rot = self.rotation();
        let ps = self.ps();
        self.g
            .inner_edges()
            .filter(|e| !rot.locked_at(ps, e.lo(), e.hi()) && !rot.locked_at(ps, e.hi(), e.lo()))
            .copied()
            .collect()
    }

    /// Edges incident to a point set.
    pub fn incident_edges(&self, u: &[usize]) -> Vec<Edge> {
        self.edges()
            .iter()
            .filter(|e| u.iter().any(|&p| e.has(p)))
            .copied()
            .collect()
    }

    /// Removing every edge incident to `u` leaves a subdivision, and `u` is
    /// a nonempty set of involved inner points.
    pub fn isolate(&self, u: &[usize]) -> Option<Subdivision> {
        if u.iter().any(|&p| self.ps().is_extreme(p) || !self.vertices().contains(&p)) {
            return None;
        }
        let eu = self.incident_edges(u);
        if eu.is_empty() {
            return None;
        }
        let mut edges = self.edges().clone();
        for e in &eu {
            edges.remove(e);
        }
        Subdivision::from_edge_subset(self.base().clone(), self.vertices().clone(), edges)
    }

    pub fn is_coarsener(&self, u: &[usize]) -> bool {
        self.isolate(u).is_some()
    }

    /// All prime coarseners, sorted, pairwise disjoint.
    ///
    /// Candidates are involved points whose incident edges are all locked.
    /// Connected candidate clusters are tried by increasing size; a cluster
    /// meeting an already found prime is never minimal.
    pub fn prime_coarseners(&self) -> Vec<Coarsener> {
        let ps = self.ps();
        let rot = self.rotation();
        let locked = |e: &Edge| rot.locked_at(ps, e.lo(), e.hi()) || rot.locked_at(ps, e.hi(), e.lo());
        let cand: Vec<usize> = self
            .involved()
            .into_iter()
            .filter(|&p| rot.neighbors(p).iter().all(|&q| locked(&Edge::new(p, q))))
            .collect();
        let k = cand.len();
        let adj: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != i && self.edges().contains(&Edge::new(cand[i], cand[j])))
                    .collect()
            })
            .collect();
        let mut clusters = connected_subsets(&adj);
        clusters.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut taken = vec![false; k];
        let mut out = Vec::new();
        for c in clusters {
            if c.iter().any(|&i| taken[i]) {
                continue;
            }
            let u: Vec<usize> = c.iter().map(|&i| cand[i]).collect();
            if self.is_coarsener(&u) {
                for &i in &c {
                    taken[i] = true;
                }
                let eu = self.incident_edges(&u);
                let increment = eu.len() as i64 - 2 * u.len() as i64;
                out.push(Coarsener {
                    points: u,
                    incident_edges: eu,
                    increment,
                    is_prime: true,
                    is_perfect: increment == 1,
                });
            }
        }
        out.sort_by(|a, b| a.points.cmp(&b.points));
        out
    }

    /// All direct coarsenings: add a skipped point, remove an unlocked edge,
    /// or isolate a prime coarsener.
    pub fn direct_coarsenings(&self) -> Vec<(Step, Subdivision)> {
        let mut out = Vec::new();
        for p in self.g.skipped() {
            let mut v = self.vertices().clone();
            v.insert(p);
            let s = Subdivision::from_edge_subset(self.base().clone(), v, self.edges().clone())
                .expect("adding a bystander keeps a subdivision");
            out.push((Step::AddPoint(p), s));
        }
        for e in self.unlocked_edges() {
            let mut edges = self.edges().clone();
            edges.remove(&e);
            let s = Subdivision::from_edge_subset(self.base().clone(), self.vertices().clone(), edges)
                .expect("removing an unlocked edge keeps a subdivision");
            out.push((Step::RemoveEdge(e), s));
        }
        for c in self.prime_coarseners() {
            let s = self.isolate(&c.points).expect("prime coarsener isolates");
            out.push((Step::Isolate(c.points), s));
        }
        out
    }

    /// Direct coarsenings raising slack by exactly one.
    pub fn perfect_coarsenings(&self) -> Vec<(Step, Subdivision)> {
        let d = self.slack();
        self.direct_coarsenings()
            .into_iter()
            .filter(|(_, s)| s.slack() == d + 1)
            .collect()
    }

    /// Every partial triangulation refining this subdivision, assembled
    /// region by region.
    pub fn refinements(&self) -> Vec<Triangulation> {
        let ps = self.ps();
        let by: BTreeSet<usize> = self.bystanders().into_iter().collect();
        let core: BTreeSet<usize> = self.vertices().difference(&by).copied().collect();
        // Per active region: list of (used bystanders, extra edges).
        let mut factors: Vec<Vec<(Vec<usize>, Vec<Edge>)>> = Vec::new();
        for r in self.regions.iter().filter(|r| r.is_active()) {
            let mut local = r.points();
            local.sort_unstable();
            let sub = Arc::new(ps.subset(&local).expect("subset of a general-position set"));
            let kind = if r.bystanders.is_empty() {
                FlipKind::Edge
            } else {
                FlipKind::Bistellar
            };
            let fg = FlipGraph::build(sub, kind, None).expect("uncapped");
            let opts = fg
                .nodes()
                .iter()
                .map(|t| {
                    let used = t
                        .vertices()
                        .iter()
                        .map(|&i| local[i])
                        .filter(|g| by.contains(g))
                        .collect();
                    let extra = t
                        .edges()
                        .iter()
                        .map(|e| Edge::new(local[e.lo()], local[e.hi()]))
                        .filter(|e| !self.edges().contains(e))
                        .collect();
                    (used, extra)
                })
                .collect();
            factors.push(opts);
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; factors.len()];
        loop {
            let mut v = core.clone();
            let mut e = self.edges().clone();
            for (f, &i) in factors.iter().zip(&idx) {
                v.extend(f[i].0.iter().copied());
                e.extend(f[i].1.iter().copied());
            }
            out.push(
                Triangulation::new(self.base().clone(), v, e).expect("region-wise refinement is a triangulation"),
            );
            let mut k = 0;
            loop {
                if k == factors.len() {
                    out.sort_by_key(|t| t.canonical_key());
                    return out;
                }
                idx[k] += 1;
                if idx[k] < factors[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn to_json(&self) -> String {
        let by = self.bystanders();
        serde_json::to_string(&SubdivisionJson {
            vertices: self.vertices().iter().copied().collect(),
            edges: self.edges().iter().copied().collect(),
            bystanders: by,
        })
        .expect("subdivision serializes")
    }

    /// Listed bystanders join the vertex set and must come out isolated.
    pub fn from_json(base: Arc<PointSet>, text: &str) -> Result<Self, SubdivisionError> {
        let sj: SubdivisionJson =
            serde_json::from_str(text).map_err(|e| SubdivisionError::Json(e.to_string()))?;
        let mut v: BTreeSet<usize> = sj.vertices.into_iter().collect();
        v.extend(sj.bystanders.iter().copied());
        let s = Subdivision::new(base, v, sj.edges.into_iter().collect())?;
        let actual = s.bystanders();
        for b in sj.bystanders {
            if !actual.contains(&b) {
                return Err(SubdivisionError::Json(format!("listed bystander {b} has incident edges")));
            }
        }
        Ok(s)
    }
}

/// `pFlip(T, x)`: the slack-1 coarsening of `T` refined by `T` and `T[x]`.
pub fn pflip(t: &Triangulation, x: &FlipElement) -> Option<Subdivision> {
    let tx = t.apply_flip(x).ok()?;
    Subdivision::from_triangulation(t).join(&Subdivision::from_triangulation(&tx))
}

/// Connected vertex subsets of a small graph, each sorted.
fn connected_subsets(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // Each subset is generated once, from its smallest vertex, by extending
    // only with larger neighbors of the current set.
    fn grow(
        adj: &[Vec<usize>],
        root: usize,
        set: &mut Vec<usize>,
        ext: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let mut s = set.clone();
        s.sort_unstable();
        out.push(s);
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &x in &adj[w] {
                if x > root && !set.contains(&x) && !ext.contains(&x) && x != w && !next.contains(&x) {
                    // Exclusive neighborhood: not adjacent to the current set.
                    if !set.iter().any(|&s| adj[s].contains(&x)) {
                        next.push(x);
                    }
                }
            }
            set.push(w);
            grow(adj, root, set, next, out);
            set.pop();
        }
    }
    let mut out = Vec::new();
    for v in 0..adj.len() {
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&w| w > v).collect();
        let mut set = vec![v];
        grow(adj, v, &mut set, ext, &mut out);
    }
    out
}

/// Indegree histogram and slack counters for a partially oriented subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// `|V(S)|`.
    pub n: usize,
    /// `indegree[i]` = number of involved inner points with indegree `i`.
    pub indegree: Vec<usize>,
    pub slack: usize,
    pub refined_slack: usize,
    pub inner_edges: usize,
    pub unoriented: usize,
    /// `None` if well-oriented, else a point where it fails.
    pub not_well_oriented_at: Option<usize>,
}

impl AuditReport {
    fn c(&self, i: usize) -> i64 {
        self.indegree.get(i).copied().unwrap_or(0) as i64
    }

    /// Exact count `N-3-C3-D+C1+2C0`, available when no indegree exceeds 3.
    pub fn exact_unoriented(&self) -> Option<i64> {
        if self.indegree.len() > 4 && self.indegree[4..].iter().any(|&c| c > 0) {
            return None;
        }
        Some(self.n as i64 - 3 - self.c(3) - self.slack as i64 + self.c(1) + 2 * self.c(0))
    }

    /// `N-3-C3-D`, when no indegree exceeds 3.
    pub fn bound_one(&self) -> Option<i64> {
        self.exact_unoriented()?;
        Some(self.n as i64 - 3 - self.c(3) - self.slack as i64)
    }

    /// Twice the bound `N/2 - 2 - (D+D*)/2`.
    pub fn bound_two_doubled(&self) -> Result<i64, SubdivisionError> {
        if let Some(p) = self.not_well_oriented_at {
            return Err(SubdivisionError::NotWellOriented(p));
        }
        Ok(self.n as i64 - 4 - (self.slack + self.refined_slack) as i64)
    }

    /// Checks the exact count and both bounds where they apply.
    pub fn check(&self) -> Result<(), String> {
        let u = self.unoriented as i64;
        if let Some(x) = self.exact_unoriented() {
            if u != x {
                return Err(format!("unoriented {u} != exact count {x}"));
            }
            let b = self.bound_one().expect("exact count available");
            if u < b {
                return Err(format!("unoriented {u} < bound {b}"));
            }
        }
        if let Ok(b2) = self.bound_two_doubled() {
            if 2 * u < b2 {
                return Err(format!("2*unoriented {} < doubled bound {b2}", 2 * u));
            }
        }
        Ok(())
    }
}

/// Counts indegrees, slack and unoriented inner edges. `orientation` maps an
/// edge to its head; edges absent from the map are unoriented.
pub fn unoriented_edges_audit(
    s: &Subdivision,
    orientation: &BTreeMap<Edge, usize>,
) -> Result<AuditReport, SubdivisionError> {
    let ps = s.ps();
    for (e, &head) in orientation {
        if !s.edges().contains(e) || !e.has(head) {
            return Err(SubdivisionError::Json(format!("orientation of {e} towards {head} is not an edge end")));
        }
    }
    let mut indeg = vec![0usize; ps.len()];
    for &head in orientation.values() {
        indeg[head] += 1;
    }
    let involved = s.involved();
    let maxd = involved.iter().map(|&p| indeg[p]).max().unwrap_or(0);
    let mut hist = vec![0usize; maxd.max(3) + 1];
    for &p in &involved {
        hist[indeg[p]] += 1;
    }
    let rot = s.rotation();
    let mut bad = None;
    'outer: for (p, &d) in indeg.iter().enumerate() {
        if d == 0 {
            continue;
        }
        if ps.is_extreme(p) {
            bad = Some(p);
            break;
        }
        let heads: Vec<usize> = rot
            .neighbors(p)
            .iter()
            .copied()
            .filter(|&q| orientation.get(&Edge::new(p, q)) == Some(&p))
            .collect();
        for i in 0..heads.len() {
            for j in i + 1..heads.len() {
                let (a, b) = (heads[i], heads[j]);
                if rot.ccw_after(p, a) != b && rot.ccw_after(p, b) != a {
                    bad = Some(p);
                    break 'outer;
                }
            }
        }
    }
    let inner_edges = s.graph().inner_edges().count();
    let oriented_inner = orientation.keys().filter(|e| !s.graph().is_hull_edge(e)).count();
    Ok(AuditReport {
        n: s.vertices().len(),
        indegree: hist,
        slack: s.slack(),
        refined_slack: s.refined_slack(),
        inner_edges,
        unoriented: inner_edges - oriented_inner,
        not_well_oriented_at: bad,
    })
}

/// Orients every locked inner edge towards its smallest locking endpoint.
pub fn locked_orientation(s: &Subdivision) -> BTreeMap<Edge, usize> {
    let rot = s.rotation();
    let ps = s.ps();
    let mut out = BTreeMap::new();
    for e in s.graph().inner_edges() {
        if rot.locked_at(ps, e.lo(), e.hi()) {
            out.insert(*e, e.lo());
        } else if rot.locked_at(ps, e.hi(), e.lo()) {
            out.insert(*e, e.hi());
        }
    }
    out
}
