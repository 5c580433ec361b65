//! Straight-line plane graphs on a point set: rotation systems, face
//! traversal, locking, and the structural checks shared by triangulations
//! and subdivisions.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geom::{angle_cmp, cross, in_convex_polygon, segments_cross, Point, PointSet};

/// An undirected edge, endpoints stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Edge(usize, usize);

impl Edge {
    /// # Panics
    /// If `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "edge endpoints must differ");
        Edge(a.min(b), a.max(b))
    }

    pub fn lo(&self) -> usize {
        self.0
    }

    pub fn hi(&self) -> usize {
        self.1
    }

    pub fn has(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = String;
    fn try_from(a: [usize; 2]) -> Result<Self, String> {
        if a[0] == a[1] {
            Err(format!("degenerate edge [{}, {}]", a[0], a[1]))
        } else {
            Ok(Edge::new(a[0], a[1]))
        }
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Structural defects reported by validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    VertexOutOfRange(usize),
    EdgeEndpointNotVertex(Edge),
    MissingHullVertex(usize),
    MissingHullEdge(Edge),
    Crossing(Edge, Edge),
    Disconnected,
    /// A bounded face with a reflex or straight corner at `vertex`.
    ReflexRegion { boundary: Vec<usize>, vertex: usize },
    NonTriangularRegion(Vec<usize>),
    IsolatedVertex(usize),
    EdgeCount { expected: usize, found: usize },
    RegionCount { expected: usize, found: usize },
    BystanderInFull(usize),
    MissingVertex(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange(i) => write!(f, "vertex {i} out of range"),
            Violation::EdgeEndpointNotVertex(e) => write!(f, "edge {e} has an endpoint outside the vertex set"),
            Violation::MissingHullVertex(i) => write!(f, "hull point {i} missing"),
            Violation::MissingHullEdge(e) => write!(f, "hull edge {e} missing"),
            Violation::Crossing(a, b) => write!(f, "edges {a} and {b} cross"),
            Violation::Disconnected => write!(f, "graph is not connected"),
            Violation::ReflexRegion { boundary, vertex } => {
                write!(f, "region {boundary:?} is not convex at {vertex}")
            }
            Violation::NonTriangularRegion(b) => write!(f, "region {b:?} is not a triangle"),
            Violation::IsolatedVertex(i) => write!(f, "vertex {i} is isolated"),
            Violation::EdgeCount { expected, found } => {
                write!(f, "edge count {found}, expected {expected}")
            }
            Violation::RegionCount { expected, found } => {
                write!(f, "region count {found}, expected {expected}")
            }
            Violation::BystanderInFull(i) => write!(f, "bystander {i} in a full subdivision"),
            Violation::MissingVertex(i) => write!(f, "point {i} missing from a full subdivision"),
        }
    }
}

/// Neighbors of every point sorted counter-clockwise by exact angle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    nbrs: Vec<Vec<usize>>,
}

impl Rotation {
    pub fn new<'a>(ps: &PointSet, edges: impl IntoIterator<Item = &'a Edge>) -> Self {
        let mut nbrs = vec![Vec::new(); ps.len()];
        for e in edges {
            nbrs[e.0].push(e.1);
            nbrs[e.1].push(e.0);
        }
        for (v, list) in nbrs.iter_mut().enumerate() {
            let c = ps.point(v);
            list.sort_by(|&a, &b| angle_cmp(c, ps.point(a), ps.point(b)));
        }
        Rotation { nbrs }
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    fn pos(&self, v: usize, u: usize) -> usize {
        self.nbrs[v]
            .iter()
            .position(|&w| w == u)
            .unwrap_or_else(|| panic!("{u} is not a neighbor of {v}"))
    }

    /// Neighbor of `v` following `u` counter-clockwise.
    pub fn ccw_after(&self, v: usize, u: usize) -> usize {
        let l = &self.nbrs[v];
        l[(self.pos(v, u) + 1) % l.len()]
    }

    /// Neighbor of `v` preceding `u` counter-clockwise.
    pub fn ccw_before(&self, v: usize, u: usize) -> usize {
        let l = &self.nbrs[v];
        l[(self.pos(v, u) + l.len() - 1) % l.len()]
    }

    /// Walks every face; each directed edge lies on exactly one face, which
    /// is to its left. Bounded faces come out counter-clockwise with positive
    /// area; the outer face has negative area.
    pub fn faces(&self, ps: &PointSet) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = self.nbrs.len();
        let mut seen: Vec<Vec<bool>> = self.nbrs.iter().map(|l| vec![false; l.len()]).collect();
        let mut bounded = Vec::new();
        let mut outer = Vec::new();
        for u0 in 0..n {
            for k0 in 0..self.nbrs[u0].len() {
                if seen[u0][k0] {
                    continue;
                }
                let mut cycle = Vec::new();
                let (mut u, mut k) = (u0, k0);
                while !seen[u][k] {
                    seen[u][k] = true;
                    cycle.push(u);
                    let v = self.nbrs[u][k];
                    let w = self.ccw_before(v, u);
                    k = self.pos(v, w);
                    u = v;
                }
                if signed_area2(ps, &cycle) > 0 {
                    bounded.push(cycle);
                } else {
                    outer.push(cycle);
                }
            }
        }
        (bounded, outer)
    }

    /// True iff removing `{p, q}` leaves an angle of at least `pi` at `p`.
    pub fn locked_at(&self, ps: &PointSet, p: usize, q: usize) -> bool {
        if self.degree(p) <= 2 {
            return true;
        }
        let a = self.ccw_before(p, q);
        let b = self.ccw_after(p, q);
        cross(ps.point(p), ps.point(a), ps.point(b)) <= 0
    }
}

/// Twice the signed area enclosed by a closed vertex walk.
pub fn signed_area2(ps: &PointSet, cycle: &[usize]) -> i128 {
    let o = ps.point(cycle[0]);
    (1..cycle.len().saturating_sub(1))
        .map(|i| cross(o, ps.point(cycle[i]), ps.point(cycle[i + 1])))
        .sum()
}

/// A bounded face with the isolated vertices lying inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    /// Counter-clockwise boundary cycle.
    pub boundary: Vec<usize>,
    pub bystanders: Vec<usize>,
}

impl Region {
    /// `|boundary| + |bystanders| - 3`.
    pub fn slack(&self) -> usize {
        self.boundary.len() + self.bystanders.len() - 3
    }

    pub fn is_active(&self) -> bool {
        self.slack() > 0
    }

    /// All points of the region: boundary followed by bystanders.
    pub fn points(&self) -> Vec<usize> {
        let mut v = self.boundary.clone();
        v.extend(&self.bystanders);
        v
    }
}

/// A vertex subset of a point set together with non-crossing edges on it.
/// Equality and ordering ignore the base point set.
#[derive(Clone, Debug)]
pub struct PlaneGraph {
    base: Arc<PointSet>,
    vertices: BTreeSet<usize>,
    edges: BTreeSet<Edge>,
}

impl PartialEq for PlaneGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for PlaneGraph {}

impl PartialOrd for PlaneGraph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PlaneGraph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.vertices, &self.edges).cmp(&(&other.vertices, &other.edges))
    }
}

impl std::hash::Hash for PlaneGraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
        self.edges.hash(state);
    }
}

impl PlaneGraph {
    pub fn new(base: Arc<PointSet>, vertices: BTreeSet<usize>, edges: BTreeSet<Edge>) -> Self {
        PlaneGraph {
            base,
            vertices,
            edges,
        }
    }

    pub fn base(&self) -> &Arc<PointSet> {
        &self.base
    }

    pub fn ps(&self) -> &PointSet {
        &self.base
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn into_parts(self) -> (Arc<PointSet>, BTreeSet<usize>, BTreeSet<Edge>) {
        (self.base, self.vertices, self.edges)
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn is_hull_edge(&self, e: &Edge) -> bool {
        self.base.is_hull_edge(e.0, e.1)
    }

    pub fn inner_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| !self.is_hull_edge(e))
    }

    pub fn rotation(&self) -> Rotation {
        Rotation::new(&self.base, &self.edges)
    }

    /// Points of the base set not in the vertex set.
    pub fn skipped(&self) -> Vec<usize> {
        (0..self.base.len())
            .filter(|v| !self.vertices.contains(v))
            .collect()
    }

    /// Endpoints of `e` at which `e` is locked in this graph.
    pub fn locked_endpoints(&self, e: &Edge) -> Vec<usize> {
        let rot = self.rotation();
        locked_endpoints_with(&self.base, &rot, e)
    }

    /// Vertex bitmask (little-endian bit order, `ceil(n/8)` bytes) followed by
    /// the sorted edge list as big-endian `u16` pairs.
    pub fn canonical_key(&self) -> Vec<u8> {
        let n = self.base.len();
        let mut key = vec![0u8; n.div_ceil(8)];
        for &v in &self.vertices {
            key[v / 8] |= 1 << (v % 8);
        }
        key.reserve(4 * self.edges.len());
        for e in &self.edges {
            key.extend_from_slice(&(e.0 as u16).to_be_bytes());
            key.extend_from_slice(&(e.1 as u16).to_be_bytes());
        }
        key
    }

    /// Checks indices, hull vertices and edges, non-crossing and
    /// connectivity of the non-isolated part. Returns the first batch of
    /// violations found; geometry checks are skipped if indices are bad.
    pub fn check_plane(&self) -> Vec<Violation> {
        let ps = &*self.base;
        let n = ps.len();
        let mut out = Vec::new();
        for &v in &self.vertices {
            if v >= n {
                out.push(Violation::VertexOutOfRange(v));
            }
        }
        for e in &self.edges {
            if e.1 >= n {
                out.push(Violation::VertexOutOfRange(e.1));
            } else if !self.vertices.contains(&e.0) || !self.vertices.contains(&e.1) {
                out.push(Violation::EdgeEndpointNotVertex(*e));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for &h in ps.hull() {
            if !self.vertices.contains(&h) {
                out.push(Violation::MissingHullVertex(h));
            }
        }
        for (a, b) in ps.hull_edges() {
            let e = Edge::new(a, b);
            if !self.edges.contains(&e) {
                out.push(Violation::MissingHullEdge(e));
            }
        }
        let es: Vec<Edge> = self.edges.iter().copied().collect();
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                let (e, f) = (es[i], es[j]);
                if segments_cross(ps.point(e.0), ps.point(e.1), ps.point(f.0), ps.point(f.1)) {
                    out.push(Violation::Crossing(e, f));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        if !self.is_connected_ignoring_isolated() {
            out.push(Violation::Disconnected);
        }
        out
    }

    fn is_connected_ignoring_isolated(&self) -> bool {
        let n = self.base.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        let Some(start) = self.edges.iter().next().map(|e| e.0) else {
            return true;
        };
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        self.edges.iter().all(|e| seen[e.0])
    }

    /// Bounded regions with convexity check and bystander assignment.
    /// Assumes `check_plane` passed.
    pub fn regions(&self) -> Result<Vec<Region>, Violation> {
        let ps = &*self.base;
        let rot = self.rotation();
        let (bounded, _) = rot.faces(ps);
        let mut regions = Vec::with_capacity(bounded.len());
        for boundary in bounded {
            let k = boundary.len();
            for i in 0..k {
                let (a, b, c) = (boundary[i], boundary[(i + 1) % k], boundary[(i + 2) % k]);
                if ps.orient(a, b, c) <= 0 {
                    return Err(Violation::ReflexRegion {
                        boundary,
                        vertex: b,
                    });
                }
            }
            regions.push(Region {
                boundary,
                bystanders: Vec::new(),
            });
        }
        for &v in &self.vertices {
            if rot.degree(v) > 0 {
                continue;
            }
            let p = ps.point(v);
            let home = regions.iter_mut().find(|r| {
                let poly: Vec<Point> = r.boundary.iter().map(|&i| ps.point(i)).collect();
                in_convex_polygon(p, &poly)
            });
            match home {
                Some(r) => r.bystanders.push(v),
                None => return Err(Violation::IsolatedVertex(v)),
            }
        }
        Ok(regions)
    }

    /// Isolated members of the vertex set.
    pub fn isolated(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.base.len()];
        for e in &self.edges {
            deg[e.0] += 1;
            deg[e.1] += 1;
        }
        self.vertices
            .iter()
            .copied()
            .filter(|&v| deg[v] == 0)
            .collect()
    }
}

/// Endpoints of `e` at which it is locked, given a prebuilt rotation system.
pub fn locked_endpoints_with(ps: &PointSet, rot: &Rotation, e: &Edge) -> Vec<usize> {
    let mut out = Vec::with_capacity(2);
    if rot.locked_at(ps, e.0, e.1) {
        out.push(e.0);
    }
    if rot.locked_at(ps, e.1, e.0) {
        out.push(e.1);
    }
    out
}
