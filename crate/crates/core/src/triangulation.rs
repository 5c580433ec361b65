//! Full and partial triangulations and their bistellar flips.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{in_triangle, PointSet};
use crate::graph::{locked_endpoints_with, Edge, PlaneGraph, Rotation, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Full,
    Partial,
}

/// A flip candidate: an inner edge, or an inner point (degree-3 vertex to
/// remove, or skipped point to insert).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipElement {
    Edge(Edge),
    Point(usize),
}

impl fmt::Display for FlipElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlipElement::Edge(e) => write!(f, "e{e}"),
            FlipElement::Point(p) => write!(f, "p{p}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("{0} is not flippable")]
    NotFlippable(FlipElement),
    #[error("invalid triangulation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("invalid triangulation JSON: {0}")]
    Json(String),
}

/// A maximal plane graph on a vertex subset containing the hull.
#[derive(Clone, Debug)]
pub struct Triangulation {
    g: PlaneGraph,
    rot: Rotation,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
    }
}

impl Eq for Triangulation {}

impl std::hash::Hash for Triangulation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.g.hash(state)
    }
}

#[derive(Serialize, Deserialize)]
struct TriangulationJson {
    vertices: Vec<usize>,
    edges: Vec<Edge>,
}

impl Triangulation {
    fn from_parts(base: Arc<PointSet>, vertices: BTreeSet<usize>, edges: BTreeSet<Edge>) -> Self {
        let g = PlaneGraph::new(base, vertices, edges);
        let rot = g.rotation();
        let t = Triangulation { g, rot };
        debug_assert!(t.validate().is_ok(), "{:?}", t.validate());
        t
    }

    /// Validating constructor.
    pub fn new(
        base: Arc<PointSet>,
        vertices: BTreeSet<usize>,
        edges: BTreeSet<Edge>,
    ) -> Result<Self, TriangulationError> {
        let g = PlaneGraph::new(base, vertices, edges);
        let rot = g.rotation();
        let t = Triangulation { g, rot };
        t.validate().map_err(TriangulationError::Invalid)?;
        Ok(t)
    }

    /// Hull fan from the first hull point, then each further vertex in index
    /// order joined to the corners of its containing triangle.
    pub fn seed(base: Arc<PointSet>, vertices: &BTreeSet<usize>) -> Self {
        let ps = &*base;
        let hull = ps.hull();
        for h in hull {
            assert!(vertices.contains(h), "vertex set must contain the hull");
        }
        let mut tris: Vec<[usize; 3]> = (1..hull.len() - 1)
            .map(|k| [hull[0], hull[k], hull[k + 1]])
            .collect();
        for &v in vertices.iter().filter(|&&v| !ps.is_extreme(v)) {
            let pos = tris
                .iter()
                .position(|t| in_triangle(ps.point(v), ps.point(t[0]), ps.point(t[1]), ps.point(t[2])))
                .expect("inner point lies in some triangle");
            let [a, b, c] = tris.swap_remove(pos);
            tris.extend([[a, b, v], [b, c, v], [c, a, v]]);
        }
        let mut edges = BTreeSet::new();
        for t in &tris {
            for i in 0..3 {
                edges.insert(Edge::new(t[i], t[(i + 1) % 3]));
            }
        }
        Self::from_parts(base, vertices.clone(), edges)
    }

    /// Seed triangulation on all points.
    pub fn seed_full(base: Arc<PointSet>) -> Self {
        let all = (0..base.len()).collect();
        Self::seed(base, &all)
    }

    /// The triangulation of the hull points alone (all inner points skipped).
    pub fn hull_only(base: Arc<PointSet>) -> Self {
        let v = base.hull().iter().copied().collect();
        Self::seed(base, &v)
    }

    pub fn graph(&self) -> &PlaneGraph {
        &self.g
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rot
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

    pub fn kind(&self) -> Kind {
        if self.vertices().len() == self.ps().len() {
            Kind::Full
        } else {
            Kind::Partial
        }
    }

    pub fn skipped(&self) -> Vec<usize> {
        self.g.skipped()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot.degree(v)
    }

    pub fn canonical_key(&self) -> Vec<u8> {
        self.g.canonical_key()
    }

    /// Triangles, each counter-clockwise starting at its smallest index,
    /// in sorted order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for e in self.edges() {
            for (u, v) in [(e.lo(), e.hi()), (e.hi(), e.lo())] {
                let w = self.rot.ccw_before(v, u);
                if u < v
                    && u < w
                    && self.rot.ccw_before(w, v) == u
                    && self.ps().orient(u, v, w) > 0
                {
                    out.push([u, v, w]);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Apexes of the triangles to the left and to the right of `lo -> hi`.
    pub fn apexes(&self, e: &Edge) -> (usize, usize) {
        let (u, v) = (e.lo(), e.hi());
        (self.rot.ccw_before(v, u), self.rot.ccw_before(u, v))
    }

    /// The territory quadrilateral of an inner edge, counter-clockwise:
    /// `lo`, right apex, `hi`, left apex.
    pub fn territory(&self, e: &Edge) -> [usize; 4] {
        let (l, r) = self.apexes(e);
        [e.lo(), r, e.hi(), l]
    }

    pub fn is_flippable_edge(&self, e: &Edge) -> bool {
        if !self.edges().contains(e) || self.g.is_hull_edge(e) {
            return false;
        }
        let (l, r) = self.apexes(e);
        let ps = self.ps();
        ps.orient(l, r, e.lo()) * ps.orient(l, r, e.hi()) < 0
    }

    /// Inner edges whose territory is a convex quadrilateral.
    pub fn flippable_edges(&self) -> Vec<Edge> {
        self.g
            .inner_edges()
            .filter(|e| self.is_flippable_edge(e))
            .copied()
            .collect()
    }

    /// Flippable edges, then degree-3 inner vertices, then skipped points.
    pub fn flippable_elements(&self) -> Vec<FlipElement> {
        let mut out: Vec<FlipElement> = self
            .flippable_edges()
            .into_iter()
            .map(FlipElement::Edge)
            .collect();
        for &p in self.ps().inner() {
            if !self.vertices().contains(&p) || self.degree(p) == 3 {
                out.push(FlipElement::Point(p));
            }
        }
        out
    }

    pub fn is_flippable(&self, x: &FlipElement) -> bool {
        match x {
            FlipElement::Edge(e) => self.is_flippable_edge(e),
            FlipElement::Point(p) => {
                *p < self.ps().len()
                    && !self.ps().is_extreme(*p)
                    && (!self.vertices().contains(p) || self.degree(*p) == 3)
            }
        }
    }

    /// `T[e]`: the other diagonal of the territory replaces `e`.
    pub fn edge_flip(&self, e: &Edge) -> Result<Triangulation, TriangulationError> {
        if !self.is_flippable_edge(e) {
            return Err(TriangulationError::NotFlippable(FlipElement::Edge(*e)));
        }
        let (l, r) = self.apexes(e);
        let mut edges = self.edges().clone();
        edges.remove(e);
        edges.insert(Edge::new(l, r));
        Ok(Self::from_parts(self.base().clone(), self.vertices().clone(), edges))
    }

    /// The triangle strictly containing a skipped point.
    pub fn containing_triangle(&self, p: usize) -> Option<[usize; 3]> {
        let ps = self.ps();
        self.triangles()
            .into_iter()
            .find(|t| in_triangle(ps.point(p), ps.point(t[0]), ps.point(t[1]), ps.point(t[2])))
    }

    /// `T[x]` for an edge flip, point insertion or point removal.
    pub fn apply_flip(&self, x: &FlipElement) -> Result<Triangulation, TriangulationError> {
        if !self.is_flippable(x) {
            return Err(TriangulationError::NotFlippable(*x));
        }
        match x {
            FlipElement::Edge(e) => self.edge_flip(e),
            FlipElement::Point(p) => {
                let p = *p;
                let mut vertices = self.vertices().clone();
                let mut edges = self.edges().clone();
                if vertices.contains(&p) {
                    vertices.remove(&p);
                    edges.retain(|e| !e.has(p));
                } else {
                    let t = self
                        .containing_triangle(p)
                        .expect("skipped inner point lies in a triangle");
                    vertices.insert(p);
                    for c in t {
                        edges.insert(Edge::new(p, c));
                    }
                }
                Ok(Self::from_parts(self.base().clone(), vertices, edges))
            }
        }
    }

    /// The element that undoes `x`, i.e. `T[x][inverse] = T`.
    pub fn inverse_flip(&self, x: &FlipElement) -> Option<FlipElement> {
        match x {
            FlipElement::Edge(e) if self.is_flippable_edge(e) => {
                let (l, r) = self.apexes(e);
                Some(FlipElement::Edge(Edge::new(l, r)))
            }
            FlipElement::Point(p) if self.is_flippable(x) => Some(FlipElement::Point(*p)),
            _ => None,
        }
    }

    pub fn locked_endpoints(&self, e: &Edge) -> Vec<usize> {
        locked_endpoints_with(self.ps(), &self.rot, e)
    }

    /// Structural validation: non-crossing, hull present, every region a
    /// triangle, edge count `3N-3-h`, region count `2N-2-h`.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = self.g.check_plane();
        if !out.is_empty() {
            return Err(out);
        }
        let ps = self.ps();
        let nv = self.vertices().len();
        let h = ps.h();
        for v in self.g.isolated() {
            out.push(Violation::IsolatedVertex(v));
        }
        let (bounded, _) = self.rot.faces(ps);
        for f in &bounded {
            if f.len() != 3 {
                out.push(Violation::NonTriangularRegion(f.clone()));
            }
        }
        let expected = 3 * nv - 3 - h;
        if self.edges().len() != expected {
            out.push(Violation::EdgeCount {
                expected,
                found: self.edges().len(),
            });
        }
        let expected = 2 * nv - 2 - h;
        if bounded.len() != expected {
            out.push(Violation::RegionCount {
                expected,
                found: bounded.len(),
            });
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TriangulationJson {
            vertices: self.vertices().iter().copied().collect(),
            edges: self.edges().iter().copied().collect(),
        })
        .expect("triangulation serializes")
    }

    pub fn from_json(base: Arc<PointSet>, text: &str) -> Result<Self, TriangulationError> {
        let tj: TriangulationJson =
            serde_json::from_str(text).map_err(|e| TriangulationError::Json(e.to_string()))?;
        Self::new(
            base,
            tj.vertices.into_iter().collect(),
            tj.edges.into_iter().collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;

    fn base(pts: &[(i64, i64)]) -> Arc<PointSet> {
        Arc::new(PointSet::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap())
    }

    fn tri_plus_center() -> Arc<PointSet> {
        base(&[(0, 0), (9, 0), (0, 9), (3, 3)])
    }

    #[test]
    fn seed_counts() {
        let quad = base(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
        let t = Triangulation::seed_full(quad);
        assert_eq!(t.edges().len(), 5);
        assert_eq!(t.triangles().len(), 2);
        let t = Triangulation::seed_full(tri_plus_center());
        assert_eq!(t.edges().len(), 6);
        assert_eq!(t.triangles().len(), 3);
        assert_eq!(t.kind(), Kind::Full);
    }

    #[test]
    fn quad_diagonal_is_flippable_and_flips_back() {
        let t = Triangulation::seed_full(base(&[(0, 0), (4, 0), (4, 4), (0, 4)]));
        let f = t.flippable_edges();
        assert_eq!(f.len(), 1);
        let t2 = t.edge_flip(&f[0]).unwrap();
        assert_ne!(t.canonical_key(), t2.canonical_key());
        assert_eq!(t.edges().symmetric_difference(t2.edges()).count(), 2);
        let back = t2.edge_flip(&t2.flippable_edges()[0]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn center_spokes_do_not_flip_but_center_removes() {
        let t = Triangulation::seed_full(tri_plus_center());
        assert!(t.flippable_edges().is_empty());
        assert_eq!(t.flippable_elements(), vec![FlipElement::Point(3)]);
        let r = t.apply_flip(&FlipElement::Point(3)).unwrap();
        assert_eq!(r.vertices().len(), 3);
        assert_eq!(r.edges().len(), 3);
        assert_eq!(r.kind(), Kind::Partial);
        assert_eq!(r.flippable_elements(), vec![FlipElement::Point(3)]);
        assert_eq!(r.apply_flip(&FlipElement::Point(3)).unwrap(), t);
        for q in 0..3 {
            assert_eq!(t.locked_endpoints(&Edge::new(3, q)), vec![3]);
        }
    }

    #[test]
    fn not_flippable_reports_element() {
        let t = Triangulation::seed_full(tri_plus_center());
        let e = Edge::new(0, 3);
        assert_eq!(
            t.edge_flip(&e),
            Err(TriangulationError::NotFlippable(FlipElement::Edge(e)))
        );
        assert!(t.apply_flip(&FlipElement::Point(0)).is_err());
    }

    #[test]
    fn validate_reports_deleted_edge() {
        let t = Triangulation::seed_full(tri_plus_center());
        let mut edges = t.edges().clone();
        edges.remove(&Edge::new(0, 3));
        let bad = Triangulation::new(t.base().clone(), t.vertices().clone(), edges);
        let Err(TriangulationError::Invalid(v)) = bad else {
            panic!("expected violations")
        };
        assert!(v.iter().any(|x| matches!(x, Violation::NonTriangularRegion(_))));
        assert!(v.iter().any(|x| matches!(x, Violation::EdgeCount { .. })));
    }

    #[test]
    fn json_round_trip_keeps_key() {
        let t = Triangulation::seed_full(base(&[(0, 0), (8, 0), (9, 7), (1, 9), (4, 3)]));
        let back = Triangulation::from_json(t.base().clone(), &t.to_json()).unwrap();
        assert_eq!(back.canonical_key(), t.canonical_key());
    }

    #[test]
    fn seed_is_deterministic() {
        let ps = base(&[(0, 0), (8, 0), (9, 7), (1, 9), (4, 3), (5, 5)]);
        let a = Triangulation::seed_full(ps.clone());
        let b = Triangulation::seed_full(ps);
        assert_eq!(a.canonical_key(), b.canonical_key());
    }
}
