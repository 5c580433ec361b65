//! Edge and bistellar flip graphs, enumerated by breadth-first search from a
//! seed triangulation.

mod connectivity;
mod link;
mod refine;

pub use connectivity::{local_connectivity, vertex_connectivity, ConnectivityError};
pub use link::{
    compatibility_classify, link_of, max_simultaneously_flippable, Compatibility, Link, LinkEdge,
};
pub use refine::{refinement_subgraph, RefinementSubgraph};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::PointSet;
use crate::triangulation::{FlipElement, Triangulation};

/// Default point-count caps, sized for runs of a few minutes.
pub const DEFAULT_EDGE_CAP: usize = 10;
pub const DEFAULT_BISTELLAR_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipKind {
    /// Full triangulations, edge flips only.
    Edge,
    /// Partial triangulations, all bistellar flips.
    Bistellar,
}

impl fmt::Display for FlipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlipKind::Edge => write!(f, "edge"),
            FlipKind::Bistellar => write!(f, "bistellar"),
        }
    }
}

impl FlipKind {
    pub fn default_cap(&self) -> usize {
        match self {
            FlipKind::Edge => DEFAULT_EDGE_CAP,
            FlipKind::Bistellar => DEFAULT_BISTELLAR_CAP,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlipGraphError {
    #[error("instance has {n} points, cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// Triangulations of one point set as nodes, sorted by canonical key, with
/// flip-labelled symmetric adjacency.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    kind: FlipKind,
    base: Arc<PointSet>,
    nodes: Vec<Triangulation>,
    keys: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    adj: Vec<Vec<(usize, FlipElement)>>,
}

impl FlipGraph {
    /// Closure of the seed triangulation under the flips of `kind`.
    pub fn build(
        base: Arc<PointSet>,
        kind: FlipKind,
        cap: Option<usize>,
    ) -> Result<FlipGraph, FlipGraphError> {
        if let Some(cap) = cap {
            if base.len() > cap {
                return Err(FlipGraphError::CapExceeded { n: base.len(), cap });
            }
        }
        let seed = Triangulation::seed_full(base.clone());
        let mut nodes = vec![seed.clone()];
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        index.insert(seed.canonical_key(), 0);
        let mut raw_adj: Vec<Vec<(usize, FlipElement)>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let t = nodes[i].clone();
            let moves: Vec<FlipElement> = match kind {
                FlipKind::Edge => t.flippable_edges().into_iter().map(FlipElement::Edge).collect(),
                FlipKind::Bistellar => t.flippable_elements(),
            };
            for x in moves {
                let u = t.apply_flip(&x).expect("listed element is flippable");
                let key = u.canonical_key();
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = nodes.len();
                        index.insert(key, j);
                        nodes.push(u);
                        raw_adj.push(Vec::new());
                        queue.push_back(j);
                        j
                    }
                };
                raw_adj[i].push((j, x));
            }
        }
        // Renumber by sorted canonical key.
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        let old_keys: Vec<Vec<u8>> = nodes.iter().map(|t| t.canonical_key()).collect();
        order.sort_by(|&a, &b| old_keys[a].cmp(&old_keys[b]));
        let mut new_of = vec![0usize; nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let mut slots: Vec<Option<Triangulation>> = nodes.into_iter().map(Some).collect();
        let nodes: Vec<Triangulation> = order.iter().map(|&o| slots[o].take().expect("each once")).collect();
        let keys: Vec<Vec<u8>> = order.iter().map(|&o| old_keys[o].clone()).collect();
        let mut adj = vec![Vec::new(); nodes.len()];
        for (old, list) in raw_adj.into_iter().enumerate() {
            let mut l: Vec<(usize, FlipElement)> = list.into_iter().map(|(j, x)| (new_of[j], x)).collect();
            l.sort();
            adj[new_of[old]] = l;
        }
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Ok(FlipGraph {
            kind,
            base,
            nodes,
            keys,
            index,
            adj,
        })
    }

    pub fn kind(&self) -> FlipKind {
        self.kind
    }

    pub fn base(&self) -> &Arc<PointSet> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Triangulation] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Triangulation {
        &self.nodes[i]
    }

    pub fn key(&self, i: usize) -> &[u8] {
        &self.keys[i]
    }

    pub fn index_of(&self, t: &Triangulation) -> Option<usize> {
        self.index.get(&t.canonical_key()).copied()
    }

    pub fn index_of_key(&self, key: &[u8]) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Neighbors with the flip leading to each, sorted.
    pub fn neighbors(&self, i: usize) -> &[(usize, FlipElement)] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].iter().any(|&(k, _)| k == j)
    }

    /// Plain adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.adj
            .iter()
            .map(|l| l.iter().map(|&(j, _)| j).collect())
            .collect()
    }

    /// Undirected edges `(i, j, flip at i)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, FlipElement)> {
        let mut out = Vec::new();
        for (i, l) in self.adj.iter().enumerate() {
            for &(j, x) in l {
                if i < j {
                    out.push((i, j, x));
                }
            }
        }
        out
    }

    /// Symmetric, loop-free, no parallel edges, and every flip undone by its
    /// inverse.
    pub fn check_symmetric(&self) -> Result<(), String> {
        for (i, l) in self.adj.iter().enumerate() {
            for (k, &(j, x)) in l.iter().enumerate() {
                if i == j {
                    return Err(format!("loop at {i}"));
                }
                if l[..k].iter().any(|&(m, _)| m == j) {
                    return Err(format!("parallel edges {i}-{j}"));
                }
                let inv = self.nodes[i]
                    .inverse_flip(&x)
                    .ok_or_else(|| format!("no inverse of {x} at {i}"))?;
                if !self.adj[j].contains(&(i, inv)) {
                    return Err(format!("{i} -> {j} by {x} is not undone by {inv}"));
                }
            }
        }
        Ok(())
    }

    /// True iff no three nodes are pairwise adjacent.
    pub fn is_triangle_free(&self) -> bool {
        let adj = self.adjacency();
        for i in 0..adj.len() {
            for &j in adj[i].iter().filter(|&&j| j > i) {
                if adj[j].iter().any(|&k| k > j && adj[i].contains(&k)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_connectivity(&self) -> Result<usize, ConnectivityError> {
        vertex_connectivity(&self.adjacency())
    }
}

/// Short hexadecimal digest of a canonical key, used as a node label.
pub fn key_digest(key: &[u8]) -> String {
    // FNV-1a, 64 bit.
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in key {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::convex_gon;

    #[test]
    fn convex_pentagon_is_a_five_cycle() {
        let g = FlipGraph::build(Arc::new(convex_gon(5)), FlipKind::Edge, None).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.edge_count(), 5);
        assert!((0..5).all(|i| g.degree(i) == 2));
        assert!(g.is_connected());
        assert!(g.check_symmetric().is_ok());
    }

    #[test]
    fn convex_bistellar_equals_edge_graph() {
        let ps = Arc::new(convex_gon(6));
        let a = FlipGraph::build(ps.clone(), FlipKind::Edge, None).unwrap();
        let b = FlipGraph::build(ps, FlipKind::Bistellar, None).unwrap();
        assert_eq!(a.len(), 14);
        assert_eq!(a.keys, b.keys);
        assert_eq!(a.adjacency(), b.adjacency());
    }

    #[test]
    fn cap_is_enforced() {
        let r = FlipGraph::build(Arc::new(convex_gon(9)), FlipKind::Bistellar, Some(8));
        assert_eq!(r.unwrap_err(), FlipGraphError::CapExceeded { n: 9, cap: 8 });
    }

    #[test]
    fn triangle_with_center_bistellar() {
        let ps = PointSet::new(vec![
            crate::Point::new(0, 0),
            crate::Point::new(9, 0),
            crate::Point::new(0, 9),
            crate::Point::new(3, 3),
        ])
        .unwrap();
        let g = FlipGraph::build(Arc::new(ps), FlipKind::Bistellar, None).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.is_triangle_free());
    }
}
