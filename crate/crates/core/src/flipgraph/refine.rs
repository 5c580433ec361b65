//! The subgraph of a flip graph induced by the refinements of a subdivision,
//! checked against the product of its regions' flip graphs.

use std::collections::HashMap;
use std::sync::Arc;

use super::FlipGraph;
use crate::graph::Edge;
use crate::subdivision::Subdivision;
use crate::triangulation::Triangulation;

#[derive(Clone, Debug)]
pub struct RefinementSubgraph {
    /// Indices into the flip graph, ascending.
    pub nodes: Vec<usize>,
    /// Induced adjacency over positions in `nodes`.
    pub adj: Vec<Vec<usize>>,
    /// Node counts of the flip graphs of the active regions.
    pub factor_sizes: Vec<usize>,
    /// Whether the canonical restriction map is a graph isomorphism onto
    /// the Cartesian product of the region flip graphs.
    pub is_product: bool,
}

impl RefinementSubgraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Refining may drop bystanders of `s` but never its edges.
fn refines(t: &Triangulation, s: &Subdivision) -> bool {
    s.vertices().is_superset(t.vertices()) && t.edges().is_superset(s.edges())
}

/// Induced subgraph of `g` on the triangulations refining `s`.
pub fn refinement_subgraph(g: &FlipGraph, s: &Subdivision) -> RefinementSubgraph {
    assert!(
        Arc::ptr_eq(g.base(), s.base()) || g.base().points() == s.ps().points(),
        "flip graph and subdivision must share a point set"
    );
    let nodes: Vec<usize> = (0..g.len()).filter(|&i| refines(g.node(i), s)).collect();
    let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let adj: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&i| g.neighbors(i).iter().filter_map(|(j, _)| pos.get(j).copied()).collect())
        .collect();

    // Restriction of each refinement to each active region.
    let ps = s.ps();
    let mut factors = Vec::new();
    for r in s.regions().iter().filter(|r| r.is_active()) {
        let mut local = r.points();
        local.sort_unstable();
        let sub = Arc::new(ps.subset(&local).expect("subset of a general-position set"));
        let fg = FlipGraph::build(sub, g.kind(), None).expect("uncapped");
        factors.push((local, fg));
    }
    let factor_sizes: Vec<usize> = factors.iter().map(|(_, f)| f.len()).collect();
    let restrict = |t: &Triangulation, local: &[usize], fg: &FlipGraph| -> Option<usize> {
        let at: HashMap<usize, usize> = local.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let v = t.vertices().iter().filter_map(|p| at.get(p).copied()).collect();
        let e = t
            .edges()
            .iter()
            .filter_map(|e| Some(Edge::new(*at.get(&e.lo())?, *at.get(&e.hi())?)))
            .collect();
        let lt = Triangulation::new(fg.base().clone(), v, e).ok()?;
        fg.index_of(&lt)
    };
    let mut tuples = Vec::with_capacity(nodes.len());
    let mut is_product = true;
    for &i in &nodes {
        let tuple: Option<Vec<usize>> = factors
            .iter()
            .map(|(local, fg)| restrict(g.node(i), local, fg))
            .collect();
        match tuple {
            Some(t) => tuples.push(t),
            None => {
                is_product = false;
                break;
            }
        }
    }
    if is_product {
        let expected: usize = factor_sizes.iter().product();
        let distinct: std::collections::HashSet<&Vec<usize>> = tuples.iter().collect();
        is_product = distinct.len() == nodes.len() && nodes.len() == expected;
    }
    if is_product {
        'outer: for a in 0..nodes.len() {
            for b in a + 1..nodes.len() {
                let diff: Vec<usize> = (0..factors.len()).filter(|&k| tuples[a][k] != tuples[b][k]).collect();
                let in_product = diff.len() == 1 && {
                    let k = diff[0];
                    factors[k].1.is_adjacent(tuples[a][k], tuples[b][k])
                };
                if in_product != adj[a].contains(&b) {
                    is_product = false;
                    break 'outer;
                }
            }
        }
    }
    RefinementSubgraph {
        nodes,
        adj,
        factor_sizes,
        is_product,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flipgraph::FlipKind;
    use crate::generators::convex_gon;

    #[test]
    fn triangulation_gives_single_node() {
        let ps = Arc::new(convex_gon(6));
        let g = FlipGraph::build(ps, FlipKind::Edge, None).unwrap();
        let s = Subdivision::from_triangulation(g.node(3));
        let r = refinement_subgraph(&g, &s);
        assert_eq!(r.nodes, vec![3]);
        assert!(r.is_product);
    }

    #[test]
    fn trivial_hexagon_is_whole_graph() {
        let ps = Arc::new(convex_gon(6));
        let g = FlipGraph::build(ps.clone(), FlipKind::Edge, None).unwrap();
        let r = refinement_subgraph(&g, &Subdivision::trivial(ps));
        assert_eq!(r.len(), 14);
        assert_eq!(r.factor_sizes, vec![14]);
        assert!(r.is_product);
    }
}
