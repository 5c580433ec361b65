//! The refinement poset of all subdivisions of a small point set, with its
//! Hasse diagram and heights.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::flipgraph::{FlipGraph, FlipKind};
use crate::geom::PointSet;
use crate::subdivision::{Step, Subdivision};

pub const DEFAULT_POSET_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("instance has {n} points, cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
}

#[derive(Clone, Debug)]
pub struct Poset {
    base: Arc<PointSet>,
    nodes: Vec<Subdivision>,
    index: HashMap<Vec<u8>, usize>,
    // Hasse edges to direct coarsenings, with the step taken.
    up: Vec<Vec<(usize, Step)>>,
    down: Vec<Vec<usize>>,
    heights: Vec<usize>,
}

/// Every subdivision of `base`, reached upward from the partial
/// triangulations through direct coarsenings.
pub fn build_poset(base: Arc<PointSet>, cap: Option<usize>) -> Result<Poset, PosetError> {
    let cap = cap.unwrap_or(DEFAULT_POSET_CAP);
    if base.len() > cap {
        return Err(PosetError::CapExceeded { n: base.len(), cap });
    }
    let fg = FlipGraph::build(base.clone(), FlipKind::Bistellar, None).expect("uncapped");
    let mut nodes: Vec<Subdivision> = fg.nodes().iter().map(Subdivision::from_triangulation).collect();
    let mut index: HashMap<Vec<u8>, usize> = nodes.iter().enumerate().map(|(i, s)| (s.canonical_key(), i)).collect();
    let mut raw_up: Vec<Vec<(usize, Step)>> = vec![Vec::new(); nodes.len()];
    let mut queue: VecDeque<usize> = (0..nodes.len()).collect();
    while let Some(i) = queue.pop_front() {
        for (step, s) in nodes[i].direct_coarsenings() {
            let key = s.canonical_key();
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    let j = nodes.len();
                    index.insert(key, j);
                    nodes.push(s);
                    raw_up.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            raw_up[i].push((j, step));
        }
    }
    // Renumber by canonical key.
    let keys: Vec<Vec<u8>> = nodes.iter().map(Subdivision::canonical_key).collect();
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut new_of = vec![0; nodes.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    let mut slots: Vec<Option<Subdivision>> = nodes.into_iter().map(Some).collect();
    let nodes: Vec<Subdivision> = order.iter().map(|&o| slots[o].take().expect("each once")).collect();
    let mut up = vec![Vec::new(); nodes.len()];
    for (old, list) in raw_up.into_iter().enumerate() {
        let mut l: Vec<(usize, Step)> = list.into_iter().map(|(j, s)| (new_of[j], s)).collect();
        l.sort_by_key(|(j, _)| *j);
        up[new_of[old]] = l;
    }
    let mut down = vec![Vec::new(); nodes.len()];
    for (i, l) in up.iter().enumerate() {
        for &(j, _) in l {
            down[j].push(i);
        }
    }
    let index = order.iter().enumerate().map(|(new, &old)| (keys[old].clone(), new)).collect();

    // |E| - |V| strictly drops along every coarsening step, which gives a
    // topological order for the longest-chain recursion.
    let rank = |s: &Subdivision| s.edges().len() as i64 - s.vertices().len() as i64;
    let mut topo: Vec<usize> = (0..nodes.len()).collect();
    topo.sort_by_key(|&i| std::cmp::Reverse(rank(&nodes[i])));
    let mut heights = vec![0usize; nodes.len()];
    for &i in &topo {
        for &(j, _) in &up[i] {
            debug_assert!(rank(&nodes[j]) < rank(&nodes[i]));
            heights[j] = heights[j].max(heights[i] + 1);
        }
    }
    Ok(Poset {
        base,
        nodes,
        index,
        up,
        down,
        heights,
    })
}

/// One node of the JSON export.
#[derive(Serialize)]
struct NodeJson<'a> {
    id: usize,
    vertices: Vec<usize>,
    edges: Vec<[usize; 2]>,
    bystanders: Vec<usize>,
    slack: usize,
    height: usize,
    up: Vec<UpJson<'a>>,
}

#[derive(Serialize)]
struct UpJson<'a> {
    to: usize,
    step: &'a Step,
}

impl Poset {
    pub fn base(&self) -> &Arc<PointSet> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Subdivision] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Subdivision {
        &self.nodes[i]
    }

    pub fn index_of(&self, s: &Subdivision) -> Option<usize> {
        self.index.get(&s.canonical_key()).copied()
    }

    /// Hasse edges to the direct coarsenings of node `i`.
    pub fn up(&self, i: usize) -> &[(usize, Step)] {
        &self.up[i]
    }

    /// Hasse edges to the direct refinements of node `i`.
    pub fn down(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn hasse_edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Length of the longest chain from a triangulation up to node `i`.
    pub fn height(&self, i: usize) -> usize {
        self.heights[i]
    }

    pub fn height_max(&self) -> usize {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    pub fn trivial_index(&self) -> usize {
        self.index_of(&Subdivision::trivial(self.base.clone()))
            .expect("the trivial subdivision is in the poset")
    }

    /// Every Hasse edge raises slack by exactly one.
    pub fn all_steps_perfect(&self) -> bool {
        self.up.iter().enumerate().all(|(i, l)| {
            l.iter()
                .all(|&(j, _)| self.nodes[j].slack() == self.nodes[i].slack() + 1)
        })
    }

    /// Height equals slack at every node.
    pub fn height_is_slack(&self) -> bool {
        (0..self.len()).all(|i| self.heights[i] == self.nodes[i].slack())
    }

    /// Node and Hasse-edge counts per height.
    pub fn level_profile(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); self.height_max() + 1];
        for i in 0..self.len() {
            out[self.heights[i]].0 += 1;
            out[self.heights[i]].1 += self.up[i].len();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let nodes: Vec<NodeJson> = (0..self.len())
            .map(|i| {
                let s = &self.nodes[i];
                NodeJson {
                    id: i,
                    vertices: s.vertices().iter().copied().collect(),
                    edges: s.edges().iter().map(|&e| e.into()).collect(),
                    bystanders: s.bystanders(),
                    slack: s.slack(),
                    height: self.heights[i],
                    up: self.up[i].iter().map(|(to, step)| UpJson { to: *to, step }).collect(),
                }
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "n": self.base.len(),
            "height_max": self.height_max(),
            "nodes": nodes,
        }))
        .expect("poset serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::convex_gon;

    #[test]
    fn pentagon_poset() {
        let p = build_poset(Arc::new(convex_gon(5)), None).unwrap();
        // 5 triangulations, 5 single diagonals, the trivial subdivision.
        assert_eq!(p.len(), 11);
        assert_eq!(p.hasse_edge_count(), 15);
        assert_eq!(p.height_max(), 2);
        assert!(p.all_steps_perfect());
        assert!(p.height_is_slack());
        assert_eq!(p.height(p.trivial_index()), 2);
    }

    #[test]
    fn cap() {
        assert_eq!(
            build_poset(Arc::new(convex_gon(9)), None).unwrap_err(),
            PosetError::CapExceeded { n: 9, cap: 8 }
        );
    }
}
