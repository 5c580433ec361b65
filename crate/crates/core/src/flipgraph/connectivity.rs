//! Exact vertex connectivity by unit-capacity vertex-split max flow.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectivityError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has fewer than two nodes")]
    TooFewNodes,
}

/// Residual network with vertex `x` split into `2x` (in) and `2x + 1` (out).
struct SplitNetwork {
    head: Vec<usize>,
    to: Vec<usize>,
    rev: Vec<usize>,
    base_cap: Vec<u32>,
    cap: Vec<u32>,
    // Arc index of each vertex's in-to-out arc.
    inner_arc: Vec<usize>,
}

impl SplitNetwork {
    fn new(adj: &[Vec<usize>]) -> Self {
        let n = adj.len();
        let mut pairs = Vec::new();
        for (x, l) in adj.iter().enumerate() {
            pairs.push((2 * x, 2 * x + 1, 1u32));
            for &w in l {
                pairs.push((2 * x + 1, 2 * w, 1u32));
            }
        }
        // Build CSR with paired reverse arcs.
        let mut deg = vec![0usize; 2 * n];
        for &(a, b, _) in &pairs {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut head = vec![0usize; 2 * n + 1];
        for i in 0..2 * n {
            head[i + 1] = head[i] + deg[i];
        }
        let m = head[2 * n];
        let mut fill = head.clone();
        let mut to = vec![0; m];
        let mut rev = vec![0; m];
        let mut base_cap = vec![0; m];
        let mut inner_arc = vec![0; n];
        for &(a, b, c) in &pairs {
            let ia = fill[a];
            fill[a] += 1;
            let ib = fill[b];
            fill[b] += 1;
            to[ia] = b;
            rev[ia] = ib;
            base_cap[ia] = c;
            to[ib] = a;
            rev[ib] = ia;
            if b == a + 1 && a % 2 == 0 {
                inner_arc[a / 2] = ia;
            }
        }
        SplitNetwork {
            head,
            to,
            rev,
            cap: base_cap.clone(),
            base_cap,
            inner_arc,
        }
    }

    /// Number of internally disjoint `s`-`t` paths, stopping at `limit`.
    fn flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        self.cap.copy_from_slice(&self.base_cap);
        self.cap[self.inner_arc[s]] = u32::MAX / 2;
        self.cap[self.inner_arc[t]] = u32::MAX / 2;
        let src = 2 * s + 1;
        let dst = 2 * t;
        let nn = self.head.len() - 1;
        let mut pred = vec![usize::MAX; nn];
        let mut total = 0;
        while total < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            pred[src] = usize::MAX - 1;
            let mut q = VecDeque::from([src]);
            'bfs: while let Some(u) = q.pop_front() {
                for a in self.head[u]..self.head[u + 1] {
                    let w = self.to[a];
                    if self.cap[a] > 0 && pred[w] == usize::MAX {
                        pred[w] = a;
                        if w == dst {
                            break 'bfs;
                        }
                        q.push_back(w);
                    }
                }
            }
            if pred[dst] == usize::MAX {
                break;
            }
            let mut w = dst;
            while w != src {
                let a = pred[w];
                self.cap[a] -= 1;
                self.cap[self.rev[a]] += 1;
                w = self.to[self.rev[a]];
            }
            total += 1;
        }
        total
    }
}

fn check_connected(adj: &[Vec<usize>]) -> Result<(), ConnectivityError> {
    if adj.len() < 2 {
        return Err(ConnectivityError::TooFewNodes);
    }
    let mut seen = vec![false; adj.len()];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(ConnectivityError::Disconnected)
    }
}

/// Maximum number of internally vertex-disjoint paths between two distinct,
/// non-adjacent nodes.
pub fn local_connectivity(adj: &[Vec<usize>], s: usize, t: usize) -> usize {
    assert!(s != t && !adj[s].contains(&t), "endpoints must be distinct and non-adjacent");
    SplitNetwork::new(adj).flow(s, t, usize::MAX)
}

/// Exact vertex connectivity of a simple undirected graph; `n - 1` for `K_n`.
///
/// With `v` of minimum degree, every minimum separator either misses `v`,
/// and then separates `v` from some non-neighbor, or contains `v`, and then
/// separates two non-adjacent neighbors of `v`.
pub fn vertex_connectivity(adj: &[Vec<usize>]) -> Result<usize, ConnectivityError> {
    check_connected(adj)?;
    let n = adj.len();
    let v = (0..n).min_by_key(|&i| adj[i].len()).expect("nonempty");
    let mut best = adj[v].len();
    let mut net = SplitNetwork::new(adj);
    let mut is_nb = vec![false; n];
    for &w in &adj[v] {
        is_nb[w] = true;
    }
    for (w, &nb) in is_nb.iter().enumerate() {
        if w != v && !nb {
            best = best.min(net.flow(v, w, best));
        }
    }
    let nb = &adj[v];
    for (i, &x) in nb.iter().enumerate() {
        for &y in &nb[i + 1..] {
            if !adj[x].contains(&y) {
                best = best.min(net.flow(x, y, best));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect()
    }

    fn complete(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect()
    }

    #[test]
    fn small_graphs() {
        assert_eq!(vertex_connectivity(&cycle(5)), Ok(2));
        assert_eq!(vertex_connectivity(&complete(4)), Ok(3));
        assert_eq!(vertex_connectivity(&complete(2)), Ok(1));
        // Two triangles sharing vertex 2.
        let bowtie = vec![vec![1, 2], vec![0, 2], vec![0, 1, 3, 4], vec![2, 4], vec![2, 3]];
        assert_eq!(vertex_connectivity(&bowtie), Ok(1));
        assert_eq!(local_connectivity(&cycle(6), 0, 3), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(vertex_connectivity(&[vec![]]), Err(ConnectivityError::TooFewNodes));
        assert_eq!(
            vertex_connectivity(&[vec![], vec![]]),
            Err(ConnectivityError::Disconnected)
        );
    }

    #[test]
    fn cube_is_three_connected() {
        let adj: Vec<Vec<usize>> = (0..8usize).map(|i| (0..3).map(|b| i ^ (1 << b)).collect()).collect();
        assert_eq!(vertex_connectivity(&adj), Ok(3));
        assert_eq!(local_connectivity(&adj, 0, 7), 3);
    }
}
