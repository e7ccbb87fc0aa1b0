use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Length of a shortest cycle; forests have infinite girth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// Exact girth by a breadth-first search from every vertex.
pub fn girth(g: &Graph) -> Girth {
    let n = g.order();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        queue.clear();
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                    if dist[w] == dist[u] {
                        break 'bfs;
                    }
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// All cycles of exactly `len` vertices, each reported once as its
/// lexicographically least rotation/reflection: the smallest vertex first,
/// followed by its smaller cycle neighbor.
pub fn cycles_of_length(g: &Graph, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len < 3 {
        return out;
    }
    let n = g.order();
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(len);
    for s in 0..n {
        path.clear();
        path.push(s);
        on_path[s] = true;
        extend_path(g, s, len, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
    }
    out
}

fn extend_path(
    g: &Graph,
    start: usize,
    len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    if path.len() == len {
        if g.has_edge(last, start) && path[1] < path[len - 1] {
            out.push(path.clone());
        }
        return;
    }
    for &w in g.neighbors(last) {
        if w > start && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            extend_path(g, start, len, path, on_path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Girth cycles and their distribution over edges and vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    pub girth: usize,
    pub cycle_count: usize,
    /// Number of girth cycles through each edge `(u, v)`, `u < v`, in edge order.
    pub edge_counts: Vec<((usize, usize), usize)>,
    /// Sorted counts of the edges incident with each vertex.
    pub vertex_signatures: Vec<Vec<usize>>,
    pub girth_regular: bool,
    pub graph_signature: Option<Vec<usize>>,
}

impl GirthReport {
    pub fn edge_count(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edge_counts
            .binary_search_by_key(&key, |&(e, _)| e)
            .ok()
            .map(|i| self.edge_counts[i].1)
    }
}

pub fn girth_signature(g: &Graph) -> Result<GirthReport, GraphError> {
    let len = girth(g).finite().ok_or(GraphError::Acyclic)?;
    let cycles = cycles_of_length(g, len);
    let mut counts: HashMap<(usize, usize), usize> = g.edges().map(|e| (e, 0)).collect();
    for c in &cycles {
        for i in 0..len {
            let (a, b) = (c[i], c[(i + 1) % len]);
            *counts.get_mut(&(a.min(b), a.max(b))).expect("cycle edge") += 1;
        }
    }
    let vertex_signatures: Vec<Vec<usize>> = (0..g.order())
        .map(|v| {
            let mut s: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&w| counts[&(v.min(w), v.max(w))])
                .collect();
            s.sort_unstable();
            s
        })
        .collect();
    let girth_regular = g.regular_degree().is_some()
        && vertex_signatures.windows(2).all(|w| w[0] == w[1]);
    let graph_signature = girth_regular.then(|| vertex_signatures[0].clone());
    let mut edge_counts: Vec<_> = counts.into_iter().collect();
    edge_counts.sort_unstable();
    Ok(GirthReport {
        girth: len,
        cycle_count: cycles.len(),
        edge_counts,
        vertex_signatures,
        girth_regular,
        graph_signature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn girth_of_cycles_and_trees() {
        assert_eq!(girth(&cycle(7)), Girth::Finite(7));
        assert_eq!(girth(&cycle(3)), Girth::Finite(3));
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(girth(&path), Girth::Infinite);
        assert_eq!(girth_signature(&path), Err(GraphError::Acyclic));
    }

    #[test]
    fn six_cycle_signature() {
        let r = girth_signature(&cycle(6)).unwrap();
        assert_eq!(r.girth, 6);
        assert_eq!(r.cycle_count, 1);
        assert_eq!(r.graph_signature, Some(vec![1, 1]));
    }

    #[test]
    fn cycles_are_canonical_and_unique() {
        // K4 has 3 four-cycles and 4 triangles
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(cycles_of_length(&k4, 3).len(), 4);
        let c4 = cycles_of_length(&k4, 4);
        assert_eq!(c4.len(), 3);
        for c in &c4 {
            assert_eq!(c[0], 0);
            assert!(c[1] < c[3]);
        }
    }

    #[test]
    fn edge_count_sum_matches_cycle_count() {
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = girth_signature(&k4).unwrap();
        let total: usize = r.edge_counts.iter().map(|&(_, c)| c).sum();
        assert_eq!(total, r.girth * r.cycle_count);
        assert_eq!(r.graph_signature, Some(vec![2, 2, 2]));
        assert_eq!(r.edge_count(1, 0), Some(2));
    }
}
