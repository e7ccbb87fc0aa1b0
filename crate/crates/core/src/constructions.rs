//! Rewiring operations that keep a graph d-RDR: switching two edges inside
//! one graph and stitching two graphs together along edge pairs.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{canonical_form, Graph, GraphError};
use crate::rainbow::{enumerate_rdr_colorings, Modulo, RainbowAssignment, RdrWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{{{0}, {1}}} is not an edge")]
    MissingEdge(usize, usize),
    #[error("edge endpoints do not carry matching colors: {0}")]
    ColorMismatch(String),
    #[error("the four endpoints are not distinct")]
    EndpointsNotDistinct,
    #[error("replacement edge {{{0}, {1}}} already exists")]
    ReplacementExists(usize, usize),
    #[error("edge {{{0}, {1}}} is used by more than one pair")]
    NotDisjoint(usize, usize),
    #[error("colorings use different palettes ({0} and {1})")]
    PaletteMismatch(usize, usize),
    #[error("result is not d-RDR under the carried coloring: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Two edges `{u1, v1}`, `{u2, v2}` whose first endpoints share `color`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwitchMove {
    pub e1: (usize, usize),
    pub e2: (usize, usize),
    pub color: usize,
}

impl SwitchMove {
    /// Orients both edges so the colored endpoint comes first and reads the
    /// shared color from the witness.
    pub fn new(w: &RdrWitness, e1: (usize, usize), e2: (usize, usize)) -> Result<Self, ConstructionError> {
        let f = &w.coloring;
        let e1 = orient(f, e1)?;
        let e2 = orient(f, e2)?;
        if f.mask(e1.0) != f.mask(e2.0) {
            return Err(ConstructionError::ColorMismatch(format!(
                "vertices {} and {} have different colors",
                e1.0, e2.0
            )));
        }
        let color = f.colors(e1.0)[0];
        Ok(SwitchMove { e1, e2, color })
    }
}

fn orient(f: &RainbowAssignment, (a, b): (usize, usize)) -> Result<(usize, usize), ConstructionError> {
    match (f.mask(a).count_ones(), f.mask(b).count_ones()) {
        (1, 0) => Ok((a, b)),
        (0, 1) => Ok((b, a)),
        _ => Err(ConstructionError::ColorMismatch(format!(
            "edge {{{a}, {b}}} needs exactly one endpoint with a single color"
        ))),
    }
}

fn validated(g: Graph, coloring: RainbowAssignment) -> Result<(Graph, RdrWitness), ConstructionError> {
    let w = RdrWitness::from_coloring(&g, coloring);
    w.check(&g).map_err(ConstructionError::Invalid)?;
    Ok((g, w))
}

fn replace_edges(
    g: &Graph,
    remove: &[(usize, usize)],
    add: &[(usize, usize)],
) -> Result<Graph, ConstructionError> {
    let removed: BTreeSet<(usize, usize)> = remove.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut edges: BTreeSet<(usize, usize)> = g.edges().filter(|e| !removed.contains(e)).collect();
    for &(a, b) in add {
        if !edges.insert((a.min(b), a.max(b))) {
            return Err(ConstructionError::ReplacementExists(a.min(b), a.max(b)));
        }
    }
    Ok(Graph::new(g.order(), edges)?)
}

/// Replaces `{u1, v1}, {u2, v2}` by `{u1, v2}, {u2, v1}`; the coloring is
/// carried over unchanged and revalidated.
pub fn edge_switch(g: &Graph, w: &RdrWitness, mv: &SwitchMove) -> Result<(Graph, RdrWitness), ConstructionError> {
    let f = &w.coloring;
    let ((u1, v1), (u2, v2)) = (mv.e1, mv.e2);
    for (a, b) in [mv.e1, mv.e2] {
        if !g.has_edge(a, b) {
            return Err(ConstructionError::MissingEdge(a, b));
        }
    }
    let distinct: BTreeSet<usize> = [u1, v1, u2, v2].into();
    if distinct.len() != 4 {
        return Err(ConstructionError::EndpointsNotDistinct);
    }
    let want = 1u32 << (mv.color.max(1) - 1);
    if mv.color == 0 || f.mask(u1) != want || f.mask(u2) != want || f.mask(v1) != 0 || f.mask(v2) != 0 {
        return Err(ConstructionError::ColorMismatch(format!(
            "move needs f(u1) = f(u2) = {{{}}} and f(v1) = f(v2) = ∅",
            mv.color
        )));
    }
    let h = replace_edges(g, &[mv.e1, mv.e2], &[(u1, v2), (u2, v1)])?;
    validated(h, f.clone())
}

/// An edge of the first graph paired with an edge of the second.
pub type EdgePair = ((usize, usize), (usize, usize));

/// Disjoint union of `g1` and `g2` (vertices of `g2` shifted by
/// `g1.order()`), with each pair `(e1 ∈ g1, e2 ∈ g2)` rewired like a switch.
pub fn stitch(
    g1: &Graph,
    w1: &RdrWitness,
    g2: &Graph,
    w2: &RdrWitness,
    pairs: &[EdgePair],
) -> Result<(Graph, RdrWitness), ConstructionError> {
    let (f1, f2) = (&w1.coloring, &w2.coloring);
    if f1.k() != f2.k() {
        return Err(ConstructionError::PaletteMismatch(f1.k(), f2.k()));
    }
    let off = g1.order();
    let mut used1 = BTreeSet::new();
    let mut used2 = BTreeSet::new();
    let mut remove = Vec::new();
    let mut add = Vec::new();
    for &(e1, e2) in pairs {
        if !g1.has_edge(e1.0, e1.1) {
            return Err(ConstructionError::MissingEdge(e1.0, e1.1));
        }
        if !g2.has_edge(e2.0, e2.1) {
            return Err(ConstructionError::MissingEdge(e2.0, e2.1));
        }
        let (u1, v1) = orient(f1, e1)?;
        let (u2, v2) = orient(f2, e2)?;
        if f1.mask(u1) != f2.mask(u2) {
            return Err(ConstructionError::ColorMismatch(format!(
                "vertex {u1} of the first graph and vertex {u2} of the second differ"
            )));
        }
        if !used1.insert((u1.min(v1), u1.max(v1))) {
            return Err(ConstructionError::NotDisjoint(u1.min(v1), u1.max(v1)));
        }
        if !used2.insert((u2.min(v2), u2.max(v2))) {
            return Err(ConstructionError::NotDisjoint(u2.min(v2), u2.max(v2)));
        }
        remove.push((u1, v1));
        remove.push((u2 + off, v2 + off));
        add.push((u1, v2 + off));
        add.push((u2 + off, v1));
    }
    let union = g1.disjoint_union(g2);
    let h = replace_edges(&union, &remove, &add)?;
    let mut masks = f1.masks().to_vec();
    masks.extend_from_slice(f2.masks());
    let coloring = RainbowAssignment::from_masks(f1.k(), masks).expect("same palette");
    validated(h, coloring)
}

/// Every switch that the witness allows on `g` and that keeps it simple.
pub fn switch_moves(g: &Graph, w: &RdrWitness) -> Vec<SwitchMove> {
    let f = &w.coloring;
    let mut by_color: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (a, b) in g.edges() {
        if let Ok(e) = orient(f, (a, b)) {
            by_color.entry(f.mask(e.0)).or_default().push(e);
        }
    }
    let mut out = Vec::new();
    for (mask, edges) in by_color {
        let color = mask.trailing_zeros() as usize + 1;
        for (i, &e1) in edges.iter().enumerate() {
            for &e2 in &edges[i + 1..] {
                let distinct = e1.0 != e2.0 && e1.1 != e2.1;
                if distinct && !g.has_edge(e1.0, e2.1) && !g.has_edge(e2.0, e1.1) {
                    out.push(SwitchMove { e1, e2, color });
                }
            }
        }
    }
    out
}

/// Switching meta-graph over isomorphism classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachabilityReport {
    /// Canonical fingerprints, one per class, in order of first appearance.
    pub nodes: Vec<String>,
    /// Directed class pairs `(a, b)`, `a != b`, such that one switch turns
    /// a member of `a` into a member of `b`.
    pub edges: Vec<(usize, usize)>,
    pub symmetric: bool,
    pub connected: bool,
    /// Component sizes, largest first.
    pub component_sizes: Vec<usize>,
    /// Distinct switch results that are not among the input classes.
    pub outside_classes: usize,
}

pub fn switching_reachability(graphs: &[Graph]) -> ReachabilityReport {
    let mut nodes: Vec<String> = Vec::new();
    let mut reps: Vec<&Graph> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for g in graphs {
        let fp = canonical_form(g).fingerprint();
        if !index.contains_key(&fp) {
            index.insert(fp.clone(), nodes.len());
            nodes.push(fp);
            reps.push(g);
        }
    }
    let results: Vec<(BTreeSet<usize>, BTreeSet<String>)> = reps
        .par_iter()
        .map(|g| {
            let mut targets = BTreeSet::new();
            let mut outside = BTreeSet::new();
            for w in enumerate_rdr_colorings(g, Modulo::ColorPermutationAndAutomorphism) {
                for mv in switch_moves(g, &w) {
                    let Ok((h, _)) = edge_switch(g, &w, &mv) else { continue };
                    let fp = canonical_form(&h).fingerprint();
                    match index.get(&fp) {
                        Some(&j) => {
                            targets.insert(j);
                        }
                        None => {
                            outside.insert(fp);
                        }
                    }
                }
            }
            (targets, outside)
        })
        .collect();
    let mut edges = BTreeSet::new();
    let mut outside = BTreeSet::new();
    for (i, (targets, out)) in results.into_iter().enumerate() {
        edges.extend(targets.into_iter().filter(|&j| j != i).map(|j| (i, j)));
        outside.extend(out);
    }
    let symmetric = edges.iter().all(|&(a, b)| edges.contains(&(b, a)));
    let k = nodes.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..k {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut component_sizes: Vec<usize> = sizes.into_values().collect();
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    ReachabilityReport {
        nodes,
        edges: edges.into_iter().collect(),
        symmetric,
        connected: component_sizes.len() <= 1,
        component_sizes,
        outside_classes: outside.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete_bipartite, prism};
    use crate::graph::is_isomorphic;
    use crate::rainbow::{is_d_rdr, validate_rdf};

    #[test]
    fn switch_round_trip() {
        let g = prism(6).unwrap();
        let w = is_d_rdr(&g).unwrap();
        let moves = switch_moves(&g, &w);
        assert!(!moves.is_empty());
        for mv in &moves {
            let (h, w2) = edge_switch(&g, &w, mv).unwrap();
            assert!(validate_rdf(&h, &w2.coloring).unwrap());
            assert_eq!(h.regular_degree(), Some(3));
            let back = SwitchMove {
                e1: (mv.e1.0, mv.e2.1),
                e2: (mv.e2.0, mv.e1.1),
                color: mv.color,
            };
            assert_eq!(edge_switch(&h, &w2, &back).unwrap().0, g);
        }
    }

    #[test]
    fn switch_errors() {
        let g = complete_bipartite(3).unwrap();
        let w = is_d_rdr(&g).unwrap();
        let mv = SwitchMove::new(&w, (0, 3), (1, 4));
        assert!(mv.is_err(), "vertices 0 and 1 carry different colors");
        let g = prism(6).unwrap();
        let w = is_d_rdr(&g).unwrap();
        let same: Vec<usize> = w.color_classes[0].clone();
        let e1 = (same[0], g.neighbors(same[0])[0]);
        let e2 = (same[0], g.neighbors(same[0])[1]);
        let mv = SwitchMove { e1, e2, color: 1 };
        assert_eq!(edge_switch(&g, &w, &mv).unwrap_err(), ConstructionError::EndpointsNotDistinct);
        let mv = SwitchMove { e1: (0, 2), e2: e1, color: 1 };
        assert!(matches!(edge_switch(&g, &w, &mv), Err(ConstructionError::MissingEdge(..))));
    }

    #[test]
    fn stitching_two_k33() {
        let k = complete_bipartite(3).unwrap();
        let w = is_d_rdr(&k).unwrap();
        let (u, _) = (0, 3);
        let (h, w2) = stitch(&k, &w, &k, &w, &[((u, 3), (u, 3))]).unwrap();
        assert_eq!(h.order(), 12);
        assert!(h.is_connected());
        assert!(validate_rdf(&h, &w2.coloring).unwrap());
        let (plain, _) = stitch(&k, &w, &k, &w, &[]).unwrap();
        assert_eq!(plain, k.disjoint_union(&k));
        assert!(matches!(
            stitch(&k, &w, &k, &w, &[((0, 3), (1, 3))]),
            Err(ConstructionError::ColorMismatch(_))
        ));
        assert!(matches!(
            stitch(&k, &w, &k, &w, &[((0, 3), (0, 3)), ((0, 3), (0, 4))]),
            Err(ConstructionError::NotDisjoint(0, 3))
        ));
    }

    #[test]
    fn order_twelve_classes_from_stitching() {
        let k = complete_bipartite(3).unwrap();
        let w = is_d_rdr(&k).unwrap();
        let mut found: Vec<Graph> = Vec::new();
        let edges: Vec<(usize, usize)> = k.edges().collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                for a in 0..edges.len() {
                    for b in 0..edges.len() {
                        if a == b {
                            continue;
                        }
                        let Ok((h, _)) = stitch(&k, &w, &k, &w, &[(edges[i], edges[a]), (edges[j], edges[b])]) else {
                            continue;
                        };
                        if h.is_connected() && !found.iter().any(|f| is_isomorphic(f, &h)) {
                            found.push(h);
                        }
                    }
                }
            }
        }
        assert_eq!(found.len(), 3);
        assert!(found.iter().any(|h| is_isomorphic(h, &prism(6).unwrap())));
    }

    #[test]
    fn reachability_of_single_graph() {
        let r = switching_reachability(&[prism(6).unwrap()]);
        assert!(r.connected);
        assert_eq!(r.component_sizes, vec![1]);
    }
}
