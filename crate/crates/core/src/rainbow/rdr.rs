//! Deciding whether a d-regular graph has `γ_rd = n/2`, and enumerating the
//! optimal colorings.
//!
//! An optimal function colors one bipartition side of every component with
//! single colors so that the d neighbors of each uncolored vertex carry d
//! distinct colors. The search therefore colors the "conflict graph" on the
//! colored side, where two vertices conflict when they share a neighbor.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{validate_rdf, RainbowAssignment};
use crate::graph::{automorphism_generators, cycles_of_length, Graph};

/// An optimal d-RDR coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RdrWitness {
    #[serde(flatten)]
    pub coloring: RainbowAssignment,
    /// Index of the side of `Graph::bipartition` that is colored, when the
    /// colored set is a whole side.
    #[serde(rename = "side")]
    pub colored_side: Option<usize>,
    /// Vertices of color `i + 1`, sorted.
    #[serde(rename = "classes")]
    pub color_classes: Vec<Vec<usize>>,
}

impl RdrWitness {
    /// Wraps a singleton-or-empty coloring with palette `d`.
    pub fn from_coloring(g: &Graph, coloring: RainbowAssignment) -> Self {
        let d = coloring.k();
        let mut classes = vec![Vec::new(); d];
        let mut colored = Vec::new();
        for v in 0..coloring.len() {
            for c in coloring.colors(v) {
                classes[c - 1].push(v);
            }
            if coloring.mask(v) != 0 {
                colored.push(v);
            }
        }
        let colored_side = g.bipartition().and_then(|b| b.side_matching(&colored));
        RdrWitness {
            coloring,
            colored_side,
            color_classes: classes,
        }
    }

    fn from_labels(g: &Graph, d: usize, labels: &[u8]) -> Self {
        let masks = labels.iter().map(|&c| if c == 0 { 0 } else { 1 << (c - 1) }).collect();
        let coloring = RainbowAssignment::from_masks(d, masks).expect("labels within palette");
        Self::from_coloring(g, coloring)
    }

    /// Per-vertex color (`0` for uncolored), assuming singleton values.
    pub fn labels(&self) -> Vec<u8> {
        self.coloring
            .masks()
            .iter()
            .map(|&m| if m == 0 { 0 } else { m.trailing_zeros() as u8 + 1 })
            .collect()
    }

    /// Checks every structural property of an optimal coloring of a
    /// d-regular graph; returns a description of the first failure.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        let n = g.order();
        let d = g.regular_degree().ok_or("graph is not regular")?;
        if self.coloring.k() != d {
            return Err(format!("palette {} differs from degree {d}", self.coloring.k()));
        }
        if !validate_rdf(g, &self.coloring).map_err(|e| e.to_string())? {
            return Err("not a rainbow dominating function".into());
        }
        if 2 * self.coloring.weight() != n {
            return Err(format!("weight {} is not n/2", self.coloring.weight()));
        }
        if self.coloring.masks().iter().any(|m| m.count_ones() > 1) {
            return Err("a vertex carries more than one color".into());
        }
        let b = g.bipartition().ok_or("graph is not bipartite")?;
        for comp in g.components() {
            let sides: BTreeSet<usize> = comp
                .iter()
                .filter(|&&v| self.coloring.mask(v) != 0)
                .map(|&v| b.side_of(v))
                .collect();
            let colored = comp.iter().filter(|&&v| self.coloring.mask(v) != 0).count();
            if sides.len() != 1 || 2 * colored != comp.len() {
                return Err(format!("component of vertex {} is not colored on exactly one side", comp[0]));
            }
        }
        if self.color_classes.len() != d {
            return Err("wrong number of color classes".into());
        }
        for (i, class) in self.color_classes.iter().enumerate() {
            if class.len() * 2 * d != n {
                return Err(format!("color {} has {} vertices, expected n/2d", i + 1, class.len()));
            }
            if class.iter().any(|&v| self.coloring.colors(v) != [i + 1]) {
                return Err(format!("class {} disagrees with the coloring", i + 1));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RdrDecision {
    Rdr(RdrWitness),
    NotRdr,
    /// The node budget ran out before a witness or a refutation was found.
    Undecided,
}

impl RdrDecision {
    pub fn witness(&self) -> Option<&RdrWitness> {
        match self {
            RdrDecision::Rdr(w) => Some(w),
            _ => None,
        }
    }
}

/// A witness that `g` is d-RDR, if it is.
pub fn is_d_rdr(g: &Graph) -> Option<RdrWitness> {
    match decide_rdr(g, None) {
        RdrDecision::Rdr(w) => Some(w),
        RdrDecision::NotRdr => None,
        RdrDecision::Undecided => unreachable!("unbounded search always finishes"),
    }
}

/// Degree, and per component the two candidate colored sides, when the
/// cheap necessary conditions hold.
fn candidate_sides(g: &Graph) -> Option<(usize, Vec<[Vec<usize>; 2]>)> {
    let n = g.order();
    let d = g.regular_degree()?;
    if d == 0 || d > super::MAX_PALETTE || !n.is_multiple_of(2 * d) {
        return None;
    }
    let b = g.bipartition()?;
    let mut out = Vec::new();
    for comp in g.components() {
        if comp.len() % (2 * d) != 0 {
            return None;
        }
        let (s0, s1): (Vec<usize>, Vec<usize>) = comp.iter().partition(|&&v| b.side_of(v) == 0);
        out.push([s0, s1]);
    }
    Some((d, out))
}

/// Budgeted decision; the budget counts search nodes over all components
/// and sides.
pub fn decide_rdr(g: &Graph, budget: Option<u64>) -> RdrDecision {
    let Some((d, comps)) = candidate_sides(g) else {
        return RdrDecision::NotRdr;
    };
    let mut labels = vec![0u8; g.order()];
    let mut nodes = 0u64;
    let mut undecided = false;
    for sides in &comps {
        let mut found = false;
        let mut comp_undecided = false;
        for side in sides {
            let mut s = SideSearch::new(g, d, side, budget.map(|b| b.saturating_sub(nodes)));
            let mut sol = None;
            s.run(&mut |c: &[u8]| {
                sol = Some(c.to_vec());
                false
            });
            nodes += s.nodes;
            if let Some(c) = sol {
                for (&v, &x) in side.iter().zip(&c) {
                    labels[v] = x;
                }
                found = true;
                break;
            }
            comp_undecided |= s.aborted;
        }
        if !found {
            if !comp_undecided {
                return RdrDecision::NotRdr;
            }
            undecided = true;
        }
    }
    if undecided {
        RdrDecision::Undecided
    } else {
        RdrDecision::Rdr(RdrWitness::from_labels(g, d, &labels))
    }
}

/// Quotient applied by [`enumerate_rdr_colorings`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modulo {
    ColorPermutation,
    ColorPermutationAndAutomorphism,
}

/// Relabels colors in order of first appearance along the vertex order.
fn normalize(labels: &[u8], d: usize) -> Vec<u8> {
    let mut map = vec![0u8; d + 1];
    let mut next = 1;
    labels
        .iter()
        .map(|&c| {
            if c == 0 {
                0
            } else {
                if map[c as usize] == 0 {
                    map[c as usize] = next;
                    next += 1;
                }
                map[c as usize]
            }
        })
        .collect()
}

fn permutations(d: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (1..=d as u8).collect();
    fn rec(p: &mut Vec<u8>, i: usize, out: &mut Vec<Vec<u8>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(p, i + 1, out);
            p.swap(i, j);
        }
    }
    rec(&mut p, 0, &mut out);
    out
}

/// All optimal colorings of a d-RDR graph, one per class of the quotient,
/// each the lexicographically least member of its class (colors compared
/// per vertex, uncolored first).
pub fn enumerate_rdr_colorings(g: &Graph, modulo: Modulo) -> Vec<RdrWitness> {
    let Some((d, comps)) = candidate_sides(g) else {
        return Vec::new();
    };
    let n = g.order();
    let perms = permutations(d);
    // raw colorings of every component (color symmetry broken within it)
    let mut partial: Vec<Vec<u8>> = vec![vec![0u8; n]];
    for (ci, sides) in comps.iter().enumerate() {
        let mut local: Vec<(usize, Vec<u8>)> = Vec::new();
        for (si, side) in sides.iter().enumerate() {
            let mut s = SideSearch::new(g, d, side, None);
            s.run(&mut |c: &[u8]| {
                local.push((si, c.to_vec()));
                true
            });
        }
        if local.is_empty() {
            return Vec::new();
        }
        let mut next = Vec::new();
        for base in &partial {
            for (si, c) in &local {
                let side = &sides[*si];
                let relabelings: &[Vec<u8>] = if ci == 0 { &perms[..1] } else { &perms };
                for p in relabelings {
                    let mut l = base.clone();
                    for (&v, &x) in side.iter().zip(c) {
                        l[v] = p[x as usize - 1];
                    }
                    next.push(l);
                }
            }
        }
        partial = next;
    }
    let classes: BTreeSet<Vec<u8>> = partial.iter().map(|l| normalize(l, d)).collect();
    let reps: Vec<Vec<u8>> = match modulo {
        Modulo::ColorPermutation => classes.into_iter().collect(),
        Modulo::ColorPermutationAndAutomorphism => {
            let list: Vec<Vec<u8>> = classes.into_iter().collect();
            let index: BTreeMap<&[u8], usize> = list.iter().enumerate().map(|(i, l)| (l.as_slice(), i)).collect();
            let mut parent: Vec<usize> = (0..list.len()).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for gen in automorphism_generators(g) {
                for (i, l) in list.iter().enumerate() {
                    let mut img = vec![0u8; n];
                    for v in 0..n {
                        img[gen[v]] = l[v];
                    }
                    let j = index[normalize(&img, d).as_slice()];
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    // keep the smaller index (= lexicographically smaller) as root
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
            (0..list.len())
                .filter(|&i| find(&mut parent, i) == i)
                .map(|i| list[i].clone())
                .collect()
        }
    };
    reps.iter().map(|l| RdrWitness::from_labels(g, d, l)).collect()
}

/// Whether every 6-cycle alternates uncolored vertices with three distinct
/// single colors.
pub fn check_six_cycle_pattern(g: &Graph, w: &RdrWitness) -> bool {
    let m = w.coloring.masks();
    cycles_of_length(g, 6).iter().all(|c| {
        (0..2).any(|p| {
            let empty = (0..3).all(|i| m[c[2 * i + p]] == 0);
            let cs: Vec<u32> = (0..3).map(|i| m[c[2 * i + 1 - p]]).collect();
            empty && cs.iter().all(|x| x.count_ones() == 1) && cs[0] != cs[1] && cs[1] != cs[2] && cs[0] != cs[2]
        })
    })
}

/// Colors one side of one component: every vertex of `side` gets a color in
/// `1..=d`, distinct on vertices sharing a neighbor.
struct SideSearch {
    d: usize,
    cap: usize,
    conflict: Vec<Vec<usize>>,
    color: Vec<u8>,
    /// `forbid[v * (d + 1) + c]`: conflicting neighbors of `v` colored `c`.
    forbid: Vec<u16>,
    saturation: Vec<usize>,
    class_size: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    aborted: bool,
}

impl SideSearch {
    fn new(g: &Graph, d: usize, side: &[usize], budget: Option<u64>) -> Self {
        let local: BTreeMap<usize, usize> = side.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut conflict: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); side.len()];
        let in_side: BTreeSet<usize> = side.iter().copied().collect();
        for &v in side {
            for &t in g.neighbors(v) {
                for &u in g.neighbors(t) {
                    if u != v && in_side.contains(&u) {
                        conflict[local[&v]].insert(local[&u]);
                    }
                }
            }
        }
        let m = side.len();
        SideSearch {
            d,
            cap: m / d,
            conflict: conflict.into_iter().map(|s| s.into_iter().collect()).collect(),
            color: vec![0; m],
            forbid: vec![0; m * (d + 1)],
            saturation: vec![0; m],
            class_size: vec![0; d + 1],
            nodes: 0,
            budget,
            aborted: false,
        }
    }

    /// Calls `visit` on every solution (one per color permutation class)
    /// until it returns `false`.
    fn run(&mut self, visit: &mut dyn FnMut(&[u8]) -> bool) {
        self.go(0, visit);
    }

    fn pick(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.color.len() {
            if self.color[v] == 0 && best.is_none_or(|b| self.saturation[v] > self.saturation[b]) {
                best = Some(v);
            }
        }
        best
    }

    fn set(&mut self, v: usize, c: u8, on: bool) -> bool {
        let d1 = self.d + 1;
        let mut ok = true;
        self.color[v] = if on { c } else { 0 };
        if on {
            self.class_size[c as usize] += 1;
        } else {
            self.class_size[c as usize] -= 1;
        }
        for i in 0..self.conflict[v].len() {
            let u = self.conflict[v][i];
            let slot = &mut self.forbid[u * d1 + c as usize];
            if on {
                *slot += 1;
                if *slot == 1 {
                    self.saturation[u] += 1;
                    if self.color[u] == 0 && self.saturation[u] == self.d {
                        ok = false;
                    }
                }
            } else {
                *slot -= 1;
                if *slot == 0 {
                    self.saturation[u] -= 1;
                }
            }
        }
        ok
    }

    /// Returns `false` when the visitor asked to stop.
    fn go(&mut self, used: usize, visit: &mut dyn FnMut(&[u8]) -> bool) -> bool {
        if self.aborted {
            return false;
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.aborted = true;
            return false;
        }
        let Some(v) = self.pick() else {
            return visit(&self.color);
        };
        let d1 = self.d + 1;
        for c in 1..=self.d.min(used + 1) {
            if self.forbid[v * d1 + c] > 0 || self.class_size[c] >= self.cap {
                continue;
            }
            let ok = self.set(v, c as u8, true);
            let keep_going = !ok || self.go(used.max(c), visit);
            self.set(v, c as u8, false);
            if !keep_going {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete_bipartite, gp, htg, prism, xn};
    use crate::rainbow::gamma_rk;

    #[test]
    fn decision_examples() {
        let w = is_d_rdr(&gp(12, 5).unwrap()).expect("Nauru graph is 3-RDR");
        w.check(&gp(12, 5).unwrap()).unwrap();
        assert!(is_d_rdr(&gp(5, 2).unwrap()).is_none());
        let g = gp(18, 5).unwrap();
        is_d_rdr(&g).unwrap().check(&g).unwrap();
        assert!(is_d_rdr(&prism(4).unwrap()).is_none());
        assert!(is_d_rdr(&Graph::empty(4)).is_none());
    }

    #[test]
    fn witness_json() {
        let g = complete_bipartite(3).unwrap();
        let w = is_d_rdr(&g).unwrap();
        assert_eq!(w.colored_side, Some(0));
        let s = serde_json::to_value(&w).unwrap();
        assert_eq!(s["weight"], 3);
        assert_eq!(s["side"], 0);
        assert_eq!(s["colors"]["0"], serde_json::json!([1]));
        let back: RdrWitness = serde_json::from_value(s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn budget_gives_undecided() {
        let g = htg(4, 12, 2).unwrap();
        assert_eq!(decide_rdr(&g, Some(1)), RdrDecision::Undecided);
    }

    #[test]
    fn enumeration_counts() {
        let k33 = complete_bipartite(3).unwrap();
        assert_eq!(enumerate_rdr_colorings(&k33, Modulo::ColorPermutation).len(), 2);
        assert_eq!(enumerate_rdr_colorings(&k33, Modulo::ColorPermutationAndAutomorphism).len(), 1);
        let p6 = prism(6).unwrap();
        assert_eq!(enumerate_rdr_colorings(&p6, Modulo::ColorPermutationAndAutomorphism).len(), 1);
        let x3 = xn(3).unwrap();
        let per_color = enumerate_rdr_colorings(&x3, Modulo::ColorPermutation);
        assert_eq!(per_color.len(), 4);
        for side in 0..2 {
            assert_eq!(per_color.iter().filter(|w| w.colored_side == Some(side)).count(), 2);
        }
        // all four are related by automorphisms of X_3
        let classes = enumerate_rdr_colorings(&x3, Modulo::ColorPermutationAndAutomorphism);
        assert_eq!(classes.len(), 1);
        for w in &per_color {
            w.check(&x3).unwrap();
            assert!(check_six_cycle_pattern(&x3, w));
        }
        assert!(enumerate_rdr_colorings(&prism(4).unwrap(), Modulo::ColorPermutation).is_empty());
    }

    #[test]
    fn disconnected_graphs() {
        let g = complete_bipartite(3).unwrap().disjoint_union(&complete_bipartite(3).unwrap());
        let w = is_d_rdr(&g).unwrap();
        w.check(&g).unwrap();
        // 2 sides per component, 3! relative color alignments of the second
        assert_eq!(enumerate_rdr_colorings(&g, Modulo::ColorPermutation).len(), 2 * 2 * 6);
        assert_eq!(gamma_rk(&g, 3).unwrap().0, 6);
    }

    #[test]
    fn six_cycle_pattern() {
        let g = htg(3, 6, 3).unwrap();
        let w = is_d_rdr(&g).unwrap();
        assert!(check_six_cycle_pattern(&g, &w));
        let c = cycles_of_length(&g, 6)[0].clone();
        let mut labels = w.labels();
        let (a, b) = if labels[c[0]] == 0 { (c[1], c[3]) } else { (c[0], c[2]) };
        labels[b] = labels[a];
        let bad = RdrWitness::from_labels(&g, 3, &labels);
        assert!(!check_six_cycle_pattern(&g, &bad));
        // no 6-cycles at all
        let p = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let any = RdrWitness::from_coloring(&p, RainbowAssignment::empty(4, 3).unwrap());
        assert!(check_six_cycle_pattern(&p, &any));
    }
}
