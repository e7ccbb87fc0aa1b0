//! Canonical labeling, isomorphism and automorphism generators by
//! individualization-refinement.
//!
//! The search tree is explored depth first. Every node carries an ordered
//! partition refined to equitability; the refinement trace is hashed into a
//! node invariant. Leaves are compared by `(trace sequence, relabeled
//! adjacency)`, and the greatest leaf defines the canonical labeling. Leaves
//! equivalent to the first or best leaf yield automorphisms, which prune
//! the rest of the tree through orbits of the pointwise stabilizer of the
//! current prefix.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Graph;

/// Canonically relabeled edge list together with the relabeling used.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// Canonical edges `(u, v)`, `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// `labeling[v]` is the canonical position of input vertex `v`.
    pub labeling: Vec<usize>,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.labeling.len()
    }

    pub fn graph(&self) -> Graph {
        Graph::new(self.order(), self.edges.iter().copied()).expect("canonical edges are simple")
    }

    /// Order-independent fingerprint: graph6 text of the canonical graph.
    pub fn fingerprint(&self) -> String {
        crate::graph6::encode(&self.graph())
    }
}

/// Result of a full search: canonical labeling plus automorphism generators.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub form: CanonicalForm,
    pub generators: Vec<Vec<usize>>,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    search(g, None).form
}

/// Canonical form invariant under relabelings that preserve `colors`
/// (vertex colors are compared by value).
pub fn canonical_form_colored(g: &Graph, colors: &[usize]) -> CanonicalForm {
    search(g, Some(colors)).form
}

/// Generators of the automorphism group, as image vectors.
pub fn automorphism_generators(g: &Graph) -> Vec<Vec<usize>> {
    search(g, None).generators
}

/// A vertex bijection `phi` with `{u,v} ∈ E(g1) ⇔ {phi[u],phi[v]} ∈ E(g2)`,
/// if one exists. The witness is verified before being returned.
pub fn isomorphism(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    if g1.order() != g2.order() || g1.size() != g2.size() {
        return None;
    }
    let mut d1: Vec<usize> = (0..g1.order()).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..g2.order()).map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return None;
    }
    let c1 = canonical_form(g1);
    let c2 = canonical_form(g2);
    if c1.edges != c2.edges {
        return None;
    }
    let mut inv2 = vec![0; g2.order()];
    for (v, &p) in c2.labeling.iter().enumerate() {
        inv2[p] = v;
    }
    let phi: Vec<usize> = c1.labeling.iter().map(|&p| inv2[p]).collect();
    let ok = g1.edges().all(|(u, v)| g2.has_edge(phi[u], phi[v]));
    assert!(ok, "canonical forms agree but the derived bijection is not an isomorphism");
    Some(phi)
}

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    isomorphism(g1, g2).is_some()
}

/// Runs the search with an optional initial vertex coloring.
pub fn search(g: &Graph, colors: Option<&[usize]>) -> SearchOutcome {
    let n = g.order();
    if n == 0 {
        return SearchOutcome {
            form: CanonicalForm {
                edges: Vec::new(),
                labeling: Vec::new(),
            },
            generators: Vec::new(),
        };
    }
    let mut root = Partition::new(n, colors);
    let queue: Vec<usize> = root.cell_starts();
    root.refine(g, queue);
    let mut s = Search {
        g,
        n,
        words: n.div_ceil(64),
        first: None,
        best: None,
        autos: Vec::new(),
    };
    let mut prefix = Vec::new();
    let mut traces = Vec::new();
    s.visit(&root, &mut prefix, &mut traces);
    let best = s.best.expect("search reaches at least one leaf");
    let mut labeling = vec![0; n];
    for (p, &v) in best.lab.iter().enumerate() {
        labeling[v] = p;
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (labeling[u], labeling[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    SearchOutcome {
        form: CanonicalForm { edges, labeling },
        generators: s.autos,
    }
}

#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    /// start position of the cell holding each vertex
    cell_of: Vec<usize>,
    /// end position (exclusive), indexed by cell start
    cell_end: Vec<usize>,
    cells: usize,
}

const HASH_SEED: u64 = 0xcbf2_9ce4_8422_2325;

fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Partition {
    fn new(n: usize, colors: Option<&[usize]>) -> Self {
        let mut lab: Vec<usize> = (0..n).collect();
        let mut cell_of = vec![0; n];
        let mut cell_end = vec![0; n];
        let mut cells = 0;
        match colors {
            None => {
                cell_end[0] = n;
                cells = 1;
            }
            Some(c) => {
                lab.sort_by_key(|&v| (c[v], v));
                let mut start = 0;
                while start < n {
                    let mut end = start + 1;
                    while end < n && c[lab[end]] == c[lab[start]] {
                        end += 1;
                    }
                    for &v in &lab[start..end] {
                        cell_of[v] = start;
                    }
                    cell_end[start] = end;
                    cells += 1;
                    start = end;
                }
            }
        }
        Partition {
            lab,
            cell_of,
            cell_end,
            cells,
        }
    }

    fn cell_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.lab.len() {
            out.push(s);
            s = self.cell_end[s];
        }
        out
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    fn target_cell(&self) -> Option<usize> {
        let mut s = 0;
        while s < self.lab.len() {
            if self.cell_end[s] - s > 1 {
                return Some(s);
            }
            s = self.cell_end[s];
        }
        None
    }

    /// Refines to the coarsest equitable refinement; returns the trace hash.
    fn refine(&mut self, g: &Graph, initial: Vec<usize>) -> u64 {
        let n = self.lab.len();
        let mut in_queue = vec![false; n];
        let mut queue = std::collections::VecDeque::with_capacity(n);
        for s in initial {
            in_queue[s] = true;
            queue.push_back(s);
        }
        let mut count = vec![0u32; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut touched_cells: Vec<usize> = Vec::new();
        let mut h = HASH_SEED;
        while let Some(ws) = queue.pop_front() {
            in_queue[ws] = false;
            let we = self.cell_end[ws];
            touched.clear();
            for i in ws..we {
                for &y in g.neighbors(self.lab[i]) {
                    if count[y] == 0 {
                        touched.push(y);
                    }
                    count[y] += 1;
                }
            }
            touched_cells.clear();
            touched_cells.extend(touched.iter().map(|&y| self.cell_of[y]));
            touched_cells.sort_unstable();
            touched_cells.dedup();
            h = mix(h, ws as u64);
            for &cs in &touched_cells {
                let ce = self.cell_end[cs];
                if ce - cs == 1 {
                    h = mix(h, (cs as u64) << 32 | count[self.lab[cs]] as u64);
                    continue;
                }
                let slice = &mut self.lab[cs..ce];
                slice.sort_by_key(|&v| count[v]);
                let lo = count[slice[0]];
                let hi = count[slice[slice.len() - 1]];
                if lo == hi {
                    h = mix(h, (cs as u64) << 32 | lo as u64);
                    continue;
                }
                // split into pieces of equal count
                let mut pieces = Vec::new();
                let mut start = cs;
                for i in cs + 1..=ce {
                    if i == ce || count[self.lab[i]] != count[self.lab[start]] {
                        pieces.push((start, i));
                        h = mix(h, (start as u64) << 40 | ((i - start) as u64) << 20 | count[self.lab[start]] as u64);
                        start = i;
                    }
                }
                for &(ps, pe) in &pieces {
                    self.cell_end[ps] = pe;
                    for i in ps..pe {
                        self.cell_of[self.lab[i]] = ps;
                    }
                }
                self.cells += pieces.len() - 1;
                if in_queue[cs] {
                    for &(ps, _) in &pieces[1..] {
                        in_queue[ps] = true;
                        queue.push_back(ps);
                    }
                } else {
                    let largest = pieces
                        .iter()
                        .enumerate()
                        .max_by_key(|&(i, &(ps, pe))| (pe - ps, std::cmp::Reverse(i)))
                        .map(|(i, _)| i)
                        .unwrap();
                    for (i, &(ps, _)) in pieces.iter().enumerate() {
                        if i != largest {
                            in_queue[ps] = true;
                            queue.push_back(ps);
                        }
                    }
                }
            }
            for &y in &touched {
                count[y] = 0;
            }
        }
        mix(h, self.cells as u64)
    }

    fn individualize(&mut self, g: &Graph, v: usize) -> u64 {
        let cs = self.cell_of[v];
        let ce = self.cell_end[cs];
        let i = (cs..ce).find(|&i| self.lab[i] == v).expect("vertex in its cell");
        self.lab.swap(cs, i);
        self.cell_end[cs] = cs + 1;
        self.cell_end[cs + 1] = ce;
        for j in cs + 1..ce {
            self.cell_of[self.lab[j]] = cs + 1;
        }
        self.cells += 1;
        self.refine(g, vec![cs])
    }
}

struct Leaf {
    lab: Vec<usize>,
    cert: Vec<u64>,
    traces: Vec<u64>,
    prefix: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    words: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

fn cmp_prefix(a: &[u64], b: &[u64]) -> Ordering {
    let k = a.len().min(b.len());
    match a[..k].cmp(&b[..k]) {
        Ordering::Equal if a.len() > b.len() => Ordering::Greater,
        o => o,
    }
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn certificate(&self, lab: &[usize]) -> Vec<u64> {
        let mut pos = vec![0; self.n];
        for (p, &v) in lab.iter().enumerate() {
            pos[v] = p;
        }
        let mut cert = vec![0u64; self.n * self.words];
        for (p, &v) in lab.iter().enumerate() {
            let row = &mut cert[p * self.words..(p + 1) * self.words];
            for &w in self.g.neighbors(v) {
                let q = pos[w];
                row[q / 64] |= 1u64 << (63 - q % 64);
            }
        }
        cert
    }

    fn record_auto(&mut self, from: &[usize], to: &[usize]) {
        let mut perm = vec![0; self.n];
        for (p, &v) in from.iter().enumerate() {
            perm[v] = to[p];
        }
        if perm.iter().enumerate().any(|(i, &j)| i != j) {
            debug_assert!(self
                .g
                .edges()
                .all(|(u, v)| self.g.has_edge(perm[u], perm[v])));
            self.autos.push(perm);
        }
    }

    /// Orbit representatives under the found automorphisms that fix `prefix`.
    fn stabilizer_orbits(&self, prefix: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in &self.autos {
            if prefix.iter().all(|&v| a[v] == v) {
                for (i, &j) in a.iter().enumerate() {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        (0..self.n).map(|i| find(&mut parent, i)).collect()
    }

    fn leaf(&mut self, part: &Partition, prefix: &[usize], traces: &[u64]) -> Option<usize> {
        let cert = self.certificate(&part.lab);
        let leaf = Leaf {
            lab: part.lab.clone(),
            cert,
            traces: traces.to_vec(),
            prefix: prefix.to_vec(),
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                lab: leaf.lab.clone(),
                cert: leaf.cert.clone(),
                traces: leaf.traces.clone(),
                prefix: leaf.prefix.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.traces == leaf.traces && first.cert == leaf.cert {
            let from = first.lab.clone();
            let back = common_prefix(prefix, &first.prefix);
            self.record_auto(&from, &leaf.lab);
            return Some(back);
        }
        let best = self.best.as_ref().unwrap();
        let ord = leaf
            .traces
            .cmp(&best.traces)
            .then_with(|| leaf.cert.cmp(&best.cert));
        match ord {
            Ordering::Greater => {
                self.best = Some(leaf);
                None
            }
            Ordering::Equal => {
                let from = best.lab.clone();
                let back = common_prefix(prefix, &best.prefix);
                self.record_auto(&from, &leaf.lab);
                Some(back)
            }
            Ordering::Less => None,
        }
    }

    fn visit(&mut self, part: &Partition, prefix: &mut Vec<usize>, traces: &mut Vec<u64>) -> Option<usize> {
        if part.is_discrete() {
            return self.leaf(part, prefix, traces);
        }
        let level = prefix.len();
        let cs = part.target_cell().expect("non-discrete partition has a target cell");
        let mut candidates: Vec<usize> = part.lab[cs..part.cell_end[cs]].to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        let mut orbits: Vec<usize> = Vec::new();
        let mut autos_seen = usize::MAX;
        for v in candidates {
            if !explored.is_empty() {
                if autos_seen != self.autos.len() {
                    orbits = self.stabilizer_orbits(prefix);
                    autos_seen = self.autos.len();
                }
                if explored.iter().any(|&u| orbits[u] == orbits[v]) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = part.clone();
            let h = child.individualize(self.g, v);
            traces.push(h);
            prefix.push(v);
            let eq_first = self
                .first
                .as_ref()
                .is_some_and(|f| cmp_prefix(traces, &f.traces) == Ordering::Equal);
            let below_best = self
                .best
                .as_ref()
                .is_some_and(|b| cmp_prefix(traces, &b.traces) == Ordering::Less);
            let jump = if below_best && !eq_first {
                None
            } else {
                self.visit(&child, prefix, traces)
            };
            prefix.pop();
            traces.pop();
            if let Some(t) = jump {
                if t < level {
                    return Some(t);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn k33() -> Graph {
        Graph::new(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j)))).unwrap()
    }

    fn prism3() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap()
    }

    fn brute_automorphisms(g: &Graph) -> usize {
        (0..g.order())
            .permutations(g.order())
            .filter(|p| g.edges().all(|(u, v)| g.has_edge(p[u], p[v])))
            .count()
    }

    fn group_order(gens: &[Vec<usize>], n: usize) -> usize {
        let id: Vec<usize> = (0..n).collect();
        let mut seen = std::collections::HashSet::from([id.clone()]);
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn relabeling_invariance_on_c4() {
        let c4 = cycle(4);
        let base = canonical_form(&c4);
        for p in (0..4).permutations(4) {
            assert_eq!(canonical_form(&c4.relabel(&p).unwrap()).edges, base.edges);
        }
    }

    #[test]
    fn distinguishes_k33_from_prism() {
        assert_ne!(canonical_form(&k33()).edges, canonical_form(&prism3()).edges);
        assert!(!is_isomorphic(&k33(), &prism3()));
        assert!(!is_isomorphic(&cycle(6), &k33()));
    }

    #[test]
    fn automorphism_generators_generate_full_group() {
        assert_eq!(group_order(&automorphism_generators(&k33()), 6), 72);
        assert_eq!(group_order(&automorphism_generators(&prism3()), 6), 12);
        for n in 3..9 {
            assert_eq!(group_order(&automorphism_generators(&cycle(n)), n), 2 * n);
        }
        let petersen = Graph::new(
            10,
            (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]),
        )
        .unwrap();
        assert_eq!(group_order(&automorphism_generators(&petersen), 10), 120);
    }

    #[test]
    fn colored_search_respects_colors() {
        let c4 = cycle(4);
        let a = canonical_form_colored(&c4, &[0, 0, 1, 1]);
        let b = canonical_form_colored(&c4, &[0, 1, 0, 1]);
        // the two colorings are not equivalent, but each is invariant under
        // color-preserving relabelings
        let c = canonical_form_colored(&c4.relabel(&[1, 2, 3, 0]).unwrap(), &[1, 0, 0, 1]);
        assert_eq!(a.edges, c.edges);
        let _ = b;
    }

    #[test]
    fn brute_force_agreement_small_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let edges: Vec<(usize, usize)> = (0..n)
                .tuple_combinations()
                .filter(|_| rng.gen_bool(0.45))
                .collect();
            let g = Graph::new(n, edges).unwrap();
            let gens = automorphism_generators(&g);
            assert_eq!(group_order(&gens, n), brute_automorphisms(&g), "{g:?}");
            let p: Vec<usize> = {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            };
            let h = g.relabel(&p).unwrap();
            assert_eq!(canonical_form(&g).edges, canonical_form(&h).edges);
        }
    }
}
