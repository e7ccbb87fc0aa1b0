//! Automorphism groups, orbits, blocks, semiregular subgroups and quotient
//! graphs.

mod criteria;
mod perm;

pub use criteria::{check_krit1, check_krit2, krit1_witnesses, Criterion, Krit1Witness, Krit2Witness, Precondition};
pub use perm::{Permutation, PermutationGroup, ELEMENT_CAP};

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{automorphism_generators, Graph};
use perm::ElementTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("image list is not a permutation")]
    NotAPermutation,
    #[error("permutation degrees disagree")]
    DegreeMismatch,
    #[error("group of order {order} exceeds the element cap {cap}")]
    GroupTooLarge { order: u128, cap: usize },
    #[error("group is not transitive")]
    Intransitive,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// The full automorphism group.
pub fn automorphism_group(g: &Graph) -> PermutationGroup {
    let gens = automorphism_generators(g)
        .into_iter()
        .map(|p| Permutation::new(p).expect("automorphisms are permutations"))
        .collect();
    PermutationGroup::new(g.order(), gens).expect("generators have the graph's order")
}

pub fn is_vertex_transitive(g: &Graph) -> bool {
    automorphism_group(g).is_transitive()
}

pub fn orbits(group: &PermutationGroup) -> Vec<Vec<usize>> {
    group.orbits()
}

pub fn stabilizer(group: &PermutationGroup, v: usize) -> PermutationGroup {
    group.stabilizer(v)
}

/// Graph on the cells of `partition`, two cells adjacent when an edge joins
/// them. The flag is `false` when some edge lies inside a cell.
pub fn quotient_graph(g: &Graph, partition: &[Vec<usize>]) -> Result<(Graph, bool), SymmetryError> {
    let n = g.order();
    let mut cell = vec![usize::MAX; n];
    for (i, c) in partition.iter().enumerate() {
        if c.is_empty() {
            return Err(SymmetryError::InvalidPartition(format!("cell {i} is empty")));
        }
        for &v in c {
            if v >= n || cell[v] != usize::MAX {
                return Err(SymmetryError::InvalidPartition(format!("vertex {v} out of range or repeated")));
            }
            cell[v] = i;
        }
    }
    if let Some(v) = cell.iter().position(|&c| c == usize::MAX) {
        return Err(SymmetryError::InvalidPartition(format!("vertex {v} is not covered")));
    }
    let mut simple = true;
    let mut edges = BTreeSet::new();
    for (u, v) in g.edges() {
        let (a, b) = (cell[u], cell[v]);
        if a == b {
            simple = false;
        } else {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let q = Graph::new(partition.len(), edges).expect("deduplicated edges");
    Ok((q, simple))
}

/// All subgroups of order `m` in which every non-identity element is fixed
/// point free, found by joining semiregular cyclic subgroups (at most three
/// generators). Results are sorted by their element sets.
pub fn semiregular_subgroups(group: &PermutationGroup, m: usize) -> Result<Vec<PermutationGroup>, SymmetryError> {
    let n = group.degree();
    if m == 0 || !group.order().is_multiple_of(m as u128) {
        return Ok(Vec::new());
    }
    if m == 1 {
        return Ok(vec![PermutationGroup::trivial(n)]);
    }
    let table = ElementTable::new(group, ELEMENT_CAP)?;
    let fpf: Vec<bool> = table.elements.iter().map(|p| p.fixed_points() == 0).collect();
    // generators of semiregular cyclic subgroups whose order divides m
    let mut cyclic: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<usize>> = HashSet::new();
    for (i, p) in table.elements.iter().enumerate() {
        if !fpf[i] || !m.is_multiple_of(p.order()) {
            continue;
        }
        let ct = p.cycle_type();
        if ct.first() != ct.last() {
            continue;
        }
        let set = table.closure(&[i]);
        if seen_cyclic.insert(set.clone()) {
            cyclic.push((set, i));
        }
    }
    let semiregular = |set: &[usize]| set.iter().all(|&x| x == table.identity() || fpf[x]);
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut gens_of: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut frontier: Vec<(Vec<usize>, Vec<usize>)> = cyclic.iter().map(|(s, g)| (s.clone(), vec![*g])).collect();
    let mut visited: HashSet<Vec<usize>> = frontier.iter().map(|(s, _)| s.clone()).collect();
    for depth in 1..=3 {
        let mut next = Vec::new();
        for (set, gens) in frontier {
            if set.len() == m {
                if found.insert(set.clone()) {
                    gens_of.push((set, gens));
                }
                continue;
            }
            if depth == 3 {
                continue;
            }
            let members: HashSet<usize> = set.iter().copied().collect();
            for (cset, cg) in &cyclic {
                if cset.iter().all(|x| members.contains(x)) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(*cg);
                let joined = table.closure(&g2);
                if m.is_multiple_of(joined.len()) && semiregular(&joined) && visited.insert(joined.clone()) {
                    next.push((joined, g2));
                }
            }
        }
        frontier = next;
    }
    gens_of.sort();
    gens_of
        .into_iter()
        .map(|(_, gens)| {
            let perms = gens.iter().map(|&i| table.elements[i].clone()).collect();
            PermutationGroup::new(n, perms)
        })
        .collect()
}

/// A G-invariant partition into blocks of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    /// Blocks, each sorted, ordered by smallest vertex.
    pub blocks: Vec<Vec<usize>>,
    pub block_size: usize,
    pub index: usize,
}

impl BlockSystem {
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks.iter().position(|b| b.binary_search(&v).is_ok()).expect("partition covers v")
    }

    /// Whether every generator maps blocks onto blocks.
    pub fn is_invariant(&self, group: &PermutationGroup) -> bool {
        let set: HashSet<&Vec<usize>> = self.blocks.iter().collect();
        group.generators().iter().all(|g| {
            self.blocks.iter().all(|b| {
                let mut img: Vec<usize> = b.iter().map(|&v| g.image(v)).collect();
                img.sort_unstable();
                set.contains(&img)
            })
        })
    }
}

fn system_from_block(group: &PermutationGroup, block: Vec<usize>) -> BlockSystem {
    let size = block.len();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([block.clone()]);
    let mut stack = vec![block];
    while let Some(b) = stack.pop() {
        for g in group.generators() {
            let mut img: Vec<usize> = b.iter().map(|&v| g.image(v)).collect();
            img.sort_unstable();
            if seen.insert(img.clone()) {
                stack.push(img);
            }
        }
    }
    let blocks: Vec<Vec<usize>> = seen.into_iter().collect();
    BlockSystem {
        index: blocks.len(),
        block_size: size,
        blocks,
    }
}

/// All block systems of a transitive group with blocks of the given size.
///
/// Blocks containing vertex 0 are the orbits of 0 under the subgroups
/// between the stabilizer of 0 and the whole group; they are enumerated by
/// adding coset representatives to the stabilizer one at a time.
pub fn block_systems(group: &PermutationGroup, size: usize) -> Result<Vec<BlockSystem>, SymmetryError> {
    let n = group.degree();
    if !group.is_transitive() {
        return Err(SymmetryError::Intransitive);
    }
    if size == 0 || !n.is_multiple_of(size) {
        return Ok(Vec::new());
    }
    let stab = group.stabilizer(0);
    let transversal: Vec<Permutation> = (0..n)
        .map(|w| group.transporter(0, w).expect("transitive group"))
        .collect();
    let orbit_of_zero = |gens: &[Permutation]| -> Vec<usize> {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            for g in gens {
                let w = g.image(out[i]);
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    };
    let base: Vec<Permutation> = stab.generators().to_vec();
    let start = orbit_of_zero(&base);
    let mut blocks: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut visited: HashSet<Vec<usize>> = HashSet::from([start.clone()]);
    let mut queue = vec![(start, base)];
    while let Some((block, gens)) = queue.pop() {
        if block.len() == size {
            blocks.insert(block);
            continue;
        }
        for (w, t) in transversal.iter().enumerate().take(n) {
            if block.binary_search(&w).is_ok() {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(t.clone());
            let b2 = orbit_of_zero(&g2);
            if b2.len() <= size && size.is_multiple_of(b2.len()) && visited.insert(b2.clone()) {
                queue.push((b2, g2));
            }
        }
    }
    let systems: Vec<BlockSystem> = blocks.into_iter().map(|b| system_from_block(group, b)).collect();
    debug_assert!(systems.iter().all(|s| s.is_invariant(group)));
    Ok(systems
        .into_iter()
        .filter(|s| s.is_invariant(group) && s.blocks.iter().all(|b| b.len() == size))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete_bipartite, cycle, gp, htg, prism};

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(automorphism_group(&complete_bipartite(3).unwrap()).order(), 72);
        for n in 3..=10 {
            assert_eq!(automorphism_group(&cycle(n).unwrap()).order(), 2 * n as u128);
        }
        assert_eq!(automorphism_group(&htg(3, 6, 3).unwrap()).order(), 216);
        assert_eq!(automorphism_group(&gp(5, 2).unwrap()).order(), 120);
    }

    #[test]
    fn transitivity() {
        assert!(is_vertex_transitive(&prism(6).unwrap()));
        assert!(!is_vertex_transitive(&gp(18, 5).unwrap()));
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!is_vertex_transitive(&p3));
        assert_eq!(orbits(&automorphism_group(&p3)), vec![vec![0, 2], vec![1]]);
        let c6 = automorphism_group(&cycle(6).unwrap());
        assert_eq!(stabilizer(&c6, 0).order(), 2);
        assert_eq!(orbits(&c6), vec![(0..6).collect::<Vec<_>>()]);
    }

    #[test]
    fn quotients() {
        let k33 = complete_bipartite(3).unwrap();
        let singletons: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
        assert_eq!(quotient_graph(&k33, &singletons).unwrap(), (k33.clone(), true));
        let c6 = cycle(6).unwrap();
        let (q, simple) = quotient_graph(&c6, &[vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap();
        assert_eq!(q, cycle(3).unwrap());
        assert!(simple);
        let (_, simple) = quotient_graph(&c6, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert!(!simple);
        assert!(quotient_graph(&c6, &[vec![0, 1]]).is_err());
        assert!(quotient_graph(&c6, &[vec![0, 1, 2, 3, 4, 5], vec![0]]).is_err());
    }

    #[test]
    fn prism_antipodal_quotient() {
        let g = prism(6).unwrap();
        let subs = semiregular_subgroups(&automorphism_group(&g), 2).unwrap();
        assert!(!subs.is_empty());
        for h in &subs {
            let orbs = h.orbits();
            assert!(orbs.iter().all(|o| o.len() == 2));
            let (q, simple) = quotient_graph(&g, &orbs).unwrap();
            assert_eq!(q.order(), 6);
            let _ = simple;
        }
        assert!(subs.iter().any(|h| {
            let (_, simple) = quotient_graph(&g, &h.orbits()).unwrap();
            simple
        }));
    }

    #[test]
    fn semiregular_edge_cases() {
        let grp = automorphism_group(&complete_bipartite(3).unwrap());
        let trivial = semiregular_subgroups(&grp, 1).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial[0].order(), 1);
        assert!(semiregular_subgroups(&grp, 5).unwrap().is_empty());
        for h in semiregular_subgroups(&grp, 3).unwrap() {
            assert_eq!(h.order(), 3);
            for p in h.elements(100).unwrap() {
                assert!(p.is_identity() || p.fixed_points() == 0);
            }
        }
    }

    #[test]
    fn block_systems_of_cycle() {
        let g = automorphism_group(&cycle(6).unwrap());
        let s3 = block_systems(&g, 3).unwrap();
        assert_eq!(s3.len(), 1);
        assert_eq!(s3[0].blocks, vec![vec![0, 2, 4], vec![1, 3, 5]]);
        assert_eq!(block_systems(&g, 1).unwrap()[0].index, 6);
        assert_eq!(block_systems(&g, 6).unwrap()[0].blocks, vec![(0..6).collect::<Vec<_>>()]);
        assert!(block_systems(&g, 4).unwrap().is_empty());
        let p3 = automorphism_group(&Graph::new(3, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(block_systems(&p3, 1), Err(SymmetryError::Intransitive));
    }

    #[test]
    fn block_systems_match_brute_force() {
        // every partition of C8 and the cube into equal blocks, checked directly
        for g in [cycle(8).unwrap(), prism(4).unwrap()] {
            let grp = automorphism_group(&g);
            let els = grp.elements(ELEMENT_CAP).unwrap();
            for size in [2, 4] {
                let found: BTreeSet<Vec<Vec<usize>>> =
                    block_systems(&grp, size).unwrap().into_iter().map(|s| s.blocks).collect();
                let mut expected = BTreeSet::new();
                for mask in 0u32..(1 << 8) {
                    if mask & 1 == 0 || mask.count_ones() as usize != size {
                        continue;
                    }
                    let block: Vec<usize> = (0..8).filter(|&v| mask >> v & 1 == 1).collect();
                    let images: BTreeSet<Vec<usize>> = els
                        .iter()
                        .map(|p| {
                            let mut b: Vec<usize> = block.iter().map(|&v| p.image(v)).collect();
                            b.sort_unstable();
                            b
                        })
                        .collect();
                    let disjoint = images.iter().all(|a| {
                        images.iter().all(|b| a == b || a.iter().all(|x| b.binary_search(x).is_err()))
                    });
                    if disjoint {
                        expected.insert(images.into_iter().collect::<Vec<_>>());
                    }
                }
                assert_eq!(found, expected, "size {size}");
            }
        }
    }
}
