//! Group-theoretic sufficient conditions for a vertex-transitive graph to be
//! d-RDR. Each check reports a witness, the absence of one, or the first
//! failed precondition; absence of a witness says nothing about RDR-ness.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::{automorphism_group, block_systems, quotient_graph, semiregular_subgroups};
use super::{BlockSystem, Permutation, PermutationGroup, SymmetryError};
use crate::families::complete_bipartite;
use crate::graph::{is_isomorphic, Graph};
use crate::rainbow::{RainbowAssignment, RdrWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precondition {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not regular of positive degree")]
    NotRegular,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("order {n} is not divisible by 2d = {}", 2 * d)]
    OrderNotDivisible { n: usize, d: usize },
    #[error("graph is not vertex-transitive")]
    NotVertexTransitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "kebab-case")]
pub enum Criterion<W> {
    Witness(W),
    NoWitness,
    PreconditionFailed(Precondition),
}

impl<W> Criterion<W> {
    pub fn witness(&self) -> Option<&W> {
        match self {
            Criterion::Witness(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Krit1Witness {
    pub generators: Vec<Permutation>,
    pub orbits: Vec<Vec<usize>>,
    pub coloring: RdrWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Krit2Witness {
    pub system: BlockSystem,
    pub block: Vec<usize>,
    pub vertex: usize,
    pub coloring: RdrWitness,
}

fn preconditions(g: &Graph) -> Result<(usize, PermutationGroup), Precondition> {
    let n = g.order();
    if n == 0 {
        return Err(Precondition::Empty);
    }
    let d = match g.regular_degree() {
        Some(d) if d > 0 => d,
        _ => return Err(Precondition::NotRegular),
    };
    if !g.is_connected() {
        return Err(Precondition::Disconnected);
    }
    if g.bipartition().is_none() {
        return Err(Precondition::NotBipartite);
    }
    if !n.is_multiple_of(2 * d) {
        return Err(Precondition::OrderNotDivisible { n, d });
    }
    let aut = automorphism_group(g);
    if !aut.is_transitive() {
        return Err(Precondition::NotVertexTransitive);
    }
    Ok((d, aut))
}

/// Colors the vertices of `cells[i]` with color `i + 1`.
fn color_cells(g: &Graph, d: usize, cells: &[&Vec<usize>]) -> RdrWitness {
    let mut masks = vec![0u32; g.order()];
    for (i, cell) in cells.iter().enumerate() {
        for &v in cell.iter() {
            masks[v] = 1 << i;
        }
    }
    RdrWitness::from_coloring(g, RainbowAssignment::from_masks(d, masks).expect("d colors"))
}

/// Every semiregular subgroup of order `n/2d` whose orbit quotient is a
/// simple `K_{d,d}`, with the coloring it induces.
pub fn krit1_witnesses(g: &Graph) -> Result<Criterion<Vec<Krit1Witness>>, SymmetryError> {
    let (d, aut) = match preconditions(g) {
        Ok(x) => x,
        Err(p) => return Ok(Criterion::PreconditionFailed(p)),
    };
    let kdd = complete_bipartite(d).expect("d >= 1");
    let mut out = Vec::new();
    for h in semiregular_subgroups(&aut, g.order() / (2 * d))? {
        let orbits = h.orbits();
        let (q, simple) = quotient_graph(g, &orbits)?;
        if !simple || !is_isomorphic(&q, &kdd) {
            continue;
        }
        // orbits are ordered by smallest vertex, so cell 0 holds vertex 0
        let colored: Vec<&Vec<usize>> = q.neighbors(0).iter().map(|&c| &orbits[c]).collect();
        let coloring = color_cells(g, d, &colored);
        out.push(Krit1Witness {
            generators: h.generators().to_vec(),
            orbits,
            coloring,
        });
    }
    Ok(if out.is_empty() {
        Criterion::NoWitness
    } else {
        Criterion::Witness(out)
    })
}

pub fn check_krit1(g: &Graph) -> Result<Criterion<Krit1Witness>, SymmetryError> {
    Ok(match krit1_witnesses(g)? {
        Criterion::Witness(mut all) => Criterion::Witness(all.swap_remove(0)),
        Criterion::NoWitness => Criterion::NoWitness,
        Criterion::PreconditionFailed(p) => Criterion::PreconditionFailed(p),
    })
}

/// Looks for a block `B` of size `n/2d` inside one bipartition side and a
/// vertex `v ∈ B` whose neighbors lie in exactly `d` distinct blocks.
pub fn check_krit2(g: &Graph) -> Result<Criterion<Krit2Witness>, SymmetryError> {
    let (d, aut) = match preconditions(g) {
        Ok(x) => x,
        Err(p) => return Ok(Criterion::PreconditionFailed(p)),
    };
    let sides = g.bipartition().expect("checked bipartite");
    for system in block_systems(&aut, g.order() / (2 * d))? {
        for block in &system.blocks {
            let side = sides.side_of(block[0]);
            if block.iter().any(|&v| sides.side_of(v) != side) {
                continue;
            }
            for &v in block {
                let met: BTreeSet<usize> = g.neighbors(v).iter().map(|&w| system.block_of(w)).collect();
                if met.len() != d {
                    continue;
                }
                let colored: Vec<&Vec<usize>> = met.iter().map(|&b| &system.blocks[b]).collect();
                let coloring = color_cells(g, d, &colored);
                return Ok(Criterion::Witness(Krit2Witness {
                    block: block.clone(),
                    vertex: v,
                    coloring,
                    system,
                }));
            }
        }
    }
    Ok(Criterion::NoWitness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{gp, htg, prism, xn};

    /// Levi graph of the 15 duads and 15 synthemes of {0..5}.
    fn tutte_coxeter() -> Graph {
        let duads: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        let mut synthemes = BTreeSet::new();
        for &p in &duads {
            for &q in &duads {
                for &r in &duads {
                    let mut pts = vec![p.0, p.1, q.0, q.1, r.0, r.1];
                    pts.sort_unstable();
                    pts.dedup();
                    if pts.len() == 6 {
                        let mut s = vec![p, q, r];
                        s.sort_unstable();
                        synthemes.insert(s);
                    }
                }
            }
        }
        let synthemes: Vec<_> = synthemes.into_iter().collect();
        assert_eq!(synthemes.len(), 15);
        let mut edges = Vec::new();
        for (i, d) in duads.iter().enumerate() {
            for (j, s) in synthemes.iter().enumerate() {
                if s.contains(d) {
                    edges.push((i, 15 + j));
                }
            }
        }
        Graph::new(30, edges).unwrap()
    }

    #[test]
    fn krit1_examples() {
        let k33 = complete_bipartite(3).unwrap();
        let w = check_krit1(&k33).unwrap();
        let w = w.witness().expect("trivial subgroup works");
        assert!(w.generators.is_empty());
        w.coloring.check(&k33).unwrap();
        let p6 = prism(6).unwrap();
        check_krit1(&p6).unwrap().witness().unwrap().coloring.check(&p6).unwrap();
        assert_eq!(
            check_krit1(&gp(18, 5).unwrap()).unwrap(),
            Criterion::PreconditionFailed(Precondition::NotVertexTransitive)
        );
        assert_eq!(
            check_krit1(&gp(5, 2).unwrap()).unwrap(),
            Criterion::PreconditionFailed(Precondition::NotBipartite)
        );
    }

    #[test]
    fn x3_meets_krit1_twice() {
        let x3 = xn(3).unwrap();
        let Criterion::Witness(all) = krit1_witnesses(&x3).unwrap() else {
            panic!("X_3 satisfies the subgroup condition");
        };
        assert!(all.len() >= 2);
        for w in &all {
            w.coloring.check(&x3).unwrap();
        }
    }

    #[test]
    fn krit2_examples() {
        let k33 = complete_bipartite(3).unwrap();
        let w = check_krit2(&k33).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.system.block_size, 1);
        w.coloring.check(&k33).unwrap();
        let pappus = htg(3, 6, 3).unwrap();
        check_krit2(&pappus).unwrap().witness().unwrap().coloring.check(&pappus).unwrap();
    }

    #[test]
    fn tutte_coxeter_has_no_witness() {
        let g = tutte_coxeter();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(automorphism_group(&g).order(), 1440);
        assert_eq!(check_krit2(&g).unwrap(), Criterion::NoWitness);
        assert_eq!(check_krit1(&g).unwrap(), Criterion::NoWitness);
        assert!(crate::rainbow::is_d_rdr(&g).is_none());
    }
}
