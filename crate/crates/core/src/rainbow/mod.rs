//! Rainbow dominating functions: validation, exact optimization and the
//! d-RDR decision.
//!
//! Colors are numbered `1..=k` in the public interface and stored as bit
//! masks (color `c` is bit `c - 1`).

mod bnb;
mod oracle;
mod rdr;

pub use bnb::{gamma_rk, gamma_rk_budgeted, greedy_rdf, Gamma};
pub use oracle::{gamma_rk_oracle, oracle_envelope};
pub use rdr::{
    check_six_cycle_pattern, decide_rdr, enumerate_rdr_colorings, is_d_rdr, Modulo, RdrDecision, RdrWitness,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Largest supported palette.
pub const MAX_PALETTE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RainbowError {
    #[error("palette of {0} colors exceeds the supported maximum of {MAX_PALETTE}")]
    PaletteTooLarge(usize),
    #[error("vertex {vertex} uses a color outside 1..={k}")]
    PaletteMismatch { vertex: usize, k: usize },
    #[error("assignment covers {found} vertices, graph has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("exhaustive search refused: order {n} with {k} colors is outside the envelope (max order {max})")]
    OutsideEnvelope { n: usize, k: usize, max: usize },
}

/// A function `f: V -> 2^{1..k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "AssignmentRepr", try_from = "AssignmentRepr")]
pub struct RainbowAssignment {
    k: usize,
    masks: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct AssignmentRepr {
    k: usize,
    weight: usize,
    colors: BTreeMap<String, Vec<usize>>,
}

impl From<RainbowAssignment> for AssignmentRepr {
    fn from(f: RainbowAssignment) -> Self {
        AssignmentRepr {
            k: f.k,
            weight: f.weight(),
            colors: (0..f.len()).map(|v| (v.to_string(), f.colors(v))).collect(),
        }
    }
}

impl TryFrom<AssignmentRepr> for RainbowAssignment {
    type Error = String;

    fn try_from(r: AssignmentRepr) -> Result<Self, String> {
        let n = r.colors.len();
        let mut sets = vec![None; n];
        for (key, c) in r.colors {
            match key.parse::<usize>() {
                Ok(v) if v < n => sets[v] = Some(c),
                _ => return Err(format!("vertex keys must be 0..{n}, found {key:?}")),
            }
        }
        let sets: Vec<Vec<usize>> = sets.into_iter().map(Option::unwrap_or_default).collect();
        let f = RainbowAssignment::from_sets(r.k, &sets).map_err(|e| e.to_string())?;
        if f.weight() != r.weight {
            return Err(format!("stored weight {} differs from recomputed {}", r.weight, f.weight()));
        }
        Ok(f)
    }
}

fn check_palette(k: usize) -> Result<(), RainbowError> {
    if k > MAX_PALETTE {
        Err(RainbowError::PaletteTooLarge(k))
    } else {
        Ok(())
    }
}

pub(crate) fn full_mask(k: usize) -> u32 {
    ((1u64 << k) - 1) as u32
}

impl RainbowAssignment {
    /// The assignment `f ≡ ∅` on `n` vertices.
    pub fn empty(n: usize, k: usize) -> Result<Self, RainbowError> {
        check_palette(k)?;
        Ok(RainbowAssignment { k, masks: vec![0; n] })
    }

    /// Builds from bit masks (bit `c - 1` for color `c`).
    pub fn from_masks(k: usize, masks: Vec<u32>) -> Result<Self, RainbowError> {
        check_palette(k)?;
        if let Some(v) = masks.iter().position(|&m| m & !full_mask(k) != 0) {
            return Err(RainbowError::PaletteMismatch { vertex: v, k });
        }
        Ok(RainbowAssignment { k, masks })
    }

    /// Builds from explicit color lists with colors in `1..=k`.
    pub fn from_sets(k: usize, sets: &[Vec<usize>]) -> Result<Self, RainbowError> {
        check_palette(k)?;
        let mut masks = Vec::with_capacity(sets.len());
        for (v, set) in sets.iter().enumerate() {
            let mut m = 0u32;
            for &c in set {
                if c == 0 || c > k {
                    return Err(RainbowError::PaletteMismatch { vertex: v, k });
                }
                m |= 1 << (c - 1);
            }
            masks.push(m);
        }
        Ok(RainbowAssignment { k, masks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn mask(&self, v: usize) -> u32 {
        self.masks[v]
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    /// Sorted colors of vertex `v`.
    pub fn colors(&self, v: usize) -> Vec<usize> {
        (0..self.k).filter(|&c| self.masks[v] >> c & 1 == 1).map(|c| c + 1).collect()
    }

    /// `w(f) = Σ |f(v)|`.
    pub fn weight(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }
}

/// Whether every vertex with `f(v) = ∅` sees all `k` colors on its
/// neighbors.
pub fn validate_rdf(g: &Graph, f: &RainbowAssignment) -> Result<bool, RainbowError> {
    if f.len() != g.order() {
        return Err(RainbowError::LengthMismatch {
            expected: g.order(),
            found: f.len(),
        });
    }
    let full = full_mask(f.k);
    if let Some(v) = f.masks.iter().position(|&m| m & !full != 0) {
        return Err(RainbowError::PaletteMismatch { vertex: v, k: f.k });
    }
    Ok((0..g.order()).all(|v| {
        f.masks[v] != 0 || g.neighbors(v).iter().fold(0, |acc, &u| acc | f.masks[u]) == full
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete_bipartite, cycle};

    #[test]
    fn complete_bipartite_side_coloring() {
        let g = complete_bipartite(3).unwrap();
        let f = RainbowAssignment::from_sets(3, &[vec![1], vec![2], vec![3], vec![], vec![], vec![]]).unwrap();
        assert!(validate_rdf(&g, &f).unwrap());
        assert_eq!(f.weight(), 3);
    }

    #[test]
    fn full_palette_is_always_valid() {
        let g = cycle(5).unwrap();
        let f = RainbowAssignment::from_masks(4, vec![0b1111; 5]).unwrap();
        assert!(validate_rdf(&g, &f).unwrap());
    }

    #[test]
    fn empty_function_fails() {
        let g = cycle(4).unwrap();
        let f = RainbowAssignment::empty(4, 2).unwrap();
        assert!(!validate_rdf(&g, &f).unwrap());
    }

    #[test]
    fn palette_and_length_errors() {
        assert_eq!(
            RainbowAssignment::from_sets(2, &[vec![3]]).unwrap_err(),
            RainbowError::PaletteMismatch { vertex: 0, k: 2 }
        );
        assert!(RainbowAssignment::from_masks(2, vec![0b100]).is_err());
        let f = RainbowAssignment::empty(3, 2).unwrap();
        assert!(matches!(
            validate_rdf(&cycle(4).unwrap(), &f),
            Err(RainbowError::LengthMismatch { .. })
        ));
        assert!(RainbowAssignment::empty(3, 40).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = RainbowAssignment::from_sets(3, &[vec![1, 3], vec![], vec![2]]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"weight\":3"));
        let back: RainbowAssignment = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let tampered = s.replace("\"weight\":3", "\"weight\":4");
        assert!(serde_json::from_str::<RainbowAssignment>(&tampered).is_err());
    }
}
