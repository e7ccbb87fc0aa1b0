//! Plain exhaustive search for `γ_rk`, kept deliberately simple.

use super::{check_palette, full_mask, RainbowAssignment, RainbowError};
use crate::graph::Graph;

/// Largest order the exhaustive search accepts for palette size `k`.
pub fn oracle_envelope(k: usize) -> usize {
    match k {
        0 => usize::MAX,
        1 => 24,
        2 => 12,
        3 => 10,
        _ => 30 / k,
    }
}

struct Dfs<'a> {
    g: &'a Graph,
    full: u32,
    subsets: Vec<u32>,
    /// Vertices whose closed neighborhood is fully assigned once index `i` is.
    closes_at: Vec<Vec<usize>>,
    f: Vec<u32>,
    best: Vec<u32>,
    best_w: usize,
}

impl Dfs<'_> {
    fn go(&mut self, i: usize, w: usize) {
        if w >= self.best_w {
            return;
        }
        if i == self.f.len() {
            self.best_w = w;
            self.best.copy_from_slice(&self.f);
            return;
        }
        for si in 0..self.subsets.len() {
            let s = self.subsets[si];
            self.f[i] = s;
            let ok = self.closes_at[i].iter().all(|&v| {
                self.f[v] != 0 || self.g.neighbors(v).iter().fold(0, |a, &u| a | self.f[u]) == self.full
            });
            if ok {
                self.go(i + 1, w + s.count_ones() as usize);
            }
        }
        self.f[i] = 0;
    }
}

/// Exact `γ_rk` by enumerating every assignment in vertex order, pruning
/// only on partial weight and on fully assigned closed neighborhoods.
pub fn gamma_rk_oracle(g: &Graph, k: usize) -> Result<(usize, RainbowAssignment), RainbowError> {
    check_palette(k)?;
    let n = g.order();
    let max = oracle_envelope(k);
    if n > max {
        return Err(RainbowError::OutsideEnvelope { n, k, max });
    }
    if k == 0 {
        return Ok((0, RainbowAssignment::empty(n, 0)?));
    }
    let mut subsets: Vec<u32> = (0..=full_mask(k)).collect();
    subsets.sort_by_key(|s| s.count_ones());
    let mut closes_at = vec![Vec::new(); n];
    for v in 0..n {
        let last = g.neighbors(v).iter().copied().chain([v]).max().unwrap();
        closes_at[last].push(v);
    }
    let mut dfs = Dfs {
        g,
        full: full_mask(k),
        subsets,
        closes_at,
        f: vec![0; n],
        best: vec![1; n],
        best_w: n,
    };
    dfs.go(0, 0);
    let w = dfs.best_w;
    Ok((w, RainbowAssignment::from_masks(k, dfs.best)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::cycle;
    use crate::rainbow::validate_rdf;

    #[test]
    fn small_values() {
        let (w, f) = gamma_rk_oracle(&cycle(4).unwrap(), 2).unwrap();
        assert_eq!(w, 2);
        assert!(validate_rdf(&cycle(4).unwrap(), &f).unwrap());
        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(gamma_rk_oracle(&k2, 1).unwrap().0, 1);
        assert_eq!(gamma_rk_oracle(&cycle(6).unwrap(), 2).unwrap().0, 4);
        assert_eq!(gamma_rk_oracle(&Graph::empty(3), 2).unwrap().0, 3);
    }

    #[test]
    fn refuses_outside_envelope() {
        let g = cycle(11).unwrap();
        assert_eq!(
            gamma_rk_oracle(&g, 3).unwrap_err(),
            RainbowError::OutsideEnvelope { n: 11, k: 3, max: 10 }
        );
    }
}
