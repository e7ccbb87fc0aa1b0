//! Branch and bound for `γ_rk`.

use super::{check_palette, full_mask, RainbowAssignment, RainbowError};
use crate::graph::Graph;

/// Result of a budgeted optimization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gamma {
    Exact { value: usize, witness: RainbowAssignment },
    /// The node budget ran out; `best` is the cheapest function found and
    /// `lower` a proven lower bound.
    Undecided { lower: usize, best: RainbowAssignment },
}

impl Gamma {
    pub fn exact(&self) -> Option<usize> {
        match self {
            Gamma::Exact { value, .. } => Some(*value),
            Gamma::Undecided { .. } => None,
        }
    }
}

/// Exact `γ_rk` with no search limit.
pub fn gamma_rk(g: &Graph, k: usize) -> Result<(usize, RainbowAssignment), RainbowError> {
    match gamma_rk_budgeted(g, k, None)? {
        Gamma::Exact { value, witness } => Ok((value, witness)),
        Gamma::Undecided { .. } => unreachable!("unbounded search always finishes"),
    }
}

/// Exact `γ_rk`, giving up after `budget` search nodes (summed over
/// components).
pub fn gamma_rk_budgeted(g: &Graph, k: usize, budget: Option<u64>) -> Result<Gamma, RainbowError> {
    check_palette(k)?;
    let n = g.order();
    if k == 0 {
        return Ok(Gamma::Exact {
            value: 0,
            witness: RainbowAssignment::empty(n, 0)?,
        });
    }
    let mut masks = vec![0u32; n];
    let mut lower = 0;
    let mut complete = true;
    let mut nodes = 0u64;
    for comp in g.components() {
        let mut s = Search::new(g, k, &comp, budget.map(|b| b.saturating_sub(nodes)));
        s.run();
        nodes += s.nodes;
        for (&v, &m) in s.order.iter().zip(&s.best) {
            masks[v] = m;
        }
        if s.aborted {
            complete = false;
            lower += s.lower;
        } else {
            lower += s.best_w;
        }
    }
    let witness = RainbowAssignment::from_masks(k, masks)?;
    Ok(if complete {
        Gamma::Exact {
            value: witness.weight(),
            witness,
        }
    } else {
        Gamma::Undecided { lower, best: witness }
    })
}

/// A k-RDF built by repeatedly adding the color that removes the most
/// missing colors, followed by dropping redundant colors.
pub fn greedy_rdf(g: &Graph, k: usize) -> Result<RainbowAssignment, RainbowError> {
    check_palette(k)?;
    let all: Vec<usize> = (0..g.order()).collect();
    let local = greedy(g, k, &all);
    RainbowAssignment::from_masks(k, local)
}

/// Greedy on the vertex list `verts` (local indices into it).
fn greedy(g: &Graph, k: usize, verts: &[usize]) -> Vec<u32> {
    let full = full_mask(k);
    let n = g.order();
    let mut f = vec![0u32; n];
    let missing = |f: &[u32], u: usize| -> u32 {
        if f[u] != 0 {
            0
        } else {
            full & !g.neighbors(u).iter().fold(0, |a, &x| a | f[x])
        }
    };
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        let deficit: usize = verts.iter().map(|&u| missing(&f, u).count_ones() as usize).sum();
        if deficit == 0 {
            break;
        }
        for &w in verts {
            for c in 0..k {
                if f[w] >> c & 1 == 1 {
                    continue;
                }
                let mut gain = missing(&f, w).count_ones() as usize;
                for &u in g.neighbors(w) {
                    if missing(&f, u) >> c & 1 == 1 {
                        gain += 1;
                    }
                }
                if best.is_none_or(|(b, _, _)| gain > b) {
                    best = Some((gain, w, c));
                }
            }
        }
        let (_, w, c) = best.expect("a deficient vertex can always be colored");
        f[w] |= 1 << c;
    }
    // drop colors that are not needed
    for &w in verts {
        for c in 0..k {
            if f[w] >> c & 1 == 0 {
                continue;
            }
            f[w] &= !(1 << c);
            let ok = missing(&f, w) == 0 && g.neighbors(w).iter().all(|&u| missing(&f, u) == 0);
            if !ok {
                f[w] |= 1 << c;
            }
        }
    }
    verts.iter().map(|&v| f[v]).collect()
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    full: u32,
    order: Vec<usize>,
    max_deg: usize,
    f: Vec<u32>,
    assigned: Vec<bool>,
    cover: Vec<u32>,
    free: Vec<usize>,
    missing_total: usize,
    best: Vec<u32>,
    best_w: usize,
    lower: usize,
    nodes: u64,
    budget: Option<u64>,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, k: usize, comp: &[usize], budget: Option<u64>) -> Self {
        let n = g.order();
        // breadth-first from the lowest vertex of maximum degree
        let start = *comp.iter().max_by_key(|&&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
        let mut seen = vec![false; n];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            for &w in g.neighbors(order[i]) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
        let nc = order.len();
        let max_deg = comp.iter().map(|&v| g.degree(v)).max().unwrap_or(0);
        let best = greedy(g, k, &order);
        let best_w = best.iter().map(|m| m.count_ones() as usize).sum();
        let lower = match comp.iter().map(|&v| g.degree(v)).min() {
            Some(d) if d == max_deg && d > 0 => (k * nc).div_ceil(2 * d),
            _ => 1,
        };
        Search {
            g,
            k,
            full: full_mask(k),
            free: (0..n).map(|v| g.degree(v)).collect(),
            order,
            max_deg,
            f: vec![0; n],
            assigned: vec![false; n],
            cover: vec![0; n],
            missing_total: 0,
            best,
            best_w,
            lower,
            nodes: 0,
            budget,
            aborted: false,
        }
    }

    fn run(&mut self) {
        if self.best_w > self.lower {
            self.go(0, 0, 0);
        }
    }

    fn missing(&self, u: usize) -> u32 {
        self.full & !self.cover[u]
    }

    fn bound(&self, w: usize) -> usize {
        let need = if self.max_deg == 0 {
            0
        } else {
            self.missing_total.div_ceil(self.max_deg)
        };
        w + need
    }

    fn go(&mut self, depth: usize, w: usize, used: u32) {
        if self.aborted || self.best_w <= self.lower {
            return;
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.aborted = true;
            return;
        }
        if depth == self.order.len() {
            if w < self.best_w {
                self.best_w = w;
                self.best = self.order.iter().map(|&v| self.f[v]).collect();
            }
            return;
        }
        let v = self.order[depth];
        let hi_max = self.k as u32 - used;
        for size in 0..=self.k as u32 {
            if w + size as usize >= self.best_w {
                break;
            }
            // colors below `used` freely; new colors must be the next ones
            for new in 0..=size.min(hi_max) {
                let old_bits = size - new;
                if old_bits > used {
                    continue;
                }
                let new_mask = ((1u32 << new) - 1) << used;
                let mut sub = (1u32 << used) - 1;
                // iterate all old-color subsets of popcount `old_bits`, ascending
                let mut olds = Vec::new();
                loop {
                    if sub.count_ones() == old_bits {
                        olds.push(sub);
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & ((1u32 << used) - 1);
                }
                olds.reverse();
                for old in olds {
                    let s = old | new_mask;
                    self.try_assign(depth, v, s, w, used + new);
                    if self.aborted || self.best_w <= self.lower {
                        return;
                    }
                }
            }
        }
    }

    fn try_assign(&mut self, depth: usize, v: usize, s: u32, w: usize, used: u32) {
        let g = self.g;
        let mut feasible = true;
        self.assigned[v] = true;
        self.f[v] = s;
        if s == 0 {
            self.missing_total += self.missing(v).count_ones() as usize;
            if self.free[v] == 0 && self.missing(v) != 0 {
                feasible = false;
            }
        }
        let saved: Vec<u32> = g.neighbors(v).iter().map(|&u| self.cover[u]).collect();
        for &u in g.neighbors(v) {
            if self.assigned[u] && self.f[u] == 0 {
                self.missing_total -= (s & self.missing(u)).count_ones() as usize;
            }
            self.cover[u] |= s;
            self.free[u] -= 1;
            if self.assigned[u] && self.f[u] == 0 && self.free[u] == 0 && self.missing(u) != 0 {
                feasible = false;
            }
        }
        let w2 = w + s.count_ones() as usize;
        if feasible && self.bound(w2) < self.best_w {
            self.go(depth + 1, w2, used);
        }
        for (&u, &c) in g.neighbors(v).iter().zip(&saved) {
            self.free[u] += 1;
            if self.assigned[u] && self.f[u] == 0 {
                let restored = (s & !c & self.full).count_ones() as usize;
                self.missing_total += restored;
            }
            self.cover[u] = c;
        }
        if s == 0 {
            self.missing_total -= self.missing(v).count_ones() as usize;
        }
        self.f[v] = 0;
        self.assigned[v] = false;
    }
}
