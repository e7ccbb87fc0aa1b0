//! Permutations and permutation groups with a stabilizer chain.
//!
//! Permutations act on the right: `(p * q)(v) = q(p(v))`, i.e. `p` first.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SymmetryError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = SymmetryError;

    fn try_from(images: Vec<usize>) -> Result<Self, SymmetryError> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, SymmetryError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(SymmetryError::NotAPermutation);
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&v| other.0[v]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(v, &w)| v == w).count()
    }

    /// Cycle lengths, sorted.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                v = self.0[v];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycle_type().into_iter().fold(1, |acc, c| acc / gcd(acc, c) * c)
    }
}

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    /// Strong generators added at this level; they fix earlier base points.
    gens: Vec<Permutation>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut transversal = vec![None; n];
        transversal[base] = Some(Permutation::identity(n));
        Level {
            base,
            gens: Vec::new(),
            transversal,
            orbit: vec![base],
        }
    }
}

/// A permutation group given by generators, with a stabilizer chain built
/// by the Schreier–Sims algorithm.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

/// Default cap on explicitly listed group elements.
pub const ELEMENT_CAP: usize = 50_000;

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, SymmetryError> {
        Self::with_base(degree, generators, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Builds the chain with the given points first in the base.
    pub fn with_base(degree: usize, generators: Vec<Permutation>, base: &[usize]) -> Result<Self, SymmetryError> {
        if generators.iter().any(|g| g.degree() != degree) || base.iter().any(|&b| b >= degree) {
            return Err(SymmetryError::DegreeMismatch);
        }
        let mut grp = PermutationGroup {
            degree,
            generators: generators.into_iter().filter(|g| !g.is_identity()).collect(),
            levels: base.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        for g in grp.generators.clone() {
            match grp.levels.iter().position(|l| g.image(l.base) != l.base) {
                Some(l) => grp.levels[l].gens.push(g),
                None => grp.push_level(g),
            }
        }
        grp.complete();
        Ok(grp)
    }

    fn push_level(&mut self, g: Permutation) {
        let base = (0..self.degree).find(|&v| g.image(v) != v).expect("non-identity generator");
        let mut level = Level::new(base, self.degree);
        level.gens.push(g);
        self.levels.push(level);
    }

    /// Sifts `h` from level `from`; returns the level where it got stuck and
    /// the residue, or `None` when `h` lies in the group.
    fn sift(&self, h: &Permutation, from: usize) -> Option<(usize, Permutation)> {
        let mut h = h.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let b = h.image(level.base);
            match &level.transversal[b] {
                Some(u) => h = h.then(&u.inverse()),
                None => return Some((l, h)),
            }
        }
        (!h.is_identity()).then_some((self.levels.len(), h))
    }

    /// Works upward from the deepest level; every level below the current
    /// one is a complete chain for the group its generators generate.
    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            self.rebuild_orbit(lvl);
            match self.bad_schreier_generator(lvl) {
                Some((l, r)) => {
                    if l == self.levels.len() {
                        self.push_level(r);
                    } else {
                        self.levels[l].gens.push(r);
                    }
                    i = l + 1;
                }
                None => i -= 1,
            }
        }
    }

    fn level_gens(&self, lvl: usize) -> Vec<Permutation> {
        self.levels[lvl..].iter().flat_map(|l| l.gens.iter().cloned()).collect()
    }

    fn rebuild_orbit(&mut self, lvl: usize) {
        let gens = self.level_gens(lvl);
        let level = &mut self.levels[lvl];
        let mut i = 0;
        while i < level.orbit.len() {
            let b = level.orbit[i];
            for s in &gens {
                let c = s.image(b);
                if level.transversal[c].is_none() {
                    level.transversal[c] = Some(level.transversal[b].as_ref().unwrap().then(s));
                    level.orbit.push(c);
                }
            }
            i += 1;
        }
    }

    fn bad_schreier_generator(&self, lvl: usize) -> Option<(usize, Permutation)> {
        let level = &self.levels[lvl];
        for s in self.level_gens(lvl) {
            for &b in &level.orbit {
                let ub = level.transversal[b].as_ref().unwrap();
                let uc = level.transversal[s.image(b)].as_ref().unwrap();
                let h = ub.then(&s).then(&uc.inverse());
                if let Some(found) = self.sift(&h, lvl + 1) {
                    return Some(found);
                }
            }
        }
        None
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Group order as a product of basic orbit lengths.
    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.sift(p, 0).is_none()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Orbit of `v`, sorted.
    pub fn orbit(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[v] = true;
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
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
    }

    /// Orbits, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for v in 0..self.degree {
            if !seen[v] {
                let o = self.orbit(v);
                for &w in &o {
                    seen[w] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Point stabilizer of `v`.
    pub fn stabilizer(&self, v: usize) -> PermutationGroup {
        let chain = Self::with_base(self.degree, self.generators.clone(), &[v]).expect("same degree");
        let gens: Vec<Permutation> = chain.levels[1..].iter().flat_map(|l| l.gens.iter().cloned()).collect();
        let mut stab = Self::with_base(self.degree, gens, &[]).expect("same degree");
        stab.generators.sort();
        stab
    }

    /// An element mapping `from` to `to`, if one exists.
    pub fn transporter(&self, from: usize, to: usize) -> Option<Permutation> {
        let chain = Self::with_base(self.degree, self.generators.clone(), &[from]).expect("same degree");
        chain.levels[0].transversal[to].clone()
    }

    /// All elements in sorted order, when there are at most `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>, SymmetryError> {
        let order = self.order();
        if order > cap as u128 {
            return Err(SymmetryError::GroupTooLarge { order, cap });
        }
        let mut out = vec![Permutation::identity(self.degree)];
        // g = t_last ... t_1 t_0
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for h in &out {
                for &b in &level.orbit {
                    next.push(h.then(level.transversal[b].as_ref().unwrap()));
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }
}

/// A materialized group: sorted elements with index-based multiplication.
#[derive(Debug, Clone)]
pub(crate) struct ElementTable {
    pub elements: Vec<Permutation>,
    pub index: HashMap<Permutation, usize>,
}

impl ElementTable {
    pub fn new(group: &PermutationGroup, cap: usize) -> Result<Self, SymmetryError> {
        let elements = group.elements(cap)?;
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(ElementTable { elements, index })
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].then(&self.elements[b])]
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Sorted element indices of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.elements.len()];
        let mut out = vec![self.identity()];
        seen[self.identity()] = true;
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let x = self.mul(out[i], g);
                if !seen[x] {
                    seen[x] = true;
                    out.push(x);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_basics() {
        let p = perm(&[1, 2, 0, 3]);
        assert_eq!(p.order(), 3);
        assert_eq!(p.fixed_points(), 1);
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.then(&perm(&[0, 1, 3, 2])).images(), &[1, 3, 0, 2]);
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=7 {
            let mut cyc: Vec<usize> = (1..n).collect();
            cyc.push(0);
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            let g = PermutationGroup::new(n, vec![perm(&cyc), perm(&swap)]).unwrap();
            assert_eq!(g.order(), (1..=n as u128).product::<u128>());
            assert_eq!(g.elements(ELEMENT_CAP).unwrap().len() as u128, g.order());
            assert_eq!(g.stabilizer(0).order(), (1..n as u128).product::<u128>());
        }
    }

    #[test]
    fn membership_and_transporter() {
        // dihedral group of the square
        let g = PermutationGroup::new(4, vec![perm(&[1, 2, 3, 0]), perm(&[0, 3, 2, 1])]).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.contains(&perm(&[2, 1, 0, 3])));
        assert!(!g.contains(&perm(&[1, 0, 2, 3])));
        let t = g.transporter(0, 2).unwrap();
        assert_eq!(t.image(0), 2);
        assert!(g.contains(&t));
        let els = g.elements(100).unwrap();
        assert!(els.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(g.elements(5), Err(SymmetryError::GroupTooLarge { order: 8, cap: 5 })));
    }
}
