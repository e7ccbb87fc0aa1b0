//! Finite groups given by multiplication tables or permutation
//! representations, and Cayley graphs over them.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};

use super::FamilyError;
use crate::graph::Graph;

/// Groups up to this order store a full multiplication table.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Debug, Clone)]
enum Repr {
    Table(Vec<u32>),
    Perms {
        elems: Vec<Vec<u32>>,
        index: HashMap<Vec<u32>, usize>,
    },
}

/// A finite group on element indices `0..order`.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    repr: Repr,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table; identity and
    /// inverses are located from the table.
    pub fn from_table(order: usize, table: Vec<u32>, labels: Vec<String>) -> Result<Self, FamilyError> {
        if table.len() != order * order || labels.len() != order || order == 0 {
            return Err(FamilyError::GroupLaw("table shape does not match order".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x))
            .ok_or_else(|| FamilyError::GroupLaw("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for x in 0..order {
            inverse[x] = (0..order)
                .find(|&y| table[x * order + y] as usize == identity)
                .ok_or_else(|| FamilyError::GroupLaw(format!("element {x} has no inverse")))?;
        }
        Ok(FiniteGroup {
            order,
            repr: Repr::Table(table),
            identity,
            inverse,
            labels,
        })
    }

    /// Closure of the given permutations (images of `0..degree`). Elements
    /// are indexed in lexicographic order of their image vectors.
    pub fn from_permutations(generators: &[Vec<u32>], degree: usize) -> Self {
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut set = BTreeSet::from([id.clone()]);
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for g in generators {
                let y: Vec<u32> = x.iter().map(|&i| g[i as usize]).collect();
                if set.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        let elems: Vec<Vec<u32>> = set.into_iter().collect();
        let index: HashMap<Vec<u32>, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let order = elems.len();
        let labels = elems.iter().map(|e| format!("{e:?}")).collect();
        let compose = |a: &[u32], b: &[u32]| -> Vec<u32> { a.iter().map(|&i| b[i as usize]).collect() };
        let inverse = elems
            .iter()
            .map(|e| {
                let mut inv = vec![0u32; degree];
                for (i, &j) in e.iter().enumerate() {
                    inv[j as usize] = i as u32;
                }
                index[&inv]
            })
            .collect();
        let repr = if order <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in &elems {
                for b in &elems {
                    table.push(index[&compose(a, b)] as u32);
                }
            }
            Repr::Table(table)
        } else {
            Repr::Perms { elems, index }
        };
        FiniteGroup {
            order,
            repr,
            identity: 0,
            inverse,
            labels,
        }
    }

    pub fn cyclic(n: usize) -> Result<Self, FamilyError> {
        if n == 0 {
            return Err(FamilyError::BelowMinimum { family: "cyclic group", value: 0, min: 1 });
        }
        let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        Self::from_table(n, table, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn has_table(&self) -> bool {
        matches!(self.repr, Repr::Table(_))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t[a * self.order + b] as usize,
            Repr::Perms { elems, index } => {
                let c: Vec<u32> = elems[a].iter().map(|&i| elems[b][i as usize]).collect();
                index[&c]
            }
        }
    }

    /// Checks identity, inverse and associativity laws. Associativity is
    /// exhaustive up to order 200 and sampled above.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let n = self.order;
        for x in 0..n {
            if self.mul(self.identity, x) != x || self.mul(x, self.identity) != x {
                return Err(FamilyError::GroupLaw(format!("identity law fails at {x}")));
            }
            if self.mul(x, self.inverse[x]) != self.identity || self.mul(self.inverse[x], x) != self.identity {
                return Err(FamilyError::GroupLaw(format!("inverse law fails at {x}")));
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<(), FamilyError> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(FamilyError::GroupLaw(format!("associativity fails at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        if n <= 200 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }
}

/// Undirected Cayley graph with vertex set `G` and edges `{g, g·s}`.
pub fn cayley(group: &FiniteGroup, connection: &[usize]) -> Result<Graph, FamilyError> {
    let set: BTreeSet<usize> = connection.iter().copied().collect();
    if let Some(&x) = set.iter().find(|&&x| x >= group.order()) {
        return Err(FamilyError::Parameter(format!("element {x} not in group of order {}", group.order())));
    }
    if set.contains(&group.identity()) {
        return Err(FamilyError::IdentityInConnectionSet);
    }
    if let Some(&x) = set.iter().find(|&&x| !set.contains(&group.inverse(x))) {
        return Err(FamilyError::NotInverseClosed(x));
    }
    let mut edges = BTreeSet::new();
    for g in 0..group.order() {
        for &s in &set {
            let h = group.mul(g, s);
            edges.insert((g.min(h), g.max(h)));
        }
    }
    Ok(Graph::new(group.order(), edges)?)
}

/// Permutations of `{1,2,3}` as image arrays, in lexicographic order.
const S3: [[u8; 3]; 6] = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];

fn s3_index(p: [u8; 3]) -> usize {
    S3.iter().position(|&q| q == p).expect("permutation of {1,2,3}")
}

/// `(p ∘ q)(x) = p(q(x))`.
fn s3_compose(p: [u8; 3], q: [u8; 3]) -> [u8; 3] {
    [p[q[0] as usize - 1], p[q[1] as usize - 1], p[q[2] as usize - 1]]
}

fn s3_is_even(p: [u8; 3]) -> bool {
    matches!(p, [1, 2, 3] | [2, 3, 1] | [3, 1, 2])
}

/// The direct product `S3 × D_n`, with `D_n = <r, z | r^n = z^2 = (zr)^2 = 1>`.
///
/// Element `(p, r^e z^f)` has index `s3_index(p) * 2n + f * n + e`.
#[derive(Debug, Clone)]
pub struct S3TimesDn {
    n: usize,
    group: FiniteGroup,
}

impl S3TimesDn {
    pub fn new(n: usize) -> Result<Self, FamilyError> {
        if n < 3 {
            return Err(FamilyError::BelowMinimum { family: "S3 x D_n", value: n, min: 3 });
        }
        let order = 12 * n;
        let decode = |x: usize| (S3[x / (2 * n)], (x % (2 * n)) / n, x % n);
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (p, f, a) = decode(x);
            for y in 0..order {
                let (q, g, b) = decode(y);
                // r^a z^f r^b z^g = r^(a + (-1)^f b) z^(f+g)
                let e = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                let idx = s3_index(s3_compose(p, q)) * 2 * n + ((f + g) % 2) * n + e;
                table.push(idx as u32);
            }
        }
        let labels = (0..order)
            .map(|x| {
                let (p, f, e) = decode(x);
                format!("({}{}{}, r^{e}{})", p[0], p[1], p[2], if f == 1 { "z" } else { "" })
            })
            .collect();
        Ok(S3TimesDn {
            n,
            group: FiniteGroup::from_table(order, table, labels)?,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Index of `(p, r^e z^f)`.
    pub fn element(&self, p: [u8; 3], e: usize, f: usize) -> usize {
        s3_index(p) * 2 * self.n + (f % 2) * self.n + e % self.n
    }

    pub fn r(&self) -> usize {
        self.element([1, 2, 3], 1, 0)
    }

    pub fn z(&self) -> usize {
        self.element([1, 2, 3], 0, 1)
    }

    /// `a = ((12), 1)`.
    pub fn a(&self) -> usize {
        self.element([2, 1, 3], 0, 0)
    }

    /// `b = ((13), z)`.
    pub fn b(&self) -> usize {
        self.element([3, 2, 1], 0, 1)
    }

    /// `c = ((23), zr)`.
    pub fn c(&self) -> usize {
        let zr = self.group.mul(self.z(), self.r());
        self.group.mul(self.element([1, 3, 2], 0, 0), zr)
    }

    /// Whether the S3 component of `x` is an even permutation, i.e. `x`
    /// lies in the index-two subgroup `A3 × D_n`.
    pub fn in_even_half(&self, x: usize) -> bool {
        s3_is_even(S3[x / (2 * self.n)])
    }

    /// The S3 component of `x` as an image array.
    pub fn s3_part(&self, x: usize) -> [u8; 3] {
        S3[x / (2 * self.n)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    #[test]
    fn cyclic_cayley_is_a_cycle() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        z6.validate().unwrap();
        let g = cayley(&z6, &[1, 5]).unwrap();
        let c6 = Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert!(is_isomorphic(&g, &c6));
    }

    #[test]
    fn connection_set_preconditions() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(cayley(&z6, &[1]).unwrap_err(), FamilyError::NotInverseClosed(1));
        assert_eq!(cayley(&z6, &[0, 3]).unwrap_err(), FamilyError::IdentityInConnectionSet);
    }

    #[test]
    fn s3_dn_structure() {
        for n in 3..=6 {
            let g = S3TimesDn::new(n).unwrap();
            assert_eq!(g.group().order(), 12 * n);
            g.group().validate().unwrap();
            let grp = g.group();
            for s in [g.a(), g.b(), g.c()] {
                assert_ne!(s, grp.identity());
                assert_eq!(grp.mul(s, s), grp.identity());
            }
            // bab = ((23), 1), cac = ((13), 1)
            assert_eq!(grp.mul(grp.mul(g.b(), g.a()), g.b()), g.element([1, 3, 2], 0, 0));
            assert_eq!(grp.mul(grp.mul(g.c(), g.a()), g.c()), g.element([3, 2, 1], 0, 0));
            // bc = ((321), r)
            assert_eq!(grp.mul(g.b(), g.c()), g.element([3, 1, 2], 1, 0));
        }
        assert!(S3TimesDn::new(2).is_err());
    }

    #[test]
    fn permutation_groups_match_tables() {
        // D4 acting on the square
        let g = FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], 4);
        assert_eq!(g.order(), 8);
        g.validate().unwrap();
        assert_eq!(g.identity(), 0);
    }
}
