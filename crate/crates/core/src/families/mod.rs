//! Parameterized graph families.
//!
//! Two-row families (prism, Möbius ladder, wreath, generalized Petersen)
//! place `u_i` at index `i` and `v_i` at index `n + i`. Honeycomb toroidal
//! graphs place `v_{i,j}` at index `i * n + j`.

mod group;

pub use group::{cayley, FiniteGroup, S3TimesDn, TABLE_LIMIT};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{family} needs parameter at least {min}, got {value}")]
    BelowMinimum { family: &'static str, value: usize, min: usize },
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("identity element in connection set")]
    IdentityInConnectionSet,
    #[error("connection set not closed under inverses (element {0})")]
    NotInverseClosed(usize),
    #[error("group law violated: {0}")]
    GroupLaw(String),
    #[error("cannot parse family spec {0:?}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn at_least(family: &'static str, value: usize, min: usize) -> Result<(), FamilyError> {
    if value < min {
        Err(FamilyError::BelowMinimum { family, value, min })
    } else {
        Ok(())
    }
}

pub fn cycle(n: usize) -> Result<Graph, FamilyError> {
    at_least("cycle", n, 3)?;
    Ok(Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?)
}

/// `K_{d,d}` with sides `0..d` and `d..2d`.
pub fn complete_bipartite(d: usize) -> Result<Graph, FamilyError> {
    at_least("complete bipartite", d, 1)?;
    Ok(Graph::new(2 * d, (0..d).flat_map(|i| (d..2 * d).map(move |j| (i, j))))?)
}

fn ladder_edges(n: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::with_capacity(3 * n);
    for i in 0..n {
        e.push((i, n + i));
        if i + 1 < n {
            e.push((i, i + 1));
            e.push((n + i, n + i + 1));
        }
    }
    e
}

pub fn prism(n: usize) -> Result<Graph, FamilyError> {
    at_least("prism", n, 3)?;
    let mut e = ladder_edges(n);
    e.push((n - 1, 0));
    e.push((2 * n - 1, n));
    Ok(Graph::new(2 * n, e)?)
}

/// The prism with `{u_{n-1}, u_0}, {v_{n-1}, v_0}` replaced by
/// `{u_{n-1}, v_0}, {v_{n-1}, u_0}`.
pub fn mobius(n: usize) -> Result<Graph, FamilyError> {
    at_least("Möbius ladder", n, 3)?;
    let mut e = ladder_edges(n);
    e.push((n - 1, n));
    e.push((2 * n - 1, 0));
    Ok(Graph::new(2 * n, e)?)
}

/// `C_n[2K_1]`: `u_i` and `v_i` are both joined to `u_{i+1}` and `v_{i+1}`.
pub fn wreath(n: usize) -> Result<Graph, FamilyError> {
    at_least("wreath", n, 3)?;
    let e = (0..n).flat_map(|i| {
        let j = (i + 1) % n;
        [(i, j), (i, n + j), (n + i, n + j), (n + i, j)]
    });
    Ok(Graph::new(2 * n, e)?)
}

/// Generalized Petersen graph: outer cycle on `u`, spokes `u_i v_i`, inner
/// edges `v_i v_{i+k}`.
pub fn gp(n: usize, k: usize) -> Result<Graph, FamilyError> {
    at_least("generalized Petersen", n, 3)?;
    if k == 0 || 2 * k >= n {
        return Err(FamilyError::Parameter(format!("GP({n},{k}) needs 1 <= k < n/2")));
    }
    let e = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, n + i), (n + i, n + (i + k) % n)]);
    Ok(Graph::new(2 * n, e)?)
}

/// Honeycomb toroidal graph on an `m × n` grid of vertices `v_{i,j}`.
///
/// Vertical edges join `v_{i,j}` and `v_{i,j+1}`; horizontal edges join
/// `v_{i,j}` and `v_{i+1,j}` for `i < m-1` with `i + j` odd; jumps join
/// `v_{m-1,j}` and `v_{0,j+ℓ}` for `j ≡ m (mod 2)`.
pub fn htg(m: usize, n: usize, l: usize) -> Result<Graph, FamilyError> {
    at_least("honeycomb toroidal", m, 1)?;
    if n < 4 || n % 2 == 1 {
        return Err(FamilyError::Parameter(format!("HTG({m},{n},{l}) needs even n >= 4")));
    }
    if 2 * l > n || l % 2 != m % 2 {
        return Err(FamilyError::Parameter(format!(
            "HTG({m},{n},{l}) needs 0 <= l <= n/2 and l ≡ m (mod 2)"
        )));
    }
    if m == 1 && l == 1 {
        return Err(FamilyError::Parameter(format!("HTG(1,{n},1) has parallel edges")));
    }
    let idx = |i: usize, j: usize| i * n + j % n;
    let mut e = Vec::with_capacity(3 * m * n / 2);
    for i in 0..m {
        for j in 0..n {
            e.push((idx(i, j), idx(i, j + 1)));
        }
    }
    for i in 0..m - 1 {
        for j in (0..n).filter(|j| (i + 1) % 2 == j % 2) {
            e.push((idx(i, j), idx(i + 1, j)));
        }
    }
    for j in (0..n).filter(|j| j % 2 == m % 2) {
        e.push((idx(m - 1, j), idx(0, j + l)));
    }
    Ok(Graph::new(m * n, e)?)
}

pub fn s3_times_dn(n: usize) -> Result<S3TimesDn, FamilyError> {
    S3TimesDn::new(n)
}

/// `Cay(S3 × D_n, {a, b, c})`.
pub fn xn(n: usize) -> Result<Graph, FamilyError> {
    let g = S3TimesDn::new(n)?;
    cayley(g.group(), &[g.a(), g.b(), g.c()])
}

/// A family member identified by its parameters.
#[derive(Debug, Clone)]
pub enum FamilySpec {
    Cycle(usize),
    CompleteBipartite(usize),
    Prism(usize),
    Mobius(usize),
    Wreath(usize),
    Gp(usize, usize),
    Htg(usize, usize, usize),
    Xn(usize),
    Cayley { group: Arc<FiniteGroup>, connection: Vec<usize> },
}

impl PartialEq for FamilySpec {
    fn eq(&self, other: &Self) -> bool {
        use FamilySpec::*;
        match (self, other) {
            (Cayley { group: g1, connection: c1 }, Cayley { group: g2, connection: c2 }) => {
                Arc::ptr_eq(g1, g2) && c1 == c2
            }
            (Cayley { .. }, _) | (_, Cayley { .. }) => false,
            _ => self.to_string() == other.to_string(),
        }
    }
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph, FamilyError> {
        match *self {
            FamilySpec::Cycle(n) => cycle(n),
            FamilySpec::CompleteBipartite(d) => complete_bipartite(d),
            FamilySpec::Prism(n) => prism(n),
            FamilySpec::Mobius(n) => mobius(n),
            FamilySpec::Wreath(n) => wreath(n),
            FamilySpec::Gp(n, k) => gp(n, k),
            FamilySpec::Htg(m, n, l) => htg(m, n, l),
            FamilySpec::Xn(n) => xn(n),
            FamilySpec::Cayley { ref group, ref connection } => cayley(group, connection),
        }
    }

    /// Number of vertices, without building the graph.
    pub fn order(&self) -> usize {
        match *self {
            FamilySpec::Cycle(n) => n,
            FamilySpec::CompleteBipartite(n)
            | FamilySpec::Prism(n)
            | FamilySpec::Mobius(n)
            | FamilySpec::Wreath(n)
            | FamilySpec::Gp(n, _) => 2 * n,
            FamilySpec::Htg(m, n, _) => m * n,
            FamilySpec::Xn(n) => 12 * n,
            FamilySpec::Cayley { ref group, .. } => group.order(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::CompleteBipartite(d) => write!(f, "kdd:{d}"),
            FamilySpec::Prism(n) => write!(f, "prism:{n}"),
            FamilySpec::Mobius(n) => write!(f, "mobius:{n}"),
            FamilySpec::Wreath(n) => write!(f, "wreath:{n}"),
            FamilySpec::Gp(n, k) => write!(f, "gp:{n},{k}"),
            FamilySpec::Htg(m, n, l) => write!(f, "htg:{m},{n},{l}"),
            FamilySpec::Xn(n) => write!(f, "xn:{n}"),
            FamilySpec::Cayley { group, connection } => {
                write!(f, "cayley(order {}, S = {:?})", group.order(), connection)
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FamilyError::Parse(s.to_string());
        let (name, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        let spec = match (name.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("cycle", &[n]) => FamilySpec::Cycle(n),
            ("kdd", &[d]) => FamilySpec::CompleteBipartite(d),
            ("prism", &[n]) => FamilySpec::Prism(n),
            ("mobius", &[n]) => FamilySpec::Mobius(n),
            ("wreath", &[n]) => FamilySpec::Wreath(n),
            ("gp", &[n, k]) => FamilySpec::Gp(n, k),
            ("htg", &[m, n, l]) => FamilySpec::Htg(m, n, l),
            ("xn", &[n]) => FamilySpec::Xn(n),
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Every valid GP parameter pair of the given order.
pub fn gp_members(order: usize) -> Vec<FamilySpec> {
    if order % 2 == 1 || order < 6 {
        return Vec::new();
    }
    let n = order / 2;
    (1..n.div_ceil(2)).map(|k| FamilySpec::Gp(n, k)).collect()
}

/// Every valid HTG parameter triple of the given order.
pub fn htg_members(order: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for m in 1..=order {
        if !order.is_multiple_of(m) {
            continue;
        }
        let n = order / m;
        if n < 4 || n % 2 == 1 {
            continue;
        }
        for l in (0..=n / 2).filter(|l| l % 2 == m % 2) {
            if !(m == 1 && l == 1) {
                out.push(FamilySpec::Htg(m, n, l));
            }
        }
    }
    out
}

/// Every cubic family member (`K_{3,3}`, prism, Möbius ladder, GP, HTG,
/// `X_n`) of the given order.
pub fn cubic_members(order: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    if order == 6 {
        out.push(FamilySpec::CompleteBipartite(3));
    }
    if order.is_multiple_of(2) && order >= 6 {
        out.push(FamilySpec::Prism(order / 2));
        out.push(FamilySpec::Mobius(order / 2));
    }
    out.extend(gp_members(order));
    out.extend(htg_members(order));
    if order.is_multiple_of(12) && order >= 36 {
        out.push(FamilySpec::Xn(order / 12));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{girth, is_isomorphic, Girth};

    #[test]
    fn small_families() {
        let k33 = complete_bipartite(3).unwrap();
        assert!(is_isomorphic(&mobius(3).unwrap(), &k33));
        assert!(is_isomorphic(&htg(1, 6, 3).unwrap(), &k33));
        let p6 = prism(6).unwrap();
        assert_eq!((p6.order(), p6.regular_degree()), (12, Some(3)));
        assert!(p6.bipartition().is_some());
        assert_eq!(wreath(4).unwrap().regular_degree(), Some(4));
        assert_eq!(wreath(4).unwrap().order(), 8);
        assert!(cycle(2).is_err());
        assert!(complete_bipartite(0).is_err());
    }

    #[test]
    fn generalized_petersen() {
        assert!(is_isomorphic(&gp(6, 1).unwrap(), &prism(6).unwrap()));
        assert!(is_isomorphic(&gp(12, 5).unwrap(), &htg(2, 12, 6).unwrap()));
        assert_eq!(girth(&gp(5, 2).unwrap()), Girth::Finite(5));
        assert!(gp(6, 3).is_err());
        assert!(gp(6, 0).is_err());
    }

    #[test]
    fn gp_matches_reference_encoding() {
        // networkx reference for the same labeling
        assert_eq!(
            crate::graph6::encode(&gp(12, 5).unwrap()),
            "WhCGGC@?G?o@_?O?C??_?A??CA?CA?AD??`O?CI??Og??`O"
        );
    }

    #[test]
    fn honeycomb_toroidal() {
        let pappus = htg(3, 6, 3).unwrap();
        assert_eq!((pappus.order(), pappus.regular_degree()), (18, Some(3)));
        assert_eq!(girth(&pappus), Girth::Finite(6));
        assert!(is_isomorphic(&htg(2, 6, 0).unwrap(), &prism(6).unwrap()));
        assert!(htg(1, 6, 1).is_err());
        assert!(htg(2, 6, 1).is_err());
        assert!(htg(2, 5, 0).is_err());
        assert!(htg(2, 6, 4).is_err());
        for spec in htg_members(48) {
            let g = spec.build().unwrap();
            assert_eq!(g.regular_degree(), Some(3), "{spec}");
            assert!(g.is_connected(), "{spec}");
        }
    }

    #[test]
    fn xn_family() {
        assert_eq!(s3_times_dn(3).unwrap().group().order(), 36);
        let x3 = xn(3).unwrap();
        assert_eq!((x3.order(), x3.regular_degree()), (36, Some(3)));
        assert!(x3.is_connected());
        assert_eq!(girth(&x3), Girth::Finite(6));
        assert!(is_isomorphic(&xn(5).unwrap(), &gp(30, 11).unwrap()));
        assert!(xn(2).is_err());
        let g4 = s3_times_dn(4).unwrap();
        let c = cayley(g4.group(), &[g4.a(), g4.b(), g4.c()]).unwrap();
        assert_eq!(c, xn(4).unwrap());
        assert_eq!(c.order(), 48);
    }

    #[test]
    fn xn_bipartition_is_coset_split() {
        for n in 3..=6 {
            let grp = s3_times_dn(n).unwrap();
            let b = xn(n).unwrap().bipartition().unwrap();
            let s = b.side_of(grp.group().identity());
            for x in 0..grp.group().order() {
                assert_eq!(b.side_of(x) == s, grp.in_even_half(x));
            }
        }
    }

    #[test]
    fn spec_syntax_round_trips() {
        for s in ["gp:12,5", "htg:3,6,3", "xn:4", "prism:6", "mobius:9", "wreath:8", "cycle:12", "kdd:3"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(spec.build().unwrap().order(), spec.order());
        }
        for s in ["gp:12", "foo:3", "htg:1,2", "gp:a,b", "prism"] {
            assert!(s.parse::<FamilySpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn family_degrees() {
        for order in (6..=48).step_by(6) {
            for spec in cubic_members(order) {
                let g = spec.build().unwrap();
                assert_eq!(g.order(), order);
                assert_eq!(g.regular_degree(), Some(3), "{spec}");
            }
        }
    }
}
