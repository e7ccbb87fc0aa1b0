use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rdrlab::constructions::{edge_switch, switch_moves};
use rdrlab::graph::{canonical_form, is_isomorphic, Graph};
use rdrlab::rainbow::{check_six_cycle_pattern, is_d_rdr};
use rdrlab::symmetry::automorphism_group;

fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (0..n).tuple_combinations().filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, edges).unwrap()
}

fn shuffle(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

fn edge_set(g: &Graph) -> BTreeSet<(usize, usize)> {
    g.edges().collect()
}

fn image(g: &Graph, p: &[usize]) -> BTreeSet<(usize, usize)> {
    g.edges().map(|(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect()
}

fn brute_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let e = edge_set(g);
    (0..g.order()).permutations(g.order()).filter(|p| image(g, p) == e).collect()
}

fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.size() == b.size()
        && (0..a.order()).permutations(a.order()).any(|p| image(a, &p) == edge_set(b))
}

fn random_bicubic(half: usize, seed: u64) -> Option<Graph> {
    let mut edges = BTreeSet::new();
    for i in 0..3 {
        for (a, b) in shuffle(half, seed.wrapping_add(i)).into_iter().enumerate() {
            if !edges.insert((a, half + b)) {
                return None;
            }
        }
    }
    Graph::new(2 * half, edges).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn group_order_and_orbits_match_brute_force(n in 1usize..=7, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let brute = brute_automorphisms(&g);
        let group = automorphism_group(&g);
        prop_assert_eq!(group.order(), brute.len() as u128);
        let mut orbits: Vec<Vec<usize>> = (0..n)
            .map(|v| brute.iter().map(|a| a[v]).collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        orbits.sort();
        orbits.dedup();
        let mut got = group.orbits();
        got.iter_mut().for_each(|o| o.sort());
        got.sort();
        prop_assert_eq!(got, orbits);
    }

    #[test]
    fn canonical_form_ignores_labels(n in 1usize..=14, p in 0.0f64..1.0, seed in any::<u64>(), relabel in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let h = g.relabel(&shuffle(n, relabel)).unwrap();
        prop_assert_eq!(canonical_form(&g).fingerprint(), canonical_form(&h).fingerprint());
        prop_assert!(is_isomorphic(&g, &h));
    }

    #[test]
    fn isomorphism_matches_brute_force(n in 1usize..=6, p in 0.2f64..0.8, a in any::<u64>(), b in any::<u64>()) {
        let (g, h) = (random_graph(n, p, a), random_graph(n, p, b));
        prop_assert_eq!(is_isomorphic(&g, &h), brute_isomorphic(&g, &h));
    }

    #[test]
    fn switches_preserve_rdr(half in 3usize..=9, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let Some(g) = random_bicubic(half, seed) else { return Ok(()) };
        let Some(w) = is_d_rdr(&g) else { return Ok(()) };
        let moves = switch_moves(&g, &w);
        prop_assume!(!moves.is_empty());
        let mv = &moves[pick.index(moves.len())];
        let (h, w2) = edge_switch(&g, &w, mv).unwrap();
        prop_assert_eq!(h.regular_degree(), Some(3));
        prop_assert!(w2.check(&h).is_ok());
        prop_assert!(check_six_cycle_pattern(&h, &w2));
        let back = switch_moves(&h, &w2).into_iter().find_map(|m| {
            let (k, _) = edge_switch(&h, &w2, &m).ok()?;
            (edge_set(&k) == edge_set(&g)).then_some(())
        });
        prop_assert!(back.is_some());
    }
}
