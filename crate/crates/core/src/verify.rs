//! Closed-form RDR predicates for the classical families, checked against
//! the exact decision procedure over parameter ranges.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::census::classify_table2;
use crate::families::{complete_bipartite, cycle, gp, gp_members, htg, htg_members, mobius, prism, wreath, xn};
use crate::families::FamilySpec;
use crate::graph::{girth_signature, is_isomorphic, Graph};
use crate::rainbow::is_d_rdr;
use crate::symmetry::is_vertex_transitive;

pub const WREATH_CAP: usize = 16;

/// A parameter where the predicate and the exact decision differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub subject: String,
    pub computed: bool,
    pub predicted: bool,
}

/// A computed structural value next to the values it is expected to take.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub subject: String,
    pub property: String,
    pub computed: String,
    pub reference: Vec<String>,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub range: String,
    pub scanned: usize,
    pub agree: usize,
    pub disagreements: Vec<Disagreement>,
    pub observations: Vec<Observation>,
    pub elapsed_ms: u128,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn inconsistent(&self) -> impl Iterator<Item = &Observation> {
        self.observations.iter().filter(|o| !o.consistent)
    }
}

struct Item {
    subject: String,
    rdr: bool,
    predicted: bool,
    observations: Vec<Observation>,
}

fn report(theorem: &str, range: String, start: Instant, items: Vec<Item>) -> TheoremReport {
    let scanned = items.len();
    let mut disagreements = Vec::new();
    let mut observations = Vec::new();
    for it in items {
        if it.rdr != it.predicted {
            disagreements.push(Disagreement { subject: it.subject, computed: it.rdr, predicted: it.predicted });
        }
        observations.extend(it.observations);
    }
    TheoremReport {
        theorem: theorem.to_string(),
        range,
        scanned,
        agree: scanned - disagreements.len(),
        disagreements,
        observations,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// `"g (a,b,c)"` for a girth-regular graph, `"g irregular"` otherwise.
pub fn girth_and_signature(g: &Graph) -> String {
    match girth_signature(g) {
        Ok(r) => match r.graph_signature {
            Some(s) => format!("{} {}", r.girth, fmt_sig(&s)),
            None => format!("{} irregular", r.girth),
        },
        Err(_) => "acyclic".to_string(),
    }
}

fn fmt_sig(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn case(girth: usize, sig: [usize; 3]) -> String {
    format!("{girth} {}", fmt_sig(&sig))
}

fn signature_observation(subject: &str, g: &Graph, reference: Vec<String>) -> Observation {
    let computed = girth_and_signature(g);
    Observation {
        subject: subject.to_string(),
        property: "girth and signature".to_string(),
        consistent: reference.contains(&computed),
        computed,
        reference,
    }
}

fn iso_observation(subject: &str, g: &Graph, other: &FamilySpec, expected: bool) -> Observation {
    let holds = other.build().map(|h| is_isomorphic(g, &h)).unwrap_or(false);
    Observation {
        subject: subject.to_string(),
        property: format!("isomorphic to {other}"),
        computed: holds.to_string(),
        reference: vec![expected.to_string()],
        consistent: holds == expected,
    }
}

/// K_{d,d}, cycles, prisms, Möbius ladders and wreath graphs.
pub fn verify_basic_families(max_n: usize) -> TheoremReport {
    let start = Instant::now();
    let mut params: Vec<(String, Graph, bool)> = Vec::new();
    for d in 1..=max_n.min(8) {
        params.push((format!("kdd:{d}"), complete_bipartite(d).unwrap(), true));
    }
    for n in 3..=max_n {
        params.push((format!("cycle:{n}"), cycle(n).unwrap(), n % 4 == 0));
        params.push((format!("prism:{n}"), prism(n).unwrap(), n % 6 == 0));
        params.push((format!("mobius:{n}"), mobius(n).unwrap(), n % 6 == 3));
    }
    for n in 3..=max_n.min(WREATH_CAP) {
        params.push((format!("wreath:{n}"), wreath(n).unwrap(), n >= 4 && n % 4 == 0));
    }
    let items = params
        .into_par_iter()
        .map(|(subject, g, predicted)| Item { rdr: is_d_rdr(&g).is_some(), subject, predicted, observations: vec![] })
        .collect();
    let range = format!("n <= {max_n}, wreath n <= {}, d <= {}", max_n.min(WREATH_CAP), max_n.min(8));
    report("basic-families", range, start, items)
}

pub fn gp_predicate(n: usize, k: usize) -> bool {
    n.is_multiple_of(6) && (k % 6 == 1 || k % 6 == 5)
}

/// Girth and signature expected for a vertex-transitive 3-RDR GP(n, k).
pub fn gp_case(n: usize, k: usize) -> Option<String> {
    let involution = (k * k) % n == 1;
    if k == 1 {
        Some(case(4, [1, 1, 2]))
    } else if 2 * k + 2 == n && n.is_multiple_of(12) {
        Some(case(6, [2, 2, 2]))
    } else if (n, k) == (24, 5) {
        Some(case(8, [8, 8, 8]))
    } else if (n, k) == (24, 7) {
        Some(case(8, [10, 11, 11]))
    } else if n.is_multiple_of(18) && n >= 72 && (17..=n / 2 - 2).contains(&k) && (k % 18 == 1 || k % 18 == 17) && involution {
        Some(case(8, [2, 2, 4]))
    } else if (n % 18 == 6 || n % 18 == 12)
        && n >= 30
        && (5..=n / 2 - 2).contains(&k)
        && (k % 6 == 1 || k % 6 == 5)
        && involution
    {
        Some(case(8, [5, 5, 6]))
    } else {
        None
    }
}

/// Every GP(n, k) with `3 <= n <= max_n`.
pub fn verify_gp(max_n: usize) -> TheoremReport {
    let start = Instant::now();
    let params: Vec<(usize, usize)> = (3..=max_n).flat_map(|n| (1..n.div_ceil(2)).map(move |k| (n, k))).collect();
    let items = params
        .into_par_iter()
        .map(|(n, k)| {
            let g = gp(n, k).unwrap();
            let subject = format!("gp:{n},{k}");
            let rdr = is_d_rdr(&g).is_some();
            let mut observations = Vec::new();
            if rdr && is_vertex_transitive(&g) {
                let reference = gp_case(n, k).into_iter().collect();
                observations.push(signature_observation(&subject, &g, reference));
            }
            Item { subject, rdr, predicted: gp_predicate(n, k), observations }
        })
        .collect();
    report("gp-rdr-criterion", format!("3 <= n <= {max_n}, 1 <= k < n/2"), start, items)
}

pub fn htg_predicate(m: usize, n: usize, l: usize) -> bool {
    if m.is_multiple_of(2) {
        n.is_multiple_of(6) && l.is_multiple_of(6)
    } else {
        n.is_multiple_of(6) && l % 6 == 3
    }
}

fn all_htg_cases() -> Vec<String> {
    vec![case(4, [1, 1, 2]), case(6, [4, 4, 4]), case(6, [3, 3, 3]), case(6, [2, 3, 3]), case(6, [2, 2, 2])]
}

/// Expected signature and isomorphisms for a 3-RDR HTG.
fn htg_expectations(m: usize, n: usize, l: usize) -> (Vec<String>, Vec<FamilySpec>) {
    use FamilySpec::Htg;
    if (m == 1 && (l == 3 || 2 * l == n)) || (m == 2 && l == 0) {
        let half = m * n / 2;
        let iso = match (m, half % 6) {
            (1, 0) => vec![FamilySpec::Prism(half), Htg(2, half, 0)],
            (1, 3) => vec![FamilySpec::Mobius(half), Htg(1, 2 * half, half)],
            (2, _) => vec![FamilySpec::Prism(n), Htg(1, 2 * n, 3)],
            _ => vec![],
        };
        return (vec![case(4, [1, 1, 2])], iso);
    }
    if (m, n, l) == (3, 6, 3) {
        return (vec![case(6, [4, 4, 4])], vec![]);
    }
    if m == 3 && l == 3 && n > 6 {
        let other = if n.is_multiple_of(12) { Htg(n / 2, 6, 0) } else { Htg(n / 2, 6, 3) };
        return (vec![case(6, [3, 3, 3])], vec![other]);
    }
    if n == 6 && l == 0 && m.is_multiple_of(2) {
        let iso = match m % 6 {
            2 => vec![Htg(1, 6 * m, 2 * m - 1)],
            4 => vec![Htg(1, 6 * m, 2 * m + 1)],
            _ => vec![],
        };
        return (vec![case(6, [2, 3, 3])], iso);
    }
    if n == 6 && l == 3 && m % 2 == 1 && m >= 5 {
        let iso = match m % 6 {
            5 => vec![Htg(1, 6 * m, 2 * m - 1)],
            1 => vec![Htg(1, 6 * m, 2 * m + 1)],
            _ => vec![],
        };
        return (vec![case(6, [2, 3, 3])], iso);
    }
    if m == 2 && 2 * l == n && n.is_multiple_of(4) {
        return (vec![case(6, [2, 2, 2])], vec![FamilySpec::Gp(n, n / 2 - 1)]);
    }
    (all_htg_cases(), vec![])
}

/// Every valid HTG(m, n, l) with `m * n <= max_order`.
pub fn verify_htg(max_order: usize) -> TheoremReport {
    let start = Instant::now();
    let params: Vec<(usize, usize, usize)> = (4..=max_order)
        .flat_map(htg_members)
        .filter_map(|s| match s {
            FamilySpec::Htg(m, n, l) => Some((m, n, l)),
            _ => None,
        })
        .collect();
    let items = params
        .into_par_iter()
        .map(|(m, n, l)| {
            let g = htg(m, n, l).unwrap();
            let subject = format!("htg:{m},{n},{l}");
            let rdr = is_d_rdr(&g).is_some();
            let mut observations = Vec::new();
            if rdr {
                let (sigs, isos) = htg_expectations(m, n, l);
                observations.push(signature_observation(&subject, &g, sigs));
                for other in &isos {
                    observations.push(iso_observation(&subject, &g, other, true));
                }
            }
            Item { subject, rdr, predicted: htg_predicate(m, n, l), observations }
        })
        .collect();
    report("htg-rdr-criterion", format!("m * n <= {max_order}"), start, items)
}

/// X_n for `3 <= n <= max_n`: connected, vertex-transitive and 3-RDR, with
/// computed girth and signature and the GP/HTG isomorphism pattern.
pub fn verify_xn(max_n: usize) -> TheoremReport {
    let start = Instant::now();
    let items = (3..=max_n)
        .into_par_iter()
        .map(|n| {
            let g = xn(n).unwrap();
            let subject = format!("xn:{n}");
            let rdr = g.is_connected() && is_vertex_transitive(&g) && is_d_rdr(&g).is_some();
            let reference = if n == 3 {
                vec![case(6, [0, 1, 1])]
            } else {
                vec![case(8, [5, 5, 6]), case(8, [5, 6, 6])]
            };
            let mut observations = vec![signature_observation(&subject, &g, reference)];
            let order = 12 * n;
            let partner = match n % 3 {
                1 => Some(2 * n - 1),
                2 => Some(2 * n + 1),
                _ => None,
            };
            for spec in gp_members(order) {
                let FamilySpec::Gp(_, k) = spec else { continue };
                let expected = partner == Some(k);
                let holds = is_isomorphic(&g, &spec.build().unwrap());
                if expected || holds {
                    observations.push(iso_observation(&subject, &g, &spec, expected));
                }
            }
            if n % 3 == 0 {
                let hit: Vec<String> = htg_members(order)
                    .into_iter()
                    .filter(|s| is_isomorphic(&g, &s.build().unwrap()))
                    .map(|s| s.to_string())
                    .collect();
                observations.push(Observation {
                    subject: subject.clone(),
                    property: format!("HTG members of order {order} isomorphic to it"),
                    computed: format!("{hit:?}"),
                    reference: vec!["[]".to_string()],
                    consistent: hit.is_empty(),
                });
            }
            if n == 4 {
                observations.push(x4_side_by_side(&g));
            }
            Item { subject, rdr, predicted: true, observations }
        })
        .collect();
    report("xn-family", format!("3 <= n <= {max_n}"), start, items)
}

/// Computed signatures of X_4 and GP(24, 7) next to the three reference
/// values; consistent when signature equality matches isomorphism.
fn x4_side_by_side(x4: &Graph) -> Observation {
    let g = gp(24, 7).unwrap();
    let (a, b) = (girth_and_signature(x4), girth_and_signature(&g));
    let iso = is_isomorphic(x4, &g);
    Observation {
        subject: "xn:4 vs gp:24,7".to_string(),
        property: "computed signatures (xn:4 | gp:24,7 | isomorphic)".to_string(),
        computed: format!("{a} | {b} | {iso}"),
        reference: vec![case(8, [5, 5, 6]), case(8, [5, 6, 6]), case(8, [10, 11, 11])],
        consistent: (a == b) == iso,
    }
}

/// One row of the table of small vertex-transitive 3-RDR graphs: girth and
/// every family name the graph carries. An empty name list marks a row with
/// no family construction.
pub struct Table2Row {
    pub order: usize,
    pub girth: usize,
    pub names: &'static [&'static str],
}

pub const TABLE2: &[Table2Row] = &[
    Table2Row { order: 6, girth: 4, names: &["mobius:3", "htg:1,6,3", "kdd:3"] },
    Table2Row { order: 12, girth: 4, names: &["prism:6", "htg:1,12,3", "htg:2,6,0"] },
    Table2Row { order: 18, girth: 4, names: &["mobius:9", "htg:1,18,3", "htg:1,18,9"] },
    Table2Row { order: 18, girth: 6, names: &["htg:3,6,3"] },
    Table2Row { order: 24, girth: 6, names: &["htg:2,12,6", "gp:12,5"] },
    Table2Row { order: 24, girth: 4, names: &["prism:12", "htg:1,24,3", "htg:2,12,0"] },
    Table2Row { order: 24, girth: 6, names: &["htg:1,24,9", "htg:4,6,0"] },
    Table2Row { order: 30, girth: 6, names: &["htg:1,30,9", "htg:5,6,3"] },
    Table2Row { order: 30, girth: 4, names: &["mobius:15", "htg:1,30,3", "htg:1,30,15"] },
    Table2Row { order: 36, girth: 6, names: &["htg:1,36,9", "htg:1,36,15", "htg:2,18,6"] },
    Table2Row { order: 36, girth: 4, names: &["prism:18", "htg:1,36,3", "htg:2,18,0"] },
    Table2Row { order: 36, girth: 6, names: &["htg:3,12,3", "htg:6,6,0"] },
    Table2Row { order: 36, girth: 6, names: &["xn:3"] },
    Table2Row { order: 36, girth: 4, names: &[] },
];

/// Classifies every order `6, 12, ..., max_order` and compares with
/// [`TABLE2`]: each row must be found with its girth, all names of a row
/// must be isomorphic, and exhaustive orders must have no extra graphs.
pub fn verify_table2(max_order: usize) -> TheoremReport {
    let start = Instant::now();
    let mut items = Vec::new();
    for order in (6..=max_order).step_by(6) {
        let found = classify_table2(order);
        let rows: Vec<&Table2Row> = TABLE2.iter().filter(|r| r.order == order).collect();
        let mut matched = vec![false; found.entries.len()];
        for row in &rows {
            let subject = match row.names.first() {
                Some(name) => (*name).to_string(),
                None => format!("order {order} row without construction"),
            };
            if row.names.is_empty() {
                items.push(Item {
                    subject: subject.clone(),
                    rdr: true,
                    predicted: true,
                    observations: vec![Observation {
                        subject,
                        property: "constructible".to_string(),
                        computed: "false".to_string(),
                        reference: vec!["true".to_string()],
                        consistent: false,
                    }],
                });
                continue;
            }
            let graphs: Vec<Graph> = row.names.iter().map(|s| s.parse::<FamilySpec>().unwrap().build().unwrap()).collect();
            let chain = graphs.iter().all(|h| is_isomorphic(&graphs[0], h));
            let hit = found.entries.iter().position(|e| is_isomorphic(&e.graph, &graphs[0]));
            let girth_ok = hit.is_some_and(|i| found.entries[i].girth == Some(row.girth));
            if let Some(i) = hit {
                matched[i] = true;
            }
            items.push(Item {
                subject: subject.clone(),
                rdr: hit.is_some() && girth_ok,
                predicted: true,
                observations: vec![Observation {
                    subject,
                    property: "names form one isomorphism class".to_string(),
                    computed: chain.to_string(),
                    reference: vec!["true".to_string()],
                    consistent: chain,
                }],
            });
        }
        if found.exhaustive {
            for (e, _) in found.entries.iter().zip(&matched).filter(|(_, &m)| !m) {
                items.push(Item {
                    subject: format!("unlisted graph {} (order {order})", e.graph6),
                    rdr: true,
                    predicted: false,
                    observations: vec![],
                });
            }
        }
    }
    report("vt-3rdr-table", format!("orders 6..={max_order} step 6"), start, items)
}
