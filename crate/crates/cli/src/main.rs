use std::io::{BufRead, BufReader, Write};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rdrlab::census::{census_row, generate_bicubic};
use rdrlab::constructions::switching_reachability;
use rdrlab::families::FamilySpec;
use rdrlab::graph::{girth_signature, isomorphism, Graph};
use rdrlab::graph6;
use rdrlab::rainbow::{decide_rdr, enumerate_rdr_colorings, gamma_rk_budgeted, Gamma, Modulo, RdrDecision};
use rdrlab::symmetry::{check_krit1, check_krit2};
use rdrlab::verify::{verify_basic_families, verify_gp, verify_htg, verify_table2, verify_xn, TheoremReport};

const OK: u8 = 0;
const DISAGREEMENT: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "rdrlab", version, about = "Rainbow domination regularity toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Search node budget for exact solvers.
    #[arg(long, env = "RDRLAB_BUDGET", global = true)]
    budget: Option<u64>,
    /// Worker threads for census, switching and verification scans.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModuloArg {
    Color,
    Aut,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Basic,
    Gp,
    Htg,
    Xn,
    Table2,
}

#[derive(Subcommand)]
enum Command {
    /// k-rainbow domination number.
    Gamma {
        graph: String,
        #[arg(long)]
        k: usize,
    },
    /// Decide whether a graph is d-RDR.
    Rdr {
        graph: String,
        #[arg(long)]
        d: Option<usize>,
        /// List every witness coloring up to the chosen equivalence.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, value_enum, default_value_t = ModuloArg::Color)]
        modulo: ModuloArg,
    },
    /// Girth and girth-cycle signature.
    Signature { graph: String },
    /// Isomorphism test.
    Iso { a: String, b: String },
    /// Group-theoretic RDR criteria.
    Criteria {
        graph: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        krit: Option<u8>,
    },
    /// Bicubic census of one order.
    Census {
        n: usize,
        #[arg(long, conflicts_with = "emit_g6")]
        row: bool,
        #[arg(long)]
        emit_g6: bool,
    },
    /// Switching meta-graph over the graphs of a graph6 file.
    SwitchExplore { file: std::path::PathBuf },
    /// Compare closed-form predicates with exact computation.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        max: Option<usize>,
    },
}

/// A family spec such as `gp:12,5`, or a graph6 string.
fn parse_graph(arg: &str) -> Result<Graph> {
    if arg.contains(':') {
        let spec: FamilySpec = arg.parse().map_err(|e| anyhow!("{e}"))?;
        return spec.build().map_err(|e| anyhow!("{arg}: {e}"));
    }
    graph6::decode(arg).map_err(|e| anyhow!("{arg}: {e}"))
}

struct Outcome {
    report: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn new(schema: &str, mut report: Value, text: String, code: u8) -> Self {
        report["schema"] = json!(format!("rdrlab/{schema}/v1"));
        Outcome { report, text, code }
    }
}

fn gamma(g: &Graph, name: &str, k: usize, budget: Option<u64>) -> Result<Outcome> {
    Ok(match gamma_rk_budgeted(g, k, budget)? {
        Gamma::Exact { value, witness } => Outcome::new(
            "gamma",
            json!({ "graph": name, "order": g.order(), "k": k, "status": "exact", "gamma": value, "witness": witness }),
            format!("gamma_r{k}({name}) = {value}"),
            OK,
        ),
        Gamma::Undecided { lower, best } => Outcome::new(
            "gamma",
            json!({ "graph": name, "order": g.order(), "k": k, "status": "undecided",
                    "lower": lower, "best": best.weight(), "witness": best }),
            format!("gamma_r{k}({name}) undecided: {lower} <= gamma <= {}", best.weight()),
            BUDGET,
        ),
    })
}

fn rdr(g: &Graph, name: &str, d: Option<usize>, enumerate: bool, modulo: ModuloArg, budget: Option<u64>) -> Outcome {
    let degree = g.regular_degree();
    let d = d.or(degree).unwrap_or(0);
    let decision = if degree == Some(d) { decide_rdr(g, budget) } else { RdrDecision::NotRdr };
    let (status, rdr, code) = match &decision {
        RdrDecision::Rdr(_) => ("rdr", json!(true), OK),
        RdrDecision::NotRdr => ("not-rdr", json!(false), OK),
        RdrDecision::Undecided => ("undecided", Value::Null, BUDGET),
    };
    let mut report = json!({ "graph": name, "order": g.order(), "d": d, "status": status, "rdr": rdr,
                             "witness": decision.witness() });
    let mut text = format!("{name}: {status} (d = {d})");
    if enumerate && decision.witness().is_some() {
        let m = match modulo {
            ModuloArg::Color => Modulo::ColorPermutation,
            ModuloArg::Aut => Modulo::ColorPermutationAndAutomorphism,
        };
        let all = enumerate_rdr_colorings(g, m);
        text.push_str(&format!(", {} coloring class(es) modulo {}", all.len(), json!(m).as_str().unwrap()));
        report["modulo"] = json!(m);
        report["classes"] = json!(all.len());
        report["colorings"] = json!(all);
    }
    Outcome::new("rdr", report, text, code)
}

fn signature(g: &Graph, name: &str) -> Result<Outcome> {
    let r = girth_signature(g)?;
    let text = match &r.graph_signature {
        Some(s) => format!("{name}: girth {}, signature {:?}", r.girth, s),
        None => format!("{name}: girth {}, not girth-regular", r.girth),
    };
    Ok(Outcome::new(
        "signature",
        json!({ "graph": name, "girth": r.girth, "cycle_count": r.cycle_count,
                "girth_regular": r.girth_regular, "signature": r.graph_signature }),
        text,
        OK,
    ))
}

fn criteria(g: &Graph, name: &str, krit: Option<u8>) -> Result<Outcome> {
    let mut report = json!({ "graph": name });
    let mut lines = Vec::new();
    if krit != Some(2) {
        let c = check_krit1(g)?;
        lines.push(format!("{name}: subgroup criterion {}", status_word(&json!(c))));
        report["krit1"] = json!(c);
    }
    if krit != Some(1) {
        let c = check_krit2(g)?;
        lines.push(format!("{name}: block criterion {}", status_word(&json!(c))));
        report["krit2"] = json!(c);
    }
    Ok(Outcome::new("criteria", report, lines.join("\n"), OK))
}

fn status_word(v: &Value) -> String {
    let s = v["status"].as_str().unwrap_or("?");
    match v.get("detail").and_then(Value::as_str) {
        Some(d) if s == "precondition-failed" => format!("{s} ({d})"),
        _ => s.to_string(),
    }
}

fn census(n: usize, emit_g6: bool, budget: Option<u64>) -> Result<Outcome> {
    if emit_g6 {
        let graphs = generate_bicubic(n)?;
        let lines: Vec<String> = graphs.iter().map(graph6::encode).collect();
        return Ok(Outcome::new("census-graphs", json!({ "order": n, "graph6": lines }), lines.join("\n"), OK));
    }
    let row = census_row(n, budget)?;
    let text = format!(
        "order {}: bc {}, 3-rdr {}, vt {}, vt 3-rdr {}, undecided {} ({} ms)",
        row.order, row.bc, row.rdr3, row.vt, row.vt_rdr3, row.undecided, row.elapsed_ms
    );
    let code = if row.undecided > 0 { BUDGET } else { OK };
    Ok(Outcome::new("census-row", json!(row), text, code))
}

fn switch_explore(path: &std::path::Path) -> Result<Outcome> {
    let file = std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut graphs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        graphs.push(graph6::decode(line).map_err(|e| anyhow!("line {}: {e}", i + 1))?);
    }
    let r = switching_reachability(&graphs);
    let text = format!(
        "{} classes, {} switch edges, connected: {}, components {:?}, results outside the input: {}",
        r.nodes.len(),
        r.edges.len(),
        r.connected,
        r.component_sizes,
        r.outside_classes
    );
    Ok(Outcome::new("switch-explore", json!(r), text, OK))
}

fn verify(suite: Suite, max: Option<usize>) -> Outcome {
    let r: TheoremReport = match suite {
        Suite::Basic => verify_basic_families(max.unwrap_or(24)),
        Suite::Gp => verify_gp(max.unwrap_or(36)),
        Suite::Htg => verify_htg(max.unwrap_or(48)),
        Suite::Xn => verify_xn(max.unwrap_or(6)),
        Suite::Table2 => verify_table2(max.unwrap_or(18)),
    };
    let mut text = format!("{} ({}): {}/{} agree", r.theorem, r.range, r.agree, r.scanned);
    for d in &r.disagreements {
        text.push_str(&format!("\n  disagreement {}: computed {}, predicted {}", d.subject, d.computed, d.predicted));
    }
    for o in &r.observations {
        let mark = if o.consistent { "ok" } else { "differs" };
        text.push_str(&format!(
            "\n  {} [{}]: {} (reference {}) {mark}",
            o.subject,
            o.property,
            o.computed,
            o.reference.join(" / ")
        ));
    }
    let code = if r.passed() { OK } else { DISAGREEMENT };
    Outcome::new("theorem-report", json!(r), text, code)
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?)
}

fn run(cli: Cli) -> Result<Outcome> {
    let budget = cli.budget;
    let single = pool(1)?;
    let scan = pool(cli.workers.unwrap_or_else(rayon::current_num_threads))?;
    match &cli.command {
        Command::Gamma { graph, k } => {
            let g = parse_graph(graph)?;
            single.install(|| gamma(&g, graph, *k, budget))
        }
        Command::Rdr { graph, d, enumerate, modulo } => {
            let g = parse_graph(graph)?;
            Ok(single.install(|| rdr(&g, graph, *d, *enumerate, *modulo, budget)))
        }
        Command::Signature { graph } => signature(&parse_graph(graph)?, graph),
        Command::Iso { a, b } => {
            let (ga, gb) = (parse_graph(a)?, parse_graph(b)?);
            let map = isomorphism(&ga, &gb);
            let text = format!("{a} ~ {b}: {}", map.is_some());
            Ok(Outcome::new("iso", json!({ "a": a, "b": b, "isomorphic": map.is_some(), "mapping": map }), text, OK))
        }
        Command::Criteria { graph, krit } => {
            let g = parse_graph(graph)?;
            single.install(|| criteria(&g, graph, *krit))
        }
        Command::Census { n, row: _, emit_g6 } => scan.install(|| census(*n, *emit_g6, budget)),
        Command::SwitchExplore { file } => scan.install(|| switch_explore(file)),
        Command::Verify { suite, max } => Ok(scan.install(|| verify(*suite, *max))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let format = cli.format;
    let emit_lines = matches!(cli.command, Command::Census { emit_g6: true, .. });
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let body = if format == Format::Text || emit_lines {
                out.text
            } else {
                serde_json::to_string_pretty(&out.report).expect("reports serialize")
            };
            if writeln!(stdout, "{body}").is_err() {
                return ExitCode::from(USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
