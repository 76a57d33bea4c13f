//! The `contract` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! status together with everything that would be printed, so the binary is a
//! thin wrapper and the commands are testable in-process. Exit statuses:
//! 0 success / property holds, 1 property fails, 2 usage, input or I/O
//! error, 3 hunt interrupted on request.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::audit::{audit_axiom, audit_min_contractible_vertices, AxiomReport};
use crate::cache::{MemoCache, CACHE_ENV};
use crate::contract::{Decider, Move, MoveSet, Policy};
use crate::fixtures;
use crate::g6::{encode_graph6, read_graph6};
use crate::graph::Graph;
use crate::homology::{self, betti_of, clique_complex, full_clique_complex, smith_normal_form, Field};
use crate::hunt::{hunt, HuntConfig, HuntInput, HuntOutcome, DEFAULT_CHUNK, DEFAULT_MAX_N};

#[derive(Debug, Parser)]
#[command(name = "contract", version, about = "Contractible graph transformations")]
pub struct Cli {
    /// Persistent verdict cache (falls back to $CONTRACT_CACHE).
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Allowed deletions: `i1` (vertices) or `i1i3` (vertices and edges).
    #[arg(long, global = true, default_value = "i1i3")]
    pub policy: MoveSet,
    /// Number of gluing moves the search may interleave.
    #[arg(long, global = true, default_value_t = 0)]
    pub glue_depth: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide contractibility.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Also print a deletion sequence reaching K1.
        #[arg(long)]
        certificate: bool,
    },
    /// Audit the nonadjacent-pair axiom and count contractible vertices.
    Audit {
        #[command(flatten)]
        input: InputArgs,
    },
    /// f-vector and Betti numbers of the clique complex.
    Homology {
        #[command(flatten)]
        input: InputArgs,
        /// Also print integral invariant factors of every boundary map.
        #[arg(long)]
        snf: bool,
        /// Highest dimension to report (default: the whole complex).
        #[arg(long)]
        pmax: Option<usize>,
    },
    /// Audit every connected graph (or every graph of a graph6 stream).
    Hunt {
        /// Largest vertex count (default 8; with --g6, a filter).
        #[arg(long)]
        max_n: Option<usize>,
        /// Audit the graphs of this graph6 file instead (`-` for stdin).
        #[arg(long, value_name = "PATH")]
        g6: Option<String>,
        /// Resume from and record progress in this file.
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CHUNK)]
        chunk_size: usize,
        #[arg(long, hide = true)]
        stop_after_chunks: Option<usize>,
    },
    /// Apply a move script (1-based labels) and print the result as graph6.
    Transform {
        #[command(flatten)]
        input: InputArgs,
        /// File with one move per line (`-` for stdin).
        #[arg(long, value_name = "PATH")]
        script: Option<String>,
        /// A single move, e.g. "glue-vertex 1,2"; repeatable.
        #[arg(long = "move", value_name = "MOVE")]
        moves: Vec<String>,
    },
    /// Check every stated property of the heart graph.
    VerifyPaper {
        /// Edge-list file to check instead of the bundled fixture.
        #[arg(long, value_name = "PATH")]
        fixture_file: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Bundled fixture name.
    #[arg(long)]
    pub fixture: Option<String>,
    /// graph6 file with a single graph (`-` for stdin).
    #[arg(long, value_name = "PATH")]
    pub g6: Option<String>,
    /// Edge-list file (`n <count>` header, 1-based pairs).
    #[arg(long, value_name = "PATH")]
    pub edges: Option<PathBuf>,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(msg: impl std::fmt::Display) -> Self {
        Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

pub fn run<I, T>(args: I, stdin: &mut dyn BufRead) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(0, text)
            };
        }
    };
    execute(&cli, stdin)
}

pub fn execute(cli: &Cli, stdin: &mut dyn BufRead) -> Outcome {
    let cache = match open_cache(cli.cache.as_deref()) {
        Ok(c) => c,
        Err(msg) => return Outcome::error(msg),
    };
    let policy = Policy::new(cli.policy, cli.glue_depth);
    let result = match &cli.command {
        Command::Check { input, certificate } => {
            read_input(input, stdin).map(|g| cmd_check(&g, &Decider::new(&cache, policy), *certificate, cli.json))
        }
        Command::Audit { input } => read_input(input, stdin).map(|g| cmd_audit(&g, &Decider::new(&cache, policy), cli.json)),
        Command::Homology { input, snf, pmax } => read_input(input, stdin).and_then(|g| cmd_homology(&g, *snf, *pmax, cli.json)),
        Command::Hunt { max_n, g6, checkpoint, workers, chunk_size, stop_after_chunks } => {
            let config = HuntConfig {
                policy,
                workers: workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from)),
                chunk_size: *chunk_size,
                checkpoint: checkpoint.clone(),
                stop_after_chunks: *stop_after_chunks,
            };
            cmd_hunt(*max_n, g6.as_deref(), &config, &cache, stdin, cli.json)
        }
        Command::Transform { input, script, moves } => {
            read_input(input, stdin).and_then(|g| cmd_transform(&g, script.as_deref(), moves, &Decider::new(&cache, policy), input, stdin, cli.json))
        }
        Command::VerifyPaper { fixture_file } => {
            load_fixture(fixture_file.as_deref()).map(|g| cmd_verify_paper(&g, &Decider::new(&cache, policy), cli.json))
        }
    };
    result.unwrap_or_else(Outcome::error)
}

fn open_cache(flag: Option<&Path>) -> Result<MemoCache, String> {
    let path = flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).filter(|p| !p.is_empty()).map(PathBuf::from));
    match path {
        Some(p) => MemoCache::open(&p).map_err(|e| format!("cache {}: {e}", p.display())),
        None => Ok(MemoCache::new()),
    }
}

fn read_source(path: &str, stdin: &mut dyn BufRead) -> Result<Vec<u8>, String> {
    if path == "-" {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn read_input(input: &InputArgs, stdin: &mut dyn BufRead) -> Result<Graph, String> {
    if let Some(name) = &input.fixture {
        return match fixtures::by_name(name) {
            Some(g) => g.map_err(|e| e.to_string()),
            None => Err(format!("unknown fixture {name:?} (known: {})", fixtures::NAMES.join(", "))),
        };
    }
    if let Some(path) = &input.g6 {
        let bytes = read_source(path, stdin)?;
        let mut graphs = read_graph6(&bytes[..]).map_err(|e| format!("{path}: {e}"))?;
        return match graphs.len() {
            1 => Ok(graphs.pop().expect("one graph")),
            k => Err(format!("{path}: expected exactly one graph, found {k}")),
        };
    }
    let path = input.edges.as_ref().expect("clap enforces one input");
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Graph::parse_edge_list(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_fixture(path: Option<&Path>) -> Result<Graph, String> {
    match path {
        None => Ok(fixtures::heart()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("fixture {}: {e}", p.display()))?;
            Graph::parse_edge_list(&text).map_err(|e| format!("fixture {}: {e}", p.display()))
        }
    }
}

fn one_based(vs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    vs.into_iter().map(|v| v + 1).collect()
}

fn join(vs: &[usize]) -> String {
    if vs.is_empty() {
        return "-".to_string();
    }
    vs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_check(g: &Graph, d: &Decider, certificate: bool, as_json: bool) -> Outcome {
    let (verdict, cert) = if certificate { d.check(g) } else { (d.is_contractible(g), None) };
    let code = if verdict { 0 } else { 1 };
    let steps: Option<Vec<String>> = cert.map(|c| c.steps.iter().map(|m| m.to_text(1)).collect());
    if as_json {
        return Outcome::ok(
            code,
            to_json(&json!({
                "graph6": encode_graph6(g),
                "n": g.n(),
                "policy": d.policy().to_string(),
                "contractible": verdict,
                "certificate": steps,
            })),
        );
    }
    let mut out = format!("contractible: {}\npolicy: {}\n", yes(verdict), d.policy());
    if let Some(steps) = steps {
        out.push_str("certificate:\n");
        for s in steps {
            let _ = writeln!(out, "  {s}");
        }
    }
    Outcome::ok(code, out)
}

#[derive(Serialize)]
struct AuditOutput {
    #[serde(flatten)]
    report: AxiomReport,
    contractible_vertices: Vec<usize>,
    two_contractible_vertices: bool,
}

pub fn cmd_audit(g: &Graph, d: &Decider, as_json: bool) -> Outcome {
    let report = audit_axiom(d, g).relabeled(1);
    let cv = one_based(d.contractible_vertices(g));
    let claim = audit_min_contractible_vertices(d, g);
    let code = if report.is_counterexample { 1 } else { 0 };
    if as_json {
        let out = AuditOutput { report, contractible_vertices: cv, two_contractible_vertices: claim.claim_holds };
        return Outcome::ok(code, to_json(&out));
    }
    let mut out = String::new();
    let _ = writeln!(out, "graph: {}", report.graph);
    let _ = writeln!(out, "contractible: {}", yes(report.contractible));
    for r in &report.vertices {
        let status = if r.vacuous {
            "vacuous"
        } else if r.violated {
            "violated"
        } else {
            "witnessed"
        };
        let _ = writeln!(out, "vertex {}: nonadjacent {} witnesses {} {status}", r.vertex, join(&r.nonadjacent), join(&r.witnesses));
    }
    let _ = writeln!(out, "violations: {}", join(&report.violations));
    let _ = writeln!(out, "is_counterexample: {}", yes(report.is_counterexample));
    let _ = writeln!(out, "contractible vertices: {} ({})", cv.len(), join(&cv));
    let _ = writeln!(out, "two contractible vertices: {}", if claim.claim_holds { "holds" } else { "fails" });
    Outcome::ok(code, out)
}

pub fn cmd_homology(g: &Graph, snf: bool, pmax: Option<usize>, as_json: bool) -> Result<Outcome, String> {
    let c = match pmax {
        Some(p) => clique_complex(g, p + 1),
        None => full_clique_complex(g),
    };
    let top = pmax.unwrap_or(c.dimension());
    let clip = |mut v: Vec<usize>| {
        v.truncate(top + 1);
        v
    };
    let f_vector = clip(c.f_vector());
    let mut betti = Vec::new();
    for field in [Field::Gf2, Field::Rational] {
        for reduced in [false, true] {
            betti.push((field, reduced, clip(betti_of(&c, field, reduced).betti)));
        }
    }
    let euler: i64 = f_vector.iter().enumerate().map(|(p, &f)| if p % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
    let mut factors = Vec::new();
    if snf {
        for p in 1..=top.min(c.dimension()) {
            let d = smith_normal_form(&c.boundary_matrix(p)).map_err(|e| e.to_string())?;
            factors.push((p, d.factors));
        }
    }
    let integral = if snf && pmax.is_none() { Some(homology::integral_homology(g).map_err(|e| e.to_string())?) } else { None };

    if as_json {
        let betti_json: Vec<_> = betti
            .iter()
            .map(|(f, r, b)| json!({"field": f, "reduced": r, "betti": b}))
            .collect();
        let snf_json: Vec<_> = factors.iter().map(|(p, d)| json!({"boundary": p, "factors": d})).collect();
        return Ok(Outcome::ok(
            0,
            to_json(&json!({
                "f_vector": f_vector,
                "euler_characteristic": euler,
                "betti": betti_json,
                "snf": if snf { Some(snf_json) } else { None },
                "integral_homology": integral,
            })),
        ));
    }
    let nums = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "f_vector: {}", nums(&f_vector));
    for (field, reduced, b) in &betti {
        let _ = writeln!(out, "{}betti_{}: {}", if *reduced { "reduced_" } else { "" }, field.to_string().to_lowercase(), nums(b));
    }
    let _ = writeln!(out, "euler_characteristic: {euler}");
    for (p, d) in &factors {
        let ds: Vec<String> = d.iter().map(i128::to_string).collect();
        let _ = writeln!(out, "snf_d{p}: {}", ds.join(" "));
    }
    if let Some(groups) = integral {
        for (p, h) in groups.iter().enumerate() {
            let t: Vec<String> = h.torsion.iter().map(i128::to_string).collect();
            let _ = writeln!(out, "integral_h{p}: rank={} torsion={}", h.rank, if t.is_empty() { "-".to_string() } else { t.join(",") });
        }
    }
    Ok(Outcome::ok(0, out))
}

fn cmd_hunt(
    max_n: Option<usize>,
    g6: Option<&str>,
    config: &HuntConfig,
    cache: &MemoCache,
    stdin: &mut dyn BufRead,
    as_json: bool,
) -> Result<Outcome, String> {
    let input = match g6 {
        Some(path) => {
            let bytes = read_source(path, stdin)?;
            let graphs = read_graph6(&bytes[..]).map_err(|e| format!("{path}: {e}"))?;
            HuntInput::from_graphs(graphs, max_n)
        }
        None => HuntInput::enumerated(max_n.unwrap_or(DEFAULT_MAX_N)).map_err(|e| e.to_string())?,
    };
    match hunt(&input, config, cache).map_err(|e| e.to_string())? {
        HuntOutcome::Complete(report) => {
            let stdout = if as_json { format!("{}\n", report.to_json()) } else { report.to_string() };
            Ok(Outcome { code: 0, stdout, stderr: format!("wall time: {:.3} s\n", report.wall_time.as_secs_f64()) })
        }
        HuntOutcome::Interrupted { chunks_done } => Ok(Outcome {
            code: 3,
            stdout: String::new(),
            stderr: format!("interrupted after {chunks_done} chunks; rerun with the same --checkpoint to resume\n"),
        }),
    }
}

fn cmd_transform(
    g: &Graph,
    script: Option<&str>,
    moves: &[String],
    d: &Decider,
    input: &InputArgs,
    stdin: &mut dyn BufRead,
    as_json: bool,
) -> Result<Outcome, String> {
    let mut lines: Vec<(String, String)> = Vec::new();
    if let Some(path) = script {
        if path == "-" && input.g6.as_deref() == Some("-") {
            return Err("the graph and the script cannot both come from stdin".to_string());
        }
        let text = String::from_utf8(read_source(path, stdin)?).map_err(|_| format!("{path}: not UTF-8"))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                lines.push((format!("{path}:{}", i + 1), line.to_string()));
            }
        }
    }
    for (i, m) in moves.iter().enumerate() {
        lines.push((format!("--move #{}", i + 1), m.trim().to_string()));
    }
    let mut cur = g.clone();
    for (at, text) in &lines {
        let m = Move::parse(text, 1).map_err(|e| format!("{at}: {e}"))?;
        let named: Vec<usize> = match &m {
            Move::DeleteVertex(v) => vec![*v],
            Move::GlueVertex(s) => s.iter().collect(),
            Move::DeleteEdge(u, v) | Move::GlueEdge(u, v) => vec![*u, *v],
        };
        if let Some(v) = named.iter().find(|&&v| v >= cur.n()) {
            return Err(format!("{at}: vertex {} out of range 1..={}", v + 1, cur.n()));
        }
        match d.apply_move(&cur, &m) {
            Ok(next) => cur = next,
            Err(e) => {
                return Ok(Outcome { code: 1, stdout: String::new(), stderr: format!("{at}: {text}: {e}\n") });
            }
        }
    }
    let g6 = encode_graph6(&cur);
    let stdout = if as_json {
        to_json(&json!({"graph6": g6, "n": cur.n(), "moves": lines.len()}))
    } else {
        format!("{g6}\n")
    };
    Ok(Outcome::ok(0, stdout))
}

/// One row of the heart-graph claim table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub pass: bool,
    pub detail: String,
}

/// Vertex 1 and the vertices it must miss, 0-based.
const HUB: usize = 0;
const MISSED: [usize; 4] = [7, 8, 10, 11];

/// The five stated properties of the heart graph, evaluated on `g`.
pub fn heart_claims(g: &Graph, d: &Decider) -> Vec<Claim> {
    let missed = one_based(MISSED);
    let present = MISSED.iter().all(|&u| u < g.n());
    let mut claims = Vec::new();

    let contractible = d.is_contractible(g);
    claims.push(Claim { claim: "graph is contractible".into(), pass: contractible, detail: format!("policy {}", d.policy()) });

    let adjacent: Vec<usize> = MISSED.iter().copied().filter(|&u| u >= g.n() || g.has_edge(HUB, u)).collect();
    claims.push(Claim {
        claim: format!("vertex 1 is nonadjacent to {}", join(&missed)),
        pass: present && adjacent.is_empty(),
        detail: if present { format!("adjacent: {}", join(&one_based(adjacent.iter().copied()))) } else { format!("only {} vertices", g.n()) },
    });

    let contractible_links: Vec<usize> = MISSED
        .iter()
        .copied()
        .filter(|&u| u < g.n() && !g.has_edge(HUB, u))
        .filter(|&u| d.is_contractible_set(g, g.neighbors(HUB).intersection(g.neighbors(u))))
        .collect();
    claims.push(Claim {
        claim: format!("O(1,u) is not contractible for u in {}", join(&missed)),
        pass: present && adjacent.is_empty() && contractible_links.is_empty(),
        detail: format!("contractible for: {}", join(&one_based(contractible_links))),
    });

    let cv = one_based(d.contractible_vertices(g));
    claims.push(Claim {
        claim: "no vertex has a contractible neighbourhood".into(),
        pass: cv.is_empty(),
        detail: format!("contractible vertices: {}", join(&cv)),
    });

    let gf2 = homology::betti(g, Field::Gf2, true);
    let q = homology::betti(g, Field::Rational, true);
    claims.push(Claim {
        claim: "reduced Betti numbers vanish over GF2 and Q".into(),
        pass: gf2.is_zero() && q.is_zero(),
        detail: format!("GF2 {gf2}, Q {q}"),
    });
    claims
}

pub fn cmd_verify_paper(g: &Graph, d: &Decider, as_json: bool) -> Outcome {
    let claims = heart_claims(g, d);
    let all = claims.iter().all(|c| c.pass);
    let code = if all { 0 } else { 1 };
    if as_json {
        return Outcome::ok(code, to_json(&json!({"claims": claims, "all_pass": all})));
    }
    let width = claims.iter().map(|c| c.claim.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in &claims {
        let _ = writeln!(out, "{:<width$}  {}  {}", c.claim, if c.pass { "PASS" } else { "FAIL" }, c.detail);
    }
    let _ = writeln!(out, "{}", if all { "all claims pass" } else { "some claims fail" });
    Outcome::ok(code, out)
}
