//! Exhaustive search for contractible graphs violating the axiom.
//!
//! Graphs are processed level by level (by vertex count) in ascending
//! canonical-key order, in fixed-size chunks. Each chunk is audited in
//! parallel and merged in key order, so the report does not depend on the
//! number of workers. After every chunk the running totals can be written
//! to a checkpoint file, from which an interrupted run resumes.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::audit::{audit_with_verdict, violations_certified};
use crate::cache::MemoCache;
use crate::canon::CanonicalKey;
use crate::contract::{Decider, Policy};
use crate::enumerate::{connected_levels, EnumError};
use crate::g6::encode_graph6;
use crate::graph::Graph;

pub const DEFAULT_MAX_N: usize = 8;
pub const DEFAULT_CHUNK: usize = 2048;

const CHECKPOINT_MAGIC: &str = "hunt-checkpoint v1";

#[derive(Debug, Error)]
pub enum HuntError {
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error("checkpoint {path}: {msg}")]
    Checkpoint { path: PathBuf, msg: String },
    #[error("checkpoint was written with {field} = {found}, this run uses {expected}; refusing to resume")]
    Mismatch { field: &'static str, expected: String, found: String },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// The graphs to audit, grouped by vertex count and sorted by key.
#[derive(Clone, Debug)]
pub struct HuntInput {
    levels: Vec<(usize, Vec<CanonicalKey>)>,
    source: String,
    max_n: Option<usize>,
}

impl HuntInput {
    /// Every connected graph on `1..=max_n` vertices.
    pub fn enumerated(max_n: usize) -> Result<Self, HuntError> {
        let levels = connected_levels(max_n)?;
        Ok(HuntInput {
            levels: levels.into_iter().enumerate().map(|(i, keys)| (i + 1, keys)).collect(),
            source: "enumerate".to_string(),
            max_n: Some(max_n),
        })
    }

    /// Isomorphism classes of `graphs`, optionally dropping those with more
    /// than `max_n` vertices. The source descriptor fingerprints the
    /// resulting classes, so two streams with the same classes resume each
    /// other's checkpoints.
    pub fn from_graphs<I: IntoIterator<Item = Graph>>(graphs: I, max_n: Option<usize>) -> Self {
        let mut keys: Vec<CanonicalKey> = graphs
            .into_iter()
            .filter(|g| max_n.is_none_or(|m| g.n() <= m))
            .map(|g| g.canonical_key())
            .collect();
        // keys lead with the vertex count, so this also groups by level
        keys.sort_unstable();
        keys.dedup();
        let mut hash = Fnv::new();
        for k in &keys {
            hash.write(k.as_bytes());
            hash.write(&[0xff]);
        }
        let source = format!("graph6:{}:{:016x}", keys.len(), hash.0);
        let mut levels: Vec<(usize, Vec<CanonicalKey>)> = Vec::new();
        for k in keys {
            match levels.last_mut() {
                Some((n, ks)) if *n == k.n() => ks.push(k),
                _ => levels.push((k.n(), vec![k])),
            }
        }
        HuntInput { levels, source, max_n }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn max_n(&self) -> Option<usize> {
        self.max_n
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|(_, ks)| ks.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct HuntConfig {
    pub policy: Policy,
    pub workers: usize,
    pub chunk_size: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop (as if killed) after this many chunks of the current run.
    pub stop_after_chunks: Option<usize>,
}

impl Default for HuntConfig {
    fn default() -> Self {
        HuntConfig {
            policy: Policy::default(),
            workers: 1,
            chunk_size: DEFAULT_CHUNK,
            checkpoint: None,
            stop_after_chunks: None,
        }
    }
}

/// Totals for one vertex count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub n: usize,
    pub graphs: u64,
    pub contractible: u64,
    /// Contractible graphs with an axiom violation.
    pub counterexamples: u64,
    /// Contractible graphs other than `K1` with fewer than two contractible
    /// vertices.
    pub below_two_contractible: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: usize,
    /// graph6 of the canonical representative.
    pub graph6: String,
    /// Violated vertices of the representative, as 1-based labels.
    pub violated: Vec<usize>,
    /// Every violation is backed by homology, not only by the search.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HuntReport {
    pub policy: String,
    pub source: String,
    pub max_n: Option<usize>,
    pub checkpoint_id: String,
    pub levels: Vec<LevelStats>,
    pub minimal_counterexample_n: Option<usize>,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl HuntReport {
    /// Counterexamples with the fewest vertices.
    pub fn minimal_counterexamples(&self) -> impl Iterator<Item = &Counterexample> {
        self.counterexamples.iter().filter(move |c| Some(c.n) == self.minimal_counterexample_n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Stable text form; wall time is deliberately left out.
impl fmt::Display for HuntReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "policy: {}", self.policy)?;
        writeln!(f, "source: {}", self.source)?;
        match self.max_n {
            Some(m) => writeln!(f, "max_n: {m}")?,
            None => writeln!(f, "max_n: none")?,
        }
        writeln!(f, "checkpoint_id: {}", self.checkpoint_id)?;
        writeln!(f, "n graphs contractible counterexamples below_two_contractible")?;
        for l in &self.levels {
            writeln!(f, "{} {} {} {} {}", l.n, l.graphs, l.contractible, l.counterexamples, l.below_two_contractible)?;
        }
        match (self.minimal_counterexample_n, self.max_n) {
            (Some(n), _) => writeln!(f, "minimal counterexample size: {n}")?,
            (None, Some(m)) => writeln!(f, "minimal counterexample size: none <= {m}")?,
            (None, None) => writeln!(f, "minimal counterexample size: none in input")?,
        }
        writeln!(f, "counterexamples: {}", self.counterexamples.len())?;
        for c in &self.counterexamples {
            let violated: Vec<String> = c.violated.iter().map(usize::to_string).collect();
            writeln!(f, "{} {} violated={} certified={}", c.n, c.graph6, violated.join(","), if c.certified { "yes" } else { "no" })?;
        }
        Ok(())
    }
}

/// Result of a possibly interrupted run.
#[derive(Clone, Debug)]
pub enum HuntOutcome {
    Complete(HuntReport),
    /// Stopped by `stop_after_chunks`; progress is in the checkpoint file.
    Interrupted { chunks_done: usize },
}

impl HuntOutcome {
    pub fn report(self) -> Option<HuntReport> {
        match self {
            HuntOutcome::Complete(r) => Some(r),
            HuntOutcome::Interrupted { .. } => None,
        }
    }
}

/// Progress and totals, as stored in a checkpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    /// Index into `HuntInput::levels` and position within that level.
    level: usize,
    next: usize,
    last: Option<CanonicalKey>,
    stats: Vec<LevelStats>,
    found: Vec<Found>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Found {
    key: CanonicalKey,
    violated: Vec<usize>,
    certified: bool,
}

pub fn hunt(input: &HuntInput, config: &HuntConfig, cache: &MemoCache) -> Result<HuntOutcome, HuntError> {
    let started = Instant::now();
    let descriptor = Descriptor::new(input, config.policy);
    let mut state = match &config.checkpoint {
        Some(path) if path.exists() => load_checkpoint(path, &descriptor, input)?,
        _ => State {
            level: 0,
            next: 0,
            last: None,
            stats: input.levels.iter().map(|(n, _)| LevelStats { n: *n, ..Default::default() }).collect(),
            found: Vec::new(),
        },
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| HuntError::Pool(e.to_string()))?;
    let decider = Decider::new(cache, config.policy);
    let chunk = config.chunk_size.max(1);
    let mut chunks_done = 0;

    while state.level < input.levels.len() {
        let keys = &input.levels[state.level].1;
        if state.next >= keys.len() {
            state.level += 1;
            state.next = 0;
            continue;
        }
        if config.stop_after_chunks == Some(chunks_done) {
            return Ok(HuntOutcome::Interrupted { chunks_done });
        }
        let end = (state.next + chunk).min(keys.len());
        let slice = &keys[state.next..end];
        let audits: Vec<GraphAudit> = pool.install(|| slice.par_iter().map(|k| audit_one(&decider, k)).collect());
        let stats = &mut state.stats[state.level];
        for (a, key) in audits.into_iter().zip(slice) {
            stats.graphs += 1;
            if a.contractible {
                stats.contractible += 1;
                if a.contractible_vertices < 2 && key.n() >= 2 {
                    stats.below_two_contractible += 1;
                }
                if !a.violated.is_empty() {
                    stats.counterexamples += 1;
                    state.found.push(Found { key: key.clone(), violated: a.violated, certified: a.certified });
                }
            }
        }
        state.next = end;
        state.last = Some(keys[end - 1].clone());
        chunks_done += 1;
        if let Some(path) = &config.checkpoint {
            save_checkpoint(path, &descriptor, &state)?;
        }
    }

    let counterexamples: Vec<Counterexample> = state
        .found
        .iter()
        .map(|f| Counterexample {
            n: f.key.n(),
            graph6: encode_graph6(&f.key.to_graph()),
            violated: f.violated.iter().map(|v| v + 1).collect(),
            certified: f.certified,
        })
        .collect();
    Ok(HuntOutcome::Complete(HuntReport {
        policy: config.policy.to_string(),
        source: input.source.clone(),
        max_n: input.max_n,
        checkpoint_id: descriptor.id(),
        levels: state.stats,
        minimal_counterexample_n: counterexamples.iter().map(|c| c.n).min(),
        counterexamples,
        wall_time: started.elapsed(),
    }))
}

struct GraphAudit {
    contractible: bool,
    contractible_vertices: usize,
    violated: Vec<usize>,
    certified: bool,
}

fn audit_one(d: &Decider, key: &CanonicalKey) -> GraphAudit {
    let g = key.to_graph();
    if !d.is_contractible(&g) {
        return GraphAudit { contractible: false, contractible_vertices: 0, violated: Vec::new(), certified: false };
    }
    let report = audit_with_verdict(d, &g, true);
    GraphAudit {
        contractible: true,
        contractible_vertices: d.contractible_vertices(&g).len(),
        certified: !report.violations.is_empty() && violations_certified(&g, &report),
        violated: report.violations,
    }
}

/// What a checkpoint must agree on before it may be resumed.
struct Descriptor {
    policy: String,
    source: String,
    max_n: String,
}

impl Descriptor {
    fn new(input: &HuntInput, policy: Policy) -> Self {
        Descriptor {
            policy: policy.to_string(),
            source: input.source.clone(),
            max_n: input.max_n.map_or_else(|| "none".to_string(), |m| m.to_string()),
        }
    }

    fn id(&self) -> String {
        let mut h = Fnv::new();
        for part in [&self.policy, &self.source, &self.max_n] {
            h.write(part.as_bytes());
            h.write(&[0]);
        }
        format!("{:016x}", h.0)
    }
}

fn save_checkpoint(path: &Path, d: &Descriptor, s: &State) -> Result<(), HuntError> {
    let mut text = String::new();
    let n = s.stats.get(s.level).map_or_else(|| "done".to_string(), |l| l.n.to_string());
    let last = s.last.as_ref().map_or_else(|| "-".to_string(), CanonicalKey::to_hex);
    writeln!(
        text,
        "{CHECKPOINT_MAGIC} policy={} source={} max_n={} level={} n={n} next={} last={last}",
        d.policy, d.source, d.max_n, s.level, s.next
    )
    .expect("write to string");
    for l in &s.stats {
        writeln!(text, "count {} {} {} {} {}", l.n, l.graphs, l.contractible, l.counterexamples, l.below_two_contractible)
            .expect("write to string");
    }
    for f in &s.found {
        let vs: Vec<String> = f.violated.iter().map(usize::to_string).collect();
        writeln!(text, "found {} {} {}", f.key.to_hex(), vs.join(","), u8::from(f.certified)).expect("write to string");
    }
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| HuntError::Checkpoint { path: path.to_path_buf(), msg: e.to_string() };
    fs::write(&tmp, text).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn load_checkpoint(path: &Path, d: &Descriptor, input: &HuntInput) -> Result<State, HuntError> {
    let bad = |msg: &str| HuntError::Checkpoint { path: path.to_path_buf(), msg: msg.to_string() };
    let text = fs::read_to_string(path).map_err(|e| bad(&e.to_string()))?;
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| bad("empty file"))?;
    let rest = head.strip_prefix(CHECKPOINT_MAGIC).ok_or_else(|| bad("not a hunt checkpoint"))?;
    let field = |name: &str| -> Result<&str, HuntError> {
        rest.split_whitespace()
            .find_map(|kv| kv.strip_prefix(name).and_then(|v| v.strip_prefix('=')))
            .ok_or_else(|| bad(&format!("missing {name}")))
    };
    for (name, expected) in [("policy", &d.policy), ("source", &d.source), ("max_n", &d.max_n)] {
        let found = field(name)?;
        if found != expected.as_str() {
            return Err(HuntError::Mismatch { field: name, expected: expected.clone(), found: found.to_string() });
        }
    }
    let number = |name: &str| -> Result<usize, HuntError> {
        field(name)?.parse().map_err(|_| bad(&format!("bad {name}")))
    };
    let level = number("level")?;
    let next = number("next")?;
    let last = match field("last")? {
        "-" => None,
        hex => Some(CanonicalKey::from_hex(hex).ok_or_else(|| bad("bad last key"))?),
    };
    if level > input.levels.len() || (level < input.levels.len() && next > input.levels[level].1.len()) {
        return Err(bad("frontier outside the input"));
    }
    if next > 0 && last.as_ref() != Some(&input.levels[level].1[next - 1]) {
        return Err(bad("frontier key does not match the input"));
    }

    let mut stats = Vec::new();
    let mut found = Vec::new();
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["count", nums @ ..] if nums.len() == 5 => {
                let v: Vec<u64> = nums.iter().map(|x| x.parse()).collect::<Result<_, _>>().map_err(|_| bad("bad count line"))?;
                stats.push(LevelStats {
                    n: v[0] as usize,
                    graphs: v[1],
                    contractible: v[2],
                    counterexamples: v[3],
                    below_two_contractible: v[4],
                });
            }
            ["found", hex, vs, cert @ ("0" | "1")] => {
                let key = CanonicalKey::from_hex(hex).ok_or_else(|| bad("bad found key"))?;
                let violated = vs.split(',').map(str::parse).collect::<Result<_, _>>().map_err(|_| bad("bad found line"))?;
                found.push(Found { key, violated, certified: *cert == "1" });
            }
            [] => {}
            _ => return Err(bad(&format!("unrecognised line {line:?}"))),
        }
    }
    let expected_ns: Vec<usize> = input.levels.iter().map(|(n, _)| *n).collect();
    if stats.iter().map(|l| l.n).collect::<Vec<_>>() != expected_ns {
        return Err(bad("count block does not match the input levels"));
    }
    Ok(State { level, next, last, stats, found })
}

/// 64-bit FNV-1a, used for stable fingerprints.
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}
