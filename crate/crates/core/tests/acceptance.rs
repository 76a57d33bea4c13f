//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! status if any criterion fails.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use contractible::audit::audit_axiom;
use contractible::cli::heart_claims;
use contractible::enumerate::{connected_levels, enumerate_connected};
use contractible::g6::{read_graph6, G6Error};
use contractible::homology::{betti, full_clique_complex, same_homology, Field};
use contractible::{
    decode_graph6, encode_graph6, fixtures, replay_certificate, Decider, Graph, MemoCache, Move, Policy, VertexSet,
};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn contract(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contract"))
        .args(args)
        .env_remove("CONTRACT_CACHE")
        .stdin(Stdio::null())
        .output()
        .expect("binary runs")
}

fn cold() -> MemoCache {
    MemoCache::new()
}

fn heart_reproduction() -> Outcome {
    let started = Instant::now();
    let out = contract(&["verify-paper"]);
    let elapsed = started.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), || format!("exit {:?}: {text}", out.status.code()))?;
    let passes = text.lines().filter(|l| l.contains(" PASS ")).count();
    ensure(passes == 5 && !text.contains(" FAIL "), || format!("expected five passing claims:\n{text}"))?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;

    let g = fixtures::heart();
    let cache = cold();
    let d = Decider::new(&cache, Policy::default());
    let claims = heart_claims(&g, &d);
    ensure(claims.len() == 5 && claims.iter().all(|c| c.pass), || format!("{claims:?}"))?;
    // the same facts, straight from the graph
    ensure(d.is_contractible(&g), || "heart not contractible".into())?;
    for u in [7, 8, 10, 11] {
        ensure(!g.has_edge(0, u), || format!("1 adjacent to {}", u + 1))?;
        let o = g.induced_subgraph(g.neighbors(0).intersection(g.neighbors(u))).unwrap();
        ensure(o.n() == 0 || !d.is_contractible(&o), || format!("O(1,{}) contractible", u + 1))?;
    }
    ensure(d.contractible_vertices(&g).is_empty(), || "heart has a contractible vertex".into())?;
    for f in [Field::Gf2, Field::Rational] {
        ensure(betti(&g, f, true).is_zero(), || format!("reduced {f} Betti nonzero"))?;
    }
    Ok(())
}

fn connected_labelled(n: usize) -> Vec<Graph> {
    common::all_labelled(n).filter(Graph::is_connected).collect()
}

fn soundness() -> Outcome {
    let policy = Policy::default();
    for n in 1..=6 {
        let brute = common::BruteCanon::new(n);
        let verdicts: Vec<(Vec<bool>, bool, Graph)> = connected_labelled(n)
            .into_par_iter()
            .map(|g| {
                let cache = cold();
                let v = Decider::new(&cache, policy).is_contractible(&g);
                (brute.key(&g), v, g)
            })
            .collect();
        let mut classes: HashMap<&[bool], bool> = HashMap::new();
        for (key, v, g) in &verdicts {
            if let Some(prev) = classes.insert(key, *v) {
                ensure(prev == *v, || format!("isomorphic copies disagree at {}", encode_graph6(g)))?;
            }
        }
        let failures: Vec<String> = verdicts
            .par_iter()
            .filter(|(_, v, _)| *v)
            .filter_map(|(_, _, g)| {
                let cache = cold();
                let cert = Decider::new(&cache, policy).certificate(g);
                let ok = cert.is_some_and(|c| replay_certificate(g, &c, policy).is_ok());
                (!ok).then(|| encode_graph6(g))
            })
            .collect();
        ensure(failures.is_empty(), || format!("certificates fail to replay: {failures:?}"))?;
        let cache = cold();
        let d = Decider::new(&cache, policy);
        for g in common::all_labelled(n) {
            ensure(!d.is_contractible(&g) || g.is_connected(), || format!("disconnected {} judged contractible", encode_graph6(&g)))?;
        }
    }
    Ok(())
}

fn homology_triviality() -> Outcome {
    let cache = cold();
    let d = Decider::new(&cache, Policy::default());
    let mut seen = 0;
    for level in connected_levels(7).unwrap() {
        for k in level {
            let g = k.to_graph();
            if d.is_contractible(&g) {
                seen += 1;
                for f in [Field::Gf2, Field::Rational] {
                    let b = betti(&g, f, true);
                    ensure(b.is_zero(), || format!("{} has reduced {f} Betti {b}", encode_graph6(&g)))?;
                }
            }
        }
    }
    ensure(seen > 400, || format!("only {seen} contractible graphs"))
}

fn legal_moves(d: &Decider, g: &Graph) -> Vec<Move> {
    let n = g.n();
    let mut moves = Vec::new();
    for v in 0..n {
        if n >= 2 && d.can_delete_vertex(g, v).unwrap() {
            moves.push(Move::DeleteVertex(v));
        }
    }
    for (u, v) in common::pairs(n) {
        if g.has_edge(u, v) {
            if d.can_delete_edge(g, u, v).unwrap() {
                moves.push(Move::DeleteEdge(u, v));
            }
        } else if d.can_glue_edge(g, u, v).unwrap() {
            moves.push(Move::GlueEdge(u, v));
        }
    }
    for bits in 1..1u64 << n {
        let s = VertexSet::from_bits(bits);
        if s.len() <= 4 && d.can_glue_vertex(g, s).unwrap() {
            moves.push(Move::GlueVertex(s));
        }
    }
    moves
}

fn move_invariance() -> Outcome {
    let cache = cold();
    let d = Decider::new(&cache, Policy::default());
    let mut kinds = [0usize; 4];
    for level in connected_levels(6).unwrap() {
        for k in level {
            let g = k.to_graph();
            for m in legal_moves(&d, &g) {
                kinds[match m {
                    Move::DeleteVertex(_) => 0,
                    Move::GlueVertex(_) => 1,
                    Move::DeleteEdge(..) => 2,
                    Move::GlueEdge(..) => 3,
                }] += 1;
                let h = d.apply_move(&g, &m).unwrap();
                ensure(same_homology(&g, &h), || format!("{m:?} on {} changes homology", encode_graph6(&g)))?;
            }
        }
    }
    ensure(kinds.iter().all(|&c| c > 0), || format!("move kinds exercised: {kinds:?}"))
}

fn inverse_moves() -> Outcome {
    let mut rng = common::rng(2024);
    let graphs: Vec<Graph> = (0..1000)
        .map(|_| {
            let n = rng.gen_range(1..=10);
            let p = rng.gen_range(0.2..0.9);
            common::random_graph(&mut rng, n, p)
        })
        .collect();
    let checked: Result<Vec<usize>, String> = graphs
        .par_iter()
        .map(|g| {
            let cache = cold();
            let d = Decider::new(&cache, Policy::default());
            let mut count = 0;
            for (u, v) in common::pairs(g.n()) {
                if !g.has_edge(u, v) && d.can_glue_edge(g, u, v).unwrap() {
                    let h = d.apply_move(g, &Move::GlueEdge(u, v)).unwrap();
                    let back = d.apply_move(&h, &Move::DeleteEdge(u, v)).map_err(|e| e.to_string())?;
                    ensure(&back == g, || format!("edge {u},{v} on {}", encode_graph6(g)))?;
                    count += 1;
                }
            }
            for bits in 1..1u64 << g.n() {
                let s = VertexSet::from_bits(bits);
                if d.can_glue_vertex(g, s).unwrap() {
                    let h = d.apply_move(g, &Move::GlueVertex(s)).unwrap();
                    let back = d.apply_move(&h, &Move::DeleteVertex(g.n())).map_err(|e| e.to_string())?;
                    ensure(&back == g, || format!("vertex onto {bits:#b} on {}", encode_graph6(g)))?;
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect();
    let total: usize = checked?.into_iter().sum();
    ensure(total > 1000, || format!("only {total} inverse pairs exercised"))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Relabellings that fix the graph, by trying every permutation.
fn automorphisms(g: &Graph, perms: &[Vec<usize>]) -> u64 {
    perms.iter().filter(|p| g.permute(p).unwrap() == *g).count() as u64
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| (0..=k).map(move |i| {
                let mut q = p.clone();
                q.insert(i, k);
                q
            }))
            .collect();
    }
    out
}

fn enumeration_oracle() -> Outcome {
    for n in 1..=7 {
        let enumerated = enumerate_connected(n).unwrap();
        let pairs = common::pairs(n);
        let labelled: Vec<Graph> = (0u64..1 << pairs.len())
            .into_par_iter()
            .filter_map(|mask| {
                let edges: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                g.is_connected().then_some(g)
            })
            .collect();
        let mut buckets: Vec<_> = labelled.par_iter().map(Graph::canonical_key).collect();
        buckets.par_sort_unstable();
        buckets.dedup();
        ensure(buckets.len() == enumerated.len(), || {
            format!("n = {n}: {} buckets, {} enumerated", buckets.len(), enumerated.len())
        })?;
        // orbit counting, independent of the canonical labelling
        let perms = all_permutations(n);
        let orbit_total: u64 = enumerated.par_iter().map(|g| factorial(n) / automorphisms(g, &perms)).sum();
        ensure(orbit_total == labelled.len() as u64, || {
            format!("n = {n}: orbits cover {orbit_total} labelled graphs, generator made {}", labelled.len())
        })?;
        if n <= 6 {
            let brute = common::BruteCanon::new(n);
            let mut keys: Vec<Vec<bool>> = enumerated.iter().map(|g| brute.key(g)).collect();
            keys.sort();
            keys.dedup();
            ensure(keys.len() == enumerated.len(), || format!("n = {n}: duplicate classes"))?;
        }
        println!("    n = {n}: {} classes", enumerated.len());
    }
    Ok(())
}

fn hunt_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec!["hunt", "--max-n", "8"];
    args.extend_from_slice(extra);
    args
}

fn hunt_ok(extra: &[&str]) -> Result<String, String> {
    let out = contract(&hunt_args(extra));
    ensure(out.status.code() == Some(0), || {
        format!("{extra:?} exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(String::from_utf8(out.stdout).unwrap())
}

fn resumed(dir: &Path, tag: &str, chunk: &str, stop: &str) -> Result<String, String> {
    let ck = dir.join(tag);
    let ck = ck.to_str().unwrap();
    let first = contract(&hunt_args(&["--workers", "2", "--chunk-size", chunk, "--checkpoint", ck, "--stop-after-chunks", stop]));
    ensure(first.status.code() == Some(3), || format!("stop after {stop}: exit {:?}", first.status.code()))?;
    hunt_ok(&["--workers", "8", "--chunk-size", chunk, "--checkpoint", ck])
}

fn hunt_determinism() -> Outcome {
    let started = Instant::now();
    let one = hunt_ok(&["--workers", "1"])?;
    let eight = hunt_ok(&["--workers", "8"])?;
    ensure(one == eight, || "1 and 8 workers differ".into())?;

    let dir = tempfile::tempdir().unwrap();
    for (tag, chunk, stop) in [("a", "64", "1"), ("b", "64", "97"), ("c", "500", "23"), ("d", "7", "1500")] {
        let text = resumed(dir.path(), tag, chunk, stop)?;
        ensure(text == one, || format!("resume after {stop} chunks of {chunk} differs"))?;
    }

    // a real kill, mid-run
    let ck = dir.path().join("killed");
    let ck_s = ck.to_str().unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_contract"))
        .args(hunt_args(&["--workers", "4", "--chunk-size", "16", "--checkpoint", ck_s]))
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let deadline = Instant::now() + Duration::from_secs(30);
    while !ck.exists() && Instant::now() < deadline {
        std::thread::sleep(Duration::from_millis(5));
    }
    std::thread::sleep(Duration::from_millis(150));
    let killed = child.try_wait().unwrap().is_none();
    child.kill().ok();
    child.wait().unwrap();
    let after = hunt_ok(&["--workers", "8", "--chunk-size", "16", "--checkpoint", ck_s])?;
    ensure(after == one, || "resume after kill differs".into())?;
    println!("    kill landed mid-run: {}", if killed { "yes" } else { "no, run had finished" });

    let summary = one.lines().find(|l| l.starts_with("minimal counterexample size:"));
    ensure(summary.is_some(), || "no minimal counterexample line".into())?;
    println!("    {}", summary.unwrap());

    let mut reaudited = 0;
    for line in one.lines().skip_while(|l| !l.starts_with("counterexamples:")).skip(1) {
        let mut parts = line.split_whitespace();
        let (n, g6, violated) = (parts.next().unwrap(), parts.next().unwrap(), parts.next().unwrap());
        let g = decode_graph6(g6.as_bytes()).map_err(|e| e.to_string())?;
        ensure(n == g.n().to_string(), || format!("size mismatch in {line}"))?;
        let cache = cold();
        let report = audit_axiom(&Decider::new(&cache, Policy::default()), &g);
        let labels: Vec<String> = report.violations.iter().map(|v| (v + 1).to_string()).collect();
        ensure(report.is_counterexample, || format!("{g6} does not re-audit as a counterexample"))?;
        ensure(violated == format!("violated={}", labels.join(",")), || format!("{line} vs {labels:?}"))?;
        reaudited += 1;
    }
    println!("    re-audited {reaudited} reported counterexamples, {:.1} s total", started.elapsed().as_secs_f64());
    ensure(started.elapsed() < Duration::from_secs(1800), || "too slow".into())
}

fn graph6_codec() -> Outcome {
    let mut rng = common::rng(66);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen::<f64>();
        let g = common::random_graph(&mut rng, n, p);
        let s = encode_graph6(&g);
        ensure(decode_graph6(s.as_bytes()).as_ref() == Ok(&g), || format!("roundtrip fails for {s}"))?;
    }
    for (s, g) in [("@", Graph::new(1).unwrap()), ("C~", Graph::complete(4)), ("Bw", Graph::complete(3))] {
        ensure(decode_graph6(s.as_bytes()).as_ref() == Ok(&g), || format!("decode {s}"))?;
        ensure(encode_graph6(&g) == s, || format!("encode {s}"))?;
    }
    let cases: [(&[u8], fn(&G6Error) -> bool); 10] = [
        (b"", |e| matches!(e, G6Error::Empty)),
        (b"C~\t", |e| matches!(e, G6Error::ByteOutOfRange { .. })),
        (b"D?", |e| matches!(e, G6Error::Truncated { .. })),
        (b"Bx", |e| matches!(e, G6Error::NonzeroPadding { .. })),
        (b"Bw?", |e| matches!(e, G6Error::TrailingBytes { .. })),
        (b"?", |e| matches!(e, G6Error::VertexCount { .. })),
        (b"~?@@", |e| matches!(e, G6Error::VertexCount { .. })),
        (b"~??C", |e| matches!(e, G6Error::NonCanonicalSize { .. })),
        (b":Fa@x^", |e| matches!(e, G6Error::Unsupported { .. })),
        (b"&C?", |e| matches!(e, G6Error::Unsupported { .. })),
    ];
    for (input, check) in cases {
        let r = decode_graph6(input);
        ensure(r.as_ref().is_err_and(check), || format!("{:?} gave {r:?}", String::from_utf8_lossy(input)))?;
    }
    let stream = read_graph6("Bw\n\nC~\nBx\n".as_bytes());
    ensure(matches!(stream, Err(G6Error::Line { line: 4, .. })), || format!("stream error {stream:?}"))
}

fn euler_consistency() -> Outcome {
    let mut rng = common::rng(99);
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen::<f64>();
        let g = common::random_graph(&mut rng, n, p);
        let f = full_clique_complex(&g).f_vector();
        let chi: i64 = f.iter().enumerate().map(|(p, &x)| if p % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        for field in [Field::Gf2, Field::Rational] {
            let b = betti(&g, field, false);
            let alt: i64 = b.betti.iter().enumerate().map(|(p, &x)| if p % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            ensure(alt == chi, || format!("{}: f gives {chi}, {field} Betti give {alt}", encode_graph6(&g)))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("heart graph reproduction", heart_reproduction),
        ("membership soundness, n <= 6", soundness),
        ("contractible graphs are acyclic, n <= 7", homology_triviality),
        ("moves preserve Betti numbers, n <= 6", move_invariance),
        ("glue then delete is the identity", inverse_moves),
        ("enumeration matches brute force, n <= 7", enumeration_oracle),
        ("hunt determinism and re-audit", hunt_determinism),
        ("graph6 codec", graph6_codec),
        ("Euler characteristic consistency", euler_consistency),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {} {name}: PASS ({secs:.1} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({secs:.1} s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria pass", criteria.len());
}
