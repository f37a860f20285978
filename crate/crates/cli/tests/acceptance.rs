//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turan_core::constructions::{
    affine_plane, binomial, induced_matching_4graph, common_neighbour_violations, polarity_graph, shatter_design,
    star_matching,
};
use turan_core::io;
use turan_core::oracle::{brute_contains, exact_turan, random_free_instance};
use turan_core::sparsify::{sparsify, to_simple_graph, verify_terminal, SparsifyOutcome};
use turan_core::*;

type Outcome = std::result::Result<String, String>;
type Snapshot = Vec<(String, Vec<u8>)>;
type Criterion = (usize, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !($cond) {
            return Err(format!($($fmt)+));
        }
    };
}

fn random_bipartite(rng: &mut ChaCha8Rng, max_side: usize, density: f64) -> BipartiteGraph {
    let nl = rng.gen_range(2..=max_side);
    let nr = rng.gen_range(2..=max_side);
    let mut g = BipartiteGraph::new(nl, nr);
    for l in 0..nl {
        for r in 0..nr {
            if rng.gen_bool(density) {
                g.add_edge(l, r).unwrap();
            }
        }
    }
    g
}

fn random_uniform(rng: &mut ChaCha8Rng, r: usize, n: usize, density: f64) -> UniformHypergraph {
    let mut h = UniformHypergraph::new(r, n).unwrap();
    let mut edge = Vec::with_capacity(r);
    fn go(rng: &mut ChaCha8Rng, h: &mut UniformHypergraph, edge: &mut Vec<usize>, start: usize, p: f64) {
        if edge.len() == h.uniformity() {
            if rng.gen_bool(p) {
                h.insert(edge.clone()).unwrap();
            }
            return;
        }
        for v in start..h.n_vertices() {
            edge.push(v);
            go(rng, h, edge, v + 1, p);
            edge.pop();
        }
    }
    go(rng, &mut h, &mut edge, 0, density);
    h
}

/// Sparsifier runs shared by criteria 1 and 2.
fn sparsifier_runs() -> Vec<(BipartiteGraph, usize, SparsifyOutcome)> {
    let mut runs = Vec::new();
    for (di, density) in [0.3, 0.5, 0.8].into_iter().enumerate() {
        for q in [2, 4] {
            for seed in 0..40u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(1_000 * di as u64 + 100 * q as u64 + seed);
                let g = random_bipartite(&mut rng, 10, density);
                let out = sparsify(&g, q, Step2Policy::exhaustive()).expect("sparsify run");
                runs.push((g, q, out));
            }
        }
    }
    runs
}

fn criterion_1(runs: &[(BipartiteGraph, usize, SparsifyOutcome)]) -> Outcome {
    for (k, (g, q, out)) in runs.iter().enumerate() {
        let q = *q;
        let simple = to_simple_graph(&out.graph).to_hypergraph();
        ensure!(
            !brute_contains(&simple, &Pattern::K2qGraph { q }).unwrap(),
            "run {k}: output contains K_(2,{q})"
        );
        let report = verify_terminal(g, &out.graph, q, &out.records, Step2Mode::Exhaustive).unwrap();
        for name in ["edge_in_few_f_sets", "record_sizes", "f_within_original_neighbourhood", "no_large_broom"] {
            let clause = report.clause(name).unwrap();
            ensure!(clause.pass, "run {k}: clause {name} failed: {}", clause.detail);
        }
        let l = &out.ledger;
        let step1 = l.deletions.iter().filter(|d| d.step == 1).count();
        let step2 = l.deletions.iter().filter(|d| d.step == 2).count();
        ensure!(
            l.alpha == step1 && l.beta == step2 && l.alpha + l.beta == g.edge_count() - out.graph.edge_count(),
            "run {k}: alpha + beta does not match the deletions"
        );
        ensure!(l.m0 == g.pairs().filter(|&p| g.codegree(p) >= q).count(), "run {k}: m0 is not the input dense-pair count");
        ensure!(l.beta <= 2 * l.m0, "run {k}: beta {} > 2 m0 {}", l.beta, l.m0);
        ensure!(
            l.alpha * q <= 2 * out.total_f(),
            "run {k}: alpha {} > (2/q) sum F {}",
            l.alpha,
            out.total_f()
        );
    }
    Ok(format!("{} runs", runs.len()))
}

fn criterion_2(runs: &[(BipartiteGraph, usize, SparsifyOutcome)]) -> Outcome {
    let mut pairs = 0;
    for (k, (g, q, out)) in runs.iter().enumerate() {
        for (p, rec) in &out.records {
            let (s, f, d) = (rec.s.len(), rec.f.len(), rec.d.len());
            if s + f + d == 0 {
                continue;
            }
            pairs += 1;
            ensure!(f == 2 * s, "run {k} pair {p}: |F| = {f}, |S| = {s}");
            ensure!(s <= 2 * d && d <= s && s < *q, "run {k} pair {p}: |S| = {s}, |D| = {d}");
            ensure!(f <= 4 * d && d < *q, "run {k} pair {p}: |F| = {f}, |D| = {d}");
            ensure!(f <= 2 * g.codegree(*p), "run {k} pair {p}: |F| = {f} above twice the input codegree");
        }
    }
    Ok(format!("{pairs} nonempty records, 0 violations"))
}

fn criterion_3() -> Outcome {
    let mut runs = 0;
    for t in [2usize, 3] {
        for n in [6usize, 8] {
            for seed in 0..20u64 {
                let h = random_free_instance(n, t, seed).unwrap();
                let run = run_pipeline(&h, t as u64, Step2Policy::exhaustive()).unwrap();
                if let Some(c) = run.checks.iter().find(|c| !c.pass) {
                    return Err(format!("t={t} n={n} seed={seed}: {} (level {}) {} vs {}", c.name, c.level, c.lhs, c.rhs));
                }
                for (level, &q) in run.levels.iter().zip(&run.schedule.qs) {
                    let pattern = Pattern::K12q { q: q as usize };
                    ensure!(
                        !brute_contains(&level.to_hypergraph(), &pattern).unwrap(),
                        "t={t} n={n} seed={seed}: level with q={q} contains K_(1,2,{q})"
                    );
                }
                let tn2 = (t * n * n) as i64;
                let sizes: Vec<i64> = run.levels.iter().map(|l| l.edge_count() as i64).collect();
                ensure!(h.edge_count() as i64 - sizes[0] < 78 * tn2, "t={t} n={n} seed={seed}: first drop");
                ensure!(
                    sizes.windows(2).all(|w| w[0] - w[1] < 30 * tn2),
                    "t={t} n={n} seed={seed}: level drop"
                );
                ensure!(*sizes.last().unwrap() <= 2 * tn2, "t={t} n={n} seed={seed}: final level");
                let log = (usize::BITS - (t - 1).leading_zeros()) as i64;
                ensure!(
                    h.edge_count() as i64 <= (30 * t as i64 * log + 80 * t as i64) * (n * n) as i64,
                    "t={t} n={n} seed={seed}: input size bound"
                );
                for level in &run.ledger.levels {
                    for p in &level.projections {
                        ensure!(p.beta() < 2 * t * n * n, "t={t} n={n} seed={seed}: step-2 deletions");
                    }
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} pipeline runs"))
}

fn criterion_4() -> Outcome {
    for t in 2u64..=1_000_000 {
        let s = q_schedule(t).unwrap();
        let (q0, qk) = (s.qs[0], *s.qs.last().unwrap());
        ensure!(q0.is_power_of_two() && q0 <= t * t && t * t < 2 * q0, "t={t}: q0 = {q0}");
        ensure!(qk >= t && t > qk / 2, "t={t}: qk = {qk}");
        ensure!(1u64 << s.k() <= t, "t={t}: k = {}", s.k());
    }
    Ok("t = 2..=1000000".into())
}

fn criterion_5() -> Outcome {
    for n in 6..=12usize {
        let h = star_matching(n, 3).unwrap();
        let expected = binomial(n as u64 - 1, 2) as usize + (n - 1) / 3;
        ensure!(h.edge_count() == expected, "star n={n}: {} edges, expected {expected}", h.edge_count());
        ensure!(!brute_contains(&h, &Pattern::k2t3(2)).unwrap(), "star n={n} contains K_(2,2)^(3)");
    }
    let shattered = shatter_design(&affine_plane(5).unwrap()).unwrap();
    ensure!(shattered.edge_count() == 300, "shattered plane has {} triples", shattered.edge_count());
    ensure!(contains_copy(&shattered, &Pattern::k2t3(2)).unwrap().is_none(), "shattered plane: detector found a copy");
    ensure!(!brute_contains(&shattered, &Pattern::k2t3(2)).unwrap(), "shattered plane: brute force found a copy");
    for p in [2usize, 3, 5, 7] {
        let d = affine_plane(p).unwrap();
        let mut seen = BTreeSet::new();
        for b in d.blocks() {
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    ensure!(seen.insert((x.min(y), x.max(y))), "p={p}: pair {x},{y} covered twice");
                }
            }
        }
        ensure!(seen.len() == p * p * (p * p - 1) / 2, "p={p}: some pair uncovered");
    }
    Ok("star n=6..12, shattered plane of order 5, planes 2,3,5,7".into())
}

fn criterion_6() -> Outcome {
    let g = polarity_graph(3).unwrap();
    let h = induced_matching_4graph(&g);
    ensure!(h.n_vertices() == 13 && h.edge_count() > 0, "unexpected 4-graph shape");
    ensure!(
        !brute_contains(&h, &Pattern::Kst { s: 2, t: 2, r: 4 }).unwrap(),
        "4-graph contains K_(2,2)^(4)"
    );
    let bad = common_neighbour_violations(&g, &h);
    ensure!(bad.is_empty(), "{} co-triple pairs lack a common neighbour, e.g. {:?}", bad.len(), bad[0]);
    Ok(format!("{} hyperedges on 13 vertices", h.edge_count()))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    let mut tried = 0;
    while accepted < 240 {
        tried += 1;
        ensure!(tried < 200_000, "rejection sampling stalled at {accepted}");
        let p = rng.gen_range(1..=3usize);
        let q = [2usize, 4][rng.gen_range(0..2)];
        let t = rng.gen_range(3..=4usize);
        let n = rng.gen_range(3..=10usize);
        // few active vertices keep the frame small while colours pile up
        let active = rng.gen_range(2..=n.min(t + 1));
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut rng);
        verts.truncate(active);
        let colours = rng.gen_range(1..=8u64);
        let mut mult = vec![0usize; n * n];
        let mut used = BTreeSet::new();
        let mut edges = Vec::new();
        for color in 0..colours {
            for _ in 0..rng.gen_range(1..=q) {
                let (a, b) = (verts[rng.gen_range(0..active)], verts[rng.gen_range(0..active)]);
                let (u, v) = (a.min(b), a.max(b));
                if u == v || mult[u * n + v] == p || !used.insert((u, v, color)) {
                    continue;
                }
                mult[u * n + v] += 1;
                edges.push(ColoredEdge { u, v, color });
            }
        }
        let m = ColoredMultigraph::new(n, edges).unwrap();
        if max_frame(&m).size() >= t {
            continue;
        }
        ensure!(m.max_multiplicity() <= p && m.max_color_class() <= q, "generator exceeded its limits");
        let bound = binomial(t as u64 - 1, 2) as usize * p + t * q;
        ensure!(m.edge_count() <= bound, "{} edges > {bound} (p={p}, q={q}, t={t})", m.edge_count());
        accepted += 1;
    }
    Ok(format!("{accepted} instances ({tried} sampled)"))
}

fn agreement(family: &str, mut instance: impl FnMut(&mut ChaCha8Rng) -> (UniformHypergraph, Pattern)) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(family.len() as u64 * 31);
    let (mut present, mut absent) = (0, 0);
    for trial in 0..500 {
        let (h, pattern) = instance(&mut rng);
        let fast = contains_copy(&h, &pattern).unwrap().is_some();
        let brute = brute_contains(&h, &pattern).unwrap();
        ensure!(fast == brute, "{family} trial {trial} ({pattern}): detector {fast}, brute force {brute}");
        if brute {
            present += 1;
        } else {
            absent += 1;
        }
    }
    ensure!(present > 0 && absent > 0, "{family}: only one outcome seen");
    Ok(format!("{family} {present}/{absent}"))
}

fn criterion_8() -> Outcome {
    let density = |rng: &mut ChaCha8Rng| [0.05, 0.1, 0.2, 0.35, 0.5][rng.gen_range(0..5)];
    let mut summary = vec![
        agreement("k2t3", |rng| {
            let (n, p) = (rng.gen_range(4..=12), density(rng));
            (random_uniform(rng, 3, n, p), Pattern::k2t3(rng.gen_range(1..=3)))
        })?,
        agreement("k12q", |rng| {
            let (n, p) = (rng.gen_range(4..=12), density(rng));
            (random_uniform(rng, 3, n, p), Pattern::K12q { q: rng.gen_range(1..=4) })
        })?,
        agreement("k2q-graph", |rng| {
            let (n, p) = (rng.gen_range(3..=12), density(rng) + 0.1);
            (random_uniform(rng, 2, n, p), Pattern::K2qGraph { q: rng.gen_range(1..=4) })
        })?,
        agreement("expansion", |rng| {
            let n = rng.gen_range(5..=10);
            let p = [0.02, 0.05, 0.1, 0.2][rng.gen_range(0..4)];
            let path = BipartiteGraph::from_edges(2, 2, [(0, 0), (1, 0), (1, 1)]).unwrap();
            let pattern = if rng.gen_bool(0.5) {
                Pattern::Kst { s: 2, t: 2, r: 4 }
            } else {
                Pattern::Expansion(ExpansionSpec::new(path, 4).unwrap())
            };
            (random_uniform(rng, 4, n, p), pattern)
        })?,
    ];
    let p = Pattern::k2t3(2);
    let values: Vec<usize> = [4, 5, 6].iter().map(|&n| exact_turan(n, &p, 100_000_000).unwrap().value).collect();
    ensure!(values[0] == 4 && values[1] == 10, "exact values at n=4,5: {:?}", &values[..2]);
    // regression golden from the exhaustive search
    ensure!(values[2] == 11, "exact value at n=6: {}", values[2]);
    summary.push("ex = 4, 10, 11".into());
    Ok(summary.join(", "))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut attempts = 0;
    for seed in 0..100u64 {
        let n = rng.gen_range(1..=6);
        let p = rng.gen_range(0.1..0.9);
        let h = random_uniform(&mut rng, 3, 3 * n, p);
        let ex = extract_tripartite(&h, seed).unwrap();
        let required = (2 * h.edge_count()).div_ceil(9);
        ensure!(ex.system.edge_count() >= required, "seed {seed}: {} < {required}", ex.system.edge_count());
        let mut part_of = vec![usize::MAX; 3 * n];
        for (k, part) in ex.parts.iter().enumerate() {
            ensure!(part.len() == n, "seed {seed}: unbalanced parts");
            for &v in part {
                part_of[v] = k;
            }
        }
        let transversal = h
            .edges()
            .filter(|e| e.iter().map(|&v| part_of[v]).collect::<BTreeSet<_>>().len() == 3)
            .count();
        ensure!(transversal == ex.system.edge_count(), "seed {seed}: extracted system is not the transversal part");
        attempts += ex.attempts;
    }
    let average = attempts as f64 / 100.0;
    ensure!(attempts <= 400, "average attempts {average}");
    Ok(format!("average attempts {average:.2}"))
}

fn turan(dir: &Path, args: &[&str]) -> std::result::Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_turan"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

/// Every file under `dir`, sorted by name, with its bytes.
fn snapshot(dir: &Path) -> Snapshot {
    let mut files: Snapshot = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .flat_map(|p| {
            if p.is_dir() {
                snapshot(&p)
                    .into_iter()
                    .map(|(name, bytes)| (format!("{}/{name}", p.file_name().unwrap().to_string_lossy()), bytes))
                    .collect()
            } else {
                vec![(p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())]
            }
        })
        .collect();
    files.sort();
    files
}

fn cli_session(jobs: &str) -> std::result::Result<(Snapshot, Vec<Vec<u8>>), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let g = random_bipartite(&mut rng, 8, 0.6);
    fs::write(d.join("g.bip"), io::format_bipartite(&g)).unwrap();
    let plain = random_uniform(&mut rng, 3, 10, 0.15);
    fs::write(d.join("plain.hg"), io::format_hypergraph(&plain)).unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["construct", "random", "--n", "6", "--t", "2", "--seed", "5", "--out", "random.hg"],
        vec!["construct", "star", "--n", "8", "--r", "3", "--out", "star.hg"],
        vec!["construct", "shatter", "--p", "5", "--out", "shatter.hg"],
        vec!["construct", "ind4", "--p", "3", "--out", "ind4.hg"],
        vec!["sparsify", "--graph", "g.bip", "--q", "2", "--out", "g_q2"],
        vec!["sparsify", "--graph", "g.bip", "--q", "4", "--out", "g_q4"],
        vec!["pipeline", "--input", "random.hg", "--t", "2", "--out", "run_random"],
        vec!["pipeline", "--input", "plain.hg", "--t", "2", "--seed", "3", "--out", "run_plain"],
        vec!["partition", "--input", "plain.hg", "--seed", "3", "--out", "partition.hg"],
        vec!["exact", "--n", "5", "--pattern", "k23:2,2", "--out", "exact.hg"],
        vec!["check", "--input", "star.hg", "--pattern", "k23:2,2"],
    ];
    let mut stdouts = Vec::new();
    for cmd in &commands {
        let mut args = cmd.clone();
        args.extend(["--jobs", jobs]);
        let (code, stdout) = turan(d, &args)?;
        ensure!(code == 0, "`turan {}` exited with {code}", args.join(" "));
        stdouts.push(stdout);
    }
    Ok((snapshot(d), stdouts))
}

fn criterion_10() -> Outcome {
    let first = cli_session("1")?;
    let second = cli_session("1")?;
    let parallel = cli_session("4")?;
    for (label, other) in [("repeat", &second), ("4 jobs", &parallel)] {
        ensure!(first.0.len() == other.0.len(), "{label}: different file sets");
        for ((name, a), (other_name, b)) in first.0.iter().zip(&other.0) {
            ensure!(name == other_name && a == b, "{label}: {name} differs");
        }
        ensure!(first.1 == other.1, "{label}: standard output differs");
    }
    Ok(format!("{} files byte-identical across 3 sessions", first.0.len()))
}

fn report(n: usize, start: Instant, limit: Duration, outcome: Outcome) -> bool {
    let elapsed = start.elapsed();
    let (pass, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.1?}, limit {limit:?}")),
        Err(e) => (false, e),
    };
    println!(
        "criterion {n}: {} ({:.2}s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn main() {
    let mins = |m: u64| Duration::from_secs(60 * m);
    let mut all = true;

    let start = Instant::now();
    let runs = sparsifier_runs();
    let shared = start.elapsed();
    let start1 = Instant::now() - shared;
    all &= report(1, start1, mins(5), criterion_1(&runs));
    let start2 = Instant::now();
    all &= report(2, start2, mins(5), criterion_2(&runs));

    let criteria: [Criterion; 8] = [
        (3, 600, criterion_3),
        (4, 5, criterion_4),
        (5, 120, criterion_5),
        (6, 120, criterion_6),
        (7, 60, criterion_7),
        (8, 600, criterion_8),
        (9, 60, criterion_9),
        (10, 600, criterion_10),
    ];
    for (n, secs, run) in criteria {
        let start = Instant::now();
        all &= report(n, start, Duration::from_secs(secs), run());
    }
    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILURES" });
    if !all {
        std::process::exit(1);
    }
}
