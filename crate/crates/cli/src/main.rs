use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use turan_core::constructions::{affine_plane, induced_matching_4graph, polarity_graph, shatter_design, star_matching};
use turan_core::io::{self, HypergraphFile};
use turan_core::oracle::{exact_turan, random_free_instance};
use turan_core::pipeline::{extract_tripartite, run_pipeline, Check, PipelineRun};
use turan_core::sparsify::{sparsify, verify_terminal, Witness};
use turan_core::{contains_copy, Edge, Error, Pattern, SimpleGraph, Step2Policy, TripartiteTripleSystem, UniformHypergraph};

#[derive(Parser)]
#[command(name = "turan", version, about = "Hypergraph Turán experiments around K_{2,t}^{(3)}")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the pipeline (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output file, prefix or directory, depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a construction and write it in the hypergraph format.
    #[command(subcommand)]
    Construct(Construct),
    /// Run P(q) on a bipartite graph.
    Sparsify(SparsifyArgs),
    /// Run the q-halving pipeline on a 3-graph.
    Pipeline(PipelineArgs),
    /// Compute ex(n, pattern) exactly by branch and bound.
    Exact(ExactArgs),
    /// Look for a copy of a pattern; exits 1 when one is present.
    Check(CheckArgs),
    /// Split a 3-graph into a tripartite subsystem keeping 2/9 of its edges.
    Partition(PartitionArgs),
}

#[derive(Subcommand)]
enum Construct {
    /// All r-sets through vertex 0 plus a greedy matching.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// All 3-subsets of the blocks of a design.
    Shatter(DesignSource),
    /// The affine plane of prime order p, in the design format.
    Affine {
        #[arg(long)]
        p: usize,
    },
    /// Polarity graph of PG(2, p) as a 2-uniform file.
    Polarity {
        #[arg(long)]
        p: usize,
    },
    /// Induced 2-matching 4-graph of a K_{2,t}-free graph.
    Ind4 {
        /// Use the polarity graph of PG(2, p).
        #[arg(long, conflicts_with = "graph")]
        p: Option<usize>,
        /// 2-uniform graph file.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// The input graph must be K_{2,t}-free.
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Random K_{2,t}^{(3)}-free tripartite system with parts of size n.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args)]
struct DesignSource {
    /// Affine plane of prime order p (block size p).
    #[arg(long, conflicts_with = "design")]
    p: Option<usize>,
    /// Design file `n k b` plus b blocks.
    #[arg(long)]
    design: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Exhaustive,
    Star,
}

impl Policy {
    fn with_budget(self, budget: Option<u64>) -> Step2Policy {
        let base = match self {
            Policy::Exhaustive => Step2Policy::exhaustive(),
            Policy::Star => Step2Policy::star(),
        };
        budget.map_or(base, |b| base.with_budget(b))
    }
}

#[derive(Args)]
struct SparsifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value_t = Policy::Exhaustive)]
    policy: Policy,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    t: u64,
    #[arg(long, value_enum, default_value_t = Policy::Exhaustive)]
    policy: Policy,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    pattern: Pattern,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    pattern: Pattern,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    input: PathBuf,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let failed_check = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::NotFree { .. } | Error::BudgetExceeded { .. } | Error::ExactBudgetExceeded { .. })
            );
            ExitCode::from(if failed_check { 1 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let pool = rayon_pool(cli.jobs)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Construct(c) => construct(c, cli.seed, out),
        Command::Sparsify(args) => pool.install(|| run_sparsify(args, out)),
        Command::Pipeline(args) => pool.install(|| run_pipeline_cmd(args, cli.seed, out)),
        Command::Exact(args) => run_exact(args, out),
        Command::Check(args) => run_check(args),
        Command::Partition(args) => run_partition(args, cli.seed, out),
    }
}

fn rayon_pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn load_graph(path: &Path) -> anyhow::Result<SimpleGraph> {
    let h = io::read_hypergraph(path)
        .with_context(|| format!("reading {}", path.display()))?
        .hypergraph();
    Ok(SimpleGraph::from_hypergraph(&h)?)
}

fn construct(c: Construct, seed: u64, out: Option<&Path>) -> anyhow::Result<Status> {
    let text = match c {
        Construct::Star { n, r } => io::format_hypergraph(&star_matching(n, r)?),
        Construct::Shatter(src) => {
            let design = match (src.p, src.design) {
                (Some(p), None) => affine_plane(p)?,
                (None, Some(path)) => io::read_design(&path).with_context(|| format!("reading {}", path.display()))?,
                _ => bail!("give exactly one of --p and --design"),
            };
            io::format_hypergraph(&shatter_design(&design)?)
        }
        Construct::Affine { p } => io::format_design(&affine_plane(p)?),
        Construct::Polarity { p } => io::format_hypergraph(&polarity_graph(p)?.to_hypergraph()),
        Construct::Ind4 { p, graph, t } => {
            let g = match (p, graph) {
                (Some(p), None) => polarity_graph(p)?,
                (None, Some(path)) => load_graph(&path)?,
                _ => bail!("give exactly one of --p and --graph"),
            };
            if let Some(w) = contains_copy(&g.to_hypergraph(), &Pattern::K2qGraph { q: t })? {
                return Err(Error::NotFree {
                    pattern: Pattern::K2qGraph { q: t }.to_string(),
                    witness: w,
                }
                .into());
            }
            io::format_hypergraph(&induced_matching_4graph(&g))
        }
        Construct::Random { n, t } => io::format_tripartite(&random_free_instance(n, t, seed)?),
    };
    emit(out, &text)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct DeletionJson {
    edge: Edge,
    step: u8,
    witnesses: Witness,
}

#[derive(Serialize)]
struct SparsifyJson {
    alpha: usize,
    beta: usize,
    m0: usize,
    deletions: Vec<DeletionJson>,
    q: usize,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    name: &'a str,
    pass: bool,
    detail: &'a str,
}

fn run_sparsify(args: SparsifyArgs, out: Option<&Path>) -> anyhow::Result<Status> {
    let prefix = out.ok_or_else(|| anyhow!("sparsify needs --out PREFIX"))?;
    let g = io::read_bipartite(&args.graph).with_context(|| format!("reading {}", args.graph.display()))?;
    let policy = args.policy.with_budget(args.budget);
    let result = sparsify(&g, args.q, policy)?;
    let report = verify_terminal(&g, &result.graph, args.q, &result.records, policy.mode)?;

    let ledger = SparsifyJson {
        alpha: result.ledger.alpha,
        beta: result.ledger.beta,
        m0: result.ledger.m0,
        deletions: result
            .ledger
            .deletions
            .iter()
            .map(|d| DeletionJson {
                edge: d.edge,
                step: d.step,
                witnesses: d.witnesses.clone(),
            })
            .collect(),
        q: args.q,
    };
    write(&with_suffix(prefix, "graph"), &io::format_bipartite(&result.graph))?;
    write(&with_suffix(prefix, "ledger.json"), &to_json(&ledger)?)?;

    let laws = result.ledger_laws(&g, args.q);
    let mut rows: Vec<ReportRow> = report
        .clauses
        .iter()
        .map(|c| ReportRow {
            name: c.name,
            pass: c.pass,
            detail: &c.detail,
        })
        .collect();
    rows.extend(laws.iter().map(|&(name, pass)| ReportRow { name, pass, detail: "" }));
    let mut csv_out = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        csv_out.serialize(row)?;
    }
    write(&with_suffix(prefix, "report.csv"), &String::from_utf8(csv_out.into_inner()?)?)?;

    let all_pass = rows.iter().all(|r| r.pass);
    println!(
        "alpha={} beta={} m0={} edges {} -> {} checks {}",
        result.ledger.alpha,
        result.ledger.beta,
        result.ledger.m0,
        g.edge_count(),
        result.graph.edge_count(),
        if all_pass { "pass" } else { "FAIL" }
    );
    Ok(if all_pass { Status::Ok } else { Status::ChecksFailed })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

#[derive(Serialize)]
struct LinkJson {
    i: usize,
    alpha: usize,
    beta: usize,
    m: usize,
    #[serde(rename = "sumF")]
    sum_f: usize,
}

#[derive(Serialize)]
struct ProjectionsJson {
    #[serde(rename = "AB")]
    ab: Vec<LinkJson>,
    #[serde(rename = "BC")]
    bc: Vec<LinkJson>,
    #[serde(rename = "AC")]
    ac: Vec<LinkJson>,
}

#[derive(Serialize)]
struct LevelJson {
    q: u64,
    size: usize,
    projections: ProjectionsJson,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    level: usize,
    pass: bool,
    lhs: u64,
    rhs: u64,
}

impl<'a> From<&'a Check> for CheckJson<'a> {
    fn from(c: &'a Check) -> Self {
        CheckJson {
            name: &c.name,
            level: c.level,
            pass: c.pass,
            lhs: c.lhs,
            rhs: c.rhs,
        }
    }
}

#[derive(Serialize)]
struct PipelineJson<'a> {
    t: u64,
    n: usize,
    input_size: usize,
    schedule: &'a [u64],
    levels: Vec<LevelJson>,
    checks: Vec<CheckJson<'a>>,
}

fn pipeline_json(run: &PipelineRun) -> PipelineJson<'_> {
    let links = |lvl: &turan_core::pipeline::LevelLedger, k: usize| {
        lvl.projections[k]
            .links
            .iter()
            .map(|l| LinkJson {
                i: l.i,
                alpha: l.alpha,
                beta: l.beta,
                m: l.m,
                sum_f: l.sum_f,
            })
            .collect()
    };
    PipelineJson {
        t: run.ledger.t,
        n: run.ledger.n,
        input_size: run.ledger.input_size,
        schedule: &run.ledger.schedule,
        levels: run
            .ledger
            .levels
            .iter()
            .map(|lvl| LevelJson {
                q: lvl.q,
                size: lvl.size,
                projections: ProjectionsJson {
                    ab: links(lvl, 0),
                    bc: links(lvl, 1),
                    ac: links(lvl, 2),
                },
            })
            .collect(),
        checks: run.checks.iter().map(CheckJson::from).collect(),
    }
}

/// Reads a 3-graph file; plain files are split into three parts first
/// (padding with isolated vertices up to a multiple of three).
fn load_tripartite(path: &Path, seed: u64) -> anyhow::Result<TripartiteTripleSystem> {
    match io::read_hypergraph(path).with_context(|| format!("reading {}", path.display()))? {
        HypergraphFile::Tripartite(t) => Ok(t),
        HypergraphFile::Plain(h) => Ok(extract_tripartite(&pad_to_three(&h)?, seed)?.system),
    }
}

fn pad_to_three(h: &UniformHypergraph) -> anyhow::Result<UniformHypergraph> {
    let n = h.n_vertices().div_ceil(3) * 3;
    Ok(UniformHypergraph::from_edges(h.uniformity(), n, h.edges().map(<[usize]>::to_vec))?)
}

fn run_pipeline_cmd(args: PipelineArgs, seed: u64, out: Option<&Path>) -> anyhow::Result<Status> {
    let h = load_tripartite(&args.input, seed)?;
    let run = run_pipeline(&h, args.t, args.policy.with_budget(args.budget))?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (j, level) in run.levels.iter().enumerate() {
            write(&dir.join(format!("H_{j}.hg")), &io::format_tripartite(level))?;
        }
        write(&dir.join("ledger.json"), &to_json(&pipeline_json(&run))?)?;
        let mut csv_out = csv::Writer::from_writer(Vec::new());
        for c in &run.checks {
            csv_out.serialize(CheckJson::from(c))?;
        }
        write(&dir.join("report.csv"), &String::from_utf8(csv_out.into_inner()?)?)?;
    }
    let failed: Vec<&Check> = run.checks.iter().filter(|c| !c.pass).collect();
    let sizes: Vec<String> = run.levels.iter().map(|l| l.edge_count().to_string()).collect();
    println!(
        "t={} n={} |H|={} levels [{}] schedule {:?} checks {}/{} pass",
        args.t,
        h.part_size(),
        h.edge_count(),
        sizes.join(", "),
        run.schedule.qs,
        run.checks.len() - failed.len(),
        run.checks.len()
    );
    for c in &failed {
        println!("FAIL {} (level {}): {} vs {}", c.name, c.level, c.lhs, c.rhs);
    }
    Ok(if failed.is_empty() { Status::Ok } else { Status::ChecksFailed })
}

#[derive(Serialize)]
struct ExactJson {
    n: usize,
    pattern: String,
    value: usize,
    witness_file: Option<String>,
    nodes_expanded: u64,
}

fn run_exact(args: ExactArgs, out: Option<&Path>) -> anyhow::Result<Status> {
    let result = exact_turan(args.n, &args.pattern, args.budget)?;
    if let Some(path) = out {
        write(path, &io::format_hypergraph(&result.witness))?;
    }
    let report = ExactJson {
        n: args.n,
        pattern: args.pattern.to_string(),
        value: result.value,
        witness_file: out.map(|p| p.display().to_string()),
        nodes_expanded: result.nodes,
    };
    print!("{}", to_json(&report)?);
    Ok(Status::Ok)
}

fn run_check(args: CheckArgs) -> anyhow::Result<Status> {
    let h = io::read_hypergraph(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?
        .hypergraph();
    match contains_copy(&h, &args.pattern)? {
        Some(w) => {
            println!("present {} witness {:?}", args.pattern, w);
            Ok(Status::ChecksFailed)
        }
        None => {
            println!("absent {}", args.pattern);
            Ok(Status::Ok)
        }
    }
}

#[derive(Serialize)]
struct PartitionJson<'a> {
    total: usize,
    kept: usize,
    required: usize,
    attempts: u64,
    parts: &'a [Vec<usize>; 3],
}

fn run_partition(args: PartitionArgs, seed: u64, out: Option<&Path>) -> anyhow::Result<Status> {
    let h = match io::read_hypergraph(&args.input).with_context(|| format!("reading {}", args.input.display()))? {
        HypergraphFile::Plain(h) => h,
        HypergraphFile::Tripartite(t) => t.to_hypergraph(),
    };
    let h = pad_to_three(&h)?;
    let ex = extract_tripartite(&h, seed)?;
    if let Some(path) = out {
        write(path, &io::format_tripartite(&ex.system))?;
    }
    let report = PartitionJson {
        total: h.edge_count(),
        kept: ex.system.edge_count(),
        required: (2 * h.edge_count()).div_ceil(9),
        attempts: ex.attempts,
        parts: &ex.parts,
    };
    print!("{}", to_json(&report)?);
    Ok(Status::Ok)
}

