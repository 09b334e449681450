use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use c4lab::extremal::{
    corollary_turan_decision, furedi_value, h_bruteforce, reiman_bound, turan_bruteforce, turan_lower_bound,
};
use c4lab::graph::{count_c4, neighborhood_family, up_p2_stats, Graph};
use c4lab::incidence::{verify_projective_plane, IncidenceStructure};
use c4lab::plane::ProjectivePlane;
use c4lab::polarity::{orthogonal_polarity, polarity_graph, verify_polarity, Polarity};
use c4lab::report::ExperimentReport;
use c4lab::suite::{run_all, run_check, CheckResult, Mode};
use c4lab::supersat::{
    add_edge_experiment, classify_perturbation, halfway_bound_check, matching_experiment, random_supersat,
    upper_count_audit,
};

#[derive(Parser, Debug)]
#[command(name = "c4lab", version, about = "Projective planes, polarity graphs and 4-cycle experiments")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "C4LAB_THREADS", default_value_t = 0)]
    threads: usize,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Group,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Csv,
    EdgeList,
    Incidence,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Projective planes PG(2, q).
    #[command(subcommand)]
    Plane(PlaneCmd),
    /// Polarities and polarity graphs.
    #[command(subcommand)]
    Polarity(PolarityCmd),
    /// Statistics of a graph read from an edge list.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Turán numbers for the 4-cycle.
    #[command(subcommand)]
    Turan(TuranCmd),
    /// Supersaturation experiments.
    #[command(subcommand)]
    Supersat(SupersatCmd),
    /// The verification suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum PlaneCmd {
    /// Build PG(2, q).
    Build(QArg),
    /// Check the projective plane axioms for an incidence file, or for PG(2, q).
    Verify(SourceArgs),
}

#[derive(Subcommand, Debug)]
enum PolarityCmd {
    /// Emit the orthogonal polarity of PG(2, q).
    Build(QArg),
    /// Check that a polarity file induces a symmetric incidence matrix.
    Verify(PolarityArgs),
    /// Build the polarity graph.
    Graph(PolarityArgs),
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// Exact number of 4-cycles.
    CountC4(InputArg),
    /// Degree, deficiency, 2-path and uncovered-pair statistics.
    Stats(GraphQArgs),
    /// The neighborhood family of the degree-(q+1) vertices outside B.
    Family(FamilyArgs),
}

#[derive(Subcommand, Debug)]
enum TuranCmd {
    /// Exhaustive ex(n, C4) for n <= 10, or h(n, t) with --t for n <= 9.
    Brute(BruteArgs),
    /// Closed-form bounds.
    Bounds(BoundsArgs),
    /// The prime-window lower bound with exact checks.
    Lower(NArg),
}

#[derive(Subcommand, Debug)]
enum SupersatCmd {
    /// Add one non-edge to the orthogonal polarity graph.
    AddEdge(AddEdgeArgs),
    /// Add a matching among degree-q vertices.
    Matching(MatchingArgs),
    /// Random edge additions with probability 4t/(q^3(q+1)).
    Random(RandomArgs),
    /// Lower bound check for a graph with q(q+1)^2/2 + t edges.
    Halfway(GraphQArgs),
    /// Add s edges and remove s-1 edges.
    Classify(ClassifyArgs),
    /// Split the new 4-cycles by the number of added edges they use.
    Audit(AuditArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Run every check.
    All(VerifyArgs),
}

#[derive(Args, Debug)]
struct QArg {
    #[arg(long)]
    q: u64,
}

#[derive(Args, Debug)]
struct NArg {
    #[arg(long)]
    n: u64,
}

#[derive(Args, Debug)]
struct InputArg {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct SourceArgs {
    #[arg(long, conflicts_with = "q", required_unless_present = "q")]
    input: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Args, Debug)]
struct PolarityArgs {
    #[arg(long)]
    q: u64,
    /// Polarity file (`q`, then one line index per point); defaults to the orthogonal polarity.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GraphQArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    q: u64,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
}

#[derive(Args, Debug)]
struct BruteArgs {
    #[arg(long)]
    n: usize,
    /// Extra edges beyond ex(n, C4); switches to the minimum 4-cycle count.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Certified lower bound on the largest polarity graph of order q.
    #[arg(long, requires = "q")]
    lambda: Option<i64>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    slack: i64,
}

#[derive(Args, Debug)]
struct AddEdgeArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    u: u32,
    #[arg(long)]
    v: u32,
}

#[derive(Args, Debug)]
struct MatchingArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    t: u64,
    /// 0 takes the lowest-index degree-q vertices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    t: u64,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    q: u64,
    /// Edge `u,v` to add; repeatable.
    #[arg(long = "add", value_parser = parse_edge)]
    add: Vec<(u32, u32)>,
    /// Edge `u,v` to remove; repeatable.
    #[arg(long = "remove", value_parser = parse_edge)]
    remove: Vec<(u32, u32)>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(long)]
    q: u64,
    #[arg(long = "add", value_parser = parse_edge, required = true)]
    add: Vec<(u32, u32)>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    #[arg(long)]
    full: bool,
    /// Run a single check by number.
    #[arg(long)]
    only: Option<u8>,
}

fn parse_edge(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `u,v`, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Everything needed to rerun a command; embedded in every JSON output.
#[derive(Debug, Clone, Default, Serialize)]
struct RunConfig {
    command: String,
    q: Option<u64>,
    n: Option<u64>,
    t: Option<u64>,
    delta: Option<f64>,
    seed: Option<u64>,
    trials: Option<u64>,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    format: Option<Format>,
    extra: Value,
}

enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Rendered output plus the verdict failures it carries.
struct Emit {
    body: String,
    failures: Vec<String>,
    summary: String,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_graph(path: &PathBuf) -> Result<Graph, CliError> {
    Graph::from_edge_list(&read(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn plane(q: u64) -> Result<ProjectivePlane, CliError> {
    ProjectivePlane::from_order(q).map_err(usage)
}

fn json_doc(cfg: &RunConfig, result: impl Serialize) -> String {
    let doc = json!({ "config": cfg, "result": result });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn pick(cfg: &RunConfig, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = cfg.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("format {f:?} is not available for `{}`", cfg.command)))
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn report_csv(r: &ExperimentReport) -> String {
    let mut out = String::from("experiment,q,t,seed,trials,verdict,inequality,holds,status\n");
    let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
    for (key, v) in &r.verdicts {
        let status = serde_json::to_value(v.status).expect("serializable");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.params.q,
            opt(r.params.t),
            opt(r.params.seed),
            opt(r.params.trials),
            key,
            csv_escape(&v.inequality),
            v.holds,
            status.as_str().unwrap_or_default()
        ));
    }
    out
}

fn emit_report(cfg: &RunConfig, r: ExperimentReport) -> Result<Emit, CliError> {
    let f = pick(cfg, Format::Json, &[Format::Json, Format::Csv])?;
    let failures = r.failures().into_iter().map(String::from).collect();
    let summary = format!("{}: {} verdicts, passed = {}", r.experiment, r.verdicts.len(), r.passed());
    let body = if f == Format::Csv { report_csv(&r) } else { json_doc(cfg, &r) };
    Ok(Emit { body, failures, summary })
}

fn ok_json(cfg: &RunConfig, result: impl Serialize, summary: String) -> Result<Emit, CliError> {
    pick(cfg, Format::Json, &[Format::Json])?;
    Ok(Emit { body: json_doc(cfg, result), failures: Vec::new(), summary })
}

fn run(cli: &Cli) -> Result<Emit, CliError> {
    let mut cfg = RunConfig { output: cli.out.clone(), format: cli.format, ..Default::default() };
    match &cli.command {
        Group::Plane(cmd) => match cmd {
            PlaneCmd::Build(a) => {
                cfg.command = "plane build".into();
                cfg.q = Some(a.q);
                let p = plane(a.q)?;
                let s = p.structure();
                let summary = format!("PG(2,{}): {} points, {} lines", a.q, s.n_points(), s.n_lines());
                match pick(&cfg, Format::Incidence, &[Format::Incidence, Format::Json])? {
                    Format::Incidence => Ok(Emit { body: s.to_text(), failures: vec![], summary }),
                    _ => ok_json(&cfg, json!({ "q": a.q, "points": s.n_points(), "lines": s.lines() }), summary),
                }
            }
            PlaneCmd::Verify(a) => {
                cfg.command = "plane verify".into();
                cfg.q = a.q;
                cfg.input = a.input.clone();
                let s = match (&a.input, a.q) {
                    (Some(path), _) => {
                        IncidenceStructure::from_text(&read(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
                    }
                    (None, Some(q)) => plane(q)?.structure().clone(),
                    (None, None) => return Err(usage("need --input or --q")),
                };
                let v = verify_projective_plane(&s);
                let failures = v.violations.iter().map(|x| format!("{}: {}", x.axiom, x.message)).collect();
                let summary = format!("projective plane: {}", v.is_pass());
                pick(&cfg, Format::Json, &[Format::Json])?;
                Ok(Emit { body: json_doc(&cfg, &v), failures, summary })
            }
        },
        Group::Polarity(cmd) => match cmd {
            PolarityCmd::Build(a) => {
                cfg.command = "polarity build".into();
                cfg.q = Some(a.q);
                let p = plane(a.q)?;
                let pi = orthogonal_polarity(&p);
                let summary = format!("orthogonal polarity of order {}: {} absolute points", a.q, pi.absolute_points().len());
                match pick(&cfg, Format::Incidence, &[Format::Incidence, Format::Json])? {
                    Format::Incidence => Ok(Emit { body: pi.to_text(), failures: vec![], summary }),
                    _ => ok_json(&cfg, json!({ "q": a.q, "sigma": pi.sigma() }), summary),
                }
            }
            PolarityCmd::Verify(a) | PolarityCmd::Graph(a) => {
                let is_graph = matches!(cmd, PolarityCmd::Graph(_));
                cfg.command = if is_graph { "polarity graph" } else { "polarity verify" }.into();
                cfg.q = Some(a.q);
                cfg.input = a.input.clone();
                let p = plane(a.q)?;
                let pi = match &a.input {
                    Some(path) => Polarity::from_text(&p, &read(path)?)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
                    None => orthogonal_polarity(&p),
                };
                if !is_graph {
                    let v = verify_polarity(&pi);
                    let failures = v
                        .witness
                        .map(|(i, j)| vec![format!("M[{i}][{j}] = 1 but M[{j}][{i}] = 0")])
                        .unwrap_or_default();
                    pick(&cfg, Format::Json, &[Format::Json])?;
                    let summary = format!("polarity: {}", v.holds);
                    return Ok(Emit { body: json_doc(&cfg, v), failures, summary });
                }
                let g = polarity_graph(&pi).map_err(usage)?;
                let summary = format!("polarity graph: {} vertices, {} edges", g.graph.n(), g.graph.m());
                match pick(&cfg, Format::EdgeList, &[Format::EdgeList, Format::Json])? {
                    Format::EdgeList => Ok(Emit { body: g.graph.to_edge_list(), failures: vec![], summary }),
                    _ => ok_json(
                        &cfg,
                        json!({
                            "q": g.q,
                            "vertices": g.graph.n(),
                            "edges": g.graph.m(),
                            "absolute_points": g.absolute_points,
                            "m_pi": g.m_pi,
                            "lambda": g.lambda_report(),
                        }),
                        summary,
                    ),
                }
            }
        },
        Group::Graph(cmd) => match cmd {
            GraphCmd::CountC4(a) => {
                cfg.command = "graph count-c4".into();
                cfg.input = Some(a.input.clone());
                let g = read_graph(&a.input)?;
                let c = count_c4(&g).map_err(usage)?;
                ok_json(&cfg, json!({ "n": g.n(), "m": g.m(), "c4": c }), format!("{c} four-cycles"))
            }
            GraphCmd::Stats(a) => {
                cfg.command = "graph stats".into();
                cfg.input = Some(a.input.clone());
                cfg.q = Some(a.q);
                let g = read_graph(&a.input)?;
                let s = up_p2_stats(&g, a.q);
                let summary = format!("P2 = {}, UP = {}, f(V) = {}", s.p2, s.up, s.total_deficiency);
                ok_json(&cfg, &s, summary)
            }
            GraphCmd::Family(a) => {
                cfg.command = "graph family".into();
                cfg.input = Some(a.input.clone());
                cfg.q = Some(a.q);
                cfg.delta = Some(a.delta);
                if !(a.delta > 0.0 && a.delta < 1.0) {
                    return Err(usage("--delta must lie in (0, 1)"));
                }
                let g = read_graph(&a.input)?;
                let f = neighborhood_family(&g, a.q, a.delta);
                let summary = format!("|R| = {}, 1-intersecting = {}", f.size(), f.one_intersecting);
                match pick(&cfg, Format::Json, &[Format::Json, Format::Incidence])? {
                    Format::Incidence => Ok(Emit { body: f.family.to_text(), failures: vec![], summary }),
                    _ => ok_json(
                        &cfg,
                        json!({
                            "s": f.s, "b": f.b, "a": f.a, "size": f.size(),
                            "one_intersecting": f.one_intersecting, "witness": f.witness,
                        }),
                        summary,
                    ),
                }
            }
        },
        Group::Turan(cmd) => match cmd {
            TuranCmd::Brute(a) => {
                cfg.command = "turan brute".into();
                cfg.n = Some(a.n as u64);
                cfg.t = a.t.map(|t| t as u64);
                match a.t {
                    None => {
                        let r = turan_bruteforce(a.n).map_err(usage)?;
                        let summary = format!("ex({}, C4) = {}", a.n, r.ex_value);
                        let value = json!({ "n": r.n, "value": r.ex_value, "method": r.method, "witnesses": [r.witness] });
                        ok_json(&cfg, value, summary)
                    }
                    Some(t) => {
                        let r = h_bruteforce(a.n, t).map_err(usage)?;
                        let summary = format!("h({}, {t}) = {}", a.n, r.value);
                        ok_json(&cfg, json!({ "n": r.n, "t": t, "edges": r.edges, "value": r.value, "method": "bruteforce", "witnesses": [r.witness] }), summary)
                    }
                }
            }
            TuranCmd::Bounds(a) => {
                cfg.command = "turan bounds".into();
                cfg.n = a.n;
                cfg.q = a.q;
                cfg.extra = json!({ "lambda": a.lambda, "slack": a.slack });
                if a.n.is_none() && a.q.is_none() {
                    return Err(usage("need --n or --q"));
                }
                let mut out = serde_json::Map::new();
                if let Some(n) = a.n {
                    if n == 0 {
                        return Err(usage("--n must be positive"));
                    }
                    out.insert("reiman".into(), json!({ "n": n, "value": reiman_bound(n), "method": "formula" }));
                }
                if let Some(q) = a.q {
                    if q == 0 {
                        return Err(usage("--q must be positive"));
                    }
                    out.insert("furedi".into(), json!(furedi_value(q)));
                    if let Some(lambda) = a.lambda {
                        let d = corollary_turan_decision(q, lambda, a.slack).map_err(usage)?;
                        out.insert("corollary".into(), json!(d));
                    }
                }
                ok_json(&cfg, Value::Object(out), "bounds computed".into())
            }
            TuranCmd::Lower(a) => {
                cfg.command = "turan lower".into();
                cfg.n = Some(a.n);
                let lb = turan_lower_bound(a.n).map_err(usage)?;
                let mut failures = Vec::new();
                if !lb.p_condition {
                    failures.push("p >= sqrt(n) - n^0.2625 - 1".to_string());
                }
                if !lb.bound_condition {
                    failures.push("p(p+1)^2/2 >= (n^1.5 - 3n^1.2625 + n)/2".to_string());
                }
                pick(&cfg, Format::Json, &[Format::Json])?;
                let summary = format!("p = {}, bound = {}, chain holds = {}", lb.p, lb.bound, lb.chain_holds);
                Ok(Emit { body: json_doc(&cfg, &lb), failures, summary })
            }
        },
        Group::Supersat(cmd) => {
            let er = |q: u64| {
                let p = plane(q)?;
                polarity_graph(&orthogonal_polarity(&p)).map_err(usage)
            };
            let report = match cmd {
                SupersatCmd::AddEdge(a) => {
                    cfg.command = "supersat add-edge".into();
                    cfg.q = Some(a.q);
                    cfg.extra = json!({ "u": a.u, "v": a.v });
                    let g = er(a.q)?;
                    if a.u as usize >= g.graph.n() || a.v as usize >= g.graph.n() {
                        return Err(usage(format!("vertices must be below {}", g.graph.n())));
                    }
                    add_edge_experiment(&g, a.u, a.v).map_err(usage)?
                }
                SupersatCmd::Matching(a) => {
                    cfg.command = "supersat matching".into();
                    cfg.q = Some(a.q);
                    cfg.t = Some(a.t);
                    cfg.seed = Some(a.seed);
                    matching_experiment(a.q, a.t, a.seed).map_err(usage)?
                }
                SupersatCmd::Random(a) => {
                    cfg.command = "supersat random".into();
                    cfg.q = Some(a.q);
                    cfg.t = Some(a.t);
                    cfg.seed = Some(a.seed);
                    cfg.trials = Some(a.trials);
                    random_supersat(a.q, a.t, a.trials, a.seed).map_err(usage)?
                }
                SupersatCmd::Halfway(a) => {
                    cfg.command = "supersat halfway".into();
                    cfg.q = Some(a.q);
                    cfg.input = Some(a.input.clone());
                    halfway_bound_check(&read_graph(&a.input)?, a.q).map_err(usage)?
                }
                SupersatCmd::Classify(a) => {
                    cfg.command = "supersat classify".into();
                    cfg.q = Some(a.q);
                    cfg.extra = json!({ "add": a.add, "remove": a.remove });
                    classify_perturbation(&er(a.q)?, &a.add, &a.remove).map_err(usage)?
                }
                SupersatCmd::Audit(a) => {
                    cfg.command = "supersat audit".into();
                    cfg.q = Some(a.q);
                    cfg.extra = json!({ "add": a.add });
                    upper_count_audit(&er(a.q)?, &a.add).map_err(usage)?.1
                }
            };
            emit_report(&cfg, report)
        }
        Group::Verify(VerifyCmd::All(a)) => {
            cfg.command = "verify all".into();
            let mode = if a.full { Mode::Full } else { Mode::Quick };
            cfg.extra = json!({ "mode": mode, "only": a.only });
            let results: Vec<CheckResult> = match a.only {
                Some(id) => vec![run_check(id, mode).ok_or_else(|| usage(format!("no check numbered {id}")))?],
                None => run_all(mode),
            };
            for r in &results {
                eprintln!("{r}");
            }
            let failures = results.iter().filter(|r| !r.passed).map(|r| format!("check {} ({})", r.id, r.name)).collect();
            let summary = format!("{} of {} checks passed", results.iter().filter(|r| r.passed).count(), results.len());
            let body = match pick(&cfg, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Csv => {
                    let mut s = String::from("id,name,passed,elapsed_ms,detail\n");
                    for r in &results {
                        s.push_str(&format!("{},{},{},{},{}\n", r.id, r.name, r.passed, r.elapsed_ms, csv_escape(&r.detail)));
                    }
                    s
                }
                _ => json_doc(&cfg, &results),
            };
            Ok(Emit { body, failures, summary })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let emit = match run(&cli) {
        Ok(e) => e,
        Err(e) => {
            let (CliError::Usage(m) | CliError::Io(m)) = &e;
            eprintln!("error: {m}");
            return ExitCode::from(e.code());
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &emit.body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{}", emit.body);
            Ok(())
        }
    };
    if let Err(m) = written {
        eprintln!("error: {m}");
        return ExitCode::from(3);
    }
    eprintln!("{}", emit.summary);
    if emit.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &emit.failures {
            eprintln!("violated: {f}");
        }
        ExitCode::from(1)
    }
}
