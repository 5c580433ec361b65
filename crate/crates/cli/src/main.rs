//! `fliplab` command line: generate point sets, enumerate flip graphs and
//! subdivisions, test regularity and run the verification suites.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or input
//! error (including cap violations).

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fliplab::export::{ExportGraph, Format};
use fliplab::flipgraph::{link_of, vertex_connectivity};
use fliplab::generators::{
    mother_example, mother_subdivision, mother_t_double_prime, mother_t_prime, GeneratorSpec,
};
use fliplab::poset::build_poset;
use fliplab::regularity::{is_regular_subdivision, is_regular_triangulation};
use fliplab::verify::{self, Suite};
use fliplab::{FlipGraph, FlipKind, Kind, PointSet, Subdivision, Triangulation};

const POINT_FORMAT: &str = "expected a point file: one point per line as `x y` (base-10 integers, \
`#` starts a comment), or JSON {\"points\": [[x, y], ...]}; at least 3 points, no three collinear";

#[derive(Parser, Debug)]
#[command(name = "fliplab", version, about = "Planar flip graphs, subdivisions and regularity")]
struct Cli {
    /// Largest instance size any enumeration may attempt.
    #[arg(long, global = true, env = "FLIPLAB_CAP")]
    cap: Option<usize>,
    /// Seed for random generators and verification sets.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a point set and print it in the point-file format.
    Gen(GenArgs),
    /// Enumerate a flip graph and export it.
    Flipgraph(FlipgraphArgs),
    /// Vertex connectivity of a flip graph.
    Connectivity(ConnectivityArgs),
    /// Link of one triangulation.
    Link(LinkArgs),
    /// Subdivision poset as a Hasse diagram with heights.
    Poset(PosetArgs),
    /// Regularity verdict with a witness or certificate.
    Regular(RegularArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    /// Number of points (convex, random).
    #[arg(long)]
    n: Option<usize>,
    /// Half the number of points (twisted).
    #[arg(long)]
    k: Option<usize>,
    /// Line arrangement of the mother example.
    #[arg(long, value_enum, default_value_t = MotherVariant::Concurrent)]
    variant: MotherVariant,
    /// Coordinate range of random points.
    #[arg(long, default_value_t = verify::RANDOM_BOUND)]
    bound: i64,
    #[arg(long, value_enum, default_value_t = PointFormat::Text)]
    format: PointFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Convex,
    Twisted,
    Mother,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MotherVariant {
    Concurrent,
    Skew,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PointFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphKind {
    Edge,
    Bistellar,
}

impl From<GraphKind> for FlipKind {
    fn from(k: GraphKind) -> Self {
        match k {
            GraphKind::Edge => FlipKind::Edge,
            GraphKind::Bistellar => FlipKind::Bistellar,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportFormat {
    Dot,
    Graphml,
    Json,
}

impl From<ExportFormat> for Format {
    fn from(f: ExportFormat) -> Self {
        match f {
            ExportFormat::Dot => Format::Dot,
            ExportFormat::Graphml => Format::Graphml,
            ExportFormat::Json => Format::Json,
        }
    }
}

#[derive(Args, Debug)]
struct FlipgraphArgs {
    /// Point file; `-` or absent reads standard input.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GraphKind::Edge)]
    kind: GraphKind,
    #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
    format: ExportFormat,
}

#[derive(Args, Debug)]
struct ConnectivityArgs {
    /// Point file, or a graph exported with `flipgraph --format json`.
    input: Option<PathBuf>,
    /// Flip graph to build when the input is a point file.
    #[arg(long, value_enum, default_value_t = GraphKind::Bistellar)]
    kind: GraphKind,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LinkKind {
    Full,
    Partial,
}

#[derive(Args, Debug)]
struct LinkArgs {
    input: Option<PathBuf>,
    /// Index of the triangulation in the flip graph of the matching kind
    /// (edge graph for full links, bistellar for partial).
    #[arg(long, conflicts_with = "triangulation")]
    id: Option<usize>,
    /// Triangulation as JSON {"vertices": [...], "edges": [[a, b], ...]}.
    #[arg(long)]
    triangulation: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = LinkKind::Full)]
    kind: LinkKind,
    #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
    format: ExportFormat,
}

#[derive(Args, Debug)]
struct PosetArgs {
    input: Option<PathBuf>,
    /// `json` prints subdivisions with heights and steps; the others export
    /// the Hasse diagram.
    #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
    format: ExportFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NotionArg {
    /// Lift only the vertices of the input.
    Subdivision,
    /// Lift every point of the set.
    Triangulation,
}

#[derive(Args, Debug)]
struct RegularArgs {
    input: Option<PathBuf>,
    /// Triangulation as JSON.
    #[arg(long, conflicts_with_all = ["subdivision", "id", "mother"])]
    triangulation: Option<PathBuf>,
    /// Subdivision as JSON {"vertices", "edges", "bystanders"}.
    #[arg(long, conflicts_with_all = ["id", "mother"])]
    subdivision: Option<PathBuf>,
    /// Index of a triangulation in the bistellar flip graph.
    #[arg(long, conflicts_with = "mother")]
    id: Option<usize>,
    /// Report on the named subdivision S and its refinements T', T'' of
    /// the mother example instead of reading input.
    #[arg(long, value_enum)]
    mother: Option<MotherVariant>,
    /// Defaults to lifting all points for triangulations and only the
    /// vertex set for subdivisions.
    #[arg(long, value_enum)]
    notion: Option<NotionArg>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite to run; repeat for several, or `all`.
    #[arg(long, default_value = "all")]
    suite: Vec<String>,
    /// Largest instance size per suite; each suite has its own default.
    #[arg(long)]
    n_max: Option<usize>,
    /// Random point sets per suite.
    #[arg(long, default_value_t = verify::DEFAULT_RANDOM_SETS)]
    random_sets: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Debug)]
enum Failure {
    /// Bad arguments or input; exit 2.
    Usage(String),
    /// A verification check failed; the report is already printed.
    Checks,
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn read_points(path: Option<&PathBuf>) -> Result<Arc<PointSet>, Failure> {
    let text = read_input(path)?;
    PointSet::parse(&text)
        .map(Arc::new)
        .map_err(|e| usage(format!("invalid point set: {e}\n{POINT_FORMAT}")))
}

fn build_graph(ps: Arc<PointSet>, kind: FlipKind, cap: Option<usize>) -> Result<FlipGraph, Failure> {
    let cap = cap.unwrap_or(kind.default_cap());
    FlipGraph::build(ps, kind, Some(cap)).map_err(|e| usage(format!("{kind} flip graph: {e}")))
}

fn pick(g: &FlipGraph, id: usize) -> Result<Triangulation, Failure> {
    if id >= g.len() {
        return Err(usage(format!(
            "triangulation id {id} out of range; the {} flip graph has {} nodes",
            g.kind(),
            g.len()
        )));
    }
    Ok(g.node(id).clone())
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn gen(a: &GenArgs, seed: u64) -> Outcome {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("{flag} is required for this family")));
    let spec = match a.family {
        Family::Convex => GeneratorSpec::ConvexGon { n: need(a.n, "--n")? },
        Family::Twisted => GeneratorSpec::TwistedDoubleGon { k: need(a.k, "--k")? },
        Family::Mother => GeneratorSpec::MotherExample {
            concurrent: a.variant == MotherVariant::Concurrent,
        },
        Family::Random => GeneratorSpec::Random {
            n: need(a.n, "--n")?,
            seed,
            bound: a.bound,
        },
    };
    let ps = spec.generate().map_err(|e| usage(e.to_string()))?;
    Ok(match a.format {
        PointFormat::Text => ps.to_text(),
        PointFormat::Json => ps.to_json() + "\n",
    })
}

fn flipgraph(a: &FlipgraphArgs, cap: Option<usize>) -> Outcome {
    let g = build_graph(read_points(a.input.as_ref())?, a.kind.into(), cap)?;
    Ok(ExportGraph::from_flip_graph(&g).render(a.format.into()))
}

/// Adjacency lists from an exported graph, or `None` if `text` is not one.
fn exported_adjacency(text: &str) -> Option<Result<Vec<Vec<usize>>, Failure>> {
    let v: Value = serde_json::from_str(text).ok()?;
    let (nodes, edges) = (v.get("nodes")?.as_array()?, v.get("edges")?.as_array()?);
    let n = nodes.len();
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        let end = |k: &str| e.get(k).and_then(Value::as_u64).map(|x| x as usize).filter(|&x| x < n);
        match (end("source"), end("target")) {
            (Some(a), Some(b)) if a != b => {
                adj[a].push(b);
                adj[b].push(a);
            }
            _ => return Some(Err(usage(format!("malformed graph edge {e}")))),
        }
    }
    for l in &mut adj {
        l.sort_unstable();
        l.dedup();
    }
    Some(Ok(adj))
}

fn connectivity(a: &ConnectivityArgs, cap: Option<usize>) -> Outcome {
    let text = read_input(a.input.as_ref())?;
    let (adj, source) = match exported_adjacency(&text) {
        Some(adj) => (adj?, json!({"input": "graph"})),
        None => {
            let ps = Arc::new(
                PointSet::parse(&text).map_err(|e| usage(format!("invalid input: {e}\n{POINT_FORMAT}")))?,
            );
            let (n, h) = (ps.len(), ps.h());
            let g = build_graph(ps, a.kind.into(), cap)?;
            (g.adjacency(), json!({"input": "points", "kind": g.kind(), "n": n, "h": h}))
        }
    };
    let k = vertex_connectivity(&adj).map_err(|e| usage(e.to_string()))?;
    let mut out = source;
    out["nodes"] = json!(adj.len());
    out["min_degree"] = json!(adj.iter().map(Vec::len).min());
    out["connectivity"] = json!(k);
    Ok(json_line(&out))
}

fn link(a: &LinkArgs, cap: Option<usize>) -> Outcome {
    let ps = read_points(a.input.as_ref())?;
    let kind = match a.kind {
        LinkKind::Full => Kind::Full,
        LinkKind::Partial => Kind::Partial,
    };
    let t = match (&a.triangulation, a.id) {
        (Some(path), _) => {
            let text = read_input(Some(path))?;
            Triangulation::from_json(ps, &text).map_err(|e| usage(format!("invalid triangulation: {e}")))?
        }
        (None, id) => {
            let fk = match kind {
                Kind::Full => FlipKind::Edge,
                Kind::Partial => FlipKind::Bistellar,
            };
            pick(&build_graph(ps, fk, cap)?, id.unwrap_or(0))?
        }
    };
    if kind == Kind::Full && t.kind() != Kind::Full {
        return Err(usage("a full link needs a full triangulation"));
    }
    Ok(ExportGraph::from_link(&link_of(&t, kind)).render(a.format.into()))
}

fn poset(a: &PosetArgs, cap: Option<usize>) -> Outcome {
    let p = build_poset(read_points(a.input.as_ref())?, cap).map_err(|e| usage(format!("poset: {e}")))?;
    Ok(match a.format {
        ExportFormat::Json => p.to_json() + "\n",
        f => ExportGraph::from_poset(&p).render(f.into()),
    })
}

fn regular(a: &RegularArgs, cap: Option<usize>) -> Outcome {
    let report = |s: Option<&Subdivision>, t: Option<&Triangulation>, notion: Option<NotionArg>| match (s, t, notion) {
        (Some(s), _, None | Some(NotionArg::Subdivision)) => Ok(is_regular_subdivision(s).to_json_value()),
        (Some(s), _, Some(NotionArg::Triangulation)) => s
            .to_triangulation()
            .map(|t| is_regular_triangulation(&t).to_json_value())
            .ok_or_else(|| usage("the triangulation notion needs a triangulation")),
        (None, Some(t), None | Some(NotionArg::Triangulation)) => Ok(is_regular_triangulation(t).to_json_value()),
        (None, Some(t), Some(NotionArg::Subdivision)) => {
            Ok(is_regular_subdivision(&Subdivision::from_triangulation(t)).to_json_value())
        }
        (None, None, _) => unreachable!("one input is always given"),
    };
    if let Some(variant) = a.mother {
        let base = Arc::new(mother_example(variant == MotherVariant::Concurrent));
        let s = mother_subdivision(base.clone());
        let t1 = Subdivision::from_triangulation(&mother_t_prime(base.clone()));
        let t2 = Subdivision::from_triangulation(&mother_t_double_prime(base));
        // The three share one vertex set, so both notions coincide here.
        let notion = a.notion.or(Some(NotionArg::Subdivision));
        let out = json!({
            "variant": if variant == MotherVariant::Concurrent { "concurrent" } else { "skew" },
            "S": report(Some(&s), None, notion)?,
            "T'": report(Some(&t1), None, notion)?,
            "T''": report(Some(&t2), None, notion)?,
        });
        return Ok(json_line(&out));
    }
    let ps = read_points(a.input.as_ref())?;
    let out = if let Some(path) = &a.subdivision {
        let s = Subdivision::from_json(ps, &read_input(Some(path))?)
            .map_err(|e| usage(format!("invalid subdivision: {e}")))?;
        report(Some(&s), None, a.notion)?
    } else {
        let t = match (&a.triangulation, a.id) {
            (Some(path), _) => Triangulation::from_json(ps, &read_input(Some(path))?)
                .map_err(|e| usage(format!("invalid triangulation: {e}")))?,
            (None, Some(id)) => pick(&build_graph(ps, FlipKind::Bistellar, cap)?, id)?,
            (None, None) => {
                return Err(usage("give one of --triangulation, --subdivision, --id or --mother"));
            }
        };
        report(None, Some(&t), a.notion)?
    };
    Ok(json_line(&out))
}

fn verify_cmd(a: &VerifyArgs, cap: Option<usize>, seed: u64) -> Outcome {
    let mut suites = Vec::new();
    for name in &a.suite {
        if name == "all" {
            suites.extend(Suite::ALL);
        } else {
            suites.push(name.parse::<Suite>().map_err(usage)?);
        }
    }
    suites.sort();
    suites.dedup();
    let opts = verify::Options {
        n_max: a.n_max,
        cap,
        seed,
        random_sets: a.random_sets,
    };
    let report = verify::run(&suites, &opts);
    let text = match a.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Table => report.to_table(),
    };
    if report.all_pass() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Checks)
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gen(a) => gen(a, cli.seed),
        Command::Flipgraph(a) => flipgraph(a, cli.cap),
        Command::Connectivity(a) => connectivity(a, cli.cap),
        Command::Link(a) => link(a, cli.cap),
        Command::Poset(a) => poset(a, cli.cap),
        Command::Regular(a) => regular(a, cli.cap),
        Command::Verify(a) => verify_cmd(a, cli.cap, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // A closed pipe downstream is not an error worth reporting.
            let _ = io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
