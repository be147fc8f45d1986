use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sftconj::gadgets::{
    attach_weight_widget, edge_gadget_pair, gi_to_digraphs, hitting_set_reduction, vertex_gadget_pair,
    ReductionOptions, StructurePartition, UndirectedGraph,
};
use sftconj::io::{graph_to_value, multigraph_to_value, parse_any_graph, parse_graph, parse_multigraph, AnyGraph};
use sftconj::search::{decide_k_block_conjugacy, search_one_block_reduction, HittingSetInstance};
use sftconj::shift::{edge_to_vertex, entropy_estimate, higher_block_graph};
use sftconj::{trace_powers, trim_to_essential, verify, verify_edge_shift, BlockMap, DirectedGraph, Error, Verdict};

/// Verify, search for and construct conjugacies between shifts of finite type.
#[derive(Parser)]
#[command(name = "sftconj", version)]
struct Cli {
    /// Worker threads for the parallel parts of the library.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a block map is a conjugacy. Exit 0 yes, 1 no, 2 bad input.
    Verify(VerifyArgs),
    /// Search for a k-block conjugacy. Exit 0 found, 1 none, 3 budget exceeded.
    Decide(DecideArgs),
    /// Search for a 1-block conjugacy onto a graph with `ell` fewer vertices.
    Reduce(ReduceArgs),
    /// Build reduction gadgets.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Small graph utilities.
    #[command(subcommand)]
    Tools(ToolsCommand),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    map: PathBuf,
    /// Read both graphs as edge shifts; the map is then on edge labels.
    #[arg(long)]
    edge_shift: bool,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Args)]
struct OutArgs {
    /// Write one file per output document here instead of printing them.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Double two connected undirected graphs into digraphs.
    GiDouble {
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Vertex gadgets for a pair of vertex shifts.
    VertexPair {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Edge gadgets for a pair of edge shifts.
    EdgePair {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The graph built from a hitting-set instance.
    HittingSet {
        #[arg(long)]
        instance: PathBuf,
        /// Widget parameter; defaults to 5mn.
        #[arg(long = "K")]
        big_k: Option<usize>,
        #[arg(long)]
        no_widgets: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Attach a weight widget. Without a host, uses the three-state host
    /// `alpha`, `a`, `c` with `A* = {a}` and `C* = {c}`.
    Widget {
        #[arg(long = "K")]
        big_k: usize,
        #[arg(long, requires = "partition")]
        host: Option<PathBuf>,
        /// JSON `{"alpha": .., "a": [..], "b": [..], "c": [..]}`.
        #[arg(long, requires = "host")]
        partition: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        a_star: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        c_star: Vec<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum ToolsCommand {
    HigherBlock {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    EdgeToVertex {
        #[arg(long)]
        graph: PathBuf,
    },
    Trim {
        #[arg(long)]
        graph: PathBuf,
    },
    Entropy {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Traces of the first `n` powers of the adjacency matrix.
    Traces {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<DirectedGraph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_map(path: &Path) -> Result<BlockMap> {
    BlockMap::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Prints `docs` as one JSON object, or writes `<name>.json` files.
fn emit(out: &OutArgs, docs: Vec<(&str, Value)>) -> Result<()> {
    match &out.out_dir {
        None => {
            let object: serde_json::Map<String, Value> = docs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            println!("{}", Value::Object(object));
        }
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, doc) in docs {
                let path = dir.join(format!("{name}.json"));
                fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<Verdict> {
    let phi = load_map(&args.map)?;
    if args.edge_shift {
        let g = parse_multigraph(&read(&args.source)?)?;
        let h = parse_multigraph(&read(&args.target)?)?;
        Ok(verify_edge_shift(&g, &h, &phi))
    } else {
        Ok(verify(&load_graph(&args.source)?, &load_graph(&args.target)?, &phi))
    }
}

/// Exit code 3 for an exhausted budget, 2 for anything else.
fn search_failure(e: anyhow::Error) -> ExitCode {
    let budget = matches!(e.downcast_ref::<Error>(), Some(Error::BudgetExceeded { .. }));
    if budget {
        println!("{}", json!({ "found": null, "budget_exceeded": true }));
        eprintln!("sftconj: {e:#}");
        ExitCode::from(3)
    } else {
        eprintln!("sftconj: {e:#}");
        ExitCode::from(2)
    }
}

fn decide(args: &DecideArgs) -> Result<Option<BlockMap>> {
    let g = load_graph(&args.source)?;
    let h = load_graph(&args.target)?;
    Ok(decide_k_block_conjugacy(&g, &h, args.k, args.budget)?)
}

fn reduce(args: &ReduceArgs) -> Result<Option<(BlockMap, DirectedGraph)>> {
    let g = load_graph(&args.source)?;
    Ok(search_one_block_reduction(&g, args.ell, args.budget)?)
}

fn gadget(cmd: &GadgetCommand) -> Result<()> {
    match cmd {
        GadgetCommand::GiDouble { first, second, out } => {
            let undirected = |path: &Path| -> Result<UndirectedGraph> {
                let g = load_graph(path)?;
                Ok(UndirectedGraph::from_edges(g.names(), &g.edge_names())?)
            };
            let (a, b) = gi_to_digraphs(&undirected(first)?, &undirected(second)?)?;
            emit(out, vec![("first", graph_to_value(&a)), ("second", graph_to_value(&b))])
        }
        GadgetCommand::VertexPair { source, target, k, out } => {
            let (g, h) = vertex_gadget_pair(&load_graph(source)?, &load_graph(target)?, *k)?;
            emit(out, vec![("source", graph_to_value(&g)), ("target", graph_to_value(&h))])
        }
        GadgetCommand::EdgePair { source, target, k, out } => {
            let g = parse_multigraph(&read(source)?)?;
            let h = parse_multigraph(&read(target)?)?;
            let (g, h) = edge_gadget_pair(&g, &h, *k)?;
            emit(out, vec![("source", multigraph_to_value(&g)), ("target", multigraph_to_value(&h))])
        }
        GadgetCommand::HittingSet { instance, big_k, no_widgets, out } => {
            let inst = HittingSetInstance::from_json(&read(instance)?)?;
            let red = hitting_set_reduction(&inst, ReductionOptions { k: *big_k, widgets: !no_widgets })?;
            if red.metadata.test_scale {
                eprintln!(
                    "sftconj: K = {} is below 5mn = {}; fine for tests, too small for the hardness argument",
                    red.metadata.k,
                    5 * red.metadata.m * red.metadata.n
                );
            }
            let metadata = json!({ "partition": red.partition, "reduction": red.metadata });
            emit(out, vec![("graph", graph_to_value(&red.graph)), ("metadata", metadata)])
        }
        GadgetCommand::Widget { big_k, host, partition, a_star, c_star, out } => {
            let (g, p, a_star, c_star) = match (host, partition) {
                (Some(host), Some(partition)) => {
                    let p: StructurePartition = serde_json::from_str(&read(partition)?)
                        .with_context(|| format!("parsing {}", partition.display()))?;
                    (load_graph(host)?, p, a_star.clone(), c_star.clone())
                }
                _ => {
                    if !a_star.is_empty() || !c_star.is_empty() {
                        bail!("--a-star / --c-star need --host and --partition");
                    }
                    let g = DirectedGraph::from_edges(
                        &["alpha", "a", "c"],
                        &[
                            ("alpha", "alpha"),
                            ("alpha", "a"),
                            ("a", "alpha"),
                            ("a", "a"),
                            ("alpha", "c"),
                            ("c", "alpha"),
                            ("c", "c"),
                        ],
                    )?;
                    let p = StructurePartition {
                        alpha: "alpha".into(),
                        a: vec!["a".into()],
                        b: vec![],
                        c: vec!["c".into()],
                    };
                    (g, p, vec!["a".to_string()], vec!["c".to_string()])
                }
            };
            let (g, p, w) = attach_weight_widget(&g, &p, &a_star, &c_star, *big_k)?;
            emit(out, vec![("graph", graph_to_value(&g)), ("metadata", json!({ "partition": p, "widget": w }))])
        }
    }
}

fn tools(cmd: &ToolsCommand) -> Result<()> {
    let doc = match cmd {
        ToolsCommand::HigherBlock { graph, k } => {
            if *k == 0 {
                bail!("--k must be at least 1");
            }
            graph_to_value(&higher_block_graph(&load_graph(graph)?, *k))
        }
        ToolsCommand::EdgeToVertex { graph } => graph_to_value(&edge_to_vertex(&parse_multigraph(&read(graph)?)?)),
        ToolsCommand::Trim { graph } => graph_to_value(&trim_to_essential(&load_graph(graph)?)),
        ToolsCommand::Entropy { graph, tol } => {
            let g = match parse_any_graph(&read(graph)?)? {
                AnyGraph::Vertex(g) => g,
                AnyGraph::Edge(m) => edge_to_vertex(&m),
            };
            json!({ "entropy": entropy_estimate(&g, *tol)? })
        }
        ToolsCommand::Traces { graph, n } => {
            let traces = match parse_any_graph(&read(graph)?)? {
                AnyGraph::Vertex(g) => trace_powers(&g, *n),
                AnyGraph::Edge(m) => trace_powers(&m, *n),
            };
            // decimal strings: the values outgrow every fixed-width integer
            json!({ "traces": traces.values().iter().map(|t| t.to_string()).collect::<Vec<_>>() })
        }
    };
    println!("{doc}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("sftconj: {e}");
        return ExitCode::from(2);
    }
    match &cli.command {
        Command::Verify(args) => match run_verify(args) {
            Ok(verdict) => {
                println!("{}", verdict.to_json());
                ExitCode::from(if verdict.is_conjugacy { 0 } else { 1 })
            }
            Err(e) => {
                eprintln!("sftconj: {e:#}");
                ExitCode::from(2)
            }
        },
        Command::Decide(args) => match decide(args) {
            Ok(Some(phi)) => {
                println!("{}", json!({ "found": true, "map": phi.to_text() }));
                ExitCode::SUCCESS
            }
            Ok(None) => {
                println!("{}", json!({ "found": false }));
                ExitCode::from(1)
            }
            Err(e) => search_failure(e),
        },
        Command::Reduce(args) => match reduce(args) {
            Ok(Some((phi, image))) => {
                let mut classes: Vec<Vec<String>> = Vec::new();
                for name in image.names() {
                    classes.push(phi.iter().filter(|(_, s)| *s == name).map(|(w, _)| w[0].clone()).collect());
                }
                println!(
                    "{}",
                    json!({ "found": true, "partition": classes, "image": graph_to_value(&image), "map": phi.to_text() })
                );
                ExitCode::SUCCESS
            }
            Ok(None) => {
                println!("{}", json!({ "found": false }));
                ExitCode::from(1)
            }
            Err(e) => search_failure(e),
        },
        Command::Gadget(cmd) => finish(gadget(cmd)),
        Command::Tools(cmd) => finish(tools(cmd)),
    }
}

fn finish(result: Result<()>) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sftconj: {e:#}");
            ExitCode::from(2)
        }
    }
}
