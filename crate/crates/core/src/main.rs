use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use cherrypick::cps::{validate_trace, CpsError};
use cherrypick::gen::{random_forest, random_pair};
use cherrypick::io::{
    parse_forest, parse_forest_pair, parse_network_named, parse_trace, serialize_forest, serialize_forest_pair,
    serialize_network, serialize_trace,
};
use cherrypick::oracles::{displays, tbr_distance_bfs, EmbeddingImage, OracleError};
use cherrypick::search::{min_weight_cps, SearchOptions, SearchOutcome};
use cherrypick::{build_network, BuildError, Forest, ParseError, PhyloTree};

#[derive(Parser)]
#[command(name = "cherrypick", version, about = "Hybrid numbers and TBR distances of unrooted binary forests")]
struct Cli {
    /// Print a JSON report instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the exact search.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum weight of a cherry picking sequence, i.e. the hybrid number.
    Hybrid {
        #[arg(long, required_unless_present = "pair")]
        forest1: Option<PathBuf>,
        #[arg(long, required_unless_present = "pair")]
        forest2: Option<PathBuf>,
        /// A single file holding both forests, as written by `gen --pair`.
        #[arg(long, conflicts_with_all = ["forest1", "forest2"])]
        pair: Option<PathBuf>,
        #[arg(long)]
        trace_out: Option<PathBuf>,
        #[arg(long)]
        network_out: Option<PathBuf>,
        /// Stop after expanding this many search states.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// TBR distance by breadth-first search over tree rearrangements.
    Tbr {
        #[arg(long)]
        tree1: PathBuf,
        #[arg(long)]
        tree2: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Replays a trace and prints its weight.
    ValidateTrace {
        #[arg(long)]
        forest1: PathBuf,
        #[arg(long)]
        forest2: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Builds a network displaying both forests from a trace.
    BuildNetwork {
        #[arg(long)]
        forest1: PathBuf,
        #[arg(long)]
        forest2: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decides whether a network displays a forest.
    Displays {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        forest: PathBuf,
        /// Write the embedding as JSON to this file.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Random forests on leaves 1..N.
    Gen {
        #[arg(long)]
        leaves: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        components: usize,
        /// Emit two forests under pair headers.
        #[arg(long)]
        pair: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
    outcome: Option<Value>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            outcome: None,
        }
    }
}

fn parse_failure(path: &Path, e: ParseError) -> Failure {
    Failure::new(2, format!("{}:{e}", path.display()))
}

fn cps_failure(e: CpsError) -> Failure {
    match e {
        CpsError::GroundSetMismatch => Failure::new(3, e.to_string()),
        _ => Failure::new(5, e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(5, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(5, format!("{}: {e}", path.display())))
}

fn load_forest(path: &Path) -> Result<Forest, Failure> {
    parse_forest(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn load_tree(path: &Path) -> Result<PhyloTree, Failure> {
    let f = load_forest(path)?;
    match f.trees() {
        [t] => Ok(t.clone()),
        _ => Err(Failure::new(2, format!("{}: expected a single tree", path.display()))),
    }
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    inputs: Vec<String>,
    outcome: Value,
    timing_ms: f64,
}

/// Plain-text output and JSON outcome of a successful run.
struct Done {
    text: String,
    outcome: Value,
}

fn hybrid(
    cli: &Cli,
    forests: (Forest, Forest),
    trace_out: Option<&Path>,
    network_out: Option<&Path>,
    budget: Option<u64>,
) -> Result<Done, Failure> {
    let (f, f2) = forests;
    let opts = SearchOptions {
        budget,
        threads: cli.threads,
    };
    let result = min_weight_cps(&f, &f2, &opts).map_err(cps_failure)?;
    let stats = json!({
        "nodes": result.stats.nodes,
        "memo_hits": result.stats.memo_hits,
    });
    match &result.outcome {
        SearchOutcome::Bounded { lower, upper, .. } => Err(Failure {
            code: 4,
            message: format!("budget exhausted: {lower} <= hybrid number <= {upper}"),
            outcome: Some(json!({ "lower": lower, "upper": upper, "stats": stats })),
        }),
        SearchOutcome::Exact { min_weight, witness } => {
            if let Some(p) = trace_out {
                write(p, &serialize_trace(witness))?;
            }
            let mut outcome = json!({ "min_weight": min_weight, "stats": stats });
            if let Some(p) = network_out {
                let n = build_network(&f, &f2, witness).map_err(|e| Failure::new(5, e.to_string()))?;
                write(p, &serialize_network(&n))?;
                outcome["network_reticulation_number"] = json!(n.reticulation_number());
            }
            Ok(Done {
                text: format!("{min_weight}\n"),
                outcome,
            })
        }
    }
}

/// The embedding with network vertices given by their document names.
fn witness_json(img: &EmbeddingImage, names: &[String], f: &Forest) -> Value {
    let comps: Vec<Value> = img
        .components
        .iter()
        .zip(f.trees())
        .map(|(c, t)| {
            let tree_name = |v: usize| match t.graph().label(v) {
                Some(l) => l.to_string(),
                None => format!("#{v}"),
            };
            let vertices: Vec<Value> = c
                .vertex_map
                .iter()
                .map(|&(v, w)| json!({ "tree": tree_name(v), "network": names[w] }))
                .collect();
            let edges: Vec<Value> = c
                .edge_paths
                .iter()
                .map(|((a, b), p)| {
                    json!({
                        "tree": [tree_name(*a), tree_name(*b)],
                        "path": p.iter().map(|&w| names[w].clone()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({ "vertices": vertices, "edges": edges })
        })
        .collect();
    Value::Array(comps)
}

fn run(cli: &Cli) -> Result<Done, Failure> {
    match &cli.command {
        Command::Hybrid {
            forest1,
            forest2,
            pair,
            trace_out,
            network_out,
            budget,
        } => {
            let forests = match pair {
                Some(p) => parse_forest_pair(&read(p)?).map_err(|e| parse_failure(p, e))?,
                None => {
                    let (a, b) = (forest1.as_ref().unwrap(), forest2.as_ref().unwrap());
                    (load_forest(a)?, load_forest(b)?)
                }
            };
            hybrid(cli, forests, trace_out.as_deref(), network_out.as_deref(), *budget)
        }
        Command::Tbr { tree1, tree2, cap } => {
            let (t, t2) = (load_tree(tree1)?, load_tree(tree2)?);
            let d = tbr_distance_bfs(&t, &t2, cap.unwrap_or(usize::MAX)).map_err(|e| match e {
                OracleError::LabelMismatch => Failure::new(3, e.to_string()),
                OracleError::CapExceeded(_) => Failure::new(4, e.to_string()),
                _ => Failure::new(5, e.to_string()),
            })?;
            Ok(Done {
                text: format!("{d}\n"),
                outcome: json!({ "tbr_distance": d }),
            })
        }
        Command::ValidateTrace {
            forest1,
            forest2,
            trace,
        } => {
            let (f, f2) = (load_forest(forest1)?, load_forest(forest2)?);
            let tr = parse_trace(&read(trace)?).map_err(|e| parse_failure(trace, e))?;
            let w = validate_trace(&f, &f2, &tr).map_err(cps_failure)?;
            Ok(Done {
                text: format!("{w}\n"),
                outcome: json!({ "weight": w, "steps": tr.len() }),
            })
        }
        Command::BuildNetwork {
            forest1,
            forest2,
            trace,
            out,
        } => {
            let (f, f2) = (load_forest(forest1)?, load_forest(forest2)?);
            let tr = parse_trace(&read(trace)?).map_err(|e| parse_failure(trace, e))?;
            let n = build_network(&f, &f2, &tr).map_err(|e| match e {
                BuildError::InvalidTrace(c) => cps_failure(c),
                other => Failure::new(5, other.to_string()),
            })?;
            write(out, &serialize_network(&n))?;
            let r = n.reticulation_number();
            Ok(Done {
                text: format!("{r}\n"),
                outcome: json!({ "reticulation_number": r, "weight": tr.weight() }),
            })
        }
        Command::Displays {
            network,
            forest,
            witness_out,
        } => {
            let (n, names) = parse_network_named(&read(network)?).map_err(|e| parse_failure(network, e))?;
            let f = load_forest(forest)?;
            let img = displays(&n, &f).map_err(|e| match e {
                OracleError::UnknownLabel(_) => Failure::new(3, e.to_string()),
                _ => Failure::new(5, e.to_string()),
            })?;
            let witness = img.as_ref().map(|i| witness_json(i, &names, &f));
            if let (Some(p), Some(w)) = (witness_out, &witness) {
                write(p, &format!("{}\n", serde_json::to_string_pretty(w).unwrap()))?;
            }
            Ok(Done {
                text: if witness.is_some() { "yes\n" } else { "no\n" }.to_string(),
                outcome: json!({ "displays": witness.is_some(), "witness": witness }),
            })
        }
        Command::Gen {
            leaves,
            seed,
            components,
            pair,
        } => {
            if *leaves == 0 {
                return Err(Failure::new(5, "--leaves must be at least 1"));
            }
            let text = if *pair {
                let (a, b) = random_pair(*leaves, *components, *seed);
                serialize_forest_pair(&a, &b)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                serialize_forest(&random_forest(*leaves, *components, &mut rng))
            };
            Ok(Done {
                outcome: json!({ "document": text }),
                text,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Hybrid { .. } => "hybrid",
        Command::Tbr { .. } => "tbr",
        Command::ValidateTrace { .. } => "validate-trace",
        Command::BuildNetwork { .. } => "build-network",
        Command::Displays { .. } => "displays",
        Command::Gen { .. } => "gen",
    }
}

fn inputs(c: &Command) -> Vec<String> {
    let paths: Vec<&PathBuf> = match c {
        Command::Hybrid {
            forest1, forest2, pair, ..
        } => [forest1, forest2, pair].into_iter().flatten().collect(),
        Command::Tbr { tree1, tree2, .. } => vec![tree1, tree2],
        Command::ValidateTrace {
            forest1,
            forest2,
            trace,
        }
        | Command::BuildNetwork {
            forest1,
            forest2,
            trace,
            ..
        } => vec![forest1, forest2, trace],
        Command::Displays { network, forest, .. } => vec![network, forest],
        Command::Gen { .. } => vec![],
    };
    paths.into_iter().map(|p| p.display().to_string()).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    let report = |outcome: Value| RunReport {
        command: command_name(&cli.command),
        inputs: inputs(&cli.command),
        outcome,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    match result {
        Ok(done) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report(done.outcome)).unwrap());
            } else {
                print!("{}", done.text);
            }
            ExitCode::SUCCESS
        }
        Err(fail) => {
            eprintln!("error: {}", fail.message);
            if cli.json {
                let outcome = fail
                    .outcome
                    .unwrap_or_else(|| json!({ "error": fail.message, "exit_code": fail.code }));
                println!("{}", serde_json::to_string_pretty(&report(outcome)).unwrap());
            } else if let Some(o) = &fail.outcome {
                if let (Some(l), Some(u)) = (o.get("lower"), o.get("upper")) {
                    println!("bounds {l} {u}");
                }
            }
            ExitCode::from(fail.code)
        }
    }
}
