use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pflow::compare::{compare_runs, run_algorithm, write_records_csv, Algorithm, Distribution, SweepSpec};
use pflow::decompose::decompose;
use pflow::edge_lp::{build_edge_lp, solve_edge_lp, FlowObjective};
use pflow::gen::{gen_random_instance, gen_reduction_instance, random_cubic_graph, RandomSpec, ReductionSpec};
use pflow::instance::{read_instance, Instance};
use pflow::io::{read_json, write_json, write_purchase_csv, write_walks_csv, EdgeSolutionDocument, Meta, PurchaseDocument, SolutionDocument};
use pflow::lp::write_mps;
use pflow::mwu::MwuConfig;
use pflow::purchase::{
    greedy_budgeted_single_source, round_budgeted_purchase, round_min_purchase, solve_purchase_lp, GreedyConfig, PurchaseInstance,
    PurchaseMode,
};
use pflow::{verify_walk_solution, Error, Orientation, Result, Tolerance, WalkFlowSolution};

#[derive(Parser)]
#[command(name = "pflow", version, about = "Multi-commodity flow with in-network processing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Lp,
    Mwu,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Maxflow,
    Congestion,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Min,
    Budget,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Setcover,
    Maxkcover,
    Vertexcover,
    Bisection,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dist {
    All,
    Half,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; writes a walk document (or CSV rows for a .csv path).
    Solve {
        #[arg(long, value_enum, default_value = "lp")]
        alg: Alg,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Iteration cap for the multiplicative-weights solver.
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long, value_enum, default_value = "maxflow")]
        objective: Objective,
        /// Also write the edge LP in MPS format.
        #[arg(long)]
        emit_lp: Option<PathBuf>,
        /// Write the edge solution (for `decompose`) instead of walks; LP only.
        #[arg(long)]
        edge: bool,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        verbose: bool,
    },
    /// Decompose an edge solution document into walks.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Plan middlebox purchases.
    Purchase {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        input: PathBuf,
        /// Allowed demand shortfall for min mode.
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        /// Overrides the instance's budget.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Budget mode on undirected single-source instances: use the greedy
        /// algorithm instead of LP rounding.
        #[arg(long)]
        greedy: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate an instance file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 6)]
        nodes: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 2)]
        demands: usize,
        /// Edge capacity range LO:HI.
        #[arg(long, default_value = "1:5")]
        edge_cap: String,
        /// Node capacity range LO:HI.
        #[arg(long, default_value = "0:5")]
        node_cap: String,
        /// Demand amount range LO:HI; uncapped when omitted.
        #[arg(long)]
        amount: Option<String>,
        #[arg(long)]
        undirected: bool,
        /// Draw real-valued instead of integer capacities.
        #[arg(long)]
        real: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Universe size for set cover gadgets (elements 1..=N).
        #[arg(long)]
        universe: Option<usize>,
        /// Sets as `1,2;2,3`.
        #[arg(long)]
        sets: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        /// Graph edges as `a-b,b-c`; vertices are the names used.
        #[arg(long)]
        edges: Option<String>,
        /// Bisection on a random cubic graph with this many vertices.
        #[arg(long)]
        cubic: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Sweep node capacities and compare algorithms; writes CSV.
    Compare {
        #[arg(long)]
        input: PathBuf,
        /// LO:HI:STEP
        #[arg(long)]
        sweep: String,
        #[arg(long, value_enum, default_value = "all")]
        dist: Dist,
        #[arg(long, default_value = "lp,naive")]
        algs: String,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn write_walks(path: &Path, inst: &Instance, sol: &WalkFlowSolution, meta: Meta) -> Result<()> {
    if is_csv(path) {
        write_walks_csv(BufWriter::new(File::create(path)?), &inst.net, &inst.demands, sol)
    } else {
        write_json(path, &SolutionDocument::from_walks(&inst.net, &inst.demands, sol, meta))
    }
}

fn range(text: &str) -> Result<(f64, f64)> {
    let bad = || Error::Structural(format!("expected LO:HI, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn parse_sets(text: &str) -> Vec<Vec<String>> {
    text.split(';')
        .map(|set| set.split(',').map(|x| x.trim().to_string()).collect())
        .collect()
}

fn parse_edges(text: &str) -> Result<(Vec<String>, Vec<(String, String)>)> {
    let mut vertices: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for pair in text.split(',') {
        let (a, b) = pair
            .split_once('-')
            .ok_or_else(|| Error::Structural(format!("bad edge {pair:?}, expected a-b")))?;
        for v in [a.trim(), b.trim()] {
            if !vertices.iter().any(|x| x == v) {
                vertices.push(v.to_string());
            }
        }
        edges.push((a.trim().to_string(), b.trim().to_string()));
    }
    Ok((vertices, edges))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            alg,
            input,
            epsilon,
            max_iterations,
            objective,
            emit_lp,
            edge,
            output,
            verbose,
        } => {
            let inst = read_instance(&input)?;
            let (net, demands) = (&inst.net, &inst.demands);
            let obj = match objective {
                Objective::Maxflow => FlowObjective::MaxTotalFlow,
                Objective::Congestion => FlowObjective::MinMaxCongestion,
            };
            if let Some(path) = emit_lp {
                std::fs::write(path, write_mps(&build_edge_lp(net, demands, &obj)?.model))?;
            }
            let alg = match alg {
                Alg::Lp => Algorithm::Lp,
                Alg::Mwu => Algorithm::Mwu,
                Alg::Naive => Algorithm::Naive,
            };
            if matches!(objective, Objective::Congestion) || edge {
                if alg != Algorithm::Lp {
                    return Err(Error::Unsupported("congestion objectives and edge output need --alg lp".into()));
                }
                let out = solve_edge_lp(net, demands, &obj)?;
                let meta = Meta::new(if edge { "lp" } else { "lp-congestion" });
                if edge {
                    return write_json(&output, &EdgeSolutionDocument::new(&inst, &out.solution, meta));
                }
                let sol = decompose(net, demands, &out.solution)?;
                let mut doc = SolutionDocument::from_walks(net, demands, &sol, meta);
                // The largest utilization is the objective here.
                doc.objective = out.objective;
                if verbose {
                    eprintln!("max utilization {:.6}", out.objective);
                }
                return if is_csv(&output) {
                    write_walks(&output, &inst, &sol, Meta::default())
                } else {
                    write_json(&output, &doc)
                };
            }
            let mut mwu = MwuConfig::with_epsilon(epsilon);
            mwu.verbose = verbose;
            if let Some(cap) = max_iterations {
                mwu.max_iterations = cap;
            }
            let run = run_algorithm(net, demands, alg, &mwu)?;
            let report = verify_walk_solution(net, demands, &run.solution, Tolerance::default())?;
            if !report.ok() {
                return Err(Error::Internal(format!("solver output failed verification:\n{report}")));
            }
            if verbose {
                eprintln!("{}: objective {:.6}, {} iterations", alg.name(), run.objective, run.iterations);
            }
            let mut meta = Meta::new(alg.name());
            if alg == Algorithm::Mwu {
                meta.epsilon = Some(epsilon);
            }
            write_walks(&output, &inst, &run.solution, meta)
        }
        Command::Decompose { input, output } => {
            let doc: EdgeSolutionDocument = read_json(&input)?;
            let (inst, sol) = doc.parts()?;
            let walks = decompose(&inst.net, &inst.demands, &sol)?;
            write_walks(&output, &inst, &walks, Meta::new(&doc.meta.algorithm))
        }
        Command::Purchase {
            mode,
            input,
            delta,
            budget,
            seed,
            greedy,
            output,
        } => {
            let mut inst = PurchaseInstance::from_instance(&read_instance(&input)?)?;
            if budget.is_some() {
                inst.budget = budget;
            }
            let mut meta = Meta::new("");
            meta.seed = Some(seed);
            let sol = match mode {
                Mode::Min => {
                    let lp = solve_purchase_lp(&inst, PurchaseMode::Min, None)?;
                    meta.epsilon = Some(delta / 2.0);
                    round_min_purchase(&inst, &lp, delta, seed)?
                }
                Mode::Budget if greedy => greedy_budgeted_single_source(&inst, &GreedyConfig::default())?.solution,
                Mode::Budget => round_budgeted_purchase(&inst, seed)?,
            };
            meta.algorithm = sol.method.clone();
            if is_csv(&output) {
                write_purchase_csv(BufWriter::new(File::create(&output)?), &inst, &sol)
            } else {
                write_json(&output, &PurchaseDocument::new(&inst.net, &inst.demands, &sol, meta))
            }
        }
        Command::Gen {
            kind,
            nodes,
            density,
            demands,
            edge_cap,
            node_cap,
            amount,
            undirected,
            real,
            seed,
            universe,
            sets,
            k,
            edges,
            cubic,
            output,
        } => {
            let need = |what: &str| Error::Structural(format!("--kind needs --{what}"));
            let inst = match kind {
                Kind::Random => gen_random_instance(&RandomSpec {
                    nodes,
                    density,
                    edge_capacity: range(&edge_cap)?,
                    node_capacity: range(&node_cap)?,
                    integral: !real,
                    demands,
                    demand_amount: amount.as_deref().map(range).transpose()?,
                    orientation: if undirected { Orientation::Undirected } else { Orientation::Directed },
                    seed,
                })?,
                Kind::Setcover | Kind::Maxkcover => {
                    let universe: Vec<String> = (1..=universe.ok_or_else(|| need("universe"))?).map(|x| x.to_string()).collect();
                    let sets = parse_sets(sets.as_deref().ok_or_else(|| need("sets"))?);
                    gen_reduction_instance(&if matches!(kind, Kind::Setcover) {
                        ReductionSpec::SetCover { universe, sets }
                    } else {
                        ReductionSpec::MaxKCover {
                            universe,
                            sets,
                            k: k.ok_or_else(|| need("k"))?,
                        }
                    })?
                }
                Kind::Vertexcover => {
                    let (vertices, edges) = parse_edges(edges.as_deref().ok_or_else(|| need("edges"))?)?;
                    gen_reduction_instance(&ReductionSpec::VertexCover { vertices, edges })?
                }
                Kind::Bisection => {
                    let (vertices, edges) = match (cubic, edges) {
                        (Some(n), _) => {
                            let pairs = random_cubic_graph(n, seed)?;
                            let names: Vec<String> = (0..n).map(|v| v.to_string()).collect();
                            let edges = pairs.iter().map(|&(a, b)| (names[a].clone(), names[b].clone())).collect();
                            (names, edges)
                        }
                        (None, Some(text)) => parse_edges(&text)?,
                        (None, None) => return Err(need("cubic or --edges")),
                    };
                    gen_reduction_instance(&ReductionSpec::Bisection { vertices, edges })?
                }
            };
            std::fs::write(output, inst.emit())?;
            Ok(())
        }
        Command::Compare {
            input,
            sweep,
            dist,
            algs,
            reps,
            seed,
            epsilon,
            output,
        } => {
            let inst = read_instance(&input)?;
            let dist = match dist {
                Dist::All => Distribution::All,
                Dist::Half => Distribution::Half,
            };
            let mut spec = SweepSpec::parse_range(&sweep, dist)?;
            spec.reps = reps;
            spec.seed = seed;
            spec.epsilon = epsilon;
            let algs = algs.split(',').map(|a| a.trim().parse()).collect::<Result<Vec<Algorithm>>>()?;
            let name = input.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
            let records = compare_runs(&name, &inst.net, &inst.demands, &spec, &algs)?;
            write_records_csv(BufWriter::new(File::create(&output)?), &records)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
