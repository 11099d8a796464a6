//! `treehd` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification or oracle
//! mismatch, 3 oracle size cap or budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use treehd::bench::{log_log_slope, run_bench};
use treehd::generate::gen_random_tree;
use treehd::io::{parse_edge_list, write_edge_list, ResultDocument};
use treehd::oracle::{oracle_hausdorff, OracleConfig, OracleError};
use treehd::{hausdorff_distance_with, verify_mapping, Parallelism, Tree};

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_CAP: u8 = 3;

/// Deep recursion on path-like trees needs more than the default stack.
const WORKER_STACK: usize = 256 << 20;

#[derive(Parser)]
#[command(
    name = "treehd",
    version,
    about = "Hausdorff distance between unrooted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hausdorff distance between two edge-list trees.
    Compute {
        a: PathBuf,
        b: PathBuf,
        /// Write the result document (JSON) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the candidate-root loop; 0 picks automatically.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Re-check a result document against the two trees.
    Verify {
        a: PathBuf,
        b: PathBuf,
        result: PathBuf,
    },
    /// Compare the engine with the exhaustive oracle on small trees.
    Oracle {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = OracleConfig::default().max_vertices)]
        max_vertices: usize,
        #[arg(long, default_value_t = OracleConfig::default().node_budget)]
        node_budget: u64,
    },
    /// Write a uniformly random labeled tree as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time random pairs of each size.
    Bench {
        /// Comma-separated tree sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

fn read_tree(path: &Path) -> Result<Tree, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn worker_pool(threads: usize) -> Result<(rayon::ThreadPool, Parallelism), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .stack_size(WORKER_STACK)
        .build()
        .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    let mode = if pool.current_num_threads() > 1 {
        Parallelism::Rayon
    } else {
        Parallelism::Sequential
    };
    Ok((pool, mode))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Compute { a, b, out, threads } => {
            let (t1, t2) = (read_tree(&a)?, read_tree(&b)?);
            let (pool, mode) = worker_pool(threads)?;
            let result = pool.install(|| hausdorff_distance_with(&t1, &t2, mode));
            println!("{}", result.distance);
            if let Some(out) = out {
                let report = verify_mapping(&t1, &t2, &result);
                let cover = report.cover_distance.ok_or_else(|| Failure {
                    code: EXIT_MISMATCH,
                    message: "engine produced an empty mapping".into(),
                })?;
                write_file(&out, &ResultDocument::new(&result, cover).to_json())?;
            }
            Ok(())
        }
        Command::Verify { a, b, result } => {
            let (t1, t2) = (read_tree(&a)?, read_tree(&b)?);
            let text = fs::read_to_string(&result)
                .map_err(|e| Failure::usage(format!("{}: {e}", result.display())))?;
            let doc = ResultDocument::from_json(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", result.display())))?;
            let report = verify_mapping(&t1, &t2, &doc.to_result());
            let cover = report
                .cover_distance
                .map_or_else(|| "undefined".to_string(), |c| c.to_string());
            println!("valid: {}", report.valid);
            println!("cover_distance: {cover}");
            println!("distance: {}", doc.distance);
            if report.consistent && report.cover_distance == Some(doc.cover_distance) {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_MISMATCH,
                    message: "result document does not verify".into(),
                })
            }
        }
        Command::Oracle {
            a,
            b,
            max_vertices,
            node_budget,
        } => {
            let (t1, t2) = (read_tree(&a)?, read_tree(&b)?);
            let cfg = OracleConfig {
                max_vertices,
                node_budget,
            };
            let oracle = match oracle_hausdorff(&t1, &t2, &cfg) {
                Ok(d) => d,
                Err(e @ OracleError::InvalidConfig(_)) => {
                    return Err(Failure::usage(e.to_string()))
                }
                Err(e) => {
                    return Err(Failure {
                        code: EXIT_CAP,
                        message: e.to_string(),
                    })
                }
            };
            let engine = hausdorff_distance_with(&t1, &t2, Parallelism::Sequential).distance;
            println!("engine: {engine}");
            println!("oracle: {oracle}");
            if engine == oracle {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_MISMATCH,
                    message: "engine and oracle disagree".into(),
                })
            }
        }
        Command::Gen { n, seed, out } => {
            let tree = gen_random_tree(n, seed).map_err(|e| Failure::usage(e.to_string()))?;
            write_file(&out, &write_edge_list(&tree))
        }
        Command::Bench {
            sizes,
            seed,
            reps,
            threads,
        } => {
            if sizes.contains(&0) {
                return Err(Failure::usage("sizes must be positive"));
            }
            let (pool, mode) = worker_pool(threads)?;
            let rows = pool.install(|| run_bench(&sizes, seed, reps, mode));
            println!(
                "{:>6} {:>6} {:>4} {:>12} {:>8}",
                "n1", "n2", "rep", "time_ms", "distance"
            );
            for r in &rows {
                println!(
                    "{:>6} {:>6} {:>4} {:>12.3} {:>8}",
                    r.n1,
                    r.n2,
                    r.rep,
                    r.elapsed.as_secs_f64() * 1e3,
                    r.distance
                );
            }
            if let Some(slope) = log_log_slope(&rows) {
                println!("log-log slope: {slope:.2}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("treehd: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
