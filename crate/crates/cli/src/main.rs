//! `gsa`: partitions of labeled graphs from the command line.
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 usage error,
//! 3 disagreement with the brute-force oracle under `--verify`.

use std::fmt::Display;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gsa::bench::{bench_scaling, BenchError, Workload};
use gsa::generate::{generate, random_graph, GraphKind};
use gsa::io::{parse_graph, write_graph};
use gsa::oracle::{oracle_minmax, oracle_partition};
use gsa::{compute_tau, first_reduction, max_partition, min_partition, minmax_partition, Extremum, LabeledGraph, MinMaxKey, MinMaxPartition, Partition, Tau};

#[derive(Parser)]
#[command(name = "gsa", version, about = "Min-, max- and min/max-partitions of labeled graphs")]
struct Cli {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural requirements on a graph file.
    Validate { file: String },
    /// Print the class (1, 2 or 3) of every node's minimum.
    Tau { file: String },
    /// Groups of nodes with equal minimum, in increasing order.
    Min {
        file: String,
        /// Compare with the brute-force oracle; exit 3 on disagreement.
        #[arg(long)]
        verify: bool,
    },
    /// Groups of nodes with equal maximum, in increasing order.
    Max {
        file: String,
        #[arg(long)]
        verify: bool,
    },
    /// Joint groups of minima (`m:`) and maxima (`M:`), in increasing order.
    Minmax {
        file: String,
        #[arg(long)]
        verify: bool,
    },
    /// Brute-force partition, for small graphs.
    Oracle {
        file: String,
        #[arg(long, value_enum, default_value_t = PartitionKind::Min)]
        kind: PartitionKind,
    },
    /// Show the first reduced graph built by the min-partition algorithm.
    Reduce { file: String },
    /// Write a generated graph to stdout.
    Gen {
        #[arg(long, default_value = "random")]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability per empty successor slot (random graphs only).
        #[arg(long)]
        density: Option<f64>,
    },
    /// Time the min-partition over growing sizes and fit the growth exponent.
    Bench {
        /// A generator kind, or `dense` for random graphs with about n²/4 edges.
        #[arg(long, default_value = "dense")]
        kind: String,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', default_values_t = [250, 500, 1000, 2000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        sigma: u32,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionKind {
    Min,
    Max,
    Minmax,
}

enum Failure {
    Input(String),
    Usage(String),
    Disagreement(String),
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disagreement(msg)) => {
            eprintln!("oracle disagreement: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_graph(file: &str) -> Result<LabeledGraph, Failure> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?
    };
    Ok(parse_graph(&text).map_err(|e| format!("{file}: {e}"))?)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate { file } => {
            let g = read_graph(file)?;
            let report = g.validate();
            if cli.json {
                let violations: Vec<String> = report.violations.iter().map(|v| v.message.clone()).collect();
                println!("{}", json!({ "ok": report.is_ok(), "violations": violations }));
            } else if report.is_ok() {
                println!("ok: {} nodes, {} edges, sigma {}", g.n(), g.edge_count(), g.sigma());
            } else {
                println!("{report}");
            }
            if report.is_ok() {
                Ok(())
            } else {
                Err(Failure::Input(format!("{file} is not a valid graph")))
            }
        }
        Command::Tau { file } => {
            let g = read_graph(file)?;
            let report = g.validate();
            if !report.is_ok() {
                return Err(Failure::Input(report.to_string()));
            }
            let tau: Vec<u8> = compute_tau(&g).iter().map(Tau::value).collect();
            if cli.json {
                println!("{}", json!({ "tau": tau }));
            } else {
                for (u, t) in tau.iter().enumerate() {
                    println!("{u}\t{t}");
                }
            }
            Ok(())
        }
        Command::Min { file, verify } => {
            let g = read_graph(file)?;
            let p = min_partition(&g)?;
            if *verify && p != oracle_partition(&g, Extremum::Min)? {
                return Err(Failure::Disagreement("min-partition".into()));
            }
            print_partition(&p, cli.json);
            Ok(())
        }
        Command::Max { file, verify } => {
            let g = read_graph(file)?;
            let p = max_partition(&g)?;
            if *verify && p != oracle_partition(&g, Extremum::Max)? {
                return Err(Failure::Disagreement("max-partition".into()));
            }
            print_partition(&p, cli.json);
            Ok(())
        }
        Command::Minmax { file, verify } => {
            let g = read_graph(file)?;
            let p = minmax_partition(&g)?;
            if *verify && p != oracle_minmax(&g)? {
                return Err(Failure::Disagreement("min/max-partition".into()));
            }
            print_minmax(&p, cli.json);
            Ok(())
        }
        Command::Oracle { file, kind } => {
            let g = read_graph(file)?;
            match kind {
                PartitionKind::Min => print_partition(&oracle_partition(&g, Extremum::Min)?, cli.json),
                PartitionKind::Max => print_partition(&oracle_partition(&g, Extremum::Max)?, cli.json),
                PartitionKind::Minmax => print_minmax(&oracle_minmax(&g)?, cli.json),
            }
            Ok(())
        }
        Command::Reduce { file } => {
            let g = read_graph(file)?;
            print_reduction(&g, cli.json)
        }
        Command::Gen { kind, n, sigma, seed, density } => {
            let kind: GraphKind = kind.parse()?;
            let g = match (kind, density) {
                (GraphKind::Random, Some(d)) => random_graph(*n, *sigma, *d, *seed)?,
                (_, Some(_)) => return Err(Failure::Usage("--density applies to random graphs only".into())),
                _ => generate(kind, *n, *sigma, *seed)?,
            };
            print!("{}", write_graph(&g));
            Ok(())
        }
        Command::Bench { kind, sizes, sigma, repeats, seed } => {
            let workload = if kind == "dense" {
                Workload::DenseRandom
            } else {
                Workload::Kind { kind: kind.parse::<GraphKind>()?, sigma: *sigma }
            };
            let report = bench_scaling(workload, sizes, *repeats, *seed).map_err(|e| match e {
                BenchError::TooFewSizes(_) | BenchError::NotIncreasing | BenchError::NoRepeats => Failure::Usage(e.to_string()),
                other => Failure::Input(other.to_string()),
            })?;
            if cli.json {
                let records: Vec<Value> = report
                    .records
                    .iter()
                    .map(|r| json!({ "n": r.n, "m": r.m, "seed": r.seed, "nanos": r.nanos as u64, "max_edge_work": r.max_edge_work, "depth": r.depth }))
                    .collect();
                println!("{}", json!({ "records": records, "slope": report.slope }));
            } else {
                println!("n,m,seed,nanos,max_edge_work,depth");
                for r in &report.records {
                    println!("{},{},{},{},{},{}", r.n, r.m, r.seed, r.nanos, r.max_edge_work, r.depth);
                }
                println!("# slope {:.3}", report.slope);
            }
            Ok(())
        }
    }
}

fn print_partition(p: &Partition, json: bool) {
    if json {
        println!("{}", json!({ "groups": p.groups() }));
    } else {
        for group in p.groups() {
            println!("{}", join(group.iter()));
        }
    }
}

fn key_text(k: &MinMaxKey) -> String {
    match k.kind {
        Extremum::Min => format!("m:{}", k.node),
        Extremum::Max => format!("M:{}", k.node),
    }
}

fn print_minmax(p: &MinMaxPartition, json: bool) {
    if json {
        let groups: Vec<Vec<String>> = p.groups().iter().map(|g| g.iter().map(key_text).collect()).collect();
        println!("{}", json!({ "groups": groups }));
    } else {
        for group in p.groups() {
            println!("{}", join(group.iter().map(key_text)));
        }
    }
}

fn print_reduction(g: &LabeledGraph, json: bool) -> Result<(), Failure> {
    let Some((direction, red)) = first_reduction(g)? else {
        if json {
            println!("{}", json!({ "reduced": null }));
        } else {
            println!("no reduction: one class is empty");
        }
        return Ok(());
    };
    let letters: Vec<Value> = red.letter_key.iter().map(|(gamma, t)| json!({ "gamma": gamma, "t": t.value() })).collect();
    let edges: Vec<[u32; 2]> = red.graph.edges().map(|(u, v)| [u, v]).collect();
    if json {
        println!(
            "{}",
            json!({
                "direction": format!("{direction:?}"),
                "nodes": red.to_parent,
                "labels": red.graph.labels(),
                "letters": letters,
                "edges": edges,
            })
        );
    } else {
        println!("direction {direction:?}");
        println!("# reduced node, parent node, letter");
        for (i, &p) in red.to_parent.iter().enumerate() {
            println!("{i}\t{p}\t{}", red.graph.label(i as u32));
        }
        println!("# letter, prefix, stop class");
        for (c, (gamma, t)) in red.letter_key.iter().enumerate() {
            println!("{c}\t{}\t{}", join(gamma.iter()), t.value());
        }
        println!("# edges");
        for [u, v] in edges {
            println!("{u}\t{v}");
        }
    }
    Ok(())
}

fn join<T: Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}
