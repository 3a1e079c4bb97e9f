//! Command-line front end. Exit codes: 0 success, 1 validation or
//! runtime failure, 2 usage error. All output is deterministic for fixed
//! inputs and seeds; `-` stands for stdin/stdout.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use carpkit::approx::{lower_bound, solve};
use carpkit::cost::{CostFunction, CostMode};
use carpkit::exact::{solve_exact, DEFAULT_ORACLE_LIMIT};
use carpkit::format::{parse_instance, parse_solution, write_instance, write_solution};
use carpkit::generate::generate_random;
use carpkit::instance::Instance;
use carpkit::reduction::{metric_closure, reduced_instance};
use carpkit::tsp::fig1_instance;
use carpkit::validate::validate;

#[derive(Parser)]
#[command(
    name = "carpkit",
    version,
    about = "Capacitated arc routing: reduce, solve, verify, and generate instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReduceMode {
    /// Shortest-path costs on zero-demand edges only.
    Down,
    /// Shortest-path costs on every edge (triangle inequality holds).
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and report costs, bounds, and ratios.
    Solve {
        /// Instance file (`-` for stdin).
        input: String,
        /// Write the solution to this file (`-` for stdout).
        #[arg(short, long)]
        output: Option<String>,
        /// Required-edge cap for the embedded exact oracle.
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        limit: usize,
    },
    /// Rewrite the instance under a modified cost table.
    Reduce {
        input: String,
        #[arg(long, value_enum)]
        mode: ReduceMode,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Check a solution and print its costs under all three cost tables.
    Verify { instance: String, solution: String },
    /// Compute the exact optimum by brute force (small instances only).
    Exact {
        input: String,
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        limit: usize,
        /// Write the witness solution to this file.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Print a valid lower bound on the optimum.
    Bound { input: String },
    /// Generate a seeded random instance.
    Gen {
        #[arg(short, long)]
        output: Option<String>,
        /// Generator seed; falls back to the CARPKIT_SEED variable.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = 20)]
        max_cost: u64,
        #[arg(long, default_value_t = 3)]
        max_demand: u64,
        #[arg(long, default_value_t = 5)]
        capacity: u64,
    },
    /// Emit the built-in four-city counterexample family as an instance.
    Fig1 {
        /// Cost of the three expensive edges.
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 8)]
        capacity: u64,
        #[arg(short, long)]
        output: Option<String>,
    },
}

enum CliError {
    Failure(String),
    Usage(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn fail(context: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Failure(format!("{context}: {err}"))
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| fail(path, e))
    }
}

fn write_output(path: &str, text: &str) -> Result<(), CliError> {
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| fail(path, e))
    }
}

fn load_instance(path: &str) -> Result<Instance, CliError> {
    let text = read_input(path)?;
    parse_instance(&text).map_err(|e| fail(path, e))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Solve {
            input,
            output,
            limit,
        } => {
            let inst = load_instance(&input)?;
            let (solution, report) = solve(&inst, limit).map_err(|e| fail("solve", e))?;
            print!("{}", report.to_text());
            if report.matching_heuristic {
                eprintln!("warning: matching heuristic engaged; the factor bound is unverified");
            }
            if let Some(path) = output {
                write_output(&path, &write_solution(&solution, &inst))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce {
            input,
            mode,
            output,
        } => {
            let inst = load_instance(&input)?;
            let artifacts = metric_closure(&inst).map_err(|e| fail("reduce", e))?;
            let mode = match mode {
                ReduceMode::Down => CostMode::DownTriangle,
                ReduceMode::Full => CostMode::FullTriangle,
            };
            let reduced = reduced_instance(&inst, &artifacts, mode);
            write_output(output.as_deref().unwrap_or("-"), &write_instance(&reduced))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { instance, solution } => {
            let inst = load_instance(&instance)?;
            let text = read_input(&solution)?;
            let sol = parse_solution(&text, &inst).map_err(|e| fail(&solution, e))?;
            let verdict = validate(&inst, &sol);
            let artifacts = metric_closure(&inst).map_err(|e| fail("verify", e))?;
            println!(
                "verdict {}",
                if verdict.is_empty() { "ok" } else { "invalid" }
            );
            println!(
                "cost_original {}",
                CostFunction::original(&inst).solution_cost(&sol)
            );
            println!("cost_down {}", artifacts.down_costs().solution_cost(&sol));
            println!("cost_full {}", artifacts.full_costs().solution_cost(&sol));
            for violation in &verdict {
                println!("violation {violation}");
            }
            if verdict.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Exact {
            input,
            limit,
            output,
        } => {
            let inst = load_instance(&input)?;
            let cf = CostFunction::original(&inst);
            let result = solve_exact(&inst, &cf, limit).map_err(|e| fail("exact", e))?;
            println!("optimum {}", result.optimum);
            println!("explored {}", result.explored);
            println!("routes {}", result.witness.routes.len());
            if let Some(path) = output {
                write_output(&path, &write_solution(&result.witness, &inst))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { input } => {
            let inst = load_instance(&input)?;
            let artifacts = metric_closure(&inst).map_err(|e| fail("bound", e))?;
            let metric = reduced_instance(&inst, &artifacts, CostMode::FullTriangle);
            let metric_bound = lower_bound(&metric, &artifacts);
            println!("metric_lower_bound {metric_bound}");
            println!("saving {}", artifacts.saving());
            println!("lower_bound {}", metric_bound + artifacts.saving());
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen {
            output,
            seed,
            vertices,
            edge_prob,
            max_cost,
            max_demand,
            capacity,
        } => {
            let seed = match seed.or_else(|| {
                std::env::var("CARPKIT_SEED")
                    .ok()
                    .and_then(|s| s.parse().ok())
            }) {
                Some(s) => s,
                None => {
                    return Err(CliError::Usage(
                        "gen needs --seed or the CARPKIT_SEED variable".into(),
                    ))
                }
            };
            let inst = generate_random(seed, vertices, edge_prob, max_cost, max_demand, capacity)
                .map_err(|e| fail("gen", e))?;
            write_output(output.as_deref().unwrap_or("-"), &write_instance(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fig1 {
            ell,
            capacity,
            output,
        } => {
            if ell == 0 {
                return Err(CliError::Usage("--ell must be positive".into()));
            }
            let inst = fig1_instance(ell, capacity).map_err(|e| fail("fig1", e))?;
            write_output(output.as_deref().unwrap_or("-"), &write_instance(&inst))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
    }
}
