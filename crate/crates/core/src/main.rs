use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use idcopt::harness::{
    eval_count_probe, expected_requests, load_config, oracle_bruteforce, render_grid, render_svg,
    run_experiment, Algorithm, ExperimentConfig, ObjectiveSpec,
};
use idcopt::{Error, Genome, Symmetry};

#[derive(Parser)]
#[command(
    name = "idcopt",
    version,
    about = "Binary metaheuristics for IDC sensor cell patterns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm (default bpso) over the configured seeds.
    Run(ExperimentArgs),
    /// Run several algorithms (default: all seven) and print the comparison table.
    Compare(ExperimentArgs),
    /// Exhaustively find the optimum of a small objective (D <= 20).
    Oracle {
        #[arg(long, default_value = "onemax:8")]
        objective: ObjectiveSpec,
        #[arg(long)]
        symmetry: Option<Symmetry>,
    },
    /// Draw a genome as a grid of cells.
    Render {
        /// '0'/'1' string, or a path to a .genome file.
        #[arg(long)]
        genome: String,
        #[arg(long, default_value = "mirror")]
        symmetry: Symmetry,
        /// Also write an SVG drawing to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Count cost requests at several population sizes with a constant objective.
    Probe {
        #[arg(long, default_value = "bpso")]
        algo: Algorithm,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        max_iter: usize,
        #[arg(long, default_value_t = 96)]
        dim: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Act as an external evaluator: read genome lines on stdin, write costs.
    Serve {
        #[arg(long, default_value = "onemax:96")]
        objective: ObjectiveSpec,
        #[arg(long)]
        symmetry: Option<Symmetry>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algorithm name(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<Algorithm>,
    /// surrogate[:idc1500|idc5000|reduced], onemax[:D], trap[:D[:k]] or external:<cmd>
    #[arg(long)]
    objective: Option<ObjectiveSpec>,
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    /// Evaluation budget per run; defaults to each algorithm's iteration-cap budget.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    symmetry: Option<Symmetry>,
}

impl ExperimentArgs {
    fn into_config(self, default_algorithms: &[Algorithm]) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => ExperimentConfig {
                algorithms: default_algorithms.to_vec(),
                ..ExperimentConfig::default()
            },
        };
        if !self.algo.is_empty() {
            cfg.algorithms = self.algo;
        }
        if let Some(o) = self.objective {
            cfg.objective = o;
        }
        if let Some(s) = self.symmetry {
            if !matches!(cfg.objective, ObjectiveSpec::Surrogate { .. }) {
                return Err(Error::config(
                    "--symmetry only applies to surrogate objectives",
                ));
            }
            cfg.objective = cfg.objective.with_symmetry(s);
        }
        if let Some(s) = self.seed {
            cfg.seeds = vec![s];
        }
        if !self.seeds.is_empty() {
            cfg.seeds = self.seeds;
        }
        if self.budget.is_some() {
            cfg.budget = self.budget;
        }
        if let Some(out) = self.out {
            cfg.out = out;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::GenomeText(_) | Error::Encoding { .. } => {
                Failure::Config(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn experiment(args: ExperimentArgs, defaults: &[Algorithm]) -> Result<(), Failure> {
    let cfg = args.into_config(defaults)?;
    let campaign = run_experiment(&cfg)?;
    print!("{}", campaign.report.to_text());
    println!("outputs written to {}", cfg.out.display());
    let failed: Vec<String> = campaign
        .failures()
        .map(|c| {
            format!(
                "{} seed {}: {}",
                c.algorithm,
                c.seed,
                c.outcome
                    .as_ref()
                    .err()
                    .map(ToString::to_string)
                    .unwrap_or_default()
            )
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Runtime(format!(
            "{} run(s) failed:\n  {}",
            failed.len(),
            failed.join("\n  ")
        )))
    }
}

fn surrogate_symmetry(spec: ObjectiveSpec, symmetry: Option<Symmetry>) -> ObjectiveSpec {
    match symmetry {
        Some(s) => spec.with_symmetry(s),
        None => spec,
    }
}

fn read_genome(arg: &str) -> Result<Genome, Error> {
    let path = PathBuf::from(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(&path)?
    } else {
        arg.to_string()
    };
    text.trim().parse()
}

fn serve(spec: ObjectiveSpec) -> Result<(), Failure> {
    let objective = spec.build()?;
    let stdin = io::stdin();
    let mut stdout = io::stdout().lock();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Failure::Runtime(e.to_string()))?;
        let dim = objective.dim();
        let parsed = line.parse::<Genome>().and_then(|g| {
            if g.len() == dim {
                objective.cost(&g)
            } else {
                Err(Error::Encoding {
                    expected: dim,
                    actual: g.len(),
                })
            }
        });
        let reply = match parsed {
            Ok(c) => format!("{c}"),
            Err(e) => format!("error: {e}"),
        };
        writeln!(stdout, "{reply}")
            .and_then(|_| stdout.flush())
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => experiment(args, &[Algorithm::Bpso]),
        Command::Compare(args) => experiment(args, &Algorithm::ALL),
        Command::Oracle {
            objective,
            symmetry,
        } => {
            let spec = surrogate_symmetry(objective, symmetry);
            let obj = spec.build()?;
            let (genome, cost) = oracle_bruteforce(obj.as_ref())?;
            println!("objective: {spec}");
            println!("genome: {genome}");
            println!("cost: {cost}");
            if let ObjectiveSpec::Surrogate { symmetry, .. } = &spec {
                print!("{}", render_grid(&genome, *symmetry)?);
            }
            Ok(())
        }
        Command::Render {
            genome,
            symmetry,
            svg,
        } => {
            let genome = read_genome(&genome)?;
            print!("{}", render_grid(&genome, symmetry)?);
            if let Some(path) = svg {
                std::fs::write(&path, render_svg(&genome, symmetry)?).map_err(|e| {
                    Failure::Runtime(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            Ok(())
        }
        Command::Probe {
            algo,
            n,
            max_iter,
            dim,
            seed,
        } => {
            let rows = eval_count_probe(algo, &n, max_iter, dim, seed)?;
            println!("{algo}, max_iter = {max_iter}");
            println!(
                "{:>6} {:>10} {:>10} {:>8}",
                "N", "requests", "expected", "ratio"
            );
            let base = rows.first().map_or(1, |r| r.requests.max(1));
            for r in rows {
                println!(
                    "{:>6} {:>10} {:>10} {:>8.3}",
                    r.n,
                    r.requests,
                    expected_requests(algo, r.n, max_iter, 20),
                    r.requests as f64 / base as f64
                );
            }
            Ok(())
        }
        Command::Serve {
            objective,
            symmetry,
        } => serve(surrogate_symmetry(objective, symmetry)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
