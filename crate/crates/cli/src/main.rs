use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evrptw_cli::commands::{self, bench_csv, render_report, schemes_csv};
use evrptw_cli::{CliError, CliResult, RunConfig, SchemeChoice, DEFAULT_GUARD, DEFAULT_STARTS};
use evrptw_core::SchemeId;

#[derive(Parser)]
#[command(
    name = "evrptw",
    version,
    about = "EV routing with time-of-use charging and discharging"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Heuristic solve; writes solution, trace and plots.
    Solve(Common),
    /// Checks a solution file against the full model.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Lagrangian lower bound.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        iters: usize,
    },
    /// Exact optimum of a small instance.
    Oracle(Common),
    /// Upper bound, lower bound and optimum for every instance of a directory.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dir: PathBuf,
    },
    /// Compares pricing schemes on one instance.
    Schemes {
        #[command(flatten)]
        common: Common,
        /// Comma-separated scheme names.
        #[arg(long, value_delimiter = ',', required = true)]
        schemes: Vec<String>,
        /// Use the exact oracle instead of the heuristic.
        #[arg(long)]
        exact: bool,
    },
    /// Writes benchmark files (a file or a directory) as instance files.
    Regen(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    /// A-summer, A-winter, B-summer, B-winter, C or D.
    #[arg(long, conflicts_with = "scheme_file")]
    scheme: Option<String>,
    #[arg(long)]
    scheme_file: Option<PathBuf>,
    /// Keep only the first customers of a benchmark file.
    #[arg(long)]
    customers: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    iters_vns: Option<usize>,
    #[arg(long)]
    iters_tabu: Option<usize>,
    /// Independent searches with consecutive seeds.
    #[arg(long, default_value_t = DEFAULT_STARTS)]
    starts: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard_customers: usize,
}

fn scheme_choice(name: &str) -> CliResult<SchemeChoice> {
    let path = PathBuf::from(name);
    if path.is_file() {
        return Ok(SchemeChoice::File(path));
    }
    name.parse::<SchemeId>()
        .map(SchemeChoice::Named)
        .map_err(|e| CliError::Input(e.to_string()))
}

impl Common {
    fn config(&self) -> CliResult<RunConfig> {
        let scheme = match (&self.scheme, &self.scheme_file) {
            (Some(s), _) => SchemeChoice::Named(
                s.parse::<SchemeId>()
                    .map_err(|e| CliError::Input(e.to_string()))?,
            ),
            (None, Some(f)) => SchemeChoice::File(f.clone()),
            (None, None) => SchemeChoice::Default,
        };
        if self.starts == 0 {
            return Err(CliError::Input("--starts must be at least 1".into()));
        }
        Ok(RunConfig {
            instance: self.instance.clone().unwrap_or_default(),
            k: self.k,
            scheme,
            customers: self.customers,
            iters_vns: self.iters_vns,
            iters_tabu: self.iters_tabu,
            seed: self.seed,
            starts: self.starts,
            out: self.out.clone(),
            guard_customers: self.guard_customers,
        })
    }

    fn with_instance(&self) -> CliResult<RunConfig> {
        if self.instance.is_none() {
            return Err(CliError::Input("--instance is required".into()));
        }
        self.config()
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve(c) => {
            let cfg = c.with_instance()?;
            let out = commands::solve(&cfg)?;
            let best = &out.result.best;
            println!(
                "instance {} k {} feasible {} f_elec {} best_iter {} seed {}",
                out.instance.name,
                out.instance.vehicles(),
                best.eval.feasible(),
                best.eval.f_elec,
                best.best_iter,
                out.result.runs[out.result.start].0
            );
            for f in &out.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Verify { common, solution } => {
            let report = commands::verify(&common.with_instance()?, &solution)?;
            print!("{}", render_report(&report));
            if !report.feasible() {
                return Err(CliError::Infeasible(format!(
                    "{} violation(s)",
                    report.violations.len()
                )));
            }
        }
        Command::Bound { common, iters } => {
            let out = commands::bound(&common.with_instance()?, iters)?;
            println!(
                "lower_bound {} iterations {} upper {}",
                out.trace.best,
                out.trace.iters.len(),
                out.upper
                    .map_or_else(|| "none".to_string(), |u| u.to_string())
            );
            println!("wrote {}", out.file.display());
        }
        Command::Oracle(c) => {
            let (exact, file) = commands::oracle(&c.with_instance()?)?;
            match file {
                Some(f) => {
                    println!(
                        "optimum {} routes_priced {}",
                        exact.objective, exact.counters.routes
                    );
                    println!("wrote {}", f.display());
                }
                None => println!("infeasible routes_priced {}", exact.counters.routes),
            }
        }
        Command::Bench { common, dir } => {
            let rows = commands::bench(&dir, &common.config()?)?;
            print!("{}", bench_csv(&rows));
        }
        Command::Schemes {
            common,
            schemes,
            exact,
        } => {
            let list = schemes
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| scheme_choice(s.trim()))
                .collect::<CliResult<Vec<_>>>()?;
            let rows = commands::schemes(&common.with_instance()?, &list, exact)?;
            print!("{}", schemes_csv(&rows));
        }
        Command::Regen(c) => {
            let cfg = c.with_instance()?;
            for f in commands::regen(&cfg.instance, &cfg)? {
                println!("wrote {}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
