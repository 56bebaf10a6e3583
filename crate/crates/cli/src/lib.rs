//! Library side of the `evrptw` tool: configuration, instance loading, the
//! commands and the SVG plots. `main.rs` only parses arguments.

pub mod commands;
pub mod plot;
pub mod roster;

use std::fmt;
use std::path::{Path, PathBuf};

use evrptw_core::heuristic::SearchParams;
use evrptw_core::instance::RawInstance;
use evrptw_core::regen::{regenerate, RegenConfig};
use evrptw_core::{parse_prices, Error, Instance, ParseError, PriceSchedule, SchemeId};

/// Independent searches per solve unless overridden.
pub const DEFAULT_STARTS: usize = 16;
/// Largest instance the oracle and the bound accept unless overridden.
pub const DEFAULT_GUARD: usize = 7;

#[derive(Debug)]
pub enum CliError {
    /// Missing or malformed input, or bad arguments.
    Input(String),
    /// An exact method refused the instance size.
    Guard(String),
    /// A verified solution violates constraints.
    Infeasible(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 1,
            CliError::Guard(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Guard(m) | CliError::Infeasible(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeChoice {
    /// The instance's own prices, or A-summer for benchmark files.
    Default,
    Named(SchemeId),
    File(PathBuf),
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub instance: PathBuf,
    /// Fleet size; defaults to the instance file, then the roster, then 1.
    pub k: Option<usize>,
    pub scheme: SchemeChoice,
    /// Keep only the first customers of a benchmark file.
    pub customers: Option<usize>,
    pub iters_vns: Option<usize>,
    pub iters_tabu: Option<usize>,
    pub seed: u64,
    pub starts: usize,
    pub out: PathBuf,
    pub guard_customers: usize,
}

impl RunConfig {
    pub fn new(instance: impl Into<PathBuf>) -> Self {
        Self {
            instance: instance.into(),
            k: None,
            scheme: SchemeChoice::Default,
            customers: None,
            iters_vns: None,
            iters_tabu: None,
            seed: 0,
            starts: DEFAULT_STARTS,
            out: PathBuf::from("out"),
            guard_customers: DEFAULT_GUARD,
        }
    }

    pub fn name(&self) -> String {
        self.instance
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "instance".into())
    }

    pub fn search_params(&self, inst: &Instance) -> SearchParams {
        let mut p =
            SearchParams::for_instance(inst.n_customers(), inst.vehicles()).with_seed(self.seed);
        if let Some(v) = self.iters_vns {
            p.vns_iters = v;
        }
        if let Some(t) = self.iters_tabu {
            p.tabu_iters = t;
        }
        p
    }
}

pub fn resolve_prices(choice: &SchemeChoice) -> CliResult<Option<PriceSchedule>> {
    Ok(match choice {
        SchemeChoice::Default => None,
        SchemeChoice::Named(id) => Some(PriceSchedule::scheme(*id)),
        SchemeChoice::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("scheme file {}: {e}", path.display())))?;
            Some(
                parse_prices(&text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
            )
        }
    })
}

/// Loads an instance. Files with a price section are used as they are;
/// benchmark files without one are regenerated with the experiment's fleet
/// and time-window blocks.
pub fn load_instance(cfg: &RunConfig) -> CliResult<Instance> {
    let path = &cfg.instance;
    let text = read_input(path, "instance")?;
    let located = |e: ParseError| CliError::Input(format!("{}: {e}", path.display()));
    let raw = RawInstance::parse(&text).map_err(located)?;
    let prices = resolve_prices(&cfg.scheme)?;
    let name = cfg.name();
    if raw.prices.is_some() {
        let mut inst = evrptw_core::parse_instance(&text)
            .map_err(located)?
            .with_name(name);
        if let Some(p) = prices {
            inst = inst.with_prices(p).map_err(located)?;
        }
        if let Some(k) = cfg.k {
            inst = inst.with_vehicles(check_k(k)?);
        }
        return Ok(inst);
    }
    let k = match cfg.k {
        Some(k) => check_k(k)?,
        None => roster::find(&name).map_or(1, |e| e.vehicles),
    };
    let config = RegenConfig {
        vehicles: k,
        prices: prices.unwrap_or_else(|| PriceSchedule::scheme(SchemeId::ASummer)),
        customers: cfg.customers,
        ..RegenConfig::default()
    };
    regenerate(&raw, &name, &config).map_err(located)
}

fn check_k(k: usize) -> CliResult<usize> {
    if k == 0 {
        return Err(CliError::Input("--k must be at least 1".into()));
    }
    Ok(k)
}

pub fn read_input(path: &Path, what: &str) -> CliResult<String> {
    if !path.exists() {
        return Err(CliError::Input(format!(
            "{what} not found: {}",
            path.display()
        )));
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Worker count: `EVRPTW_THREADS` if set to a positive integer, else the
/// available parallelism.
pub fn threads() -> usize {
    std::env::var("EVRPTW_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
