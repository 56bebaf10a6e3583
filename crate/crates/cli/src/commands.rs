use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use evrptw_core::heuristic::{multi_start, trace_csv, MultiStartResult};
use evrptw_core::lagrangian::{bound_csv, maximize_with, BoundParams, BoundTrace, Subproblem};
use evrptw_core::oracle::{exact_search, ExactResult, SearchCaps};
use evrptw_core::{
    evaluate_routes, parse_solution, verify_full, Instance, Solution, Summary, VerifyReport,
};
use rayon::prelude::*;

use crate::plot::{battery_svg, route_map_svg};
use crate::{load_instance, read_input, threads, CliError, CliResult, RunConfig, SchemeChoice};

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn summary_of(inst: &Instance, sol: &Solution) -> CliResult<Summary> {
    let eval = evaluate_routes(inst, &sol.routes)?;
    Ok(Summary {
        objective: eval.f_elec,
        violations: eval.violations,
    })
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub instance: Instance,
    pub result: MultiStartResult,
    pub files: Vec<PathBuf>,
}

/// Heuristic solve. Writes the instance as used, the solution, the trace of
/// the winning run, the per-run summary and the two plots.
pub fn solve(cfg: &RunConfig) -> CliResult<SolveOutcome> {
    let inst = load_instance(cfg)?;
    let params = cfg.search_params(&inst);
    let result = multi_start(&inst, inst.vehicles(), &params, cfg.starts, threads())?;
    let name = cfg.name();
    let sol = &result.best.solution;
    let summary = summary_of(&inst, sol)?;
    let report = verify_full(&inst, sol);

    let mut starts = String::from("seed,feasible,f_elec\n");
    for (seed, feasible, f) in &result.runs {
        let _ = writeln!(starts, "{seed},{feasible},{f}");
    }
    let artifacts = [
        (format!("{name}.instance"), inst.to_text()),
        (format!("{name}.sol"), sol.to_text(Some(&summary))),
        (format!("{name}.trace.csv"), trace_csv(&result.best.trace)),
        (format!("{name}.starts.csv"), starts),
        (format!("{name}.routes.svg"), route_map_svg(&inst, sol)),
        (
            format!("{name}.battery.svg"),
            battery_svg(&inst, sol, &report.traces),
        ),
    ];
    let mut files = Vec::new();
    for (file, text) in artifacts {
        let path = cfg.out.join(file);
        write_file(&path, &text)?;
        files.push(path);
    }
    Ok(SolveOutcome {
        instance: inst,
        result,
        files,
    })
}

pub fn verify(cfg: &RunConfig, solution: &Path) -> CliResult<VerifyReport> {
    let inst = load_instance(cfg)?;
    let text = read_input(solution, "solution")?;
    let (sol, _) = parse_solution(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", solution.display())))?;
    Ok(verify_full(&inst, &sol))
}

pub fn render_report(report: &VerifyReport) -> String {
    let mut out = String::new();
    if report.feasible() {
        let _ = writeln!(out, "feasible objective {}", report.objective);
    } else {
        let _ = writeln!(out, "infeasible objective {}", report.objective);
        for v in &report.violations {
            let _ = writeln!(out, "{v}");
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct BoundOutcome {
    pub trace: BoundTrace,
    /// Heuristic reference value used for the step size.
    pub upper: Option<f64>,
    pub file: PathBuf,
}

pub fn bound(cfg: &RunConfig, iters: usize) -> CliResult<BoundOutcome> {
    let inst = load_instance(cfg)?;
    let sub = Subproblem::new(&inst, cfg.guard_customers)?;
    let upper = heuristic_upper(cfg, &inst, 1)?;
    let params = BoundParams {
        max_iters: iters,
        upper,
        guard: cfg.guard_customers,
        ..BoundParams::default()
    };
    let trace = maximize_with(&sub, inst.vehicles(), &params)?;
    let file = cfg.out.join(format!("{}.bound.csv", cfg.name()));
    write_file(&file, &bound_csv(&trace))?;
    Ok(BoundOutcome { trace, upper, file })
}

fn heuristic_upper(cfg: &RunConfig, inst: &Instance, workers: usize) -> CliResult<Option<f64>> {
    let params = cfg.search_params(inst);
    let r = multi_start(inst, inst.vehicles(), &params, cfg.starts, workers)?;
    Ok(r.best.eval.feasible().then_some(r.best.eval.f_elec))
}

pub fn oracle(cfg: &RunConfig) -> CliResult<(ExactResult, Option<PathBuf>)> {
    let inst = load_instance(cfg)?;
    let caps = SearchCaps {
        max_customers: cfg.guard_customers,
        ..SearchCaps::default()
    };
    let exact = exact_search(&inst, inst.vehicles(), &caps)?;
    let file = match &exact.solution {
        Some(sol) => {
            let path = cfg.out.join(format!("{}.oracle.sol", cfg.name()));
            write_file(&path, &sol.to_text(Some(&summary_of(&inst, sol)?)))?;
            Some(path)
        }
        None => None,
    };
    Ok((exact, file))
}

/// Value of an exact column: computed, infeasible, skipped, or failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Exact {
    Value(f64, f64),
    Infeasible(f64),
    Skipped,
    Failed(String),
}

impl Exact {
    pub fn value(&self) -> Option<f64> {
        match self {
            Exact::Value(v, _) => Some(*v),
            _ => None,
        }
    }

    fn cells(&self) -> (String, String) {
        match self {
            Exact::Value(v, t) => (format!("{v:.4}"), format!("{t:.3}")),
            Exact::Infeasible(t) => ("infeasible".into(), format!("{t:.3}")),
            Exact::Skipped => ("skipped-by-guard".into(), String::new()),
            Exact::Failed(m) => (format!("error: {}", m.replace(',', ";")), String::new()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub customers: usize,
    pub k: usize,
    pub ub: Option<f64>,
    pub ub_seconds: f64,
    pub best_iter: usize,
    pub lb: Exact,
    pub oracle: Exact,
    pub error: Option<String>,
}

fn gap(ub: Option<f64>, lb: Option<f64>) -> String {
    match (ub, lb) {
        (Some(u), Some(l)) if l.abs() > 1e-12 => format!("{:.2}%", 100.0 * (u - l) / l.abs()),
        _ => String::new(),
    }
}

pub const BENCH_HEADER: &str =
    "instance,customers,k,ub,ub_seconds,best_iter,lb,lb_seconds,oracle,oracle_seconds,gap_ub_lb,gap_ub_oracle,error";

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for r in rows {
        let (lb, lb_t) = r.lb.cells();
        let (opt, opt_t) = r.oracle.cells();
        let ub =
            r.ub.map_or_else(|| "infeasible".to_string(), |u| format!("{u:.4}"));
        let _ = writeln!(
            out,
            "{},{},{},{},{:.3},{},{},{},{},{},{},{},{}",
            r.instance,
            r.customers,
            r.k,
            ub,
            r.ub_seconds,
            r.best_iter,
            lb,
            lb_t,
            opt,
            opt_t,
            gap(r.ub, r.lb.value()),
            gap(r.ub, r.oracle.value()),
            r.error.as_deref().unwrap_or("").replace(',', ";")
        );
    }
    out
}

fn bench_one(cfg: &RunConfig) -> BenchRow {
    let mut row = BenchRow {
        instance: cfg.name(),
        customers: 0,
        k: 0,
        ub: None,
        ub_seconds: 0.0,
        best_iter: 0,
        lb: Exact::Skipped,
        oracle: Exact::Skipped,
        error: None,
    };
    let inst = match load_instance(cfg) {
        Ok(i) => i,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.customers = inst.n_customers();
    row.k = inst.vehicles();
    let clock = Instant::now();
    match multi_start(&inst, row.k, &cfg.search_params(&inst), cfg.starts, 1) {
        Ok(r) => {
            row.ub = r.best.eval.feasible().then_some(r.best.eval.f_elec);
            row.best_iter = r.best.best_iter;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row.ub_seconds = clock.elapsed().as_secs_f64();
    if row.customers > cfg.guard_customers {
        return row;
    }

    let clock = Instant::now();
    row.lb = match Subproblem::new(&inst, cfg.guard_customers) {
        Ok(sub) => {
            let params = BoundParams {
                upper: row.ub,
                guard: cfg.guard_customers,
                ..BoundParams::default()
            };
            match maximize_with(&sub, row.k, &params) {
                Ok(t) => Exact::Value(t.best, clock.elapsed().as_secs_f64()),
                Err(e) => Exact::Failed(e.to_string()),
            }
        }
        Err(evrptw_core::Error::GuardExceeded { .. }) => Exact::Skipped,
        Err(e) => Exact::Failed(e.to_string()),
    };
    let clock = Instant::now();
    let caps = SearchCaps {
        max_customers: cfg.guard_customers,
        ..SearchCaps::default()
    };
    row.oracle = match exact_search(&inst, row.k, &caps) {
        Ok(r) if r.objective.is_finite() => {
            Exact::Value(r.objective, clock.elapsed().as_secs_f64())
        }
        Ok(_) => Exact::Infeasible(clock.elapsed().as_secs_f64()),
        Err(evrptw_core::Error::GuardExceeded { .. }) => Exact::Skipped,
        Err(e) => Exact::Failed(e.to_string()),
    };
    row
}

/// Instance files of a directory, sorted by name.
pub fn list_instances(dir: &Path) -> CliResult<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(CliError::Input(format!(
            "instance directory not found: {}",
            dir.display()
        )));
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}

/// One row per instance file; instances run concurrently. `cfg.instance`
/// is replaced per file.
pub fn bench(dir: &Path, cfg: &RunConfig) -> CliResult<Vec<BenchRow>> {
    let files = list_instances(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads())
        .build()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let rows: Vec<BenchRow> = pool.install(|| {
        files
            .par_iter()
            .map(|f| {
                let mut c = cfg.clone();
                c.instance = f.clone();
                bench_one(&c)
            })
            .collect()
    });
    write_file(&cfg.out.join("bench.csv"), &bench_csv(&rows))?;
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRow {
    pub scheme: String,
    pub feasible: bool,
    pub distance: f64,
    pub f_elec: f64,
    pub charge_hours: f64,
    pub discharge_hours: f64,
}

pub const SCHEMES_HEADER: &str = "scheme,feasible,distance,f_elec,charge_hours,discharge_hours";

pub fn schemes_csv(rows: &[SchemeRow]) -> String {
    let mut out = String::from(SCHEMES_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.4},{:.4},{},{}",
            r.scheme, r.feasible, r.distance, r.f_elec, r.charge_hours, r.discharge_hours
        );
    }
    out
}

fn scheme_label(choice: &SchemeChoice) -> String {
    match choice {
        SchemeChoice::Default => "default".into(),
        SchemeChoice::Named(id) => id.to_string(),
        SchemeChoice::File(p) => p.display().to_string(),
    }
}

/// Best solution per scheme, by the heuristic or (`exact`) the oracle.
pub fn schemes(cfg: &RunConfig, list: &[SchemeChoice], exact: bool) -> CliResult<Vec<SchemeRow>> {
    if list.is_empty() {
        return Err(CliError::Input("empty scheme list".into()));
    }
    let mut rows = Vec::with_capacity(list.len());
    for choice in list {
        let c = RunConfig {
            scheme: choice.clone(),
            ..cfg.clone()
        };
        let inst = load_instance(&c)?;
        let sol = if exact {
            let caps = SearchCaps {
                max_customers: c.guard_customers,
                ..SearchCaps::default()
            };
            exact_search(&inst, inst.vehicles(), &caps)?.solution
        } else {
            let r = multi_start(
                &inst,
                inst.vehicles(),
                &c.search_params(&inst),
                c.starts,
                threads(),
            )?;
            Some(r.best.solution)
        };
        let label = scheme_label(choice);
        let Some(sol) = sol else {
            rows.push(SchemeRow {
                scheme: label,
                feasible: false,
                distance: f64::NAN,
                f_elec: f64::NAN,
                charge_hours: 0.0,
                discharge_hours: 0.0,
            });
            continue;
        };
        let report = verify_full(&inst, &sol);
        let (mut charge, mut discharge) = (0, 0);
        for plan in &sol.plans {
            let (c, d) = plan.counts();
            charge += c;
            discharge += d;
        }
        let hours = inst.delta() / 60.0;
        rows.push(SchemeRow {
            scheme: label,
            feasible: report.feasible(),
            distance: sol.distance(&inst),
            f_elec: report.objective,
            charge_hours: charge as f64 * hours,
            discharge_hours: discharge as f64 * hours,
        });
    }
    Ok(rows)
}

/// Writes each benchmark file (or every file of a directory) as a
/// self-contained instance file.
pub fn regen(input: &Path, cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let files = if input.is_dir() {
        list_instances(input)?
    } else {
        vec![input.to_path_buf()]
    };
    let mut written = Vec::new();
    for f in files {
        let c = RunConfig {
            instance: f,
            ..cfg.clone()
        };
        let inst = load_instance(&c)?;
        let path = cfg.out.join(format!("{}.instance", c.name()));
        write_file(&path, &inst.to_text())?;
        written.push(path);
    }
    Ok(written)
}
