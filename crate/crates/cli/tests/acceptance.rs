//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p evrptw-cli --test acceptance`. Criterion 4 is a
//! known failure (see the README); the suite fails if any other criterion
//! fails, or if criterion 4 starts passing without the list being updated.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use evrptw_cli::{load_instance, roster, threads, RunConfig, SchemeChoice};
use evrptw_core::heuristic::{accept, multi_start, vns_ts, SearchParams, Temperature, FROZEN};
use evrptw_core::lagrangian::{maximize_bound, BoundParams};
use evrptw_core::oracle::{exact_search, schedule_bruteforce, ExactResult, SearchCaps};
use evrptw_core::schedule::price;
use evrptw_core::synth::random_case;
use evrptw_core::{
    compute_metrics, evaluate_routes, verify_full, Action, CaseTag, Instance, SchemeId,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail, with the reason.
const KNOWN_FAILURES: [(usize, &str); 1] = [(
    4,
    "regenerated time windows differ from the unpublished originals; see the window-mapping decision",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn five(scheme: SchemeChoice) -> Vec<(roster::Entry, Instance)> {
    roster::FIVE
        .iter()
        .map(|e| {
            let mut cfg = RunConfig::new(e.path());
            cfg.scheme = scheme.clone();
            (*e, load_instance(&cfg).expect("roster instance loads"))
        })
        .collect()
}

fn optimum(inst: &Instance) -> ExactResult {
    exact_search(inst, inst.vehicles(), &SearchCaps::default()).expect("oracle runs")
}

fn rel_gap(value: f64, reference: f64) -> f64 {
    (value - reference) / reference.abs().max(1e-9)
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn scheduler_exactness() -> Outcome {
    let start = Instant::now();
    let cases = [
        (CaseTag::ZeroStation, 101),
        (CaseTag::OneStation, 102),
        (CaseTag::TwoStationRecharge, 103),
        (CaseTag::TwoStationDischarge, 104),
    ];
    let per_case = 500;
    let mut mismatches = 0;
    let mut priced = 0;
    for (tag, seed) in cases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..per_case {
            let (inst, route) = random_case(&mut rng, tag);
            let metrics = compute_metrics(&inst, &route);
            let dp = price(&inst, &route).expect("scheduler runs");
            let bf = schedule_bruteforce(&inst, &route, &metrics, 6)
                .expect("windows within six periods");
            match (dp, bf) {
                (Some(a), Some(b)) => {
                    priced += 1;
                    if (a.f_elec - b.f_elec).abs() > 1e-9 * b.f_elec.abs().max(1.0) {
                        mismatches += 1;
                    }
                }
                (None, None) => {}
                _ => mismatches += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed <= Duration::from_secs(120),
        format!(
            "{} routes ({} priced), {mismatches} mismatches, {:.1}s",
            cases.len() * per_case,
            priced,
            elapsed.as_secs_f64()
        ),
    )
}

fn verifier_consistency(suite: &[(roster::Entry, Instance)], exact: &[ExactResult]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for ((e, inst), opt) in suite.iter().zip(exact) {
        let Some(sol) = &opt.solution else { continue };
        checked += 1;
        let report = verify_full(inst, sol);
        let eval = evaluate_routes(inst, &sol.routes).expect("evaluation runs");
        let agree = (report.objective - eval.f_elec).abs() <= 1e-6
            && (report.objective - opt.objective).abs() <= 1e-6;
        if !report.feasible() || !agree {
            bad.push(e.name);
        }
    }
    outcome(
        bad.is_empty() && checked > 0,
        format!("{checked} oracle solutions verified, inconsistent: {bad:?}"),
    )
}

fn heuristic_gaps(suite: &[(roster::Entry, Instance)], exact: &[ExactResult]) -> Outcome {
    let start = Instant::now();
    let mut gaps = Vec::new();
    let mut problems = Vec::new();
    let mut worst = ("", 0.0);
    for ((e, inst), opt) in suite.iter().zip(exact) {
        let params = SearchParams::for_instance(inst.n_customers(), inst.vehicles());
        let run = multi_start(
            inst,
            inst.vehicles(),
            &params,
            evrptw_cli::DEFAULT_STARTS,
            threads(),
        )
        .expect("search runs");
        let best = &run.best;
        let feasible = best.eval.feasible() && verify_full(inst, &best.solution).feasible();
        match (opt.solution.is_some(), feasible) {
            (true, true) => {
                let gap = rel_gap(best.eval.f_elec, opt.objective);
                if gap < -1e-9 {
                    problems.push(format!("{} below optimum", e.name));
                }
                if gap > worst.1 {
                    worst = (e.name, gap);
                }
                gaps.push(gap);
            }
            (true, false) => problems.push(format!("{} no feasible UB", e.name)),
            (false, true) => {
                problems.push(format!("{} feasible but oracle says infeasible", e.name))
            }
            (false, false) => {}
        }
    }
    let elapsed = start.elapsed();
    let max = gaps.iter().cloned().fold(0.0, f64::max);
    let med = median(&mut gaps.clone());
    outcome(
        problems.is_empty() && med <= 0.02 && max <= 0.05 && elapsed <= Duration::from_secs(600),
        format!(
            "{} feasible, median gap {:.2}%, max {:.2}% ({}), {:.1}s, issues {problems:?}",
            gaps.len(),
            100.0 * med,
            100.0 * max,
            worst.0,
            elapsed.as_secs_f64()
        ),
    )
}

fn anchored_values(suite: &[(roster::Entry, Instance)], exact: &[ExactResult]) -> Outcome {
    let anchors = [("C101-5", 82.61), ("RC208-5", 69.55)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, target) in anchors {
        let i = suite
            .iter()
            .position(|(e, _)| e.name == name)
            .expect("anchor in roster");
        let value = exact[i].objective;
        let dev = rel_gap(value, target);
        pass &= exact[i].solution.is_some() && dev.abs() <= 0.15;
        parts.push(format!(
            "{name} {value:.2} vs {target} ({:+.1}%)",
            100.0 * dev
        ));
    }
    outcome(pass, parts.join(", "))
}

fn lagrangian_validity(suite: &[(roster::Entry, Instance)], exact: &[ExactResult]) -> Outcome {
    let mut violations = 0;
    let mut close = 0;
    let mut iterates = 0;
    for ((_, inst), opt) in suite.iter().zip(exact) {
        let params = BoundParams {
            max_iters: 200,
            ..BoundParams::default()
        };
        let trace = maximize_bound(inst, inst.vehicles(), &params).expect("bound runs");
        iterates += trace.iters.len();
        if opt.solution.is_none() {
            continue;
        }
        violations += trace
            .iters
            .iter()
            .filter(|it| it.z_lr > opt.objective + 1e-6)
            .count();
        if rel_gap(opt.objective, trace.best).abs() <= 0.05 && trace.best <= opt.objective + 1e-6 {
            close += 1;
        }
    }
    outcome(
        violations == 0 && close >= 8,
        format!("{iterates} iterates, {violations} above the optimum, {close} of 12 within 5%"),
    )
}

fn annealing_calibration() -> Outcome {
    let (reference, kappa) = (82.61, 0.5);
    let temp = Temperature::new(reference, kappa, 30);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 10_000;
    let accepted = (0..trials)
        .filter(|_| {
            accept(
                reference,
                reference + kappa * reference,
                temp.initial,
                &mut rng,
            )
        })
        .count();
    let rate = accepted as f64 / trials as f64;

    let entry = roster::find("C101-5").unwrap();
    let inst = load_instance(&RunConfig::new(entry.path())).unwrap();
    let mut params = SearchParams::for_instance(inst.n_customers(), inst.vehicles()).with_seed(1);
    params.vns_iters = 30;
    params.early_stop = params.vns_iters;
    let run = vns_ts(&inst, inst.vehicles(), &params).expect("search runs");
    let tail = (params.vns_iters as f64 * 0.2).ceil() as usize;
    let rows = run.trace.len();
    let frozen = rows == params.vns_iters
        && run.trace[rows - tail..]
            .iter()
            .all(|r| r.temperature < FROZEN);
    outcome(
        (rate - 0.5).abs() <= 0.02 && frozen,
        format!(
            "acceptance {rate:.4} over {trials}, last {tail} of {rows} trace rows frozen: {frozen}"
        ),
    )
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().expect("temp dir");
    let entry = roster::find("RC108-5").unwrap();
    let inst = entry.path().display().to_string();
    let mut files = Vec::new();
    for (run, threads) in [("a", "1"), ("b", "4")] {
        let out = tmp.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_evrptw"))
            .args(["solve", "--instance", &inst, "--seed", "7", "--out"])
            .arg(&out)
            .env("EVRPTW_THREADS", threads)
            .output()
            .expect("binary runs")
            .status;
        if !status.success() {
            return outcome(false, format!("solve exited with {status}"));
        }
        files.push(out);
    }
    let same = |file: &str| read(&files[0].join(file)) == read(&files[1].join(file));
    let sol = same("rc108C5.sol");
    let trace = same("rc108C5.trace.csv");
    outcome(
        sol && trace,
        format!("solution identical: {sol}, trace identical: {trace}"),
    )
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_default()
}

fn scheme_properties() -> Outcome {
    let a = five(SchemeChoice::Named(SchemeId::ASummer));
    let b = five(SchemeChoice::Named(SchemeId::BSummer));
    let d = five(SchemeChoice::Named(SchemeId::D));
    let mut order_breaks = Vec::new();
    let mut discharges = 0;
    let mut compared = 0;
    for i in 0..a.len() {
        let (oa, ob, od) = (optimum(&a[i].1), optimum(&b[i].1), optimum(&d[i].1));
        let feasible = [
            oa.solution.is_some(),
            ob.solution.is_some(),
            od.solution.is_some(),
        ];
        if feasible.iter().any(|&f| f != feasible[0]) {
            order_breaks.push(a[i].0.name);
            continue;
        }
        let Some(sol) = &od.solution else { continue };
        compared += 1;
        discharges += sol
            .plans
            .iter()
            .flat_map(|p| p.visits.iter().flatten())
            .filter(|(_, act)| *act == Action::Discharge)
            .count();
        if ob.objective > oa.objective + 1e-6 || oa.objective > od.objective + 1e-6 {
            order_breaks.push(a[i].0.name);
        }
    }
    outcome(
        order_breaks.is_empty() && discharges == 0 && compared > 0,
        format!("{compared} instances B <= A <= D checked, breaks {order_breaks:?}, scheme D discharges {discharges}"),
    )
}

fn scale() -> Outcome {
    let path = roster::data_dir().join("100/c101_21.txt");
    let mut cfg = RunConfig::new(path);
    cfg.customers = Some(30);
    cfg.k = Some(4);
    let inst = load_instance(&cfg).expect("large instance loads");
    let params = cfg.search_params(&inst);
    let start = Instant::now();
    let run = vns_ts(&inst, inst.vehicles(), &params).expect("search runs");
    let elapsed = start.elapsed();
    outcome(
        elapsed <= Duration::from_secs(600),
        format!(
            "{} customers, K={}, {:.1}s, feasible {}, f_elec {:.2}",
            inst.n_customers(),
            inst.vehicles(),
            elapsed.as_secs_f64(),
            run.eval.feasible(),
            run.eval.f_elec
        ),
    )
}

fn main() {
    let suite = five(SchemeChoice::Default);
    let exact: Vec<ExactResult> = suite.iter().map(|(_, inst)| optimum(inst)).collect();

    let results: Vec<(usize, Outcome)> = vec![
        (1, scheduler_exactness()),
        (2, verifier_consistency(&suite, &exact)),
        (3, heuristic_gaps(&suite, &exact)),
        (4, anchored_values(&suite, &exact)),
        (5, lagrangian_validity(&suite, &exact)),
        (6, annealing_calibration()),
        (7, determinism()),
        (8, scheme_properties()),
        (9, scale()),
    ];

    let mut unexpected = 0;
    for (n, o) in &results {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| k == n);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = match (known, o.pass) {
            (Some((_, why)), false) => format!(" [known: {why}]"),
            (Some(_), true) => {
                unexpected += 1;
                " [listed as known failure but passed]".to_string()
            }
            (None, false) => {
                unexpected += 1;
                String::new()
            }
            (None, true) => String::new(),
        };
        println!("criterion {n}: {verdict} {}{note}", o.detail);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected result(s)");
        std::process::exit(1);
    }
}
