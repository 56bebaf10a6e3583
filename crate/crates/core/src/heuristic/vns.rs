use std::fmt::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::eval::{priced_solution, SolutionEval};
use crate::instance::Instance;
use crate::route::Violations;
use crate::solution::Solution;

use super::anneal::{accept, Temperature};
use super::cost::{CostCache, Scored};
use super::params::SearchParams;
use super::shake::cyclic_exchange;
use super::sweep::sweep_routes;
use super::tabu::{tabu_search, TabuList};

/// One VNS iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    /// Cost of the local optimum found in this iteration.
    pub f_gen: f64,
    pub f_elec: f64,
    pub violations: Violations,
    pub feasible: bool,
    pub accepted: bool,
    pub temperature: f64,
    /// Cost of the current solution after the acceptance step.
    pub current: f64,
    pub best: f64,
}

#[derive(Debug, Clone)]
pub struct VnsResult {
    pub solution: Solution,
    pub eval: SolutionEval,
    /// Cost of the initial solution.
    pub initial: f64,
    /// Iteration at which the returned solution was found (0 = initial).
    pub best_iter: usize,
    pub trace: Vec<TraceRow>,
    pub temperature: Temperature,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

pub const TRACE_HEADER: &str =
    "iteration,f_gen,f_elec,phi_tw,phi_batt,phi_cargo,feasible,accepted,temperature,current,best";

pub fn trace_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{:e},{},{}",
            r.iteration,
            r.f_gen,
            r.f_elec,
            r.violations.tw,
            r.violations.batt,
            r.violations.cargo,
            r.feasible,
            r.accepted,
            r.temperature,
            r.current,
            r.best
        );
    }
    out
}

/// Initial solution by the sweep heuristic, with optimal charge plans.
pub fn sweep_init<R: rand::Rng>(inst: &Instance, k: usize, rng: &mut R) -> Result<Solution> {
    let routes = sweep_routes(inst, k, rng);
    let routes = routes
        .into_iter()
        .map(|nodes| crate::route::Route { nodes })
        .collect();
    Ok(priced_solution(inst, routes)?.0)
}

/// Hybrid VNS/TS: cyclic-exchange shaking, tabu-search intensification and
/// annealing acceptance. Returns the best feasible solution found, or the
/// best by generalized cost when none is feasible.
pub fn vns_ts(inst: &Instance, k: usize, params: &SearchParams) -> Result<VnsResult> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut cache = CostCache::new(inst, params.penalties);
    let mut current = Scored::new(sweep_routes(inst, k, &mut rng), &mut cache);
    let initial = current.f_gen();
    let temperature = Temperature::new(initial, params.kappa, params.vns_iters);
    let mut best = current.clone();
    let mut best_iter = 0;
    let mut tabu = TabuList::new();
    let mut counter = 0;
    let mut trace = Vec::with_capacity(params.vns_iters);

    for it in 1..=params.vns_iters {
        let shaken = cyclic_exchange(inst, &current.routes, params, &mut rng);
        debug_assert!(super::cost::conserves_customers(inst, &shaken));
        let shaken = Scored::new(shaken, &mut cache);
        let local = tabu_search(shaken, params, &mut tabu, &mut rng, &mut cache);
        if local.f_gen() < current.f_gen() - 1e-9 {
            counter = 0;
        } else {
            counter += 1;
        }
        if local.better_than(&best) {
            best = local.clone();
            best_iter = it;
        }
        let temp = temperature.at(it);
        let stop = counter >= params.early_stop;
        let accepted = !stop && accept(current.f_gen(), local.f_gen(), temp, &mut rng);
        let row = TraceRow {
            iteration: it,
            f_gen: local.f_gen(),
            f_elec: local.f_elec(),
            violations: local.violations(),
            feasible: local.feasible(),
            accepted,
            temperature: temp,
            current: if accepted {
                local.f_gen()
            } else {
                current.f_gen()
            },
            best: best.f_gen(),
        };
        trace.push(row);
        if stop {
            break;
        }
        if accepted {
            current = local;
        }
    }

    let (solution, eval) = priced_solution(inst, best.into_routes())?;
    Ok(VnsResult {
        solution,
        eval,
        initial,
        best_iter,
        trace,
        temperature,
        cache_hits: cache.hits,
        cache_misses: cache.misses,
    })
}
