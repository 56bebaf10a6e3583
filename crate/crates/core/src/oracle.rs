//! Exhaustive ground truth for tiny instances.
//!
//! [`schedule_bruteforce`] enumerates every action assignment of a route and
//! judges each one with the verifier alone. [`exact_search`] enumerates every
//! route over every customer subset, keeps the cheapest feasible route per
//! subset and combines subsets into an optimal partition among the vehicles.

use crate::error::{Error, Result};
use crate::eval::evaluate_route;
use crate::instance::{Instance, TOLERANCE};
use crate::route::{compute_metrics, Route, RouteMetrics};
use crate::schedule::{PricedRoute, ScheduleProblem};
use crate::solution::{Action, ChargePlan, Solution};
use crate::verify::check_route;

/// Largest connected-period window [`schedule_bruteforce`] accepts by default.
pub const BRUTEFORCE_WINDOW_CAP: usize = 8;

/// Optimal schedule of a route by exhaustive enumeration. Feasibility is
/// decided by the verifier; the only pruning is by the battery capacity
/// bounds every feasible plan satisfies.
pub fn schedule_bruteforce(
    inst: &Instance,
    route: &Route,
    metrics: &RouteMetrics,
    window_cap: usize,
) -> Result<Option<PricedRoute>> {
    let problem = ScheduleProblem::build(inst, route, metrics)?;
    let windows: Vec<Vec<usize>> = problem
        .windows
        .iter()
        .map(|w| w.clone().collect())
        .collect();
    if let Some(w) = windows
        .iter()
        .map(Vec::len)
        .max()
        .filter(|&w| w > window_cap)
    {
        return Err(Error::GuardExceeded {
            what: "connected-period window",
            actual: w,
            limit: window_cap,
        });
    }
    let mut search = Bruteforce {
        inst,
        route,
        problem: &problem,
        windows: &windows,
        plan: ChargePlan::idle(route.len()),
        best: None,
    };
    search.visit(0, 0, 0.0);
    Ok(search.best.map(|(f_elec, plan)| PricedRoute {
        plan,
        f_elec,
        case: problem.case,
    }))
}

struct Bruteforce<'a> {
    inst: &'a Instance,
    route: &'a Route,
    problem: &'a ScheduleProblem,
    windows: &'a [Vec<usize>],
    plan: ChargePlan,
    best: Option<(f64, ChargePlan)>,
}

impl Bruteforce<'_> {
    fn visit(&mut self, v: usize, net: i64, consumed: f64) {
        let m = self.problem.positions.len();
        if v == m {
            if !self.problem.net.admits(net) {
                return;
            }
            let check = check_route(self.inst, self.route, &self.plan);
            if check.feasible()
                && self
                    .best
                    .as_ref()
                    .map_or(true, |(b, _)| check.objective < b - 1e-9)
            {
                self.best = Some((check.objective, self.plan.clone()));
            }
            return;
        }
        let delta = self.inst.delta();
        let b_full = self.inst.full_charge();
        let consumed = consumed + self.problem.legs[v];
        let battery = b_full - consumed + delta * net as f64;
        if battery < -TOLERANCE {
            return;
        }
        let pos = self.problem.positions[v];
        self.visit(v + 1, net, consumed);
        let window = &self.windows[v];
        for &kind in &self.problem.kinds[v] {
            let room = if kind == Action::Charge {
                b_full - battery
            } else {
                battery
            };
            let cap = ((room + TOLERANCE) / delta).floor().max(0.0) as u32;
            for mask in 1u32..(1 << window.len()) {
                let count = mask.count_ones();
                if count > cap {
                    continue;
                }
                self.plan.visits[pos] = window
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &t)| (t, kind))
                    .collect();
                let net = if kind == Action::Charge {
                    net + count as i64
                } else {
                    net - count as i64
                };
                self.visit(v + 1, net, consumed);
            }
            self.plan.visits[pos].clear();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_customers: usize,
    /// Station visits per route; the schedulers support at most two.
    pub max_stations: usize,
    pub max_routes: usize,
    /// Upper limit on the number of routes priced.
    pub route_budget: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_customers: 7,
            max_stations: 2,
            max_routes: 8,
            route_budget: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchCounters {
    /// Customer sequences enumerated.
    pub sequences: u64,
    /// Routes (sequences with station insertions) priced.
    pub routes: u64,
    pub feasible_routes: u64,
    /// Set-partition states combined.
    pub partitions: u64,
}

/// Cheapest feasible route for every customer subset.
#[derive(Debug, Clone)]
pub struct RouteCatalog {
    customers: usize,
    /// Indexed by customer bitmask (bit `i` is customer `i + 1`).
    pub best: Vec<Option<(f64, Route)>>,
    pub counters: SearchCounters,
}

impl RouteCatalog {
    pub fn build(inst: &Instance, caps: &SearchCaps) -> Result<Self> {
        let n = inst.n_customers();
        if n > caps.max_customers {
            return Err(Error::GuardExceeded {
                what: "customers",
                actual: n,
                limit: caps.max_customers,
            });
        }
        let mut builder = CatalogBuilder {
            inst,
            caps,
            stations: inst.stations().collect(),
            prune_time: inst.satisfies_triangle_inequality(),
            best: vec![None; 1 << n],
            counters: SearchCounters::default(),
            seq: Vec::with_capacity(n),
        };
        builder.evaluate(0)?;
        builder.extend(0, 0.0, inst.node(0).ready)?;
        Ok(Self {
            customers: n,
            best: builder.best,
            counters: builder.counters,
        })
    }

    pub fn customers(&self) -> usize {
        self.customers
    }

    pub fn full_mask(&self) -> usize {
        (1 << self.customers) - 1
    }

    pub fn cost(&self, mask: usize) -> Option<f64> {
        self.best[mask].as_ref().map(|(c, _)| *c)
    }
}

struct CatalogBuilder<'a> {
    inst: &'a Instance,
    caps: &'a SearchCaps,
    stations: Vec<usize>,
    prune_time: bool,
    best: Vec<Option<(f64, Route)>>,
    counters: SearchCounters,
    seq: Vec<usize>,
}

impl CatalogBuilder<'_> {
    /// Extends the current customer sequence; `mask`, `load` and the service
    /// start `clock` of its last customer describe the prefix.
    fn extend(&mut self, mask: usize, load: f64, clock: f64) -> Result<()> {
        let n = self.inst.n_customers();
        let last = self.seq.last().copied().unwrap_or(0);
        for c in 1..=n {
            let bit = 1 << (c - 1);
            if mask & bit != 0 {
                continue;
            }
            let node = self.inst.node(c);
            let load = load + node.demand;
            if load > self.inst.fleet.cargo_capacity + TOLERANCE {
                continue;
            }
            let prev = self.inst.node(last);
            let start = (clock + prev.service + self.inst.travel_time(last, c)).max(node.ready);
            // Station detours only delay a sequence when detours never
            // shorten travel.
            if self.prune_time && start > node.due + TOLERANCE {
                continue;
            }
            self.seq.push(c);
            self.evaluate(mask | bit)?;
            self.extend(mask | bit, load, start)?;
            self.seq.pop();
        }
        Ok(())
    }

    /// Prices the current sequence with every insertion of up to the allowed
    /// number of station visits.
    fn evaluate(&mut self, mask: usize) -> Result<()> {
        self.counters.sequences += 1;
        let k = self.seq.len();
        let mut interior = self.seq.clone();
        self.consider(mask, &interior)?;
        if self.caps.max_stations == 0 {
            return Ok(());
        }
        let stations = self.stations.clone();
        for g1 in 0..=k {
            for &s1 in &stations {
                interior.insert(g1, s1);
                self.consider(mask, &interior)?;
                if self.caps.max_stations >= 2 {
                    // Second station after the first, in a gap at or after g1.
                    for p2 in g1 + 1..=k + 1 {
                        for &s2 in &stations {
                            if p2 == g1 + 1 && s2 == s1 {
                                continue;
                            }
                            interior.insert(p2, s2);
                            self.consider(mask, &interior)?;
                            interior.remove(p2);
                        }
                    }
                }
                interior.remove(g1);
            }
        }
        Ok(())
    }

    fn consider(&mut self, mask: usize, interior: &[usize]) -> Result<()> {
        self.counters.routes += 1;
        if self.counters.routes > self.caps.route_budget {
            return Err(Error::GuardExceeded {
                what: "route budget",
                actual: self.counters.routes as usize,
                limit: self.caps.route_budget as usize,
            });
        }
        let route = Route::from_interior(self.inst, interior);
        let eval = evaluate_route(self.inst, &route)?;
        if !eval.feasible() {
            return Ok(());
        }
        self.counters.feasible_routes += 1;
        if self.best[mask]
            .as_ref()
            .map_or(true, |(b, _)| eval.f_elec < b - 1e-9)
        {
            self.best[mask] = Some((eval.f_elec, route));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    /// `None` when no feasible solution exists.
    pub solution: Option<Solution>,
    pub objective: f64,
    pub counters: SearchCounters,
}

/// Optimal solution with `k` vehicles (idle vehicles may still discharge at
/// the depot).
pub fn exact_search(inst: &Instance, k: usize, caps: &SearchCaps) -> Result<ExactResult> {
    if k > caps.max_routes {
        return Err(Error::GuardExceeded {
            what: "routes",
            actual: k,
            limit: caps.max_routes,
        });
    }
    let catalog = RouteCatalog::build(inst, caps)?;
    exact_from_catalog(inst, &catalog, k)
}

pub fn exact_from_catalog(
    inst: &Instance,
    catalog: &RouteCatalog,
    k: usize,
) -> Result<ExactResult> {
    let full = catalog.full_mask();
    let size = full + 1;
    let mut counters = catalog.counters;
    // g[j][mask]: cheapest cover of `mask` by exactly j routes.
    let mut g = vec![vec![f64::INFINITY; size]; k + 1];
    let mut choice = vec![vec![0usize; size]; k + 1];
    g[0][0] = 0.0;
    for j in 1..=k {
        for mask in 0..size {
            let mut best = f64::INFINITY;
            let mut pick = 0;
            // Take the subset covering the lowest customer of `mask`, or an
            // empty route.
            let low = if mask == 0 {
                0
            } else {
                mask & mask.wrapping_neg()
            };
            let mut sub = mask;
            loop {
                if sub & low == low {
                    counters.partitions += 1;
                    if let Some(c) = catalog.cost(sub) {
                        let rest = g[j - 1][mask ^ sub];
                        if c + rest < best - 1e-9 {
                            best = c + rest;
                            pick = sub;
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
            g[j][mask] = best;
            choice[j][mask] = pick;
        }
    }
    let objective = g[k][full];
    if !objective.is_finite() {
        return Ok(ExactResult {
            solution: None,
            objective,
            counters,
        });
    }
    let mut routes = Vec::with_capacity(k);
    let mut mask = full;
    for j in (1..=k).rev() {
        let sub = choice[j][mask];
        routes.push(
            catalog.best[sub]
                .as_ref()
                .expect("chosen subset is feasible")
                .1
                .clone(),
        );
        mask ^= sub;
    }
    let (solution, _) = crate::eval::priced_solution(inst, routes)?;
    Ok(ExactResult {
        solution: Some(solution),
        objective,
        counters,
    })
}

/// Convenience: brute-force schedule with metrics computed and the default cap.
pub fn bruteforce_route(inst: &Instance, route: &Route) -> Result<Option<PricedRoute>> {
    schedule_bruteforce(
        inst,
        route,
        &compute_metrics(inst, route),
        BRUTEFORCE_WINDOW_CAP,
    )
}
